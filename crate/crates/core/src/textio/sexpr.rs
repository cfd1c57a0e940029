use super::{ParseError, ParseErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            SExpr::List(..) => None,
        }
    }
}

pub fn error(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError { kind, line: pos.line, col: pos.col, message: message.into() }
}

/// Parses every top-level expression. `;` starts a comment running to the
/// end of the line.
pub fn parse_all(text: &str) -> Result<Vec<SExpr>, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), idx: 0, pos: Pos { line: 1, col: 1 } };
    let mut out = Vec::new();
    loop {
        p.skip_trivia();
        if p.peek().is_none() {
            return Ok(out);
        }
        out.push(p.expr()?);
    }
}

struct Parser {
    chars: Vec<char>,
    idx: usize,
    pos: Pos,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn expr(&mut self) -> Result<SExpr, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        match self.peek() {
            None => Err(error(ParseErrorKind::UnexpectedEof, start, "unexpected end of input")),
            Some(')') => Err(error(ParseErrorKind::Lex, start, "unbalanced `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => {
                            return Err(error(
                                ParseErrorKind::UnexpectedEof,
                                self.pos,
                                format!("unclosed `(` opened at {}:{}", start.line, start.col),
                            ))
                        }
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items, start));
                        }
                        Some(_) => items.push(self.expr()?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    if c.is_control() {
                        return Err(error(ParseErrorKind::Lex, self.pos, format!("control character {c:?}")));
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(SExpr::Atom(s, start))
            }
        }
    }
}
