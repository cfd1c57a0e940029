use super::{ParseError, ParseErrorKind};
use crate::logic::{Arrangement, Signature, Var};

/// Parses `x=y;z`. A variable is `name` (of the signature's first sort) or
/// `name:sort`.
pub fn parse_arrangement(text: &str, sig: &Signature) -> Result<Arrangement, ParseError> {
    let err = |kind, message: String| ParseError { kind, line: 1, col: 1, message };
    let default = sig.default_sort().ok_or_else(|| err(ParseErrorKind::Sort, "signature has no sorts".into()))?;
    let mut blocks = Vec::new();
    for block in text.split(';').map(str::trim).filter(|b| !b.is_empty()) {
        let mut vars = Vec::new();
        for item in block.split('=').map(str::trim) {
            let (name, sort) = match item.split_once(':') {
                Some((n, s)) => {
                    let sort = sig.sort(s.trim()).ok_or_else(|| err(ParseErrorKind::Sort, format!("unknown sort `{s}`")))?;
                    (n.trim(), sort.clone())
                }
                None => (item, default.clone()),
            };
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || "();=".contains(c)) {
                return Err(err(ParseErrorKind::Syntax, format!("bad variable name `{name}`")));
            }
            vars.push(Var::new(name, sort));
        }
        blocks.push(vars);
    }
    Arrangement::new(blocks).map_err(|e| err(ParseErrorKind::Sort, e.to_string()))
}
