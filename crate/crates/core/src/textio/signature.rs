use super::sexpr::{error, parse_all, SExpr};
use super::{ParseError, ParseErrorKind};
use crate::logic::Signature;

/// Parses declarations such as `(sort sigma1) (fun f (sigma1) sigma1)
/// (pred P (sigma1)) (pred-family P) (fun-family f)`.
pub fn parse_signature(text: &str) -> Result<Signature, ParseError> {
    let mut sig = Signature::new();
    for decl in parse_all(text)? {
        let SExpr::List(items, pos) = &decl else {
            return Err(error(ParseErrorKind::Syntax, decl.pos(), "expected a declaration"));
        };
        let names: Vec<Option<&str>> = items.iter().map(SExpr::as_atom).collect();
        let logic = |e: crate::logic::LogicError| {
            let kind = match e {
                crate::logic::LogicError::UnknownSort(_) => ParseErrorKind::UnknownSymbol,
                _ => ParseErrorKind::Syntax,
            };
            error(kind, *pos, e.to_string())
        };
        match names.as_slice() {
            [Some("sort"), Some(name)] => {
                sig.add_sort(name).map_err(logic)?;
            }
            [Some("fun"), Some(name), None, Some(result)] => {
                let args = sort_list(&items[2])?;
                sig.add_function(name, &args, result).map_err(logic)?;
            }
            [Some("pred"), Some(name), None] => {
                let args = sort_list(&items[2])?;
                sig.add_predicate(name, &args).map_err(logic)?;
            }
            [Some("pred-family"), Some(prefix)] => sig.set_predicate_family(prefix),
            [Some("fun-family"), Some(prefix)] => sig.set_function_family(prefix).map_err(logic)?,
            _ => return Err(error(ParseErrorKind::Syntax, *pos, "malformed declaration")),
        }
    }
    Ok(sig)
}

fn sort_list(e: &SExpr) -> Result<Vec<&str>, ParseError> {
    let SExpr::List(items, _) = e else {
        return Err(error(ParseErrorKind::Syntax, e.pos(), "expected a sort list"));
    };
    items
        .iter()
        .map(|i| i.as_atom().ok_or_else(|| error(ParseErrorKind::Syntax, i.pos(), "expected a sort name")))
        .collect()
}

/// One declaration per line; re-parses to an equal signature.
pub fn print_signature(sig: &Signature) -> String {
    let mut lines = Vec::new();
    for s in sig.sorts() {
        lines.push(format!("(sort {s})"));
    }
    for f in sig.functions() {
        let args: Vec<&str> = f.args.iter().map(|s| s.name()).collect();
        lines.push(format!("(fun {} ({}) {})", f.name, args.join(" "), f.result));
    }
    for p in sig.predicates() {
        let args: Vec<&str> = p.args.iter().map(|s| s.name()).collect();
        lines.push(format!("(pred {} ({}))", p.name, args.join(" ")));
    }
    if let Some(prefix) = sig.predicate_family() {
        lines.push(format!("(pred-family {prefix})"));
    }
    if let Some(fam) = sig.function_family() {
        lines.push(format!("(fun-family {})", fam.prefix));
    }
    lines.join("\n")
}
