use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{parse_signature, print_signature, ParseError, ParseErrorKind};
use crate::finite_model::{Card, CardinalityVector, MinimalModelSet, SatVerdict};
use crate::logic::{FiniteInterpretation, Var};

/// On-disk shape of an `.itp.json` file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpretationDoc {
    pub signature: String,
    pub domains: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub predicates: BTreeMap<String, Vec<bool>>,
    #[serde(default)]
    pub assignment: BTreeMap<String, AssignedElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignedElement {
    pub sort: String,
    pub element: usize,
}

pub fn interpretation_to_json(interp: &FiniteInterpretation) -> Value {
    let sig = interp.signature();
    let doc = InterpretationDoc {
        signature: print_signature(sig),
        domains: sig
            .sorts()
            .iter()
            .map(|s| (s.name().to_string(), interp.element_names(s).expect("own sort").to_vec()))
            .collect(),
        functions: interp
            .function_names()
            .map(|f| (f.to_string(), interp.function_table(f).expect("listed").to_vec()))
            .collect(),
        predicates: interp
            .predicate_names()
            .map(|p| (p.to_string(), interp.predicate_table(p).expect("listed").to_vec()))
            .collect(),
        assignment: interp
            .assignment()
            .iter()
            .map(|(v, &e)| (v.name().to_string(), AssignedElement { sort: v.sort().name().to_string(), element: e }))
            .collect(),
    };
    serde_json::to_value(doc).expect("plain data serializes")
}

fn json_error(message: impl Into<String>) -> ParseError {
    ParseError { kind: ParseErrorKind::Json, line: 1, col: 1, message: message.into() }
}

pub fn interpretation_from_json(text: &str) -> Result<FiniteInterpretation, ParseError> {
    let doc: InterpretationDoc = serde_json::from_str(text)
        .map_err(|e| ParseError { kind: ParseErrorKind::Json, line: e.line(), col: e.column(), message: e.to_string() })?;
    let sig = parse_signature(&doc.signature)?;
    let mut sizes = Vec::new();
    for s in sig.sorts() {
        let names = doc.domains.get(s.name()).ok_or_else(|| json_error(format!("no domain for sort {s}")))?;
        sizes.push(names.len());
    }
    let bad = |e: crate::logic::LogicError| json_error(e.to_string());
    let mut interp = FiniteInterpretation::new(sig.clone(), &sizes).map_err(bad)?;
    for s in sig.sorts() {
        interp.set_element_names(s, doc.domains[s.name()].clone()).map_err(bad)?;
    }
    for (f, table) in doc.functions {
        interp.set_function(&f, table).map_err(bad)?;
    }
    for (p, table) in doc.predicates {
        interp.set_predicate(&p, table).map_err(bad)?;
    }
    for (name, a) in doc.assignment {
        let sort = sig.sort(&a.sort).ok_or_else(|| json_error(format!("unknown sort {}", a.sort)))?;
        interp.assign(&Var::new(name, sort.clone()), a.element).map_err(bad)?;
    }
    if !interp.is_total() {
        return Err(json_error("some declared symbol has no table"));
    }
    Ok(interp)
}

pub fn vector_to_json(v: &CardinalityVector) -> Value {
    let map: serde_json::Map<String, Value> = v
        .iter()
        .map(|(s, c)| {
            let val = match c {
                Card::Finite(n) => json!(n),
                Card::Aleph0 => json!("aleph0"),
            };
            (s.name().to_string(), val)
        })
        .collect();
    Value::Object(map)
}

pub fn mm_to_json(mm: &MinimalModelSet) -> Value {
    Value::Array(mm.iter().map(vector_to_json).collect())
}

/// `{"verdict": ..., "model": ..., "bound": ...}`.
pub fn verdict_to_json(v: &SatVerdict) -> Value {
    match v {
        SatVerdict::Sat(model) => json!({"verdict": "sat", "model": interpretation_to_json(model), "bound": null}),
        SatVerdict::UnsatUpTo(bound) => json!({"verdict": "unsat-up-to", "model": null, "bound": vector_to_json(bound)}),
        SatVerdict::Unsat => json!({"verdict": "unsat", "model": null, "bound": null}),
    }
}
