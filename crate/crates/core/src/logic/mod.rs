//! Many-sorted first-order syntax, finite structures and evaluation.
//!
//! Everything here is an immutable value. Reasoning code elsewhere in the
//! crate only accepts quantifier-free formulas; quantifiers exist so that
//! axioms and cardinality sentences can be evaluated on finite structures.

mod arrangement;
mod builders;
mod interp;
pub mod normal;
mod syntax;

pub use arrangement::{arrangement_formula, enumerate_arrangements, induced_arrangement, Arrangement};
pub use builders::{cardinality_sentence, cycle_formula, cycle_formula_with, distinct_formula, CardKind};
pub use interp::{evaluate, FiniteInterpretation};
pub use syntax::{
    Atom, Formula, FreshVars, FuncDecl, FunctionFamily, PredDecl, Signature, Sort, Term, Var, FRESH_PREFIX, FUNC_F,
    SIGMA1, SIGMA2,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("sort mismatch: expected {expected}, found {found}")]
    SortMismatch { expected: Sort, found: Sort },
    #[error("variables of different sorts: {0} and {1}")]
    MixedSorts(Var, Var),
    #[error("{symbol} expects {expected} arguments, got {found}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("signature has no sorts")]
    NoSorts,
    #[error("function `{0}` has no table in this interpretation")]
    MissingFunction(String),
    #[error("predicate `{0}` has no table in this interpretation")]
    MissingPredicate(String),
    #[error("variable `{0}` is unassigned")]
    Unassigned(Var),
    #[error("element {element} out of range for sort {sort} of size {size}")]
    ElementOutOfRange { sort: Sort, element: usize, size: usize },
    #[error("table for `{symbol}` has {found} entries, expected {expected}")]
    TableSize { symbol: String, expected: usize, found: usize },
    #[error("domain of sort {0} is empty")]
    EmptyDomain(Sort),
    #[error("cardinality bound must be positive")]
    ZeroCardinality,
    #[error("cycle length must be positive")]
    ZeroCycle,
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("malformed arrangement: {0}")]
    BadArrangement(String),
}
