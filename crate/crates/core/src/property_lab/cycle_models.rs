//! The cycle models `A_2`, `A_3`, `A_6`: a single cycle `c_0 → c_1 → …`
//! with `x` marking `c_0`.

use serde::Serialize;

use super::PropertyError;
use crate::logic::{cycle_formula, FiniteInterpretation, Formula, Sort, Term, Var, FUNC_F, SIGMA1};
use crate::theories::FunctionalGraph;

/// One cycle of length `n` with `x` assigned to `c_0`.
pub fn cycle_model(n: usize) -> Result<FiniteInterpretation, PropertyError> {
    let mut m = FunctionalGraph::cycle(n).to_interpretation();
    let sort = Sort::new(SIGMA1);
    m.set_element_names(&sort, (0..n).map(|k| format!("c{k}")).collect())?;
    m.assign(&Var::new("x", sort), 0)?;
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct SixFoldRow {
    pub name: String,
    pub size: usize,
    /// `f⁶(x) = x`.
    pub six_fold_return: bool,
    /// `cycle_6(x)`.
    pub cycle_six: bool,
}

/// Evaluates `f⁶(x)=x` and `cycle_6(x)` on `A_2`, `A_3` and `A_6`.
pub fn six_fold_models() -> Result<Vec<SixFoldRow>, PropertyError> {
    let x = Var::new("x", Sort::new(SIGMA1));
    let six = Formula::eq(Term::iterate(FUNC_F, 6, Term::var(&x)), Term::var(&x));
    let cycle6 = cycle_formula(6, &x)?;
    [2, 3, 6]
        .into_iter()
        .map(|n| {
            let m = cycle_model(n)?;
            Ok(SixFoldRow {
                name: format!("A_{n}"),
                size: n,
                six_fold_return: m.evaluate(&six)?,
                cycle_six: m.evaluate(&cycle6)?,
            })
        })
        .collect()
}
