//! A laboratory for many-sorted theories used in SMT theory combination.

pub mod logic;
pub mod finite_model;
pub mod textio;
pub mod theories;
pub mod witness;
pub mod corpus;
pub mod minimal_model;
pub mod property_lab;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/theories.md")]
    mod theories {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    mod witnesses {}
    #[doc = include_str!("../../../book/src/minimal-models.md")]
    mod minimal_models {}
    #[doc = include_str!("../../../book/src/properties.md")]
    mod properties {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
