//! Exact periods, mirror maps, Yukawa couplings and genus zero BPS invariants
//! for two-parameter elliptically fibred Calabi-Yau families, together with
//! the tools to recognise their fibre limits as quasi-modular forms.

pub mod coupling;
pub mod error;
pub mod hypergeo;
pub mod linalg;
pub mod mirror;
pub mod modular;
pub mod periods;
pub mod rat;
pub mod series;
pub mod weyl;

pub use error::{Error, Result};
pub use rat::Rat;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/periods.md")]
    mod periods {}
    #[doc = include_str!("../../../book/src/mirror.md")]
    mod mirror {}
    #[doc = include_str!("../../../book/src/couplings.md")]
    mod couplings {}
    #[doc = include_str!("../../../book/src/modular.md")]
    mod modular {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
