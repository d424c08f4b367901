pub mod algebra_oracle;
pub mod catalog;
pub mod classifier;
pub mod dvector_analysis;
pub mod error;
pub mod fp_linalg;
pub mod group_engine;
pub mod lie_dimension;
pub mod structure;

pub use error::{Error, Result};

// The book's chapters, compiled as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    pub mod groups {}
    #[doc = include_str!("../../../book/src/dimension.md")]
    pub mod dimension {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/dsequences.md")]
    pub mod dsequences {}
    #[doc = include_str!("../../../book/src/classification.md")]
    pub mod classification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
