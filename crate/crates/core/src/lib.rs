//! Exact symbolic workbench for bispectral operators.
//!
//! The crate is layered bottom-up:
//!
//! - [`scalar`]: rational functions over the rationals, the coefficient fields.
//! - [`ore`]: normal-form operators in differential, q-dilation and shift Ore algebras.
//! - [`presented`]: generator words, realizations and bispectral anti-isomorphisms.
//! - [`twist`]: iterated commutators and locally nilpotent ad-exponentials.
//! - [`darboux`]: factorization checks and bispectral Darboux transformations.
//! - [`wave`]: truncated eigenfunctions and exact residual checks.
//! - [`text`] and [`files`]: expression language, canonical printing, triple and job files.

pub mod darboux;
pub mod error;
pub mod files;
pub mod ore;
pub mod presented;
pub mod scalar;
pub mod text;
pub mod twist;
pub mod wave;

pub use error::{Error, Result};
pub use ore::{OreOperator, OreRule};
pub use scalar::{Scalar, Symbol};
