//! Executable checks for second-main-theorem style statements about
//! holomorphic curves and hypersurfaces in subgeneral position.
//!
//! The crate has two halves. The algebraic half ([`variety`], [`weights`],
//! [`filtration`]) works with exact rationals and certifies statements by
//! graded linear algebra. The analytic half ([`nevanlinna`]) evaluates
//! characteristic, counting and proximity functions of entire curves
//! `C -> P^n` by periodic quadrature. [`smt`] ties both together into
//! truncation-level calculators and margin tables.

pub mod algebra;
pub mod error;
pub mod filtration;
pub mod nevanlinna;
pub mod scenario;
pub mod selftest;
pub mod smt;
pub mod variety;
pub mod weights;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
