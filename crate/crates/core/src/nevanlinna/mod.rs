//! Value distribution of entire curves `f : C -> P^n` given by explicit
//! component expressions: characteristic, counting and proximity functions,
//! Wronskians and second-main-theorem margins.
//!
//! Numerical work is done in `f64`; exact expression arithmetic decides
//! identities such as `Q(f) = 0` or a vanishing Wronskian.

mod curve;
mod expr;
mod functions;
mod quadrature;
mod zeros;

pub use curve::{wronskian, EntireCurve};
pub use expr::{gauss, gauss_int, gauss_to_c64, ExpPoly, GaussRat, ZPoly};
pub use functions::{
    characteristic_t, counting_from_zeros, counting_n, fmt_residual, general_smt_margins, independent_subsets,
    mean_log_abs, mean_log_norm, proximity_m, radius_grid, FmtReport, FmtRow, GeneralSmtRow, KINKED_TOLERANCE,
};
pub use quadrature::{circle_mean, CircleMean, QuadratureConfig};
pub use zeros::{polynomial_zeros, zeros_in_disk, ZeroEntry, ZeroList};
