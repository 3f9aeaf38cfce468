//! Exact integer linear algebra.

pub mod boxsearch;
pub mod group;
#[allow(clippy::module_inception)]
pub mod lattice;
pub mod matrix;
pub mod monomial;

pub use boxsearch::{box_coefficients, box_lattice_point, coefficient_bounds};
pub use group::{cofinite_sublattice, quotient_group, CosetLabeling, FiniteAbelianGroup};
pub use lattice::{is_unimodular, kernel_basis, lawrence_lift, Lattice};
pub use matrix::IntegerMatrix;
pub use monomial::LaurentMonomial;

use num_bigint::BigInt;

/// Converts a slice of machine integers to big integers.
pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
