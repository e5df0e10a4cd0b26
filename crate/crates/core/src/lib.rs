//! Hilbert functions of fat-point schemes in the projective plane.
//!
//! The crate computes `H(t)` of a fat-point scheme as the rank of a matrix
//! of derivative conditions, over large prime fields (with several primes
//! cross-checking each other) or exactly over the rationals. It builds the
//! line-arrangement configurations `C_d` and `C_{d,r}`, samples random and
//! structured point sets, and runs seeded verification suites that check
//! the known statements about double points on 11 points.
//!
//! All finite-field results are randomized certificates of the
//! characteristic-zero values, not proofs.

pub mod error;
pub mod families;
pub mod field;
pub mod format;
pub mod hilbert;
pub mod linalg;
pub mod plane;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldSpec, PrimeField, Scalar};
pub use format::ConfigFile;
pub use hilbert::{
    ah_upper_bound, difference_function, dominates, double, generic_hf, h2c51_table,
    hilbert_function, hilbert_function_exact, theorem1_formula, DifferenceFunction, FatPointScheme,
    HilbertFunction,
};
pub use linalg::{rank_exact, rank_modp, DenseMatrix};
pub use plane::{
    build_c_d, build_c_dr, collinear, intersect, max_on_curve, sample_general_lines,
    sample_random_points, Configuration, LineForm, ProjectivePoint, Provenance,
};
