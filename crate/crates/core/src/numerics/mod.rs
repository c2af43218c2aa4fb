//! Complex linear algebra shared by every other module.

mod linalg;
mod matrix;
pub mod random;
mod state;

pub(crate) use linalg::svd;
pub use linalg::{
    eig_hermitian, eig_hermitian_with_tol, fourier_matrix, schmidt, unitary_with_first_column, EigenDecomposition,
    SchmidtDecomposition, HERMITIAN_TOL,
};
pub use matrix::{gram, inner, norm_sqr, tensor, tensor_vec, ComplexMatrix};
pub use random::{haar_state, haar_state_from_seed, haar_unitary, haar_unitary_from_seed};
pub use state::{partial_trace, partial_trace_matrix, DensityMatrix, PureState, DENSITY_TOL, STATE_NORM_TOL};

pub use num_complex::Complex64;
