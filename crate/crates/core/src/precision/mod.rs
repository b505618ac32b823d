//! Extended-precision scalars and the dense kernels built on them.

mod matrix;
mod poly;
mod real;

pub use matrix::{
    back_substitute_transposed, cholesky, forward_substitute, lu_logdet, sym_eigen, LogDet, Matrix, SymEigen,
    SymMatrix, JACOBI_MAX_SWEEPS, ZERO_DET_SLACK_BITS,
};
pub use poly::{poly_real_roots, PolyRoot, Polynomial};
pub use real::{dot, set_working_precision, working_precision, BigReal, DEFAULT_PRECISION, MIN_PRECISION};
