//! Exact scalars over `Q` and `Q(√d)`, dense matrices, and the integer
//! lattice algorithms (HNF, SNF, kernels, saturation, basis completion)
//! the rest of the crate is built on.

mod lattice;
mod matrix;
mod scalar;

pub use lattice::{
    extend_summand_basis, extend_to_unimodular, hnf, integral_solution_lattice, left_kernel, saturate, snf,
    solve_left, unimodular_inverse, IntLattice, LatticeError, SmithForm,
};
pub use matrix::{IntMatrix, Matrix, ScalarMatrix};
pub use scalar::{is_squarefree, Scalar, ScalarError};
