//! Small dense linear algebra: complex and real eigenvalue solvers and a real
//! linear-system solver.

mod eigen;
mod real_eigen;
mod solve;

pub use eigen::{eigenvalues, ComplexMatrix};
pub use real_eigen::real_eigenvalues;
pub use solve::solve_dense;
