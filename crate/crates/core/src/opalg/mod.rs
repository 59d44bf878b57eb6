//! Dense complex operator algebra for small bipartite systems.

mod basis;
mod eig;
mod matrix;
mod partial;
pub mod random;
pub mod serial;

pub use basis::{
    generalized_expand, local_basis, pauli_expand, BasisElement, PauliExpansion, ProductExpansion,
};
pub use eig::{
    eigvalsh, generalized_herm_eig, herm_eig, min_eigenvalue, numerical_rank, numerical_rank_real,
    schmidt, singular_values_real, HermEig, SchmidtForm, DEGENERACY_TOL,
};
pub use matrix::{
    c, cr, kron, paulis, sigma_0, sigma_x, sigma_y, sigma_z, BipartiteDims, ComplexMatrix, Ket,
    ProductPair, Subsystem, HERMITIAN_TOL,
};
pub use partial::{hs_inner, hs_norm, partial_trace, partial_transpose, trace_product};
