//! Dense complex linear algebra kernel: validated matrix/vector types, complex Schur form,
//! spectral decomposition of unitaries, Gram-Schmidt, Haar sampling and seeded streams.

mod gram;
mod haar;
pub mod io;
mod rng;
mod schur;
mod spectral;
mod types;

pub use gram::{default_rank_tol, orthonormal_basis_of_span, RANK_TOL_FACTOR};
pub(crate) use gram::{extend_orthonormal, orthonormalize, project, projection_norm};
pub use haar::{haar_orthogonal, haar_orthogonal_with, haar_unitary, haar_unitary_with};
pub use rng::{derive_seed, SeedStream};
pub use schur::{complex_schur, eigenvalues, Schur};
pub use spectral::{
    arc_distance, default_cluster_tol, spectral_decomposition, EigenCluster, SpectralDecomposition,
};
pub use types::{
    unitarity_defect, CMatrix, CVector, OrthogonalMatrix, UnitaryMatrix, C64, DEFAULT_UNITARITY_TOL,
};
