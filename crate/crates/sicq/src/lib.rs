//! SIC-POVM construction and QBist probability-update machinery.
//!
//! The crate covers the full pipeline from reference-measurement
//! construction to state reconstruction:
//!
//! - [`linalg`]: dense complex matrices, Hilbert-Schmidt inner product,
//!   Hermitian eigendecomposition.
//! - [`states`]: density operators, state vectors, seeded random states.
//! - [`povm`]: POVM validity, informational completeness, SIC verification.
//! - [`search`]: Weyl-Heisenberg displacement operators and numerical
//!   fiducial search by frame-potential minimization.
//! - [`measurement`]: Born-rule probabilities and the atomic-instrument
//!   post-measurement update.
//! - [`update`]: classical and QBist formulas of total probability, and
//!   state reconstruction from informationally complete statistics.
//! - [`doc`]: JSON document formats used by the `sicq` CLI.

pub mod doc;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod povm;
pub mod search;
pub mod states;
pub mod update;

pub use error::{Error, Result};
pub use linalg::{eigen_hermitian, hs_inner, ComplexMatrix, EigenDecomposition, C64};
pub use measurement::{
    atomic_update, born, conditional_matrix, reference_probabilities, ConditionalMatrix,
    ProbabilityVector,
};
pub use povm::{
    check_sic, is_informationally_complete, sic_effects, validate_povm, Povm, SicPovm, SicReport,
};
pub use search::{
    displacement_operators, find_fiducial, frame_potential, frame_potential_bound,
    known_fiducial, wh_orbit,
    DisplacementSet, SearchConfig, SearchResult, SearchStatus,
};
pub use states::{
    projector_from_vector, random_density, validate_density, DensityOperator, DensityReport,
    StateVector, Tolerances,
};
pub use update::{
    classical_ftp, compare_ftp, qbist_ftp, quasi_priors, reconstruct_from_sic,
    reconstruct_linear_inversion, FtpComparison, QuasiPriorVector,
};
