//! Crate-wide error type.

use thiserror::Error;

use crate::povm::SicReport;
use crate::states::DensityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("arity error: expected {expected} elements, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("symmetry error: matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("normalization error: vector norm deviates from 1 by {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("SIC violation: {0}")]
    SicViolation(Box<SicReport>),

    #[error("impossible outcome: Tr(E rho E) = {weight:.3e} is below tolerance")]
    ImpossibleOutcome { weight: f64 },

    #[error("underdetermined: reference POVM has rank {rank}, informational completeness requires {needed}")]
    Underdetermined { rank: usize, needed: usize },

    #[error("inconsistent data: probabilities are off the reference range by {residual:.3e}")]
    InconsistentData { residual: f64 },

    #[error("reconstruction infeasible: candidate is not a valid density operator ({report})")]
    ReconstructionInfeasible {
        candidate: crate::linalg::ComplexMatrix,
        report: Box<DensityReport>,
    },
}
