//! Born-rule probabilities, the atomic-instrument post-measurement
//! update, and the reference-measurement probability vector and
//! conditional matrix.

use crate::error::{Error, Result};
use crate::linalg::{hs_inner, ComplexMatrix};
use crate::povm::{Povm, SicPovm};
use crate::states::{DensityOperator, Tolerances};

/// Probability distribution over measurement outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    values: Vec<f64>,
}

impl ProbabilityVector {
    /// Wrap values, requiring each in [-tol_verify, 1 + tol_verify] and a
    /// unit sum within tol_verify. Negativity within tolerance is clamped
    /// to zero.
    pub fn new(values: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Arity {
                expected: 1,
                got: 0,
            });
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > tol.tol_verify {
            return Err(Error::InconsistentData {
                residual: (sum - 1.0).abs(),
            });
        }
        let mut clamped = Vec::with_capacity(values.len());
        for v in values {
            if v < -tol.tol_verify || v > 1.0 + tol.tol_verify {
                return Err(Error::InconsistentData {
                    residual: if v < 0.0 { -v } else { v - 1.0 },
                });
            }
            clamped.push(v.max(0.0));
        }
        Ok(Self { values: clamped })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Row-stochastic matrix of conditional probabilities r(j|i): row i is
/// the outcome distribution of the target measurement given reference
/// outcome i.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl ConditionalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {}x{} conditional matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        for &e in &entries {
            if !e.is_finite() {
                return Err(Error::NonFinite);
            }
            if e < -tol.tol_verify || e > 1.0 + tol.tol_verify {
                return Err(Error::InconsistentData {
                    residual: if e < 0.0 { -e } else { e - 1.0 },
                });
            }
        }
        for i in 0..rows {
            let sum: f64 = entries[i * cols..(i + 1) * cols].iter().sum();
            if (sum - 1.0).abs() > tol.tol_verify {
                return Err(Error::InconsistentData {
                    residual: (sum - 1.0).abs(),
                });
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Born rule: p_j = Tr(F_j rho).
pub fn born(state: &DensityOperator, povm: &Povm) -> Result<ProbabilityVector> {
    if state.dim() != povm.dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} vs POVM dimension {}",
            state.dim(),
            povm.dim()
        )));
    }
    let tol = Tolerances::default();
    let values = povm
        .effects()
        .iter()
        .map(|f| Ok(hs_inner(f, state.matrix())?.re))
        .collect::<Result<Vec<f64>>>()?;
    ProbabilityVector::new(values, &tol)
}

/// Atomic-instrument update: E rho E / Tr(E rho E). Errors when the
/// outcome weight is below tolerance (posterior undefined).
pub fn atomic_update(
    state: &DensityOperator,
    effect: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<DensityOperator> {
    if !effect.is_square() || effect.rows() != state.dim() {
        return Err(Error::Dimension(format!(
            "effect is {}x{}, state dimension is {}",
            effect.rows(),
            effect.cols(),
            state.dim()
        )));
    }
    let ere = effect.matmul(state.matrix())?.matmul(effect)?;
    let weight = ere.trace().re;
    if weight <= tol.tol_verify {
        return Err(Error::ImpossibleOutcome { weight });
    }
    let posterior = ere
        .scale(crate::linalg::C64::new(1.0 / weight, 0.0))
        .hermitize();
    DensityOperator::new(posterior, tol)
}

/// Probability vector of the SIC reference measurement: p(E_i) = Tr(E_i rho).
pub fn reference_probabilities(
    state: &DensityOperator,
    sic: &SicPovm,
) -> Result<ProbabilityVector> {
    born(state, &sic.as_povm())
}

/// Conditional matrix p(F_j | E_i) = Tr(F_j Pi_i). State-independent:
/// the rank-1 atomic update sends every state with nonzero outcome
/// probability to Pi_i, and Pi_i is adopted for zero-probability rows
/// as the continuity convention.
pub fn conditional_matrix(sic: &SicPovm, target: &Povm) -> Result<ConditionalMatrix> {
    if sic.dim() != target.dim() {
        return Err(Error::Dimension(format!(
            "SIC dimension {} vs target dimension {}",
            sic.dim(),
            target.dim()
        )));
    }
    let tol = Tolerances::default();
    let rows = sic.len();
    let cols = target.len();
    let mut entries = Vec::with_capacity(rows * cols);
    for pi in sic.projectors() {
        for f in target.effects() {
            entries.push(hs_inner(f, pi)?.re);
        }
    }
    ConditionalMatrix::new(rows, cols, entries, &tol)
}
