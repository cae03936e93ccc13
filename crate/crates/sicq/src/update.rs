//! Classical and QBist formulas of total probability, their deviation on
//! shared inputs, and state reconstruction from informationally complete
//! statistics.
//!
//! The central identity: with reference probabilities p(E_i) taken from a
//! SIC measurement and conditionals p(F_j|E_i) from the atomic update,
//!
//!   q_j = sum_i ((d+1) p(E_i) - 1/d) p(F_j|E_i)
//!
//! reproduces the Born probabilities Tr(F_j rho) exactly, while the
//! classical rule q_j = sum_i p(E_i) p(F_j|E_i) does not.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{eigen_symmetric_real, hs_inner, ComplexMatrix, C64};
use crate::measurement::{born, conditional_matrix, reference_probabilities, ConditionalMatrix, ProbabilityVector};
use crate::povm::{is_informationally_complete, Povm, SicPovm};
use crate::states::{validate_density, DensityOperator, Tolerances};

/// Affinely rescaled reference probabilities (d+1) p_i - 1/d. Components
/// may be negative; they always sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiPriorVector {
    values: Vec<f64>,
}

impl QuasiPriorVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Map reference probabilities to quasi-prior coefficients.
pub fn quasi_priors(priors: &ProbabilityVector, d: usize) -> Result<QuasiPriorVector> {
    if priors.len() != d * d {
        return Err(Error::Dimension(format!(
            "expected {} reference probabilities for dimension {d}, got {}",
            d * d,
            priors.len()
        )));
    }
    let df = d as f64;
    Ok(QuasiPriorVector {
        values: priors
            .values()
            .iter()
            .map(|&p| (df + 1.0) * p - 1.0 / df)
            .collect(),
    })
}

/// Classical formula of total probability: q_j = sum_i p_i r(j|i).
pub fn classical_ftp(priors: &ProbabilityVector, cond: &ConditionalMatrix) -> Result<Vec<f64>> {
    if priors.len() != cond.rows() {
        return Err(Error::Dimension(format!(
            "{} priors vs {} conditional rows",
            priors.len(),
            cond.rows()
        )));
    }
    let mut out = vec![0.0; cond.cols()];
    for (i, &p) in priors.values().iter().enumerate() {
        for (j, out_j) in out.iter_mut().enumerate() {
            *out_j += p * cond.get(i, j);
        }
    }
    Ok(out)
}

/// QBist generalized formula of total probability:
/// q_j = sum_i ((d+1) p_i - 1/d) r(j|i).
pub fn qbist_ftp(
    priors: &ProbabilityVector,
    cond: &ConditionalMatrix,
    d: usize,
) -> Result<Vec<f64>> {
    if priors.len() != d * d || cond.rows() != d * d {
        return Err(Error::Dimension(format!(
            "expected {} priors and conditional rows for dimension {d}, got {} and {}",
            d * d,
            priors.len(),
            cond.rows()
        )));
    }
    let quasi = quasi_priors(priors, d)?;
    let mut out = vec![0.0; cond.cols()];
    for (i, &w) in quasi.values().iter().enumerate() {
        for (j, out_j) in out.iter_mut().enumerate() {
            *out_j += w * cond.get(i, j);
        }
    }
    Ok(out)
}

/// Side-by-side run of the Born rule and both total-probability formulas
/// on the same reference data.
#[derive(Debug, Clone)]
pub struct FtpComparison {
    pub born: ProbabilityVector,
    pub classical: Vec<f64>,
    pub qbist: Vec<f64>,
    /// max_j |classical_j - born_j|
    pub deviation_classical: f64,
    /// max_j |qbist_j - born_j|
    pub deviation_qbist: f64,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Run the reference-measurement pipeline: Born probabilities of the
/// target, classical FTP, and QBist FTP through the SIC reference.
pub fn compare_ftp(
    state: &DensityOperator,
    sic: &SicPovm,
    target: &Povm,
) -> Result<FtpComparison> {
    let born_p = born(state, target)?;
    let priors = reference_probabilities(state, sic)?;
    let cond = conditional_matrix(sic, target)?;
    let classical = classical_ftp(&priors, &cond)?;
    let qbist = qbist_ftp(&priors, &cond, sic.dim())?;
    let deviation_classical = max_abs_diff(&classical, born_p.values());
    let deviation_qbist = max_abs_diff(&qbist, born_p.values());
    Ok(FtpComparison {
        born: born_p,
        classical,
        qbist,
        deviation_classical,
        deviation_qbist,
    })
}

/// Reconstruct a state from SIC reference probabilities:
/// rho = sum_i ((d+1) p_i - 1/d) Pi_i. Errors when the candidate is not
/// a valid density operator (the probabilities fit no state).
pub fn reconstruct_from_sic(
    priors: &ProbabilityVector,
    sic: &SicPovm,
    tol: &Tolerances,
) -> Result<DensityOperator> {
    let d = sic.dim();
    let quasi = quasi_priors(priors, d)?;
    let mut candidate = ComplexMatrix::zeros(d, d);
    for (w, pi) in quasi.values().iter().zip(sic.projectors()) {
        candidate = candidate.add(&pi.scale(C64::new(*w, 0.0)))?;
    }
    let candidate = candidate.hermitize();
    let report = validate_density(&candidate, tol)?;
    if !report.pass {
        return Err(Error::ReconstructionInfeasible {
            candidate,
            report: Box::new(report),
        });
    }
    DensityOperator::new(candidate, tol)
}

/// Reconstruct a state from the outcome probabilities of an arbitrary
/// informationally complete POVM by least squares over operator space:
/// solve Tr(G_i rho) = p_i through the Gram matrix of the effects under
/// the Hilbert-Schmidt inner product.
pub fn reconstruct_linear_inversion(
    probs: &ProbabilityVector,
    reference: &Povm,
    tol: &Tolerances,
) -> Result<DensityOperator> {
    let d = reference.dim();
    let n = reference.len();
    if probs.len() != n {
        return Err(Error::Dimension(format!(
            "{} probabilities vs {} effects",
            probs.len(),
            n
        )));
    }
    let (ic, rank) = is_informationally_complete(reference);
    if !ic {
        return Err(Error::Underdetermined {
            rank,
            needed: d * d,
        });
    }
    // The minimum-norm solution lives in the real span of the effects:
    // rho = sum_i a_i G_i with S a = p, S the (real) Gram matrix.
    let gram = DMatrix::from_fn(n, n, |i, j| {
        hs_inner(&reference.effects()[i], &reference.effects()[j])
            .expect("validated dimensions")
            .re
    });
    let p = DVector::from_column_slice(probs.values());
    let (eigenvalues, vectors) = eigen_symmetric_real(&gram);
    let largest = eigenvalues.last().copied().unwrap_or(0.0);
    let cutoff = (d * d) as f64 * f64::EPSILON * largest;
    // pseudo-inverse solve with the same spectral cutoff as the rank test
    let mut coeffs = DVector::zeros(n);
    for k in 0..n {
        let lambda = eigenvalues[k];
        if lambda.abs() <= cutoff {
            continue;
        }
        let v_k = vectors.column(k);
        let projection = v_k.dot(&p) / lambda;
        coeffs += v_k * projection;
    }
    let mut candidate = ComplexMatrix::zeros(d, d);
    for (i, g) in reference.effects().iter().enumerate() {
        candidate = candidate.add(&g.scale(C64::new(coeffs[i], 0.0)))?;
    }
    let candidate = candidate.hermitize();
    let mut residual: f64 = 0.0;
    for (i, g) in reference.effects().iter().enumerate() {
        let fit = hs_inner(g, &candidate)?.re;
        residual = residual.max((fit - probs.values()[i]).abs());
    }
    if residual > tol.tol_verify {
        return Err(Error::InconsistentData { residual });
    }
    DensityOperator::new(candidate, tol)
}
