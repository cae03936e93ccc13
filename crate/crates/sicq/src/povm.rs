//! POVM validity, informational completeness, and SIC verification.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{eigen_hermitian, eigen_symmetric_real, hs_inner, ComplexMatrix, C64};
use crate::states::{projector_from_vector, StateVector, Tolerances};

/// Ordered family of effects summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let report = validate_povm(&effects, tol)?;
        if !report.pass {
            return Err(Error::Dimension(format!(
                "invalid POVM: completeness residual {:.3e}, min effect eigenvalue {:.3e}",
                report.completeness_residual, report.min_effect_eigenvalue
            )));
        }
        let dim = effects[0].rows();
        Ok(Self { dim, effects })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Projective measurement in the computational basis.
    pub fn computational_basis(dim: usize) -> Self {
        let effects = (0..dim)
            .map(|i| projector_from_vector(&StateVector::basis(dim, i)))
            .collect();
        Self { dim, effects }
    }
}

/// Residuals from POVM validation.
#[derive(Debug, Clone)]
pub struct PovmReport {
    pub pass: bool,
    /// max |sum_j F_j - I| over entries.
    pub completeness_residual: f64,
    pub max_hermitian_residual: f64,
    /// Smallest eigenvalue over all effects.
    pub min_effect_eigenvalue: f64,
    /// Smallest eigenvalue per effect, in outcome order.
    pub effect_min_eigenvalues: Vec<f64>,
}

/// Check the POVM invariants: each effect Hermitian and PSD, effects sum
/// to the identity.
pub fn validate_povm(effects: &[ComplexMatrix], tol: &Tolerances) -> Result<PovmReport> {
    if effects.is_empty() {
        return Err(Error::Arity {
            expected: 1,
            got: 0,
        });
    }
    let dim = effects[0].rows();
    for e in effects {
        if !e.is_square() || e.rows() != dim {
            return Err(Error::Dimension(format!(
                "all effects must be {dim}x{dim}, got {}x{}",
                e.rows(),
                e.cols()
            )));
        }
    }
    let mut max_hermitian_residual: f64 = 0.0;
    let mut effect_min_eigenvalues = Vec::with_capacity(effects.len());
    for e in effects {
        max_hermitian_residual = max_hermitian_residual.max(e.hermiticity_residual());
        let eig = eigen_hermitian(&e.hermitize(), f64::INFINITY)?;
        effect_min_eigenvalues.push(eig.eigenvalues[0]);
    }
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for e in effects {
        sum = sum.add(e)?;
    }
    let completeness_residual = sum.max_abs_diff(&ComplexMatrix::identity(dim))?;
    let min_effect_eigenvalue = effect_min_eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let pass = completeness_residual <= tol.tol_verify
        && max_hermitian_residual <= tol.tol_hermitian
        && min_effect_eigenvalue >= -tol.tol_psd;
    Ok(PovmReport {
        pass,
        completeness_residual,
        max_hermitian_residual,
        min_effect_eigenvalue,
        effect_min_eigenvalues,
    })
}

/// True iff the effects span the full d^2-dimensional operator space.
/// Rank is the number of Gram-matrix singular values above
/// d^2 * machine-epsilon * largest.
pub fn is_informationally_complete(povm: &Povm) -> (bool, usize) {
    let d = povm.dim();
    let n = povm.len();
    // Gram matrix under the HS inner product; real since effects are Hermitian.
    let gram = DMatrix::from_fn(n, n, |i, j| {
        hs_inner(&povm.effects()[i], &povm.effects()[j])
            .expect("same dimension")
            .re
    });
    let (eigenvalues, _) = eigen_symmetric_real(&gram);
    // The Gram matrix is PSD, so its singular values are its eigenvalues.
    let largest = eigenvalues.last().copied().unwrap_or(0.0);
    let cutoff = (d * d) as f64 * f64::EPSILON * largest;
    let rank = eigenvalues.iter().filter(|&&s| s > cutoff).count();
    (rank == d * d, rank)
}

/// Residuals from SIC verification.
#[derive(Debug, Clone)]
pub struct SicReport {
    pub pass: bool,
    pub dim: usize,
    /// max | |<phi_i|phi_j>|^2 - 1/(d+1) | over i != j.
    pub worst_overlap_deviation: f64,
    /// max | Tr(E_i E_j) - 1/(d^2(d+1)) | over i != j.
    pub worst_trace_symmetry_deviation: f64,
    /// max | sum_i E_i - I | over entries.
    pub completeness_residual: f64,
    pub worst_norm_deviation: f64,
}

impl std::fmt::Display for SicReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pass={}, overlap deviation {:.3e}, trace-symmetry deviation {:.3e}, completeness residual {:.3e}",
            self.pass,
            self.worst_overlap_deviation,
            self.worst_trace_symmetry_deviation,
            self.completeness_residual
        )
    }
}

/// SIC-POVM: d^2 rank-1 subnormalized projectors E_i = (1/d) Pi_i with
/// constant pairwise squared overlap 1/(d+1).
#[derive(Debug, Clone)]
pub struct SicPovm {
    dim: usize,
    vectors: Vec<StateVector>,
    projectors: Vec<ComplexMatrix>,
    effects: Vec<ComplexMatrix>,
}

impl SicPovm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn as_povm(&self) -> Povm {
        Povm {
            dim: self.dim,
            effects: self.effects.clone(),
        }
    }
}

/// Verify the SIC defining conditions for a candidate vector system.
/// All three conditions are checked independently even though the overlap
/// condition implies trace symmetry algebraically.
pub fn check_sic(vectors: &[StateVector], tol: &Tolerances) -> Result<SicReport> {
    let dim = vectors
        .first()
        .map(StateVector::dim)
        .ok_or(Error::Arity {
            expected: 1,
            got: 0,
        })?;
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::Dimension(format!(
                "mixed vector dimensions {} and {}",
                dim,
                v.dim()
            )));
        }
    }
    let expected = dim * dim;
    if vectors.len() != expected {
        return Err(Error::Arity {
            expected,
            got: vectors.len(),
        });
    }

    let worst_norm_deviation = vectors
        .iter()
        .map(|v| {
            let n: f64 = v.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            (n.sqrt() - 1.0).abs()
        })
        .fold(0.0, f64::max);

    let target_overlap = 1.0 / (dim as f64 + 1.0);
    let mut worst_overlap_deviation: f64 = 0.0;
    for i in 0..vectors.len() {
        for j in (i + 1)..vectors.len() {
            let overlap = vectors[i].inner(&vectors[j])?.norm_sqr();
            worst_overlap_deviation = worst_overlap_deviation.max((overlap - target_overlap).abs());
        }
    }

    let projectors: Vec<ComplexMatrix> = vectors.iter().map(projector_from_vector).collect();
    let scale = C64::new(1.0 / dim as f64, 0.0);
    let effects: Vec<ComplexMatrix> = projectors.iter().map(|p| p.scale(scale)).collect();

    let target_trace = 1.0 / ((dim * dim) as f64 * (dim as f64 + 1.0));
    let mut worst_trace_symmetry_deviation: f64 = 0.0;
    for i in 0..effects.len() {
        for j in (i + 1)..effects.len() {
            let t = hs_inner(&effects[i], &effects[j])?.re;
            worst_trace_symmetry_deviation =
                worst_trace_symmetry_deviation.max((t - target_trace).abs());
        }
    }

    let mut sum = ComplexMatrix::zeros(dim, dim);
    for e in &effects {
        sum = sum.add(e)?;
    }
    let completeness_residual = sum.max_abs_diff(&ComplexMatrix::identity(dim))?;

    let pass = worst_norm_deviation <= tol.tol_norm.max(tol.tol_verify)
        && worst_overlap_deviation <= tol.tol_verify
        && worst_trace_symmetry_deviation <= tol.tol_verify
        && completeness_residual <= tol.tol_verify;
    Ok(SicReport {
        pass,
        dim,
        worst_overlap_deviation,
        worst_trace_symmetry_deviation,
        completeness_residual,
        worst_norm_deviation,
    })
}

/// Build the SIC-POVM E_i = (1/d) |phi_i><phi_i| after verification.
pub fn sic_effects(vectors: &[StateVector], tol: &Tolerances) -> Result<SicPovm> {
    let report = check_sic(vectors, tol)?;
    if !report.pass {
        return Err(Error::SicViolation(Box::new(report)));
    }
    let dim = vectors[0].dim();
    let projectors: Vec<ComplexMatrix> = vectors.iter().map(projector_from_vector).collect();
    let scale = C64::new(1.0 / dim as f64, 0.0);
    let effects = projectors.iter().map(|p| p.scale(scale)).collect();
    Ok(SicPovm {
        dim,
        vectors: vectors.to_vec(),
        projectors,
        effects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{known_fiducial, wh_orbit};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn diag(entries: &[f64]) -> ComplexMatrix {
        let d = entries.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = c(x, 0.0);
        }
        m
    }

    fn sic_for(d: usize) -> SicPovm {
        let fid = known_fiducial(d).expect("catalogued fiducial");
        sic_effects(&wh_orbit(&fid).unwrap(), &Tolerances::default()).unwrap()
    }

    #[test]
    fn projective_basis_is_a_valid_povm() {
        let tol = Tolerances::default();
        let effects = vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])];
        assert!(validate_povm(&effects, &tol).unwrap().pass);
    }

    #[test]
    fn single_identity_effect_is_valid() {
        let tol = Tolerances::default();
        assert!(validate_povm(&[ComplexMatrix::identity(3)], &tol).unwrap().pass);
    }

    #[test]
    fn incomplete_sum_fails() {
        let tol = Tolerances::default();
        let effects = vec![diag(&[0.7, 0.0]), diag(&[0.1, 1.0])];
        let report = validate_povm(&effects, &tol).unwrap();
        assert!(!report.pass);
        assert!(report.completeness_residual > 0.1);
    }

    #[test]
    fn empty_effect_list_is_arity_error() {
        assert!(matches!(
            validate_povm(&[], &Tolerances::default()),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let effects = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(matches!(
            validate_povm(&effects, &Tolerances::default()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn sic_is_informationally_complete() {
        let sic = sic_for(2);
        let (ic, rank) = is_informationally_complete(&sic.as_povm());
        assert!(ic);
        assert_eq!(rank, 4);
    }

    #[test]
    fn projective_basis_is_not_ic() {
        let (ic, rank) = is_informationally_complete(&Povm::computational_basis(2));
        assert!(!ic);
        assert_eq!(rank, 2);
    }

    #[test]
    fn duplicated_effect_drops_rank() {
        let sic = sic_for(2);
        let mut effects = sic.effects().to_vec();
        effects[3] = effects[2].clone();
        // no longer a POVM, rank test only
        let povm = Povm {
            dim: 2,
            effects,
        };
        let (ic, rank) = is_informationally_complete(&povm);
        assert!(!ic);
        assert!(rank < 4);
    }

    #[test]
    fn orthogonal_system_fails_check_sic() {
        // basis vectors plus their +/- superpositions: overlaps 0 and 1
        // appear instead of 1/3
        let plus = StateVector::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let minus = StateVector::normalized(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let vectors = vec![StateVector::basis(2, 0), StateVector::basis(2, 1), plus, minus];
        let report = check_sic(&vectors, &Tolerances::default()).unwrap();
        assert!(!report.pass);
        assert!(report.worst_overlap_deviation > 0.3);
    }

    #[test]
    fn wrong_count_reports_expected_square() {
        let vectors = vec![StateVector::basis(2, 0), StateVector::basis(2, 1)];
        match check_sic(&vectors, &Tolerances::default()) {
            Err(Error::Arity { expected, got }) => {
                assert_eq!(expected, 4);
                assert_eq!(got, 2);
            }
            other => panic!("expected arity error, got {other:?}"),
        }
    }

    #[test]
    fn catalogued_orbits_pass_check_sic() {
        for d in [2usize, 3] {
            let fid = known_fiducial(d).unwrap();
            let report = check_sic(&wh_orbit(&fid).unwrap(), &Tolerances::default()).unwrap();
            assert!(report.pass, "d={d}: {report}");
            assert!(report.worst_overlap_deviation <= 1e-8);
        }
    }

    #[test]
    fn sic_effect_traces() {
        for d in [2usize, 3] {
            let sic = sic_for(d);
            let df = d as f64;
            for (i, e) in sic.effects().iter().enumerate() {
                assert!((e.trace().re - 1.0 / df).abs() < 1e-10);
                let self_overlap = hs_inner(e, e).unwrap().re;
                assert!((self_overlap - 1.0 / (df * df)).abs() < 1e-9, "effect {i}");
            }
            let target = 1.0 / (df * df * (df + 1.0));
            for i in 0..sic.len() {
                for j in 0..sic.len() {
                    if i == j {
                        continue;
                    }
                    let t = hs_inner(&sic.effects()[i], &sic.effects()[j]).unwrap().re;
                    assert!((t - target).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn sic_projectors_sum_to_d_identity() {
        for d in [2usize, 3] {
            let sic = sic_for(d);
            let mut sum = ComplexMatrix::zeros(d, d);
            for p in sic.projectors() {
                sum = sum.add(p).unwrap();
            }
            let target = ComplexMatrix::identity(d).scale(c(d as f64, 0.0));
            assert!(sum.max_abs_diff(&target).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn check_sic_invariances() {
        let fid = known_fiducial(2).unwrap();
        let vectors = wh_orbit(&fid).unwrap();
        let base = check_sic(&vectors, &Tolerances::default()).unwrap();
        assert!(base.pass);

        // independent global phases
        let phased: Vec<StateVector> = vectors
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let theta = 0.37 * (k as f64 + 1.0);
                let phase = c(theta.cos(), theta.sin());
                StateVector::normalized(v.amplitudes().iter().map(|z| z * phase).collect())
                    .unwrap()
            })
            .collect();
        assert!(check_sic(&phased, &Tolerances::default()).unwrap().pass);

        // permutation
        let mut permuted = vectors.clone();
        permuted.reverse();
        assert!(check_sic(&permuted, &Tolerances::default()).unwrap().pass);

        // common unitary rotation (a Hadamard-like rotation)
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_rows(vec![
            vec![c(s, 0.0), c(s, 0.0)],
            vec![c(s, 0.0), c(-s, 0.0)],
        ])
        .unwrap();
        let rotated: Vec<StateVector> = vectors
            .iter()
            .map(|v| {
                StateVector::normalized(u.apply(v.amplitudes()).unwrap()).unwrap()
            })
            .collect();
        assert!(check_sic(&rotated, &Tolerances::default()).unwrap().pass);
    }

    #[test]
    fn sic_effects_rejects_bad_system() {
        let plus = StateVector::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let minus = StateVector::normalized(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let vectors = vec![StateVector::basis(2, 0), StateVector::basis(2, 1), plus, minus];
        match sic_effects(&vectors, &Tolerances::default()) {
            Err(Error::SicViolation(report)) => assert!(!report.pass),
            other => panic!("expected SIC violation, got {other:?}"),
        }
    }
}
