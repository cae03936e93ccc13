//! Density operators, state vectors, validation, and seeded random-state
//! sampling from the Hilbert-Schmidt measure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{eigen_hermitian, ComplexMatrix, C64};

/// Numerical tolerances threaded through validation and verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub tol_hermitian: f64,
    pub tol_trace: f64,
    pub tol_psd: f64,
    pub tol_norm: f64,
    pub tol_verify: f64,
    pub tol_opt: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_hermitian: 1e-10,
            tol_trace: 1e-10,
            tol_psd: 1e-9,
            tol_norm: 1e-10,
            tol_verify: 1e-8,
            tol_opt: 1e-12,
        }
    }
}

/// Unit vector in C^d. Global phase is never canonicalized; everything
/// downstream is phase-invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wrap amplitudes, requiring unit norm within `tol_norm`.
    pub fn new(amplitudes: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("state vector needs dimension >= 1".into()));
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let deviation = (norm_sq.sqrt() - 1.0).abs();
        if deviation > tol.tol_norm {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize arbitrary nonzero amplitudes into a state vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(Error::NotNormalized {
                deviation: f64::INFINITY,
            });
        }
        let inv = 1.0 / norm_sq.sqrt();
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z * inv).collect(),
        })
    }

    /// Computational basis state |index>.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "inner product of vectors with dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Validated density operator: Hermitian, unit trace, positive
/// semidefinite within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let report = validate_density(&matrix, tol)?;
        if !report.pass {
            if report.hermitian_residual > tol.tol_hermitian {
                return Err(Error::NotHermitian {
                    residual: report.hermitian_residual,
                });
            }
            return Err(Error::ReconstructionInfeasible {
                candidate: matrix,
                report: Box::new(report),
            });
        }
        Ok(Self { matrix })
    }

    /// Pure state |v><v|.
    pub fn pure(v: &StateVector) -> Self {
        Self {
            matrix: projector_from_vector_unchecked(v),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Per-check residuals from density-operator validation.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub pass: bool,
    pub hermitian_residual: f64,
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
}

impl std::fmt::Display for DensityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pass={}, hermitian residual {:.3e}, trace residual {:.3e}, min eigenvalue {:.3e}",
            self.pass, self.hermitian_residual, self.trace_residual, self.min_eigenvalue
        )
    }
}

/// Check the three density-operator invariants and report each residual.
pub fn validate_density(m: &ComplexMatrix, tol: &Tolerances) -> Result<DensityReport> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "density operator must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let hermitian_residual = m.hermiticity_residual();
    let trace = m.trace();
    let trace_residual = (trace - C64::new(1.0, 0.0)).norm();
    // The PSD check runs on the hermitized matrix so a failed hermiticity
    // check still yields a meaningful spectrum.
    let eig = eigen_hermitian(&m.hermitize(), f64::INFINITY)?;
    let min_eigenvalue = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let pass = hermitian_residual <= tol.tol_hermitian
        && trace_residual <= tol.tol_trace
        && min_eigenvalue >= -tol.tol_psd;
    Ok(DensityReport {
        pass,
        hermitian_residual,
        trace_residual,
        min_eigenvalue,
    })
}

fn projector_from_vector_unchecked(v: &StateVector) -> ComplexMatrix {
    let d = v.dim();
    let mut p = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            p[(i, j)] = v.amplitudes()[i] * v.amplitudes()[j].conj();
        }
    }
    p
}

/// Rank-1 projector |v><v|; invariant under global phase of v.
pub fn projector_from_vector(v: &StateVector) -> ComplexMatrix {
    projector_from_vector_unchecked(v)
}

/// Sample a density operator from the Hilbert-Schmidt measure:
/// G G^dagger / Tr(G G^dagger) for a complex Gaussian (Ginibre) matrix G.
/// Deterministic per (d, seed).
pub fn random_density(d: usize, seed: u64) -> Result<DensityOperator> {
    if d == 0 {
        return Err(Error::Dimension("dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(d as u64);
    let mut g = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let (re, im) = gaussian_pair(&mut rng);
            g[(i, j)] = C64::new(re, im);
        }
    }
    let gg = g.matmul(&g.dagger()).expect("square product");
    let trace = gg.trace().re;
    let rho = gg.scale(C64::new(1.0 / trace, 0.0)).hermitize();
    DensityOperator::new(rho, &Tolerances::default())
}

/// Draw a random unit vector with i.i.d. complex Gaussian amplitudes.
pub(crate) fn random_state_vector<R: Rng>(d: usize, rng: &mut R) -> StateVector {
    let mut amplitudes = Vec::with_capacity(d);
    for _ in 0..d {
        let (re, im) = gaussian_pair(rng);
        amplitudes.push(C64::new(re, im));
    }
    StateVector::normalized(amplitudes).expect("gaussian vector is nonzero a.s.")
}

/// Box-Muller: two independent standard normals from two uniforms.
pub(crate) fn gaussian_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = loop {
        let u = rng.gen::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn maximally_mixed_validates_with_zero_residuals() {
        let tol = Tolerances::default();
        let report = validate_density(&diag(&[0.5, 0.5]), &tol).unwrap();
        assert!(report.pass);
        assert!(report.hermitian_residual == 0.0);
        assert!(report.trace_residual < 1e-15);
        assert!(report.min_eigenvalue >= 0.5 - 1e-12);
    }

    #[test]
    fn pure_projector_validates() {
        let tol = Tolerances::default();
        assert!(validate_density(&diag(&[1.0, 0.0]), &tol).unwrap().pass);
    }

    #[test]
    fn negative_eigenvalue_fails() {
        let tol = Tolerances::default();
        let report = validate_density(&diag(&[1.2, -0.2]), &tol).unwrap();
        assert!(!report.pass);
        assert!((report.min_eigenvalue + 0.2).abs() < 1e-12);
    }

    #[test]
    fn non_square_is_a_dimension_error() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            validate_density(&m, &Tolerances::default()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn projector_basis_vector() {
        let p = projector_from_vector(&StateVector::basis(2, 0));
        assert!(p.max_abs_diff(&diag(&[1.0, 0.0])).unwrap() < 1e-15);
    }

    #[test]
    fn projector_uniform_superposition() {
        let v = StateVector::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let p = projector_from_vector(&v);
        for i in 0..2 {
            for j in 0..2 {
                assert!((p[(i, j)] - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn projector_global_phase_invariant() {
        let theta = 1.7_f64;
        let phase = C64::new(theta.cos(), theta.sin());
        let v = StateVector::normalized(vec![c(0.6, 0.1), c(0.3, -0.7)]).unwrap();
        let w =
            StateVector::normalized(v.amplitudes().iter().map(|z| z * phase).collect()).unwrap();
        let diff = projector_from_vector(&v)
            .max_abs_diff(&projector_from_vector(&w))
            .unwrap();
        assert!(diff < 1e-14);
    }

    #[test]
    fn random_density_deterministic() {
        let a = random_density(3, 7).unwrap();
        let b = random_density(3, 7).unwrap();
        assert_eq!(a.matrix().data(), b.matrix().data());
    }

    #[test]
    fn random_density_rejects_zero_dim() {
        assert!(matches!(random_density(0, 1), Err(Error::Dimension(_))));
    }

    #[test]
    fn random_density_mean_approaches_maximally_mixed() {
        // Monte Carlo oracle: the HS measure is unitarily invariant, so the
        // mean is I/d.
        let n = 10_000;
        let mut mean = ComplexMatrix::zeros(2, 2);
        for seed in 0..n {
            mean = mean.add(random_density(2, seed as u64).unwrap().matrix()).unwrap();
        }
        mean = mean.scale(c(1.0 / n as f64, 0.0));
        let diff = mean
            .max_abs_diff(&diag(&[0.5, 0.5]))
            .unwrap();
        assert!(diff < 0.05, "mean deviates from I/2 by {diff}");
    }

    #[test]
    fn density_spectrum_in_unit_range() {
        let tol = Tolerances::default();
        for d in 1..=8 {
            for seed in 0..20 {
                let rho = random_density(d, seed).unwrap();
                let eig = eigen_hermitian(rho.matrix(), tol.tol_hermitian).unwrap();
                let sum: f64 = eig.eigenvalues.iter().sum();
                assert!((sum - 1.0).abs() <= 1e-10);
                for &ev in &eig.eigenvalues {
                    assert!(ev >= -tol.tol_psd && ev <= 1.0 + tol.tol_psd);
                }
            }
        }
    }
}
