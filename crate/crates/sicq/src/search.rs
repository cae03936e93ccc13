//! Weyl-Heisenberg displacement operators and numerical SIC fiducial
//! search by frame-potential minimization.
//!
//! The fiducial is parameterized by its complex amplitudes and optimized
//! by projected gradient descent with a backtracking line search on the
//! unit sphere. The frame potential
//! sum_{k,l} |<phi| D_{k,l} |phi>|^4 is bounded below by 2d/(d+1) and
//! attains the bound exactly on SIC orbits, so the potential gap doubles
//! as the convergence certificate.

use std::collections::HashMap;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::states::{random_state_vector, StateVector, Tolerances};

/// The d^2 unitaries D_{k,l} = X^k Z^l, indexed by k*d + l.
#[derive(Debug, Clone)]
pub struct DisplacementSet {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl DisplacementSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn get(&self, k: usize, l: usize) -> &ComplexMatrix {
        &self.operators[k * self.dim + l]
    }
}

/// Shift and clock generators and their d^2 products X^k Z^l.
pub fn displacement_operators(d: usize) -> Result<DisplacementSet> {
    if d < 2 {
        return Err(Error::Dimension(format!(
            "displacement operators need dimension >= 2, got {d}"
        )));
    }
    // X|j> = |j+1 mod d>, Z|j> = omega^j |j>, omega = exp(2 pi i / d)
    let mut shift = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        shift[((j + 1) % d, j)] = C64::new(1.0, 0.0);
    }
    let mut clock = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / d as f64;
        clock[(j, j)] = C64::new(theta.cos(), theta.sin());
    }
    let mut x_pow = ComplexMatrix::identity(d);
    let mut operators = Vec::with_capacity(d * d);
    for _k in 0..d {
        let mut op = x_pow.clone();
        for _l in 0..d {
            operators.push(op.clone());
            op = op.matmul(&clock)?;
        }
        x_pow = x_pow.matmul(&shift)?;
    }
    Ok(DisplacementSet {
        dim: d,
        operators,
    })
}

/// Orbit of a fiducial under the displacement set: d^2 unit vectors,
/// index (0,0) first.
pub fn wh_orbit(fiducial: &StateVector) -> Result<Vec<StateVector>> {
    let d = fiducial.dim();
    let set = displacement_operators(d)?;
    let tol = Tolerances::default();
    set.operators()
        .iter()
        .map(|op| StateVector::new(op.apply(fiducial.amplitudes())?, &tol))
        .collect()
}

/// Minimum of the frame potential, attained exactly on SIC orbits:
/// 1 + (d^2 - 1)/(d+1)^2 = 2d/(d+1).
pub fn frame_potential_bound(d: usize) -> f64 {
    2.0 * d as f64 / (d as f64 + 1.0)
}

/// sum_{k,l} |<phi| D_{k,l} |phi>|^4 over all d^2 displacements,
/// including the identity.
pub fn frame_potential(fiducial: &StateVector) -> Result<f64> {
    let set = displacement_operators(fiducial.dim())?;
    Ok(potential_of(fiducial.amplitudes(), &set))
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn potential_of(phi: &[C64], set: &DisplacementSet) -> f64 {
    set.operators()
        .iter()
        .map(|op| {
            let c = inner(phi, &op.apply(phi).expect("dimension fixed"));
            let m = c.norm_sqr();
            m * m
        })
        .sum()
}

/// Wirtinger gradient 2 * dF/d(conj phi) of the frame potential, viewed
/// as the Euclidean gradient over the 2d real parameters.
fn potential_gradient(phi: &[C64], set: &DisplacementSet) -> Vec<C64> {
    let d = phi.len();
    let mut grad = vec![C64::new(0.0, 0.0); d];
    for op in set.operators() {
        let fwd = op.apply(phi).expect("dimension fixed");
        let bwd = op.dagger().apply(phi).expect("dimension fixed");
        let c = inner(phi, &fwd);
        let w = 2.0 * c.norm_sqr();
        for a in 0..d {
            grad[a] += (c.conj() * fwd[a] + c * bwd[a]) * w;
        }
    }
    for g in grad.iter_mut() {
        *g *= 2.0;
    }
    grad
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Converged,
    Failed,
}

/// Configuration of the multi-restart fiducial search.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub dim: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Local-optimizer convergence threshold on the potential gap or the
    /// tangent-gradient norm.
    pub tol_opt: f64,
    /// Acceptance threshold on the final potential gap.
    pub tol_accept: f64,
}

impl SearchConfig {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self {
            dim,
            seed,
            restarts: 32,
            max_iterations: 50_000,
            tol_opt: 1e-13,
            tol_accept: 1e-9,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Dimension(format!(
                "fiducial search needs dimension >= 2, got {}",
                self.dim
            )));
        }
        if self.restarts == 0 {
            return Err(Error::Arity {
                expected: 1,
                got: 0,
            });
        }
        Ok(())
    }
}

/// Outcome of a fiducial search. `Failed` is a value, not an error:
/// SIC existence is conjectural in general.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub fiducial: Option<StateVector>,
    pub final_potential: f64,
    /// final_potential - 2d/(d+1).
    pub potential_gap: f64,
    pub iterations_used: usize,
    pub restart_index: usize,
}

struct DescentOutcome {
    phi: Vec<C64>,
    potential: f64,
    iterations: usize,
}

/// Levenberg-Marquardt polish on the overlap residuals
/// r_{k,l} = |<phi|D_{k,l}|phi>|^2 - 1/(d+1), (k,l) != (0,0).
/// The potential gap equals the residual sum of squares on the sphere, so
/// driving the residuals to machine precision drives the gap to ~1e-30,
/// which first-order descent cannot reach through a noisy line search.
fn polish_residuals(phi: &mut Vec<C64>, set: &DisplacementSet, max_iterations: usize) -> usize {
    let d = phi.len();
    let n_res = set.operators().len() - 1;
    let target = 1.0 / (d as f64 + 1.0);
    let mut lambda = 1e-9;
    let mut iterations = 0;

    let residuals = |v: &[C64]| -> Vec<f64> {
        set.operators()[1..]
            .iter()
            .map(|op| inner(v, &op.apply(v).expect("dimension fixed")).norm_sqr() - target)
            .collect()
    };
    let mut r = residuals(phi);
    let mut ssq: f64 = r.iter().map(|x| x * x).sum();
    for _ in 0..max_iterations {
        if ssq < 1e-28 {
            break;
        }
        iterations += 1;
        // Jacobian over the 2d real parameters (re, im interleaved)
        let mut jac = DMatrix::zeros(n_res, 2 * d);
        for (row, op) in set.operators()[1..].iter().enumerate() {
            let fwd = op.apply(phi).expect("dimension fixed");
            let bwd = op.dagger().apply(phi).expect("dimension fixed");
            let c = inner(phi, &fwd);
            for a in 0..d {
                let w = c.conj() * fwd[a] + c * bwd[a];
                jac[(row, 2 * a)] = 2.0 * w.re;
                jac[(row, 2 * a + 1)] = 2.0 * w.im;
            }
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let jtr = &jt * DVector::from_column_slice(&r);
        let mut improved = false;
        for _ in 0..12 {
            let mut damped = jtj.clone();
            for k in 0..2 * d {
                damped[(k, k)] += lambda;
            }
            let Some(step) = damped.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let candidate = normalize(
                phi.iter()
                    .enumerate()
                    .map(|(a, p)| p - C64::new(step[2 * a], step[2 * a + 1]))
                    .collect(),
            );
            let cand_r = residuals(&candidate);
            let cand_ssq: f64 = cand_r.iter().map(|x| x * x).sum();
            if cand_ssq < ssq {
                *phi = candidate;
                r = cand_r;
                ssq = cand_ssq;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    iterations
}

/// Projected gradient descent on the unit sphere with backtracking line
/// search. The initial step is carried over (doubled) from the previous
/// accepted step.
fn descend(
    start: &[C64],
    set: &DisplacementSet,
    max_iterations: usize,
    tol_opt: f64,
    bound: f64,
) -> DescentOutcome {
    let mut phi = normalize(start.to_vec());
    let mut potential = potential_of(&phi, set);
    let mut step = 0.1;
    let mut iterations = 0;
    for _ in 0..max_iterations {
        if potential - bound < tol_opt {
            break;
        }
        let grad = potential_gradient(&phi, set);
        // tangent projection: remove the component along phi
        let along: C64 = inner(&phi, &grad);
        let tangent: Vec<C64> = grad
            .iter()
            .zip(&phi)
            .map(|(g, p)| g - p * along)
            .collect();
        let tnorm_sq: f64 = tangent.iter().map(|z| z.norm_sqr()).sum();
        if tnorm_sq.sqrt() < tol_opt {
            break;
        }
        iterations += 1;
        step *= 2.0;
        let mut accepted = false;
        for _ in 0..60 {
            let candidate = normalize(
                phi.iter()
                    .zip(&tangent)
                    .map(|(p, t)| p - t * step)
                    .collect(),
            );
            let cand_potential = potential_of(&candidate, set);
            if cand_potential <= potential - 1e-4 * step * tnorm_sq {
                phi = candidate;
                potential = cand_potential;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    DescentOutcome {
        phi,
        potential,
        iterations,
    }
}

fn normalize(v: Vec<C64>) -> Vec<C64> {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Multi-restart fiducial search. Restarts draw independent starting
/// vectors from a stream seeded by (seed, restart_index); the first
/// restart whose potential gap reaches `tol_accept` wins, otherwise the
/// minimum-potential restart is reported as failed.
pub fn find_fiducial(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let set = displacement_operators(cfg.dim)?;
    let bound = frame_potential_bound(cfg.dim);
    let tol = Tolerances::default();

    let mut best: Option<(f64, usize, DescentOutcome)> = None;
    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let start = random_state_vector(cfg.dim, &mut rng);
        // coarse first-order phase; the polish takes over near the minimum
        let mut outcome = descend(
            start.amplitudes(),
            &set,
            cfg.max_iterations,
            cfg.tol_opt.max(1e-7),
            bound,
        );
        if outcome.potential - bound < 1e-3 {
            outcome.iterations += polish_residuals(&mut outcome.phi, &set, 200);
            outcome.potential = potential_of(&outcome.phi, &set);
        }
        let gap = outcome.potential - bound;
        if gap <= cfg.tol_accept {
            let fiducial = StateVector::new(outcome.phi.clone(), &tol)?;
            return Ok(SearchResult {
                status: SearchStatus::Converged,
                fiducial: Some(fiducial),
                final_potential: outcome.potential,
                potential_gap: gap,
                iterations_used: outcome.iterations,
                restart_index: restart,
            });
        }
        let better = match &best {
            Some((p, _, _)) => outcome.potential < *p,
            None => true,
        };
        if better {
            best = Some((outcome.potential, restart, outcome));
        }
    }
    let (potential, restart_index, outcome) = best.expect("restarts >= 1");
    Ok(SearchResult {
        status: SearchStatus::Failed,
        fiducial: None,
        final_potential: potential,
        potential_gap: potential - bound,
        iterations_used: outcome.iterations,
        restart_index,
    })
}

/// Catalogued fiducials for d in [2, 6], generated once by
/// `find_fiducial` and stored as a data file. Absent outside the range.
pub fn known_fiducial(d: usize) -> Option<StateVector> {
    static CATALOGUE: OnceLock<HashMap<usize, Vec<C64>>> = OnceLock::new();
    let map = CATALOGUE.get_or_init(|| {
        let raw: HashMap<String, Vec<[f64; 2]>> =
            serde_json::from_str(include_str!("../data/fiducials.json"))
                .expect("bundled fiducial catalogue parses");
        raw.into_iter()
            .map(|(k, v)| {
                (
                    k.parse::<usize>().expect("numeric dimension key"),
                    v.into_iter().map(|[re, im]| C64::new(re, im)).collect(),
                )
            })
            .collect()
    });
    map.get(&d).map(|amps| {
        StateVector::new(amps.clone(), &Tolerances::default())
            .expect("catalogued fiducial is unit-normalized")
    })
}
