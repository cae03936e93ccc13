//! C ABI for the sicq library: opaque handles, status codes, and flat
//! buffers. See include/sicq.h for the generated header.

use sicq::{
    born, compare_ftp, find_fiducial, known_fiducial, reconstruct_from_sic,
    reconstruct_linear_inversion, reference_probabilities, sic_effects, wh_orbit,
    ComplexMatrix, DensityOperator, Error, Povm, ProbabilityVector, SearchConfig, SearchStatus,
    SicPovm, Tolerances, C64,
};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SicqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotSic = 4,
    SearchFailed = 5,
    Underdetermined = 6,
    Infeasible = 7,
    InternalError = 8,
}

fn status_of(err: &Error) -> SicqStatus {
    match err {
        Error::Dimension(_) | Error::Arity { .. } => SicqStatus::DimensionMismatch,
        Error::SicViolation(_) => SicqStatus::NotSic,
        Error::Underdetermined { .. } => SicqStatus::Underdetermined,
        Error::ReconstructionInfeasible { .. }
        | Error::InconsistentData { .. }
        | Error::ImpossibleOutcome { .. } => SicqStatus::Infeasible,
        _ => SicqStatus::InvalidArgument,
    }
}

/// Opaque density-operator handle.
pub struct SicqState {
    inner: DensityOperator,
}

/// Opaque SIC-POVM handle.
pub struct SicqSic {
    inner: SicPovm,
}

/// Opaque POVM handle.
pub struct SicqPovm {
    inner: Povm,
}

unsafe fn out_handle<T>(out: *mut *mut T, value: T) -> SicqStatus {
    if out.is_null() {
        return SicqStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(value));
    SicqStatus::Ok
}

/// Sample a density operator from the Hilbert-Schmidt measure.
/// Deterministic per (dim, seed).
#[no_mangle]
pub unsafe extern "C" fn sicq_state_random(
    dim: usize,
    seed: u64,
    out: *mut *mut SicqState,
) -> SicqStatus {
    match sicq::random_density(dim, seed) {
        Ok(inner) => out_handle(out, SicqState { inner }),
        Err(e) => status_of(&e),
    }
}

/// Build a density operator from a row-major interleaved (re, im) buffer
/// of length 2*dim*dim. The matrix must satisfy the density invariants.
#[no_mangle]
pub unsafe extern "C" fn sicq_state_new(
    dim: usize,
    entries: *const f64,
    out: *mut *mut SicqState,
) -> SicqStatus {
    if entries.is_null() {
        return SicqStatus::NullPointer;
    }
    if dim == 0 {
        return SicqStatus::InvalidArgument;
    }
    let raw = std::slice::from_raw_parts(entries, 2 * dim * dim);
    let data: Vec<C64> = raw.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
    let matrix = match ComplexMatrix::from_data(dim, dim, data) {
        Ok(m) => m,
        Err(e) => return status_of(&e),
    };
    match DensityOperator::new(matrix, &Tolerances::default()) {
        Ok(inner) => out_handle(out, SicqState { inner }),
        Err(e) => status_of(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn sicq_state_dim(state: *const SicqState) -> usize {
    if state.is_null() {
        return 0;
    }
    (*state).inner.dim()
}

/// Copy the state matrix into a caller buffer of length 2*dim*dim,
/// row-major interleaved (re, im).
#[no_mangle]
pub unsafe extern "C" fn sicq_state_copy(
    state: *const SicqState,
    buffer: *mut f64,
    len: usize,
) -> SicqStatus {
    if state.is_null() || buffer.is_null() {
        return SicqStatus::NullPointer;
    }
    let matrix = (*state).inner.matrix();
    let needed = 2 * matrix.rows() * matrix.cols();
    if len < needed {
        return SicqStatus::InvalidArgument;
    }
    let out = std::slice::from_raw_parts_mut(buffer, needed);
    for (k, z) in matrix.data().iter().enumerate() {
        out[2 * k] = z.re;
        out[2 * k + 1] = z.im;
    }
    SicqStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn sicq_state_free(state: *mut SicqState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Load a catalogued SIC for dim in [2, 6].
#[no_mangle]
pub unsafe extern "C" fn sicq_sic_known(dim: usize, out: *mut *mut SicqSic) -> SicqStatus {
    let Some(fiducial) = known_fiducial(dim) else {
        return SicqStatus::InvalidArgument;
    };
    let orbit = match wh_orbit(&fiducial) {
        Ok(o) => o,
        Err(e) => return status_of(&e),
    };
    match sic_effects(&orbit, &Tolerances::default()) {
        Ok(inner) => out_handle(out, SicqSic { inner }),
        Err(e) => status_of(&e),
    }
}

/// Run the fiducial search and build the resulting SIC.
#[no_mangle]
pub unsafe extern "C" fn sicq_sic_find(
    dim: usize,
    seed: u64,
    restarts: usize,
    max_iterations: usize,
    out: *mut *mut SicqSic,
) -> SicqStatus {
    let cfg = SearchConfig {
        dim,
        seed,
        restarts,
        max_iterations,
        tol_opt: 1e-13,
        tol_accept: 1e-9,
    };
    let result = match find_fiducial(&cfg) {
        Ok(r) => r,
        Err(e) => return status_of(&e),
    };
    if result.status != SearchStatus::Converged {
        return SicqStatus::SearchFailed;
    }
    let fiducial = result.fiducial.expect("converged");
    let orbit = match wh_orbit(&fiducial) {
        Ok(o) => o,
        Err(e) => return status_of(&e),
    };
    match sic_effects(&orbit, &Tolerances::default()) {
        Ok(inner) => out_handle(out, SicqSic { inner }),
        Err(e) => status_of(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn sicq_sic_dim(sic: *const SicqSic) -> usize {
    if sic.is_null() {
        return 0;
    }
    (*sic).inner.dim()
}

#[no_mangle]
pub unsafe extern "C" fn sicq_sic_free(sic: *mut SicqSic) {
    if !sic.is_null() {
        drop(Box::from_raw(sic));
    }
}

/// Build a POVM from n effects, each a row-major interleaved (re, im)
/// buffer of length 2*dim*dim, concatenated.
#[no_mangle]
pub unsafe extern "C" fn sicq_povm_new(
    dim: usize,
    n_effects: usize,
    entries: *const f64,
    out: *mut *mut SicqPovm,
) -> SicqStatus {
    if entries.is_null() {
        return SicqStatus::NullPointer;
    }
    if dim == 0 || n_effects == 0 {
        return SicqStatus::InvalidArgument;
    }
    let per = 2 * dim * dim;
    let raw = std::slice::from_raw_parts(entries, per * n_effects);
    let mut effects = Vec::with_capacity(n_effects);
    for chunk in raw.chunks_exact(per) {
        let data: Vec<C64> = chunk.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
        match ComplexMatrix::from_data(dim, dim, data) {
            Ok(m) => effects.push(m),
            Err(e) => return status_of(&e),
        }
    }
    match Povm::new(effects, &Tolerances::default()) {
        Ok(inner) => out_handle(out, SicqPovm { inner }),
        Err(e) => status_of(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn sicq_povm_free(povm: *mut SicqPovm) {
    if !povm.is_null() {
        drop(Box::from_raw(povm));
    }
}

/// Born probabilities of a POVM on a state, written into a caller buffer
/// with one slot per effect.
#[no_mangle]
pub unsafe extern "C" fn sicq_born(
    state: *const SicqState,
    povm: *const SicqPovm,
    buffer: *mut f64,
    len: usize,
) -> SicqStatus {
    if state.is_null() || povm.is_null() || buffer.is_null() {
        return SicqStatus::NullPointer;
    }
    let povm = &(*povm).inner;
    if len < povm.len() {
        return SicqStatus::InvalidArgument;
    }
    match born(&(*state).inner, povm) {
        Ok(p) => {
            let out = std::slice::from_raw_parts_mut(buffer, povm.len());
            out.copy_from_slice(p.values());
            SicqStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// SIC reference probabilities p(E_i) = Tr(E_i rho), one slot per effect
/// (dim^2 values).
#[no_mangle]
pub unsafe extern "C" fn sicq_reference_probabilities(
    state: *const SicqState,
    sic: *const SicqSic,
    buffer: *mut f64,
    len: usize,
) -> SicqStatus {
    if state.is_null() || sic.is_null() || buffer.is_null() {
        return SicqStatus::NullPointer;
    }
    let sic = &(*sic).inner;
    if len < sic.len() {
        return SicqStatus::InvalidArgument;
    }
    match reference_probabilities(&(*state).inner, sic) {
        Ok(p) => {
            let out = std::slice::from_raw_parts_mut(buffer, sic.len());
            out.copy_from_slice(p.values());
            SicqStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Run the FTP comparison pipeline; writes the worst-case deviation of
/// the classical and QBist formulas from the Born probabilities.
#[no_mangle]
pub unsafe extern "C" fn sicq_ftp_deviations(
    state: *const SicqState,
    sic: *const SicqSic,
    target: *const SicqPovm,
    deviation_classical: *mut f64,
    deviation_qbist: *mut f64,
) -> SicqStatus {
    if state.is_null()
        || sic.is_null()
        || target.is_null()
        || deviation_classical.is_null()
        || deviation_qbist.is_null()
    {
        return SicqStatus::NullPointer;
    }
    match compare_ftp(&(*state).inner, &(*sic).inner, &(*target).inner) {
        Ok(cmp) => {
            *deviation_classical = cmp.deviation_classical;
            *deviation_qbist = cmp.deviation_qbist;
            SicqStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Reconstruct a state from dim^2 SIC reference probabilities.
#[no_mangle]
pub unsafe extern "C" fn sicq_reconstruct_from_sic(
    probabilities: *const f64,
    len: usize,
    sic: *const SicqSic,
    out: *mut *mut SicqState,
) -> SicqStatus {
    if probabilities.is_null() || sic.is_null() {
        return SicqStatus::NullPointer;
    }
    let tol = Tolerances::default();
    let values = std::slice::from_raw_parts(probabilities, len).to_vec();
    let probs = match ProbabilityVector::new(values, &tol) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    match reconstruct_from_sic(&probs, &(*sic).inner, &tol) {
        Ok(inner) => out_handle(out, SicqState { inner }),
        Err(e) => status_of(&e),
    }
}

/// Reconstruct a state from the outcome probabilities of an arbitrary
/// informationally complete POVM by linear inversion.
#[no_mangle]
pub unsafe extern "C" fn sicq_reconstruct_linear_inversion(
    probabilities: *const f64,
    len: usize,
    reference: *const SicqPovm,
    out: *mut *mut SicqState,
) -> SicqStatus {
    if probabilities.is_null() || reference.is_null() {
        return SicqStatus::NullPointer;
    }
    let tol = Tolerances::default();
    let values = std::slice::from_raw_parts(probabilities, len).to_vec();
    let probs = match ProbabilityVector::new(values, &tol) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    match reconstruct_linear_inversion(&probs, &(*reference).inner, &tol) {
        Ok(inner) => out_handle(out, SicqState { inner }),
        Err(e) => status_of(&e),
    }
}
