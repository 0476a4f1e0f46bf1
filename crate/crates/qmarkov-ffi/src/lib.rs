//! C ABI for the qmarkov analyses.
//!
//! Objects cross the boundary as opaque handles created and destroyed by the
//! matching `qm_*_free` functions. Every fallible call returns a [`QmStatus`];
//! on any non-OK status, [`qm_last_error_message`] yields a human-readable
//! description for the calling thread. Structured results come back as JSON
//! strings owned by the caller (release with [`qm_string_free`]).
//!
//! Pass `0.0` wherever a `tolerance` parameter is expected to use the
//! default cutoffs.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qmarkov::format::{
    to_json_pretty, DecompositionReport, ModelFile, ProbabilityReport, StateFile, SubspaceFile,
    SubspaceOnlyReport, SubspaceReport,
};
use qmarkov::{
    check_bscc, decompose_state_space, persistence_probability, reach_probability,
    reachable_space, repeated_reachability_probability, AnalysisKind, AnalysisReport, Channel,
    DensityOperator, QmcError, Subspace, ToleranceConfig,
};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    DimensionMismatch = 5,
    NumericalFailure = 6,
    IoError = 7,
    Panic = 8,
}

/// Opaque handle to a quantum channel.
pub struct QmChannel(Channel);

/// Opaque handle to a density operator.
pub struct QmState(DensityOperator);

/// Opaque handle to a subspace of the state space.
pub struct QmSubspace(Subspace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).expect("NULs were stripped"));
    });
}

fn status_of(err: &QmcError) -> QmStatus {
    match err {
        QmcError::Parse(_) => QmStatus::ParseError,
        QmcError::Io(_) => QmStatus::IoError,
        QmcError::DimensionMismatch { .. } => QmStatus::DimensionMismatch,
        QmcError::NotHermitian { .. }
        | QmcError::NotPositiveSemidefinite { .. }
        | QmcError::InvalidTrace { .. }
        | QmcError::NotTracePreserving { .. }
        | QmcError::TraceBoundExceeded { .. }
        | QmcError::EmptyKraus
        | QmcError::NotContained
        | QmcError::ZeroSubspace
        | QmcError::InvalidModel(_) => QmStatus::InvalidInput,
        QmcError::DefectiveSpectralProjector { .. }
        | QmcError::DecompositionDepthExceeded { .. }
        | QmcError::NoFixedPoint
        | QmcError::SplitDidNotShrink
        | QmcError::ProbabilityOutOfRange { .. } => QmStatus::NumericalFailure,
    }
}

fn fail(err: QmcError) -> QmStatus {
    let status = status_of(&err);
    set_last_error(err.to_string());
    status
}

/// Run a closure behind a panic guard so unwinding never crosses the ABI.
fn guarded(body: impl FnOnce() -> QmStatus) -> QmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in qmarkov".into());
            set_last_error(message);
            QmStatus::Panic
        }
    }
}

fn tolerance_from(raw: f64) -> Result<ToleranceConfig, QmcError> {
    if raw == 0.0 {
        Ok(ToleranceConfig::default())
    } else if raw > 0.0 && raw < 1.0 {
        Ok(ToleranceConfig::default().with_rank_cutoff(raw))
    } else {
        Err(QmcError::Parse(format!(
            "tolerance must lie strictly between 0 and 1 (or be 0 for the default), got {raw}"
        )))
    }
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, QmStatus> {
    if ptr.is_null() {
        set_last_error("NULL string argument".into());
        return Err(QmStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("string argument is not valid UTF-8".into());
        QmStatus::InvalidUtf8
    })
}

fn require_out<T>(out: *mut T) -> Result<(), QmStatus> {
    if out.is_null() {
        set_last_error("NULL output pointer".into());
        return Err(QmStatus::NullPointer);
    }
    Ok(())
}

unsafe fn deref_handle<'a, T>(handle: *const T) -> Result<&'a T, QmStatus> {
    if handle.is_null() {
        set_last_error("NULL handle".into());
        return Err(QmStatus::NullPointer);
    }
    Ok(&*handle)
}

fn string_out(text: String, out: *mut *mut c_char) {
    let sanitized = text.replace('\0', " ");
    let cstring = CString::new(sanitized).expect("NULs were stripped");
    unsafe {
        *out = cstring.into_raw();
    }
}

/// Latest error message for this thread, or NULL when no error occurred yet.
/// The caller owns the string and must release it with `qm_string_free`.
#[no_mangle]
pub extern "C" fn qm_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Release a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build a channel from a model JSON document
/// (`{"dimension": n, "kraus": [...]}` with `[re, im]` entries).
#[no_mangle]
pub unsafe extern "C" fn qm_channel_from_json(
    json: *const c_char,
    tolerance: f64,
    out: *mut *mut QmChannel,
) -> QmStatus {
    guarded(|| {
        let text = match utf8_arg(json) {
            Ok(text) => text,
            Err(status) => return status,
        };
        if require_out(out).is_err() {
            return QmStatus::NullPointer;
        }
        let build = || -> Result<Channel, QmcError> {
            let tol = tolerance_from(tolerance)?;
            ModelFile::from_json(text)?.to_channel(&tol)
        };
        match build() {
            Ok(channel) => {
                *out = Box::into_raw(Box::new(QmChannel(channel)));
                QmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Build a channel from dense Kraus data: `num_kraus` row-major `dim x dim`
/// matrices of interleaved `re, im` doubles (`2 * num_kraus * dim * dim`
/// values in total).
#[no_mangle]
pub unsafe extern "C" fn qm_channel_from_dense(
    dim: usize,
    num_kraus: usize,
    data: *const f64,
    tolerance: f64,
    out: *mut *mut QmChannel,
) -> QmStatus {
    guarded(|| {
        if data.is_null() {
            set_last_error("NULL data pointer".into());
            return QmStatus::NullPointer;
        }
        if require_out(out).is_err() {
            return QmStatus::NullPointer;
        }
        let build = || -> Result<Channel, QmcError> {
            let tol = tolerance_from(tolerance)?;
            if dim == 0 || num_kraus == 0 {
                return Err(QmcError::InvalidModel(
                    "dimension and Kraus count must be positive".into(),
                ));
            }
            let len = 2 * num_kraus * dim * dim;
            let values = std::slice::from_raw_parts(data, len);
            let kraus: Vec<_> = (0..num_kraus)
                .map(|k| {
                    let base = 2 * k * dim * dim;
                    qmarkov::mat::CMatrix::from_fn(dim, dim, |i, j| {
                        let at = base + 2 * (i * dim + j);
                        qmarkov::mat::c64(values[at], values[at + 1])
                    })
                })
                .collect();
            Channel::new(kraus, &tol)
        };
        match build() {
            Ok(channel) => {
                *out = Box::into_raw(Box::new(QmChannel(channel)));
                QmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Dimension of the channel's state space.
#[no_mangle]
pub unsafe extern "C" fn qm_channel_dim(channel: *const QmChannel, out: *mut usize) -> QmStatus {
    guarded(|| {
        let Ok(handle) = deref_handle(channel) else {
            return QmStatus::NullPointer;
        };
        if require_out(out).is_err() {
            return QmStatus::NullPointer;
        }
        *out = handle.0.dim();
        QmStatus::Ok
    })
}

/// Release a channel handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qm_channel_free(channel: *mut QmChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Build a state from a state JSON document (`{"pure": [...]}` or
/// `{"density": [...]}`) against the expected dimension.
#[no_mangle]
pub unsafe extern "C" fn qm_state_from_json(
    json: *const c_char,
    dim: usize,
    tolerance: f64,
    out: *mut *mut QmState,
) -> QmStatus {
    guarded(|| {
        let text = match utf8_arg(json) {
            Ok(text) => text,
            Err(status) => return status,
        };
        if require_out(out).is_err() {
            return QmStatus::NullPointer;
        }
        let build = || -> Result<DensityOperator, QmcError> {
            let tol = tolerance_from(tolerance)?;
            let (rho, _renormalized) = StateFile::from_json(text)?.to_density(dim, &tol)?;
            Ok(rho)
        };
        match build() {
            Ok(rho) => {
                *out = Box::into_raw(Box::new(QmState(rho)));
                QmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// The computational basis state `|index>` in the given dimension.
#[no_mangle]
pub unsafe extern "C" fn qm_state_basis(
    dim: usize,
    index: usize,
    out: *mut *mut QmState,
) -> QmStatus {
    guarded(|| {
        if require_out(out).is_err() {
            return QmStatus::NullPointer;
        }
        if index >= dim {
            set_last_error(format!("basis index {index} out of range for dimension {dim}"));
            return QmStatus::InvalidInput;
        }
        *out = Box::into_raw(Box::new(QmState(DensityOperator::basis_state(dim, index))));
        QmStatus::Ok
    })
}

/// Release a state handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qm_state_free(state: *mut QmState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Build a subspace from a subspace JSON document (`{"vectors": [...]}`,
/// empty list for the zero subspace) within the given ambient dimension.
#[no_mangle]
pub unsafe extern "C" fn qm_subspace_from_json(
    json: *const c_char,
    ambient_dim: usize,
    tolerance: f64,
    out: *mut *mut QmSubspace,
) -> QmStatus {
    guarded(|| {
        let text = match utf8_arg(json) {
            Ok(text) => text,
            Err(status) => return status,
        };
        if require_out(out).is_err() {
            return QmStatus::NullPointer;
        }
        let build = || -> Result<Subspace, QmcError> {
            let tol = tolerance_from(tolerance)?;
            SubspaceFile::from_json(text)?.to_subspace(ambient_dim, &tol)
        };
        match build() {
            Ok(space) => {
                *out = Box::into_raw(Box::new(QmSubspace(space)));
                QmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// The span of the listed computational basis vectors.
#[no_mangle]
pub unsafe extern "C" fn qm_subspace_basis_indices(
    ambient_dim: usize,
    indices: *const usize,
    len: usize,
    out: *mut *mut QmSubspace,
) -> QmStatus {
    guarded(|| {
        if indices.is_null() && len > 0 {
            set_last_error("NULL indices pointer".into());
            return QmStatus::NullPointer;
        }
        if require_out(out).is_err() {
            return QmStatus::NullPointer;
        }
        let slice = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(indices, len)
        };
        if let Some(&bad) = slice.iter().find(|&&k| k >= ambient_dim) {
            set_last_error(format!(
                "basis index {bad} out of range for dimension {ambient_dim}"
            ));
            return QmStatus::InvalidInput;
        }
        *out = Box::into_raw(Box::new(QmSubspace(Subspace::from_basis_indices(
            ambient_dim,
            slice,
        ))));
        QmStatus::Ok
    })
}

/// Dimension of the subspace.
#[no_mangle]
pub unsafe extern "C" fn qm_subspace_dim(
    subspace: *const QmSubspace,
    out: *mut usize,
) -> QmStatus {
    guarded(|| {
        let Ok(handle) = deref_handle(subspace) else {
            return QmStatus::NullPointer;
        };
        if require_out(out).is_err() {
            return QmStatus::NullPointer;
        }
        *out = handle.0.dim();
        QmStatus::Ok
    })
}

/// Release a subspace handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qm_subspace_free(subspace: *mut QmSubspace) {
    if !subspace.is_null() {
        drop(Box::from_raw(subspace));
    }
}

/// Decompose the state space into BSCCs plus the transient subspace.
/// On success `out_json` holds a report with the BSCC dimensions and bases.
#[no_mangle]
pub unsafe extern "C" fn qm_decompose(
    channel: *const QmChannel,
    seed: u64,
    tolerance: f64,
    out_json: *mut *mut c_char,
) -> QmStatus {
    guarded(|| {
        let Ok(handle) = deref_handle(channel) else {
            return QmStatus::NullPointer;
        };
        if require_out(out_json).is_err() {
            return QmStatus::NullPointer;
        }
        let build = || -> Result<String, QmcError> {
            let tol = tolerance_from(tolerance)?;
            let d = decompose_state_space(&handle.0, seed, &tol)?;
            let report = DecompositionReport {
                bscc_dimensions: d.bscc_dimensions(),
                bsccs: d.bsccs.iter().map(SubspaceReport::new).collect(),
                transient_dimension: d.transient.dim(),
                transient: SubspaceReport::new(&d.transient),
                seed,
                tolerance: tol,
            };
            Ok(to_json_pretty(&report))
        };
        match build() {
            Ok(text) => {
                string_out(text, out_json);
                QmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Whether the subspace is a BSCC of the channel (1 yes, 0 no).
#[no_mangle]
pub unsafe extern "C" fn qm_check_bscc(
    channel: *const QmChannel,
    subspace: *const QmSubspace,
    tolerance: f64,
    out: *mut i32,
) -> QmStatus {
    guarded(|| {
        let (Ok(ch), Ok(sub)) = (deref_handle(channel), deref_handle(subspace)) else {
            return QmStatus::NullPointer;
        };
        if require_out(out).is_err() {
            return QmStatus::NullPointer;
        }
        let build = || -> Result<bool, QmcError> {
            let tol = tolerance_from(tolerance)?;
            check_bscc(&ch.0, &sub.0, &tol)
        };
        match build() {
            Ok(result) => {
                *out = result as i32;
                QmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

type ProbabilityFn =
    fn(&Channel, &DensityOperator, &Subspace, &ToleranceConfig) -> Result<AnalysisReport, QmcError>;

unsafe fn probability_call(
    channel: *const QmChannel,
    state: *const QmState,
    target: *const QmSubspace,
    tolerance: f64,
    out: *mut f64,
    compute: ProbabilityFn,
) -> QmStatus {
    let (Ok(ch), Ok(rho), Ok(g)) = (
        deref_handle(channel),
        deref_handle(state),
        deref_handle(target),
    ) else {
        return QmStatus::NullPointer;
    };
    if require_out(out).is_err() {
        return QmStatus::NullPointer;
    }
    let build = || -> Result<f64, QmcError> {
        let tol = tolerance_from(tolerance)?;
        Ok(compute(&ch.0, &rho.0, &g.0, &tol)?.probability)
    };
    match build() {
        Ok(p) => {
            *out = p;
            QmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Probability of ever reaching the target subspace from the state.
#[no_mangle]
pub unsafe extern "C" fn qm_reach_probability(
    channel: *const QmChannel,
    state: *const QmState,
    target: *const QmSubspace,
    tolerance: f64,
    out: *mut f64,
) -> QmStatus {
    guarded(|| probability_call(channel, state, target, tolerance, out, reach_probability))
}

/// Probability of eventually staying inside the target subspace forever.
#[no_mangle]
pub unsafe extern "C" fn qm_persistence_probability(
    channel: *const QmChannel,
    state: *const QmState,
    target: *const QmSubspace,
    tolerance: f64,
    out: *mut f64,
) -> QmStatus {
    guarded(|| probability_call(channel, state, target, tolerance, out, persistence_probability))
}

/// Probability of visiting the target subspace infinitely often.
#[no_mangle]
pub unsafe extern "C" fn qm_repeated_reach_probability(
    channel: *const QmChannel,
    state: *const QmState,
    target: *const QmSubspace,
    tolerance: f64,
    out: *mut f64,
) -> QmStatus {
    guarded(|| {
        probability_call(
            channel,
            state,
            target,
            tolerance,
            out,
            repeated_reachability_probability,
        )
    })
}

/// Detailed probability report as JSON (probability, witness subspace,
/// effective target dimension).
#[no_mangle]
pub unsafe extern "C" fn qm_probability_report(
    channel: *const QmChannel,
    state: *const QmState,
    target: *const QmSubspace,
    kind: QmAnalysisKind,
    tolerance: f64,
    out_json: *mut *mut c_char,
) -> QmStatus {
    guarded(|| {
        let (Ok(ch), Ok(rho), Ok(g)) = (
            deref_handle(channel),
            deref_handle(state),
            deref_handle(target),
        ) else {
            return QmStatus::NullPointer;
        };
        if require_out(out_json).is_err() {
            return QmStatus::NullPointer;
        }
        let build = || -> Result<String, QmcError> {
            let tol = tolerance_from(tolerance)?;
            let compute: ProbabilityFn = match kind {
                QmAnalysisKind::Reach => reach_probability,
                QmAnalysisKind::RepeatedReach => repeated_reachability_probability,
                QmAnalysisKind::Persistence => persistence_probability,
            };
            let report = compute(&ch.0, &rho.0, &g.0, &tol)?;
            let name = match report.kind {
                AnalysisKind::Reach => "reach",
                AnalysisKind::RepeatedReach => "repeated-reach",
                AnalysisKind::Persistence => "persistence",
            };
            Ok(to_json_pretty(&ProbabilityReport {
                kind: name.into(),
                probability: report.probability,
                witness: report.witness.as_ref().map(SubspaceReport::new),
                effective_target_dimension: report.effective_target_dim,
                oracle_steps: None,
                oracle_value: None,
                tolerance: tol,
            }))
        };
        match build() {
            Ok(text) => {
                string_out(text, out_json);
                QmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Which probability a `qm_probability_report` call computes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmAnalysisKind {
    Reach = 0,
    RepeatedReach = 1,
    Persistence = 2,
}

/// The subspace reachable from the state, as a JSON subspace report.
#[no_mangle]
pub unsafe extern "C" fn qm_reachable_space(
    channel: *const QmChannel,
    state: *const QmState,
    tolerance: f64,
    out_json: *mut *mut c_char,
) -> QmStatus {
    guarded(|| {
        let (Ok(ch), Ok(rho)) = (deref_handle(channel), deref_handle(state)) else {
            return QmStatus::NullPointer;
        };
        if require_out(out_json).is_err() {
            return QmStatus::NullPointer;
        }
        let build = || -> Result<String, QmcError> {
            let tol = tolerance_from(tolerance)?;
            let space = reachable_space(&ch.0, &rho.0, &tol)?;
            Ok(to_json_pretty(&SubspaceOnlyReport {
                subspace: SubspaceReport::new(&space),
                tolerance: tol,
            }))
        };
        match build() {
            Ok(text) => {
                string_out(text, out_json);
                QmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
