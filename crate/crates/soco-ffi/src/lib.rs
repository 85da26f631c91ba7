//! C ABI over the soco library.
//!
//! Every function returns a [`SocoStatus`]; on failure the message is available from
//! [`soco_last_error`] on the same thread. Sessions are opaque handles that must be released
//! with [`soco_session_free`].

use soco::model::{DataCenterModel, InstanceKind};
use soco::online::OnlineSpec;
use soco::runtime::{solve_offline, trace_stats, OfflineAlgorithm, StreamSession, Trace};
use soco::SocoError;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SocoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    InvalidArgument = 4,
    ParseError = 5,
    InfeasibleLoad = 6,
    InsufficientSupply = 7,
    OutOfBounds = 8,
    Infeasible = 9,
    TooLarge = 10,
    NonConverged = 11,
    NumericalFailure = 12,
    Other = 13,
    Panic = 14,
}

impl From<&SocoError> for SocoStatus {
    fn from(e: &SocoError) -> Self {
        match e {
            SocoError::InvalidArgument(_) | SocoError::Protocol(_) | SocoError::UnknownSession(_) => {
                SocoStatus::InvalidArgument
            }
            SocoError::ParseError { .. } | SocoError::NegativeCount(_) => SocoStatus::ParseError,
            SocoError::InfeasibleLoad { .. } | SocoError::InfeasibleSchedule { .. } => SocoStatus::InfeasibleLoad,
            SocoError::InsufficientSupply { .. } => SocoStatus::InsufficientSupply,
            SocoError::OutOfBounds { .. } => SocoStatus::OutOfBounds,
            SocoError::Infeasible(_) | SocoError::InfeasibleLevel { .. } => SocoStatus::Infeasible,
            SocoError::TooLarge { .. } | SocoError::BudgetExceeded { .. } => SocoStatus::TooLarge,
            SocoError::NonConverged { .. } => SocoStatus::NonConverged,
            SocoError::NoSignChange { .. }
            | SocoError::QuadratureFailure(_)
            | SocoError::NonFinite(_)
            | SocoError::RootBracketFailure(_) => SocoStatus::NumericalFailure,
            _ => SocoStatus::Other,
        }
    }
}

/// Problem class generated from a model.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SocoKind {
    Ssco = 0,
    Sblo = 1,
    Slo = 2,
}

impl From<SocoKind> for InstanceKind {
    fn from(k: SocoKind) -> Self {
        match k {
            SocoKind::Ssco => InstanceKind::Ssco,
            SocoKind::Sblo => InstanceKind::Sblo,
            SocoKind::Slo => InstanceKind::Slo,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocoTraceStats {
    pub pmr: f64,
    pub tpmr: f64,
    pub mean_peak_distance: f64,
    pub mean_valley_length: f64,
    pub diurnal: bool,
}

/// Streaming session of an online algorithm.
pub struct SocoSession {
    inner: StreamSession,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(SocoStatus, String);

impl From<SocoError> for Failure {
    fn from(e: SocoError) -> Self {
        Failure(SocoStatus::from(&e), format!("{}: {e}", e.code()))
    }
}

type FfiResult<T> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> SocoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SocoStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("panic inside soco");
            SocoStatus::Panic
        }
    }
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> FfiResult<&'a str> {
    if ptr.is_null() {
        return Err(Failure(SocoStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| Failure(SocoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a>(ptr: *const f64, len: usize, what: &str) -> FfiResult<&'a [f64]> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Failure(SocoStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn non_null<T>(ptr: *const T, what: &str) -> FfiResult<()> {
    if ptr.is_null() {
        Err(Failure(SocoStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn json_error(e: serde_json::Error) -> Failure {
    Failure(SocoStatus::ParseError, e.to_string())
}

/// Message of the last failed call on this thread; empty after a success.
///
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn soco_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a streaming session.
///
/// `model_json` is a model configuration and `algorithm_json` an algorithm description such
/// as `{"alg":"lcp","window":2}`. `samples` is the number of combined prediction profiles.
///
/// # Safety
/// Both strings must be NUL-terminated and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn soco_session_new(
    model_json: *const c_char,
    kind: SocoKind,
    algorithm_json: *const c_char,
    samples: usize,
    seed: u64,
    out: *mut *mut SocoSession,
) -> SocoStatus {
    guard(|| {
        non_null(out, "out")?;
        let model = DataCenterModel::from_json(text(model_json, "model")?)?;
        let spec: OnlineSpec = serde_json::from_str(text(algorithm_json, "algorithm")?).map_err(json_error)?;
        let inner = StreamSession::new(model, kind.into(), spec, samples, seed)?;
        *out = Box::into_raw(Box::new(SocoSession { inner }));
        Ok(())
    })
}

/// Releases a session; null is ignored.
///
/// # Safety
/// `session` must come from [`soco_session_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn soco_session_free(session: *mut SocoSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Number of slots streamed so far.
///
/// # Safety
/// `session` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn soco_session_slot(session: *const SocoSession) -> usize {
    session.as_ref().map_or(0, |s| s.inner.next_slot() - 1)
}

/// Streams the next slot and writes its configuration.
///
/// `load` holds one count per load type. `predictions_json` may be null or a JSON array
/// `[slot][load type][sample]`. On success `config_len` receives the dimension and `cost`
/// the accumulated cost. If `config_cap` is too small nothing is streamed and
/// `config_len` still receives the needed length.
///
/// # Safety
/// Pointers must be valid for the given lengths; `session` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn soco_session_step(
    session: *mut SocoSession,
    load: *const f64,
    load_len: usize,
    predictions_json: *const c_char,
    config: *mut f64,
    config_cap: usize,
    config_len: *mut usize,
    cost: *mut f64,
) -> SocoStatus {
    guard(|| {
        let s = session.as_mut().ok_or_else(|| Failure(SocoStatus::NullPointer, "session is null".into()))?;
        non_null(config_len, "config_len")?;
        let dim = soco::problem::Problem::dim(s.inner.instance());
        *config_len = dim;
        if config_cap < dim || (dim > 0 && config.is_null()) {
            return Err(Failure(SocoStatus::BufferTooSmall, format!("configuration needs {dim} entries")));
        }
        let load = slice(load, load_len, "load")?.to_vec();
        let predictions = if predictions_json.is_null() {
            Vec::new()
        } else {
            serde_json::from_str(text(predictions_json, "predictions")?).map_err(json_error)?
        };
        let step = s.inner.step(load, predictions)?;
        std::slice::from_raw_parts_mut(config, dim).copy_from_slice(&step.config);
        if !cost.is_null() {
            *cost = step.cost.total;
        }
        Ok(())
    })
}

/// Solves an instance offline.
///
/// `loads` is row-major with `horizon` rows of `types` counts. `algorithm` is one of
/// `brute`, `bcp`, `graph1d`, `graphmd`, `approx` (with `gamma`), `static` or `fractional`.
/// The schedule is written row-major into `schedule`; `rows` receives its number of rows
/// (one for `static`).
///
/// # Safety
/// Pointers must be valid for the given lengths.
#[no_mangle]
pub unsafe extern "C" fn soco_solve_offline(
    model_json: *const c_char,
    kind: SocoKind,
    loads: *const f64,
    horizon: usize,
    types: usize,
    algorithm: *const c_char,
    gamma: f64,
    schedule: *mut f64,
    schedule_cap: usize,
    rows: *mut usize,
    cost: *mut f64,
) -> SocoStatus {
    guard(|| {
        non_null(rows, "rows")?;
        non_null(cost, "cost")?;
        let model = DataCenterModel::from_json(text(model_json, "model")?)?;
        let flat = slice(loads, horizon * types, "loads")?;
        let profiles: Vec<Vec<f64>> = if types == 0 { vec![Vec::new(); horizon] } else { flat.chunks(types).map(<[f64]>::to_vec).collect() };
        let instance = model.generate_instance(kind.into(), &profiles)?;
        let gamma = (gamma > 0.0).then_some(gamma);
        let alg = OfflineAlgorithm::from_name(text(algorithm, "algorithm")?, gamma)?;
        let solution = solve_offline(&instance, alg)?;
        let values: Vec<f64> = solution.schedule.iter().flat_map(|x| x.0.iter().copied()).collect();
        *rows = solution.schedule.horizon();
        if values.len() > schedule_cap || (!values.is_empty() && schedule.is_null()) {
            return Err(Failure(SocoStatus::BufferTooSmall, format!("schedule needs {} entries", values.len())));
        }
        std::slice::from_raw_parts_mut(schedule, values.len()).copy_from_slice(&values);
        *cost = solution.cost;
        Ok(())
    })
}

/// Statistics of a uni-typed load series.
///
/// # Safety
/// `loads` must hold `len` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn soco_trace_stats(
    loads: *const f64,
    len: usize,
    slot_length: f64,
    out: *mut SocoTraceStats,
) -> SocoStatus {
    guard(|| {
        non_null(out, "out")?;
        let values = slice(loads, len, "loads")?;
        let trace = Trace { slot_length, loads: values.iter().map(|l| vec![*l]).collect() };
        let s = trace_stats(&trace);
        *out = SocoTraceStats {
            pmr: s.pmr,
            tpmr: s.tpmr,
            mean_peak_distance: s.mean_peak_distance,
            mean_valley_length: s.mean_valley_length,
            diurnal: s.diurnal,
        };
        Ok(())
    })
}
