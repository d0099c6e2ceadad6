//! C ABI over the rsgame solvers.
//!
//! Every fallible call returns an [`RsgStatus`]; on failure the message is
//! kept per thread and can be copied out with [`rsg_last_error`]. Handles are
//! opaque and must be released with their `_free` function. Strings returned
//! by the library are released with [`rsg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rsgame::discounted::GridSpec;
use rsgame::ergodic::{perron_value, solve_nash_ergodic, ErgodicIterSpec, ErgodicSolution};
use rsgame::model::ModelFile;
use rsgame::nash_discounted::{solve_nash_discounted, IterSpec};
use rsgame::report::to_json_string;
use rsgame::{Error, MixedAction, Player, RiskParams, StationaryProfile};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RsgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidModel = 3,
    InvalidArgument = 4,
    NotConverged = 5,
    AssumptionFailed = 6,
    Reducible = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

/// A validated model together with its optional Lyapunov certificate.
pub struct RsgModel {
    file: ModelFile,
}

/// Result of an ergodic Nash solve.
pub struct RsgErgodic {
    sol: ErgodicSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RsgStatus {
    match e {
        Error::Model(_) => RsgStatus::InvalidModel,
        Error::DimensionMismatch { .. } | Error::InvalidArgument(_) => RsgStatus::InvalidArgument,
        Error::NonConvergence { .. } | Error::EnvelopeViolation { .. } | Error::PolicyCycle { .. } => RsgStatus::NotConverged,
        Error::Assumption { .. } => RsgStatus::AssumptionFailed,
        Error::Reducible { .. } => RsgStatus::Reducible,
        Error::Io(_) | Error::Json(_) => RsgStatus::Internal,
    }
}

fn fail(status: RsgStatus, msg: impl Into<String>) -> RsgStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), RsgStatus>) -> RsgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RsgStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(RsgStatus::Internal, "panic inside rsgame"),
    }
}

fn lift<T>(r: rsgame::Result<T>) -> Result<T, RsgStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn nonnull<T>(p: *const T, what: &str) -> Result<(), RsgStatus> {
    if p.is_null() {
        Err(fail(RsgStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn player(k: u8) -> Result<Player, RsgStatus> {
    Player::from_number(k).ok_or_else(|| fail(RsgStatus::InvalidArgument, format!("player must be 1 or 2, got {k}")))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rsg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (always
/// NUL-terminated when `len > 0`) and returns the full message length
/// excluding the terminator; 0 when there is no error.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn rsg_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Parses and validates a JSON model.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rsg_model_from_json(json: *const c_char, out: *mut *mut RsgModel) -> RsgStatus {
    guard(|| {
        nonnull(json, "json")?;
        nonnull(out, "out")?;
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| fail(RsgStatus::InvalidUtf8, e.to_string()))?;
        let file = ModelFile::parse(text).map_err(|e| fail(RsgStatus::InvalidModel, e.to_string()))?;
        *out = Box::into_raw(Box::new(RsgModel { file }));
        Ok(())
    })
}

/// # Safety
/// `model` must come from [`rsg_model_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rsg_model_free(model: *mut RsgModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rsg_model_n_states(model: *const RsgModel, out: *mut usize) -> RsgStatus {
    guard(|| {
        nonnull(model, "model")?;
        nonnull(out, "out")?;
        *out = (*model).file.model.n_states();
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rsg_model_n_actions(model: *const RsgModel, player_no: u8, out: *mut usize) -> RsgStatus {
    guard(|| {
        nonnull(model, "model")?;
        nonnull(out, "out")?;
        *out = (*model).file.model.n_actions(player(player_no)?);
        Ok(())
    })
}

unsafe fn column(w: *const f64, n: usize, m: usize, what: &str) -> Result<Vec<MixedAction>, RsgStatus> {
    nonnull(w, what)?;
    let flat = std::slice::from_raw_parts(w, n * m);
    flat.chunks(m)
        .map(|c| MixedAction::new(c.to_vec()))
        .collect::<rsgame::Result<Vec<_>>>()
        .map_err(|e| fail(RsgStatus::InvalidArgument, format!("{what}: {e}")))
}

/// Principal-eigenvalue evaluation of a stationary profile. `w1` and `w2`
/// hold row-major weights, `n_states x n_actions(k)`. Writes `rho` and, if
/// `psi` is non-null, the eigenvector normalised at `i0` (`n_states` values).
///
/// # Safety
/// Pointers must be valid for the sizes above.
#[no_mangle]
pub unsafe extern "C" fn rsg_perron_value(
    model: *const RsgModel,
    w1: *const f64,
    w2: *const f64,
    player_no: u8,
    theta: f64,
    i0: usize,
    rho: *mut f64,
    psi: *mut f64,
) -> RsgStatus {
    guard(|| {
        nonnull(model, "model")?;
        nonnull(rho, "rho")?;
        let m = &(*model).file.model;
        let n = m.n_states();
        let p1 = column(w1, n, m.n_actions(Player::One), "w1")?;
        let p2 = column(w2, n, m.n_actions(Player::Two), "w2")?;
        let sol = lift(perron_value(m, &StationaryProfile::new(p1, p2), player(player_no)?, theta, i0))?;
        *rho = sol.rho;
        if !psi.is_null() {
            ptr::copy_nonoverlapping(sol.psi.as_ptr(), psi, n);
        }
        Ok(())
    })
}

/// Ergodic Nash solve. Uses the model's Lyapunov certificate when it has one
/// (its hypotheses are then enforced), else reference state 0.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rsg_solve_ergodic(model: *const RsgModel, theta1: f64, theta2: f64, out: *mut *mut RsgErgodic) -> RsgStatus {
    guard(|| {
        nonnull(model, "model")?;
        nonnull(out, "out")?;
        let f = &(*model).file;
        let sol = lift(solve_nash_ergodic(&f.model, theta1, theta2, f.lyapunov.as_ref(), &ErgodicIterSpec::default()))?;
        *out = Box::into_raw(Box::new(RsgErgodic { sol }));
        Ok(())
    })
}

/// # Safety
/// `sol` must come from [`rsg_solve_ergodic`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rsg_ergodic_free(sol: *mut RsgErgodic) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Writes `rho[0..2]`, `gaps[0..2]` and the certification flag; any output
/// pointer may be null.
///
/// # Safety
/// Non-null outputs must be writable for two doubles (one bool).
#[no_mangle]
pub unsafe extern "C" fn rsg_ergodic_summary(sol: *const RsgErgodic, rho: *mut f64, gaps: *mut f64, certified: *mut bool) -> RsgStatus {
    guard(|| {
        nonnull(sol, "solution")?;
        let s = &(*sol).sol;
        if !rho.is_null() {
            ptr::copy_nonoverlapping(s.rho.as_ptr(), rho, 2);
        }
        if !gaps.is_null() {
            ptr::copy_nonoverlapping(s.gaps.as_ptr(), gaps, 2);
        }
        if !certified.is_null() {
            *certified = s.certified;
        }
        Ok(())
    })
}

/// Copies player `k`'s eigenvector (`n_states` values).
///
/// # Safety
/// `buf` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rsg_ergodic_psi(sol: *const RsgErgodic, player_no: u8, buf: *mut f64, len: usize) -> RsgStatus {
    guard(|| {
        nonnull(sol, "solution")?;
        nonnull(buf, "buf")?;
        let v = &(*sol).sol.psi[player(player_no)?.index()];
        if len < v.len() {
            return Err(fail(RsgStatus::BufferTooSmall, format!("need {} doubles", v.len())));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}

/// Copies player `k`'s equilibrium strategy, row-major
/// `n_states x n_actions(k)`.
///
/// # Safety
/// `buf` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rsg_ergodic_strategy(sol: *const RsgErgodic, player_no: u8, buf: *mut f64, len: usize) -> RsgStatus {
    guard(|| {
        nonnull(sol, "solution")?;
        nonnull(buf, "buf")?;
        let col = (*sol).sol.profile.column(player(player_no)?);
        let flat: Vec<f64> = col.iter().flat_map(|a| a.weights().iter().copied()).collect();
        if len < flat.len() {
            return Err(fail(RsgStatus::BufferTooSmall, format!("need {} doubles", flat.len())));
        }
        ptr::copy_nonoverlapping(flat.as_ptr(), buf, flat.len());
        Ok(())
    })
}

/// Discounted Nash solve; writes a JSON report (release with
/// [`rsg_string_free`]) and whether the result is certified.
///
/// # Safety
/// `model` must be a live handle, `json_out` writable, `certified` writable
/// or null.
#[no_mangle]
pub unsafe extern "C" fn rsg_solve_discounted_json(
    model: *const RsgModel,
    theta1: f64,
    theta2: f64,
    alpha: f64,
    intervals: usize,
    strict_arat: bool,
    json_out: *mut *mut c_char,
    certified: *mut bool,
) -> RsgStatus {
    guard(|| {
        nonnull(model, "model")?;
        nonnull(json_out, "json_out")?;
        let m = &(*model).file.model;
        let params = lift(RiskParams::new(theta1, theta2, f64::INFINITY, alpha))?;
        let spec = IterSpec {
            strict_arat,
            grid: GridSpec::with_intervals(intervals),
            ..IterSpec::default()
        };
        let sol = lift(solve_nash_discounted(m, &params, &spec))?;
        let text = lift(to_json_string(&sol))?;
        if !certified.is_null() {
            *certified = sol.certified;
        }
        *json_out = CString::new(text).map_err(|e| fail(RsgStatus::Internal, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rsg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
