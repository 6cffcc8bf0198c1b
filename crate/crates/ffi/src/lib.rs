//! C ABI over the `nematic` library.
//!
//! Solvers are created from a JSON run configuration (the same document the
//! `nematic` binary reads) and handed out as opaque pointers. Every function
//! returns a [`NematicStatus`]; on failure the message is available from
//! [`nematic_last_error`] on the same thread. Panics are caught at the
//! boundary and reported as [`NematicStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nematic::beris_edwards::{BESolver, BEState};
use nematic::coefficients::{check_dissipation, derive_coefficients, identity_checks};
use nematic::config::RunConfig;
use nematic::ericksen_leslie::{ELSolver, ELState};
use nematic::snapshot::Snapshot;
use nematic::Error;

/// Result of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NematicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Validation = 4,
    Cfl = 5,
    InvalidInput = 6,
    Consistency = 7,
    SolverAbort = 8,
    BufferTooSmall = 9,
    Io = 10,
    Panic = 11,
    Other = 12,
}

impl From<&Error> for NematicStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Config { .. } | Error::Json(_) => NematicStatus::Config,
            Error::Validation(_) | Error::SingularParameter(_) | Error::DegeneratePotential => NematicStatus::Validation,
            Error::Cfl(_) => NematicStatus::Cfl,
            Error::InvalidInput(_) | Error::NotInRange { .. } => NematicStatus::InvalidInput,
            Error::Consistency(_) => NematicStatus::Consistency,
            Error::SolverAbort { .. } => NematicStatus::SolverAbort,
            Error::Io(_) => NematicStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(NematicStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(NematicStatus::from(&e), e.to_string())
    }
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NematicStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NematicStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            NematicStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(NematicStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(NematicStatus::InvalidUtf8, e.to_string()))
}

unsafe fn read_config(json: *const c_char) -> Result<RunConfig, Failure> {
    let cfg = RunConfig::from_json(read_str(json)?)?;
    cfg.validate()?;
    Ok(cfg)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn handle<'a, T>(h: *mut T) -> Result<&'a mut T, Failure> {
    h.as_mut().ok_or_else(null)
}

/// Copy `src` into a caller buffer of `len` doubles.
unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(null());
    }
    if len < src.len() {
        return Err(Failure(NematicStatus::BufferTooSmall, format!("buffer holds {len} values, need {}", src.len())));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

unsafe fn string_out(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(NematicStatus::Other, e.to_string()))?;
    write_out(out, c.into_raw())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nematic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn nematic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Free a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn nematic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Derived Ericksen-Leslie coefficients of a parameter set.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct NematicCoefficients {
    pub s: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    pub alpha5: f64,
    pub alpha6: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub l0: f64,
    pub c0: f64,
    /// 1 if every coefficient identity and dissipation inequality holds.
    pub checks_pass: i32,
}

/// Compute the coefficient bridge for the material in `config_json`.
///
/// # Safety
/// `config_json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nematic_coefficients(config_json: *const c_char, out: *mut NematicCoefficients) -> NematicStatus {
    guard(|| {
        let p = read_config(config_json)?.material();
        let d = derive_coefficients(&p)?;
        let pass = identity_checks(&p, &d).iter().all(|c| c.pass) && check_dissipation(&d).all_hold();
        write_out(
            out,
            NematicCoefficients {
                s: d.s,
                k1: d.k1,
                k2: d.k2,
                k3: d.k3,
                k4: d.k4,
                alpha1: d.alpha1,
                alpha2: d.alpha2,
                alpha3: d.alpha3,
                alpha4: d.alpha4,
                alpha5: d.alpha5,
                alpha6: d.alpha6,
                gamma1: d.gamma1,
                gamma2: d.gamma2,
                beta1: d.beta1,
                beta2: d.beta2,
                beta3: d.beta3,
                l0: d.l0,
                c0: d.c0,
                checks_pass: pass as i32,
            },
        )
    })
}

/// Opaque Beris-Edwards solver with its current state.
pub struct NematicBe {
    solver: BESolver,
    state: BEState,
    config: RunConfig,
}

/// Opaque Ericksen-Leslie solver with its current state.
pub struct NematicEl {
    solver: ELSolver,
    state: ELState,
    config: RunConfig,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct NematicBeEnergy {
    pub kinetic: f64,
    pub bulk: f64,
    pub elastic: f64,
    pub total: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct NematicElEnergy {
    pub kinetic: f64,
    pub frank: f64,
    pub total: f64,
}

/// Create a Beris-Edwards solver with well-prepared initial data.
///
/// # Safety
/// `config_json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nematic_be_new(config_json: *const c_char, out: *mut *mut NematicBe) -> NematicStatus {
    guard(|| {
        let config = read_config(config_json)?;
        let ops = config.ops()?;
        let solver = BESolver::new(ops.clone(), config.material(), config.be_step_config())?;
        let state = config.initial_be(&ops)?;
        write_out(out, Box::into_raw(Box::new(NematicBe { solver, state, config })))
    })
}

/// # Safety
/// `h` must come from [`nematic_be_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nematic_be_free(h: *mut NematicBe) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Advance by `steps` time steps. On failure the state is left at the last
/// completed step.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nematic_be_step(h: *mut NematicBe, steps: u64) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        for _ in 0..steps {
            h.solver.step(&mut h.state)?;
        }
        Ok(())
    })
}

/// Current time, completed step count and number of grid nodes.
///
/// # Safety
/// `h` must be a live handle; each output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn nematic_be_info(h: *mut NematicBe, t: *mut f64, step: *mut u64, nodes: *mut usize) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        if !t.is_null() {
            t.write(h.state.t);
        }
        if !step.is_null() {
            step.write(h.state.step);
        }
        if !nodes.is_null() {
            nodes.write(h.state.q.grid().node_count());
        }
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nematic_be_energy(h: *mut NematicBe, out: *mut NematicBeEnergy) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        let e = h.solver.energy(&h.state);
        write_out(out, NematicBeEnergy { kinetic: e.kinetic, bulk: e.bulk, elastic: e.elastic, total: e.total })
    })
}

/// Copy Q as 5 doubles per node `(xx, xy, xz, yy, yz)`, node-major.
///
/// # Safety
/// `h` must be a live handle and `buf` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nematic_be_copy_q(h: *mut NematicBe, buf: *mut f64, len: usize) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        let flat: Vec<f64> = h.state.q.values().iter().flat_map(|q| q.components()).collect();
        copy_out(&flat, buf, len)
    })
}

/// Copy the velocity as 3 doubles per node, node-major.
///
/// # Safety
/// `h` must be a live handle and `buf` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nematic_be_copy_velocity(h: *mut NematicBe, buf: *mut f64, len: usize) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        let flat: Vec<f64> = h.state.v.values().iter().flat_map(|v| [v.x, v.y, v.z]).collect();
        copy_out(&flat, buf, len)
    })
}

/// Serialize the current state as a JSON snapshot. Free the result with
/// [`nematic_string_free`].
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nematic_be_snapshot(h: *mut NematicBe, out: *mut *mut c_char) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        let config = serde_json::to_value(&h.config).map_err(Error::from)?;
        string_out(Snapshot::from_be(&h.state, config).to_json()?, out)
    })
}

/// Create an Ericksen-Leslie solver from the configured initial director.
///
/// # Safety
/// `config_json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nematic_el_new(config_json: *const c_char, out: *mut *mut NematicEl) -> NematicStatus {
    guard(|| {
        let config = read_config(config_json)?;
        let d = derive_coefficients(&config.material())?;
        let solver = ELSolver::new(config.ops()?, d, config.el_step_config())?;
        let state = config.initial_el()?;
        write_out(out, Box::into_raw(Box::new(NematicEl { solver, state, config })))
    })
}

/// # Safety
/// `h` must come from [`nematic_el_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nematic_el_free(h: *mut NematicEl) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Advance by `steps` time steps. On failure the state is left at the last
/// completed step.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nematic_el_step(h: *mut NematicEl, steps: u64) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        for _ in 0..steps {
            h.solver.step(&mut h.state)?;
        }
        Ok(())
    })
}

/// Current time, completed step count and number of grid nodes.
///
/// # Safety
/// `h` must be a live handle; each output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn nematic_el_info(h: *mut NematicEl, t: *mut f64, step: *mut u64, nodes: *mut usize) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        if !t.is_null() {
            t.write(h.state.t);
        }
        if !step.is_null() {
            step.write(h.state.step);
        }
        if !nodes.is_null() {
            nodes.write(h.state.n.grid().node_count());
        }
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nematic_el_energy(h: *mut NematicEl, out: *mut NematicElEnergy) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        let e = h.solver.energy(&h.state);
        write_out(out, NematicElEnergy { kinetic: e.kinetic, frank: e.frank, total: e.total })
    })
}

/// Copy the director as 3 doubles per node, node-major.
///
/// # Safety
/// `h` must be a live handle and `buf` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nematic_el_copy_director(h: *mut NematicEl, buf: *mut f64, len: usize) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        let flat: Vec<f64> = h.state.n.values().iter().flat_map(|v| [v.x, v.y, v.z]).collect();
        copy_out(&flat, buf, len)
    })
}

/// Copy the velocity as 3 doubles per node, node-major.
///
/// # Safety
/// `h` must be a live handle and `buf` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nematic_el_copy_velocity(h: *mut NematicEl, buf: *mut f64, len: usize) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        let flat: Vec<f64> = h.state.v.values().iter().flat_map(|v| [v.x, v.y, v.z]).collect();
        copy_out(&flat, buf, len)
    })
}

/// Serialize the current state as a JSON snapshot. Free the result with
/// [`nematic_string_free`].
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nematic_el_snapshot(h: *mut NematicEl, out: *mut *mut c_char) -> NematicStatus {
    guard(|| {
        let h = handle(h)?;
        let config = serde_json::to_value(&h.config).map_err(Error::from)?;
        string_out(Snapshot::from_el(&h.state, config).to_json()?, out)
    })
}
