//! C ABI over the `mixrisk` solver.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Every function returns a
//! [`MixriskStatus`]; on failure, [`mixrisk_last_error_message`] describes
//! the error on the calling thread until the next failing call there.
//! Strings returned through `char **` are NUL-terminated UTF-8 and must be
//! released with [`mixrisk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mixrisk::quadrature::Quadrature;
use mixrisk::report::{render_csv, render_table};
use mixrisk::saving::{
    precautionary_report, Agreement, IndicatorKind, PrecautionaryReport, SavingScenario, Sign, Situation,
};
use mixrisk::scenario_file::parse_scenario_file;
use mixrisk::taylor::{epsilon_scaling_study, ThresholdReport};
use mixrisk::{Error, ErrorCategory};

/// Result codes. Values 1 to 4 match the exit codes of the `mixrisk`
/// binary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixriskStatus {
    Ok = 0,
    Io = 1,
    /// Syntax, schema, semantic or configuration error.
    Parse = 2,
    Solver = 3,
    Numerical = 4,
    NullPointer = 10,
    /// An argument is out of range or not valid UTF-8.
    InvalidArgument = 11,
    /// The requested item does not exist for this model.
    NotAvailable = 12,
    /// A Rust panic was caught at the boundary.
    Panic = 13,
}

/// Situation selector; `INCOME_ONLY` does not exist in the probabilistic
/// model.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixriskSituation {
    FullRisk = 0,
    IncomeOnly = 1,
    BackgroundOnly = 2,
    Certainty = 3,
}

/// Indicator selector; `ADD_BACKGROUND` does not exist in the probabilistic
/// model.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixriskIndicatorKind {
    AddIncome = 0,
    TwoSource = 1,
    AddBackground = 2,
}

/// One indicator with its predicate. Signs are -1, 0 or +1; `agreement` is
/// 1 (agree), 0 (inconclusive) or -1 (disagree).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MixriskIndicator {
    pub value: f64,
    pub sign: i32,
    pub predicate: f64,
    pub predicate_sign: i32,
    pub taylor_gap: f64,
    pub exact_gap: f64,
    pub agreement: i32,
}

/// A parsed and validated scenario.
pub struct MixriskScenario {
    scenario: SavingScenario,
}

/// A solved scenario.
pub struct MixriskReport {
    report: PrecautionaryReport,
    threshold: Option<ThresholdReport>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MixriskStatus {
    match e.category() {
        ErrorCategory::Io => MixriskStatus::Io,
        ErrorCategory::Parse | ErrorCategory::Config => MixriskStatus::Parse,
        ErrorCategory::Solver => MixriskStatus::Solver,
        ErrorCategory::Numerical => MixriskStatus::Numerical,
    }
}

struct Failure(MixriskStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), format!("[{}] {e}", e.category()))
    }
}

fn null(what: &str) -> Failure {
    Failure(MixriskStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `body`, converting errors and panics into a status plus the
/// thread-local message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MixriskStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MixriskStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            MixriskStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or points to a live value of type `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: guaranteed by the caller.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null, and the caller promises it is writable.
    unsafe { out.write(value) };
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(MixriskStatus::InvalidArgument, "output contains a NUL byte".into()))
}

fn sign_code(s: Sign) -> i32 {
    match s {
        Sign::Negative => -1,
        Sign::Zero => 0,
        Sign::Positive => 1,
    }
}

/// Parses a scenario document. `quadrature_nodes` is the node count used
/// when the document does not set one; 0 selects the library default.
///
/// # Safety
/// `json` is null or a NUL-terminated string; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_scenario_from_json(
    json: *const c_char,
    quadrature_nodes: usize,
    out: *mut *mut MixriskScenario,
) -> MixriskStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: non-null and NUL-terminated per the contract.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Failure(MixriskStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let nodes = if quadrature_nodes == 0 { Quadrature::DEFAULT_NODES } else { quadrature_nodes };
        let (_, scenario) = parse_scenario_file(text, nodes)?;
        write_out(out, Box::into_raw(Box::new(MixriskScenario { scenario })), "out")
    })
}

/// # Safety
/// `scenario` is null or a handle from [`mixrisk_scenario_from_json`] that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_scenario_free(scenario: *mut MixriskScenario) {
    if !scenario.is_null() {
        // SAFETY: the handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Solves every situation of the scenario.
///
/// # Safety
/// `scenario` is null or a live handle; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_scenario_solve(
    scenario: *const MixriskScenario,
    out: *mut *mut MixriskReport,
) -> MixriskStatus {
    guard(|| {
        // SAFETY: forwarded contract.
        let sc = &unsafe { deref(scenario, "scenario") }?.scenario;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = precautionary_report(sc)?;
        let threshold = ThresholdReport::matching(sc.config()).transpose()?;
        write_out(out, Box::into_raw(Box::new(MixriskReport { report, threshold })), "out")
    })
}

/// Smallest empirical Taylor convergence order over `n` strictly decreasing
/// risk scales. Writes NaN when every error sits at the noise floor.
///
/// # Safety
/// `scenario` is null or a live handle; `eps` is null or points to `n`
/// doubles; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_scenario_min_taylor_order(
    scenario: *const MixriskScenario,
    eps: *const f64,
    n: usize,
    out: *mut f64,
) -> MixriskStatus {
    guard(|| {
        // SAFETY: forwarded contract.
        let sc = &unsafe { deref(scenario, "scenario") }?.scenario;
        if eps.is_null() {
            return Err(null("eps"));
        }
        // SAFETY: non-null and `n` elements long per the contract.
        let eps = unsafe { std::slice::from_raw_parts(eps, n) };
        let table = epsilon_scaling_study(sc, eps)?;
        write_out(out, table.min_order().unwrap_or(f64::NAN), "out")
    })
}

/// # Safety
/// `report` is null or a handle from [`mixrisk_scenario_solve`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_report_free(report: *mut MixriskReport) {
    if !report.is_null() {
        // SAFETY: the handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(report) });
    }
}

/// Optimal saving in one situation.
///
/// # Safety
/// `report` is null or a live handle; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_report_saving(
    report: *const MixriskReport,
    situation: MixriskSituation,
    out: *mut f64,
) -> MixriskStatus {
    guard(|| {
        // SAFETY: forwarded contract.
        let r = &unsafe { deref(report, "report") }?.report;
        let sit = match situation {
            MixriskSituation::FullRisk => Situation::FullRisk,
            MixriskSituation::IncomeOnly => Situation::IncomeOnly,
            MixriskSituation::BackgroundOnly => Situation::BackgroundOnly,
            MixriskSituation::Certainty => Situation::Certainty,
        };
        let sol = r.solution(sit).ok_or_else(|| {
            Failure(MixriskStatus::NotAvailable, format!("{} is not solved in the {} model", sit.label(), r.kind))
        })?;
        write_out(out, sol.s_opt, "out")
    })
}

/// One precautionary-saving indicator.
///
/// # Safety
/// `report` is null or a live handle; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_report_indicator(
    report: *const MixriskReport,
    kind: MixriskIndicatorKind,
    out: *mut MixriskIndicator,
) -> MixriskStatus {
    guard(|| {
        // SAFETY: forwarded contract.
        let r = &unsafe { deref(report, "report") }?.report;
        let k = match kind {
            MixriskIndicatorKind::AddIncome => IndicatorKind::AddIncome,
            MixriskIndicatorKind::TwoSource => IndicatorKind::TwoSource,
            MixriskIndicatorKind::AddBackground => IndicatorKind::AddBackground,
        };
        let i = r.indicator(k).ok_or_else(|| {
            Failure(MixriskStatus::NotAvailable, format!("{} is not defined in the {} model", k.label(), r.kind))
        })?;
        let agreement = match i.agreement {
            Agreement::Agree => 1,
            Agreement::Inconclusive => 0,
            Agreement::Disagree => -1,
        };
        let value = MixriskIndicator {
            value: i.value,
            sign: sign_code(i.sign),
            predicate: i.predicate,
            predicate_sign: sign_code(i.predicate_sign),
            taylor_gap: i.taylor_gap,
            exact_gap: i.exact_gap,
            agreement,
        };
        write_out(out, value, "out")
    })
}

/// The CSV rendering, identical to `mixrisk solve --outputs csv`.
///
/// # Safety
/// `report` is null or a live handle; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_report_csv(report: *const MixriskReport, out: *mut *mut c_char) -> MixriskStatus {
    guard(|| {
        // SAFETY: forwarded contract.
        let r = unsafe { deref(report, "report") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, into_c_string(render_csv(&r.report))?, "out")
    })
}

/// The aligned text table, identical to `mixrisk solve --outputs table`.
///
/// # Safety
/// `report` is null or a live handle; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_report_table(report: *const MixriskReport, out: *mut *mut c_char) -> MixriskStatus {
    guard(|| {
        // SAFETY: forwarded contract.
        let r = unsafe { deref(report, "report") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, into_c_string(render_table(&r.report, r.threshold.as_ref()))?, "out")
    })
}

/// # Safety
/// `s` is null or a string returned by this library that has not been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn mixrisk_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the pointer came from CString::into_raw and is freed once.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message of the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mixrisk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mixrisk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
