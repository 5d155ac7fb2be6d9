//! C interface to the query engine.
//!
//! Objects are opaque handles created by `ldq_*_open`/`ldq_*_parse`/`ldq_exec_*`
//! and released with the matching `*_free` function. Fallible functions return
//! an [`LdqErrorCode`] and write their result through an out-pointer; the
//! message of the last failure on the calling thread is available from
//! [`ldq_last_error_message`]. Strings returned to the caller are owned by the
//! caller and must be released with [`ldq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use ldq_core::encoding::{enc_solution_set, enc_valuation};
use ldq_core::engine::{
    exec_full_web, exec_reach_streaming, exec_reach_terminating, ExecutionReport, SolutionStream,
    Status, StreamEvent,
};
use ldq_core::parser::{parse_expression, print_expression};
use ldq_core::reach::{parse_seed_list, Budget, ReachabilityCriterion};
use ldq_core::web::{load_web, open_web, WebOfLinkedData};
use ldq_core::{SparqlExpression, Uri, Valuation};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdqErrorCode {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Web = 3,
    Parse = 4,
    Criterion = 5,
    Seeds = 6,
    BudgetRequired = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdqStatus {
    Complete = 0,
    BudgetExhausted = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdqStreamEvent {
    /// A new solution was written to the out-parameters.
    Solution = 0,
    /// Execution ended with the complete result.
    Complete = 1,
    /// Execution ended because the budget ran out.
    BudgetExhausted = 2,
    /// The stream already finished.
    End = 3,
    /// Invalid arguments; see `ldq_last_error_message`.
    Error = 4,
}

/// A Web of Linked Data.
pub struct LdqWeb(Arc<dyn WebOfLinkedData>);

/// A parsed query.
pub struct LdqQuery(SparqlExpression);

/// The result of a finished execution. Solutions are kept in canonical order.
pub struct LdqReport {
    report: ExecutionReport,
    lines: Vec<CString>,
}

/// A streaming execution.
pub struct LdqStream(SolutionStream<Arc<dyn WebOfLinkedData>>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(LdqErrorCode, String);

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LdqErrorCode {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LdqErrorCode::Ok,
        Ok(Err(Failure(code, message))) => {
            set_error(message);
            code
        }
        Err(_) => {
            set_error("internal panic".to_owned());
            LdqErrorCode::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            LdqErrorCode::NullArgument,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            LdqErrorCode::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(LdqErrorCode::NullArgument, format!("{what} is null")))
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(
            LdqErrorCode::NullArgument,
            "out is null".to_owned(),
        ))
    } else {
        Ok(())
    }
}

fn budget(max_lookups: u64) -> Budget {
    if max_lookups == 0 {
        Budget::Unlimited
    } else {
        Budget::Limited(max_lookups)
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes removed")
        .into_raw()
}

fn status(s: Status) -> LdqStatus {
    match s {
        Status::Complete => LdqStatus::Complete,
        Status::BudgetExhausted => LdqStatus::BudgetExhausted,
    }
}

unsafe fn reach_args(
    criterion: *const c_char,
    seeds: *const c_char,
) -> Result<(ReachabilityCriterion, Vec<Uri>), Failure> {
    let c = ReachabilityCriterion::from_text(text(criterion, "criterion")?)
        .map_err(|e| Failure(LdqErrorCode::Criterion, e.to_string()))?;
    let seeds = parse_seed_list(text(seeds, "seeds")?)
        .map_err(|e| Failure(LdqErrorCode::Seeds, e.to_string()))?;
    if seeds.is_empty() {
        return Err(Failure(
            LdqErrorCode::Seeds,
            "the seed set is empty".to_owned(),
        ));
    }
    Ok((c, seeds))
}

fn into_report(report: ExecutionReport) -> *mut LdqReport {
    let text = enc_solution_set(&report.solutions);
    let lines = text
        .as_str()
        .lines()
        .map(|l| CString::new(l).expect("no nul bytes"))
        .collect();
    Box::into_raw(Box::new(LdqReport { report, lines }))
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ldq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ldq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Opens a web file or a generator selector (`gen:numbers`, `gen:chain:N|inf`,
/// `gen:star:N|inf`).
///
/// # Safety
/// `selector` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldq_web_open(
    selector: *const c_char,
    out: *mut *mut LdqWeb,
) -> LdqErrorCode {
    guard(|| {
        out_ptr(out)?;
        let web = open_web(text(selector, "selector")?)
            .map_err(|e| Failure(LdqErrorCode::Web, e.to_string()))?;
        *out = Box::into_raw(Box::new(LdqWeb(web)));
        Ok(())
    })
}

/// Builds a finite web from its JSON description.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldq_web_from_json(
    json: *const c_char,
    out: *mut *mut LdqWeb,
) -> LdqErrorCode {
    guard(|| {
        out_ptr(out)?;
        let web =
            load_web(text(json, "json")?).map_err(|e| Failure(LdqErrorCode::Web, e.to_string()))?;
        *out = Box::into_raw(Box::new(LdqWeb(Arc::new(web))));
        Ok(())
    })
}

/// # Safety
/// `web` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ldq_web_free(web: *mut LdqWeb) {
    if !web.is_null() {
        drop(Box::from_raw(web));
    }
}

/// # Safety
/// `query` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldq_query_parse(
    query: *const c_char,
    out: *mut *mut LdqQuery,
) -> LdqErrorCode {
    guard(|| {
        out_ptr(out)?;
        let p = parse_expression(text(query, "query")?)
            .map_err(|e| Failure(LdqErrorCode::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(LdqQuery(p)));
        Ok(())
    })
}

/// The query in canonical syntax, or null if `query` is null.
///
/// # Safety
/// `query` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ldq_query_to_string(query: *const LdqQuery) -> *mut c_char {
    query
        .as_ref()
        .map_or(ptr::null_mut(), |q| owned_string(print_expression(&q.0)))
}

/// # Safety
/// `query` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ldq_query_free(query: *mut LdqQuery) {
    if !query.is_null() {
        drop(Box::from_raw(query));
    }
}

/// Full-web evaluation. `max_lookups == 0` means unlimited, which fails with
/// `BudgetRequired` on webs that cannot be materialized.
///
/// # Safety
/// `web` and `query` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldq_exec_full(
    web: *const LdqWeb,
    query: *const LdqQuery,
    max_lookups: u64,
    out: *mut *mut LdqReport,
) -> LdqErrorCode {
    guard(|| {
        out_ptr(out)?;
        let (web, query) = (handle(web, "web")?, handle(query, "query")?);
        let report = exec_full_web(&web.0, &query.0, budget(max_lookups))
            .map_err(|e| Failure(LdqErrorCode::BudgetRequired, e.to_string()))?;
        *out = into_report(report);
        Ok(())
    })
}

/// Reachability-based evaluation. `seeds` is a comma-separated list of URIs;
/// `max_lookups == 0` means unlimited.
///
/// # Safety
/// Handles must be live, strings nul-terminated, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldq_exec_reach(
    web: *const LdqWeb,
    query: *const LdqQuery,
    criterion: *const c_char,
    seeds: *const c_char,
    max_lookups: u64,
    out: *mut *mut LdqReport,
) -> LdqErrorCode {
    guard(|| {
        out_ptr(out)?;
        let (web, query) = (handle(web, "web")?, handle(query, "query")?);
        let (c, seeds) = reach_args(criterion, seeds)?;
        *out = into_report(exec_reach_terminating(
            &web.0,
            &seeds,
            &c,
            &query.0,
            budget(max_lookups),
        ));
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ldq_report_status(report: *const LdqReport) -> LdqStatus {
    status((*report).report.status)
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ldq_report_solution_count(report: *const LdqReport) -> usize {
    (*report).lines.len()
}

/// Budgeted lookups performed.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ldq_report_lookups(report: *const LdqReport) -> u64 {
    (*report).report.lookups_spent
}

/// Documents whose data was evaluated.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ldq_report_documents(report: *const LdqReport) -> usize {
    (*report).report.part_size
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ldq_report_iterations(report: *const LdqReport) -> u64 {
    (*report).report.iterations
}

/// The canonical encoding of solution `index`, or null if out of range. The
/// pointer is owned by the report.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ldq_report_solution(
    report: *const LdqReport,
    index: usize,
) -> *const c_char {
    let report = &*report;
    report.lines.get(index).map_or(ptr::null(), |s| s.as_ptr())
}

/// All solutions, one canonical line each. Release with `ldq_string_free`.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ldq_report_encoded(report: *const LdqReport) -> *mut c_char {
    owned_string(enc_solution_set(&(*report).report.solutions).into_string())
}

/// # Safety
/// `report` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ldq_report_free(report: *mut LdqReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Starts a streaming reachability-based execution. The stream keeps the web
/// alive on its own.
///
/// # Safety
/// Handles must be live, strings nul-terminated, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldq_stream_open(
    web: *const LdqWeb,
    query: *const LdqQuery,
    criterion: *const c_char,
    seeds: *const c_char,
    max_lookups: u64,
    out: *mut *mut LdqStream,
) -> LdqErrorCode {
    guard(|| {
        out_ptr(out)?;
        let (web, query) = (handle(web, "web")?, handle(query, "query")?);
        let (c, seeds) = reach_args(criterion, seeds)?;
        let stream = exec_reach_streaming(
            Arc::clone(&web.0),
            &seeds,
            &c,
            &query.0,
            budget(max_lookups),
        );
        *out = Box::into_raw(Box::new(LdqStream(stream)));
        Ok(())
    })
}

/// Advances the stream. On `Solution`, `*iteration` receives the iteration
/// number and `*solution` a string to release with `ldq_string_free`; either
/// out-pointer may be null.
///
/// # Safety
/// `stream` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldq_stream_next(
    stream: *mut LdqStream,
    iteration: *mut u64,
    solution: *mut *mut c_char,
) -> LdqStreamEvent {
    let Some(stream) = stream.as_mut() else {
        set_error("stream is null".to_owned());
        return LdqStreamEvent::Error;
    };
    let next = catch_unwind(AssertUnwindSafe(|| stream.0.next()));
    match next {
        Ok(Some(StreamEvent::Solution {
            iteration: j,
            valuation,
        })) => {
            write_solution(j, &valuation, iteration, solution);
            LdqStreamEvent::Solution
        }
        Ok(Some(StreamEvent::Finished(Status::Complete))) => LdqStreamEvent::Complete,
        Ok(Some(StreamEvent::Finished(Status::BudgetExhausted))) => LdqStreamEvent::BudgetExhausted,
        Ok(None) => LdqStreamEvent::End,
        Err(_) => {
            set_error("internal panic".to_owned());
            LdqStreamEvent::Error
        }
    }
}

unsafe fn write_solution(j: u64, mu: &Valuation, iteration: *mut u64, solution: *mut *mut c_char) {
    if !iteration.is_null() {
        *iteration = j;
    }
    if !solution.is_null() {
        *solution = owned_string(enc_valuation(mu).into_string());
    }
}

/// Budgeted lookups performed so far.
///
/// # Safety
/// `stream` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ldq_stream_lookups(stream: *const LdqStream) -> u64 {
    (*stream).0.lookups_spent()
}

/// # Safety
/// `stream` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ldq_stream_free(stream: *mut LdqStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}
