use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ldq_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn owned(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ldq_string_free(s);
    text
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ldq_last_error_message())
        .to_string_lossy()
        .into_owned()
}

unsafe fn web(selector: &str) -> *mut LdqWeb {
    let mut out = ptr::null_mut();
    assert_eq!(
        ldq_web_open(c(selector).as_ptr(), &mut out),
        LdqErrorCode::Ok
    );
    out
}

unsafe fn query(text: &str) -> *mut LdqQuery {
    let mut out = ptr::null_mut();
    assert_eq!(
        ldq_query_parse(c(text).as_ptr(), &mut out),
        LdqErrorCode::Ok
    );
    out
}

#[test]
fn reach_execution_through_the_c_interface() {
    unsafe {
        let w = web("gen:numbers");
        let q = query("(<num:1> <num:succ> ?v)");
        let mut report = ptr::null_mut();
        let code = ldq_exec_reach(
            w,
            q,
            c("match").as_ptr(),
            c("<num:1>").as_ptr(),
            0,
            &mut report,
        );
        assert_eq!(code, LdqErrorCode::Ok);
        assert_eq!(ldq_report_status(report), LdqStatus::Complete);
        assert_eq!(ldq_report_solution_count(report), 1);
        assert_eq!(ldq_report_documents(report), 2);
        assert_eq!(ldq_report_lookups(report), 2);
        assert_eq!(
            CStr::from_ptr(ldq_report_solution(report, 0))
                .to_str()
                .unwrap(),
            "⟨⟨ ?v → <num:2> ⟩⟩"
        );
        assert!(ldq_report_solution(report, 1).is_null());
        assert_eq!(owned(ldq_report_encoded(report)), "⟨⟨ ?v → <num:2> ⟩⟩\n");
        ldq_report_free(report);
        ldq_query_free(q);
        ldq_web_free(w);
    }
}

#[test]
fn full_execution_and_budget_errors() {
    unsafe {
        let json =
            c(r#"{ "documents": { "d1": [["<u1>", "<u2>", "<u3>"]] }, "adoc": { "<u1>": "d1" } }"#);
        let mut w = ptr::null_mut();
        assert_eq!(ldq_web_from_json(json.as_ptr(), &mut w), LdqErrorCode::Ok);
        let q = query("(<u1> <u2> <u3>)");
        let mut report = ptr::null_mut();
        assert_eq!(ldq_exec_full(w, q, 0, &mut report), LdqErrorCode::Ok);
        assert_eq!(ldq_report_solution_count(report), 1);
        assert_eq!(
            CStr::from_ptr(ldq_report_solution(report, 0))
                .to_str()
                .unwrap(),
            "⟨⟨ ⟩⟩"
        );
        ldq_report_free(report);
        ldq_web_free(w);

        let inf = web("gen:chain:inf");
        let mut report = ptr::null_mut();
        assert_eq!(
            ldq_exec_full(inf, q, 0, &mut report),
            LdqErrorCode::BudgetRequired
        );
        assert!(report.is_null());
        assert!(last_error().contains("budget"));
        assert_eq!(ldq_exec_full(inf, q, 4, &mut report), LdqErrorCode::Ok);
        assert_eq!(ldq_report_status(report), LdqStatus::BudgetExhausted);
        assert_eq!(ldq_report_lookups(report), 4);
        ldq_report_free(report);
        ldq_web_free(inf);
        ldq_query_free(q);
    }
}

#[test]
fn streaming_through_the_c_interface() {
    unsafe {
        let w = web("gen:numbers");
        let q = query("(?x <num:succ> ?y)");
        let mut stream = ptr::null_mut();
        let code = ldq_stream_open(
            w,
            q,
            c("all").as_ptr(),
            c("<num:1>").as_ptr(),
            5,
            &mut stream,
        );
        assert_eq!(code, LdqErrorCode::Ok);
        // the stream keeps its own reference to the web
        ldq_web_free(w);
        ldq_query_free(q);
        let mut lines = vec![];
        let mut iteration = 0u64;
        let mut solution = ptr::null_mut();
        let last = loop {
            match ldq_stream_next(stream, &mut iteration, &mut solution) {
                LdqStreamEvent::Solution => {
                    lines.push(format!("[iter={iteration}] {}", owned(solution)))
                }
                other => break other,
            }
        };
        assert_eq!(last, LdqStreamEvent::BudgetExhausted);
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "[iter=5] ⟨⟨ ?x → <num:5> , ?y → <num:6> ⟩⟩");
        assert_eq!(ldq_stream_lookups(stream), 5);
        assert_eq!(
            ldq_stream_next(stream, ptr::null_mut(), ptr::null_mut()),
            LdqStreamEvent::End
        );
        ldq_stream_free(stream);
        assert_eq!(
            ldq_stream_next(ptr::null_mut(), ptr::null_mut(), ptr::null_mut()),
            LdqStreamEvent::Error
        );
    }
}

#[test]
fn errors_are_codes_with_messages() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(
            ldq_web_open(ptr::null(), &mut w),
            LdqErrorCode::NullArgument
        );
        assert_eq!(
            ldq_web_open(c("gen:none").as_ptr(), &mut w),
            LdqErrorCode::Web
        );
        assert!(w.is_null());
        assert_eq!(
            ldq_web_open(c("gen:numbers").as_ptr(), ptr::null_mut()),
            LdqErrorCode::NullArgument
        );
        let bad_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(
            ldq_web_open(bad_utf8.as_ptr().cast(), &mut w),
            LdqErrorCode::InvalidUtf8
        );

        let mut q = ptr::null_mut();
        assert_eq!(
            ldq_query_parse(c("(?x <p>").as_ptr(), &mut q),
            LdqErrorCode::Parse
        );
        assert!(last_error().contains("expected"));

        let w = web("gen:numbers");
        let q = query("(?x <num:succ> ?y)");
        let mut r = ptr::null_mut();
        assert_eq!(
            ldq_exec_reach(
                w,
                q,
                c("sometimes").as_ptr(),
                c("<num:1>").as_ptr(),
                0,
                &mut r
            ),
            LdqErrorCode::Criterion
        );
        assert_eq!(
            ldq_exec_reach(w, q, c("all").as_ptr(), c("").as_ptr(), 0, &mut r),
            LdqErrorCode::Seeds
        );
        assert_eq!(
            ldq_exec_reach(w, q, c("all").as_ptr(), c("\"x\"").as_ptr(), 0, &mut r),
            LdqErrorCode::Seeds
        );
        assert_eq!(
            ldq_exec_reach(
                ptr::null(),
                q,
                c("all").as_ptr(),
                c("<num:1>").as_ptr(),
                0,
                &mut r
            ),
            LdqErrorCode::NullArgument
        );
        assert!(r.is_null());
        ldq_query_free(q);
        ldq_web_free(w);
        ldq_web_free(ptr::null_mut());
        ldq_string_free(ptr::null_mut());
    }
}

#[test]
fn query_text_is_canonical() {
    unsafe {
        let q = query("(  (?x <p> ?y)   OPT (?y <q> ?z) )");
        assert_eq!(
            owned(ldq_query_to_string(q)),
            "((?x <p> ?y) OPT (?y <q> ?z))"
        );
        ldq_query_free(q);
        assert!(ldq_query_to_string(ptr::null()).is_null());
    }
}

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(crate_dir().join("include/ldq.h")).unwrap();
    for name in [
        "ldq_web_open",
        "ldq_web_from_json",
        "ldq_web_free",
        "ldq_query_parse",
        "ldq_query_to_string",
        "ldq_query_free",
        "ldq_exec_full",
        "ldq_exec_reach",
        "ldq_report_status",
        "ldq_report_solution_count",
        "ldq_report_solution",
        "ldq_report_encoded",
        "ldq_report_free",
        "ldq_stream_open",
        "ldq_stream_next",
        "ldq_stream_free",
        "ldq_string_free",
        "ldq_last_error_message",
        "typedef struct LdqWeb LdqWeb",
        "LDQ_ERROR_CODE_BUDGET_REQUIRED = 7",
        "LDQ_STREAM_EVENT_SOLUTION = 0",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

fn static_library() -> Option<PathBuf> {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.parent()?.join("libldq_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_against_the_static_library() {
    let Some(lib) = static_library() else {
        eprintln!("static library not built; skipping C smoke test");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping C smoke test");
        return;
    }
    let out_dir = std::env::temp_dir().join(format!("ldq-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&exe).output().unwrap();
    std::fs::remove_dir_all(&out_dir).unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "{stdout}{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout.contains("[iter=3] ⟨⟨ ?x → <num:3> , ?y → <num:4> ⟩⟩"));
    assert!(stdout.ends_with("ok\n"));
}
