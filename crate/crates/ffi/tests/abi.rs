use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use reslogic_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    rl_string_free(s);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(rl_last_error()).to_str().unwrap().to_string() }
}

#[test]
fn evaluate_a_process() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(rl_process_parse(c("first A |> upto B").as_ptr(), &mut p), RlStatus::Ok);
        let mut w = ptr::null_mut();
        assert_eq!(rl_world_parse(c("@0: A\n@3: A, B\n").as_ptr(), &mut w), RlStatus::Ok);
        let mut truth = false;
        assert_eq!(rl_process_eval(p, w, 0, 0, true, ptr::null(), &mut truth), RlStatus::Ok);
        assert!(truth);
        assert_eq!(rl_process_eval(p, w, 0, 2, false, ptr::null(), &mut truth), RlStatus::Ok);
        assert!(!truth);
        // An empty interval is rejected and the message says why.
        assert_ne!(rl_process_eval(p, w, 4, 4, false, ptr::null(), &mut truth), RlStatus::Ok);
        assert!(!last_error().is_empty());
        let mut s = ptr::null_mut();
        assert_eq!(rl_process_to_string(p, &mut s), RlStatus::Ok);
        assert_eq!(take(s), "first A() |> upto B()");
        rl_process_free(p);
        rl_world_free(w);
    }
}

#[test]
fn validity_search() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(rl_process_parse(c("upto (A \\/ B) .-> (upto A .\\/ upto B)").as_ptr(), &mut p), RlStatus::Ok);
        let cfg = rl_config_default();
        let (mut valid, mut report) = (true, ptr::null_mut());
        assert_eq!(rl_process_check_validity(p, &cfg, 200, 1, &mut valid, &mut report), RlStatus::Ok);
        assert!(!valid);
        assert!(take(report).starts_with("counterexample"));
        rl_process_free(p);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(rl_process_parse(c("first A |>").as_ptr(), &mut p), RlStatus::Syntax);
        assert!(p.is_null());
        assert!(last_error().contains(':'));
        assert_eq!(rl_process_parse(ptr::null(), &mut p), RlStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(rl_process_parse(bad.as_ptr().cast(), &mut p), RlStatus::InvalidUtf8);
        assert_eq!(rl_process_parse(c("first A").as_ptr(), ptr::null_mut()), RlStatus::NullPointer);
        let mut w = ptr::null_mut();
        assert_eq!(rl_world_parse(c("@x: A").as_ptr(), &mut w), RlStatus::World);
        let mut t = false;
        assert_eq!(rl_mll_decide(c("!P :-> P").as_ptr(), &mut t, ptr::null_mut()), RlStatus::Other);
        // Success clears the message.
        assert_eq!(rl_mll_decide(c("P :-> P").as_ptr(), &mut t, ptr::null_mut()), RlStatus::Ok);
        assert_eq!(last_error(), "");
        // Freeing null is a no-op.
        rl_process_free(ptr::null_mut());
        rl_world_free(ptr::null_mut());
        rl_session_free(ptr::null_mut());
        rl_string_free(ptr::null_mut());
    }
}

#[test]
fn mll_decisions_and_strategies() {
    unsafe {
        let (mut t, mut s) = (false, ptr::null_mut());
        assert_eq!(rl_mll_decide(c("(P :& Q) :-> P").as_ptr(), &mut t, &mut s), RlStatus::Ok);
        assert!(t);
        assert_eq!(take(s), "pairing:c~a.l");
        assert_eq!(rl_mll_decide(c("P :-> (P :& P)").as_ptr(), &mut t, &mut s), RlStatus::Ok);
        assert!(!t);
        assert!(s.is_null());
    }
}

#[test]
fn a_session_through_the_abi() {
    unsafe {
        let phi = "(first A >> (<<(first B >>, first C >>), <<(first D >>)))";
        let r = c(&format!("{phi} :-> {phi}"));
        let mut s = ptr::null_mut();
        assert_eq!(rl_session_new(r.as_ptr(), c("pairing:a~c").as_ptr(), ptr::null(), &mut s), RlStatus::Ok);
        let (mut reply, mut done) = (ptr::null_mut(), false);
        assert_eq!(rl_session_send(s, c("a -> 0").as_ptr(), &mut reply, &mut done), RlStatus::IllegalMove);
        assert!(reply.is_null());
        assert_eq!(rl_session_send(s, c(":show").as_ptr(), &mut reply, &mut done), RlStatus::Ok);
        assert!(take(reply).starts_with("@0 "));
        assert_eq!(rl_session_send(s, c("c -> 0").as_ptr(), &mut reply, &mut done), RlStatus::Ok);
        assert!(take(reply).starts_with("@1 "));
        assert_eq!(rl_session_send(s, c("").as_ptr(), &mut reply, &mut done), RlStatus::Ok);
        assert!(take(reply).starts_with("@2 <<(first B() >>, first C() >>) :->"));
        assert_eq!(rl_session_send(s, c(":quit").as_ptr(), &mut reply, &mut done), RlStatus::Ok);
        assert!(done);
        assert_eq!(take(reply).lines().count(), 3);
        rl_session_free(s);
        let mut bad = ptr::null_mut();
        assert_eq!(rl_session_new(r.as_ptr(), c("lazy").as_ptr(), ptr::null(), &mut bad), RlStatus::Script);
    }
}

#[test]
fn demos_through_the_abi() {
    unsafe {
        let (mut ok, mut report) = (false, ptr::null_mut());
        assert_eq!(rl_demo_run(c("assembly-resource:lambda").as_ptr(), &mut ok, &mut report), RlStatus::Ok);
        assert!(ok);
        assert!(take(report).contains("goal: true"));
        assert_eq!(rl_demo_run(c("nope").as_ptr(), &mut ok, ptr::null_mut()), RlStatus::Other);
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(rl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

/// The static library cargo places next to the test binary's profile directory.
fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.parent()?.join("libreslogic_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_is_current_and_compiles_as_c() {
    let h = std::fs::read_to_string(header().join("reslogic.h")).unwrap();
    for f in ["rl_process_parse", "rl_process_eval", "rl_mll_decide", "rl_session_send", "rl_demo_run", "RL_STATUS_PANIC"] {
        assert!(h.contains(f), "{f} missing from the header");
    }
    let src = std::env::temp_dir().join(format!("reslogic-h-{}.c", std::process::id()));
    std::fs::write(&src, "#include \"reslogic.h\"\nint main(void) { return rl_version() == 0; }\n").unwrap();
    let st = Command::new("cc").arg("-fsyntax-only").arg("-Wall").arg("-Werror").arg("-I").arg(header()).arg(&src).status().unwrap();
    assert!(st.success());
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "reslogic.h"

int main(void) {
    RlProcess *p = NULL;
    RlWorld *w = NULL;
    bool truth = false;
    if (rl_process_parse("first A |> upto B", &p) != RL_STATUS_OK) return 1;
    if (rl_world_parse("@0: A\n@3: A, B\n", &w) != RL_STATUS_OK) return 2;
    RlConfig cfg = rl_config_default();
    if (rl_process_eval(p, w, 0, 0, true, &cfg, &truth) != RL_STATUS_OK || !truth) return 3;
    if (rl_process_parse("(((", &p) != RL_STATUS_SYNTAX) return 4;
    if (strlen(rl_last_error()) == 0) return 5;
    char *strategy = NULL;
    bool taut = false;
    if (rl_mll_decide("(P :& Q) :-> P", &taut, &strategy) != RL_STATUS_OK || !taut) return 6;
    printf("%s\n", strategy);
    rl_string_free(strategy);
    rl_process_free(p);
    rl_world_free(w);
    return 0;
}
"#;

#[test]
fn a_c_program_links_and_runs() {
    let Some(lib) = static_lib() else {
        panic!("static library not found next to {:?}", std::env::current_exe());
    };
    let dir = std::env::temp_dir().join(format!("reslogic-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let st = Command::new("cc")
        .arg("-I")
        .arg(header())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success(), "linking against {lib:?} failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "pairing:c~a.l\n");
}
