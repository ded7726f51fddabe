use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use reslogic::game::{Game, Position};
use reslogic::semantics::EvalConfig;
use reslogic::session::{parse_slave_spec, Reply, Session};
use reslogic::syntax::parse_resource;

const PHI: &str = "(first A >> (<<(first B >>, first C >>), <<(first D >>)))";

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("reslogic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_reslogic"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let mut text = String::from_utf8(out.stdout).unwrap();
    text.push_str(&String::from_utf8(out.stderr).unwrap());
    (out.status.code().unwrap_or(-1), text)
}

#[test]
fn decide_mll_prints_the_matching() {
    let f = scratch("weak.rl", "(P :& Q) :-> P");
    let (code, out) = run(&["decide-mll", f.to_str().unwrap(), "--emit-strategy"], "");
    assert_eq!(code, 0);
    assert!(out.contains("binary tautology") && out.contains("pair c~a.l") && out.contains("strategy pairing:c~a.l"), "{out}");
    let g = scratch("dup.rl", "P :-> (P :& P)");
    let (_, out) = run(&["--format", "json", "decide-mll", g.to_str().unwrap()], "");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], false);
}

#[test]
fn check_process_finds_the_counterexample() {
    let p = scratch("dist.rl", "upto (A \\/ B) .-> (upto A .\\/ upto B)");
    let (code, out) = run(&["check-process", p.to_str().unwrap()], "");
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("counterexample"), "{out}");
    let q = scratch("conj.rl", "(upto A .& upto B) .<-> upto (A & B)");
    let (code, out) = run(&["check-process", q.to_str().unwrap(), "--trials", "50"], "");
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("not a proof"));
}

#[test]
fn check_process_in_a_world() {
    let p = scratch("seq.rl", "first A |> upto B");
    let w = scratch("w.txt", "@0: A\n@3: A, B\n");
    let (code, out) = run(&["--format", "json", "check-process", p.to_str().unwrap(), "--world", w.to_str().unwrap()], "");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], true);
    assert_eq!(v["config"]["domain_max"], 31);
}

#[test]
fn play_reproduces_the_pairing_example() {
    let r = scratch("phi.rl", &format!("{PHI} :-> {PHI}"));
    let m = scratch("m.txt", "-- command, then report\n@1 master c -> 0\n@3 master a -> 1\n");
    let w = scratch("w2.txt", "@0: A\n@5: C\n");
    let (code, out) = run(
        &["play", r.to_str().unwrap(), "--slave", "pairing:a~c", "--master", m.to_str().unwrap(), "--world", w.to_str().unwrap()],
        "",
    );
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("4. @4 first C() >> :-> first C() >>"), "{out}");
    assert!(out.contains("produces first A() ~>[2,3] first C() .-> first A() ~>[1,4] first C()"));
    assert!(out.contains("successful: true"));
}

#[test]
fn play_search_reports_a_failure() {
    let r = scratch("dup-phi.rl", &format!("{PHI} :-> ({PHI} :& {PHI})"));
    let (code, out) = run(&["play", r.to_str().unwrap(), "--slave", "pairing:a~c.l", "--trials", "100"], "");
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("unsuccessful play"));
}

#[test]
fn demos_run_from_the_command_line() {
    for name in ["assembly-process", "assembly-resource:theta", "assembly-resource:lambda"] {
        let (code, out) = run(&["demo", name], "");
        assert_eq!(code, 0, "{out}");
        assert!(out.trim_end().ends_with("goal: true"), "{out}");
    }
    let (code, _) = run(&["demo", "nothing"], "");
    assert_eq!(code, 2);
}

#[test]
fn repl_session_over_stdin() {
    let r = scratch("phi2.rl", &format!("{PHI} :-> {PHI}"));
    let (code, out) = run(&["repl", r.to_str().unwrap(), "--slave", "pairing:a~c"], "a -> 0\nc -> 0\n\n:quit\n");
    assert_eq!(code, 0);
    assert!(out.contains("rejected: illegal move"), "{out}");
    assert!(out.contains("@2 <<(first B() >>, first C() >>) :-> <<(first B() >>, first C() >>)"), "{out}");
}

fn session(text: &str, slave: &str) -> Session {
    let (r, defs) = parse_resource(text).unwrap();
    let start = Position::from_resource(&r).unwrap();
    let s = parse_slave_spec(slave, &start).unwrap();
    Session::new(Game::new(defs, 31), &start, s, EvalConfig::default()).unwrap()
}

fn text(r: Reply) -> String {
    match r {
        Reply::Text(t) | Reply::Quit(t) => t,
    }
}

#[test]
fn star_of_an_unmoved_resource_is_its_effect() {
    let mut s = session(PHI, "waiting");
    assert_eq!(text(s.handle(":star").unwrap()), "first A()");
}

#[test]
fn illegal_moves_leave_the_clock_alone() {
    let mut s = session(&format!("{PHI} :-> {PHI}"), "pairing:a~c");
    assert!(s.handle("a -> 0").is_err());
    assert!(s.handle("c -> 7").is_err());
    assert!(text(s.handle(":show").unwrap()).starts_with("@0 "));
    assert!(text(s.handle("c -> 0").unwrap()).starts_with("@1 "));
    // The slave copies the command one tick later.
    let t = text(s.handle("").unwrap());
    assert!(t.starts_with("@2 <<(first B() >>, first C() >>) :-> <<"), "{t}");
}

#[test]
fn slave_specs() {
    let (r, _) = parse_resource(&format!("{PHI} :-> {PHI}")).unwrap();
    let start = Position::from_resource(&r).unwrap();
    for ok in ["waiting", "diverging", "pairing:a~c", "delay=3/pairing:a~c", "script:a -> 0; a -> 1"] {
        assert!(parse_slave_spec(ok, &start).is_ok(), "{ok}");
    }
    for bad in ["lazy", "pairing:a~a", "pairing:a", "delay=x/waiting", "script:a"] {
        assert!(parse_slave_spec(bad, &start).is_err(), "{bad}");
    }
}
