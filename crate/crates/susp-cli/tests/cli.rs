use std::io::Write;
use std::process::{Command, Output, Stdio};

fn susp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susp")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_susp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SECOND_LINE: &str = "[[\\ #1 #2 #3, 1, 0, (t2, 0) :: nil], 1, 0, (t3, 0) :: nil]";
const LAST_LINE: &str = "[\\ #1 #2 #3, 2, 0, ([t2, 1, 0, (t3, 0) :: nil], 0) :: (t3, 0) :: nil]";

const DIVERGENT_A: &str = "[[X, 1, 0, (t1, 0) :: nil], 1, 0, (t2, 0) :: nil]";
const DIVERGENT_B: &str = "[[X, 2, 1, (#1, 1) :: (t2, 0) :: nil], 1, 0, ([t1, 1, 0, (t2, 0) :: nil], 0) :: nil]";

#[test]
fn check_reports_well_formedness() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.susp");
    let bad = dir.path().join("bad.susp");
    std::fs::write(&good, "[#1, 1, 0, (c, 0) :: nil]").unwrap();
    std::fs::write(&bad, "[#1, 2, 0, (c, 0) :: nil]").unwrap();
    let o = susp(&["check", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "well-formed");
    let o = susp(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("SuspLength"));
    assert_eq!(code(&susp(&["check", dir.path().join("missing").to_str().unwrap()])), 2);
}

#[test]
fn check_reads_stdin_and_reports_parse_errors() {
    assert_eq!(code(&with_stdin(&["check", "-"], "\\ #1")), 0);
    let o = with_stdin(&["check", "-"], "[#1, 1");
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:"));
}

#[test]
fn normalize_with_merging_rules_reaches_the_combined_environment() {
    let o = susp(&["normalize", "--rules", "m1,m2,m3,m4,m5,m6", SECOND_LINE]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), LAST_LINE);
}

#[test]
fn normalize_under_rm_passes_through_the_combined_environment() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.json");
    let o =
        susp(&["normalize", "--rules", "rm", "--strategy", "rand:7", "--trace", trace.to_str().unwrap(), SECOND_LINE]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "\\ #1 t2 t3");
    assert_eq!(code(&susp(&["replay", trace.to_str().unwrap()])), 0);
}

#[test]
fn fuel_exhaustion_is_a_negative_verdict() {
    let o = susp(&["normalize", "--fuel", "5", "(\\ #1 #1) (\\ #1 #1)"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FuelExhausted"));
}

#[test]
fn normalize_other_calculi() {
    let o = susp(&["normalize", "--calc", "lu", "(\\ 2_ 1_) c"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "1_ c".to_string()));
    let o = susp(&["normalize", "--calc", "lsig", "--strategy", "li", "(\\ 1) c"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "c".to_string()));
    let o = susp(&["normalize", "--calc", "ls", "--rules", "ls", "(\\ 1) (\\ 1)"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "\\1".to_string()));
    assert_eq!(code(&susp(&["normalize", "--calc", "lu", "--logical-mode", "c"])), 2);
}

#[test]
fn logical_mode_erases_meta_suspensions() {
    let o = susp(&["normalize", "--logical-mode", "[X, 1, 0, (c, 0) :: nil]"]);
    assert_eq!(stdout(&o).trim(), "X");
    let o = susp(&["normalize", "[X, 1, 0, (c, 0) :: nil]"]);
    assert_eq!(stdout(&o).trim(), "[X, 1, 0, (c, 0) :: nil]");
}

#[test]
fn bridge_traces_replay() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.json");
    let o = susp(&["normalize", "--calc", "lsig", "--trace", trace.to_str().unwrap(), "((\\ 1 1[^]) c)[^]"]);
    assert_eq!(code(&o), 0);
    let o = susp(&["replay", trace.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = std::fs::read_to_string(&trace).unwrap();
    std::fs::write(&trace, text.replacen("\"result\": \"", "\"result\": \"c ", 1)).unwrap();
    assert_eq!(code(&susp(&["replay", trace.to_str().unwrap()])), 1);
    std::fs::write(&trace, "{").unwrap();
    assert_eq!(code(&susp(&["replay", trace.to_str().unwrap()])), 2);
}

#[test]
fn step_applies_one_rule() {
    let o = susp(&["step", "--rule", "beta_s", "(\\ #1 #2) c"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "[#1 #2, 1, 0, (c, 0) :: nil]".to_string()));
    let o = susp(&["step", "--at", "[0]", "--rule", "r6", "\\ [\\ #2, 0, 2, nil]"]);
    assert_eq!(stdout(&o).trim(), "\\ \\ [#2, 1, 3, (#1, 3) :: nil]");
    assert_eq!(code(&susp(&["step", "--rule", "r1", "c"])), 1);
    assert_eq!(code(&susp(&["step", "--rule", "nonsense", "c"])), 2);
    assert_eq!(code(&susp(&["step", "--at", "x", "--rule", "r1", "c"])), 2);
    let o = susp(&["step", "--calc", "lu", "--rule", "b", "(\\ 1_) c"]);
    assert_eq!(stdout(&o).trim(), "1_[c/]");
}

#[test]
fn redexes_lists_positions() {
    let o = susp(&["redexes", "(\\ #1) ((\\ #1) c)"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines, ["[] betas", "[1] betas"]);
}

#[test]
fn translate_directions() {
    let o = susp(&["translate", "--from", "lsig", "--to", "susp", "1[^ o ^]"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "#3".to_string()));
    let o = susp(&["translate", "--from", "lu", "--to", "susp", "1_[c/]"]);
    assert_eq!(stdout(&o).trim(), "[#1, 1, 0, (c, 0) :: nil]");
    let o = susp(&["translate", "--from", "lu", "--to", "susp", "lift(c/)"]);
    assert_eq!(stdout(&o).trim(), "ol = 2, nl = 1, env = (#1, 1) :: (c, 0) :: nil");
    let o = susp(&["translate", "--from", "ls", "--to", "susp", "sig(1, 1, c)"]);
    assert_eq!(stdout(&o).trim(), "[#1, 1, 0, (c, 0) :: nil]");
    let o = susp(&["translate", "--from", "susp", "--to", "lsig", "\\ #2"]);
    assert_eq!(stdout(&o).trim(), "\\1[^]");
    assert_eq!(code(&susp(&["translate", "--from", "lu", "--to", "ls", "c"])), 2);
}

#[test]
fn measure_and_check_decrease() {
    let o = susp(&["measure", "--k", "2", "[#1, 1, 0, (c, 0) :: nil]"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("mu: 1"));
    assert!(out.contains("eta_0..eta_2: "));
    assert!(out.contains("essence: s"));
    let o = susp(&["check-decrease", "[#1, 1, 0, (c, 0) :: nil]", "c"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["essence_decreases"], true);
    assert_eq!(code(&susp(&["check-decrease", "c", "[#1, 1, 0, (c, 0) :: nil]"])), 1);
}

#[test]
fn join_on_the_divergent_reducts() {
    let o = susp(&["join", "--rules", "rm", DIVERGENT_A, DIVERGENT_B]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = susp(&["join", "--rules", "r", DIVERGENT_A, DIVERGENT_B]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("not joinable"));
}

#[test]
fn fuzz_summaries() {
    let o = susp(&["fuzz", "--suite", "confluence", "--cases", "20", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS confluence: 20 cases"));
    assert_eq!(code(&susp(&["fuzz", "--suite", "nope"])), 2);
}

#[test]
fn fuzz_reports_the_first_counterexample() {
    // r6 over a nil environment raises eta_0, so termination fails early
    let o = susp(&["fuzz", "--suite", "termination", "--cases", "200"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("first failure"));
}

#[test]
fn bench_writes_csv() {
    let o = susp(&["bench", "--corpus", "deep-redex", "--report", "csv"]);
    assert_eq!(code(&o), 0);
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let headers: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["corpus", "term_id", "calculus", "ruleset", "strategy", "steps", "status"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 160);
    assert!(rows.iter().all(|row| &row[6] == "NormalForm"));
    assert_eq!(code(&susp(&["bench", "--corpus", "other"])), 2);
    assert_eq!(code(&susp(&["bench", "--corpus", "church", "--report", "json"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&susp(&[])), 2);
    assert_eq!(code(&susp(&["normalize", "--strategy", "sideways", "c"])), 2);
    assert_eq!(code(&susp(&["normalize", "--rules", "r9", "c"])), 2);
    assert_eq!(code(&susp(&["normalize", "(\\"])), 2);
}

#[test]
fn legacy_dummies_flag() {
    assert_eq!(code(&susp(&["normalize", "[#1, 1, 1, @0 :: nil]"])), 2);
    let o = susp(&["--legacy-dummies", "normalize", "--rules", "r", "[#2, 2, 1, @0 :: (c, 0) :: nil]"]);
    assert_eq!(code(&o), 0);
}
