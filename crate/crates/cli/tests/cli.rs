use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_graphlift"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn corpus(name: &str) -> String {
    let o = run(&["corpus", name], "");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o)
}

const FORMULA: &str = "gcnf 1
vars 3
imp 1 2 3
imp -1 -2 -3
end
";

#[test]
fn corpus_list_names_every_instance() {
    let o = run(&["corpus", "list"], "");
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(names.len(), 5);
    assert!(names.iter().any(|n| n == "sieklucki"));
    assert_eq!(run(&["corpus", "nope"], "").status.code(), Some(2));
}

#[test]
fn sieklucki_is_unliftable_with_a_witness() {
    let o = run(&["analyze", "-"], &corpus("sieklucki"));
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("verdict: unliftable"), "{out}");
    assert!(out.contains("reason: two-obstructor"));
    assert!(out.contains("obstructor 2"));
    assert!(stderr(&o).contains("elapsed:"));

    let o = run(&["obstruct", "-n", "2", "-"], &corpus("sieklucki"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("obstructor 2\nstep ("));
}

#[test]
fn double_cover_lifts_and_counts() {
    let o = run(&["lift", "--count", "-"], &corpus("double-cover"));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("verdict: liftable"));
    assert!(out.contains("model_count: 2\n"));
    assert!(out.contains("height u1 "));
    assert!(out.contains("order u "));

    let o = run(&["analyze", "--count=1", "-"], &corpus("double-cover"));
    assert!(stdout(&o).contains("model_count: 1+\n"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["analyze", "--count", "-"], &corpus("tripod18"));
    let b = run(&["analyze", "--count", "-"], &corpus("tripod18"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tripod_needs_arity_three() {
    let o = run(&["analyze", "--obstructors", "3", "-"], &corpus("tripod18"));
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("reason: gamma-unsat"), "{out}");
    assert!(out.contains("p2_trivial: true"));
    assert!(out.contains("obstructor 3"));
    assert_eq!(
        run(&["obstruct", "-n", "2", "-"], &corpus("tripod18"))
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn gamma_and_nu3_on_the_counterexample() {
    let o = run(&["gamma", "-"], &corpus("nontrivial-gamma"));
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("gamma_vars: 3\ngamma_clauses: 8\n"), "{out}");
    assert!(out.ends_with("gamma_status: unsat\n"));

    let o = run(&["nu3", "-"], &corpus("nontrivial-gamma"));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("mu2: 0\nnu3: 0\nmerges: 0\n"));
}

#[test]
fn realize_emits_a_map_and_a_clean_audit() {
    let o = run(&["realize", "-"], FORMULA);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let audit = stderr(&o);
    assert!(!audit.contains("fail"), "{audit}");
    let map = stdout(&o);
    let g = run(&["gamma", "-"], &map);
    assert_eq!(g.status.code(), Some(0));
    assert!(stdout(&g).contains("gamma_vars: 3\n"));
}

#[test]
fn realize_strict_rejects_missing_twins() {
    let lone = "gcnf 1\nvars 3\nimp 1 2 3\nend\n";
    assert_eq!(
        run(&["realize", "--strict", "-"], lone).status.code(),
        Some(2)
    );
    let o = run(&["realize", "-"], lone);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning:"));
}

#[test]
fn input_errors_exit_two() {
    let o = run(&["analyze", "-"], "gmap 1\nfoo\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: "));
    assert!(stdout(&o).is_empty());
    assert_eq!(
        run(&["analyze", "/no/such/file"], "").status.code(),
        Some(2)
    );
}

#[test]
fn resource_caps_exit_three() {
    let o = run(
        &["analyze", "--obstructors", "6", "-"],
        &corpus("sieklucki"),
    );
    assert_eq!(o.status.code(), Some(3));
    let o = run(
        &["analyze", "--max-config-vertices", "4", "-"],
        &corpus("sieklucki"),
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}
