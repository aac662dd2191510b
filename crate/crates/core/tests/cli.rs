use std::path::Path;
use std::process::{Command, Output};

use nof_workbench::help::ComplexityReport;
use nof_workbench::report;

fn nofbench(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nofbench"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn latin2(dir: &Path) {
    let o = nofbench(dir, &["gen", "latin", "--n", "2", "--out", "f.noffn"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn gen_writes_the_function_file() {
    let dir = tempfile::tempdir().unwrap();
    latin2(dir.path());
    let text = std::fs::read_to_string(dir.path().join("f.noffn")).unwrap();
    assert_eq!(text, "noffn 1\n2 2 2\n0 1 1 0\n");
    let o = nofbench(dir.path(), &["gen", "latin", "--n", "2"]);
    assert_eq!(stdout(&o), text);
}

#[test]
fn stars_of_latin2() {
    let dir = tempfile::tempdir().unwrap();
    latin2(dir.path());
    let o = nofbench(dir.path(), &["stars", "--in", "f.noffn"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "stars: 4\n");
}

#[test]
fn exact_disc_of_latin2() {
    let dir = tempfile::tempdir().unwrap();
    latin2(dir.path());
    let o = nofbench(dir.path(), &["disc", "--in", "f.noffn", "--exact"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("disc = 1/8"), "{}", stdout(&o));
}

#[test]
fn verify_latin2_passes_five_checks() {
    let dir = tempfile::tempdir().unwrap();
    latin2(dir.path());
    let o = nofbench(dir.path(), &["verify", "--in", "f.noffn", "--out", "v.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let checks: Vec<&str> = out.lines().filter(|l| l.starts_with("check ")).collect();
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|l| l.ends_with("PASS")), "{out}");

    let rep = report::load_report(&dir.path().join("v.json")).unwrap();
    assert_eq!(rep.format_version, report::FORMAT_VERSION);
    assert_eq!(rep.config["command"]["verify"]["input"], "f.noffn");
    let rec: ComplexityReport = rep.results_as().unwrap();
    assert_eq!(rec.det_cc, Some(2));
    let shown = nofbench(dir.path(), &["report", "show", "--in", "v.json"]);
    assert!(stdout(&shown).contains("format_version: 1"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = nofbench(dir.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    let o = nofbench(dir.path(), &["stars", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = nofbench(dir.path(), &["stars", "--in", "missing.noffn"]);
    assert_eq!(o.status.code(), Some(1));

    let o = nofbench(dir.path(), &["gen", "trace", "--q", "4", "--d", "1", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not prime"));

    std::fs::write(dir.path().join("bad.noffn"), "noffn 1\n2 2 2\n0 1 1\n").unwrap();
    let o = nofbench(dir.path(), &["stars", "--in", "bad.noffn"]);
    assert_eq!(o.status.code(), Some(1));

    latin2(dir.path());
    let o = nofbench(dir.path(), &["color", "exact", "--in", "f.noffn", "--max-colors", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--max-colors"));

    let o = nofbench(dir.path(), &["bound", "pad", "--h", "5", "--c", "1", "--b", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn old_report_versions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("old.json"),
        r#"{"tool_version":"0.0.1","format_version":99,"config":{},"results":{}}"#,
    )
    .unwrap();
    let o = nofbench(dir.path(), &["report", "show", "--in", "old.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("migrate"));
}

#[test]
fn budget_env_caps_generation() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_nofbench"))
        .args(["gen", "random", "--dims", "3", "--n", "200", "--N", "2"])
        .env("NOF_LIMIT_MB", "1")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NOF_LIMIT_MB"));
}

#[test]
fn saved_artifacts_feed_later_commands() {
    let dir = tempfile::tempdir().unwrap();
    latin2(dir.path());
    let o = nofbench(dir.path(), &["color", "exact", "--in", "f.noffn", "--save", "c.nofcol"]);
    assert!(stdout(&o).starts_with("chi_star: 2"));
    let o = nofbench(dir.path(), &["peel", "--in", "f.noffn", "--coloring", "c.nofcol"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = nofbench(dir.path(), &["cover", "--in", "f.noffn", "--save", "c.nofcover"]);
    assert!(stdout(&o).starts_with("chi = 4\ncover_cc = 2\n"));
    let cover = std::fs::read_to_string(dir.path().join("c.nofcover")).unwrap();
    assert_eq!(cover, "nofcover 1\n2 4\n1 1 0\n1 2 1\n2 1 1\n2 2 0\n");
}

#[test]
fn bound_commands() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| stdout(&nofbench(dir.path(), args));
    assert_eq!(run(&["bound", "bhk", "--disc", "1/8", "--N", "2"]), "bhk = 2\n");
    assert_eq!(run(&["bound", "detsim", "--k", "3", "--cn", "2"]), "detsim = 10\n");
    assert_eq!(run(&["bound", "pad", "--h", "2", "--c", "5", "--b", "4"]), "padded: h = 4, c = 3\n");
    let ev = run(&["bound", "evaluators", "--k", "3", "--N", "4", "--c", "1"]);
    assert!(ev.contains("corollary_loglog_n = 9.75488750216"), "{ev}");
}
