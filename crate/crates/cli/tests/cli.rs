use std::path::PathBuf;
use std::process::{Command, Output};

fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruledsurf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(file: &str, args: &[&str]) -> Output {
    let path = data(file);
    let mut all: Vec<&str> = Vec::new();
    let mut rest = args.iter();
    // subcommand (and leading flags) first, then the file
    for a in rest.by_ref() {
        all.push(a);
        if !a.starts_with("--") {
            break;
        }
    }
    all.push(path.to_str().unwrap());
    all.extend(rest);
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_accepts_the_corpus() {
    for file in ["jumping.dg", "danilov_gizatullin.dg", "special.dg", "zigzags.dg"] {
        let o = run_on(file, &["check"]);
        assert_eq!(o.status.code(), Some(0), "{file}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn check_rejects_bare_fiber() {
    assert_eq!(run_on("invalid_fiber.dg", &["check"]).status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "/nonexistent/file.dg"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let bad = std::env::temp_dir().join(format!("ruledsurf-bad-{}.dg", std::process::id()));
    std::fs::write(&bad, "graph G { a = [[0,0,]] }\n").unwrap();
    let o = run(&["check", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).ok();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:13"));

    assert_eq!(run_on("zigzags.dg", &["standardize", "Nope"]).status.code(), Some(1));
}

#[test]
fn json_errors_go_to_stderr() {
    let o = run(&["--json", "check", "/nonexistent/file.dg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(v.is_object());
}

#[test]
fn jumping_pair_normalizes_to_identical_json() {
    let a = run_on("jumping.dg", &["--json", "normalize", "Dext0"]);
    let b = run_on("jumping.dg", &["--json", "normalize", "DextS"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["delta"]["C2"], 1);
    assert_eq!(v["delta"]["C3"], 1);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["standardize", "Loose"][..],
        &["reverse", "Std"],
        &["dot", "Wide"],
        &["--json", "oracle", "Semi"],
    ] {
        let a = run_on("zigzags.dg", args);
        let b = run_on("zigzags.dg", args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn reverse_standard_zigzag() {
    let o = run_on("zigzags.dg", &["reverse", "Std"]);
    assert_eq!(stdout(&o).lines().next(), Some("[[0,0,-4,-3,-2]]"));
}

#[test]
fn equiv_exit_status() {
    let yes = run_on("danilov_gizatullin.dg", &["equiv", "Next1", "Next4", "--genus", "0,0"]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).starts_with("equivalent"));
    let no = run_on("danilov_gizatullin.dg", &["equiv", "Next1", "Next2", "--genus", "0,1"]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn schedule_reports_dimension() {
    let o = run_on("jumping.dg", &["schedule", "N", "--genus", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last(), Some("# dimension=4"));
}

#[test]
fn dot_is_undirected_graphviz() {
    let o = run_on("jumping.dg", &["dot", "Dext0"]);
    let text = stdout(&o);
    assert!(text.starts_with("graph \"Dext0\" {"));
    assert!(text.contains(" -- "));
    assert!(text.trim_end().ends_with('}'));
}

#[test]
fn corpus_round_trips_through_the_printer() {
    for file in ["jumping.dg", "danilov_gizatullin.dg", "special.dg", "zigzags.dg", "invalid_fiber.dg"] {
        let text = std::fs::read_to_string(data(file)).unwrap();
        let doc = ruledsurf::parse(&text).unwrap();
        let printed = doc.print();
        let again = ruledsurf::parse(&printed).unwrap();
        assert_eq!(again.print(), printed, "{file}");
        assert_eq!(again.names().count(), doc.names().count(), "{file}");
    }
}
