use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pseudoalg::format::{emit, parse_file};

fn algebras() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../algebras")
}

fn alg(name: &str) -> String {
    algebras().join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pseudoalg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn jordan_check_passes_on_the_field_current() {
    let o = run(&["check", &alg("curr_k.alg"), "--variety", "jordan"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "VARIETY: jordan\ncommutativity: PASS\njordan: PASS\n");
}

#[test]
fn jordan_check_fails_on_sl2_with_a_quadruple() {
    let o = run(&["check", &alg("curr_sl2.alg"), "--variety", "jordan"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("jordan:")).unwrap();
    let tuple = line.split("tuple=(").nth(1).unwrap().split(')').next().unwrap();
    assert_eq!(tuple.split(',').count(), 4);
    assert!(line.contains("FAIL") && line.contains("residual="));
}

#[test]
fn tkk_of_the_field_is_sl2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.alg");
    let o = run(&["build", "tkk", &alg("curr_k.alg"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&out).unwrap().contains("sectors = minus s0 plus"));
    let o = run(&["iso", out.to_str().unwrap(), &alg("sl2.alg")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("RESULT: ISO\nMATRIX: "), "{text}");
    let o = run(&["iso", out.to_str().unwrap(), &alg("field2.alg")]);
    assert!(o.status.code() != Some(0));
}

#[test]
fn emitted_w_algebra_round_trips() {
    let o = run(&["build", "walg", "--lie", "abelian:1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let parsed = parse_file(&text, None).unwrap();
    assert_eq!(emit(&parsed.algebra, None), text);
    assert_eq!(fs::read_to_string(algebras().join("virasoro.alg")).unwrap(), text);
}

#[test]
fn shipped_files_normalize_idempotently() {
    for entry in fs::read_dir(algebras()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let f = parse_file(&text, None).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let once = emit(&f.algebra, f.group.as_ref());
        let g = parse_file(&once, None).unwrap();
        assert_eq!(emit(&g.algebra, g.group.as_ref()), once, "{}", path.display());
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["ann", &alg("curr_m2_aff1.alg"), "--probe", "1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("t^(0,0)⊗E12 · t^(0,0)⊗E21 = 1 t^(0,0)⊗E11\n"));
}

#[test]
fn witt_relations_in_the_coefficient_window() {
    let o = run(&["coeff", &alg("virasoro.alg"), "--window", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("v1(-2) · v1(1) = 3 v1(-2)\n"));
    assert!(text.contains("v1(0) · v1(1) = 1 v1(0)\n"));
    assert!(!text.contains("v1(1) · v1(1) ="));
}

#[test]
fn left_annihilator_of_a_degenerate_current() {
    let dir = tempfile::tempdir().unwrap();
    let ord = dir.path().join("z.alg");
    fs::write(&ord, "[hopf]\ndim = 0\n[module]\nrank = 2\nnames = a b\n[product]\na a = 0\na b = 0\nb a = 0\nb b = 1 (||b)\n")
        .unwrap();
    let cur = dir.path().join("cz.alg");
    let o = run(&["build", "curr", ord.to_str().unwrap(), "--lie", "abelian:1", "-o", cur.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["annihilator", cur.to_str().unwrap(), "--probe", "1"]);
    assert_eq!(stdout(&o), "PROBE: 1\nDIM: 2\nELEMENT: 1 e^(0)⊗a\nELEMENT: 1 e^(1)⊗a\n");
}

#[test]
fn axioms_on_a_smash_product() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.alg");
    fs::write(&file, "[hopf]\ndim = 1\n[group]\nelements = 1 g\nmul g g = 1\nact g = -1\n[module]\nrank = 0\n[product]\n")
        .unwrap();
    let o = run(&["axioms", file.to_str().unwrap(), "--degree", "3", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(": PASS")).count(), 5);
}

#[test]
fn extension_along_a_line() {
    let o = run(&["build", "extend", &alg("virasoro.alg"), "--lie", "aff1", "--images", "1 ; 0"]);
    assert_eq!(o.status.code(), Some(0));
    let ext = parse_file(&stdout(&o), None).unwrap();
    let w = parse_file(&fs::read_to_string(algebras().join("w_aff1.alg")).unwrap(), None).unwrap();
    assert_eq!(ext.algebra.entry(0, 0), w.algebra.entry(0, 0));
    let o = run(&["build", "extend", &alg("virasoro.alg"), "--lie", "sl2", "--images", "1 ; 0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_with_two_and_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.alg");
    fs::write(&file, "[hopf]\ndim = 1\n[module]\nrank = 1\nnames = v\n[product]\nv v = 1 (0,0|0|v)\n").unwrap();
    let o = run(&["check", file.to_str().unwrap(), "--variety", "lie"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 7"), "{err}");
    assert_eq!(run(&["check", &alg("sl2.alg"), "--variety", "bogus"]).status.code(), Some(2));
}
