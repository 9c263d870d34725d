use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tcw::report::{Report, VerdictKind};
use tcw_core::sexpr::parse;
use tcw_core::GeneratorSet;
use tempfile::TempDir;

fn tcw(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcw")).args(args).current_dir(dir).env_remove("TCW_CONFIG").output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Report {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

/// 1 on {1,2}ⁿ off the layer with `e` ones.
fn excluded(e: usize, t: &[u8]) -> u8 {
    u8::from(!t.contains(&0) && t.iter().filter(|&&v| v == 1).count() != e)
}

fn tuples(n: usize) -> Vec<Vec<u8>> {
    (0..3usize.pow(n as u32)).map(|mut i| (0..n).map(|_| { let v = (i % 3) as u8; i /= 3; v }).collect()).collect()
}

#[test]
fn enumerate_lists_n_plus_one_functions() {
    let dir = TempDir::new().unwrap();
    let o = tcw(&["enumerate", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "sminus1 n=2 e=0 d=2\nsminus1 n=2 e=1 d=1\nsminus1 n=2 e=2 d=0\n");
    let o = tcw(&["enumerate", "4"], dir.path());
    assert_eq!(stdout(&o).lines().count(), 5);
    assert_eq!(tcw(&["enumerate", "0"], dir.path()).status.code(), Some(1));
}

#[test]
fn synth_proven_witness_reparses() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "t", "sminus1 n=4 e=1 d=3\n");
    write(dir.path(), "g", "# one generator\nsminus1 n=8 e=1 d=7\n");
    let o = tcw(&["synth", "t", "g", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r.verdicts.len(), 1);
    assert_eq!(r.verdicts[0].verdict, VerdictKind::Proven);
    let w = r.verdicts[0].witness.as_ref().unwrap();
    assert_eq!((w.regime.as_str(), w.check_points, w.verified), ("full-sweep", 81, true));
    let env = GeneratorSet::auto_resolving();
    let phi = parse(&w.formula, &env).unwrap();
    for t in tuples(4) {
        assert_eq!(phi.eval(&env, &t).unwrap(), excluded(1, &t), "{t:?}");
    }
}

#[test]
fn synth_refuted_unknown_and_malformed() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "t12", "sminus1 n=12 e=1 d=11");
    write(dir.path(), "g4", "sminus1 n=4 e=1 d=3");
    let o = tcw(&["synth", "t12", "g4"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("verdict refuted"));

    write(dir.path(), "t3", "sminus1 n=3 e=1 d=2");
    write(dir.path(), "g2", "sminus1 n=2 e=1 d=1");
    let o = tcw(&["synth", "t3", "g2"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("verdict unknown"));

    write(dir.path(), "bad", "sminus1 n=4 e=1 d=2");
    let o = tcw(&["synth", "bad", "g4"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(tcw(&["synth", "missing", "g4"], dir.path()).status.code(), Some(1));
    assert_eq!(tcw(&["synth"], dir.path()).status.code(), Some(1));
}

#[test]
fn synth_via_pipelines() {
    let dir = TempDir::new().unwrap();
    // 1 exactly at (1,2) and (2,2).
    write(dir.path(), "r", "table n=2 vals=000000011\n");
    for via in ["sminus1", "s"] {
        let o = tcw(&["synth", "r", "--via", via, "--format", "json"], dir.path());
        assert_eq!(o.status.code(), Some(0), "{via}: {}", stdout(&o));
        let w = json(&o).verdicts[0].witness.clone().unwrap();
        let env = GeneratorSet::auto_resolving();
        let phi = parse(&w.formula, &env).unwrap();
        for t in tuples(2) {
            let want = u8::from(t == [1, 2] || t == [2, 2]);
            assert_eq!(phi.eval(&env, &t).unwrap(), want, "{via} {t:?}");
        }
    }
    write(dir.path(), "notr", "table n=1 vals=100\n");
    assert_eq!(tcw(&["synth", "notr", "--via", "sminus1"], dir.path()).status.code(), Some(2));
    // The pipeline needs s3_*; a file with only s2_1_1 does not cover it.
    write(dir.path(), "few", "sminus1 n=2 e=1 d=1\n");
    assert_eq!(tcw(&["synth", "r", "few", "--via", "sminus1"], dir.path()).status.code(), Some(3));
    assert_eq!(tcw(&["synth", "r", "few"], dir.path()).status.code(), Some(1));
}

#[test]
fn basis_examples() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "set", "sminus1 n=4 e=1 d=3\nsminus1 n=12 e=1 d=11\n");
    let o = tcw(&["basis", "set", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r.basis, Some(vec!["sminus1 n=12 e=1 d=11".to_string()]));
    assert_eq!((r.summary.proven, r.summary.refuted), (1, 1));

    write(dir.path(), "one", "sminus1 n=4 e=2 d=2\n");
    let o = tcw(&["basis", "one"], dir.path());
    assert!(stdout(&o).starts_with("basis: {sminus1 n=4 e=2 d=2}"));

    write(dir.path(), "dup", "sminus1 n=4 e=2 d=2\nsminus1 n=4 e=2 d=2\n");
    assert_eq!(tcw(&["basis", "dup"], dir.path()).status.code(), Some(1));

    write(dir.path(), "small", "sminus1 n=2 e=1 d=1\nsminus1 n=3 e=0 d=3\n");
    let o = tcw(&["basis", "small"], dir.path());
    assert!(stdout(&o).contains("flag unknown-irredundancy"));
}

#[test]
fn family_examples() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "e1", "family fixed_e=1\n");
    let o = tcw(&["family", "e1", "--prefix", "5", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r.summary.proven, 5);
    assert!(r.verdicts.iter().all(|v| v.witness.as_ref().is_some_and(|w| w.verified)));

    write(dir.path(), "list", "family list=(2,2);(3,12);(4,60)\n");
    let o = tcw(&["family", "list"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("flag unproven")).count(), 2);

    write(dir.path(), "two", "family fixed_e=1 start=4 step=2\nfamily fixed_e=1 start=5 step=2\n");
    let o = tcw(&["family", "two", "--prefix", "4", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).summary.proven, 8);

    write(dir.path(), "three", "family fixed_e=1\nfamily fixed_e=2\nfamily fixed_d=1\n");
    assert_eq!(tcw(&["family", "three"], dir.path()).status.code(), Some(1));
}

#[test]
fn verify_suites() {
    let dir = TempDir::new().unwrap();
    let o = tcw(&["verify", "--suite", "props"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS zero propagation: 0 violations in 1000 formulas"));
    assert!(text.contains("PASS subformula inclusion: 0 violations in 1000 formulas"));
    let o = tcw(&["verify", "--suite", "lemmas", "--format", "json"], dir.path());
    let r = json(&o);
    assert!(r.checks.iter().any(|c| c.check == "i2 by identification" && c.detail.starts_with("18 instances")));
    assert_eq!(r.summary.checks_failed, 0);
    assert_eq!(tcw(&["verify", "--suite", "nope"], dir.path()).status.code(), Some(1));
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let dir = TempDir::new().unwrap();
    let a = tcw(&["verify", "--suite", "props", "--seed", "11"], dir.path());
    let b = tcw(&["verify", "--suite", "props", "--seed", "11"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("(seed 11)"));
}

#[test]
fn eval_examples() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "f", "(i2 x1 x2)\n");
    let o = tcw(&["eval", "f", "1,2"], dir.path());
    assert_eq!(stdout(&o), "(i2 x1 x2) at (1,2) = 1\n");
    let o = tcw(&["eval", "f", "(0,2)", "--format", "json"], dir.path());
    assert_eq!(json(&o).evaluation.unwrap().value, 0);
    write(dir.path(), "f3", "(i2 x1 x3)");
    let o = tcw(&["eval", "f3", "1,2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("x3"));
    write(dir.path(), "named", "(g x1 x1)");
    write(dir.path(), "gens", "symm n=2 ones=1");
    assert_eq!(tcw(&["eval", "named", "1"], dir.path()).status.code(), Some(1));
    let o = tcw(&["eval", "named", "1", "--generators", "gens"], dir.path());
    assert_eq!(o.status.code(), Some(1), "`g` is not an auto name");
    write(dir.path(), "auto", "(sym2_1 x1 x2)");
    let o = tcw(&["eval", "auto", "1,2"], dir.path());
    assert_eq!(stdout(&o), "(sym2_1 x1 x2) at (1,2) = 1\n");
}

#[test]
fn text_and_json_carry_the_same_verdicts() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "set", "sminus1 n=4 e=1 d=3\nsminus1 n=12 e=1 d=11\nsminus1 n=5 e=2 d=3\n");
    let r = json(&tcw(&["basis", "set", "--format", "json"], dir.path()));
    let text = stdout(&tcw(&["basis", "set"], dir.path()));
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("verdict ")).collect();
    assert_eq!(lines.len(), r.verdicts.len());
    for (line, v) in lines.iter().zip(&r.verdicts) {
        assert!(line.starts_with(&format!("verdict {}: {}", v.verdict.as_str(), v.target)), "{line}");
        if let Some(w) = &v.witness {
            assert!(text.contains(&w.formula));
        }
    }
    let back: Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "tcw.toml", "report_format = \"json\"\nbfs_node_budget = 10\n");
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_tcw")).args(args).current_dir(dir.path()).env("TCW_CONFIG", &cfg).output().unwrap()
    };
    let o = run(&["verify", "--suite", "closure"]);
    assert_eq!(o.status.code(), Some(2));
    let r = json(&o);
    assert!(r.truncated);
    let o = run(&["verify", "--suite", "closure", "--caps", "bfs_node_budget=1000000", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("summary: 2 passed, 0 failed"));
    assert_eq!(run(&["verify", "--caps", "bogus=1"]).status.code(), Some(1));

    let bad = write(dir.path(), "bad.toml", "bfs_depth = 3\n");
    let o = Command::new(env!("CARGO_BIN_EXE_tcw"))
        .args(["enumerate", "2"])
        .env("TCW_CONFIG", &bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
