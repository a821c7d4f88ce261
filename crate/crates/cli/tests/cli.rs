use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

const GRAPHS: &str = "signature E/2
# small graphs
structure P3
  elements a b c
  E: (a,b) (b,a) (b,c) (c,b)
structure K2
  elements x y
  E: (x,y) (y,x)
structure K3
  elements a b c
  E: (a,b) (b,a) (a,c) (c,a) (b,c) (c,b)
";

const CHAIN: &str = "signature E/2
structure A1
  elements a
  E:
structure A2
  elements a b
  E: (a,b) (b,a)
structure A3
  elements a b c
  E: (a,b) (b,a) (b,c) (c,b) (a,c) (c,a)
";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn setup() -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.struct");
    fs::write(&g, GRAPHS).unwrap();
    fs::write(dir.path().join("chain.struct"), CHAIN).unwrap();
    (dir, g)
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_relhom"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

#[test]
fn hom_find_golden() {
    let (dir, _) = setup();
    let r = run(dir.path(), &["hom", "find", "g.struct#P3", "g.struct#K2", "--mode", "hom"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "# result: found\n# map: a->x, b->y, c->x\n# mode: hom\n# source: P3\n# target: K2\n"
    );
    let r = run(dir.path(), &["hom", "find", "g.struct#K3", "g.struct#K2", "--format", "lines"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "result=not-found\nmode=hom\nsource=K3\ntarget=K2\n");
}

#[test]
fn seeded_search_respects_the_seed() {
    let (dir, _) = setup();
    let r = run(dir.path(), &["hom", "find", "g.struct#P3", "g.struct#K2", "--seed", "a=y"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("# map: a->y, b->x, c->y\n"), "{}", r.stdout);
    let r = run(dir.path(), &["hom", "find", "g.struct#P3", "g.struct#K2", "--seed", "a=y,b=y"]);
    assert_eq!(r.code, 1);
}

#[test]
fn hom_count() {
    let (dir, _) = setup();
    let r = run(dir.path(), &["hom", "count", "g.struct#K3", "g.struct#K3", "--mode", "iso", "--format", "lines"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("count=6\n"));
}

#[test]
fn core_golden() {
    let (dir, _) = setup();
    let r = run(dir.path(), &["core", "g.struct#P3"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "# result: found\n# size: 2\n# retraction: a->a, b->b, c->a\nsignature E/2\nstructure core_P3\n  elements a b\n  E: (a,b) (b,a)\n"
    );
    assert_eq!(run(dir.path(), &["core", "check", "g.struct#P3"]).code, 1);
    assert_eq!(run(dir.path(), &["core", "check", "g.struct#K3"]).code, 0);
}

#[test]
fn cspeq_witness_round_trip() {
    let (dir, _) = setup();
    let r = run(dir.path(), &["cspeq", "g.struct#K3", "g.struct#K2", "--size", "3"]);
    assert_eq!(r.code, 1);
    // The whole text report is a structure file.
    fs::write(dir.path().join("w.struct"), &r.stdout).unwrap();
    assert_eq!(run(dir.path(), &["hom", "find", "w.struct#witness", "g.struct#K3"]).code, 0);
    assert_eq!(run(dir.path(), &["hom", "find", "w.struct#witness", "g.struct#K2"]).code, 1);
    assert_eq!(run(dir.path(), &["hom", "find", "w.struct", "g.struct#K3", "--mode", "iso"]).code, 0);
    assert_eq!(run(dir.path(), &["cspeq", "g.struct#K3", "g.struct#K3", "--size", "3"]).code, 0);
}

#[test]
fn lines_witness_round_trip() {
    let (dir, _) = setup();
    let r = run(dir.path(), &["irr", "g.struct#P3", "--class", "all-graphs", "--bound", "3", "--format", "lines"]);
    assert_eq!(r.code, 1);
    let file: String = r
        .stdout
        .lines()
        .filter_map(|l| l.strip_prefix("struct="))
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(dir.path().join("t.struct"), file).unwrap();
    let map = r.stdout.lines().find_map(|l| l.strip_prefix("map=")).unwrap();
    let seed = map.replace("->", "=").replace(' ', "");
    // The reported map is a homomorphism that is not an embedding.
    assert_eq!(run(dir.path(), &["hom", "find", "g.struct#P3", "t.struct#target", "--seed", &seed]).code, 0);
    assert_eq!(
        run(dir.path(), &["hom", "find", "g.struct#P3", "t.struct#target", "--seed", &seed, "--mode", "embed"]).code,
        1
    );
}

#[test]
fn class_check_verdicts() {
    let (dir, _) = setup();
    let r = run(dir.path(), &["class", "check", "age-of:g.struct#P3", "--prop", "hap", "--size", "3", "--amalgam", "6"]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert!(r.stdout.starts_with("# result: fails\n"));
    fs::write(dir.path().join("c.struct"), &r.stdout).unwrap();
    for name in ["A", "B1", "B2"] {
        assert_eq!(run(dir.path(), &["hom", "find", &format!("c.struct#{name}"), "g.struct#P3", "--mode", "embed"]).code, 0);
    }
    let r = run(dir.path(), &["class", "check", "all-graphs", "--prop", "ap", "--size", "3", "--amalgam", "5"]);
    assert_eq!(r.code, 0);
    let r = run(dir.path(), &["class", "check", "age-of:g.struct#K3", "--prop", "hap", "--size", "3", "--amalgam", "6"]);
    assert_eq!(r.code, 0);
}

#[test]
fn limit_build_is_deterministic_and_logs() {
    let (dir, _) = setup();
    let args = ["limit", "build", "all-graphs", "--steps", "12", "--mode", "hap", "--seed-bound", "2", "--log", "run.log"];
    let first = run(dir.path(), &args);
    let log1 = fs::read_to_string(dir.path().join("run.log")).unwrap();
    let second = run(dir.path(), &args);
    let log2 = fs::read_to_string(dir.path().join("run.log")).unwrap();
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(log1, log2);
    assert_eq!(log1.lines().count(), 12);
    for (k, line) in log1.lines().enumerate() {
        let parts: Vec<&str> = line.split(' ').collect();
        assert_eq!(parts.len(), 4, "{line}");
        assert_eq!(parts[0], format!("stage={}", k + 1));
        let action = if k % 2 == 0 { "action=amalgam" } else { "action=joint-embed" };
        assert_eq!(parts[1], action);
        assert!(parts[2].strip_prefix("size=").unwrap().parse::<usize>().is_ok());
        assert!(parts[3].starts_with("task="));
    }
    fs::write(dir.path().join("h.struct"), &first.stdout).unwrap();
    let v = run(dir.path(), &["limit", "verify", "h.struct#H", "all-graphs", "--size", "2"]);
    assert!(v.code == 0 || v.code == 1);
    let args = ["limit", "build", "all-graphs", "--steps", "30", "--mode", "hap", "--seed-bound", "2"];
    fs::write(dir.path().join("h.struct"), run(dir.path(), &args).stdout).unwrap();
    assert_eq!(run(dir.path(), &["limit", "verify", "h.struct#H", "all-graphs", "--size", "2"]).code, 0);
}

#[test]
fn limit_verify_witness() {
    let (dir, _) = setup();
    let r = run(dir.path(), &["limit", "verify", "g.struct#P3", "age-of:g.struct#P3", "--size", "3"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("structure A\n") && r.stdout.contains("structure B\n"));
    assert_eq!(run(dir.path(), &["limit", "verify", "g.struct#K3", "age-of:g.struct#K3", "--size", "3"]).code, 0);
}

#[test]
fn konig_chain_file() {
    let (dir, _) = setup();
    let r = run(dir.path(), &["konig", "chain.struct", "g.struct#K3", "--depth", "3", "--format", "lines"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("result=branch\n"));
    assert!(r.stdout.contains("level3="));
    let r = run(dir.path(), &["konig", "chain.struct", "g.struct#K2"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("# level: 3\n"));
}

#[test]
fn other_verbs_succeed() {
    let (dir, _) = setup();
    for args in [
        vec!["age", "g.struct#P3", "--max", "2"],
        vec!["saturate", "g.struct#P3", "--tuple", "a,c"],
        vec!["types", "g.struct#P3", "--arity", "2"],
        vec!["types", "g.struct#P3", "--arity", "1", "--order", "endo"],
        vec!["expand", "g.struct#P3", "--arity", "2"],
        vec!["coreapprox", "g.struct#K3", "--steps", "5"],
        vec!["project", "age-of:g.struct#P3", "age-of:g.struct#K2", "--size", "3"],
        vec!["homog", "check", "g.struct#K3", "--kind", "iso"],
    ] {
        let r = run(dir.path(), &args);
        assert_eq!(r.code, 0, "{args:?}: {}{}", r.stdout, r.stderr);
    }
    let r = run(dir.path(), &["precedes", "g.struct#P3", "g.struct#K2", "--size", "3"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("# reason: no-extension\n"));
}

#[test]
fn exit_codes_for_errors() {
    let (dir, _) = setup();
    assert_eq!(run(dir.path(), &["frobnicate"]).code, 64);
    assert_eq!(run(dir.path(), &["hom", "find", "g.struct#P3"]).code, 64);
    assert_eq!(run(dir.path(), &["irr", "g.struct#P3", "--class", "no-such", "--bound", "3"]).code, 64);
    assert_eq!(run(dir.path(), &["hom", "find", "missing.struct#P3", "g.struct#K2"]).code, 65);
    assert_eq!(run(dir.path(), &["hom", "find", "g.struct#Q", "g.struct#K2"]).code, 65);
    fs::write(dir.path().join("bad.struct"), "signature E/2\nstructure X\n  elements a\n  E: (a,z)\n").unwrap();
    assert_eq!(run(dir.path(), &["core", "bad.struct#X"]).code, 65);
    let r = run(dir.path(), &["hom", "count", "g.struct#K3", "g.struct#K3", "--max-nodes", "2"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.starts_with("# result: inconclusive\n"));
    assert_eq!(run(dir.path(), &["core", "g.struct#K3", "--max-elements", "2"]).code, 2);
    assert_eq!(run(dir.path(), &["--version"]).code, 0);
}
