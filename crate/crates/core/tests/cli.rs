use std::fs;
use std::path::PathBuf;
use std::process::Command;

use polydiag::cli::run;
use polydiag::limits::ApproachProfile;
use polydiag::{Chain, LeveledTree, XPoly};
use tempfile::TempDir;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn polydiag(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("polydiag").chain(args.iter().copied()), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

const PROFILE_A: &str = r#"{"n":4,"exponents":[[null,"3","1","1"],["3",null,"1","1"],["1","1",null,"2"],["1","1","2",null]]}"#;
const PROFILE_B: &str = r#"{"n":4,"exponents":[[null,"2","1","1"],["2",null,"1","1"],["1","1",null,"3"],["1","1","3",null]]}"#;
const NINE_POINTS: &str = r#"{"n":9,"partitions":[
    {"n":9,"blocks":[[1,2,3,5,7],[4,6,8],[9]]},
    {"n":9,"blocks":[[1,5],[2,3],[4,6,8],[7],[9]]},
    {"n":9,"blocks":[[1],[2,3],[4,6],[5],[7],[8],[9]]}]}"#;

#[test]
fn strata_table_formats() {
    let csv = polydiag(&["count", "table", "--max-n", "4", "--format", "csv"]);
    assert_eq!(csv.stdout, "n,fm_strata,polydiag_strata\n2,2,2\n3,8,8\n4,52,64\n");
    let json = polydiag(&["--format", "json", "count", "table", "--max-n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["rows"][1]["polydiag_strata"], "8");
    let bad = polydiag(&["count", "table", "--max-n", "1"]);
    assert_eq!(bad.code, 1);
    assert!(bad.stderr.starts_with("error[validation]: invalid max-n"), "{}", bad.stderr);
}

#[test]
fn strata_counts_by_codim() {
    assert_eq!(polydiag(&["count", "strata", "--n", "9"]).stdout, "1036555120\n");
    assert_eq!(polydiag(&["count", "strata", "--n", "5", "--codim", "1"]).stdout, "51\n");
    assert_eq!(polydiag(&["count", "strata", "--n", "5", "--codim", "5"]).code, 1);
}

#[test]
fn brick_polynomials() {
    let r = polydiag(&["poly", "brick", "--m", "1", "--lambda", "1,1,1"]);
    assert_eq!((r.code, r.stdout.as_str(), r.stderr.as_str()), (0, "u^2+4u+1\n", ""));
    let r = polydiag(&["poly", "brick", "--m", "1", "--lambda", "1,2", "--open"]);
    assert_eq!(r.stdout, "u^2-3u+2\n");
    assert_eq!(r.stderr, "warning: lambda reordered to (2,1)\n");
    let r = polydiag(&["poly", "brick", "--m", "1", "--lambda", "1,1,1", "--var", "t"]);
    assert_eq!(r.stdout, "t^4+4t^2+1\n");
    let r = polydiag(&["poly", "brick", "--m", "1", "--lambda", "1,0"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("lambda"), "{}", r.stderr);
}

#[test]
fn u_polynomials_round_trip_as_json() {
    let r = polydiag(&["--format", "json", "poly", "u", "--m", "2", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let p: XPoly = serde_json::from_value(v["coefficients"].clone()).unwrap();
    assert_eq!(p, polydiag::hodge::u_poly(2, 4).unwrap());
    assert_eq!(v["text"], p.to_string());
    let closed = polydiag(&["poly", "u", "--m", "2", "--n", "4", "--closed-form"]);
    assert_eq!(closed.stdout, format!("{p}\n"));
}

#[test]
fn stratum_polynomial_from_file() {
    let dir = TempDir::new().unwrap();
    let chain = write(&dir, "bottom.json", r#"{"n":2,"partitions":[{"n":2,"blocks":[[1,2]]}]}"#);
    let chain = chain.to_str().unwrap();
    assert_eq!(polydiag(&["poly", "stratum", "--m", "2", "--chain", chain]).stdout, "(u+1)*x\n");
    assert_eq!(polydiag(&["poly", "stratum", "--m", "1", "--chain", chain]).stdout, "x\n");

    let broken = write(&dir, "broken.json", r#"{"n":2,"partitions":[{"n":2,"blocks":[[1],[2]]}]}"#);
    let r = polydiag(&["poly", "stratum", "--m", "1", "--chain", broken.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("error[validation]: invalid chain"), "{}", r.stderr);

    let missing = dir.path().join("nope.json");
    let r = polydiag(&["poly", "stratum", "--m", "1", "--chain", missing.to_str().unwrap()]);
    assert_eq!(r.code, 1);
}

#[test]
fn consistency_reports() {
    let r = polydiag(&["check", "consistency", "--m", "1", "--n", "4"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "ok: m=1 n=4, 64 chains\n"));
    let r = polydiag(&["--format", "json", "check", "consistency", "--m", "2", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["diff"], serde_json::json!([]));
}

#[test]
fn enumeration_streams() {
    let r = polydiag(&["enumerate", "chains", "--n", "3"]);
    assert_eq!(r.stdout.lines().count(), 8);
    assert_eq!(r.stdout.lines().next(), Some("[]"));

    let r = polydiag(&["--format", "json", "enumerate", "chains", "--n", "4"]);
    let chains: Vec<Chain> = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(chains.len(), 64);

    let r = polydiag(&["enumerate", "nests", "--n", "9"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("invalid limit"), "{}", r.stderr);
    let r = polydiag(&["enumerate", "chains", "--n", "9", "--limit", "5", "--format", "csv"]);
    assert_eq!(r.stdout.lines().count(), 6);
    assert!(r.stdout.starts_with("length,chain\n0,[]\n"));

    let r = polydiag(&["--format", "json", "enumerate", "partitions", "--n", "3", "--limit", "0"]);
    assert_eq!(r.stdout, "[]\n");
}

#[test]
fn theta_commands() {
    let r = polydiag(&["theta", "schedule", "--n", "5"]);
    assert_eq!(r.stdout, "stage 2: (3,2) x10 (total 10)\nstage 3: (2,2,1) x15 (total 15)\n");
    let r = polydiag(&["theta", "schedule", "--n", "3"]);
    assert_eq!(r.stdout, "no blowups: X<3> = X[3]\n");

    let dir = TempDir::new().unwrap();
    let tree = write(
        &dir,
        "cherries.json",
        r#"{"n":4,"vertices":[{"label":[1,2,3,4],"parent":null},{"label":[1,2],"parent":0},{"label":[3,4],"parent":0}]}"#,
    );
    let r = polydiag(&["theta", "fiber", "--tree", tree.to_str().unwrap(), "--list"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("3"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn classify_collision_pair() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", PROFILE_A);
    let b = write(&dir, "b.json", PROFILE_B);
    let ra = polydiag(&["classify", "--profile", a.to_str().unwrap()]);
    let rb = polydiag(&["classify", "--profile", b.to_str().unwrap()]);
    assert_eq!(ra.stdout.lines().next(), Some("chain: [1234 < 12|34 < 12|3|4]"));
    assert_eq!(rb.stdout.lines().next(), Some("chain: [1234 < 12|34 < 1|2|34]"));
    let nest = |s: &str| s.lines().find(|l| l.starts_with("nest:")).unwrap().to_string();
    assert_eq!(nest(&ra.stdout), "nest:  {1234,12,34}");
    assert_eq!(nest(&ra.stdout), nest(&rb.stdout));

    let dot = polydiag(&["classify", "--profile", a.to_str().unwrap(), "--dot"]);
    assert!(dot.stdout.starts_with("digraph leveled_tree {"));
    assert!(dot.stdout.trim_end().ends_with('}'));

    let json = polydiag(&["--format", "json", "classify", "--profile", a.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    let profile: ApproachProfile = serde_json::from_value(v["profile"].clone()).unwrap();
    assert_eq!(serde_json::to_string(&profile).unwrap(), PROFILE_A);
    let _: LeveledTree = serde_json::from_value(v["tree"].clone()).unwrap();
}

#[test]
fn classify_from_curves() {
    let dir = TempDir::new().unwrap();
    let curves = write(
        &dir,
        "curves.json",
        r#"{"n":4,"m":2,"curves":[[["0"],["0"]],[["0","0","0","1"],["0"]],[["0","1"],["0"]],[["0","1","1"],["0"]]]}"#,
    );
    let r = polydiag(&["classify", "--curves", curves.to_str().unwrap()]);
    assert_eq!(r.stdout.lines().next(), Some("chain: [1234 < 12|34 < 12|3|4]"));

    let bad = write(&dir, "bad.json", r#"{"n":3,"exponents":[[null,"2","0"],["2",null,"2"],["0","2",null]]}"#);
    let r = polydiag(&["classify", "--profile", bad.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("(1,2,3)"), "{}", r.stderr);

    let both = polydiag(&["classify", "--profile", "x", "--curves", "y"]);
    assert_eq!(both.code, 1);
    assert!(both.stderr.starts_with("error[usage]"));
}

#[test]
fn tree_of_nine_point_chain() {
    let dir = TempDir::new().unwrap();
    let chain = write(&dir, "nine.json", NINE_POINTS);
    let r = polydiag(&["tree", "--chain", chain.to_str().unwrap()]);
    assert_eq!(r.stdout, "12357@1 15@2 468@2 23@3 46@3\n");
    let r = polydiag(&["tree", "--chain", chain.to_str().unwrap(), "--dot"]);
    assert!(r.stdout.contains("rank=same"));
}

#[test]
fn dot_only_for_trees() {
    let r = polydiag(&["--format", "dot", "count", "table", "--max-n", "3"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("error[validation]: invalid format"));
}

#[test]
fn strata_listing() {
    let r = polydiag(&["strata", "--n", "3", "--m", "1"]);
    assert_eq!(r.stdout.lines().count(), 8);
    assert!(r.stdout.starts_with("[]  codim 0  X<3>  x^3+u*x\n"));
    let r = polydiag(&["strata", "--n", "3", "--m", "1", "--open", "--format", "csv"]);
    assert!(r.stdout.starts_with("chain,codim,bundle,polynomial\n[],0,\"Conf(X,3)\",x^3-3x^2+2x\n"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["enumerate", "nests", "--n", "5"][..],
        &["--format", "json", "strata", "--n", "4", "--m", "2"][..],
        &["theta", "schedule", "--n", "7"][..],
    ] {
        assert_eq!(polydiag(args).stdout, polydiag(args).stdout);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_polydiag");
    let ok = Command::new(bin).args(["poly", "brick", "--m", "1", "--lambda", "1,1,1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "u^2+4u+1\n");

    let bad = Command::new(bin).args(["poly", "u", "--m", "0", "--n", "3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert_eq!(stderr.lines().count(), 1);
    assert!(stderr.starts_with("error[validation]: invalid m"));

    let unknown = Command::new(bin).args(["count", "--frobnicate"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(1));

    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("classify"));
}
