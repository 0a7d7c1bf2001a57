use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn ndgtool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ndgtool")).args(args).env_remove("NDGTOOL_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// `check -> value` rows of a TSV report.
fn rows(o: &Output) -> Vec<(String, String, String)> {
    stdout(o)
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let mut it = l.splitn(3, '\t');
            (it.next().unwrap().into(), it.next().unwrap().into(), it.next().unwrap_or("").into())
        })
        .collect()
}

fn value(o: &Output, check: &str) -> String {
    rows(o).into_iter().find(|r| r.0 == check).unwrap_or_else(|| panic!("no row {check}")).2
}

#[test]
fn minimal_workspace_checks() {
    let o = ndgtool(&["check", &fixture("minimal.json")]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["results"].as_array().unwrap().len(), 1);
}

#[test]
fn bad_square_names_complex_and_degree() {
    let o = ndgtool(&["check", &fixture("bad_square.json"), "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(1));
    let msg = value(&o, "load");
    assert!(msg.contains("complexes.Bad") && msg.contains("degree 0"), "{msg}");
}

#[test]
fn malformed_json_is_a_usage_error() {
    let o = ndgtool(&["check", &fixture("malformed.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(ndgtool(&["check", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(ndgtool(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn block_has_no_homology() {
    for file in ["basic.json", "cyclotomic.json"] {
        let o = ndgtool(&["homology", &fixture(file), "--complex", "Block", "--format", "tsv"]);
        assert_eq!(o.status.code(), Some(0));
        for (check, _, v) in rows(&o) {
            if check.starts_with("H^") {
                assert_eq!(v, "0", "{file} {check}");
            }
        }
        assert_eq!(value(&o, "acyclic"), "true");
    }
}

#[test]
fn truncated_block_homology() {
    // d: k -> k in degrees 0, 1 with N = 3: ker d^2 at 0 and ker d at 1 survive.
    let o = ndgtool(&["homology", &fixture("basic.json"), "--complex", "Short", "--window", "-1..2", "--format", "tsv"]);
    let expect = [("H^0_(1)", "0"), ("H^0_(2)", "1"), ("H^1_(1)", "1"), ("H^1_(2)", "0"), ("H^-1_(1)", "0"), ("H^2_(2)", "0")];
    for (c, v) in expect {
        assert_eq!(value(&o, c), v, "{c}");
    }
}

#[test]
fn contract_block() {
    let o = ndgtool(&["contract", &fixture("basic.json"), "--complex", "Block", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&o, "blocks"), "1x[0..2]");
    // The block is already in normal form, so the checksum is stable.
    let again = ndgtool(&["contract", &fixture("basic.json"), "--complex", "Block", "--format", "tsv"]);
    assert_eq!(value(&o, "basis change checksum"), value(&again, "basis change checksum"));
    let o = ndgtool(&["contract", &fixture("basic.json"), "--complex", "K"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn khom_dimensions() {
    let f = fixture("basic.json");
    let dim = |s: &str, t: &str, n: &str, flavor: &str| {
        let o = ndgtool(&["khom", &f, "--source", s, "--target", t, "--n", n, "--flavor", flavor, "--format", "tsv"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        value(&o, "dimension")
    };
    // The identity of k is not null-homotopic; a contractible target kills everything.
    assert_eq!(dim("K", "K", "0", "susp0"), "1");
    assert_eq!(dim("K", "Block", "0", "susp0"), "0");
    assert_eq!(dim("Block", "K", "0", "susp1"), "0");
    // Maps out of the representable evaluate at the unit: H^0_(1) of k[x]/(x^4) is 1.
    assert_eq!(dim("P", "P", "0", "susp0"), "1");
    let o = ndgtool(&["khom", &f, "--source", "K", "--target", "P"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cone_of_inclusion() {
    let o = ndgtool(&["cone", &fixture("basic.json"), "--map", "incl", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&o, "quasi-isomorphism"), "true");
    assert_eq!(value(&o, "cone acyclic"), "true");
    let o = ndgtool(&["cone", &fixture("basic.json"), "--map", "missing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn adjunction_and_homspace() {
    let f = fixture("basic.json");
    let o = ndgtool(&["adjoint", &f, "--x", "P", "--bimodule", "Reg", "--y", "SigmaP", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(rows(&o).iter().all(|r| r.1 == "pass"));
    let o = ndgtool(&["homspace", &f, "--source", "P", "--target", "SigmaP", "--format", "tsv"]);
    // Hom out of a representable is the value at its object.
    assert_eq!(value(&o, "total"), "8");
}

#[test]
fn verify_examples_pass_and_are_deterministic() {
    let runs = [
        vec!["verify", "--suite", "q-identities", "--N", "2..8"],
        vec!["verify", "--suite", "leibniz-powers", "--N", "3", "--trials", "100", "--seed", "42"],
        vec!["verify", "--suite", "hexagon", "--N", "2..5", "--trials", "50", "--seed", "7"],
    ];
    for args in runs {
        let a = ndgtool(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stdout(&a));
        let b = ndgtool(&args);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_ndgtool"))
        .args(["verify", "--suite", "contraction", "--N", "3", "--trials", "3", "--format", "tsv"])
        .env("NDGTOOL_SEED", "1234")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# seed\t1234"));
}

#[test]
fn verify_usage_errors() {
    assert_eq!(ndgtool(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(ndgtool(&["verify", "--suite", "hexagon", "--N", "1..3"]).status.code(), Some(2));
    assert_eq!(ndgtool(&["verify", "--suite", "hexagon", "--N", "x"]).status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let args = ["verify", "--suite", "n2-regression", "--trials", "5"];
    let plain: serde_json::Value = serde_json::from_slice(&ndgtool(&args).stdout).unwrap();
    assert!(plain.get("timing_ms").is_none());
    let timed = ndgtool(&[&args[..], &["--timing"]].concat());
    let timed: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(timed["timing_ms"].is_u64());
}
