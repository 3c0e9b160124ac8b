//! End-to-end runs of the binary: payloads, round trips, DOT output and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use finitegeo_core::calculus::enumerate_bicovariant;
use finitegeo_core::connection::{c_connection, solve_invariant};
use finitegeo_core::invariants::{solve_symmetry, SymmetryKind};
use finitegeo_core::{DifferentialCalculus, FiniteGroup};
use serde_json::Value;

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_finitegeo"));
    cmd.args(args).env_remove("FINITEGEO_MAX_ORDER");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Runs with `--json`, asserts success and parses stdout.
fn payload(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON on stdout");
    assert_eq!(v["schema"], 1);
    v
}

fn save(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn s3_transpositions() -> DifferentialCalculus {
    let g = FiniteGroup::symmetric(3).unwrap();
    let hat: Vec<usize> = ["a", "b", "c"].iter().map(|n| g.element(n).unwrap()).collect();
    DifferentialCalculus::from_hat(g, &hat).unwrap()
}

#[test]
fn braid_order_of_universal_s3_is_twelve() {
    assert_eq!(payload(&["braid", "order", "--group", "S3", "--hatg", "all"])["order"], 12);
}

#[test]
fn bi_invariant_torsion_free_family_on_transpositions() {
    let v = payload(&["connection", "solve", "--group", "S3", "--hatg", "a,b,c", "--bi-invariant", "--torsion-free"]);
    assert_eq!(v["parameters"], 3);
    assert_eq!(v["directions"].as_array().unwrap().len(), 3);
    let text = run(&["connection", "solve", "--group", "S3", "--hatg", "a,b,c", "--bi-invariant", "--torsion-free"]);
    assert_eq!(String::from_utf8(text.stdout).unwrap(), "3 free parameters\n");
}

#[test]
fn trivial_group_info() {
    let v = payload(&["group", "info", "Z1"]);
    assert_eq!(v["order"], 1);
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
}

#[test]
fn group_info_matches_library() {
    for spec in ["S3", "Z2xZ3", "D4", "Q8", "A4"] {
        let v = payload(&["group", "info", spec]);
        let n = v["order"].as_u64().unwrap() as usize;
        let mul = &v["mul"];
        // associativity and identity at index 0, read back from the payload
        let m = |a: usize, b: usize| mul[a][b].as_u64().unwrap() as usize;
        for a in 0..n {
            assert_eq!(m(0, a), a);
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(m(m(a, b), c), m(a, m(b, c)));
                }
            }
        }
        // class sizes add up to the order
        let total: usize = v["classes"].as_array().unwrap().iter().map(|c| c.as_array().unwrap().len()).sum();
        assert_eq!(total, n);
    }
}

#[test]
fn generators_build_permutation_groups() {
    assert_eq!(payload(&["group", "info", "--group-generators", "(12),(123)"])["order"], 6);
    assert_eq!(payload(&["group", "info", "--group-generators", "(1234)", "--degree", "4"])["order"], 4);
}

#[test]
fn group_document_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for spec in ["S3", "Z2xZ2", "Q8"] {
        let first = payload(&["group", "info", spec]);
        let file = save(dir.path(), "g.json", &first);
        let second = payload(&["group", "info", &format!("@{file}")]);
        assert_eq!(first, second, "{spec}");
    }
}

#[test]
fn calculus_document_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = payload(&["calculus", "show", "--group", "S3", "--hatg", "class:(12)"]);
    assert_eq!(first["dim"], 3);
    assert_eq!(first["bicovariant"], true);
    let file = save(dir.path(), "c.json", &first);
    let second = payload(&["calculus", "show", "--calculus", &file]);
    assert_eq!(first, second);
}

#[test]
fn connection_document_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["--group", "S3", "--hatg", "a,b,c", "--name", "c"],
        &["--group", "S3", "--hatg", "a,b,c", "--name", "sigma"],
        &["--group", "Z3", "--name", "canonical"],
        &["--group", "S3", "--name", "sigma-inverse"],
    ];
    for args in cases {
        let mut all = vec!["connection", "named"];
        all.extend_from_slice(args);
        let first = payload(&all);
        let file = save(dir.path(), "n.json", &first);
        let second = payload(&["connection", "show", &file]);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn named_c_connection_matches_library() {
    let v = payload(&["connection", "named", "--group", "S3", "--hatg", "a,b,c", "--name", "c"]);
    let c = s3_transpositions();
    let conn = c_connection(&c);
    let gamma = v["gamma"].as_object().unwrap();
    let k = c.dim();
    let name = |p: usize| c.group().display_name(c.hat()[p]).to_string();
    for h in 0..k {
        for j in 0..k {
            for l in 0..k {
                let expected = conn.gamma(h, j, l).constant_value().unwrap().to_string();
                let key = format!("{}|{}|{}", name(h), name(j), name(l));
                let got = gamma.get(&key).map_or("0".to_string(), |v| v.as_str().unwrap().to_string());
                assert_eq!(got, expected, "{key}");
            }
        }
    }
}

#[test]
fn solved_member_is_torsion_free() {
    let dir = tempfile::tempdir().unwrap();
    let v = payload(&[
        "connection",
        "solve",
        "--group",
        "S3",
        "--hatg",
        "a,b,c",
        "--bi-invariant",
        "--torsion-free",
        "--at",
        "1,-2,1/3",
    ]);
    let file = save(dir.path(), "m.json", &v["connection"]);
    let a = payload(&["connection", "analyze", &file, "--torsion"]);
    assert_eq!(a["torsion_free"], true);
    assert_eq!(a["bi_invariant"], true);
    // the family is the library one
    let fam = solve_invariant(&s3_transpositions(), true, true).unwrap();
    assert_eq!(v["parameters"], fam.dim());
}

#[test]
fn analyze_reports_extensibility_and_flatness() {
    let dir = tempfile::tempdir().unwrap();
    let v = payload(&["connection", "named", "--group", "Z3", "--name", "canonical"]);
    let file = save(dir.path(), "k.json", &v);
    let a = payload(&["connection", "analyze", &file]);
    assert_eq!(a["extensible"], true);
    assert_eq!(a["violations"].as_array().unwrap().len(), 0);
    assert!(a.get("flat").is_some() && a.get("representation").is_some());
    // representation and unprojected flatness agree
    assert_eq!(a["representation"], a["flat_raw"]);
    // a hand-written connection with a restricted coefficient is rejected
    let mut bad = payload(&["connection", "named", "--group", "Z4", "--hatg", "a,a2", "--name", "c"]);
    bad["gamma"]["a|a2|a2"] = Value::String("1".into());
    let file = save(dir.path(), "bad.json", &bad);
    let a = payload(&["connection", "analyze", &file, "--extensible"]);
    assert_eq!(a["extensible"], false);
    assert_eq!(a["violations"], serde_json::json!([["a", "a^2", "a^2"]]));
}

#[test]
fn metric_check_on_transpositions() {
    let dir = tempfile::tempdir().unwrap();
    let sigma = save(
        dir.path(),
        "s.json",
        &payload(&["connection", "named", "--group", "S3", "--hatg", "a,b,c", "--name", "sigma"]),
    );
    let metric = serde_json::json!({"schema": 1, "coeffs": {"a,a": "1", "b,b": "1", "c,c": "1"}});
    let m = save(dir.path(), "g.json", &metric);
    let v = payload(&["metric", "check", "--metric", &m, "--connection", &sigma]);
    assert_eq!(v["routes_agree"], true);
    assert_eq!(v["left_invariant"], true);
    assert_eq!(v["s_symmetric"], true);
}

#[test]
fn invariant_tensor_dimensions_match_library() {
    let c = DifferentialCalculus::universal(FiniteGroup::symmetric(3).unwrap());
    for (flag, kind) in [
        ("s-sym", SymmetryKind::StrongSymmetric),
        ("s-antisym", SymmetryKind::StrongAntisymmetric),
        ("w-sym", SymmetryKind::WeakSymmetric),
        ("w-antisym", SymmetryKind::WeakAntisymmetric),
    ] {
        let v = payload(&["tensors", "invariant", "--group", "S3", "--kind", flag, "--pattern"]);
        assert_eq!(v["dim"], solve_symmetry(&c, kind).unwrap().dim(), "{flag}");
        assert_eq!(v["basis"].as_array().unwrap().len(), v["dim"].as_u64().unwrap() as usize);
        assert_eq!(v["pattern"]["cells"].as_array().unwrap().len(), 5);
    }
}

#[test]
fn calculi_list_matches_enumeration() {
    for spec in ["S3", "D4", "Z5"] {
        let v = payload(&["calculi", "list", "--group", spec, "--covariance", "bi"]);
        let g = payload(&["group", "info", spec]);
        let n = g["order"].as_u64().unwrap() as usize;
        let lib = match spec {
            "S3" => FiniteGroup::symmetric(3).unwrap(),
            "D4" => FiniteGroup::dihedral(4),
            _ => FiniteGroup::cyclic(5),
        };
        assert_eq!(lib.order(), n);
        assert_eq!(v["count"], enumerate_bicovariant(lib).unwrap().len());
    }
}

#[test]
fn action_orbits_and_calculi() {
    let v = payload(&["action", "orbits", "--set", "3", "--group-generators", "(12)"]);
    assert_eq!(v["orbits"], serde_json::json!([[[1, 2], [2, 1]], [[1, 3], [2, 3]], [[3, 1], [3, 2]]]));
    let all = payload(&["action", "calculi", "--set", "3", "--group-generators", "(12)"]);
    assert_eq!(all["count"], 8);
    let irr = payload(&["action", "calculi", "--set", "3", "--group-generators", "(12)", "--irreducible"]);
    assert_eq!(irr["count"], 3);
}

#[test]
fn dot_output_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.dot");
    let out =
        run(&["calculus", "show", "--group", "S3", "--hatg", "a,b,c", "--dot", path.to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    // 18 arrows, all mutual
    assert_eq!(dot.matches("dir=both").count(), 9);
    let out = run(&["braid", "order", "--group", "S3", "--dot", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["tensors", "invariant", "--group", "S3", "--kind", "bi", "--pattern", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["group", "info", "Y7"])), 2);
    assert_eq!(code(&run(&["group", "info"])), 2);
    assert_eq!(code(&run(&["connection", "analyze", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&run_env(&["group", "info", "S3"], &[("FINITEGEO_MAX_ORDER", "many")])), 2);
    // domain
    let out = run(&["braid", "order", "--group", "S3", "--hatg", "a"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not bicovariant"));
    assert_eq!(code(&run(&["calculus", "show", "--group", "S3", "--hatg", "e"])), 1);
    assert_eq!(code(&run(&["calculus", "show", "--group", "S3", "--hatg", "q"])), 1);
    let out = run_env(&["group", "info", "S4"], &[("FINITEGEO_MAX_ORDER", "20")]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound 20"));
    assert_eq!(code(&run_env(&["group", "info", "S4"], &[("FINITEGEO_MAX_ORDER", "24")])), 0);
}

#[test]
fn quiet_suppresses_output() {
    let out = run(&["group", "info", "S3", "--quiet", "--json"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
}

#[test]
fn schema_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = payload(&["group", "info", "Z2"]);
    v["schema"] = 2.into();
    let file = save(dir.path(), "g.json", &v);
    assert_eq!(code(&run(&["group", "info", &format!("@{file}")])), 2);
}
