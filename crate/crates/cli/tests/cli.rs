//! End-to-end tests of the command dispatch: subcommand behavior,
//! exit codes, error kinds and byte determinism.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use tempfile::TempDir;

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["poa".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut buf = Vec::new();
    let code = poa_cli::run(&argv, &mut buf);
    (code, String::from_utf8(buf).expect("utf-8 output"))
}

fn write_fixture(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path.display().to_string()
}

struct Fixtures {
    _dir: TempDir,
    root: PathBuf,
}

impl Fixtures {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let root = dir.path().to_path_buf();
        Fixtures { _dir: dir, root }
    }

    fn add(&self, name: &str, content: &str) -> String {
        write_fixture(&self.root, name, content)
    }

    fn pauli_x(&self) -> String {
        self.add(
            "pauli_x.json",
            r#"{"dim": 2, "label": "X", "re": [[0.0, 1.0], [1.0, 0.0]]}"#,
        )
    }

    fn pauli_z(&self) -> String {
        self.add(
            "pauli_z.json",
            r#"{"dim": 2, "label": "Z", "re": [[1.0, 0.0], [0.0, -1.0]]}"#,
        )
    }

    fn identity2(&self) -> String {
        self.add(
            "identity.json",
            r#"{"dim": 2, "re": [[1.0, 0.0], [0.0, 1.0]]}"#,
        )
    }

    fn standard_basis2(&self) -> String {
        self.add(
            "basis2.json",
            r#"{"dim": 2, "elements": [
                {"dim": 2, "re": [[1.0, 0.0], [0.0, 0.0]]},
                {"dim": 2, "re": [[0.0, 0.0], [0.0, 1.0]]}
            ]}"#,
        )
    }
}

fn parse(output: &str) -> Value {
    serde_json::from_str(output).expect("valid JSON report")
}

fn checks_all_pass(report: &Value) -> bool {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"].as_bool().unwrap())
}

#[test]
fn decompose_pauli_x_reports_plus_minus_one() {
    let f = Fixtures::new();
    let (code, out) = run_cli(&["decompose", &f.pauli_x()]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["command"], "decompose");
    let coefficients = report["results"]["coefficients"].as_array().unwrap();
    assert_eq!(coefficients.len(), 2);
    assert!((coefficients[0].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert!((coefficients[1].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(checks_all_pass(&report));
}

#[test]
fn compat_pauli_pair_is_incompatible_with_norm_two() {
    let f = Fixtures::new();
    let (code, out) = run_cli(&["compat", &f.pauli_x(), &f.pauli_z()]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert_eq!(report["results"]["compatible"], Value::Bool(false));
    assert_eq!(report["results"]["commutator_norm"].as_f64().unwrap(), 2.0);
    assert!(checks_all_pass(&report));
}

#[test]
fn verify_identity_passes_every_check() {
    let f = Fixtures::new();
    let (code, out) = run_cli(&["verify", &f.identity2()]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert!(checks_all_pass(&report));
    assert_eq!(report["results"]["files"][0]["observable"], true);
    assert_eq!(report["results"]["files"][0]["projector"], true);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let f = Fixtures::new();
    let x = f.pauli_x();
    let z = f.pauli_z();
    let one = f.identity2();
    let args = ["verify", x.as_str(), z.as_str(), one.as_str()];
    let (c1, out1) = run_cli(&args);
    let (c2, out2) = run_cli(&args);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(out1, out2);
}

#[test]
fn floats_are_serialized_with_seventeen_digits() {
    let f = Fixtures::new();
    let (_, out) = run_cli(&["compat", &f.pauli_x(), &f.pauli_z()]);
    assert!(out.contains("\"commutator_norm\":2.0000000000000000e0"));
}

#[test]
fn error_kinds_and_exit_codes() {
    let f = Fixtures::new();

    let (code, out) = run_cli(&["decompose", "no_such_file.json"]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "Io");

    let jagged = f.add("jagged.json", r#"{"dim": 2, "re": [[1.0], [0.0, 1.0]]}"#);
    let (code, out) = run_cli(&["decompose", &jagged]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "InvalidMatrix");

    let skew = f.add(
        "skew.json",
        r#"{"dim": 2, "re": [[0.0, 0.0], [0.0, 0.0]], "im": [[1.0, 0.0], [0.0, 1.0]]}"#,
    );
    let (code, out) = run_cli(&["decompose", &skew]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "NotHermitian");

    let (code, out) = run_cli(&["refine", &f.pauli_x(), &f.pauli_z()]);
    assert_eq!(code, 2);
    let payload = parse(&out);
    assert_eq!(payload["kind"], "IncompatibleObservables");
    assert!(payload["message"].as_str().unwrap().contains("X"));

    let (code, out) = run_cli(&["--max-dim", "1", "decompose", &f.pauli_x()]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "DimensionLimit");

    let (code, out) = run_cli(&["decompose", &f.pauli_x(), "--apply", "cube"]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "Usage");

    let (code, out) = run_cli(&["decompose"]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "Usage");

    let (code, _) = run_cli(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn apply_named_functions_through_decompose() {
    let f = Fixtures::new();
    let diag = f.add("diag14.json", r#"{"dim": 2, "re": [[1.0, 0.0], [0.0, 4.0]]}"#);

    let (code, out) = run_cli(&["decompose", &diag, "--apply", "sqrt"]);
    assert_eq!(code, 0);
    let report = parse(&out);
    let applied = report["results"]["applied"]["coefficients"]
        .as_array()
        .unwrap();
    assert!((applied[0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((applied[1].as_f64().unwrap() - 2.0).abs() < 1e-9);

    let (code, out) = run_cli(&["decompose", &diag, "--apply", "indicator:4"]);
    assert_eq!(code, 0);
    let report = parse(&out);
    let image = &report["results"]["applied"]["result"];
    assert_eq!(image["re"][0][0].as_f64().unwrap(), 0.0);
    assert_eq!(image["re"][1][1].as_f64().unwrap(), 1.0);

    // sqrt of a negative spectrum is a domain error.
    let negative = f.add("neg.json", r#"{"dim": 2, "re": [[-1.0, 0.0], [0.0, 4.0]]}"#);
    let (code, out) = run_cli(&["decompose", &negative, "--apply", "sqrt"]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "FunctionDomainError");
}

#[test]
fn complete_set_examples() {
    let f = Fixtures::new();
    let a = f.add(
        "a.json",
        r#"{"dim": 3, "label": "A", "re": [[1.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,2.0]]}"#,
    );
    let b = f.add(
        "b.json",
        r#"{"dim": 3, "label": "B", "re": [[5.0,0.0,0.0],[0.0,6.0,0.0],[0.0,0.0,6.0]]}"#,
    );

    let (code, out) = run_cli(&["complete-set", &a]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert_eq!(report["results"]["complete"], false);
    assert_eq!(
        report["results"]["non_elementary"][0]["trace"]
            .as_f64()
            .unwrap()
            .round(),
        2.0
    );

    let (code, out) = run_cli(&["complete-set", &a, &b]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert_eq!(report["results"]["complete"], true);
    let labels = report["results"]["set"]["labels"].as_array().unwrap();
    let pairs: Vec<(f64, f64)> = labels
        .iter()
        .map(|t| (t[0].as_f64().unwrap(), t[1].as_f64().unwrap()))
        .collect();
    assert_eq!(pairs, vec![(1.0, 5.0), (1.0, 6.0), (2.0, 6.0)]);

    let c = f.add(
        "c.json",
        r#"{"dim": 3, "label": "C", "re": [[7.0,0.0,0.0],[0.0,8.0,0.0],[0.0,0.0,9.0]]}"#,
    );
    let (code, out) = run_cli(&["express", &c, "--set", &a, &b]);
    assert_eq!(code, 0);
    let report = parse(&out);
    let values: Vec<f64> = report["results"]["table"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values, vec![7.0, 8.0, 9.0]);

    // An incomplete set cannot serve express.
    let (code, out) = run_cli(&["express", &c, "--set", &a]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "NotElementaryBasis");
}

fn build_dyads(f: &Fixtures) -> String {
    let basis = f.standard_basis2();
    let (code, out) = run_cli(&["dyads", "build", &basis]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert!(checks_all_pass(&report));
    f.add(
        "dyads2.json",
        &serde_json::to_string(&report["results"]).unwrap(),
    )
}

#[test]
fn dyad_construction_and_components() {
    let f = Fixtures::new();
    let dyads = build_dyads(&f);
    let report: Value = serde_json::from_str(&fs::read_to_string(&dyads).unwrap()).unwrap();
    // Γ₀₁ over the standard basis is the upper matrix unit.
    assert_eq!(report["dyads"][0][1]["re"][0][1].as_f64().unwrap(), 1.0);
    assert_eq!(report["dyads"][0][1]["re"][1][0].as_f64().unwrap(), 0.0);
    assert!(report["basis_ref"].as_str().unwrap().len() == 16);

    let x = f.pauli_x();
    let (code, out) = run_cli(&["dyads", "components", &x, "--dyads", &dyads]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert!(checks_all_pass(&report));
    assert_eq!(report["results"]["re"][0][1].as_f64().unwrap(), 1.0);
    assert_eq!(report["results"]["re"][1][0].as_f64().unwrap(), 1.0);
    assert_eq!(report["results"]["re"][0][0].as_f64().unwrap(), 0.0);
}

#[test]
fn change_basis_swap_and_phase() {
    let f = Fixtures::new();
    let dyads = build_dyads(&f);

    // Dyad basis over the X eigenprojectors.
    let xp = f.add(
        "xbasis.json",
        r#"{"dim": 2, "elements": [
            {"dim": 2, "re": [[0.5, -0.5], [-0.5, 0.5]]},
            {"dim": 2, "re": [[0.5, 0.5], [0.5, 0.5]]}
        ]}"#,
    );
    let (code, out) = run_cli(&["dyads", "build", &xp]);
    assert_eq!(code, 0);
    let xdyads = f.add(
        "xdyads.json",
        &serde_json::to_string(&parse(&out)["results"]).unwrap(),
    );

    let (code, out) = run_cli(&["change-basis", &dyads, &xdyads]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert!(checks_all_pass(&report));
    assert_eq!(
        report["results"]["from_ref"].as_str().unwrap().len(),
        16
    );

    let (code, out) = run_cli(&["swap", &dyads, "0", "1"]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert!(checks_all_pass(&report));
    // S = Γ₀₁ + Γ₁₀ here, i.e. the X matrix.
    assert_eq!(report["results"]["unitary"]["re"][0][1].as_f64().unwrap(), 1.0);

    let (code, out) = run_cli(&["swap", &dyads, "1", "1"]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "IndexError");

    let (code, out) = run_cli(&["phase", &dyads, "--phases", "0,1.5707963267948966"]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert!(checks_all_pass(&report));

    let (code, out) = run_cli(&["phase", &dyads, "--phases", "0"]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "LengthMismatch");
}

#[test]
fn corrupted_dyads_fail_the_fixed_bound_checks() {
    let f = Fixtures::new();
    let dyads = build_dyads(&f);
    let mut basis: Value = serde_json::from_str(&fs::read_to_string(&dyads).unwrap()).unwrap();
    basis["dyads"][0][1]["re"] = serde_json::json!([[0.0, 1.001], [0.0, 0.0]]);
    basis["dyads"][1][0]["re"] = serde_json::json!([[0.0, 0.0], [1.001, 0.0]]);
    let corrupted = f.add("corrupted.json", &serde_json::to_string(&basis).unwrap());

    // Strict tolerances reject the file outright.
    let (code, out) = run_cli(&["change-basis", &corrupted, &dyads]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "InvalidMatrix");

    // Loosened tolerances let it parse; the pinned action bound then
    // reports the corruption as a failed check.
    let (code, out) = run_cli(&[
        "--tol-zero",
        "1e-1",
        "--tol-unitary",
        "1e-1",
        "--tol-idempotent",
        "1e-1",
        "change-basis",
        &corrupted,
        &dyads,
    ]);
    assert_eq!(code, 1);
    let report = parse(&out);
    assert!(!checks_all_pass(&report));
}

#[test]
fn simulate_is_reproducible_and_summarized() {
    let f = Fixtures::new();
    let model = f.add(
        "model.json",
        r#"{"basis": {"dim": 2, "elements": [
            {"dim": 2, "re": [[1.0, 0.0], [0.0, 0.0]]},
            {"dim": 2, "re": [[0.0, 0.0], [0.0, 1.0]]}
        ]}, "weights": [0.5, 0.5]}"#,
    );
    let diag = f.add(
        "diag12.json",
        r#"{"dim": 2, "label": "D", "re": [[1.0, 0.0], [0.0, 2.0]]}"#,
    );
    let diag2 = f.add(
        "diag34.json",
        r#"{"dim": 2, "label": "E", "re": [[3.0, 0.0], [0.0, 4.0]]}"#,
    );

    let args = [
        "simulate", model.as_str(), diag.as_str(), diag2.as_str(),
        "-n", "2000", "--seed", "9",
    ];
    let (code, out) = run_cli(&args);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert_eq!(report["results"]["algorithm"], "chacha12");
    assert_eq!(report["results"]["seed"], 9);
    assert!(checks_all_pass(&report));
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.starts_with("pointwise-add")));
    assert!(names.iter().any(|n| n.starts_with("pointwise-mul")));

    // Identical invocations, identical bytes; a different seed moves draws.
    let (_, out2) = run_cli(&args);
    assert_eq!(out, out2);

    let (code, csv) = run_cli(&[
        "--output", "csv", "simulate", model.as_str(), diag.as_str(),
        "-n", "8", "--seed", "9",
    ]);
    assert_eq!(code, 0);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "D");
    assert_eq!(lines.count(), 8);

    let (code, csv_pair) = run_cli(&[
        "--output", "csv", "simulate", model.as_str(), diag.as_str(), diag2.as_str(),
        "-n", "4", "--seed", "9",
    ]);
    assert_eq!(code, 0);
    assert_eq!(csv_pair.lines().next().unwrap(), "D,E");

    let (_, csv_other) = run_cli(&[
        "--output", "csv", "simulate", model.as_str(), diag.as_str(),
        "-n", "8", "--seed", "10",
    ]);
    assert_ne!(csv, csv_other);

    // The sampler refuses incompatible observables.
    let x = f.pauli_x();
    let (code, out) = run_cli(&["simulate", &model, &x, "-n", "10"]);
    assert_eq!(code, 2);
    assert_eq!(parse(&out)["kind"], "IncompatibleObservables");
}

#[test]
fn verify_reports_pair_compatibility() {
    let f = Fixtures::new();
    let x = f.pauli_x();
    let z = f.pauli_z();
    let one = f.identity2();
    let (code, out) = run_cli(&["verify", &x, &z, &one]);
    assert_eq!(code, 0);
    let report = parse(&out);
    assert!(checks_all_pass(&report));
    let pairs = report["results"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 3);
    // X and Z are incompatible, each is compatible with the identity.
    assert_eq!(pairs[0]["compatible"], false);
    assert_eq!(pairs[1]["compatible"], true);
    assert_eq!(pairs[2]["compatible"], true);
}
