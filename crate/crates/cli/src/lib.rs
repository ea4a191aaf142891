//! Command dispatch for the `poa` binary.
//!
//! Every run writes one JSON (or CSV) report to standard output. Exit
//! codes: 0 success, 1 at least one invariant check failed, 2 input or
//! usage error. Errors are JSON payloads with a machine-readable `kind`.

mod args;
mod emit;

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use poa::random::MatrixSampler;
use poa::{io as sio, AlgebraError, Observable, PseudoObservable, ToleranceConfig};

pub use args::{Cli, Command, DyadsCommand, OutputFormat};
pub use emit::{canonical_json, format_float};

type Po = PseudoObservable<f64>;
type Tol = ToleranceConfig<f64>;

pub struct CliError {
    kind: String,
    message: String,
}

impl CliError {
    fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.into(),
            message: message.into(),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError {
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

struct Check {
    name: String,
    pass: bool,
    residual: f64,
}

impl Check {
    fn bounded(name: impl Into<String>, residual: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            pass: residual <= bound,
            residual,
        }
    }

    fn flag(name: impl Into<String>, pass: bool, residual: f64) -> Self {
        Check {
            name: name.into(),
            pass,
            residual,
        }
    }
}

struct Report {
    command: String,
    inputs: Vec<String>,
    results: Value,
    checks: Vec<Check>,
    /// CSV payload replacing the default checks table, where a command has
    /// a natural tabular output.
    csv: Option<String>,
}

/// Runs one invocation, writing the full report to `out`.
pub fn run<W: Write>(argv: &[String], out: &mut W) -> i32 {
    use clap::error::ErrorKind;
    use clap::Parser;

    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let payload = error_value("Usage", &e.to_string());
            let _ = writeln!(out, "{}", canonical_json(&payload));
            return 2;
        }
    };

    let defaults = Tol::default();
    let tol = match ToleranceConfig::new(
        cli.tol_hermitian.unwrap_or(defaults.hermitian),
        cli.tol_cluster.unwrap_or(defaults.cluster),
        cli.tol_idempotent.unwrap_or(defaults.idempotent),
        cli.tol_unitary.unwrap_or(defaults.unitary),
        cli.tol_zero.unwrap_or(defaults.zero),
    ) {
        Ok(t) => t,
        Err(e) => {
            let payload = error_value(e.kind(), &e.to_string());
            let _ = writeln!(out, "{}", canonical_json(&payload));
            return 2;
        }
    };

    match execute(&cli, &tol) {
        Ok(report) => {
            let failed = report.checks.iter().any(|c| !c.pass);
            match cli.output {
                OutputFormat::Json => {
                    let _ = writeln!(out, "{}", canonical_json(&report_value(&report, &tol)));
                }
                OutputFormat::Csv => {
                    let _ = write!(out, "{}", report_csv(&report));
                }
            }
            if failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let payload = error_value(&e.kind, &e.message);
            let _ = writeln!(out, "{}", canonical_json(&payload));
            2
        }
    }
}

fn error_value(kind: &str, message: &str) -> Value {
    json!({
        "schema": 1,
        "kind": kind,
        "message": message,
    })
}

fn report_value(report: &Report, tol: &Tol) -> Value {
    let tolerances = json!({
        "hermitian": tol.hermitian,
        "cluster": tol.cluster,
        "idempotent": tol.idempotent,
        "unitary": tol.unitary,
        "zero": tol.zero,
    });
    json!({
        "schema": 1,
        "command": report.command,
        "inputs": report.inputs,
        "results": report.results,
        "checks": report
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "residual": c.residual}))
            .collect::<Vec<Value>>(),
        "tolerances": tolerances,
    })
}

fn report_csv(report: &Report) -> String {
    if let Some(csv) = &report.csv {
        return csv.clone();
    }
    let mut out = String::from("name,pass,residual\n");
    for c in &report.checks {
        let _ = writeln!(out, "{},{},{}", c.name, c.pass, format_float(c.residual));
    }
    out
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn load_matrix(path: &Path, max_dim: usize) -> Result<Po, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new("Io", format!("{}: {e}", path.display())))?;
    let mut matrix = sio::matrix_from_json::<f64>(&text)
        .map_err(|e| CliError::new(e.kind(), format!("{}: {e}", path.display())))?;
    if matrix.dim() > max_dim {
        return Err(CliError::new(
            "DimensionLimit",
            format!(
                "{}: dimension {} exceeds --max-dim {max_dim}",
                path.display(),
                matrix.dim()
            ),
        ));
    }
    if matrix.label().is_none() {
        matrix.set_label(Some(path_str(path)));
    }
    Ok(matrix)
}

fn load_observable(path: &Path, max_dim: usize, tol: &Tol) -> Result<Observable<f64>, CliError> {
    let matrix = load_matrix(path, max_dim)?;
    Observable::new(matrix, tol)
        .map_err(|e| CliError::new(e.kind(), format!("{}: {e}", path.display())))
}

fn load_dyad_basis(path: &Path, max_dim: usize, tol: &Tol) -> Result<poa::DyadBasis<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new("Io", format!("{}: {e}", path.display())))?;
    let db = sio::dyad_basis_from_json::<f64>(&text, tol)
        .map_err(|e| CliError::new(e.kind(), format!("{}: {e}", path.display())))?;
    if db.dim() > max_dim {
        return Err(CliError::new(
            "DimensionLimit",
            format!("{}: dimension {} exceeds --max-dim {max_dim}", path.display(), db.dim()),
        ));
    }
    Ok(db)
}

fn named_function(name: &str, tol: &Tol) -> Result<Box<dyn Fn(f64) -> f64>, CliError> {
    match name {
        "identity" => Ok(Box::new(|x| x)),
        "square" => Ok(Box::new(|x| x * x)),
        "sqrt" => Ok(Box::new(f64::sqrt)),
        "abs" => Ok(Box::new(f64::abs)),
        _ => {
            if let Some(value) = name.strip_prefix("indicator:") {
                let target: f64 = value.parse().map_err(|_| {
                    CliError::new("Usage", format!("indicator target '{value}' is not a number"))
                })?;
                let gap = tol.cluster * (1.0 + target.abs());
                Ok(Box::new(move |x| if (x - target).abs() <= gap { 1.0 } else { 0.0 }))
            } else {
                Err(CliError::new(
                    "Usage",
                    format!("unknown function '{name}' (expected identity, square, sqrt, abs, indicator:V)"),
                ))
            }
        }
    }
}

fn execute(cli: &Cli, tol: &Tol) -> Result<Report, CliError> {
    match &cli.command {
        Command::Decompose { file, apply } => decompose_cmd(file, apply.as_deref(), cli, tol),
        Command::Commutator { a, b } => commutator_cmd(a, b, cli, tol),
        Command::Compat { a, b } => compat_cmd(a, b, cli, tol),
        Command::Refine { files } => refine_cmd(files, cli, tol),
        Command::CompleteSet { files } => complete_set_cmd(files, cli, tol),
        Command::Express { a, set } => express_cmd(a, set, cli, tol),
        Command::Dyads { command } => match command {
            DyadsCommand::Build { basis, cores } => dyads_build_cmd(basis, cores, cli, tol),
            DyadsCommand::Components { matrix, dyads } => {
                dyads_components_cmd(matrix, dyads, cli, tol)
            }
        },
        Command::ChangeBasis { from, to } => change_basis_cmd(from, to, cli, tol),
        Command::Swap { dyads, j0, j1 } => swap_cmd(dyads, *j0, *j1, cli, tol),
        Command::Phase { dyads, phases } => phase_cmd(dyads, phases, cli, tol),
        Command::Simulate {
            model,
            files,
            draws,
            seed,
        } => simulate_cmd(model, files, *draws, *seed, cli, tol),
        Command::Verify { files, seed } => verify_cmd(files, *seed, cli, tol),
    }
}

fn basis_checks(prefix: &str, basis: &poa::ProjectorBasis<f64>, tol: &Tol) -> Vec<Check> {
    vec![
        Check::bounded(
            format!("{prefix}exclusivity"),
            basis.exclusivity_residual().unwrap_or(f64::INFINITY),
            tol.zero,
        ),
        Check::bounded(
            format!("{prefix}closure"),
            basis.closure_residual().unwrap_or(f64::INFINITY),
            tol.idempotent,
        ),
    ]
}

fn decompose_cmd(
    file: &Path,
    apply: Option<&str>,
    cli: &Cli,
    tol: &Tol,
) -> Result<Report, CliError> {
    let o = load_observable(file, cli.max_dim, tol)?;
    let sd = poa::decompose(&o, tol)?;
    let scale = 1.0 + o.max_norm();

    let mut checks = vec![
        Check::bounded(
            "reconstruction",
            sd.reconstruction_residual()? / scale,
            1e-9,
        ),
        Check::bounded("eigen-relation", sd.eigen_relation_residual()? / scale, 1e-9),
    ];
    checks.extend(basis_checks("basis-", sd.basis(), tol));

    let mut results = match sio::spectral_to_value(&sd) {
        Value::Object(map) => map,
        _ => unreachable!("spectral report is an object"),
    };
    if let Some(name) = apply {
        let f = named_function(name, tol)?;
        let image = poa::apply_function(&o, f.as_ref(), tol)?;
        let image_sd = poa::decompose(&image, tol)?;
        results.insert(
            "applied".into(),
            json!({
                "function": name,
                "result": sio::matrix_to_value(image.as_po()),
                "coefficients": image_sd
                    .coefficients()
                    .iter()
                    .map(|c| Value::from(*c))
                    .collect::<Vec<Value>>(),
            }),
        );
        checks.push(Check::bounded(
            "applied-commutes-with-source",
            poa::commutator(o.as_po(), image.as_po())?.max_norm(),
            tol.zero * scale * (1.0 + image.max_norm()),
        ));
    }

    Ok(Report {
        command: "decompose".into(),
        inputs: vec![path_str(file)],
        results: Value::Object(results),
        checks,
        csv: None,
    })
}

fn commutator_cmd(a: &Path, b: &Path, cli: &Cli, tol: &Tol) -> Result<Report, CliError> {
    let pa = load_matrix(a, cli.max_dim)?;
    let pb = load_matrix(b, cli.max_dim)?;
    let comm = poa::commutator(&pa, &pb)?;
    let anti = poa::commutator(&pb, &pa)?.add(&comm)?.max_norm();
    Ok(Report {
        command: "commutator".into(),
        inputs: vec![path_str(a), path_str(b)],
        results: json!({
            "commutator": sio::matrix_to_value(&comm),
            "norm": comm.max_norm(),
        }),
        checks: vec![Check::bounded("antisymmetry", anti, tol.zero)],
        csv: None,
    })
}

fn compat_cmd(a: &Path, b: &Path, cli: &Cli, tol: &Tol) -> Result<Report, CliError> {
    let oa = load_observable(a, cli.max_dim, tol)?;
    let ob = load_observable(b, cli.max_dim, tol)?;
    let compatible = poa::are_compatible(&oa, &ob, tol)?;
    let comm_norm = poa::commutator(oa.as_po(), ob.as_po())?.max_norm();
    let measure = poa::incompatibility_measure(&oa, &ob)?;
    let checks = vec![Check::bounded(
        "measure-hermitian",
        measure.measure.hermiticity_residual(),
        tol.hermitian,
    )];
    Ok(Report {
        command: "compat".into(),
        inputs: vec![path_str(a), path_str(b)],
        results: json!({
            "compatible": compatible,
            "commutator_norm": comm_norm,
            "incompatibility_measure": sio::matrix_to_value(measure.measure.as_po()),
            "commutator_over_i": sio::matrix_to_value(measure.commutator_over_i.as_po()),
        }),
        checks,
        csv: None,
    })
}

fn load_observables(
    files: &[std::path::PathBuf],
    cli: &Cli,
    tol: &Tol,
) -> Result<Vec<Observable<f64>>, CliError> {
    files
        .iter()
        .map(|f| load_observable(f, cli.max_dim, tol))
        .collect()
}

fn reconstruction_checks(
    os: &[Observable<f64>],
    basis: &poa::ProjectorBasis<f64>,
) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for (r, o) in os.iter().enumerate() {
        let mut sum = Po::zeros(o.dim())?;
        for p in basis.elements() {
            let v = o.mul(p.as_po())?.trace().re / p.trace().re;
            sum = sum.add(&p.scale(poa::Scalar::new(v, 0.0)))?;
        }
        let residual = sum.distance(o.as_po())? / (1.0 + o.max_norm());
        checks.push(Check::bounded(format!("reconstruction[{r}]"), residual, 1e-9));
    }
    Ok(checks)
}

fn refine_cmd(files: &[std::path::PathBuf], cli: &Cli, tol: &Tol) -> Result<Report, CliError> {
    let os = load_observables(files, cli, tol)?;
    let basis = poa::joint_refine(&os, tol)?;
    let mut checks = basis_checks("", &basis, tol);
    checks.extend(reconstruction_checks(&os, &basis)?);
    Ok(Report {
        command: "refine".into(),
        inputs: files.iter().map(|f| path_str(f)).collect(),
        results: json!({"basis": sio::projector_basis_to_value(&basis)}),
        checks,
        csv: None,
    })
}

fn complete_set_cmd(
    files: &[std::path::PathBuf],
    cli: &Cli,
    tol: &Tol,
) -> Result<Report, CliError> {
    let os = load_observables(files, cli, tol)?;
    let outcome = poa::build_complete_set(&os, tol)?;
    let (results, mut checks) = match &outcome {
        poa::CompleteSetOutcome::Complete(cs) => {
            let checks = vec![Check::bounded(
                "set-reconstruction",
                cs.reconstruction_residual()?,
                1e-9 * (1.0 + os.iter().map(|o| o.max_norm()).fold(0.0, f64::max)),
            )];
            (
                json!({"complete": true, "set": sio::complete_set_to_value(cs)}),
                checks,
            )
        }
        poa::CompleteSetOutcome::Incomplete(report) => (
            json!({
                "complete": false,
                "basis": sio::projector_basis_to_value(&report.basis),
                "non_elementary": report
                    .non_elementary
                    .iter()
                    .map(|(index, trace)| json!({"index": index, "trace": trace}))
                    .collect::<Vec<Value>>(),
            }),
            Vec::new(),
        ),
    };
    let basis = match &outcome {
        poa::CompleteSetOutcome::Complete(cs) => cs.basis(),
        poa::CompleteSetOutcome::Incomplete(r) => &r.basis,
    };
    checks.extend(basis_checks("basis-", basis, tol));
    Ok(Report {
        command: "complete-set".into(),
        inputs: files.iter().map(|f| path_str(f)).collect(),
        results,
        checks,
        csv: None,
    })
}

fn express_cmd(
    a: &Path,
    set: &[std::path::PathBuf],
    cli: &Cli,
    tol: &Tol,
) -> Result<Report, CliError> {
    let target = load_observable(a, cli.max_dim, tol)?;
    let os = load_observables(set, cli, tol)?;
    let cs = match poa::build_complete_set(&os, tol)? {
        poa::CompleteSetOutcome::Complete(cs) => cs,
        poa::CompleteSetOutcome::Incomplete(report) => {
            let traces: Vec<String> = report
                .non_elementary
                .iter()
                .map(|(index, trace)| format!("projector {index} has trace {trace:.3}"))
                .collect();
            return Err(CliError::new(
                "NotElementaryBasis",
                format!("the given set is not complete: {}", traces.join(", ")),
            ));
        }
    };
    let table = poa::express_as_function(&target, &cs, tol)?;
    let checks = vec![Check::bounded(
        "table-reconstruction",
        table.residual / (1.0 + target.max_norm()),
        1e-9,
    )];
    Ok(Report {
        command: "express".into(),
        inputs: std::iter::once(path_str(a))
            .chain(set.iter().map(|f| path_str(f)))
            .collect(),
        results: json!({
            "table": sio::function_table_to_value(&table),
            "residual": table.residual,
        }),
        checks,
        csv: None,
    })
}

fn dyads_build_cmd(
    basis_file: &Path,
    core_files: &[std::path::PathBuf],
    cli: &Cli,
    tol: &Tol,
) -> Result<Report, CliError> {
    let text = fs::read_to_string(basis_file)
        .map_err(|e| CliError::new("Io", format!("{}: {e}", basis_file.display())))?;
    let basis = sio::projector_basis_from_json::<f64>(&text, tol)
        .map_err(|e| CliError::new(e.kind(), format!("{}: {e}", basis_file.display())))?;
    if basis.dim() > cli.max_dim {
        return Err(CliError::new(
            "DimensionLimit",
            format!("dimension {} exceeds --max-dim {}", basis.dim(), cli.max_dim),
        ));
    }
    let cores = core_files
        .iter()
        .map(|f| load_matrix(f, cli.max_dim))
        .collect::<Result<Vec<Po>, CliError>>()?;
    let db = poa::build_dyad_basis(&basis, if cores.is_empty() { None } else { Some(&cores) }, tol)?;

    let bound = tol.zero * 1e2;
    let mut checks = vec![
        Check::bounded("condition-1", db.condition1_residual()?, bound),
        Check::bounded("condition-2", db.condition2_residual()?, bound),
    ];
    // The full product law scan is quartic in the dimension; run it at desk
    // scale, where it is instant.
    if db.dim() <= 12 {
        checks.push(Check::bounded("condition-3", db.condition3_residual()?, bound));
    }
    Ok(Report {
        command: "dyads build".into(),
        inputs: std::iter::once(path_str(basis_file))
            .chain(core_files.iter().map(|f| path_str(f)))
            .collect(),
        results: sio::dyad_basis_to_value(&db),
        checks,
        csv: None,
    })
}

fn dyads_components_cmd(
    matrix_file: &Path,
    dyads_file: &Path,
    cli: &Cli,
    tol: &Tol,
) -> Result<Report, CliError> {
    let p = load_matrix(matrix_file, cli.max_dim)?;
    let db = load_dyad_basis(dyads_file, cli.max_dim, tol)?;
    let components = poa::decompose_po(&p, &db)?;
    let rebuilt = components.reconstruct(&db)?;
    let checks = vec![
        Check::bounded(
            "reconstruction",
            rebuilt.distance(&p)? / (1.0 + p.max_norm()),
            1e-9,
        ),
        Check::flag(
            "hermiticity-correspondence",
            p.is_observable(tol) == components.is_hermitian_pattern(tol),
            components.hermitian_pattern_residual(),
        ),
    ];
    Ok(Report {
        command: "dyads components".into(),
        inputs: vec![path_str(matrix_file), path_str(dyads_file)],
        results: sio::component_matrix_to_value(&components),
        checks,
        csv: None,
    })
}

fn change_basis_cmd(from: &Path, to: &Path, cli: &Cli, tol: &Tol) -> Result<Report, CliError> {
    let from_db = load_dyad_basis(from, cli.max_dim, tol)?;
    let to_db = load_dyad_basis(to, cli.max_dim, tol)?;
    let cb = poa::change_of_basis(&from_db, &to_db, tol)?;
    let checks = vec![
        Check::bounded("unitarity", cb.unitarity_residual(), tol.unitary),
        Check::bounded("component-unitarity", cb.component_unitarity_residual(), tol.unitary),
        Check::bounded("action", cb.action_residual(), 1e-9),
    ];
    Ok(Report {
        command: "change-basis".into(),
        inputs: vec![path_str(from), path_str(to)],
        results: sio::change_of_basis_to_value(&cb),
        checks,
        csv: None,
    })
}

fn swap_cmd(dyads: &Path, j0: usize, j1: usize, cli: &Cli, tol: &Tol) -> Result<Report, CliError> {
    let db = load_dyad_basis(dyads, cli.max_dim, tol)?;
    let (cb, target) = poa::swap_change_of_basis(&db, j0, j1, tol)?;
    let s = cb.omega();
    let one = Po::identity(db.dim())?;
    let mut exchange = 0.0f64;
    for j in 0..db.dim() {
        let moved = s.mul(db.basis().element(j)?.as_po())?.mul(&s.adjoint())?;
        let expected = if j == j0 {
            db.basis().element(j1)?
        } else if j == j1 {
            db.basis().element(j0)?
        } else {
            db.basis().element(j)?
        };
        exchange = exchange.max(moved.distance(expected.as_po())?);
    }
    let checks = vec![
        Check::bounded("hermitian", s.hermiticity_residual(), tol.hermitian),
        Check::bounded(
            "unitarity",
            s.mul(&s.adjoint())?.distance(&one)?,
            tol.unitary,
        ),
        Check::bounded("involution", s.mul(s)?.distance(&one)?, tol.unitary),
        Check::bounded("exchange", exchange, 1e-9),
    ];
    Ok(Report {
        command: "swap".into(),
        inputs: vec![path_str(dyads)],
        results: json!({
            "unitary": sio::matrix_to_value(s),
            "change": sio::change_of_basis_to_value(&cb),
            "target": sio::dyad_basis_to_value(&target),
        }),
        checks,
        csv: None,
    })
}

fn phase_cmd(dyads: &Path, phases: &[f64], cli: &Cli, tol: &Tol) -> Result<Report, CliError> {
    let db = load_dyad_basis(dyads, cli.max_dim, tol)?;
    let (cb, target) = poa::phase_change_of_basis(&db, phases, tol)?;
    let omega = cb.omega();
    let one = Po::identity(db.dim())?;
    let checks = vec![
        Check::bounded(
            "unitarity",
            omega.mul(&omega.adjoint())?.distance(&one)?,
            tol.unitary,
        ),
        Check::bounded("action", cb.action_residual(), 1e-9),
    ];
    Ok(Report {
        command: "phase".into(),
        inputs: vec![path_str(dyads)],
        results: json!({
            "unitary": sio::matrix_to_value(omega),
            "change": sio::change_of_basis_to_value(&cb),
            "target": sio::dyad_basis_to_value(&target),
        }),
        checks,
        csv: None,
    })
}

fn simulate_cmd(
    model_file: &Path,
    files: &[std::path::PathBuf],
    draws: usize,
    seed: Option<u64>,
    cli: &Cli,
    tol: &Tol,
) -> Result<Report, CliError> {
    let text = fs::read_to_string(model_file)
        .map_err(|e| CliError::new("Io", format!("{}: {e}", model_file.display())))?;
    let model = sio::ensemble_model_from_json::<f64>(&text, seed, tol)
        .map_err(|e| CliError::new(e.kind(), format!("{}: {e}", model_file.display())))?;
    if model.basis().dim() > cli.max_dim {
        return Err(CliError::new(
            "DimensionLimit",
            format!(
                "dimension {} exceeds --max-dim {}",
                model.basis().dim(),
                cli.max_dim
            ),
        ));
    }
    let os = load_observables(files, cli, tol)?;
    let table = poa::sample(&model, &os, draws, tol)?;

    let mut counts = vec![0usize; model.basis().len()];
    for &event in &table.events {
        counts[event] += 1;
    }
    let empirical = table.empirical_means();
    let mut expected = Vec::with_capacity(os.len());
    let mut sigmas = Vec::with_capacity(os.len());
    let mut checks = Vec::new();
    for (o, mean) in os.iter().zip(&empirical) {
        let mu = model.mean_of(o, tol)?;
        let sigma = (model.variance_of(o, tol)? / draws.max(1) as f64).sqrt();
        expected.push(mu);
        sigmas.push(sigma);
        checks.push(Check::bounded(
            format!("mean-within-3sigma:{}", o.display_label("O")),
            (mean - mu).abs(),
            3.0 * sigma + 1e-12,
        ));
    }
    for window in os.windows(2) {
        let report = poa::verify_pointwise_algebra(&model, &window[0], &window[1], draws, tol)?;
        let pair = format!(
            "{}×{}",
            window[0].display_label("left"),
            window[1].display_label("right")
        );
        checks.push(Check::flag(
            format!("pointwise-add:{pair}"),
            report.add_violations == 0,
            report.max_add_residual,
        ));
        checks.push(Check::flag(
            format!("pointwise-mul:{pair}"),
            report.mul_violations == 0,
            report.max_mul_residual,
        ));
    }

    let mut csv = String::new();
    let _ = writeln!(csv, "{}", table.labels.join(","));
    for row in &table.values {
        let cells: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
        let _ = writeln!(csv, "{}", cells.join(","));
    }

    Ok(Report {
        command: "simulate".into(),
        inputs: std::iter::once(path_str(model_file))
            .chain(files.iter().map(|f| path_str(f)))
            .collect(),
        results: json!({
            "algorithm": table.algorithm,
            "seed": table.seed,
            "draws": draws,
            "labels": table.labels,
            "counts": counts,
            "empirical_means": empirical,
            "expected_means": expected,
            "expected_sigmas": sigmas,
        }),
        checks,
        csv: Some(csv),
    })
}

fn verify_cmd(
    files: &[std::path::PathBuf],
    seed: u64,
    cli: &Cli,
    tol: &Tol,
) -> Result<Report, CliError> {
    let mut sampler = MatrixSampler::<f64>::new(seed);
    let mut checks = Vec::new();
    let mut file_reports = Vec::new();
    let mut matrices = Vec::new();

    for file in files {
        let name = path_str(file);
        let p = load_matrix(file, cli.max_dim)?;
        let scale = 1.0 + p.max_norm();
        let partner = sampler.pseudo(p.dim());

        let axioms = p.check_transposition_axioms(&partner, tol)?;
        for (axiom, outcome) in [
            ("involution", &axioms.involution),
            ("observable-iff-fixed", &axioms.observable_iff_fixed),
            ("additivity", &axioms.additivity),
            ("antimultiplicativity", &axioms.antimultiplicativity),
            ("positivity", &axioms.positivity),
            ("definiteness", &axioms.definiteness),
        ] {
            checks.push(Check::flag(
                format!("{name}:{axiom}"),
                outcome.pass,
                outcome.residual,
            ));
        }

        let re = p.real_part();
        let im = p.imag_part();
        let rebuilt = re
            .as_po()
            .add(&im.scale(poa::Scalar::new(0.0, 1.0)))?;
        checks.push(Check::bounded(
            format!("{name}:complex-reconstruction"),
            rebuilt.distance(&p)?,
            1e-13 * scale,
        ));
        checks.push(Check::bounded(
            format!("{name}:parts-hermitian"),
            re.hermiticity_residual().max(im.hermiticity_residual()),
            tol.hermitian,
        ));

        let g1 = poa::Scalar::new(sampler.real_in(-1.0, 1.0), sampler.real_in(-1.0, 1.0));
        let g2 = poa::Scalar::new(sampler.real_in(-1.0, 1.0), sampler.real_in(-1.0, 1.0));
        let lhs = p.scale(g1).add(&partner.scale(g2))?.adjoint();
        let rhs = p
            .adjoint()
            .scale(g1.conj())
            .add(&partner.adjoint().scale(g2.conj()))?;
        checks.push(Check::bounded(
            format!("{name}:antilinearity"),
            lhs.distance(&rhs)?,
            1e-12 * scale,
        ));

        let observable = p.is_observable(tol);
        let projector = poa::is_projector(&p, tol);
        if observable {
            let o = Observable::new(p.clone(), tol)
                .map_err(|e| CliError::new(e.kind(), e.to_string()))?;
            let sd = poa::decompose(&o, tol)?;
            checks.push(Check::bounded(
                format!("{name}:spectral-reconstruction"),
                sd.reconstruction_residual()? / scale,
                1e-9,
            ));
            checks.push(Check::bounded(
                format!("{name}:eigen-relation"),
                sd.eigen_relation_residual()? / scale,
                1e-9,
            ));
            checks.push(Check::bounded(
                format!("{name}:basis-exclusivity"),
                sd.basis().exclusivity_residual()?,
                tol.zero,
            ));
            checks.push(Check::bounded(
                format!("{name}:basis-closure"),
                sd.basis().closure_residual()?,
                tol.idempotent,
            ));
            let identity_image = poa::apply_function(&o, |x| x, tol)?;
            checks.push(Check::bounded(
                format!("{name}:functional-identity"),
                identity_image.distance(o.as_po())? / scale,
                1e-9,
            ));
            if projector {
                let proj = poa::Projector::new(p.clone(), tol)
                    .map_err(|e| CliError::new(e.kind(), e.to_string()))?;
                let complement = proj.complement(tol)?;
                checks.push(Check::bounded(
                    format!("{name}:complement-exclusive"),
                    proj.mul(complement.as_po())?.max_norm(),
                    tol.zero,
                ));
                let off01 = sd
                    .coefficients()
                    .iter()
                    .map(|c| c.abs().min((c - 1.0).abs()))
                    .fold(0.0, f64::max);
                checks.push(Check::bounded(
                    format!("{name}:projector-spectrum"),
                    off01,
                    tol.cluster,
                ));
            }
        }

        file_reports.push(json!({
            "path": name,
            "dim": p.dim(),
            "observable": observable,
            "projector": projector,
        }));
        matrices.push(p);
    }

    let mut pair_reports = Vec::new();
    for i in 0..matrices.len() {
        for j in (i + 1)..matrices.len() {
            let (a, b) = (&matrices[i], &matrices[j]);
            if a.dim() != b.dim() {
                continue;
            }
            let name_a = path_str(&files[i]);
            let name_b = path_str(&files[j]);
            let pair = format!("{name_a}×{name_b}");
            if !(a.is_observable(tol) && b.is_observable(tol)) {
                continue;
            }
            let oa = Observable::new(a.clone(), tol)
                .map_err(|e| CliError::new(e.kind(), e.to_string()))?;
            let ob = Observable::new(b.clone(), tol)
                .map_err(|e| CliError::new(e.kind(), e.to_string()))?;
            let compatible = poa::are_compatible(&oa, &ob, tol)?;
            let measure = poa::incompatibility_measure(&oa, &ob)?;
            checks.push(Check::bounded(
                format!("{pair}:measure-hermitian"),
                measure.measure.hermiticity_residual(),
                tol.hermitian,
            ));
            if compatible {
                let basis = poa::joint_refine(&[oa.clone(), ob.clone()], tol)?;
                checks.push(Check::bounded(
                    format!("{pair}:joint-closure"),
                    basis.closure_residual()?,
                    tol.idempotent,
                ));
                checks.extend(
                    reconstruction_checks(&[oa, ob], &basis)?
                        .into_iter()
                        .map(|c| Check::flag(format!("{pair}:{}", c.name), c.pass, c.residual)),
                );
            }
            pair_reports.push(json!({
                "left": name_a,
                "right": name_b,
                "compatible": compatible,
            }));
        }
    }

    Ok(Report {
        command: "verify".into(),
        inputs: files.iter().map(|f| path_str(f)).collect(),
        results: json!({
            "seed": seed,
            "files": file_reports,
            "pairs": pair_reports,
        }),
        checks,
        csv: None,
    })
}
