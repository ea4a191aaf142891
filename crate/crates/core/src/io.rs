//! JSON interchange formats.
//!
//! The matrix format is a UTF-8 object
//! `{"dim": d, "label": "X", "re": [[…]], "im": [[…]]}` with row-major
//! entries; `im` defaults to zeros, `label` is optional, and non-square or
//! jagged arrays are rejected. Bases, models and derived results build on
//! this one format.

use num_complex::Complex;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::basis_change::ChangeOfBasis;
use crate::compat::{CompleteSet, FunctionTable};
use crate::dyads::{ComponentMatrix, DyadBasis};
use crate::ensemble::EnsembleModel;
use crate::error::{AlgebraError, Result};
use crate::projector::{Projector, ProjectorBasis};
use crate::pseudo::PseudoObservable;
use crate::scalar::{as_f64, RealScalar};
use crate::spectral::SpectralDecomposition;
use crate::tolerance::ToleranceConfig;

fn parse_error(reason: impl std::fmt::Display) -> AlgebraError {
    AlgebraError::InvalidMatrix {
        reason: reason.to_string(),
    }
}

#[derive(Deserialize)]
struct MatrixFile {
    dim: usize,
    #[serde(default)]
    label: Option<String>,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

fn grid_to_rows(dim: usize, name: &str, grid: &[Vec<f64>]) -> Result<()> {
    if grid.len() != dim {
        return Err(parse_error(format!(
            "'{name}' has {} rows, expected {dim}",
            grid.len()
        )));
    }
    for (r, row) in grid.iter().enumerate() {
        if row.len() != dim {
            return Err(parse_error(format!(
                "'{name}' row {r} has {} columns, expected {dim}",
                row.len()
            )));
        }
    }
    Ok(())
}

pub fn matrix_from_value<T: RealScalar>(value: &Value) -> Result<PseudoObservable<T>> {
    let file: MatrixFile =
        serde_json::from_value(value.clone()).map_err(|e| parse_error(format!("matrix: {e}")))?;
    if file.dim == 0 {
        return Err(parse_error("dimension must be at least 1"));
    }
    grid_to_rows(file.dim, "re", &file.re)?;
    if let Some(im) = &file.im {
        grid_to_rows(file.dim, "im", im)?;
    }
    let mut entries = Vec::with_capacity(file.dim * file.dim);
    for r in 0..file.dim {
        for c in 0..file.dim {
            let re = file.re[r][c];
            let im = file.im.as_ref().map(|g| g[r][c]).unwrap_or(0.0);
            let re_t = T::from_f64(re).ok_or_else(|| parse_error("unrepresentable entry"))?;
            let im_t = T::from_f64(im).ok_or_else(|| parse_error("unrepresentable entry"))?;
            entries.push(Complex::new(re_t, im_t));
        }
    }
    let mut m = PseudoObservable::from_entries(file.dim, entries)?;
    m.set_label(file.label);
    Ok(m)
}

pub fn matrix_from_json<T: RealScalar>(text: &str) -> Result<PseudoObservable<T>> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(format!("json: {e}")))?;
    matrix_from_value(&value)
}

pub fn matrix_to_value<T: RealScalar>(m: &PseudoObservable<T>) -> Value {
    let d = m.dim();
    let grid = |pick: fn(&Complex<T>) -> T| -> Value {
        let rows: Vec<Value> = (0..d)
            .map(|r| {
                let cols: Vec<Value> = (0..d)
                    .map(|c| {
                        let e = m.at(r, c);
                        Value::from(as_f64(pick(&e)))
                    })
                    .collect();
                Value::from(cols)
            })
            .collect();
        Value::from(rows)
    };
    let mut object = serde_json::Map::new();
    object.insert("dim".into(), Value::from(d));
    if let Some(label) = m.label() {
        object.insert("label".into(), Value::from(label));
    }
    object.insert("re".into(), grid(|e| e.re));
    object.insert("im".into(), grid(|e| e.im));
    Value::Object(object)
}

#[derive(Deserialize)]
struct ProjectorBasisFile {
    dim: usize,
    elements: Vec<Value>,
}

pub fn projector_basis_from_value<T: RealScalar>(
    value: &Value,
    tol: &ToleranceConfig<T>,
) -> Result<ProjectorBasis<T>> {
    let file: ProjectorBasisFile = serde_json::from_value(value.clone())
        .map_err(|e| parse_error(format!("projector basis: {e}")))?;
    let mut elements = Vec::with_capacity(file.elements.len());
    for v in &file.elements {
        let m = matrix_from_value::<T>(v)?;
        if m.dim() != file.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: file.dim,
                right: m.dim(),
            });
        }
        elements.push(Projector::new(m, tol)?);
    }
    ProjectorBasis::new(elements, tol)
}

pub fn projector_basis_from_json<T: RealScalar>(
    text: &str,
    tol: &ToleranceConfig<T>,
) -> Result<ProjectorBasis<T>> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(format!("json: {e}")))?;
    projector_basis_from_value(&value, tol)
}

pub fn projector_basis_to_value<T: RealScalar>(basis: &ProjectorBasis<T>) -> Value {
    json!({
        "dim": basis.dim(),
        "elements": basis
            .elements()
            .iter()
            .map(|p| matrix_to_value(p.as_po()))
            .collect::<Vec<Value>>(),
    })
}

#[derive(Deserialize)]
struct DyadBasisFile {
    projectors: Vec<Value>,
    dyads: Vec<Vec<Value>>,
}

pub fn dyad_basis_from_value<T: RealScalar>(
    value: &Value,
    tol: &ToleranceConfig<T>,
) -> Result<DyadBasis<T>> {
    let file: DyadBasisFile = serde_json::from_value(value.clone())
        .map_err(|e| parse_error(format!("dyad basis: {e}")))?;
    let d = file.projectors.len();
    let mut projectors = Vec::with_capacity(d);
    for v in &file.projectors {
        projectors.push(Projector::new(matrix_from_value::<T>(v)?, tol)?);
    }
    let basis = ProjectorBasis::new(projectors, tol)?;
    if file.dyads.len() != d {
        return Err(AlgebraError::LengthMismatch {
            expected: d,
            got: file.dyads.len(),
        });
    }
    let mut dyads = Vec::with_capacity(d * d);
    for row in &file.dyads {
        if row.len() != d {
            return Err(AlgebraError::LengthMismatch {
                expected: d,
                got: row.len(),
            });
        }
        for v in row {
            dyads.push(matrix_from_value::<T>(v)?);
        }
    }
    DyadBasis::new(basis, dyads, tol)
}

pub fn dyad_basis_from_json<T: RealScalar>(
    text: &str,
    tol: &ToleranceConfig<T>,
) -> Result<DyadBasis<T>> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(format!("json: {e}")))?;
    dyad_basis_from_value(&value, tol)
}

pub fn dyad_basis_to_value<T: RealScalar>(db: &DyadBasis<T>) -> Value {
    let d = db.dim();
    let rows: Vec<Value> = (0..d)
        .map(|j| {
            let cols: Vec<Value> = (0..d)
                .map(|k| matrix_to_value(db.dyad(j, k).expect("in range")))
                .collect();
            Value::from(cols)
        })
        .collect();
    json!({
        "projectors": db
            .basis()
            .elements()
            .iter()
            .map(|p| matrix_to_value(p.as_po()))
            .collect::<Vec<Value>>(),
        "dyads": rows,
        "basis_ref": db.basis_ref(),
    })
}

#[derive(Deserialize)]
struct EnsembleModelFile {
    basis: Value,
    weights: Vec<f64>,
    #[serde(default)]
    seed: Option<u64>,
}

/// Parses an ensemble model file; `seed_override` (the CLI flag) wins over
/// the file's own seed, which defaults to 0.
pub fn ensemble_model_from_json<T: RealScalar>(
    text: &str,
    seed_override: Option<u64>,
    tol: &ToleranceConfig<T>,
) -> Result<EnsembleModel<T>> {
    let file: EnsembleModelFile = serde_json::from_str(text)
        .map_err(|e| parse_error(format!("ensemble model: {e}")))?;
    let basis = projector_basis_from_value::<T>(&file.basis, tol)?;
    let weights = file
        .weights
        .iter()
        .map(|w| T::from_f64(*w).ok_or_else(|| parse_error("unrepresentable weight")))
        .collect::<Result<Vec<T>>>()?;
    let seed = seed_override.or(file.seed).unwrap_or(0);
    EnsembleModel::new(basis, weights, seed, tol)
}

pub fn spectral_to_value<T: RealScalar>(sd: &SpectralDecomposition<T>) -> Value {
    json!({
        "coefficients": sd
            .coefficients()
            .iter()
            .map(|c| Value::from(as_f64(*c)))
            .collect::<Vec<Value>>(),
        "projectors": sd
            .projectors()
            .iter()
            .map(|p| matrix_to_value(p.as_po()))
            .collect::<Vec<Value>>(),
    })
}

pub fn complete_set_to_value<T: RealScalar>(cs: &CompleteSet<T>) -> Value {
    json!({
        "basis": cs
            .basis()
            .elements()
            .iter()
            .map(|p| matrix_to_value(p.as_po()))
            .collect::<Vec<Value>>(),
        "labels": cs
            .labels()
            .iter()
            .map(|tuple| {
                Value::from(
                    tuple
                        .iter()
                        .map(|x| Value::from(as_f64(*x)))
                        .collect::<Vec<Value>>(),
                )
            })
            .collect::<Vec<Value>>(),
    })
}

pub fn function_table_to_value<T: RealScalar>(table: &FunctionTable<T>) -> Value {
    Value::from(
        table
            .entries
            .iter()
            .map(|(key, value)| {
                json!({
                    "key": key.iter().map(|x| Value::from(as_f64(*x))).collect::<Vec<Value>>(),
                    "value": as_f64(*value),
                })
            })
            .collect::<Vec<Value>>(),
    )
}

pub fn component_matrix_to_value<T: RealScalar>(cm: &ComponentMatrix<T>) -> Value {
    let d = cm.dim();
    let grid = |imaginary: bool| -> Value {
        let rows: Vec<Value> = (0..d)
            .map(|j| {
                let cols: Vec<Value> = (0..d)
                    .map(|k| {
                        let e = cm.at(j, k);
                        Value::from(as_f64(if imaginary { e.im } else { e.re }))
                    })
                    .collect();
                Value::from(cols)
            })
            .collect();
        Value::from(rows)
    };
    json!({
        "dim": d,
        "re": grid(false),
        "im": grid(true),
        "basis_ref": cm.basis_ref(),
    })
}

pub fn change_of_basis_to_value<T: RealScalar>(cb: &ChangeOfBasis<T>) -> Value {
    json!({
        "omega": matrix_to_value(cb.omega()),
        "from_ref": cb.from_ref(),
        "to_ref": cb.to_ref(),
    })
}
