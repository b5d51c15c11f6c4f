//! From a PQ-form to its ramification data and back: the nonlinearity
//! `F''/F'`, finite and asymptotic ramification positions, local inverse
//! fitting, and the polynomial approximants `F_n`.

mod convergence;
mod fit;
mod nonlinearity;
mod ramdata;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::lifting::LiftError;
use crate::numerics::{CPoly, NumericsError, PQForm, C64};
use crate::skeleton::{JsonError, SkeletonError};

pub use convergence::{convergence_report, ConvergenceRow, ConvergenceTable};
pub use fit::{fit_pq, fit_pq_with, FitOptions, FitResult};
pub use nonlinearity::{nonlinearity, NonlinearityData};
pub use ramdata::{ram_data, FinitePoint, RamData};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UniformizeError {
    #[error("sector tail {tail:e} above 1e-8; increase the integration radius")]
    TailNotConverged { tail: f64 },
    #[error("Jacobian is rank deficient (condition {condition:e}); perturb the initial form")]
    SingularJacobian { condition: f64 },
    #[error("no convergence after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("initial form does not match the target: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn poly_json(p: &CPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|&c| complex_json(c)).collect())
}

fn complex_from(v: &Value, field: &str) -> Result<C64, JsonError> {
    crate::skeleton::complex_from_json(v, field)
}

fn poly_from(v: &Value, field: &str) -> Result<CPoly, JsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| JsonError::new(field, "expected an array of [re, im] coefficients"))?;
    let coeffs = arr
        .iter()
        .enumerate()
        .map(|(i, c)| complex_from(c, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CPoly::new(coeffs))
}

/// `{"P": [...], "Q": [...], "z_b": [re, im], "c0": [re, im]}` with
/// coefficients in ascending order.
pub fn pqform_to_json(f: &PQForm) -> Value {
    let mut m = Map::new();
    m.insert("P".into(), poly_json(&f.p));
    m.insert("Q".into(), poly_json(&f.q));
    m.insert("z_b".into(), complex_json(f.base_point));
    m.insert("c0".into(), complex_json(f.base_value));
    Value::Object(m)
}

pub fn pqform_from_json(v: &Value) -> Result<PQForm, JsonError> {
    let obj = v.as_object().ok_or_else(|| JsonError::new("$", "expected an object"))?;
    let get = |k: &str| obj.get(k).ok_or_else(|| JsonError::new(k, "missing"));
    let p = poly_from(get("P")?, "P")?;
    let q = poly_from(get("Q")?, "Q")?;
    let zb = match obj.get("z_b") {
        Some(z) => complex_from(z, "z_b")?,
        None => C64::new(0.0, 0.0),
    };
    let c0 = match obj.get("c0") {
        Some(z) => complex_from(z, "c0")?,
        None => C64::new(0.0, 0.0),
    };
    PQForm::new(p, q, zb, c0).map_err(|_| JsonError::new("Q", "must not be identically zero"))
}
