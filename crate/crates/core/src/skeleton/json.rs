use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{Edge, Radius, Side, Skeleton};
use crate::numerics::C64;

/// Malformed interchange document; `field` is a JSON path.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("field `{field}`: {reason}")]
pub struct JsonError {
    pub field: String,
    pub reason: String,
}

impl JsonError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        JsonError {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub fn complex_to_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_from_json(v: &Value, field: &str) -> Result<C64, JsonError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| JsonError::new(field, "expected [re, im]"))?;
    let re = arr[0]
        .as_f64()
        .ok_or_else(|| JsonError::new(format!("{field}[0]"), "expected a number"))?;
    let im = arr[1]
        .as_f64()
        .ok_or_else(|| JsonError::new(format!("{field}[1]"), "expected a number"))?;
    Ok(C64::new(re, im))
}

fn side_from_json(v: &Value, field: &str) -> Result<Side, JsonError> {
    match v.as_str() {
        Some("+") => Ok(Side::Plus),
        Some("-") => Ok(Side::Minus),
        _ => Err(JsonError::new(field, "expected \"+\" or \"-\"")),
    }
}

fn id_from_json(v: &Value, field: &str) -> Result<usize, JsonError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| JsonError::new(field, "expected a non-negative integer id"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, prefix: &str) -> Result<&'a Value, JsonError> {
    obj.get(key)
        .ok_or_else(|| JsonError::new(format!("{prefix}{key}"), "missing"))
}

impl Skeleton {
    /// Interchange form. `v_side` is written only when it is not the
    /// opposite of `u_side`.
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                let mut m = Map::new();
                m.insert("u".into(), json!(e.u));
                m.insert("v".into(), json!(e.v));
                m.insert("foot".into(), complex_to_json(e.foot));
                m.insert("u_side".into(), json!(e.u_side.symbol()));
                if e.v_side != e.u_side.opposite() {
                    m.insert("v_side".into(), json!(e.v_side.symbol()));
                }
                Value::Object(m)
            })
            .collect();
        json!({
            "z0": complex_to_json(self.z0),
            "base": self.base,
            "vertices": self.vertices,
            "edges": edges,
            "radius": match self.radius {
                Radius::Finite(r) => json!(r),
                Radius::Infinite => json!("inf"),
            },
        })
    }

    pub fn from_json(v: &Value) -> Result<Skeleton, JsonError> {
        let obj = v.as_object().ok_or_else(|| JsonError::new("$", "expected an object"))?;
        let z0 = complex_from_json(get(obj, "z0", "")?, "z0")?;
        let base = id_from_json(get(obj, "base", "")?, "base")?;
        let vertices = get(obj, "vertices", "")?
            .as_array()
            .ok_or_else(|| JsonError::new("vertices", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, x)| id_from_json(x, &format!("vertices[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if !vertices.contains(&base) {
            return Err(JsonError::new("base", "not among the vertices"));
        }
        let raw_edges = get(obj, "edges", "")?
            .as_array()
            .ok_or_else(|| JsonError::new("edges", "expected an array"))?;
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (i, e) in raw_edges.iter().enumerate() {
            let p = format!("edges[{i}].");
            let m = e
                .as_object()
                .ok_or_else(|| JsonError::new(format!("edges[{i}]"), "expected an object"))?;
            let u_side = side_from_json(get(m, "u_side", &p)?, &format!("{p}u_side"))?;
            let v_side = match m.get("v_side") {
                Some(s) => side_from_json(s, &format!("{p}v_side"))?,
                None => u_side.opposite(),
            };
            edges.push(Edge {
                u: id_from_json(get(m, "u", &p)?, &format!("{p}u"))?,
                v: id_from_json(get(m, "v", &p)?, &format!("{p}v"))?,
                foot: complex_from_json(get(m, "foot", &p)?, &format!("{p}foot"))?,
                u_side,
                v_side,
            });
        }
        let radius = match get(obj, "radius", "")? {
            Value::String(s) if s == "inf" => Radius::Infinite,
            r => Radius::Finite(
                r.as_u64()
                    .ok_or_else(|| JsonError::new("radius", "expected an integer or \"inf\""))?
                    as usize,
            ),
        };
        Ok(Skeleton {
            z0,
            base,
            vertices,
            edges,
            radius,
            locations: Default::default(),
        })
    }
}
