use serde_json::{json, Value};

use super::UniformizeError;
use crate::numerics::{
    asymptotic_directions, asymptotic_radius, poly_roots, pq_eval, sector_limit, PQForm, QuadOptions, C64,
};
use crate::skeleton::{complex_from_json, complex_to_json, JsonError};

const TAIL_LIMIT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinitePoint {
    pub pos: C64,
    pub order: usize,
}

/// Projections of the ramification points of the surface of `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct RamData {
    pub finite: Vec<FinitePoint>,
    /// Asymptotic values, one per steepest-descent direction of `P`.
    pub infinite: Vec<C64>,
    pub d1: usize,
    /// `Σ (order - 1)` over finite points.
    pub d2: usize,
}

/// Ramification data of `F`. Asymptotic values are integrated out to
/// `integration_radius` (chosen automatically when `None`).
pub fn ram_data(f: &PQForm, integration_radius: Option<f64>) -> Result<RamData, UniformizeError> {
    let mut finite = Vec::new();
    if f.q.degree() >= 1 {
        for r in poly_roots(&f.q)?.iter() {
            finite.push(FinitePoint {
                pos: pq_eval(f, r.location, None)?,
                order: r.multiplicity + 1,
            });
        }
    }
    let mut infinite = Vec::new();
    let dirs = asymptotic_directions(&f.p);
    if !dirs.is_empty() {
        let radius = integration_radius.unwrap_or_else(|| asymptotic_radius(f, 1e-14));
        for theta in dirs {
            let (value, tail) = sector_limit(f, theta, radius, &QuadOptions::default())?;
            #[allow(clippy::neg_cmp_op_on_partial_ord)] // a NaN tail fails too
            if !(tail <= TAIL_LIMIT) {
                return Err(UniformizeError::TailNotConverged { tail });
            }
            infinite.push(value);
        }
    }
    let d2 = finite.iter().map(|p| p.order - 1).sum();
    Ok(RamData {
        d1: infinite.len(),
        d2,
        finite,
        infinite,
    })
}

impl RamData {
    pub fn to_json(&self) -> Value {
        json!({
            "finite": self.finite.iter().map(|p| json!({"pos": complex_to_json(p.pos), "order": p.order})).collect::<Vec<_>>(),
            "infinite": self.infinite.iter().map(|&z| complex_to_json(z)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<RamData, JsonError> {
        let obj = v.as_object().ok_or_else(|| JsonError::new("$", "expected an object"))?;
        let list = |k: &str| -> Result<&Vec<Value>, JsonError> {
            match obj.get(k) {
                Some(Value::Array(a)) => Ok(a),
                Some(_) => Err(JsonError::new(k, "expected an array")),
                None => Err(JsonError::new(k, "missing")),
            }
        };
        let mut finite = Vec::new();
        for (i, p) in list("finite")?.iter().enumerate() {
            let field = format!("finite[{i}]");
            let m = p
                .as_object()
                .ok_or_else(|| JsonError::new(&field, "expected an object"))?;
            let pos = complex_from_json(
                m.get("pos")
                    .ok_or_else(|| JsonError::new(format!("{field}.pos"), "missing"))?,
                &format!("{field}.pos"),
            )?;
            let order = m
                .get("order")
                .and_then(Value::as_u64)
                .filter(|&o| o >= 2)
                .ok_or_else(|| JsonError::new(format!("{field}.order"), "expected an integer >= 2"))?;
            finite.push(FinitePoint {
                pos,
                order: order as usize,
            });
        }
        let infinite = list("infinite")?
            .iter()
            .enumerate()
            .map(|(i, z)| complex_from_json(z, &format!("infinite[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RamData {
            d1: infinite.len(),
            d2: finite.iter().map(|p| p.order - 1).sum(),
            finite,
            infinite,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::CPoly;

    #[test]
    fn square_has_one_finite_point() {
        let r = ram_data(
            &PQForm::at_origin(CPoly::zero(), CPoly::from_real(&[0.0, 2.0])).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(r.finite.len(), 1);
        assert_eq!(r.finite[0].order, 2);
        assert!(r.finite[0].pos.norm() < 1e-15);
        assert!(r.infinite.is_empty());
        assert_eq!((r.d1, r.d2), (0, 1));
    }

    #[test]
    fn exponential_tends_to_zero() {
        let f = PQForm::new(
            CPoly::identity(),
            CPoly::from_real(&[1.0]),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        )
        .unwrap();
        let r = ram_data(&f, None).unwrap();
        assert!(r.finite.is_empty());
        assert_eq!(r.infinite.len(), 1);
        assert!(r.infinite[0].norm() < 1e-12);
    }

    #[test]
    fn gaussian_asymptotic_values() {
        let f = PQForm::at_origin(CPoly::from_real(&[0.0, 0.0, -1.0]), CPoly::from_real(&[1.0])).unwrap();
        let r = ram_data(&f, None).unwrap();
        let half_root_pi = 0.886_226_925_452_758;
        let mut re: Vec<f64> = r.infinite.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + half_root_pi).abs() < 1e-10 && (re[1] - half_root_pi).abs() < 1e-10);
    }

    #[test]
    fn short_radius_is_reported() {
        let f = PQForm::at_origin(CPoly::from_real(&[0.0, 0.0, -1.0]), CPoly::from_real(&[1.0])).unwrap();
        assert!(matches!(
            ram_data(&f, Some(1.0)),
            Err(UniformizeError::TailNotConverged { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let r = RamData {
            finite: vec![FinitePoint {
                pos: C64::new(0.5, -0.25),
                order: 3,
            }],
            infinite: vec![C64::new(1.0, 0.0)],
            d1: 1,
            d2: 2,
        };
        assert_eq!(RamData::from_json(&r.to_json()).unwrap(), r);
    }
}
