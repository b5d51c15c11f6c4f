use std::f64::consts::TAU;

use serde_json::{json, Value};

use super::{complex_json, poly_json};
use crate::numerics::{poly_roots, CPoly, NumericsError, PQForm, C64};

/// `F''/F' = Σ m_i/(z - z_i) + P'(z)`, a rational function with simple
/// poles at the zeros of `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonlinearityData {
    /// `(z_i, residue)`; residues are measured by a contour integral.
    pub poles: Vec<(C64, f64)>,
    pub poly_part: CPoly,
    /// Order of the pole of `F''/F'` at infinity, `deg P - 1`.
    pub degree_at_infinity: i64,
}

const CONTOUR_POINTS: usize = 256;

/// `(1/2πi) ∮ F''/F'` over a circle of radius `r` about `c`, by the
/// trapezoid rule (spectrally accurate for analytic periodic integrands).
fn residue(f: &PQForm, c: C64, r: f64) -> C64 {
    let dq = f.q.derivative();
    let dp = f.p.derivative();
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..CONTOUR_POINTS {
        let e = C64::from_polar(1.0, TAU * j as f64 / CONTOUR_POINTS as f64);
        let z = c + e * r;
        let log_deriv = dq.eval(z) / f.q.eval(z) + dp.eval(z);
        // dz = i r e dθ, and 1/(2πi) cancels i.
        acc += log_deriv * e * r;
    }
    acc / CONTOUR_POINTS as f64
}

pub fn nonlinearity(f: &PQForm) -> Result<NonlinearityData, NumericsError> {
    let mut poles = Vec::new();
    if f.q.degree() >= 1 {
        let roots = poly_roots(&f.q)?;
        let locs: Vec<C64> = roots.iter().map(|r| r.location).collect();
        for (i, root) in roots.iter().enumerate() {
            let sep = locs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, z)| (z - root.location).norm())
                .fold(f64::INFINITY, f64::min);
            let r = (0.4 * sep).min(0.5 * (1.0 + root.location.norm()));
            poles.push((root.location, residue(f, root.location, r).re));
        }
    }
    Ok(NonlinearityData {
        poles,
        poly_part: f.p.derivative(),
        degree_at_infinity: f.d1() as i64 - 1,
    })
}

impl NonlinearityData {
    pub fn to_json(&self) -> Value {
        json!({
            "poles": self.poles.iter().map(|&(z, m)| json!({"pos": complex_json(z), "residue": m})).collect::<Vec<_>>(),
            "poly_part": poly_json(&self.poly_part),
            "degree_at_infinity": self.degree_at_infinity,
        })
    }
}
