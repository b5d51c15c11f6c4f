use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LiftError;
use crate::numerics::C64;

const MAX_DRAWS: usize = 10_000;

/// Required clearance of a base value from every singular value and every
/// line through two of them: `0.05 * max(1, diameter)`.
pub fn genericity_margin(crits: &[C64]) -> f64 {
    0.05 * diameter(crits).max(1.0)
}

fn diameter(pts: &[C64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Distance from `z` to the line through `a` and `b`.
pub fn point_line_distance(z: C64, a: C64, b: C64) -> f64 {
    let dir = b - a;
    let len = dir.norm();
    if len == 0.0 {
        return (z - a).norm();
    }
    ((z - a) * dir.conj()).im.abs() / len
}

/// Smallest distance from `z0` to a singular value or to a line through two.
pub fn genericity_clearance(crits: &[C64], z0: C64) -> f64 {
    let mut d = f64::INFINITY;
    for (i, a) in crits.iter().enumerate() {
        d = d.min((z0 - a).norm());
        for b in &crits[i + 1..] {
            d = d.min(point_line_distance(z0, *a, *b));
        }
    }
    d
}

pub fn is_generic(crits: &[C64], z0: C64, margin: f64) -> bool {
    genericity_clearance(crits, z0) >= margin
}

/// Rejection-sample a base value off every line through two singular values.
pub fn choose_generic_basevalue(crits: &[C64], seed: u64) -> Result<C64, LiftError> {
    if crits.is_empty() {
        return Ok(C64::new(1.0, 0.0));
    }
    let margin = genericity_margin(crits);
    let center = crits.iter().sum::<C64>() / crits.len() as f64;
    let spread = 1.0 + diameter(crits);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let r = spread * rng.gen::<f64>().sqrt();
        let t = rng.gen::<f64>() * std::f64::consts::TAU;
        let z0 = center + C64::from_polar(r, t);
        if is_generic(crits, z0, margin) {
            return Ok(z0);
        }
    }
    Err(LiftError::NoGenericPoint)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn single_value_has_no_lines() {
        let z0 = choose_generic_basevalue(&[c(0.0, 0.0)], 7).unwrap();
        assert!(z0.norm() >= 0.05);
        assert!(is_generic(&[c(0.0, 0.0)], c(1.0, 0.0), 0.05));
    }

    #[test]
    fn imaginary_unit_clears_real_axis() {
        let crits = [c(-1.0, 0.0), c(1.0, 0.0)];
        assert!((genericity_clearance(&crits, c(0.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!(is_generic(&crits, c(0.0, 1.0), genericity_margin(&crits)));
        assert!(!is_generic(&crits, c(3.0, 0.0), genericity_margin(&crits)));
    }

    #[test]
    fn triangle_sample_is_checked_by_direct_distance() {
        let crits = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        for seed in 0..20 {
            let z0 = choose_generic_basevalue(&crits, seed).unwrap();
            // Independent point-line distances for the three sides.
            let d_real = z0.im.abs();
            let d_imag = z0.re.abs();
            let d_diag = (z0.re + z0.im - 1.0).abs() / 2f64.sqrt();
            assert!(d_real >= 0.05 && d_imag >= 0.05 && d_diag >= 0.05, "{z0}");
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let crits = [c(0.0, 0.0), c(2.0, 1.0)];
        assert_eq!(
            choose_generic_basevalue(&crits, 3).unwrap(),
            choose_generic_basevalue(&crits, 3).unwrap()
        );
    }
}
