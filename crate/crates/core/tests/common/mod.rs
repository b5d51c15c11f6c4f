#![allow(dead_code)]

use logrs::numerics::{CPoly, PQForm, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn exp_form() -> PQForm {
    PQForm::new(CPoly::identity(), CPoly::from_real(&[1.0]), c(0.0, 0.0), c(1.0, 0.0)).unwrap()
}

pub fn gauss_form() -> PQForm {
    PQForm::at_origin(CPoly::from_real(&[0.0, 0.0, -1.0]), CPoly::from_real(&[1.0])).unwrap()
}

pub fn monomial(d: usize) -> PQForm {
    let mut coeffs = vec![0.0; d + 1];
    coeffs[d] = 1.0;
    PQForm::from_polynomial(&CPoly::from_real(&coeffs)).unwrap()
}

/// `F` with `F' = Π (z - c_i)` and `F(0) = 0`.
pub fn poly_with_critical_points(crits: &[C64]) -> CPoly {
    let roots: Vec<(C64, usize)> = crits.iter().map(|&z| (z, 1)).collect();
    CPoly::from_roots(&roots).integral(c(0.0, 0.0))
}

pub fn min_separation(points: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// Random polynomial of degree `2..=max_degree` whose simple critical
/// points have pairwise critical-value separation at least `sep`.
pub fn random_polynomial(rng: &mut ChaCha8Rng, max_degree: usize, sep: f64) -> (CPoly, Vec<C64>) {
    loop {
        let d = rng.gen_range(2..=max_degree);
        let crits: Vec<C64> = (0..d - 1)
            .map(|_| c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
            .collect();
        if min_separation(&crits) < 0.2 {
            continue;
        }
        let f = poly_with_critical_points(&crits);
        let values: Vec<C64> = crits.iter().map(|&z| f.eval(z)).collect();
        if min_separation(&values) >= sep {
            return (f, crits);
        }
    }
}

pub fn rel_close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}
