//! Polynomial roots, PQ-form evaluation and asymptotic values.
//!
//! Run with `cargo run --example numerics_tour`.

use logrs::numerics::{
    asymptotic_directions, asymptotic_radius, poly_roots, pq_eval, sector_limit, CPoly, Chart, PQForm, QuadOptions, C64,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // (z - 1)^2 (z + 2): a double root and a simple one.
    let p = CPoly::from_roots(&[(C64::new(1.0, 0.0), 2), (C64::new(-2.0, 0.0), 1)]);
    for r in poly_roots(&p)?.iter() {
        println!("root {:.12} with multiplicity {}", r.location, r.multiplicity);
    }

    // The error function kernel: F(z) = ∫_0^z e^{-t^2} dt.
    let gauss = PQForm::at_origin(CPoly::from_real(&[0.0, 0.0, -1.0]), CPoly::from_real(&[1.0]))?;
    let z = C64::new(0.5, 0.25);
    println!("F({z}) = {:.15}", pq_eval(&gauss, z, None)?);

    let radius = asymptotic_radius(&gauss, 1e-14);
    for theta in asymptotic_directions(&gauss.p) {
        let (value, tail) = sector_limit(&gauss, theta, radius, &QuadOptions::default())?;
        println!("direction {theta:.6}: asymptotic value {value:.12} (tail {tail:.1e})");
    }

    // z^3 - 3z has critical points ±1 with critical values ∓2.
    let cubic = PQForm::from_polynomial(&CPoly::from_real(&[0.0, -3.0, 0.0, 1.0]))?;
    let chart = Chart::new(cubic)?;
    for c in chart.critical_points() {
        println!("critical point {:.6} -> value {:.6}", c.location, c.value);
    }
    Ok(())
}
