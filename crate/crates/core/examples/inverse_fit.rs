//! Recovering (P, Q) from ramification data by damped least squares.
//!
//! Run with `cargo run --release --example inverse_fit`.

use logrs::numerics::{CPoly, PQForm, C64};
use logrs::uniformize::{fit_pq, ram_data};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Target: F' = (z - 0.5)(z + 0.7i) e^{0.3 z^2 - z}, F(0) = 0.
    let truth = PQForm::at_origin(
        CPoly::from_real(&[0.0, -1.0, 0.3]),
        CPoly::from_roots(&[(C64::new(0.5, 0.0), 1), (C64::new(0.0, -0.7), 1)]),
    )?;
    let target = ram_data(&truth, None)?;
    println!("target: {}", target.to_json());

    // Start from a perturbed guess; F(0) and F'(0) fix the affine gauge.
    let init = PQForm::at_origin(
        CPoly::from_real(&[0.05, -0.9, 0.33]),
        CPoly::from_roots(&[(C64::new(0.55, 0.05), 1), (C64::new(0.05, -0.75), 1)]),
    )?;
    let gauge = (C64::new(0.0, 0.0), truth.integrand(C64::new(0.0, 0.0)));
    let fit = fit_pq(&target, &init, gauge)?;
    println!(
        "converged after {} iterations, residual {:.2e}",
        fit.iterations, fit.residual
    );
    println!("P = {:?}", fit.f.p.coeffs());
    println!("Q = {:?}", fit.f.q.coeffs());
    Ok(())
}
