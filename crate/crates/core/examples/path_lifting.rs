//! Lifting segments and rays through the chart map.
//!
//! Run with `cargo run --example path_lifting`.

use logrs::lifting::{lift_segment, ray_classify, FiberPoint, LiftKind};
use logrs::numerics::{CPoly, Chart, PQForm, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // F(z) = z^2 over z0 = 1, starting on the sheet through w = 1.
    let square = Chart::new(PQForm::at_origin(CPoly::zero(), CPoly::from_real(&[0.0, 2.0]))?)?;
    let start = FiberPoint {
        location: C64::new(1.0, 0.0),
        sheet: 0,
    };
    let toward_zero = lift_segment(&square, &start, C64::new(1.0, 0.0), C64::new(0.0, 0.0))?;
    println!(
        "z^2, segment 1 -> 0: {:?}, rho = {:.12}, terminal order {}",
        toward_zero.kind,
        toward_zero.rho,
        toward_zero.terminal.map(|t| t.order.to_string()).unwrap_or_default()
    );
    let away = lift_segment(&square, &start, C64::new(1.0, 0.0), C64::new(4.0, 0.0))?;
    println!("z^2, segment 1 -> 4 ends at w = {:.12}", away.end.unwrap_or_default());

    // The Gaussian integral: a ray from 0 toward its positive asymptotic value.
    let gauss = Chart::new(PQForm::at_origin(
        CPoly::from_real(&[0.0, 0.0, -1.0]),
        CPoly::from_real(&[1.0]),
    )?)?;
    let origin = FiberPoint {
        location: C64::new(0.0, 0.0),
        sheet: 0,
    };
    let ray = ray_classify(&gauss, &origin, 0.0)?;
    assert_eq!(ray.kind, LiftKind::Terminated);
    println!(
        "erf kernel, ray at angle 0: rho = {:.12}, terminal order {}",
        ray.rho,
        ray.terminal.map(|t| t.order.to_string()).unwrap_or_default()
    );
    let up = ray_classify(&gauss, &origin, std::f64::consts::FRAC_PI_2)?;
    println!("erf kernel, ray at angle pi/2: {:?}, rho = {}", up.kind, up.rho);
    Ok(())
}
