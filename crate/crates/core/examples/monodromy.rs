//! Monodromy of the fiber over a generic base value.
//!
//! Run with `cargo run --example monodromy`.

use logrs::lifting::{choose_generic_basevalue, monodromy};
use logrs::numerics::{CPoly, Chart, PQForm, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cubic = Chart::new(PQForm::from_polynomial(&CPoly::from_real(&[0.0, -3.0, 0.0, 1.0]))?)?;
    let z0 = choose_generic_basevalue(&cubic.singular_value_points(), 7)?;
    let table = monodromy(&cubic, z0, 4)?;
    println!("z^3 - 3z over z0 = {z0:.6}: {} sheets", table.points.len());
    for (k, c) in table.critical_values.iter().enumerate() {
        println!("  loop around {c:.3}: {:?}", table.perms[k]);
    }

    // e^z: one loop around 0 shifts the sheet by 2πi; the fiber is infinite.
    let exp = Chart::new(PQForm::new(
        CPoly::identity(),
        CPoly::from_real(&[1.0]),
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
    )?)?;
    let table = monodromy(&exp, C64::new(0.4, 0.7), 2)?;
    println!(
        "e^z: {} sheets within depth 2, incomplete = {}",
        table.points.len(),
        table.incomplete
    );
    for (tag, w) in table.points.iter().enumerate() {
        println!("  sheet {tag}: w = {w:.6}");
    }
    Ok(())
}
