//! Polynomial approximants F_n' = Q (1 + P/n)^n and their skeletons.
//!
//! Run with `cargo run --release --example approximants`.

use logrs::numerics::{CPoly, PQForm, C64};
use logrs::uniformize::convergence_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = [
        (
            "e^z",
            PQForm::new(
                CPoly::identity(),
                CPoly::from_real(&[1.0]),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            )?,
            C64::new(0.37, 0.61),
        ),
        (
            "erf kernel",
            PQForm::at_origin(CPoly::from_real(&[0.0, 0.0, -1.0]), CPoly::from_real(&[1.0]))?,
            C64::new(0.1, 0.45),
        ),
    ];
    for (name, f, z0) in &fixtures {
        println!("{name}");
        let table = convergence_report(f, &[2, 4, 8, 16, 32], 2, *z0, 0.1)?;
        for row in &table.rows {
            println!(
                "  n = {:2}: critical points {:3} (expected {:3}), min |P = -n| root {:8.3}, ball embeds r=1,2: {:?}",
                row.n,
                row.critical_count,
                row.expected_count,
                row.min_escape_modulus.unwrap_or(f64::NAN),
                row.embeds
            );
        }
    }
    Ok(())
}
