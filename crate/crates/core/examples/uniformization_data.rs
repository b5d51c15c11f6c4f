//! The nonlinearity F''/F' and the ramification data of PQ-forms.
//!
//! Run with `cargo run --example uniformization_data`.

use logrs::numerics::{CPoly, PQForm, C64};
use logrs::uniformize::{nonlinearity, pqform_to_json, ram_data};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let forms = [
        ("z^2", PQForm::at_origin(CPoly::zero(), CPoly::from_real(&[0.0, 2.0]))?),
        (
            "e^z",
            PQForm::new(
                CPoly::identity(),
                CPoly::from_real(&[1.0]),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            )?,
        ),
        (
            "erf kernel",
            PQForm::at_origin(CPoly::from_real(&[0.0, 0.0, -1.0]), CPoly::from_real(&[1.0]))?,
        ),
        (
            "(z-1)^2 (z+2) e^{z^2}",
            PQForm::at_origin(
                CPoly::from_real(&[0.0, 0.0, 1.0]),
                CPoly::from_roots(&[(C64::new(1.0, 0.0), 2), (C64::new(-2.0, 0.0), 1)]),
            )?,
        ),
    ];
    for (name, f) in &forms {
        println!("{name}: {}", pqform_to_json(f));
        let n = nonlinearity(f)?;
        for (z, m) in &n.poles {
            println!("  pole of F''/F' at {z:.6} with residue {m:.10}");
        }
        println!("  pole at infinity of order {}", n.degree_at_infinity);
        match ram_data(f, None) {
            Ok(rd) => {
                for p in &rd.finite {
                    println!("  finite ramification over {:.10}, order {}", p.pos, p.order);
                }
                for v in &rd.infinite {
                    println!("  asymptotic value {v:.10}");
                }
            }
            Err(e) => println!("  ramification data unavailable: {e}"),
        }
    }
    Ok(())
}
