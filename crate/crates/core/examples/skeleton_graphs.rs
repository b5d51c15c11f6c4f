//! Skeleton graphs, ramification cycles, completion and the rank of π₁.
//!
//! Run with `cargo run --example skeleton_graphs`.

use logrs::numerics::{CPoly, Chart, PQForm, C64};
use logrs::skeleton::{finite_completion, pi1_rank, ram_cycles, skeleton_build, validate_graph, Skeleton};

fn describe(name: &str, g: &Skeleton) -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{name}: {} vertices, {} edges, radius {:?}",
        g.vertices.len(),
        g.edges.len(),
        g.radius
    );
    for r in ram_cycles(g)? {
        println!(
            "  foot {:.6}: order {}{} through {:?}",
            r.projection,
            r.order,
            if r.lower_bounded { " (at least)" } else { "" },
            r.vertices
        );
    }
    let completed = finite_completion(g)?;
    println!(
        "  rank of pi_1: {}; after finite completion: {}; axiom violations: {}",
        pi1_rank(g),
        pi1_rank(&completed),
        validate_graph(g).len()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for d in 2..=4 {
        let mut coeffs = vec![0.0; d + 1];
        coeffs[d] = 1.0;
        let chart = Chart::new(PQForm::from_polynomial(&CPoly::from_real(&coeffs))?)?;
        let g = skeleton_build(&chart, C64::new(0.6, 0.3), 2)?;
        describe(&format!("z^{d}"), &g)?;
    }

    let exp = Chart::new(PQForm::new(
        CPoly::identity(),
        CPoly::from_real(&[1.0]),
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
    )?)?;
    let g = skeleton_build(&exp, C64::new(0.4, 0.7), 3)?;
    describe("e^z", &g)?;
    println!("{}", serde_json::to_string_pretty(&g.to_json())?);
    Ok(())
}
