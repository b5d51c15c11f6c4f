//! Truncating infinite-order ramification and comparing balls.
//!
//! Run with `cargo run --example truncation`.

use logrs::numerics::{CPoly, Chart, PQForm, C64};
use logrs::skeleton::{ball_embed, finite_completion, pi1_rank, ram_cycles, skeleton_build, truncate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exp = Chart::new(PQForm::new(
        CPoly::identity(),
        CPoly::from_real(&[1.0]),
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
    )?)?;
    let g = skeleton_build(&exp, C64::new(0.4, 0.7), 5)?;
    println!("e^z ball of radius 5: {} vertices", g.vertices.len());
    for n in 1..=4 {
        let t = truncate(&g, n)?;
        let orders: Vec<String> = ram_cycles(&t)?.iter().map(|r| r.order.to_string()).collect();
        let embeds: Vec<bool> = (1..=3).map(|r| ball_embed(&t, &g, r)).collect();
        println!(
            "n = {n}: {} vertices, orders {orders:?}, completed rank {}, ball embeds for r = 1..3: {embeds:?}",
            t.vertices.len(),
            pi1_rank(&finite_completion(&t)?)
        );
    }
    Ok(())
}
