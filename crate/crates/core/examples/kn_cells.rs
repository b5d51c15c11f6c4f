//! Nearest-ramification cells, the potentials τ and σ, level-set counts
//! and the parabolicity verdict.
//!
//! Run with `cargo run --release --example kn_cells`.

use logrs::geometry::{
    kn_cells, kn_distance, level_components, parabolicity, tau_field, tau_sigma, SurfacePoint, Window,
};
use logrs::numerics::{CPoly, Chart, PQForm, C64};
use logrs::skeleton::{ram_cycles, skeleton_build};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // F'(z) = (z - 1)(z + 1): two square-root points over F(±1) = ∓2/3.
    let f = PQForm::at_origin(CPoly::zero(), CPoly::from_real(&[-1.0, 0.0, 1.0]))?;
    let chart = Chart::new(f)?;
    let z0 = C64::new(0.1, 0.9);
    let g = skeleton_build(&chart, z0, 3)?;
    println!("skeleton: {} stars", g.vertices.len());

    let window = Window::around(C64::new(0.0, 0.0), 2.0);
    let cells = kn_cells(&g, window, 0.04)?;
    let mut sizes = vec![0usize; cells.mesh.ram.len()];
    for node in 0..cells.mesh.sample_count() {
        if let Some(s) = sizes.get_mut(cells.owner[node] as usize) {
            *s += 1;
        }
    }
    for (k, r) in cells.mesh.ram.iter().enumerate() {
        println!("cell of {:.4} (order {}): {} samples", r.projection, r.order, sizes[k]);
    }

    let base = SurfacePoint { star: g.base, z: z0 };
    let d = kn_distance(&cells, &base, &[0, 1])?;
    println!(
        "surface distance from z0 to the two points: {:.4} and {:.4}",
        d[0], d[1]
    );

    let far = SurfacePoint {
        star: g.base,
        z: C64::new(1.5, -1.5),
    };
    let (tau, sigma) = tau_sigma(&cells, &base, &far)?;
    println!("tau = {tau:.4}, sigma = {sigma:.4} at {}", far.z);

    let field = tau_field(&cells, &base)?;
    for theta in [0.5, 1.0, 2.0] {
        println!("n({theta}) = {}", level_components(&cells, &field, theta));
    }
    let ram = ram_cycles(&g)?;
    let report = parabolicity(&ram, true, Some((&cells, &field)), 12)?;
    println!(
        "verdict {:?}; n(theta) bound {}, largest sampled {:?}",
        report.verdict, report.n_bound, report.max_estimate
    );
    Ok(())
}
