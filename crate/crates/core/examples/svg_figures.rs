//! SVG figures of a skeleton and of its cells, plus a CLI round trip.
//!
//! Run with `cargo run --release --example svg_figures`; files are written
//! to the system temporary directory.

use logrs::cli::{cells_svg, run, skeleton_svg};
use logrs::geometry::{kn_cells, Window};
use logrs::numerics::{CPoly, Chart, PQForm, C64};
use logrs::skeleton::skeleton_build;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("logrs-figures");
    std::fs::create_dir_all(&dir)?;

    let cubic = Chart::new(PQForm::from_polynomial(&CPoly::from_real(&[0.0, -3.0, 0.0, 1.0]))?)?;
    let g = skeleton_build(&cubic, C64::new(0.5, 0.8), 2)?;
    std::fs::write(dir.join("cubic_skeleton.svg"), skeleton_svg(&g))?;
    let cells = kn_cells(&g, Window::around(C64::new(0.0, 0.0), 3.0), 0.06)?;
    std::fs::write(dir.join("cubic_cells.svg"), cells_svg(&g, &cells))?;

    // The same pipeline through the command-line entry point.
    let pq = dir.join("exp.json");
    std::fs::write(&pq, r#"{"P": [[0, 0], [1, 0]], "Q": [[1, 0]], "c0": [1, 0]}"#)?;
    let out = dir.join("exp");
    let code = run([
        "logrs",
        "skeleton",
        "--radius",
        "3",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
        pq.to_str().unwrap(),
    ]);
    println!("logrs skeleton exited with {code}");
    println!("figures in {}", dir.display());
    Ok(())
}
