//! Empirical noise histogram next to both candidate densities. Pipe the
//! output into any plotting tool.

use clipnoise::experiments::{pdf_overlay, SweepSpec};

fn main() -> clipnoise::Result<()> {
    let spec = SweepSpec {
        frames: 500,
        bins: 60,
        ..SweepSpec::default()
    };
    let ov = pdf_overlay(1.0, 2.0, &spec)?;
    println!("z,q_empirical,g1_analytic,g2_gaussfit");
    for r in &ov.rows {
        println!("{:.5},{:.5},{:.5},{:.5}", r.z, r.q_empirical, r.g1_analytic, r.g2_gaussfit);
    }
    Ok(())
}
