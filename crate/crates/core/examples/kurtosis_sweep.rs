//! Kurtosis of the clipped signal along the symmetric diagonal.

use clipnoise::experiments::{kurtosis_sweep, Grid, SweepSpec};

fn main() -> clipnoise::Result<()> {
    let spec = SweepSpec {
        grid: Grid::Diagonal((1..=10).map(|i| 0.5 * i as f64).collect()),
        frames: 2000,
        ..SweepSpec::default()
    };
    let result = kurtosis_sweep(&spec)?;
    println!("{} samples per point", result.metadata.samples_per_point);
    println!("alpha   kurtosis");
    for row in &result.rows {
        println!("{:5.2}   {:.4}", row.alpha1, row.values[0]);
    }
    Ok(())
}
