//! Hellinger and KL distance from the empirical noise histogram to the
//! analytic model and to a fitted Gaussian.

use clipnoise::experiments::{distance_sweep, Grid, Metric, SweepSpec};

fn main() -> clipnoise::Result<()> {
    let spec = SweepSpec {
        grid: Grid::Product {
            alpha1: vec![0.5, 1.0, 2.0, 4.0],
            alpha2: vec![2.0],
        },
        frames: 1000,
        ..SweepSpec::default()
    };
    for metric in [Metric::Hellinger, Metric::Kl] {
        let result = distance_sweep(&spec, metric)?;
        println!("{metric:?}: alpha1 alpha2 {}", result.columns.join(" "));
        for row in &result.rows {
            println!("  {:4.1} {:4.1}  {:.5}  {:.5}", row.alpha1, row.alpha2, row.values[0], row.values[1]);
        }
        for note in &result.notes {
            println!("  note: {note}");
        }
    }
    Ok(())
}
