//! Evaluate the closed-form clipping-noise density and check it against
//! exact draws from the model.

use clipnoise::clipper::ClipConfig;
use clipnoise::noise_model::ClipNoisePdf;
use clipnoise::stats::ks_statistic;

fn main() -> clipnoise::Result<()> {
    let model = ClipNoisePdf::new(&ClipConfig::new(1.0, 2.0, 1.0)?)?;
    let (k1, k2) = (model.lower_knot(), model.upper_knot());
    println!("beta {:.6}, knots [{k1:.4}, {k2:.4}]", model.beta());
    println!("mass between knots {:.5}, total {:.9}", model.middle_mass(), model.total_mass());

    for z in [-1.5, k1 - 1e-9, k1 + 1e-9, 0.0, k2 - 1e-9, k2 + 1e-9, 1.5] {
        println!("  z={z:+.6}  pdf={:10.5}  cdf={:.6}", model.pdf(z), model.cdf(z));
    }

    let draws = model.sample(200_000, 1);
    println!("KS distance of 2e5 exact draws: {:.5}", ks_statistic(&draws, |g| model.cdf(g)));
    Ok(())
}
