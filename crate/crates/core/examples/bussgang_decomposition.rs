//! Split a clipped frame into an attenuated copy plus uncorrelated noise.

use clipnoise::bussgang::{beta_analytic, beta_empirical, decompose, noise_map};
use clipnoise::clipper::{clip_frame, ClipConfig};
use clipnoise::signal_chain::{FrameSource, QamConstellation};

fn main() -> clipnoise::Result<()> {
    let source = FrameSource::new(1024, QamConstellation::new(16)?, 8)?;
    let cfg = ClipConfig::new(1.0, 1.5, source.sigma_x())?;
    let beta = beta_analytic(&cfg);

    let (mut x, mut xc) = (Vec::new(), Vec::new());
    let mut cross = 0.0;
    for i in 0..1000 {
        let frame = source.frame(i)?;
        let clipped = clip_frame(&frame, &cfg);
        let parts = decompose(&frame, &clipped, beta)?;
        cross += parts.noise.iter().zip(&frame.samples).map(|(z, x)| z * x).sum::<f64>();
        x.extend(frame.samples);
        xc.extend(clipped.samples);
    }
    println!("beta analytic  {beta:.6}");
    println!("beta empirical {:.6}", beta_empirical(&x, &xc)?);
    println!("E[z x] / sigma^2 = {:.2e}", cross / x.len() as f64 / cfg.sigma_x().powi(2));

    println!("noise map z = g(x):");
    for x in [-2.0, -1.0, 0.0, 1.0, 1.5, 2.5] {
        let x = x * cfg.sigma_x();
        println!("  x={x:+.3}  z={:+.4}", noise_map(x, &cfg, beta));
    }
    Ok(())
}
