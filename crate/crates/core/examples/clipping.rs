//! Clip a frame at asymmetric levels and compare clip counts with the
//! atom masses of the clipped-signal density.

use clipnoise::clipper::{bias_frame, clip_frame, clipped_signal_pdf, ClipConfig};
use clipnoise::signal_chain::{FrameSource, QamConstellation};

fn main() -> clipnoise::Result<()> {
    let source = FrameSource::new(1024, QamConstellation::new(64)?, 3)?;
    let cfg = ClipConfig::with_led_min(1.0, 2.0, source.sigma_x(), 0.1)?;
    println!(
        "A1={:.4} A2={:.4} I_bias={:.4} I_H={:.4}",
        cfg.a1(),
        cfg.a2(),
        cfg.i_bias(),
        cfg.i_h()
    );

    let (mut low, mut high, mut total) = (0usize, 0usize, 0usize);
    for i in 0..500 {
        let clipped = clip_frame(&source.frame(i)?, &cfg);
        low += clipped.clipped_low_count;
        high += clipped.clipped_high_count;
        total += clipped.samples.len();
        if i == 0 {
            let drive = bias_frame(&clipped);
            let (lo, hi) = drive.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
            println!("LED drive range in frame 0: [{lo:.4}, {hi:.4}]");
        }
    }

    let pdf = clipped_signal_pdf(&cfg);
    println!("low clip fraction  {:.5}  model {:.5}", low as f64 / total as f64, pdf.atoms[0].1);
    println!("high clip fraction {:.5}  model {:.5}", high as f64 / total as f64, pdf.atoms[1].1);
    println!("continuous mass {:.5}, total {:.12}", pdf.continuous_mass(), pdf.total_mass());
    Ok(())
}
