//! Build one DCO-OFDM frame by hand, then stream many through `FrameSource`.

use clipnoise::signal_chain::{
    build_hermitian, ifft, imag_residue, map_bits, nominal_sigma, FrameSource, QamConstellation,
};
use clipnoise::stats::Moments;

fn main() -> clipnoise::Result<()> {
    let n = 256;
    let qam = QamConstellation::new(16)?;
    let source = FrameSource::new(n, qam.clone(), 42)?;

    let bits = source.frame_bits(0);
    let symbols = map_bits(&bits, &qam)?;
    let hermitian = build_hermitian(&symbols)?;
    println!("{} bits -> {} symbols -> {} subcarriers", bits.len(), symbols.len(), hermitian.len());
    println!("imaginary residue after IFFT: {:.2e}", imag_residue(&hermitian)?);

    let frame = ifft(&hermitian)?;
    println!("first samples: {:?}", &frame.samples[..4]);

    let mut pooled = Moments::new();
    for i in 0..2000 {
        pooled.extend(&source.frame(i)?.samples);
    }
    println!(
        "pooled over {} samples: variance {:.4} (nominal {:.4}), kurtosis {:.3}",
        pooled.count(),
        pooled.variance(),
        nominal_sigma(n).powi(2),
        pooled.kurtosis()?
    );
    Ok(())
}
