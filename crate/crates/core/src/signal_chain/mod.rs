//! DCO-OFDM transmitter front end: bits to QAM symbols, Hermitian
//! mirroring, and a unitary inverse FFT producing one real time-domain
//! frame per OFDM symbol.
//!
//! ```text
//! bits -> Gray QAM -> [0, S_1 .. S_{N/2-1}, 0, S*_{N/2-1} .. S*_1] -> IFFT / sqrt(N) -> x_n
//! ```
//!
//! With unit-energy symbols on `N/2 - 1` mirrored subcarriers, the output
//! variance is `(N - 2) / N`.

mod fft;
mod qam;

pub use fft::{fft_in_place, Direction};
pub use qam::{map_bits, QamConstellation};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::rng::{mix_seed, SplitMix64};

/// Largest tolerated `max|Im x_n| / max|x_n|` after the inverse transform.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// Smallest FFT size accepted for simulated frames.
pub const MIN_FRAME_LEN: usize = 64;

/// Frequency-domain vector satisfying `I_0 = I_{N/2} = 0` and
/// `I_{N-k} = conj(I_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianVector {
    entries: Vec<Complex64>,
}

impl HermitianVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

/// One OFDM symbol in the time domain.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFrame {
    pub samples: Vec<f64>,
    /// Nominal standard deviation of the unclipped process.
    pub sigma_x: f64,
}

/// Analytic output standard deviation for unit-energy symbols and `N` points.
pub fn nominal_sigma(n: usize) -> f64 {
    ((n as f64 - 2.0) / n as f64).sqrt()
}

/// Place `N/2 - 1` symbols on the positive subcarriers and mirror them.
pub fn build_hermitian(symbols: &[Complex64]) -> Result<HermitianVector> {
    let n = 2 * (symbols.len() + 1);
    if !n.is_power_of_two() || n < 4 {
        return Err(invalid(format!(
            "{} symbols do not fill a power-of-two frame (need N/2 - 1 symbols)",
            symbols.len()
        )));
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); n];
    for (k, s) in symbols.iter().enumerate().map(|(i, s)| (i + 1, s)) {
        entries[k] = *s;
        entries[n - k] = s.conj();
    }
    Ok(HermitianVector { entries })
}

/// Unitary inverse transform `x_n = N^{-1/2} sum_k I_k exp(+j 2 pi k n / N)`.
///
/// The imaginary parts are checked against [`IMAG_RESIDUE_TOL`] and dropped.
pub fn ifft(v: &HermitianVector) -> Result<TimeFrame> {
    let n = v.len();
    let mut buf = v.entries.clone();
    fft_in_place(&mut buf, Direction::Inverse)?;
    let scale = 1.0 / (n as f64).sqrt();
    let max_re = buf.iter().fold(0.0f64, |m, c| m.max(c.re.abs())) * scale;
    let max_im = buf.iter().fold(0.0f64, |m, c| m.max(c.im.abs())) * scale;
    if max_im > IMAG_RESIDUE_TOL * max_re.max(f64::MIN_POSITIVE) && max_im > 0.0 {
        return Err(Error::Consistency(format!(
            "IFFT imaginary residue {max_im:e} exceeds {IMAG_RESIDUE_TOL:e} relative to peak {max_re:e}"
        )));
    }
    Ok(TimeFrame {
        samples: buf.iter().map(|c| c.re * scale).collect(),
        sigma_x: nominal_sigma(n),
    })
}

/// Relative imaginary residue of the unitary IFFT of `v`, for diagnostics.
pub fn imag_residue(v: &HermitianVector) -> Result<f64> {
    let mut buf = v.entries.clone();
    fft_in_place(&mut buf, Direction::Inverse)?;
    let max_re = buf.iter().fold(0.0f64, |m, c| m.max(c.re.abs()));
    let max_im = buf.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
    Ok(if max_re == 0.0 { max_im } else { max_im / max_re })
}

/// Deterministic generator of random DCO-OFDM frames.
///
/// Frame `i` draws its bits from a [`SplitMix64`] stream seeded with
/// `mix_seed(seed, i)`, so any frame can be produced on its own.
#[derive(Debug, Clone)]
pub struct FrameSource {
    n: usize,
    constellation: QamConstellation,
    seed: u64,
}

impl FrameSource {
    pub fn new(n: usize, constellation: QamConstellation, seed: u64) -> Result<Self> {
        if !n.is_power_of_two() || n < MIN_FRAME_LEN {
            return Err(invalid(format!(
                "frame length N = {n} must be a power of two >= {MIN_FRAME_LEN}"
            )));
        }
        Ok(Self {
            n,
            constellation,
            seed,
        })
    }

    pub fn frame_len(&self) -> usize {
        self.n
    }

    pub fn sigma_x(&self) -> f64 {
        nominal_sigma(self.n)
    }

    pub fn constellation(&self) -> &QamConstellation {
        &self.constellation
    }

    /// Random bits for frame `index`.
    pub fn frame_bits(&self, index: u64) -> Vec<bool> {
        let count = (self.n / 2 - 1) * self.constellation.bits_per_symbol();
        let mut rng = SplitMix64::new(mix_seed(self.seed, index));
        let mut bits = Vec::with_capacity(count);
        while bits.len() < count {
            let word = rng.next_u64();
            let take = (count - bits.len()).min(64);
            bits.extend((0..take).map(|b| (word >> b) & 1 == 1));
        }
        bits
    }

    pub fn frame(&self, index: u64) -> Result<TimeFrame> {
        let symbols = map_bits(&self.frame_bits(index), &self.constellation)?;
        ifft(&build_hermitian(&symbols)?)
    }
}

/// `count` consecutive frames (indices `0..count`) from [`FrameSource`].
pub fn generate_frames(
    count: usize,
    n: usize,
    constellation: QamConstellation,
    seed: u64,
) -> Result<impl Iterator<Item = Result<TimeFrame>>> {
    let source = FrameSource::new(n, constellation, seed)?;
    Ok((0..count as u64).map(move |i| source.frame(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_layout_n8() {
        let (a, b, d) = (c(1.0, 2.0), c(-3.0, 0.5), c(0.25, -1.0));
        let v = build_hermitian(&[a, b, d]).unwrap();
        let zero = c(0.0, 0.0);
        assert_eq!(
            v.entries(),
            &[zero, a, b, d, zero, d.conj(), b.conj(), a.conj()]
        );
    }

    #[test]
    fn zero_symbols_give_zero_vector_and_frame() {
        let v = build_hermitian(&[c(0.0, 0.0); 3]).unwrap();
        assert!(v.entries().iter().all(|e| e.norm() == 0.0));
        let f = ifft(&v).unwrap();
        assert!(f.samples.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn wrong_symbol_count_rejected() {
        assert!(build_hermitian(&[c(1.0, 0.0); 4]).is_err());
        assert!(build_hermitian(&[]).is_err());
    }

    #[test]
    fn single_tone_is_cosine() {
        let v = build_hermitian(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let f = ifft(&v).unwrap();
        for (n, x) in f.samples.iter().enumerate() {
            let want = 2.0 / 8f64.sqrt() * (std::f64::consts::TAU * n as f64 / 8.0).cos();
            assert!((x - want).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn random_frames_are_real() {
        let q = QamConstellation::new(64).unwrap();
        let src = FrameSource::new(1024, q.clone(), 11).unwrap();
        for i in 0..20 {
            let syms = map_bits(&src.frame_bits(i), &q).unwrap();
            let v = build_hermitian(&syms).unwrap();
            assert!(imag_residue(&v).unwrap() < IMAG_RESIDUE_TOL);
        }
    }

    #[test]
    fn frame_length_validated() {
        let q = QamConstellation::new(4).unwrap();
        assert!(FrameSource::new(32, q.clone(), 0).is_err());
        assert!(FrameSource::new(100, q.clone(), 0).is_err());
        assert!(FrameSource::new(64, q, 0).is_ok());
    }

    #[test]
    fn determinism_and_empty_stream() {
        let q = QamConstellation::new(16).unwrap();
        let a: Vec<_> = generate_frames(3, 256, q.clone(), 5).unwrap().collect();
        let b: Vec<_> = generate_frames(3, 256, q.clone(), 5).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(generate_frames(0, 256, q, 5).unwrap().count(), 0);
    }

    #[test]
    fn different_seeds_are_uncorrelated() {
        let q = QamConstellation::new(16).unwrap();
        let x = FrameSource::new(1024, q.clone(), 1).unwrap().frame(0).unwrap();
        let y = FrameSource::new(1024, q, 2).unwrap().frame(0).unwrap();
        let n = x.samples.len() as f64;
        let (mx, my) = (
            x.samples.iter().sum::<f64>() / n,
            y.samples.iter().sum::<f64>() / n,
        );
        let mut sxy = 0.0;
        let mut sxx = 0.0;
        let mut syy = 0.0;
        for (a, b) in x.samples.iter().zip(&y.samples) {
            sxy += (a - mx) * (b - my);
            sxx += (a - mx) * (a - mx);
            syy += (b - my) * (b - my);
        }
        let r = sxy / (sxx * syy).sqrt();
        assert!(r.abs() < 0.05, "corr {r}");
    }
}
