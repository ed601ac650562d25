//! Iterative radix-2 decimation-in-time FFT.

use num_complex::Complex64;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `exp(-j 2 pi k n / N)`.
    Forward,
    /// Kernel `exp(+j 2 pi k n / N)`.
    Inverse,
}

/// In-place unscaled transform. `buf.len()` must be a power of two.
pub fn fft_in_place(buf: &mut [Complex64], direction: Direction) -> Result<()> {
    let n = buf.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(invalid(format!("FFT length {n} is not a power of two")));
    }
    if n == 1 {
        return Ok(());
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }

    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = sign * std::f64::consts::TAU / len as f64;
        // Twiddles computed directly per stage to avoid recurrence drift.
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| Complex64::from_polar(1.0, step * k as f64))
            .collect();
        for block in buf.chunks_exact_mut(len) {
            let (lo, hi) = block.split_at_mut(half);
            for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let t = *b * w;
                *b = *a - t;
                *a += t;
            }
        }
        len <<= 1;
    }
    Ok(())
}
