//! Square M-QAM with per-axis Gray labeling and unit average energy.
//!
//! A symbol's bit group is split in half: the leading `log2(M)/2` bits
//! select the in-phase level and the trailing half the quadrature level.
//! Each half is read MSB-first as a Gray code word `g`, converted to its
//! binary index `i`, and mapped to the amplitude `(L - 1) - 2i` where
//! `L = sqrt(M)`. For 4-QAM this gives `[0, 0] -> (+1 + j)/sqrt(2)`.
//! Amplitudes are scaled by `sqrt(2(M - 1)/3)` so that `E{|S|^2} = 1`.

use num_complex::Complex64;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QamConstellation {
    order: usize,
    bits_per_axis: usize,
    points: Vec<Complex64>,
}

fn gray_to_binary(mut g: usize) -> usize {
    let mut b = g;
    while g > 0 {
        g >>= 1;
        b ^= g;
    }
    b
}

impl QamConstellation {
    /// Square constellation of order 4, 16, 64 or 256.
    pub fn new(order: usize) -> Result<Self> {
        if !matches!(order, 4 | 16 | 64 | 256) {
            return Err(invalid(format!(
                "QAM order must be one of 4, 16, 64, 256 (got {order})"
            )));
        }
        let bits_per_symbol = order.trailing_zeros() as usize;
        let bits_per_axis = bits_per_symbol / 2;
        let levels = 1usize << bits_per_axis;
        let scale = (2.0 * (order as f64 - 1.0) / 3.0).sqrt();
        let amplitude = |label: usize| {
            let idx = gray_to_binary(label);
            ((levels - 1) as f64 - 2.0 * idx as f64) / scale
        };
        // points[label] where label = (i_label << bits_per_axis) | q_label
        let points = (0..order)
            .map(|label| {
                let i_label = label >> bits_per_axis;
                let q_label = label & (levels - 1);
                Complex64::new(amplitude(i_label), amplitude(q_label))
            })
            .collect();
        Ok(Self {
            order,
            bits_per_axis,
            points,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        2 * self.bits_per_axis
    }

    /// Constellation points indexed by their MSB-first bit label.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Point for a label given as an integer (MSB-first bit order).
    #[inline]
    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.order as f64
    }
}

/// Map a bit sequence onto constellation symbols, one symbol per
/// `bits_per_symbol` consecutive bits.
pub fn map_bits(bits: &[bool], constellation: &QamConstellation) -> Result<Vec<Complex64>> {
    let k = constellation.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(invalid(format!(
            "bit count {} is not a multiple of {k} bits per symbol",
            bits.len()
        )));
    }
    Ok(bits
        .chunks_exact(k)
        .map(|group| {
            let label = group
                .iter()
                .fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
            constellation.point(label)
        })
        .collect())
}
