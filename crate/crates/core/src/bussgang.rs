//! Bussgang linear model of the clipper: `x_c = beta * x + z`, with
//! `beta = E{x_c x} / E{x^2}` chosen so that `z` is uncorrelated with `x`.
//!
//! For a zero-mean Gaussian input clipped at `-A1` and `A2`,
//!
//! ```text
//! E{x_c x} / sigma^2 = [Phi(a2) - Phi(-a1)] - [a1 phi(a1) + a2 phi(a2)]   (kept part)
//!                    + [a1 phi(a1) + a2 phi(a2)]                           (rails)
//!                    = 1 - Q(alpha1) - Q(alpha2)
//! ```
//!
//! so the boundary terms cancel and `beta` is the probability of landing
//! between the rails.

use crate::clipper::{q_function, ClipConfig, ClippedFrame};
use crate::error::{invalid, Error, Result};
use crate::signal_chain::TimeFrame;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearDecomposition {
    pub beta: f64,
    /// Clipping noise `z_n = x_c,n - beta x_n`.
    pub noise: Vec<f64>,
    pub config: ClipConfig,
}

/// Closed-form attenuation `1 - Q(alpha1) - Q(alpha2)`.
pub fn beta_analytic(cfg: &ClipConfig) -> f64 {
    1.0 - q_function(cfg.alpha1()) - q_function(cfg.alpha2())
}

/// Sample-moment estimate `sum x_c x / sum x^2`.
pub fn beta_empirical(x: &[f64], x_c: &[f64]) -> Result<f64> {
    if x.len() != x_c.len() {
        return Err(invalid(format!(
            "length mismatch: {} input vs {} clipped samples",
            x.len(),
            x_c.len()
        )));
    }
    if x.len() < 2 {
        return Err(invalid("beta estimate needs at least 2 samples"));
    }
    let (num, den) = x
        .iter()
        .zip(x_c)
        .fold((0.0, 0.0), |(n, d), (&a, &c)| (n + a * c, d + a * a));
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    if den / n - mean * mean <= 0.0 {
        return Err(Error::Degenerate("beta estimate with zero-variance input".into()));
    }
    Ok(num / den)
}

pub fn decompose(frame: &TimeFrame, clipped: &ClippedFrame, beta: f64) -> Result<LinearDecomposition> {
    if frame.samples.len() != clipped.samples.len() {
        return Err(invalid(format!(
            "length mismatch: frame has {} samples, clipped frame {}",
            frame.samples.len(),
            clipped.samples.len()
        )));
    }
    let noise = frame
        .samples
        .iter()
        .zip(&clipped.samples)
        .map(|(&x, &xc)| xc - beta * x)
        .collect();
    Ok(LinearDecomposition {
        beta,
        noise,
        config: clipped.config,
    })
}

/// Clipping noise as a deterministic function of the input sample:
/// `-A1 - beta x` below the lower rail, `(1 - beta) x` between the rails,
/// `A2 - beta x` above the upper rail.
#[inline]
pub fn noise_map(x: f64, cfg: &ClipConfig, beta: f64) -> f64 {
    let (a1, a2) = (cfg.a1(), cfg.a2());
    if x <= -a1 {
        -a1 - beta * x
    } else if x >= a2 {
        a2 - beta * x
    } else {
        (1.0 - beta) * x
    }
}
