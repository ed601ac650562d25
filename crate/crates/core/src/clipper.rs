//! Double-sided clipping, DC biasing, and the mixed discrete/continuous
//! law of the clipped signal.
//!
//! Bounds are set relative to the nominal standard deviation:
//! `A1 = alpha1 * sigma_x`, `A2 = alpha2 * sigma_x`. With LED minimum
//! current `i_L`, the bias is `I_bias = A1 + i_L` and the LED maximum is
//! `i_H = I_bias + A2`.

use crate::error::{invalid, Result};
use crate::signal_chain::TimeFrame;

/// Operational range for both clipping ratios.
pub const ALPHA_MIN: f64 = 0.1;
pub const ALPHA_MAX: f64 = 6.0;

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Upper-tail standard normal probability `Q(y) = P(X > y)`.
///
/// Evaluated as `erfc(y / sqrt 2) / 2` with the `libm` port of the fdlibm
/// `erfc`, which keeps relative accuracy in the far upper tail.
#[inline]
pub fn q_function(y: f64) -> f64 {
    0.5 * libm::erfc(y * std::f64::consts::FRAC_1_SQRT_2)
}

/// `ln Q(y)`, finite far beyond the range where `Q(y)` underflows.
///
/// Past `y = 30` the Mills-ratio series
/// `Q(y) = phi(y)/y (1 - 1/y^2 + 3/y^4 - 15/y^6 + 105/y^8)` is used; its
/// truncation error there is below 1e-12 relative.
pub fn ln_q_function(y: f64) -> f64 {
    if y < 30.0 {
        return q_function(y).ln();
    }
    let r = 1.0 / (y * y);
    let series = 1.0 - r * (1.0 - r * (3.0 - r * (15.0 - 105.0 * r)));
    -0.5 * y * y - (SQRT_2PI * y).ln() + series.ln()
}

/// `ln(1 - e^x)` for `x <= 0`.
pub(crate) fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln P(lo <= X < hi)` for a standard normal `X`, accurate in both tails.
pub fn ln_normal_interval(lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return f64::NEG_INFINITY;
    }
    if lo >= 0.0 {
        let (a, b) = (ln_q_function(lo), ln_q_function(hi));
        a + ln_one_minus_exp(b - a)
    } else if hi <= 0.0 {
        let (a, b) = (ln_q_function(-hi), ln_q_function(-lo));
        a + ln_one_minus_exp(b - a)
    } else {
        (1.0 - q_function(hi) - q_function(-lo)).ln()
    }
}

/// Standard normal cdf `Phi(y) = Q(-y)`.
#[inline]
pub fn normal_cdf(y: f64) -> f64 {
    q_function(-y)
}

/// Density of `N(0, sigma^2)` at `x`.
#[inline]
pub fn normal_pdf(x: f64, sigma: f64) -> f64 {
    let u = x / sigma;
    (-0.5 * u * u).exp() / (SQRT_2PI * sigma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipConfig {
    alpha1: f64,
    alpha2: f64,
    sigma_x: f64,
    i_l: f64,
}

impl ClipConfig {
    /// Configuration with LED minimum current `i_L = 0`.
    pub fn new(alpha1: f64, alpha2: f64, sigma_x: f64) -> Result<Self> {
        Self::with_led_min(alpha1, alpha2, sigma_x, 0.0)
    }

    pub fn with_led_min(alpha1: f64, alpha2: f64, sigma_x: f64, i_l: f64) -> Result<Self> {
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(ALPHA_MIN..=ALPHA_MAX).contains(&a) {
                return Err(invalid(format!(
                    "{name} = {a} outside operational range [{ALPHA_MIN}, {ALPHA_MAX}]"
                )));
            }
        }
        if !(sigma_x.is_finite() && sigma_x > 0.0) {
            return Err(invalid(format!("sigma_x must be finite and > 0 (got {sigma_x})")));
        }
        if !i_l.is_finite() {
            return Err(invalid("i_L must be finite"));
        }
        Ok(Self {
            alpha1,
            alpha2,
            sigma_x,
            i_l,
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn i_l(&self) -> f64 {
        self.i_l
    }

    /// Lower clipping bound magnitude `A1`.
    pub fn a1(&self) -> f64 {
        self.alpha1 * self.sigma_x
    }

    /// Upper clipping bound `A2`.
    pub fn a2(&self) -> f64 {
        self.alpha2 * self.sigma_x
    }

    pub fn i_bias(&self) -> f64 {
        self.a1() + self.i_l
    }

    pub fn i_h(&self) -> f64 {
        self.i_bias() + self.a2()
    }

    /// Clip one sample: `x <= -A1` and `x >= A2` go to the rails.
    #[inline]
    pub fn clip(&self, x: f64) -> f64 {
        let (a1, a2) = (self.a1(), self.a2());
        if x <= -a1 {
            -a1
        } else if x >= a2 {
            a2
        } else {
            x
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClippedFrame {
    pub samples: Vec<f64>,
    pub config: ClipConfig,
    pub clipped_low_count: usize,
    pub clipped_high_count: usize,
}

pub fn clip_frame(frame: &TimeFrame, cfg: &ClipConfig) -> ClippedFrame {
    let (a1, a2) = (cfg.a1(), cfg.a2());
    let samples: Vec<f64> = frame.samples.iter().map(|&x| cfg.clip(x)).collect();
    let clipped_low_count = samples.iter().filter(|&&x| x == -a1).count();
    let clipped_high_count = samples.iter().filter(|&&x| x == a2).count();
    ClippedFrame {
        samples,
        config: *cfg,
        clipped_low_count,
        clipped_high_count,
    }
}

/// LED drive signal `x_c + I_bias`, confined to `[i_L, i_H]`.
pub fn bias_frame(clipped: &ClippedFrame) -> Vec<f64> {
    let bias = clipped.config.i_bias();
    clipped.samples.iter().map(|&x| x + bias).collect()
}

/// Law of the clipped signal: point masses at both rails plus the
/// untouched Gaussian density on `(-A1, A2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedPdf {
    /// `(location, probability mass)` pairs.
    pub atoms: Vec<(f64, f64)>,
    /// Open interval carrying the continuous part.
    pub interval: (f64, f64),
    sigma: f64,
}

impl MixedPdf {
    /// Continuous density on `interval`, zero elsewhere.
    pub fn density(&self, x: f64) -> f64 {
        if x > self.interval.0 && x < self.interval.1 {
            normal_pdf(x, self.sigma)
        } else {
            0.0
        }
    }

    pub fn continuous_mass(&self) -> f64 {
        let (lo, hi) = self.interval;
        normal_cdf(hi / self.sigma) - normal_cdf(lo / self.sigma)
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.continuous_mass()
    }
}

pub fn clipped_signal_pdf(cfg: &ClipConfig) -> MixedPdf {
    MixedPdf {
        atoms: vec![
            (-cfg.a1(), q_function(cfg.alpha1())),
            (cfg.a2(), q_function(cfg.alpha2())),
        ],
        interval: (-cfg.a1(), cfg.a2()),
        sigma: cfg.sigma_x(),
    }
}
