//! Closed-form law of the clipping noise `z = g(x)`, `x ~ N(0, sigma^2)`.
//!
//! `g` has slope `-beta` on both rails and `1 - beta` between them, so
//! every `z` has up to three preimages. Summing the Gaussian density over
//! them gives a piecewise density with knots at `-(1 - beta) A1` and
//! `(1 - beta) A2`:
//!
//! ```text
//! z <= -(1-b)A1          : f((A2 - z)/b) / b
//! -(1-b)A1 < z < (1-b)A2 : f(z/(1-b)) / (1-b) + f((-A1 - z)/b) / b + f((A2 - z)/b) / b
//! z >= (1-b)A2           : f((-A1 - z)/b) / b
//! ```
//!
//! Exactly at a knot the one-sided tail branch is used.

use crate::bussgang::{beta_analytic, noise_map};
use crate::clipper::{normal_pdf, q_function, ClipConfig};
use crate::error::{invalid, Result};
use crate::rng::SplitMix64;
use crate::stats::quadrature::trapezoid_piecewise;

/// Smallest accepted `1 - beta`; below this the middle branch is a spike
/// narrower than floating point can resolve.
pub const MIN_ONE_MINUS_BETA: f64 = 1e-12;

/// Panels per smooth segment when integrating the density numerically.
pub const NORMALIZATION_PANELS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipNoisePdf {
    beta: f64,
    config: ClipConfig,
}

impl ClipNoisePdf {
    /// Model with the closed-form attenuation factor.
    pub fn new(cfg: &ClipConfig) -> Result<Self> {
        Self::with_beta(cfg, beta_analytic(cfg))
    }

    pub fn with_beta(cfg: &ClipConfig, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(invalid(format!("beta = {beta} must lie in (0, 1)")));
        }
        if 1.0 - beta < MIN_ONE_MINUS_BETA {
            return Err(invalid(format!(
                "1 - beta = {:e} is below {MIN_ONE_MINUS_BETA:e}; middle branch is degenerate",
                1.0 - beta
            )));
        }
        Ok(Self { beta, config: *cfg })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn config(&self) -> &ClipConfig {
        &self.config
    }

    pub fn sigma_x(&self) -> f64 {
        self.config.sigma_x()
    }

    /// Lower knot `-(1 - beta) A1`.
    pub fn lower_knot(&self) -> f64 {
        -(1.0 - self.beta) * self.config.a1()
    }

    /// Upper knot `(1 - beta) A2`.
    pub fn upper_knot(&self) -> f64 {
        (1.0 - self.beta) * self.config.a2()
    }

    /// Window `[-A1 - 10 beta sigma, A2 + 10 beta sigma]` holding all but a
    /// negligible fraction of the mass.
    pub fn support_window(&self) -> (f64, f64) {
        let pad = 10.0 * self.beta * self.sigma_x();
        (-self.config.a1() - pad, self.config.a2() + pad)
    }

    /// Probability of the middle region, `Phi(alpha2) - Phi(-alpha1)`.
    pub fn middle_mass(&self) -> f64 {
        1.0 - q_function(self.config.alpha1()) - q_function(self.config.alpha2())
    }

    #[inline]
    fn fx(&self, x: f64) -> f64 {
        normal_pdf(x, self.sigma_x())
    }

    /// Contribution of samples clipped at the lower rail (valid for `z >= lower knot`).
    #[inline]
    fn low_rail_term(&self, z: f64) -> f64 {
        self.fx((-self.config.a1() - z) / self.beta) / self.beta
    }

    /// Contribution of samples clipped at the upper rail (valid for `z <= upper knot`).
    #[inline]
    fn high_rail_term(&self, z: f64) -> f64 {
        self.fx((self.config.a2() - z) / self.beta) / self.beta
    }

    pub fn pdf(&self, z: f64) -> f64 {
        if z >= self.upper_knot() {
            self.low_rail_term(z)
        } else if z <= self.lower_knot() {
            self.high_rail_term(z)
        } else {
            let gain = 1.0 - self.beta;
            self.fx(z / gain) / gain + self.low_rail_term(z) + self.high_rail_term(z)
        }
    }

    /// `P(z < gamma)`.
    pub fn cdf(&self, gamma: f64) -> f64 {
        let (a1, a2) = (self.config.a1(), self.config.a2());
        let s = self.sigma_x();
        let bs = self.beta * s;
        let high_rail = q_function((a2 - gamma) / bs);
        if gamma >= self.upper_knot() {
            q_function((-a1 - gamma) / bs)
        } else if gamma <= self.lower_knot() {
            high_rail
        } else {
            let upper = gamma / ((1.0 - self.beta) * s);
            let lower = (-a1 - gamma) / bs;
            // Phi(upper) - Phi(lower), written with Q to keep tail accuracy.
            let inner = (q_function(lower) - q_function(upper)).max(0.0);
            inner + high_rail
        }
    }

    /// `P(z >= gamma)`, evaluated without cancellation in the upper tail.
    pub fn sf(&self, gamma: f64) -> f64 {
        if gamma >= self.upper_knot() {
            let bs = self.beta * self.sigma_x();
            q_function((self.config.a1() + gamma) / bs)
        } else {
            1.0 - self.cdf(gamma)
        }
    }

    /// `P(lo <= z < hi)`.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let p = if lo >= 0.0 {
            self.sf(lo) - self.sf(hi)
        } else {
            self.cdf(hi) - self.cdf(lo)
        };
        p.max(0.0)
    }

    /// Numerical integral of [`pdf`](Self::pdf) over the support window,
    /// with the knots as segment boundaries.
    pub fn total_mass(&self) -> f64 {
        let (lo, hi) = self.support_window();
        trapezoid_piecewise(
            |z| self.pdf(z),
            &[lo, self.lower_knot(), self.upper_knot(), hi],
            NORMALIZATION_PANELS,
        )
    }

    /// Exact draws: Gaussian inputs pushed through the noise map.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut rng = SplitMix64::new(seed);
        let s = self.sigma_x();
        (0..count)
            .map(|_| noise_map(s * rng.next_normal(), &self.config, self.beta))
            .collect()
    }
}

pub fn sample_noise(model: &ClipNoisePdf, count: usize, seed: u64) -> Vec<f64> {
    model.sample(count, seed)
}
