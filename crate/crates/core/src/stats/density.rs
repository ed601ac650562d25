//! Histogram density estimates and the distances used to score a model
//! density against them.
//!
//! Two discretizations are provided. [`hellinger`] and [`kl_divergence`]
//! use the midpoint rule: the model density is evaluated at bin centers.
//! [`hellinger_binned`] and [`kl_binned`] instead use the model's exact
//! probability of each bin, `g_b = P(bin) / width`, which is the quantity a
//! histogram actually estimates; they stay unbiased when the model density
//! jumps inside a bin or varies on a scale finer than the bin width.

use crate::error::{invalid, Error, Result};

/// Fewest samples accepted when building a histogram.
pub const MIN_HISTOGRAM_SAMPLES: u64 = 100;

/// How the histogram support is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RangePolicy {
    /// `[min, max]` of the data.
    SampleExtent,
    /// Caller-supplied `[lo, hi]`; samples outside are dropped.
    Fixed(f64, f64),
}

/// Uniform-bin density estimate; densities are `count / (n * width)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPdf {
    lo: f64,
    width: f64,
    densities: Vec<f64>,
    n: u64,
}

impl EmpiricalPdf {
    pub fn from_samples(samples: &[f64], bins: usize, range: RangePolicy) -> Result<Self> {
        if (samples.len() as u64) < MIN_HISTOGRAM_SAMPLES {
            return Err(invalid(format!(
                "histogram needs at least {MIN_HISTOGRAM_SAMPLES} samples (got {})",
                samples.len()
            )));
        }
        let (lo, hi) = match range {
            RangePolicy::SampleExtent => samples
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                    (lo.min(x), hi.max(x))
                }),
            RangePolicy::Fixed(lo, hi) => (lo, hi),
        };
        let mut h = HistogramBuilder::new(lo, hi, bins)?;
        samples.iter().for_each(|&x| h.push(x));
        h.finish()
    }

    /// Build from raw bin counts over `[lo, hi]`.
    pub fn from_counts(lo: f64, hi: f64, counts: &[u64]) -> Result<Self> {
        check_grid(lo, hi, counts.len())?;
        let n: u64 = counts.iter().sum();
        if n < MIN_HISTOGRAM_SAMPLES {
            return Err(invalid(format!(
                "histogram needs at least {MIN_HISTOGRAM_SAMPLES} samples in range (got {n})"
            )));
        }
        let width = (hi - lo) / counts.len() as f64;
        let scale = 1.0 / (n as f64 * width);
        Ok(Self {
            lo,
            width,
            densities: counts.iter().map(|&c| c as f64 * scale).collect(),
            n,
        })
    }

    /// Tabulate a density at bin centers, renormalized to unit mass.
    pub fn tabulate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, bins: usize) -> Result<Self> {
        check_grid(lo, hi, bins)?;
        let width = (hi - lo) / bins as f64;
        let mut densities: Vec<f64> = (0..bins)
            .map(|b| f(lo + (b as f64 + 0.5) * width))
            .collect();
        if densities.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(invalid("tabulated density must be finite and non-negative"));
        }
        let mass: f64 = densities.iter().sum::<f64>() * width;
        if mass <= 0.0 {
            return Err(Error::Degenerate("tabulated density has zero mass".into()));
        }
        densities.iter_mut().for_each(|d| *d /= mass);
        Ok(Self {
            lo,
            width,
            densities,
            n: 0,
        })
    }

    pub fn bins(&self) -> usize {
        self.densities.len()
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.lo + self.width * self.bins() as f64
    }

    /// Samples behind the estimate (0 for tabulated densities).
    pub fn sample_count(&self) -> u64 {
        self.n
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.bins())
            .map(|i| self.lo + self.width * i as f64)
            .collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.bins()).map(|b| self.center(b)).collect()
    }

    #[inline]
    pub fn center(&self, b: usize) -> f64 {
        self.lo + (b as f64 + 0.5) * self.width
    }

    pub fn mass(&self) -> f64 {
        self.densities.iter().sum::<f64>() * self.width
    }

    /// Piecewise-constant density; zero outside `[lo, hi)`.
    pub fn density_at(&self, z: f64) -> f64 {
        let t = (z - self.lo) / self.width;
        if t < 0.0 || t >= self.bins() as f64 {
            0.0
        } else {
            self.densities[t as usize]
        }
    }
}

fn check_grid(lo: f64, hi: f64, bins: usize) -> Result<()> {
    if bins == 0 {
        return Err(invalid("histogram needs at least one bin"));
    }
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(invalid(format!("histogram range [{lo}, {hi}] is empty or not finite")));
    }
    Ok(())
}

/// Incremental bin counter; the last bin is closed so `hi` itself is counted.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBuilder {
    lo: f64,
    hi: f64,
    inv_width: f64,
    counts: Vec<u64>,
    dropped: u64,
}

impl HistogramBuilder {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        check_grid(lo, hi, bins)?;
        Ok(Self {
            lo,
            hi,
            inv_width: bins as f64 / (hi - lo),
            counts: vec![0; bins],
            dropped: 0,
        })
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        if !(x >= self.lo && x <= self.hi) {
            self.dropped += 1;
            return;
        }
        let b = (((x - self.lo) * self.inv_width) as usize).min(self.counts.len() - 1);
        self.counts[b] += 1;
    }

    pub fn merge(&mut self, other: &HistogramBuilder) {
        debug_assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.dropped += other.dropped;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Samples that fell outside `[lo, hi]`.
    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    pub fn finish(&self) -> Result<EmpiricalPdf> {
        EmpiricalPdf::from_counts(self.lo, self.hi, &self.counts)
    }
}

fn model_value<G: Fn(f64) -> f64>(g: &G, z: f64) -> Result<f64> {
    let v = g(z);
    if v.is_nan() || v < 0.0 {
        return Err(invalid(format!("model density is negative or NaN at z = {z} ({v})")));
    }
    Ok(v)
}

/// Hellinger distance `sqrt(1 - sum_b sqrt(q_b g(c_b)) w)`, clamped to `[0, 1]`.
pub fn hellinger<G: Fn(f64) -> f64>(q: &EmpiricalPdf, g: G) -> Result<f64> {
    let mut affinity = 0.0;
    for (b, &qb) in q.densities().iter().enumerate() {
        let gb = model_value(&g, q.center(b))?;
        affinity += (qb * gb).sqrt();
    }
    affinity *= q.width();
    Ok((1.0 - affinity).clamp(0.0, 1.0).sqrt())
}

/// KL divergence `sum_{q_b > 0} q_b ln(q_b / g(c_b)) w`.
pub fn kl_divergence<G: Fn(f64) -> f64>(q: &EmpiricalPdf, g: G) -> Result<f64> {
    let mut d = 0.0;
    for (b, &qb) in q.densities().iter().enumerate() {
        if qb == 0.0 {
            continue;
        }
        let z = q.center(b);
        let gb = model_value(&g, z)?;
        if gb == 0.0 {
            return Err(Error::DivergenceUndefined { z, q: qb });
        }
        d += qb * (qb / gb).ln();
    }
    Ok(d * q.width())
}

/// Bin-averaged model density from a log bin mass; `-inf` maps to zero.
#[inline]
fn binned_ln_density<M: Fn(f64, f64) -> f64>(q: &EmpiricalPdf, ln_mass: &M, b: usize) -> Result<f64> {
    let lo = q.lo() + q.width() * b as f64;
    let lm = ln_mass(lo, lo + q.width());
    if lm.is_nan() || lm > 1e-12 {
        return Err(invalid(format!(
            "model log bin mass {lm} on [{lo}, {}] is not a log-probability",
            lo + q.width()
        )));
    }
    Ok(lm - q.width().ln())
}

/// Hellinger distance against the model's per-bin mass.
///
/// `ln_mass(lo, hi)` returns `ln P(lo <= Z < hi)` under the model.
pub fn hellinger_binned<M: Fn(f64, f64) -> f64>(q: &EmpiricalPdf, ln_mass: M) -> Result<f64> {
    let mut affinity = 0.0;
    for (b, &qb) in q.densities().iter().enumerate() {
        let ln_g = binned_ln_density(q, &ln_mass, b)?;
        if qb > 0.0 {
            affinity += (0.5 * (qb.ln() + ln_g)).exp();
        }
    }
    affinity *= q.width();
    Ok((1.0 - affinity).clamp(0.0, 1.0).sqrt())
}

/// KL divergence `sum_b q_b ln(q_b / g_b) w` with `g_b` the model's
/// bin-averaged density, evaluated in the log domain.
pub fn kl_binned<M: Fn(f64, f64) -> f64>(q: &EmpiricalPdf, ln_mass: M) -> Result<f64> {
    let mut d = 0.0;
    for (b, &qb) in q.densities().iter().enumerate() {
        if qb == 0.0 {
            continue;
        }
        let ln_g = binned_ln_density(q, &ln_mass, b)?;
        if ln_g == f64::NEG_INFINITY {
            return Err(Error::DivergenceUndefined { z: q.center(b), q: qb });
        }
        d += qb * (qb.ln() - ln_g);
    }
    Ok(d * q.width())
}

/// Kolmogorov-Smirnov statistic `sup |F_n - F|` of `samples` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .fold(0.0f64, |d, (i, &x)| {
            let f = cdf(x);
            d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
}
