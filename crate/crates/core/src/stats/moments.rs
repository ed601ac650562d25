use crate::clipper::{ln_normal_interval, normal_pdf};
use crate::error::{Error, Result};

/// Streaming central moments up to fourth order.
///
/// Partial accumulators can be merged; merging in a fixed order gives
/// bit-identical results regardless of how the data was partitioned
/// across threads, provided the partitions themselves are fixed.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_slice(samples: &[f64]) -> Self {
        let mut m = Self::new();
        m.extend(samples);
        m
    }

    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    pub fn extend(&mut self, samples: &[f64]) {
        for &x in samples {
            self.push(x);
        }
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        let d2 = delta * delta;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + d2 * delta * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;
        self.n += other.n;
        self.mean += delta * nb / n;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Plug-in (divisor `n`) variance.
    pub fn variance(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.m2 / self.n as f64
        }
    }

    /// Plug-in kurtosis `m4 / m2^2` (3 for Gaussian data, no excess offset).
    pub fn kurtosis(&self) -> Result<f64> {
        if self.n < 4 {
            return Err(Error::InvalidInput(format!(
                "kurtosis needs at least 4 samples (got {})",
                self.n
            )));
        }
        if self.m2 <= 0.0 {
            return Err(Error::Degenerate("kurtosis of zero-variance data".into()));
        }
        Ok(self.n as f64 * self.m4 / (self.m2 * self.m2))
    }
}

/// Kurtosis `E{(x - mean)^4} / (E{(x - mean)^2})^2` with plug-in moments.
pub fn kurtosis(samples: &[f64]) -> Result<f64> {
    if samples.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "kurtosis needs at least 4 samples (got {})",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (mut s2, mut s4) = (0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        s2 += d2;
        s4 += d2 * d2;
    }
    if s2 <= 0.0 {
        return Err(Error::Degenerate("kurtosis of zero-variance data".into()));
    }
    Ok(n * s4 / (s2 * s2))
}

/// Maximum-likelihood Gaussian: sample mean and divisor-`n` deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub mu_ez: f64,
    pub sigma_ez: f64,
}

impl GaussianFit {
    pub fn from_moments(m: &Moments) -> Result<Self> {
        if m.count() < 2 {
            return Err(Error::InvalidInput(format!(
                "Gaussian fit needs at least 2 samples (got {})",
                m.count()
            )));
        }
        let var = m.variance();
        if var <= 0.0 {
            return Err(Error::Degenerate("Gaussian fit of zero-variance data".into()));
        }
        Ok(Self {
            mu_ez: m.mean(),
            sigma_ez: var.sqrt(),
        })
    }

    pub fn pdf(&self, z: f64) -> f64 {
        normal_pdf(z - self.mu_ez, self.sigma_ez)
    }

    /// `ln P(lo <= Z < hi)` under the fitted Gaussian.
    pub fn ln_interval_mass(&self, lo: f64, hi: f64) -> f64 {
        ln_normal_interval(
            (lo - self.mu_ez) / self.sigma_ez,
            (hi - self.mu_ez) / self.sigma_ez,
        )
    }
}

pub fn fit_gaussian_ml(samples: &[f64]) -> Result<GaussianFit> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "Gaussian fit needs at least 2 samples (got {})",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mu = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / n;
    if var <= 0.0 {
        return Err(Error::Degenerate("Gaussian fit of zero-variance data".into()));
    }
    Ok(GaussianFit {
        mu_ez: mu,
        sigma_ez: var.sqrt(),
    })
}
