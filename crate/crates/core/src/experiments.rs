//! Sweep harness: kurtosis of the clipped signal over clipping bounds,
//! Hellinger/KL scoring of the analytic noise density and of an ML
//! Gaussian fit against simulated noise, and per-bin density overlays.
//!
//! Every grid point draws from its own frame stream, seeded from the
//! sweep seed and the point's `(alpha1, alpha2)` bit patterns, so a point's
//! result does not depend on which other points are in the grid or on
//! their order. Within a point, frames are processed in fixed-size chunks
//! on the rayon pool and partial results are merged in chunk order.

use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use crate::bussgang::beta_analytic;
use crate::clipper::{clip_frame, ClipConfig, ALPHA_MAX, ALPHA_MIN};
use crate::error::{invalid, Error, Result};
use crate::noise_model::ClipNoisePdf;
use crate::rng::mix_seed;
use crate::signal_chain::{FrameSource, QamConstellation};
use crate::stats::{
    hellinger, hellinger_binned, kl_binned, kl_divergence, EmpiricalPdf, GaussianFit,
    HistogramBuilder, Moments,
};

/// Fewest simulated samples per point for Hellinger/KL runs.
pub const MIN_METRIC_SAMPLES: u64 = 100_000;

/// Frames per parallel work unit.
const CHUNK_FRAMES: u64 = 64;

/// Which `(alpha1, alpha2)` pairs a sweep visits.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// `alpha1 = alpha2` along one list.
    Diagonal(Vec<f64>),
    /// Cartesian product, `alpha1` outer.
    Product { alpha1: Vec<f64>, alpha2: Vec<f64> },
}

impl Grid {
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self {
            Grid::Diagonal(a) => a.iter().map(|&x| (x, x)).collect(),
            Grid::Product { alpha1, alpha2 } => alpha1
                .iter()
                .flat_map(|&a1| alpha2.iter().map(move |&a2| (a1, a2)))
                .collect(),
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            Grid::Diagonal(a) => a.clone(),
            Grid::Product { alpha1, alpha2 } => alpha1.iter().chain(alpha2).copied().collect(),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Grid::Diagonal(a) => a.is_empty(),
            Grid::Product { alpha1, alpha2 } => alpha1.is_empty() || alpha2.is_empty(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub grid: Grid,
    /// FFT size `N`.
    pub frame_len: usize,
    /// Frames simulated per grid point.
    pub frames: u64,
    pub qam_order: usize,
    pub seed: u64,
    pub bins: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            grid: Grid::Product {
                alpha1: (1..=10).map(|i| 0.5 * i as f64).collect(),
                alpha2: vec![2.0, 3.0],
            },
            frame_len: 1024,
            frames: 9766,
            qam_order: 16,
            seed: 1,
            bins: 200,
        }
    }
}

impl SweepSpec {
    /// Samples simulated at each grid point.
    pub fn samples_per_point(&self) -> u64 {
        self.frames * self.frame_len as u64
    }

    /// Frames needed to reach at least `samples` samples.
    pub fn frames_for_samples(samples: u64, frame_len: usize) -> u64 {
        samples.div_ceil(frame_len as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(invalid("alpha grid is empty"));
        }
        for a in self.grid.values() {
            if !(ALPHA_MIN..=ALPHA_MAX).contains(&a) {
                return Err(invalid(format!(
                    "alpha = {a} outside operational range [{ALPHA_MIN}, {ALPHA_MAX}]"
                )));
            }
        }
        if self.frames == 0 {
            return Err(invalid("frames must be >= 1"));
        }
        if self.bins == 0 {
            return Err(invalid("bins must be >= 1"));
        }
        QamConstellation::new(self.qam_order)?;
        FrameSource::new(self.frame_len, QamConstellation::new(self.qam_order)?, 0)?;
        Ok(())
    }

    fn validate_metric(&self) -> Result<()> {
        self.validate()?;
        if self.samples_per_point() < MIN_METRIC_SAMPLES {
            return Err(invalid(format!(
                "metric runs need >= {MIN_METRIC_SAMPLES} samples per point (got {})",
                self.samples_per_point()
            )));
        }
        Ok(())
    }

    fn source_for(&self, alpha1: f64, alpha2: f64) -> Result<FrameSource> {
        FrameSource::new(
            self.frame_len,
            QamConstellation::new(self.qam_order)?,
            point_seed(self.seed, alpha1, alpha2),
        )
    }
}

/// Seed of the frame stream for grid point `(alpha1, alpha2)`.
pub fn point_seed(seed: u64, alpha1: f64, alpha2: f64) -> u64 {
    mix_seed(mix_seed(seed, alpha1.to_bits()), alpha2.to_bits())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha1: f64,
    pub alpha2: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepMetadata {
    pub seed: u64,
    pub frame_len: usize,
    pub frames_per_point: u64,
    pub samples_per_point: u64,
    pub qam_order: usize,
    pub bins: usize,
    pub tool_version: &'static str,
    /// Seconds since the Unix epoch when the sweep finished.
    pub timestamp: u64,
}

impl SweepMetadata {
    pub fn for_spec(spec: &SweepSpec) -> Self {
        Self {
            seed: spec.seed,
            frame_len: spec.frame_len,
            frames_per_point: spec.frames,
            samples_per_point: spec.samples_per_point(),
            qam_order: spec.qam_order,
            bins: spec.bins,
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Names of the value columns after `alpha1, alpha2`.
    pub columns: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
    /// Per-row diagnostics (for example an undefined divergence).
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Hellinger,
    Kl,
}

impl Metric {
    fn columns(self) -> Vec<&'static str> {
        match self {
            Metric::Hellinger => vec!["h_g1", "h_g2"],
            Metric::Kl => vec!["kl_g1", "kl_g2"],
        }
    }
}

/// Run `per_frame` over frames `0..frames` in fixed chunks, merging in order.
fn fold_frames<T, F, M>(frames: u64, per_frame: F, mut merge: M) -> Result<Option<T>>
where
    T: Send,
    F: Fn(u64, Option<T>) -> Result<T> + Sync,
    M: FnMut(&mut T, T),
{
    let chunks = frames.div_ceil(CHUNK_FRAMES);
    let partials: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK_FRAMES).min(frames);
            let mut acc = None;
            for i in c * CHUNK_FRAMES..end {
                acc = Some(per_frame(i, acc)?);
            }
            acc.ok_or_else(|| Error::Consistency("empty frame chunk".into()))
        })
        .collect::<Result<_>>()?;
    let mut it = partials.into_iter();
    let Some(mut total) = it.next() else {
        return Ok(None);
    };
    for p in it {
        merge(&mut total, p);
    }
    Ok(Some(total))
}

/// Pooled moments of the clipped chain output at one point.
pub fn clipped_moments(spec: &SweepSpec, alpha1: f64, alpha2: f64) -> Result<Moments> {
    let source = spec.source_for(alpha1, alpha2)?;
    let cfg = ClipConfig::new(alpha1, alpha2, source.sigma_x())?;
    let m = fold_frames(
        spec.frames,
        |i, acc: Option<Moments>| {
            let frame = source.frame(i)?;
            let clipped = clip_frame(&frame, &cfg);
            let mut m = acc.unwrap_or_default();
            m.extend(&clipped.samples);
            Ok(m)
        },
        |a, b| a.merge(&b),
    )?;
    Ok(m.unwrap_or_default())
}

/// Kurtosis of the clipped signal at every grid point.
pub fn kurtosis_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let rows = spec
        .grid
        .points()
        .into_iter()
        .map(|(a1, a2)| {
            let k = clipped_moments(spec, a1, a2)?.kurtosis()?;
            Ok(SweepRow {
                alpha1: a1,
                alpha2: a2,
                values: vec![k],
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        columns: vec!["kurtosis"],
        rows,
        metadata: SweepMetadata::for_spec(spec),
        notes: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy)]
struct NoiseSummary {
    moments: Moments,
    min: f64,
    max: f64,
}

/// Simulated clipping noise at one point, summarized as the histogram
/// `q(z)` plus the two candidate models.
#[derive(Debug, Clone)]
pub struct NoiseComparison {
    pub config: ClipConfig,
    pub empirical: EmpiricalPdf,
    pub analytic: ClipNoisePdf,
    pub gauss_fit: GaussianFit,
}

impl NoiseComparison {
    fn ln_mass_g1(&self, lo: f64, hi: f64) -> f64 {
        self.analytic.interval_mass(lo, hi).ln()
    }

    fn ln_mass_g2(&self, lo: f64, hi: f64) -> f64 {
        self.gauss_fit.ln_interval_mass(lo, hi)
    }

    /// Hellinger distance of `q` to `(g1, g2)`, both binned on `q`'s grid.
    pub fn hellinger(&self) -> Result<(f64, f64)> {
        Ok((
            hellinger_binned(&self.empirical, |a, b| self.ln_mass_g1(a, b))?,
            hellinger_binned(&self.empirical, |a, b| self.ln_mass_g2(a, b))?,
        ))
    }

    /// `KL(q || g1)` and `KL(q || g2)`, both binned on `q`'s grid.
    pub fn kl(&self) -> (Result<f64>, Result<f64>) {
        (
            kl_binned(&self.empirical, |a, b| self.ln_mass_g1(a, b)),
            kl_binned(&self.empirical, |a, b| self.ln_mass_g2(a, b)),
        )
    }

    /// Midpoint-rule Hellinger distances (model densities at bin centers).
    pub fn hellinger_midpoint(&self) -> Result<(f64, f64)> {
        Ok((
            hellinger(&self.empirical, |z| self.analytic.pdf(z))?,
            hellinger(&self.empirical, |z| self.gauss_fit.pdf(z))?,
        ))
    }

    /// Midpoint-rule KL divergences (model densities at bin centers).
    pub fn kl_midpoint(&self) -> (Result<f64>, Result<f64>) {
        (
            kl_divergence(&self.empirical, |z| self.analytic.pdf(z)),
            kl_divergence(&self.empirical, |z| self.gauss_fit.pdf(z)),
        )
    }

    /// Bin-averaged `(g1, g2)` densities for bin `b` of `q`.
    pub fn binned_models(&self, b: usize) -> (f64, f64) {
        let w = self.empirical.width();
        let lo = self.empirical.lo() + w * b as f64;
        (
            self.analytic.interval_mass(lo, lo + w) / w,
            self.ln_mass_g2(lo, lo + w).exp() / w,
        )
    }
}

/// Simulate the full chain at one point and build `q(z)`, `g1`, `g2`.
///
/// Noise is `z = x_c - beta x` with the closed-form `beta`. The frames are
/// generated twice: once for the sample extent and ML moments, once to
/// fill the histogram over that extent.
pub fn compare_noise(spec: &SweepSpec, alpha1: f64, alpha2: f64) -> Result<NoiseComparison> {
    let source = spec.source_for(alpha1, alpha2)?;
    let cfg = ClipConfig::new(alpha1, alpha2, source.sigma_x())?;
    let beta = beta_analytic(&cfg);
    let noise = |i: u64| -> Result<Vec<f64>> {
        let frame = source.frame(i)?;
        Ok(frame
            .samples
            .iter()
            .map(|&x| cfg.clip(x) - beta * x)
            .collect())
    };

    let summary = fold_frames(
        spec.frames,
        |i, acc: Option<NoiseSummary>| {
            let z = noise(i)?;
            let mut s = acc.unwrap_or(NoiseSummary {
                moments: Moments::new(),
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            });
            s.moments.extend(&z);
            for &v in &z {
                s.min = s.min.min(v);
                s.max = s.max.max(v);
            }
            Ok(s)
        },
        |a, b| {
            a.moments.merge(&b.moments);
            a.min = a.min.min(b.min);
            a.max = a.max.max(b.max);
        },
    )?
    .ok_or_else(|| invalid("no frames simulated"))?;

    let template = HistogramBuilder::new(summary.min, summary.max, spec.bins)?;
    let hist = fold_frames(
        spec.frames,
        |i, acc: Option<HistogramBuilder>| {
            let mut h = acc.unwrap_or_else(|| template.clone());
            noise(i)?.iter().for_each(|&v| h.push(v));
            Ok(h)
        },
        |a, b| a.merge(&b),
    )?
    .ok_or_else(|| invalid("no frames simulated"))?;

    Ok(NoiseComparison {
        config: cfg,
        empirical: hist.finish()?,
        analytic: ClipNoisePdf::with_beta(&cfg, beta)?,
        gauss_fit: GaussianFit::from_moments(&summary.moments)?,
    })
}

/// Hellinger or KL distance of `q(z)` to the analytic density (`g1`) and
/// to the ML Gaussian (`g2`) at every grid point.
///
/// A KL value that is undefined (model density zero on a populated bin) is
/// reported as NaN and described in `notes`.
pub fn distance_sweep(spec: &SweepSpec, metric: Metric) -> Result<SweepResult> {
    spec.validate_metric()?;
    let mut notes = Vec::new();
    let mut rows = Vec::new();
    for (a1, a2) in spec.grid.points() {
        let cmp = compare_noise(spec, a1, a2)?;
        let values = match metric {
            Metric::Hellinger => {
                let (h1, h2) = cmp.hellinger()?;
                vec![h1, h2]
            }
            Metric::Kl => {
                let (d1, d2) = cmp.kl();
                [("g1", d1), ("g2", d2)]
                    .into_iter()
                    .map(|(name, d)| match d {
                        Ok(v) => Ok(v),
                        Err(e @ Error::DivergenceUndefined { .. }) => {
                            notes.push(format!("alpha1={a1} alpha2={a2} kl_{name}: {e}"));
                            Ok(f64::NAN)
                        }
                        Err(e) => Err(e),
                    })
                    .collect::<Result<_>>()?
            }
        };
        rows.push(SweepRow {
            alpha1: a1,
            alpha2: a2,
            values,
        });
    }
    Ok(SweepResult {
        columns: metric.columns(),
        rows,
        metadata: SweepMetadata::for_spec(spec),
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlayRow {
    pub z: f64,
    pub q_empirical: f64,
    pub g1_analytic: f64,
    pub g2_gaussfit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdfOverlay {
    pub alpha1: f64,
    pub alpha2: f64,
    pub bin_width: f64,
    pub rows: Vec<OverlayRow>,
    pub metadata: SweepMetadata,
}

/// Empirical and candidate densities for every histogram bin, keyed by
/// bin center. Model columns are bin averages (model bin mass / width), the
/// same quantity the distance sweeps compare against `q`.
pub fn pdf_overlay(alpha1: f64, alpha2: f64, spec: &SweepSpec) -> Result<PdfOverlay> {
    let point_spec = SweepSpec {
        grid: Grid::Product {
            alpha1: vec![alpha1],
            alpha2: vec![alpha2],
        },
        ..spec.clone()
    };
    point_spec.validate_metric()?;
    let cmp = compare_noise(&point_spec, alpha1, alpha2)?;
    let q = &cmp.empirical;
    let rows = q
        .densities()
        .iter()
        .enumerate()
        .map(|(b, &qz)| {
            let (g1, g2) = cmp.binned_models(b);
            OverlayRow {
                z: q.center(b),
                q_empirical: qz,
                g1_analytic: g1,
                g2_gaussfit: g2,
            }
        })
        .collect();
    Ok(PdfOverlay {
        alpha1,
        alpha2,
        bin_width: q.width(),
        rows,
        metadata: SweepMetadata::for_spec(&point_spec),
    })
}

/// Closed-form and chain-estimated attenuation factor at one point.
pub fn beta_comparison(spec: &SweepSpec, alpha1: f64, alpha2: f64) -> Result<(f64, f64)> {
    spec.validate()?;
    let source = spec.source_for(alpha1, alpha2)?;
    let cfg = ClipConfig::new(alpha1, alpha2, source.sigma_x())?;
    let (num, den) = fold_frames(
        spec.frames,
        |i, acc: Option<(f64, f64)>| {
            let frame = source.frame(i)?;
            let (mut num, mut den) = acc.unwrap_or((0.0, 0.0));
            for &x in &frame.samples {
                num += cfg.clip(x) * x;
                den += x * x;
            }
            Ok((num, den))
        },
        |a, b| {
            a.0 += b.0;
            a.1 += b.1;
        },
    )?
    .unwrap_or((0.0, 0.0));
    if den <= 0.0 {
        return Err(Error::Degenerate("chain produced an all-zero input".into()));
    }
    Ok((beta_analytic(&cfg), num / den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec(grid: Grid) -> SweepSpec {
        SweepSpec {
            grid,
            frame_len: 256,
            frames: 400,
            qam_order: 16,
            seed: 3,
            bins: 100,
        }
    }

    #[test]
    fn grid_points() {
        let g = Grid::Product {
            alpha1: vec![1.0, 2.0, 3.0],
            alpha2: vec![2.0, 3.0],
        };
        assert_eq!(g.points().len(), 6);
        assert_eq!(g.points()[1], (1.0, 3.0));
        assert_eq!(Grid::Diagonal(vec![0.5, 1.0]).points(), vec![(0.5, 0.5), (1.0, 1.0)]);
    }

    #[test]
    fn validation() {
        let mut s = small_spec(Grid::Diagonal(vec![7.0]));
        assert!(s.validate().is_err());
        s.grid = Grid::Diagonal(vec![]);
        assert!(s.validate().is_err());
        s.grid = Grid::Diagonal(vec![1.0]);
        s.frame_len = 100;
        assert!(s.validate().is_err());
        s.frame_len = 256;
        s.frames = 10;
        assert!(s.validate().is_ok());
        assert!(distance_sweep(&s, Metric::Kl).is_err());
    }

    #[test]
    fn kurtosis_rows_and_trend() {
        let spec = small_spec(Grid::Diagonal(vec![1.0, 4.0]));
        let r = kurtosis_sweep(&spec).unwrap();
        assert_eq!(r.rows.len(), 2);
        let (k1, k4) = (r.rows[0].values[0], r.rows[1].values[0]);
        assert!((k4 - 3.0).abs() < (k1 - 3.0).abs());
    }

    #[test]
    fn point_results_independent_of_grid_order() {
        let a = kurtosis_sweep(&small_spec(Grid::Diagonal(vec![1.0, 2.0]))).unwrap();
        let b = kurtosis_sweep(&small_spec(Grid::Diagonal(vec![2.0, 1.0]))).unwrap();
        assert_eq!(a.rows[0], b.rows[1]);
        assert_eq!(a.rows[1], b.rows[0]);
    }

    #[test]
    fn distance_sweep_is_deterministic_and_bounded() {
        let spec = small_spec(Grid::Product {
            alpha1: vec![1.0],
            alpha2: vec![2.0],
        });
        let a = distance_sweep(&spec, Metric::Hellinger).unwrap();
        let b = distance_sweep(&spec, Metric::Hellinger).unwrap();
        assert_eq!(a.rows, b.rows);
        for v in &a.rows[0].values {
            assert!((0.0..=1.0).contains(v));
        }
        let k = distance_sweep(&spec, Metric::Kl).unwrap();
        assert!(k.rows[0].values.iter().all(|&v| v >= -1e-9));
        assert!(k.notes.is_empty());
    }

    #[test]
    fn overlay_mass_and_columns() {
        let spec = small_spec(Grid::Diagonal(vec![1.0]));
        let o = pdf_overlay(1.0, 1.0, &spec).unwrap();
        assert_eq!(o.rows.len(), 100);
        let mass: f64 = o.rows.iter().map(|r| r.q_empirical).sum::<f64>() * o.bin_width;
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beta_estimates_agree() {
        let spec = small_spec(Grid::Diagonal(vec![1.0]));
        let (a, e) = beta_comparison(&spec, 1.0, 1.0).unwrap();
        assert!((a - e).abs() < 0.005);
    }
}
