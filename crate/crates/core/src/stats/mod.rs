//! Statistical toolkit: moments and kurtosis, ML Gaussian fitting,
//! histogram densities, Hellinger and KL distances, KS statistic, and
//! quadrature.

mod density;
mod moments;
pub mod quadrature;

pub use density::{
    hellinger, hellinger_binned, kl_binned, kl_divergence, ks_statistic, EmpiricalPdf, HistogramBuilder, RangePolicy,
    MIN_HISTOGRAM_SAMPLES,
};
pub use moments::{fit_gaussian_ml, kurtosis, GaussianFit, Moments};
