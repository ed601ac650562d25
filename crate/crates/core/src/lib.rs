//! Simulation and closed-form statistics of double-sided clipping noise in
//! DC-biased optical OFDM (DCO-OFDM) transmitters.
//!
//! The crate covers the full path from random bits to the LED drive
//! signal, the Bussgang decomposition of the clipper, the exact piecewise
//! density of the clipping noise, and the Monte Carlo harness that scores
//! that density (and a fitted Gaussian) against simulated noise.
//!
//! ```
//! use clipnoise::clipper::ClipConfig;
//! use clipnoise::noise_model::ClipNoisePdf;
//!
//! let cfg = ClipConfig::new(1.0, 1.0, 1.0).unwrap();
//! let model = ClipNoisePdf::new(&cfg).unwrap();
//! assert!((model.beta() - 0.682_689).abs() < 1e-6);
//! assert!((model.cdf(0.0) - 0.5).abs() < 1e-12);
//! ```

pub mod bussgang;
pub mod cli;
pub mod clipper;
pub mod error;
pub mod experiments;
pub mod noise_model;
pub mod rng;
pub mod signal_chain;
pub mod stats;

pub use error::{Error, Result};
