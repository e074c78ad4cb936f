//! Monte Carlo laboratory for risk behavior of the unimodal least-squares
//! fit: signal and noise generation, repeated-fit risk estimation,
//! closed-form bound evaluation, the segmentation oracle, and scaling-slope
//! analysis.

mod bounds;
mod experiment;
mod noise;
mod segment;
mod signal;

pub use bounds::{thm1_dominant_term, thm1_rhs, thm2_rhs};
pub use experiment::{
    log_log_slope, run_experiment, scaling_slope, ExperimentConfig, RiskReport, RiskRow, SlopeFit,
};
pub use noise::{generate_noise, NoiseSpec};
pub use segment::{min_segment_errors, oracle_rhs, oracle_rhs_unimodal};
pub use signal::{generate_signal, GeneratedSignal, SignalSpec};
