//! Numerical bench for the variational geometry behind the estimator:
//! projections onto intersections of convex sets, localized suprema of
//! linear functionals over cone slices, and checks of the deterministic
//! identities those objects satisfy (argmax location of the sliced
//! objective, statistical dimension, Lipschitz continuity, concavity).

mod checks;
mod dykstra;
mod sup;

pub use checks::{
    concavity_check, lipschitz_check, slicing_check, statistical_dimension_mc, SlicingReport,
    StatDimReport,
};
pub use dykstra::dykstra_project;
pub use sup::{
    localized_sup, localized_sup_with, width_estimate, width_estimate_with, Region, SupParams,
    WidthEstimate,
};

use crate::error::Error;
use crate::isotonic::Direction;

/// A convex set with an exact projection routine, used as a building block
/// for Dykstra's algorithm.
#[derive(Debug, Clone)]
pub enum ConvexSet {
    /// Order constraint on the coordinates in `start..end` only; all other
    /// coordinates are unconstrained.
    MonotoneCone {
        direction: Direction,
        start: usize,
        end: usize,
    },
    /// Euclidean ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// Sequences that rise through the 1-based position `mode` and fall
    /// after it, including the coupling between positions mode and mode+1.
    ModeCone { mode: usize },
}

impl ConvexSet {
    pub fn monotone_cone(direction: Direction, range: std::ops::Range<usize>) -> Self {
        ConvexSet::MonotoneCone {
            direction,
            start: range.start,
            end: range.end,
        }
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Self {
        ConvexSet::Ball { center, radius }
    }

    pub fn mode_cone(mode: usize) -> Self {
        ConvexSet::ModeCone { mode }
    }

    fn validate(&self, n: usize) -> Result<(), Error> {
        match self {
            ConvexSet::MonotoneCone { start, end, .. } => {
                if start > end || *end > n {
                    return Err(Error::invalid(format!(
                        "cone range {start}..{end} out of bounds for length {n}"
                    )));
                }
            }
            ConvexSet::Ball { center, radius } => {
                if center.len() != n {
                    return Err(Error::invalid(format!(
                        "ball center has length {}, expected {n}",
                        center.len()
                    )));
                }
                if !radius.is_finite() || *radius < 0.0 {
                    return Err(Error::invalid(format!("ball radius {radius} invalid")));
                }
            }
            ConvexSet::ModeCone { mode } => {
                if *mode < 1 || *mode > n {
                    return Err(Error::invalid(format!("mode {mode} out of range 1..={n}")));
                }
            }
        }
        Ok(())
    }
}
