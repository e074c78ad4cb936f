//! Dykstra's alternating-projection scheme with per-set correction terms.

use super::ConvexSet;
use crate::error::{check_sequence, Error};
use crate::isotonic::{project_in_place, Direction, PavaBlockStack};
use crate::util::dist;

/// A set with a direct projector. Mode cones decompose into their two
/// monotone halves, which share the coupled coordinate at the peak.
#[derive(Debug, Clone)]
pub(super) enum Primitive<'a> {
    Cone {
        direction: Direction,
        start: usize,
        end: usize,
    },
    Ball {
        center: &'a [f64],
        radius: f64,
    },
}

impl Primitive<'_> {
    pub(super) fn project(&self, x: &mut [f64], stack: &mut PavaBlockStack) {
        match *self {
            Primitive::Cone {
                direction,
                start,
                end,
            } => project_in_place(stack, &mut x[start..end], direction),
            Primitive::Ball { center, radius } => {
                let d = dist(x, center);
                if d > radius {
                    let scale = radius / d;
                    for (xi, &ci) in x.iter_mut().zip(center) {
                        *xi = ci + (*xi - ci) * scale;
                    }
                }
            }
        }
    }
}

pub(super) fn expand_sets<'a>(
    sets: &'a [ConvexSet],
    n: usize,
) -> Result<Vec<Primitive<'a>>, Error> {
    let mut primitives = Vec::with_capacity(sets.len() + 1);
    for set in sets {
        set.validate(n)?;
        match set {
            ConvexSet::MonotoneCone {
                direction,
                start,
                end,
            } => primitives.push(Primitive::Cone {
                direction: *direction,
                start: *start,
                end: *end,
            }),
            ConvexSet::Ball { center, radius } => primitives.push(Primitive::Ball {
                center,
                radius: *radius,
            }),
            ConvexSet::ModeCone { mode } => {
                primitives.push(Primitive::Cone {
                    direction: Direction::Nondecreasing,
                    start: 0,
                    end: *mode,
                });
                primitives.push(Primitive::Cone {
                    direction: Direction::Nonincreasing,
                    start: mode - 1,
                    end: n,
                });
            }
        }
    }
    Ok(primitives)
}

/// Largest distance from `x` to any of the sets.
fn feasibility_gap(x: &[f64], primitives: &[Primitive], stack: &mut PavaBlockStack) -> f64 {
    let mut gap = 0.0f64;
    let mut probe = vec![0.0; x.len()];
    for primitive in primitives {
        probe.copy_from_slice(x);
        primitive.project(&mut probe, stack);
        gap = gap.max(dist(x, &probe));
    }
    gap
}

/// Projects `y` onto the intersection of `sets`, stopping once a full cycle
/// of projections moves the iterate by less than `tol` in Euclidean norm.
///
/// When the sets do not intersect, the iterates settle on a point that stays
/// a fixed distance from one of the sets; this is reported as an
/// infeasibility error. Running out of iterations reports a convergence
/// error carrying the last iterate and the current cycle displacement.
pub fn dykstra_project(
    y: &[f64],
    sets: &[ConvexSet],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, Error> {
    check_sequence(y)?;
    if sets.is_empty() {
        return Err(Error::invalid("at least one constraint set is required"));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    let n = y.len();
    let primitives = expand_sets(sets, n)?;

    let mut stack = PavaBlockStack::new();
    let mut x = y.to_vec();
    let mut prev = x.clone();
    let mut u = vec![0.0; n];
    let mut corrections = vec![vec![0.0; n]; primitives.len()];
    let mut last_delta = f64::INFINITY;
    let mut probe_gap: Option<f64> = None;

    for cycle in 1..=max_iter {
        for (primitive, correction) in primitives.iter().zip(&mut corrections) {
            for i in 0..n {
                u[i] = x[i] + correction[i];
            }
            x.copy_from_slice(&u);
            primitive.project(&mut x, &mut stack);
            for i in 0..n {
                correction[i] = u[i] - x[i];
            }
        }
        let delta = dist(&x, &prev);
        if delta <= tol {
            let gap = feasibility_gap(&x, &primitives, &mut stack);
            if gap > 1e3 * tol {
                return Err(Error::Infeasible { gap });
            }
            return Ok(x);
        }
        // A frozen per-cycle displacement away from feasibility means the
        // iterates are translating by the gap between disjoint sets. Two
        // probes must agree, since a slowly closing gap is still progress.
        if cycle.is_multiple_of(256) && (delta - last_delta).abs() <= 1e-12 * (1.0 + delta) {
            let gap = feasibility_gap(&x, &primitives, &mut stack);
            if gap > 1e3 * tol {
                if probe_gap.is_some_and(|g| (g - gap).abs() <= 1e-9 * (1.0 + gap)) {
                    return Err(Error::Infeasible { gap });
                }
                probe_gap = Some(gap);
            } else {
                probe_gap = None;
            }
        }
        last_delta = delta;
        prev.copy_from_slice(&x);
    }
    Err(Error::Convergence {
        iterations: max_iter,
        gap: last_delta,
        last: x,
    })
}
