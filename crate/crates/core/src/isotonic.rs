//! Exact Euclidean projection onto monotone cones via pool-adjacent-violators
//! (PAVA), plus linear-time prefix/suffix projection-error scans.
//!
//! The block-merging backend is weighted internally (a merged block is a
//! weighted point), but the public surface is unweighted: design points are
//! assumed fixed and distinct.
//!
//! Reference: Barlow, Bartholomew, Bremner & Brunk (1972), *Statistical
//! Inference under Order Restrictions*.

use crate::error::{check_sequence, Error};
use crate::util::segment_cost;

/// Monotonicity direction of a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
}

/// Adjacent block levels closer than this are pooled even without a strict
/// violation, so the block structure stays canonical (levels strictly
/// ordered) and the merge is SSE-neutral at working precision.
pub const MERGE_TOL: f64 = 1e-12;

/// One pooled block: `count` consecutive observations starting at `start`
/// (0-based), carrying their sum and sum of squares.
#[derive(Debug, Clone, Copy)]
pub struct Block {
    pub start: usize,
    pub count: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Block {
    /// Fitted level of the block (its mean).
    pub fn level(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Squared error of the block against its own mean, via the O(1)
    /// identity `sum_sq - sum^2 / count`.
    pub fn sse(&self) -> f64 {
        segment_cost(self.sum, self.sum_sq, self.count)
    }
}

/// Merged-block state of a left-to-right PAVA sweep for the nondecreasing
/// cone. Feed values with [`push`](Self::push); after m pushes,
/// [`accumulated_sse`](Self::accumulated_sse) is the squared error of the
/// best nondecreasing fit to the first m values, maintained in amortized
/// O(1) per push.
///
/// The accumulated SSE uses the per-block identity above. That is the
/// numerically cheapest O(1) update; its cancellation error is accepted and
/// bounded in tests against a two-pass recomputation.
#[derive(Debug, Clone, Default)]
pub struct PavaBlockStack {
    blocks: Vec<Block>,
    accumulated_sse: f64,
    consumed: usize,
}

impl PavaBlockStack {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.blocks.clear();
        self.accumulated_sse = 0.0;
        self.consumed = 0;
    }

    /// Number of values consumed so far.
    pub fn len(&self) -> usize {
        self.consumed
    }

    pub fn is_empty(&self) -> bool {
        self.consumed == 0
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn accumulated_sse(&self) -> f64 {
        self.accumulated_sse
    }

    /// Appends one value and restores the invariant by pooling while the
    /// last two block levels violate strict increase (up to [`MERGE_TOL`]).
    pub fn push(&mut self, value: f64) {
        self.blocks.push(Block {
            start: self.consumed,
            count: 1,
            sum: value,
            sum_sq: value * value,
        });
        self.consumed += 1;
        while self.blocks.len() >= 2 {
            let top = self.blocks[self.blocks.len() - 1];
            let prev = self.blocks[self.blocks.len() - 2];
            if prev.level() < top.level() - MERGE_TOL {
                break;
            }
            self.blocks.pop();
            let merged = self.blocks.last_mut().expect("stack has a block");
            let old_sse = prev.sse() + top.sse();
            merged.count += top.count;
            merged.sum += top.sum;
            merged.sum_sq += top.sum_sq;
            self.accumulated_sse += merged.sse() - old_sse;
        }
    }

    /// Writes block levels into `out`, which must hold exactly `len()`
    /// values. `negate` flips the sign of every level (used for
    /// nonincreasing fits computed on the negated input).
    fn expand_into(&self, out: &mut [f64], negate: bool) {
        debug_assert_eq!(out.len(), self.consumed);
        for block in &self.blocks {
            let level = if negate {
                -block.level()
            } else {
                block.level()
            };
            out[block.start..block.start + block.count].fill(level);
        }
    }
}

/// Result of a monotone projection.
#[derive(Debug, Clone)]
pub struct IsotonicFit {
    pub fitted: Vec<f64>,
    pub sse: f64,
    pub direction: Direction,
}

/// Fits `y` in `direction` using `stack` as scratch, writing the projection
/// into `out` and returning the SSE. Nonincreasing fits run on the negated
/// input and negate the levels back.
pub(crate) fn fit_into(
    stack: &mut PavaBlockStack,
    y: &[f64],
    direction: Direction,
    out: &mut [f64],
) -> f64 {
    stack.clear();
    match direction {
        Direction::Nondecreasing => {
            for &v in y {
                stack.push(v);
            }
            stack.expand_into(out, false);
        }
        Direction::Nonincreasing => {
            for &v in y {
                stack.push(-v);
            }
            stack.expand_into(out, true);
        }
    }
    stack.accumulated_sse()
}

/// Overwrites `values` with its Euclidean projection onto the monotone cone
/// of `direction`. Empty slices are left untouched.
pub(crate) fn project_in_place(
    stack: &mut PavaBlockStack,
    values: &mut [f64],
    direction: Direction,
) {
    if values.is_empty() {
        return;
    }
    stack.clear();
    match direction {
        Direction::Nondecreasing => {
            for &v in values.iter() {
                stack.push(v);
            }
            stack.expand_into(values, false);
        }
        Direction::Nonincreasing => {
            for &v in values.iter() {
                stack.push(-v);
            }
            stack.expand_into(values, true);
        }
    }
}

/// Exact Euclidean projection of `y` onto the monotone cone of the given
/// direction, in O(n).
pub fn pava(y: &[f64], direction: Direction) -> Result<IsotonicFit, Error> {
    check_sequence(y)?;
    let mut stack = PavaBlockStack::new();
    let mut fitted = vec![0.0; y.len()];
    let sse = fit_into(&mut stack, y, direction, &mut fitted);
    Ok(IsotonicFit {
        fitted,
        sse,
        direction,
    })
}

/// Prefix projection errors: returns `p` of length n+1 with `p[0] = 0` and
/// `p[m]` the squared error of the best monotone fit (in `direction`) to
/// `y[..m]`. Computed in one O(n) sweep, amortized O(1) per element.
pub fn prefix_isotonic_sse(y: &[f64], direction: Direction) -> Result<Vec<f64>, Error> {
    check_sequence(y)?;
    let sign = match direction {
        Direction::Nondecreasing => 1.0,
        Direction::Nonincreasing => -1.0,
    };
    let mut stack = PavaBlockStack::new();
    let mut p = Vec::with_capacity(y.len() + 1);
    p.push(0.0);
    for &v in y {
        stack.push(sign * v);
        p.push(stack.accumulated_sse());
    }
    Ok(p)
}

/// Suffix projection errors for nonincreasing fits: returns `s` of length
/// n+1 with `s[n] = 0` and `s[k]` the squared error of the best
/// nonincreasing fit to `y[k..]`. A nonincreasing fit of a suffix is a
/// nondecreasing fit of that suffix reversed, so the sweep feeds `y` right
/// to left; O(n) total.
pub fn suffix_antitonic_sse(y: &[f64]) -> Result<Vec<f64>, Error> {
    check_sequence(y)?;
    let n = y.len();
    let mut stack = PavaBlockStack::new();
    let mut s = vec![0.0; n + 1];
    for i in (0..n).rev() {
        stack.push(y[i]);
        s[i] = stack.accumulated_sse();
    }
    Ok(s)
}
