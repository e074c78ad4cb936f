//! Deterministic unimodal test signals.

use crate::error::{check_sequence, Error};
use crate::unimodal::is_unimodal;
use crate::util::first_argmax;
use serde::{Deserialize, Serialize};

/// Families of unimodal mean vectors. Each family generates a vector for
/// any length n it is feasible at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SignalSpec {
    /// All entries equal.
    Constant { level: f64 },
    /// 0/1 plateau over the design fraction `[lo, hi]` of `[0, 1]`, sampled
    /// at midpoints `(i + 1/2)/n`.
    Indicator { lo: f64, hi: f64 },
    /// Discretized sine bump rescaled so the range is exactly `v`.
    SmoothBump { v: f64 },
    /// Nondecreasing staircase with `pieces` equal-width steps spanning
    /// range `v`.
    MonotoneStaircase { pieces: usize, v: f64 },
    /// Explicit constant pieces: `breakpoints[j]` is the 1-based last index
    /// of piece j; the final piece runs to n. Levels must rise then fall.
    PiecewiseConstantUnimodal {
        breakpoints: Vec<usize>,
        levels: Vec<f64>,
    },
    /// A fixed vector, usable only at its own length.
    Custom { values: Vec<f64> },
}

/// A generated signal with its piece accounting: `mode` is the smallest
/// valid peak position (1-based), `s1` the number of distinct values on
/// `1..=mode`, `s2` the number of distinct values on `mode+1..=n`.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratedSignal {
    pub values: Vec<f64>,
    pub mode: usize,
    pub s1: usize,
    pub s2: usize,
    /// Range max - min.
    pub range: f64,
}

impl GeneratedSignal {
    pub fn s_total(&self) -> usize {
        self.s1 + self.s2
    }
}

pub fn generate_signal(spec: &SignalSpec, n: usize) -> Result<GeneratedSignal, Error> {
    if n == 0 {
        return Err(Error::invalid("signal length must be at least 1"));
    }
    let values = match spec {
        SignalSpec::Constant { level } => {
            if !level.is_finite() {
                return Err(Error::invalid("constant level must be finite"));
            }
            vec![*level; n]
        }
        SignalSpec::Indicator { lo, hi } => {
            if !(0.0..=1.0).contains(lo) || !(0.0..=1.0).contains(hi) || lo > hi {
                return Err(Error::invalid(format!(
                    "indicator interval [{lo}, {hi}] must sit inside [0, 1]"
                )));
            }
            (0..n)
                .map(|i| {
                    let x = (i as f64 + 0.5) / n as f64;
                    if (*lo..=*hi).contains(&x) {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        SignalSpec::SmoothBump { v } => {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::invalid("bump amplitude must be nonnegative"));
            }
            if *v == 0.0 {
                vec![0.0; n]
            } else {
                // sin is evaluated on min(x, 1-x) so mirrored design points
                // get bit-identical values and the bump is exactly symmetric.
                let raw: Vec<f64> = (0..n)
                    .map(|i| {
                        let x = (i as f64 + 0.5) / n as f64;
                        (std::f64::consts::PI * x.min(1.0 - x)).sin()
                    })
                    .collect();
                let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
                if max - min <= 0.0 {
                    return Err(Error::invalid(format!(
                        "a bump of positive amplitude needs n >= 3, got {n}"
                    )));
                }
                raw.iter().map(|b| v * (b - min) / (max - min)).collect()
            }
        }
        SignalSpec::MonotoneStaircase { pieces, v } => {
            if *pieces == 0 || *pieces > n {
                return Err(Error::invalid(format!(
                    "staircase needs 1..={n} pieces, got {pieces}"
                )));
            }
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::invalid("staircase range must be nonnegative"));
            }
            if *pieces == 1 && *v > 0.0 {
                return Err(Error::invalid(
                    "a single piece cannot span a positive range",
                ));
            }
            (0..n)
                .map(|i| {
                    let piece = i * *pieces / n;
                    if *pieces == 1 {
                        0.0
                    } else {
                        v * piece as f64 / (*pieces as f64 - 1.0)
                    }
                })
                .collect()
        }
        SignalSpec::PiecewiseConstantUnimodal {
            breakpoints,
            levels,
        } => {
            if levels.is_empty() || breakpoints.len() + 1 != levels.len() {
                return Err(Error::invalid(
                    "need one more level than breakpoints, and at least one level",
                ));
            }
            if levels.len() > n {
                return Err(Error::invalid(format!(
                    "more pieces ({}) than points ({n})",
                    levels.len()
                )));
            }
            check_sequence(levels)?;
            if !is_unimodal(levels) {
                return Err(Error::invalid("piece levels must rise then fall"));
            }
            for pair in breakpoints.windows(2) {
                if pair[1] <= pair[0] {
                    return Err(Error::invalid("breakpoints must be strictly increasing"));
                }
            }
            if let (Some(&first), Some(&last)) = (breakpoints.first(), breakpoints.last()) {
                if first < 1 || last >= n {
                    return Err(Error::invalid(format!(
                        "breakpoints must lie in 1..={} for n = {n}",
                        n - 1
                    )));
                }
            }
            let mut values = Vec::with_capacity(n);
            let mut piece = 0;
            for i in 1..=n {
                values.push(levels[piece]);
                if piece < breakpoints.len() && i == breakpoints[piece] {
                    piece += 1;
                }
            }
            values
        }
        SignalSpec::Custom { values } => {
            check_sequence(values)?;
            if values.len() != n {
                return Err(Error::invalid(format!(
                    "custom signal has length {}, requested {n}",
                    values.len()
                )));
            }
            if !is_unimodal(values) {
                return Err(Error::invalid("custom signal must be unimodal"));
            }
            values.clone()
        }
    };

    debug_assert!(is_unimodal(&values));
    let mode = first_argmax(&values) + 1;
    let s1 = distinct_monotone(&values[..mode]);
    let s2 = distinct_monotone(&values[mode..]);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(GeneratedSignal {
        values,
        mode,
        s1,
        s2,
        range: max - min,
    })
}

/// Distinct-value count of a monotone slice: one plus the number of strict
/// level changes.
fn distinct_monotone(values: &[f64]) -> usize {
    if values.is_empty() {
        return 0;
    }
    1 + values.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_counts_one_value_per_side() {
        let sig = generate_signal(&SignalSpec::Constant { level: 0.0 }, 5).unwrap();
        assert_eq!(sig.values, vec![0.0; 5]);
        assert_eq!(sig.mode, 1);
        assert_eq!((sig.s1, sig.s2), (1, 1));
        assert_eq!(sig.range, 0.0);
    }

    #[test]
    fn indicator_middle_third() {
        let sig = generate_signal(
            &SignalSpec::Indicator {
                lo: 1.0 / 3.0,
                hi: 2.0 / 3.0,
            },
            6,
        )
        .unwrap();
        assert_eq!(sig.values, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(sig.s_total(), 4);
    }

    #[test]
    fn bump_range_is_exact() {
        for n in [4, 7, 129] {
            let sig = generate_signal(&SignalSpec::SmoothBump { v: 1.0 }, n).unwrap();
            assert!((sig.range - 1.0).abs() <= 1e-12);
            assert!(is_unimodal(&sig.values));
        }
        assert!(generate_signal(&SignalSpec::SmoothBump { v: 1.0 }, 2).is_err());
        let flat = generate_signal(&SignalSpec::SmoothBump { v: 0.0 }, 2).unwrap();
        assert_eq!(flat.values, vec![0.0, 0.0]);
    }

    #[test]
    fn staircase_is_monotone_with_requested_pieces() {
        let sig =
            generate_signal(&SignalSpec::MonotoneStaircase { pieces: 4, v: 3.0 }, 16).unwrap();
        assert!((sig.range - 3.0).abs() <= 1e-12);
        assert_eq!(sig.mode, 13);
        assert_eq!((sig.s1, sig.s2), (4, 1));
        assert!(sig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn explicit_pieces_and_their_accounting() {
        let spec = SignalSpec::PiecewiseConstantUnimodal {
            breakpoints: vec![2, 4],
            levels: vec![0.0, 1.0, 0.0],
        };
        let sig = generate_signal(&spec, 6).unwrap();
        assert_eq!(sig.values, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(sig.mode, 3);
        assert_eq!((sig.s1, sig.s2), (2, 2));

        assert!(generate_signal(&spec, 4).is_err()); // breakpoint 4 not interior
        let bad = SignalSpec::PiecewiseConstantUnimodal {
            breakpoints: vec![2, 4],
            levels: vec![0.0, 1.0, 2.0],
        };
        // Rising levels are fine, monotone is unimodal.
        assert!(generate_signal(&bad, 6).is_ok());
        let bad = SignalSpec::PiecewiseConstantUnimodal {
            breakpoints: vec![2, 4],
            levels: vec![1.0, 0.0, 2.0],
        };
        assert!(generate_signal(&bad, 6).is_err());
    }

    #[test]
    fn custom_must_be_unimodal_and_sized() {
        let spec = SignalSpec::Custom {
            values: vec![0.0, 2.0, 1.0],
        };
        assert!(generate_signal(&spec, 3).is_ok());
        assert!(generate_signal(&spec, 4).is_err());
        let bad = SignalSpec::Custom {
            values: vec![1.0, 0.0, 1.0],
        };
        assert!(generate_signal(&bad, 3).is_err());
    }
}
