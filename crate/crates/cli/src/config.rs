//! Flat key-value experiment configs.
//!
//! One `key = value` pair per line, `#` starts a comment. Keys:
//!
//! ```text
//! n_grid   = 128,256,512      lengths to simulate (increasing)
//! reps     = 200              replications per length
//! seed     = 42               stream seed
//! alpha    = 1.0              tail exponent in the bounds
//! signal.kind = constant | indicator | smooth_bump | staircase | pieces | custom
//! signal.level       constant level
//! signal.lo / signal.hi      indicator interval fractions
//! signal.v           bump amplitude / staircase range
//! signal.pieces      staircase piece count
//! signal.breakpoints pieces: 1-based last index per piece (all but final)
//! signal.levels      pieces: level per piece
//! signal.values      custom: the full vector
//! noise.kind  = gaussian | uniform | rademacher
//! noise.sigma = 1.0
//! ```

use crate::errors::CliError;
use std::collections::BTreeMap;
use unireg::risklab::{ExperimentConfig, NoiseSpec, SignalSpec};

const KNOWN_KEYS: &[&str] = &[
    "n_grid",
    "reps",
    "seed",
    "alpha",
    "signal.kind",
    "signal.level",
    "signal.lo",
    "signal.hi",
    "signal.v",
    "signal.pieces",
    "signal.breakpoints",
    "signal.levels",
    "signal.values",
    "noise.kind",
    "noise.sigma",
];

pub fn parse_experiment_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let mut pairs: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Input(format!(
                "line {}: expected `key = value`, got `{line}`",
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Input(format!("unknown key `{key}`")));
        }
        if pairs
            .insert(key.clone(), value.trim().to_string())
            .is_some()
        {
            return Err(CliError::Input(format!("duplicate key `{key}`")));
        }
    }

    let mut pending = pairs.clone();
    let mut take = |key: &str| pending.remove(key);
    let mut require = |key: &str| {
        take(key).ok_or_else(|| CliError::Input(format!("missing required key `{key}`")))
    };

    let n_grid = parse_list::<usize>(&require("n_grid")?, "n_grid")?;
    let replications = parse_scalar::<usize>(&require("reps")?, "reps")?;
    let seed = parse_scalar::<u64>(&require("seed")?, "seed")?;
    let alpha = parse_scalar::<f64>(&require("alpha")?, "alpha")?;
    let noise_kind = require("noise.kind")?;
    let sigma = parse_scalar::<f64>(&require("noise.sigma")?, "noise.sigma")?;
    let noise = match noise_kind.as_str() {
        "gaussian" => NoiseSpec::Gaussian { sigma },
        "uniform" => NoiseSpec::UniformBounded { sigma },
        "rademacher" => NoiseSpec::Rademacher { sigma },
        other => {
            return Err(CliError::Input(format!(
                "noise.kind `{other}` is not one of gaussian, uniform, rademacher"
            )))
        }
    };

    let signal_kind = require("signal.kind")?;
    let mut take = |key: &str| pending.remove(key);
    let mut require_for = |key: &str, kind: &str| {
        take(key)
            .ok_or_else(|| CliError::Input(format!("signal.kind = {kind} requires key `{key}`")))
    };
    let signal = match signal_kind.as_str() {
        "constant" => SignalSpec::Constant {
            level: parse_scalar(&require_for("signal.level", "constant")?, "signal.level")?,
        },
        "indicator" => SignalSpec::Indicator {
            lo: parse_scalar(&require_for("signal.lo", "indicator")?, "signal.lo")?,
            hi: parse_scalar(&require_for("signal.hi", "indicator")?, "signal.hi")?,
        },
        "smooth_bump" => SignalSpec::SmoothBump {
            v: parse_scalar(&require_for("signal.v", "smooth_bump")?, "signal.v")?,
        },
        "staircase" => SignalSpec::MonotoneStaircase {
            pieces: parse_scalar(&require_for("signal.pieces", "staircase")?, "signal.pieces")?,
            v: parse_scalar(&require_for("signal.v", "staircase")?, "signal.v")?,
        },
        "pieces" => SignalSpec::PiecewiseConstantUnimodal {
            breakpoints: parse_list(
                &require_for("signal.breakpoints", "pieces")?,
                "signal.breakpoints",
            )?,
            levels: parse_list(&require_for("signal.levels", "pieces")?, "signal.levels")?,
        },
        "custom" => SignalSpec::Custom {
            values: parse_list(&require_for("signal.values", "custom")?, "signal.values")?,
        },
        other => {
            return Err(CliError::Input(format!(
                "signal.kind `{other}` is not one of constant, indicator, smooth_bump, \
                 staircase, pieces, custom"
            )))
        }
    };

    if let Some(extra) = pending.keys().next() {
        return Err(CliError::Input(format!(
            "key `{extra}` does not apply to signal.kind = {signal_kind}"
        )));
    }

    Ok(ExperimentConfig {
        n_grid,
        replications,
        seed,
        signal,
        noise,
        alpha,
    })
}

fn parse_scalar<T: std::str::FromStr>(value: &str, key: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Input(format!("cannot parse `{value}` for key `{key}`")))
}

fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>, CliError> {
    value
        .split([',', ' '])
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse().map_err(|_| {
                CliError::Input(format!("cannot parse `{tok}` in list for key `{key}`"))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_complete_config() {
        let config = parse_experiment_config(
            "# comment\n\
             n_grid = 128, 256\n\
             reps = 10\n\
             seed = 7\n\
             alpha = 1.0\n\
             signal.kind = smooth_bump\n\
             signal.v = 1.0\n\
             noise.kind = gaussian\n\
             noise.sigma = 1.0  # unit noise\n",
        )
        .unwrap();
        assert_eq!(config.n_grid, vec![128, 256]);
        assert_eq!(config.replications, 10);
        assert_eq!(config.signal, SignalSpec::SmoothBump { v: 1.0 });
    }

    #[test]
    fn unknown_key_is_named_in_the_error() {
        let err = parse_experiment_config("bogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn irrelevant_signal_key_is_rejected() {
        let err = parse_experiment_config(
            "n_grid = 8\nreps = 1\nseed = 1\nalpha = 1.0\n\
             signal.kind = constant\nsignal.level = 0\nsignal.v = 2\n\
             noise.kind = gaussian\nnoise.sigma = 1\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("signal.v"), "{err}");
    }

    #[test]
    fn missing_key_is_reported() {
        let err = parse_experiment_config("n_grid = 8\n").unwrap_err();
        assert!(err.to_string().contains("reps"), "{err}");
    }
}
