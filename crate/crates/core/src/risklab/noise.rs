//! Mean-zero noise models with independent entries.

use crate::error::Error;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

/// Noise families. `sigma` is the standard deviation for the Gaussian
/// model and the absolute bound on each entry for the bounded models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseSpec {
    Gaussian { sigma: f64 },
    UniformBounded { sigma: f64 },
    Rademacher { sigma: f64 },
}

impl NoiseSpec {
    pub fn sigma(&self) -> f64 {
        match self {
            NoiseSpec::Gaussian { sigma }
            | NoiseSpec::UniformBounded { sigma }
            | NoiseSpec::Rademacher { sigma } => *sigma,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let sigma = self.sigma();
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::invalid(format!(
                "noise scale {sigma} must be positive"
            )));
        }
        Ok(())
    }
}

/// Draws n independent entries from the replication stream `rng`.
pub fn generate_noise(spec: &NoiseSpec, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match spec {
        NoiseSpec::Gaussian { sigma } => (0..n)
            .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
            .collect(),
        NoiseSpec::UniformBounded { sigma } => {
            let dist = Uniform::new_inclusive(-sigma, sigma).expect("validated scale");
            (0..n).map(|_| dist.sample(rng)).collect()
        }
        NoiseSpec::Rademacher { sigma } => (0..n)
            .map(|_| {
                if rng.random::<bool>() {
                    *sigma
                } else {
                    -*sigma
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replication_rng;

    #[test]
    fn gaussian_mean_is_near_zero_over_many_draws() {
        let mut rng = replication_rng(1, 1_000_000, 0);
        let z = generate_noise(&NoiseSpec::Gaussian { sigma: 1.0 }, 1_000_000, &mut rng);
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        assert!(mean.abs() <= 4e-3, "mean {mean}");
    }

    #[test]
    fn bounded_models_respect_their_support() {
        let mut rng = replication_rng(2, 10_000, 0);
        let z = generate_noise(&NoiseSpec::UniformBounded { sigma: 1.0 }, 10_000, &mut rng);
        assert!(z.iter().all(|v| (-1.0..=1.0).contains(v)));

        let mut rng = replication_rng(3, 10_000, 0);
        let z = generate_noise(&NoiseSpec::Rademacher { sigma: 2.0 }, 10_000, &mut rng);
        assert!(z.iter().all(|v| *v == 2.0 || *v == -2.0));
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        assert!(mean.abs() <= 0.1, "mean {mean}");
    }

    #[test]
    fn scale_must_be_positive() {
        assert!(NoiseSpec::Gaussian { sigma: 0.0 }.validate().is_err());
        assert!(NoiseSpec::Rademacher { sigma: -1.0 }.validate().is_err());
        assert!(NoiseSpec::UniformBounded { sigma: 0.5 }.validate().is_ok());
    }
}
