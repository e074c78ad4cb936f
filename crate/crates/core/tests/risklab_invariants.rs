//! Risk-lab invariants: reproducibility, bound dominance, and the oracle
//! sanity check for monotone truths.

use unireg::isotonic::{pava, Direction};
use unireg::risklab::{
    generate_noise, generate_signal, oracle_rhs, run_experiment, ExperimentConfig, NoiseSpec,
    SignalSpec,
};
use unireg::rng::replication_rng;

#[test]
fn monotone_risk_stays_under_the_oracle_quantity() {
    // Fit the nondecreasing cone directly on a staircase truth; the mean
    // per-coordinate squared error must respect the oracle bound with its
    // leading constant 1.
    let n = 256;
    let signal = generate_signal(&SignalSpec::MonotoneStaircase { pieces: 3, v: 2.0 }, n).unwrap();
    let sigma = 1.0;
    let bound = oracle_rhs(&signal.values, sigma).unwrap();
    let reps = 300;
    let mut losses = Vec::with_capacity(reps);
    for rep in 0..reps {
        let mut rng = replication_rng(44, n, rep as u64);
        let z = generate_noise(&NoiseSpec::Gaussian { sigma }, n, &mut rng);
        let y: Vec<f64> = signal.values.iter().zip(&z).map(|(t, e)| t + e).collect();
        let fit = pava(&y, Direction::Nondecreasing).unwrap();
        let loss: f64 = fit
            .fitted
            .iter()
            .zip(&signal.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        losses.push(loss / n as f64);
    }
    let mean = losses.iter().sum::<f64>() / reps as f64;
    let var = losses.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / (reps - 1) as f64;
    let std_err = (var / reps as f64).sqrt();
    assert!(
        mean <= bound + 3.0 * std_err,
        "risk {mean} vs oracle {bound} (se {std_err})"
    );
}

#[test]
fn coverage_holds_for_every_noise_model() {
    for noise in [
        NoiseSpec::Gaussian { sigma: 1.0 },
        NoiseSpec::UniformBounded { sigma: 1.0 },
        NoiseSpec::Rademacher { sigma: 1.0 },
    ] {
        let config = ExperimentConfig {
            n_grid: vec![64, 128],
            replications: 100,
            seed: 5150,
            signal: SignalSpec::Indicator { lo: 0.25, hi: 0.75 },
            noise,
            alpha: 1.0,
        };
        let report = run_experiment(&config).unwrap();
        for row in &report.rows {
            // Allowed failure mass: 4/n^alpha plus binomial slack.
            let p = 1.0 - 4.0 / row.n as f64;
            let se = (p * (1.0 - p) / config.replications as f64).sqrt();
            assert!(
                row.coverage_thm2 >= p - 3.0 * se,
                "{:?} n={}: coverage {}",
                config.noise,
                row.n,
                row.coverage_thm2
            );
        }
    }
}

#[test]
fn pure_noise_risk_sits_at_the_statistical_dimension_scale() {
    // Constant truth: the fit is a projection of pure noise, so the mean
    // loss times n lands near the cone's statistical dimension (one rising
    // and one falling half). Generous ceiling, and full bound coverage.
    let n = 512;
    let config = ExperimentConfig {
        n_grid: vec![n],
        replications: 200,
        seed: 2024,
        signal: SignalSpec::Constant { level: 0.0 },
        noise: NoiseSpec::Gaussian { sigma: 1.0 },
        alpha: 1.0,
    };
    let report = run_experiment(&config).unwrap();
    let row = &report.rows[0];
    let log_en = 1.0 + (n as f64).ln();
    assert!(
        row.mse_mean * n as f64 <= 4.0 * log_en,
        "scaled risk {} vs 4 log(en) {}",
        row.mse_mean * n as f64,
        4.0 * log_en
    );
    assert!(row.coverage_thm2 >= 1.0 - 4.0 / n as f64);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let config = ExperimentConfig {
        n_grid: vec![32, 64],
        replications: 64,
        seed: 909,
        signal: SignalSpec::SmoothBump { v: 1.0 },
        noise: NoiseSpec::Gaussian { sigma: 1.0 },
        alpha: 1.0,
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_experiment(&config).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap()
        .install(|| run_experiment(&config).unwrap());
    for (a, b) in single.rows.iter().zip(&many.rows) {
        assert_eq!(a.mse_mean.to_bits(), b.mse_mean.to_bits());
        assert_eq!(a.mse_std_err.to_bits(), b.mse_std_err.to_bits());
        assert_eq!(a.coverage_thm2.to_bits(), b.coverage_thm2.to_bits());
    }
}
