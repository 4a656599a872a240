use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::protocol::{hc_quantity, pgm_success};

use super::{esd, kolmogorov_distance, mean_sqrt_esd, random_protocol_ensemble, ESDSample, MPParams, RandError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentOptions {
    /// The square-root measurement costs an `n x n` matrix root; it is only
    /// computed for `d` up to this bound.
    pub pgm_max_d: usize,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self { pgm_max_d: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats {
    pub hc: f64,
    pub pgm: Option<f64>,
    pub mean_sqrt_eig: f64,
    pub max_eig: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub sd: f64,
}

impl Summary {
    fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, sd }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentStats {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    pub per_trial: Vec<TrialStats>,
    pub hc: Summary,
    pub pgm: Option<Summary>,
    pub mean_sqrt_eig: Summary,
    pub max_eig: Summary,
    /// Kolmogorov distance of the pooled eigenvalues from the square law.
    pub ks_distance: f64,
    #[serde(skip)]
    pub pooled: ESDSample,
}

/// See [`distinguishability_experiment_with`].
pub fn distinguishability_experiment(d: usize, trials: usize, seed: u64) -> Result<ExperimentStats, RandError> {
    distinguishability_experiment_with(d, trials, seed, &ExperimentOptions::default())
}

/// Runs `trials` independent random protocols of dimension `d`.
///
/// Trial `t` draws from ChaCha8 seeded with `seed` on stream `t`, so each
/// trial is reproducible on its own. When the square-root measurement is
/// skipped, `hc` is the mean square-root eigenvalue, which equals it exactly.
pub fn distinguishability_experiment_with(
    d: usize,
    trials: usize,
    seed: u64,
    opts: &ExperimentOptions,
) -> Result<ExperimentStats, RandError> {
    if d < 2 || trials == 0 {
        return Err(RandError::Parameters(format!("need d >= 2 and trials >= 1, got d={d}, trials={trials}")));
    }
    let mut per_trial = Vec::with_capacity(trials);
    let mut pooled = Vec::with_capacity(trials * d * d);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let e = random_protocol_ensemble(d, &mut rng);
        let s = esd(&e)?;
        let mean_sqrt_eig = mean_sqrt_esd(&s, 1e-9)?;
        let (hc, pgm) = if d <= opts.pgm_max_d {
            (hc_quantity(&e)?, Some(pgm_success(&e)?))
        } else {
            (mean_sqrt_eig, None)
        };
        per_trial.push(TrialStats {
            hc,
            pgm,
            mean_sqrt_eig,
            max_eig: s.max(),
        });
        pooled.extend(s.eigenvalues);
    }
    pooled.sort_by(|a, b| b.total_cmp(a));
    let pooled = ESDSample {
        d,
        n: pooled.len(),
        eigenvalues: pooled,
        seed,
    };
    let column = |f: fn(&TrialStats) -> f64| Summary::of(&per_trial.iter().map(f).collect::<Vec<_>>());
    let pgm = per_trial
        .iter()
        .map(|t| t.pgm)
        .collect::<Option<Vec<f64>>>()
        .map(|v| Summary::of(&v));
    Ok(ExperimentStats {
        d,
        trials,
        seed,
        hc: column(|t| t.hc),
        pgm,
        mean_sqrt_eig: column(|t| t.mean_sqrt_eig),
        max_eig: column(|t| t.max_eig),
        ks_distance: kolmogorov_distance(&pooled, &MPParams::square())?,
        per_trial,
        pooled,
    })
}
