//! Monte-Carlo checks of the correlation statistics: draw I/Q voltage
//! records from a [`Covariance4`], estimate the Pearson coefficient, and
//! measure how often uncorrelated records cross the detection threshold.
//!
//! Every stream is a ChaCha8 generator seeded from a [`RngSpec`]; trial `k`
//! of a false-alarm run uses stream `k` of the same key, so results do not
//! depend on how rayon schedules the trials.

use nalgebra::{Cholesky, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{domain, Error, Result};
use crate::gaussian::Covariance4;
use crate::noise::{rho_threshold, FalseAlarmSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RngAlgorithm {
    #[default]
    ChaCha8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    #[serde(default)]
    pub algorithm: RngAlgorithm,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            algorithm: RngAlgorithm::ChaCha8,
        }
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        match self.algorithm {
            RngAlgorithm::ChaCha8 => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(index);
                rng
            }
        }
    }
}

/// Four parallel voltage records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleBatch {
    pub i_s: Vec<f64>,
    pub q_s: Vec<f64>,
    pub i_i: Vec<f64>,
    pub q_i: Vec<f64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.i_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i_s.is_empty()
    }

    /// Empirical second-moment matrix (zero mean assumed) in
    /// `(I_s, Q_s, I_i, Q_i)` order.
    pub fn second_moments(&self) -> nalgebra::Matrix4<f64> {
        let mut acc = nalgebra::Matrix4::zeros();
        for k in 0..self.len() {
            let v = Vector4::new(self.i_s[k], self.q_s[k], self.i_i[k], self.q_i[k]);
            acc += v * v.transpose();
        }
        acc / self.len() as f64
    }
}

/// Draws `n` samples with second moments `cov.matrix()`.
pub fn sample_iq(cov: &Covariance4, n: usize, rng: &RngSpec) -> Result<SampleBatch> {
    let chol = Cholesky::new(cov.matrix())
        .ok_or_else(|| domain("covariance", cov.cq, "matrix is not positive definite"))?;
    let l = chol.l();
    let mut gen = rng.stream(0);
    let mut batch = SampleBatch {
        i_s: Vec::with_capacity(n),
        q_s: Vec::with_capacity(n),
        i_i: Vec::with_capacity(n),
        q_i: Vec::with_capacity(n),
    };
    for _ in 0..n {
        let z = Vector4::new(
            gen.sample(StandardNormal),
            gen.sample(StandardNormal),
            gen.sample(StandardNormal),
            gen.sample(StandardNormal),
        );
        let x = l * z;
        batch.i_s.push(x[0]);
        batch.q_s.push(x[1]);
        batch.i_i.push(x[2]);
        batch.q_i.push(x[3]);
    }
    Ok(batch)
}

fn normalized_cross(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || a.len() != b.len() {
        return Err(Error::Degenerate("need two equal-length series of at least 2 samples"));
    }
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        ab += x * y;
        aa += x * x;
        bb += y * y;
    }
    if aa == 0.0 || bb == 0.0 {
        return Err(Error::Degenerate("zero-variance series"));
    }
    Ok((ab / (aa * bb).sqrt()).clamp(-1.0, 1.0))
}

/// In-phase Pearson estimate `⟨I_s I_i⟩ / √(⟨I_s I_s⟩⟨I_i I_i⟩)`.
pub fn pearson_estimate(batch: &SampleBatch) -> Result<f64> {
    normalized_cross(&batch.i_s, &batch.i_i)
}

/// Normalized quadrature cross-moment `⟨Q_s Q_i⟩ / √(⟨Q_s Q_s⟩⟨Q_i Q_i⟩)`;
/// negative for a two-mode squeezed source.
pub fn quadrature_correlation(batch: &SampleBatch) -> Result<f64> {
    normalized_cross(&batch.q_s, &batch.q_i)
}

/// Magnitude of the complex correlation between `z_s = I_s + iQ_s` and
/// `z_i = I_i + iQ_i`, using the phase-conjugate product `z_s z_i` that a
/// two-mode squeezed source correlates.
pub fn complex_correlation_magnitude(batch: &SampleBatch) -> Result<f64> {
    let n = batch.len();
    if n < 2 {
        return Err(Error::Degenerate("need at least 2 samples"));
    }
    let (mut re, mut im, mut ps, mut pi) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..n {
        let (a, b) = (batch.i_s[k], batch.q_s[k]);
        let (c, d) = (batch.i_i[k], batch.q_i[k]);
        re += a * c - b * d;
        im += a * d + b * c;
        ps += a * a + b * b;
        pi += c * c + d * d;
    }
    if ps == 0.0 || pi == 0.0 {
        return Err(Error::Degenerate("zero-power series"));
    }
    Ok(((re * re + im * im) / (ps * pi)).sqrt().min(1.0))
}

/// Which statistic is compared against `ρ_th`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorStatistic {
    /// `|ρ̂|` of the in-phase Pearson estimate.
    #[default]
    InPhase,
    /// `|ρ̂|` of the complex (I+iQ) correlation.
    Complex,
}

/// Probability that an uncorrelated record of `samples` points crosses
/// `threshold` under `statistic`, for zero-mean Gaussian voltages.
///
/// In-phase: `ρ̂ √(M−1)/√(1−ρ̂²)` is Student-t with `M−1` degrees of freedom.
/// Complex: `|ρ̂|²` is Beta(1, M−1), so the tail is `(1−ρ_th²)^(M−1)`; this
/// tends to `exp(−M ρ_th²) = P_fa` for large `M`.
pub fn null_exceedance_probability(statistic: DetectorStatistic, threshold: f64, samples: usize) -> Result<f64> {
    if samples < 2 {
        return Err(domain("samples", samples as f64, "must be >= 2"));
    }
    if threshold >= 1.0 {
        return Ok(0.0);
    }
    let m = samples as f64;
    match statistic {
        DetectorStatistic::InPhase => {
            let dof = m - 1.0;
            let t = threshold * dof.sqrt() / (1.0 - threshold * threshold).sqrt();
            let dist = StudentsT::new(0.0, 1.0, dof).map_err(|_| domain("dof", dof, "invalid"))?;
            Ok(2.0 * dist.sf(t))
        }
        DetectorStatistic::Complex => Ok((1.0 - threshold * threshold).powf(m - 1.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalseAlarmEstimate {
    pub samples: usize,
    pub trials: usize,
    pub threshold: f64,
    pub exceedances: u64,
    pub observed_rate: f64,
    /// Exceedance probability predicted for the chosen statistic.
    pub expected_rate: f64,
    /// Binomial 3σ half-width around `expected_rate`.
    pub ci_halfwidth: f64,
    pub statistic: DetectorStatistic,
}

impl FalseAlarmEstimate {
    pub fn within_interval(&self) -> bool {
        (self.observed_rate - self.expected_rate).abs() <= self.ci_halfwidth
    }
}

/// Runs `trials` independent uncorrelated records of length `samples`,
/// thresholds the chosen statistic at `ρ_th(p_fa, M)` and counts crossings.
pub fn empirical_false_alarm(
    samples: usize,
    trials: usize,
    fa: &FalseAlarmSpec,
    statistic: DetectorStatistic,
    rng: &RngSpec,
) -> Result<FalseAlarmEstimate> {
    if samples < 10 {
        return Err(domain("samples", samples as f64, "must be >= 10"));
    }
    if trials < 1000 {
        return Err(domain("trials", trials as f64, "must be >= 1000"));
    }
    let threshold = rho_threshold(fa, samples as f64)?;
    let exceedances: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut gen = rng.stream(trial);
            let stat = null_statistic(&mut gen, samples, statistic);
            u64::from(stat >= threshold)
        })
        .sum();
    let expected_rate = null_exceedance_probability(statistic, threshold, samples)?;
    let n = trials as f64;
    Ok(FalseAlarmEstimate {
        samples,
        trials,
        threshold,
        exceedances,
        observed_rate: exceedances as f64 / n,
        expected_rate,
        ci_halfwidth: 3.0 * (expected_rate * (1.0 - expected_rate) / n).sqrt(),
        statistic,
    })
}

// Draws an independent (vacuum) record and returns |rho-hat|.
fn null_statistic(gen: &mut ChaCha8Rng, samples: usize, statistic: DetectorStatistic) -> f64 {
    match statistic {
        DetectorStatistic::InPhase => {
            let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
            for _ in 0..samples {
                let x: f64 = gen.sample(StandardNormal);
                let y: f64 = gen.sample(StandardNormal);
                ab += x * y;
                aa += x * x;
                bb += y * y;
            }
            (ab / (aa * bb).sqrt()).abs()
        }
        DetectorStatistic::Complex => {
            let (mut re, mut im, mut ps, mut pi) = (0.0, 0.0, 0.0, 0.0);
            for _ in 0..samples {
                let a: f64 = gen.sample(StandardNormal);
                let b: f64 = gen.sample(StandardNormal);
                let c: f64 = gen.sample(StandardNormal);
                let d: f64 = gen.sample(StandardNormal);
                re += a * c - b * d;
                im += a * d + b * c;
                ps += a * a + b * b;
                pi += c * c + d * d;
            }
            ((re * re + im * im) / (ps * pi)).sqrt()
        }
    }
}

/// Pearson estimates from `seeds` independent batches of `n` samples, in
/// seed order. Seed `k` uses `RngSpec::new(base.seed + k)`.
pub fn pearson_over_seeds(cov: &Covariance4, n: usize, seeds: usize, base: &RngSpec) -> Result<Vec<f64>> {
    (0..seeds as u64)
        .into_par_iter()
        .map(|k| {
            let spec = RngSpec {
                seed: base.seed.wrapping_add(k),
                algorithm: base.algorithm,
            };
            pearson_estimate(&sample_iq(cov, n, &spec)?)
        })
        .collect()
}

/// Mean and standard error of a set of estimates.
pub fn mean_and_standard_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
