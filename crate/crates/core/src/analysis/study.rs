//! Classification error of shifted witnesses `W_ε = W - ε·1` on randomly
//! drawn noisy two-qubit states, with the PPT criterion as ground truth.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opalg::trace_product;
use crate::opalg::BipartiteDims;
use crate::rng;
use crate::states::{sample_form1_with, NoiseBall, NoiseSampler, PPT_TOL};
use crate::witness::canonical_two_qubit_witness;

const WILSON_Z: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorStudyConfig {
    pub d_values: Vec<f64>,
    pub epsilon_grid: Vec<f64>,
    pub n_samples: usize,
    pub p_bins: usize,
    pub seed: u64,
}

/// One p-bin of one `(d, ε)` cell. `max_over_p` repeats the cell maximum
/// on every row so the CSV is self-contained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStudyRow {
    pub d: f64,
    pub epsilon: f64,
    /// Bin center.
    pub p_bin: f64,
    pub error_rate: f64,
    pub n_samples: u64,
    pub max_over_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxErrorSummary {
    pub d: f64,
    pub epsilon: f64,
    pub max_error: f64,
    pub p_bin_at_max: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// Error rate over all samples, ignoring bins.
    pub overall_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalEpsilon {
    pub d: f64,
    pub epsilon_star: f64,
    pub max_error: f64,
}

/// Least-squares fit `ε* ≈ c0 + c2·d²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub c0: f64,
    pub c2: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorStudy {
    pub rows: Vec<ErrorStudyRow>,
    pub summaries: Vec<MaxErrorSummary>,
    pub optimal: Vec<OptimalEpsilon>,
    pub fit: Option<QuadraticFit>,
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let phat = k as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub fn fit_quadratic(points: &[(f64, f64)]) -> Option<QuadraticFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(d, _)| d * d).collect();
    let ys: Vec<f64> = points.iter().map(|(_, y)| *y).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let c2 = sxy / sxx;
    let c0 = my - c2 * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - c0 - c2 * x).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Some(QuadraticFit { c0, c2, r_squared })
}

struct Sample {
    bin: usize,
    value: f64,
    entangled: bool,
}

fn draw_samples(d_index: usize, d: f64, config: &ErrorStudyConfig) -> Result<Vec<Sample>> {
    let sampler = NoiseSampler::new(NoiseBall::around_mixed(d, BipartiteDims::qubits())?);
    let w = canonical_two_qubit_witness();
    let bins = config.p_bins;
    (0..config.n_samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(config.seed, ((d_index as u64) << 32) | i as u64);
            let (state, p) = sample_form1_with(&sampler, &mut r)?;
            Ok(Sample {
                bin: ((p * bins as f64) as usize).min(bins - 1),
                value: trace_product(&w.op, state.rho())?,
                // |λ_min| within the tolerance counts as separable
                entangled: state.pt_min_eigenvalue() < -PPT_TOL,
            })
        })
        .collect()
}

/// For every `d` draws `n_samples` states `p|ψ><ψ| + (1-p)σ` (`p` uniform,
/// `σ` uniform in the noise ball) and, for every `ε` on the grid, counts
/// the states the rule "`Tr(W_ε ρ) > 0` ⟺ separable" gets wrong. The
/// same samples are reused across `ε`. Sample `i` of the `k`-th `d` uses
/// stream `(k << 32) | i` of the seed, so results do not depend on the
/// number of worker threads.
pub fn mc_error_study(config: &ErrorStudyConfig) -> Result<ErrorStudy> {
    if config.d_values.is_empty() || config.epsilon_grid.is_empty() {
        return Err(Error::InvalidArgument(
            "d and epsilon grids must be non-empty".into(),
        ));
    }
    if config.n_samples < 1 || config.p_bins < 1 {
        return Err(Error::InvalidArgument(
            "need at least one sample and one p-bin".into(),
        ));
    }
    let bins = config.p_bins;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    let mut optimal = Vec::new();
    for (k, &d) in config.d_values.iter().enumerate() {
        let samples = draw_samples(k, d, config)?;
        let mut totals = vec![0u64; bins];
        for s in &samples {
            totals[s.bin] += 1;
        }
        let mut best: Option<OptimalEpsilon> = None;
        for &epsilon in &config.epsilon_grid {
            let mut wrong = vec![0u64; bins];
            for s in &samples {
                let predicted_separable = s.value - epsilon > 0.0;
                if predicted_separable == s.entangled {
                    wrong[s.bin] += 1;
                }
            }
            let center = |b: usize| (b as f64 + 0.5) / bins as f64;
            let (max_bin, max_error) = (0..bins)
                .filter(|&b| totals[b] > 0)
                .map(|b| (b, wrong[b] as f64 / totals[b] as f64))
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, x| if x.1 > acc.1 { x } else { acc },
                );
            for b in (0..bins).filter(|&b| totals[b] > 0) {
                rows.push(ErrorStudyRow {
                    d,
                    epsilon,
                    p_bin: center(b),
                    error_rate: wrong[b] as f64 / totals[b] as f64,
                    n_samples: totals[b],
                    max_over_p: max_error,
                });
            }
            let (wilson_low, wilson_high) = wilson_interval(wrong[max_bin], totals[max_bin]);
            summaries.push(MaxErrorSummary {
                d,
                epsilon,
                max_error,
                p_bin_at_max: center(max_bin),
                wilson_low,
                wilson_high,
                overall_error: wrong.iter().sum::<u64>() as f64 / samples.len() as f64,
            });
            // strict comparison keeps the smallest ε among ties
            if best.is_none_or(|b| max_error < b.max_error) {
                best = Some(OptimalEpsilon {
                    d,
                    epsilon_star: epsilon,
                    max_error,
                });
            }
        }
        optimal.push(best.expect("non-empty epsilon grid"));
    }
    let fit = fit_quadratic(
        &optimal
            .iter()
            .map(|o| (o.d, o.epsilon_star))
            .collect::<Vec<_>>(),
    );
    Ok(ErrorStudy {
        rows,
        summaries,
        optimal,
        fit,
    })
}
