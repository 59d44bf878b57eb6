use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::decomp::SettingDecomposition;
use crate::error::{Error, Result};
use crate::states::BipartiteState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub shots_per_setting: u64,
    pub n_settings: usize,
}

/// Outcome counts for `shots` draws from `probs`, as a chain of binomials.
fn multinomial<R: Rng + ?Sized>(shots: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut left = shots;
    let mut mass = 1.0;
    let mut counts = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        let k = if i + 1 == probs.len() {
            left
        } else if left == 0 || p <= 0.0 {
            0
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).expect("q in [0, 1]").sample(rng)
        };
        counts.push(k);
        left -= k;
        mass -= p;
    }
    counts
}

/// Measures each setting `shots_per_setting` times on `state` and combines
/// the weighted outcome frequencies. The error bar propagates the
/// multinomial variance of each setting's estimator.
pub fn simulate_measurement<R: Rng + ?Sized>(
    sd: &SettingDecomposition,
    state: &BipartiteState,
    shots_per_setting: u64,
    rng: &mut R,
) -> Result<ShotEstimate> {
    if shots_per_setting < 1 {
        return Err(Error::InvalidArgument(
            "at least one shot per setting is required".into(),
        ));
    }
    if sd.dims != state.dims() {
        return Err(Error::DimensionMismatch {
            expected: sd.dims.total(),
            found: state.dims().total(),
        });
    }
    let n = shots_per_setting as f64;
    let mut mean = 0.0;
    let mut var = 0.0;
    for s in &sd.settings {
        let mut probs = Vec::with_capacity(sd.dims.total());
        let mut weights = Vec::with_capacity(sd.dims.total());
        for (k, a) in s.basis_a.iter().enumerate() {
            for (l, b) in s.basis_b.iter().enumerate() {
                probs.push(state.rho().expectation(&a.kron(b)).max(0.0));
                weights.push(s.weights[k][l]);
            }
        }
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        let counts = multinomial(shots_per_setting, &probs, rng);
        let (m1, m2) = counts
            .iter()
            .zip(&weights)
            .fold((0.0, 0.0), |(m1, m2), (&c, &w)| {
                let f = c as f64 / n;
                (m1 + w * f, m2 + w * w * f)
            });
        mean += m1;
        var += ((m2 - m1 * m1) / n).max(0.0);
    }
    Ok(ShotEstimate {
        mean,
        std_error: var.sqrt(),
        shots_per_setting,
        n_settings: sd.settings.len(),
    })
}
