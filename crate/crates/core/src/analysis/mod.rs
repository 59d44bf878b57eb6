//! Verdicts from measured witness values, measurement simulation and the
//! Monte Carlo robustness study.

mod shots;
mod study;

use serde::{Deserialize, Serialize};

pub use shots::{simulate_measurement, ShotEstimate};
pub use study::{
    fit_quadratic, mc_error_study, wilson_interval, ErrorStudy, ErrorStudyConfig, ErrorStudyRow,
    MaxErrorSummary, OptimalEpsilon, QuadraticFit,
};

use crate::error::{Error, Result};
use crate::opalg::trace_product;
use crate::states::{BipartiteState, SEPARABLE_BALL_RADIUS};
use crate::witness::{tau_bound, Witness, WitnessKind};

/// Values at or above `-ENTANGLED_TOL` are not taken as evidence of
/// entanglement.
pub const ENTANGLED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Entangled,
    SeparableCertified,
    /// Sign rule of a shifted witness; not a certificate.
    SeparableHeuristic,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub expectation: f64,
    pub verdict: Verdict,
    /// Set for shifted witnesses, whose verdicts can be wrong either way.
    pub heuristic: bool,
    pub tau: Option<f64>,
    pub epsilon_used: f64,
    pub p_estimate: Option<PEstimate>,
}

impl WitnessReport {
    /// Attaches the noise-free estimate of `p` for Schmidt coefficients `(a, b)`.
    pub fn with_p_estimate(mut self, a: f64, b: f64) -> Result<Self> {
        self.p_estimate = Some(estimate_p(self.expectation, a, b)?);
        Ok(self)
    }
}

/// `Tr(Wρ)`
pub fn expectation(w: &Witness, state: &BipartiteState) -> Result<f64> {
    if w.dims != state.dims() {
        return Err(Error::DimensionMismatch {
            expected: w.dims.total(),
            found: state.dims().total(),
        });
    }
    trace_product(&w.op, state.rho())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PEstimate {
    pub p: f64,
    /// `false` when `p` falls outside `[0, 1]`, which means the state is
    /// not of the assumed noise-free form.
    pub in_range: bool,
}

impl PEstimate {
    pub fn checked(self) -> Result<f64> {
        if self.in_range {
            Ok(self.p)
        } else {
            Err(Error::PEstimateOutOfRange { p: self.p })
        }
    }
}

/// `p = (1 - 4 Tr(Wρ)) / (1 + 4ab)`, exact for the target with white noise
/// (`d = 0`).
pub fn estimate_p(tr_w_rho: f64, a: f64, b: f64) -> Result<PEstimate> {
    if !(a > 0.0 && b > 0.0) || ((a * a + b * b) - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "need a, b > 0 with a^2 + b^2 = 1, got ({a}, {b})"
        )));
    }
    let p = (1.0 - 4.0 * tr_w_rho) / (1.0 + 4.0 * a * b);
    Ok(PEstimate {
        p,
        in_range: (0.0..=1.0).contains(&p),
    })
}

/// Turns a measured value into a verdict. A negative value of a true
/// witness certifies entanglement; a value at or above `τ(d)` certifies
/// separability for the two-qubit canonical witness when
/// `d ≤ 1/√12`. Shifted witnesses only get the sign rule.
pub fn classify(w: &Witness, state_expectation: f64, d: f64) -> WitnessReport {
    let epsilon_used = w.provenance.epsilon.unwrap_or(0.0);
    if w.kind == WitnessKind::Shifted {
        let verdict = if state_expectation > 0.0 {
            Verdict::SeparableHeuristic
        } else {
            Verdict::Entangled
        };
        return WitnessReport {
            expectation: state_expectation,
            verdict,
            heuristic: true,
            tau: None,
            epsilon_used,
            p_estimate: None,
        };
    }
    let tau = (w.kind == WitnessKind::NptEigvec
        && w.dims.n_a == 2
        && w.dims.n_b == 2
        && d <= SEPARABLE_BALL_RADIUS)
        .then(|| tau_bound(d).ok())
        .flatten();
    let verdict = if state_expectation < -ENTANGLED_TOL {
        Verdict::Entangled
    } else if tau.is_some_and(|t| state_expectation >= t) {
        Verdict::SeparableCertified
    } else {
        Verdict::Inconclusive
    };
    WitnessReport {
        expectation: state_expectation,
        verdict,
        heuristic: false,
        tau,
        epsilon_used,
        p_estimate: None,
    }
}

/// Noise level above which `W = P - ε·1` detects `ρ_p = p ρ_BE + (1-p) 1/9`:
/// `1 - 9ε/5`.
pub fn upb_noise_threshold(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 5.0 / 9.0) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            reason: "must lie in (0, 5/9]",
        });
    }
    Ok(1.0 - 9.0 * epsilon / 5.0)
}
