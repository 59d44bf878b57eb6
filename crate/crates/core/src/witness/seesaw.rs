//! Alternating minimization of `<e,f|X|e,f>` (or a Rayleigh-type ratio)
//! over product vectors.
//!
//! With `f` fixed the objective is a quadratic form in `e` given by the
//! A-side contraction `Tr_B[X (1 ⊗ |f><f|)]`, so the optimal `e` is its
//! minimal (generalized) eigenvector; the same holds with the roles swapped.
//! Each half-step can only lower the objective.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::opalg::random::haar_ket;
use crate::opalg::{
    generalized_herm_eig, herm_eig, min_eigenvalue, BipartiteDims, ComplexMatrix, Ket, ProductPair,
};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeeSawConfig {
    pub restarts: usize,
    /// Stop once a full alternation lowers the objective by less than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            tol: 1e-12,
            max_iter: 500,
        }
    }
}

impl SeeSawConfig {
    pub fn with_restarts(restarts: usize) -> Self {
        Self {
            restarts,
            ..Self::default()
        }
    }
}

/// Best value found over all restarts.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonResult {
    pub value: f64,
    pub argmin: ProductPair,
    pub restarts_used: usize,
    /// Whether the winning restart met the tolerance before `max_iter`.
    pub converged: bool,
}

/// Objective values along one see-saw run, one entry per half-step
/// (the first entry is the random starting point).
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub values: Vec<f64>,
    pub end: ProductPair,
    pub converged: bool,
}

impl Trajectory {
    pub fn final_value(&self) -> f64 {
        *self.values.last().expect("trajectory has a starting value")
    }
}

/// `M_A[i][k] = Σ_{j,l} conj(f_j) X[(i,j),(k,l)] f_l`
pub fn contract_b(x: &ComplexMatrix, dims: BipartiteDims, f: &Ket) -> ComplexMatrix {
    let nb = dims.n_b;
    ComplexMatrix::from_fn(dims.n_a, |i, k| {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for j in 0..nb {
            let fj = f[j].conj();
            for l in 0..nb {
                acc += fj * x[(i * nb + j, k * nb + l)] * f[l];
            }
        }
        acc
    })
    .hermitian_part()
}

/// `M_B[j][l] = Σ_{i,k} conj(e_i) X[(i,j),(k,l)] e_k`
pub fn contract_a(x: &ComplexMatrix, dims: BipartiteDims, e: &Ket) -> ComplexMatrix {
    let nb = dims.n_b;
    ComplexMatrix::from_fn(nb, |j, l| {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for i in 0..dims.n_a {
            let ei = e[i].conj();
            for k in 0..dims.n_a {
                acc += ei * x[(i * nb + j, k * nb + l)] * e[k];
            }
        }
        acc
    })
    .hermitian_part()
}

/// `<e,f|X|e,f>`
pub fn product_expectation(x: &ComplexMatrix, pair: &ProductPair) -> f64 {
    x.expectation(&pair.ket())
}

/// Numerator and optional denominator of the objective.
#[derive(Clone, Copy)]
struct Objective<'a> {
    num: &'a ComplexMatrix,
    denom: Option<&'a ComplexMatrix>,
    dims: BipartiteDims,
}

impl Objective<'_> {
    fn value(&self, pair: &ProductPair) -> f64 {
        let v = pair.ket();
        let n = self.num.expectation(&v);
        match self.denom {
            Some(d) => n / d.expectation(&v),
            None => n / v.inner(&v).re,
        }
    }

    fn minimize_local(&self, n_eff: ComplexMatrix, d_eff: Option<ComplexMatrix>) -> Result<Ket> {
        let eig = match d_eff {
            Some(d) => generalized_herm_eig(&n_eff, &d)?,
            None => herm_eig(&n_eff)?,
        };
        Ok(eig.min_vector().normalized())
    }

    fn update_e(&self, f: &Ket) -> Result<Ket> {
        let n = contract_b(self.num, self.dims, f);
        let d = self.denom.map(|d| contract_b(d, self.dims, f));
        self.minimize_local(n, d)
    }

    fn update_f(&self, e: &Ket) -> Result<Ket> {
        let n = contract_a(self.num, self.dims, e);
        let d = self.denom.map(|d| contract_a(d, self.dims, e));
        self.minimize_local(n, d)
    }

    fn run(&self, start: ProductPair, tol: f64, max_iter: usize) -> Result<Trajectory> {
        let mut pair = start;
        let mut values = vec![self.value(&pair)];
        let mut prev = values[0];
        let mut converged = false;
        for _ in 0..max_iter {
            let e = self.update_e(&pair.f)?;
            pair = ProductPair::new(e, pair.f);
            values.push(self.value(&pair));
            let f = self.update_f(&pair.e)?;
            pair = ProductPair::new(pair.e, f);
            let cur = self.value(&pair);
            values.push(cur);
            if prev - cur < tol {
                converged = true;
                break;
            }
            prev = cur;
        }
        Ok(Trajectory {
            values,
            end: pair,
            converged,
        })
    }

    fn optimize(&self, config: SeeSawConfig, seed: u64) -> Result<EpsilonResult> {
        if config.restarts < 1 {
            return Err(Error::InvalidArgument(
                "at least one restart is required".into(),
            ));
        }
        let runs: Vec<Trajectory> = (0..config.restarts)
            .into_par_iter()
            .map(|k| {
                let mut r = rng::stream(seed, k as u64);
                let start = ProductPair::new(
                    haar_ket(self.dims.n_a, &mut r),
                    haar_ket(self.dims.n_b, &mut r),
                );
                self.run(start, config.tol, config.max_iter)
            })
            .collect::<Result<_>>()?;
        // first index wins ties, so the reduction is independent of scheduling
        let best = runs
            .into_iter()
            .reduce(|best, t| {
                if t.final_value() < best.final_value() {
                    t
                } else {
                    best
                }
            })
            .expect("restarts >= 1");
        Ok(EpsilonResult {
            value: self.value(&best.end),
            argmin: best.end,
            restarts_used: config.restarts,
            converged: best.converged,
        })
    }
}

fn check_operator(op: &ComplexMatrix, dims: BipartiteDims) -> Result<()> {
    dims.check(op.dim())?;
    op.ensure_hermitian()
}

/// Minimum of `<e,f|op|e,f>` over normalized product vectors found by
/// see-saw from `config.restarts` Haar-random starts.
pub fn optimize_epsilon(
    op: &ComplexMatrix,
    dims: BipartiteDims,
    config: SeeSawConfig,
    seed: u64,
) -> Result<EpsilonResult> {
    check_operator(op, dims)?;
    Objective {
        num: op,
        denom: None,
        dims,
    }
    .optimize(config, seed)
}

/// Minimum of `<e,f|num|e,f> / <e,f|denom|e,f>` over product vectors;
/// `denom` must be positive definite.
pub fn optimize_epsilon_ratio(
    num: &ComplexMatrix,
    denom: &ComplexMatrix,
    dims: BipartiteDims,
    config: SeeSawConfig,
    seed: u64,
) -> Result<EpsilonResult> {
    check_operator(num, dims)?;
    check_operator(denom, dims)?;
    let lambda_min = min_eigenvalue(denom)?;
    if lambda_min <= 1e-10 {
        return Err(Error::SingularDenominator { lambda_min });
    }
    Objective {
        num,
        denom: Some(denom),
        dims,
    }
    .optimize(config, seed)
}

/// A single see-saw run from a given start, for inspection.
pub fn see_saw_trajectory(
    num: &ComplexMatrix,
    denom: Option<&ComplexMatrix>,
    dims: BipartiteDims,
    start: ProductPair,
    tol: f64,
    max_iter: usize,
) -> Result<Trajectory> {
    check_operator(num, dims)?;
    if let Some(d) = denom {
        check_operator(d, dims)?;
    }
    Objective { num, denom, dims }.run(start, tol, max_iter)
}
