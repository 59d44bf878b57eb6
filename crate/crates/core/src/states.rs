//! Bipartite states: noisy target states, the correlated-depolarization
//! family, the tiles UPB bound entangled state and random noise sampling.

use std::f64::consts::FRAC_1_SQRT_2;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::opalg::{
    hs_norm, kron, local_basis, min_eigenvalue, partial_transpose, sigma_x, sigma_y, sigma_z,
    BipartiteDims, ComplexMatrix, Ket, Subsystem,
};
use crate::rng;

/// Validation floor for the minimal eigenvalue of a constructed state.
pub const PSD_TOL: f64 = 1e-10;
/// Threshold below which a partial-transpose eigenvalue counts as negative.
pub const PPT_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
/// Radius of the largest separable ball around `1/4` in two-qubit space.
pub const SEPARABLE_BALL_RADIUS: f64 = 0.288_675_134_594_812_9; // 1/sqrt(12)
const SAMPLE_ATTEMPTS: usize = 1000;

/// A density matrix on `C^{n_a} ⊗ C^{n_b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    rho: ComplexMatrix,
    dims: BipartiteDims,
}

impl BipartiteState {
    pub fn new(rho: ComplexMatrix, dims: BipartiteDims) -> Result<Self> {
        dims.check(rho.dim())?;
        let defect = rho.hermiticity_defect();
        if defect > crate::opalg::HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {defect:.3e})"
            )));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let lo = min_eigenvalue(&rho)?;
        if lo < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (minimal eigenvalue {lo:.3e})"
            )));
        }
        Ok(Self { rho, dims })
    }

    pub fn pure(psi: &Ket, dims: BipartiteDims) -> Result<Self> {
        dims.check(psi.dim())?;
        if !psi.is_normalized(1e-12) {
            return Err(Error::InvalidState(format!(
                "ket norm {} is not 1",
                psi.norm()
            )));
        }
        Self::new(ComplexMatrix::projector(psi).hermitian_part(), dims)
    }

    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let n = dims.total();
        Self {
            rho: ComplexMatrix::identity(n).scale(1.0 / n as f64),
            dims,
        }
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn into_parts(self) -> (ComplexMatrix, BipartiteDims) {
        (self.rho, self.dims)
    }

    pub fn partial_transpose(&self) -> ComplexMatrix {
        partial_transpose(&self.rho, self.dims, Subsystem::A).expect("dims checked on construction")
    }

    /// `λ_min(ρ^{T_A})`
    pub fn pt_min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.partial_transpose()).expect("partial transpose is Hermitian")
    }
}

/// `a|01> + b|10>` with `b = sqrt(1 - a²)`.
pub fn target_ket(a: f64) -> Result<Ket> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            reason: "Schmidt coefficient must lie in (0, 1)",
        });
    }
    let b = (1.0 - a * a).sqrt();
    Ok(Ket::from_real(&[0.0, a, b, 0.0]))
}

/// `(|01> + |10>)/√2`
pub fn singlet_plus() -> Ket {
    Ket::from_real(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0])
}

/// `ρ = p|ψ><ψ| + (1-p)σ`
pub fn noisy_target(psi: &Ket, p: f64, sigma: &BipartiteState) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            reason: "mixing weight must lie in [0, 1]",
        });
    }
    let dims = sigma.dims();
    dims.check(psi.dim())?;
    if !psi.is_normalized(1e-12) {
        return Err(Error::InvalidState("target ket is not normalized".into()));
    }
    let rho = &ComplexMatrix::projector(psi).scale(p) + &sigma.rho().scale(1.0 - p);
    BipartiteState::new(rho.hermitian_part(), dims)
}

/// Schmidt coefficient, depolarization survival and memory strength of the
/// correlated channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryChannelParams {
    pub a: f64,
    pub eta: f64,
    pub mu: f64,
}

impl MemoryChannelParams {
    pub fn new(a: f64, eta: f64, mu: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                reason: "must lie in (0, 1)",
            });
        }
        for (name, v) in [("eta", eta), ("mu", mu)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    reason: "must lie in [0, 1]",
                });
            }
        }
        Ok(Self { a, eta, mu })
    }

    pub fn b(&self) -> f64 {
        (1.0 - self.a * self.a).sqrt()
    }
}

/// Output of the correlated depolarizing channel acting on `a|01> + b|10>`.
pub fn memory_channel_state(params: MemoryChannelParams) -> Result<BipartiteState> {
    let MemoryChannelParams { a, eta, mu } =
        MemoryChannelParams::new(params.a, params.eta, params.mu)?;
    let b = params.b();
    let id = ComplexMatrix::identity(2);
    let (x, y, z) = (sigma_x(), sigma_y(), sigma_z());
    let local = &kron(&z, &id) - &kron(&id, &z);
    let corr_strength = mu + (1.0 - mu) * eta * eta;
    let xx_yy = &kron(&x, &x) + &kron(&y, &y);
    let corr = &kron(&z, &z).scale(-1.0) + &xx_yy.scale(2.0 * a * b);
    let rho = &(&ComplexMatrix::identity(4) + &local.scale(eta * (a * a - b * b)))
        + &corr.scale(corr_strength);
    BipartiteState::new(rho.scale(0.25), BipartiteDims::qubits())
}

fn product(a: &[f64], b: &[f64]) -> Ket {
    Ket::from_real(a)
        .normalized()
        .kron(&Ket::from_real(b).normalized())
}

/// The five tiles UPB vectors `ψ_0..ψ_4` in 3×3.
pub fn upb_states() -> Vec<Ket> {
    vec![
        product(&[1.0, 0.0, 0.0], &[1.0, -1.0, 0.0]),
        product(&[1.0, -1.0, 0.0], &[0.0, 0.0, 1.0]),
        product(&[0.0, 0.0, 1.0], &[0.0, 1.0, -1.0]),
        product(&[0.0, 1.0, -1.0], &[1.0, 0.0, 0.0]),
        product(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]),
    ]
}

/// Product vectors `ψ̄_4..ψ̄_8` completing `ψ_0..ψ_3` to an orthonormal basis.
pub fn upb_completion() -> Vec<Ket> {
    vec![
        product(&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]),
        product(&[0.0, 0.0, 1.0], &[0.0, 1.0, 1.0]),
        product(&[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]),
        product(&[0.0, 1.0, 1.0], &[1.0, 0.0, 0.0]),
        product(&[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0]),
    ]
}

/// `Σ_i |ψ_i><ψ_i|` over the UPB.
pub fn upb_projector() -> ComplexMatrix {
    upb_states().iter().fold(ComplexMatrix::zeros(9), |acc, v| {
        &acc + &ComplexMatrix::projector(v)
    })
}

/// `ρ_BE = (1 - Σ|ψ_i><ψ_i|)/4`, PPT and entangled.
pub fn upb_rho_be() -> BipartiteState {
    let rho = (&ComplexMatrix::identity(9) - &upb_projector()).scale(0.25);
    BipartiteState::new(rho.hermitian_part(), BipartiteDims::qutrits())
        .expect("UPB state is a valid density matrix")
}

/// `ρ_p = p ρ_BE + (1-p) 1/9`
pub fn upb_noisy_state(p: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            reason: "mixing weight must lie in [0, 1]",
        });
    }
    let mixed = BipartiteState::maximally_mixed(BipartiteDims::qutrits());
    let rho = &upb_rho_be().rho().scale(p) + &mixed.rho().scale(1.0 - p);
    BipartiteState::new(rho, BipartiteDims::qutrits())
}

/// Hilbert-Schmidt ball of noise states.
#[derive(Debug, Clone)]
pub struct NoiseBall {
    pub d: f64,
    pub center: BipartiteState,
}

impl NoiseBall {
    /// Ball of radius `d` around the maximally mixed state.
    pub fn around_mixed(d: f64, dims: BipartiteDims) -> Result<Self> {
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::OutOfRange {
                name: "d",
                value: d,
                reason: "radius must be finite and non-negative",
            });
        }
        Ok(Self {
            d,
            center: BipartiteState::maximally_mixed(dims),
        })
    }
}

/// Samples `σ` uniformly from a noise ball: isotropic traceless direction,
/// radius `d·u^{1/D}` with `D = (n_a n_b)² - 1`, rejected if not PSD.
#[derive(Debug, Clone)]
pub struct NoiseSampler {
    ball: NoiseBall,
    directions: Vec<ComplexMatrix>,
}

impl NoiseSampler {
    pub fn new(ball: NoiseBall) -> Self {
        let dims = ball.center.dims();
        let ba = local_basis(dims.n_a);
        let bb = local_basis(dims.n_b);
        let mut directions = Vec::with_capacity(dims.total() * dims.total() - 1);
        for (i, g) in ba.iter().enumerate() {
            for (j, h) in bb.iter().enumerate() {
                if i == 0 && j == 0 {
                    continue;
                }
                let norm = (g.norm_sq * h.norm_sq).sqrt();
                directions.push(kron(&g.matrix, &h.matrix).scale(1.0 / norm));
            }
        }
        Self { ball, directions }
    }

    pub fn ball(&self) -> &NoiseBall {
        &self.ball
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BipartiteState> {
        let d = self.ball.d;
        if d == 0.0 {
            return Ok(self.ball.center.clone());
        }
        let dims = self.ball.center.dims();
        let n_dir = self.directions.len() as f64;
        for _ in 0..SAMPLE_ATTEMPTS {
            let coeffs: Vec<f64> = self
                .directions
                .iter()
                .map(|_| rng.sample(StandardNormal))
                .collect();
            let norm = coeffs.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let u: f64 = rng.random();
            let radius = d * u.powf(1.0 / n_dir);
            let mut rho = self.ball.center.rho().clone();
            for (g, w) in self.directions.iter().zip(&coeffs) {
                rho = &rho + &g.scale(radius * w / norm);
            }
            let rho = rho.hermitian_part();
            if min_eigenvalue(&rho)? >= -PPT_TOL {
                return BipartiteState::new(rho, dims);
            }
        }
        Err(Error::SamplingFailed {
            attempts: SAMPLE_ATTEMPTS,
            radius: d,
        })
    }
}

pub fn sample_noise<R: Rng + ?Sized>(ball: &NoiseBall, rng: &mut R) -> Result<BipartiteState> {
    NoiseSampler::new(ball.clone()).sample(rng)
}

/// Draws `ρ = p|ψ><ψ| + (1-p)σ` with `p ~ U[0,1]`, `ψ = (|01>+|10>)/√2` and
/// `σ` from the ball of radius `d` around `1/4`.
pub fn sample_form1<R: Rng + ?Sized>(d: f64, rng: &mut R) -> Result<(BipartiteState, f64)> {
    let sampler = NoiseSampler::new(NoiseBall::around_mixed(d, BipartiteDims::qubits())?);
    sample_form1_with(&sampler, rng)
}

pub fn sample_form1_with<R: Rng + ?Sized>(
    sampler: &NoiseSampler,
    rng: &mut R,
) -> Result<(BipartiteState, f64)> {
    let p: f64 = rng.random();
    let sigma = sampler.sample(rng)?;
    Ok((noisy_target(&singlet_plus(), p, &sigma)?, p))
}

/// `λ_min(ρ^{T_A}) ≥ -tol`
pub fn is_ppt(state: &BipartiteState, tol: f64) -> bool {
    state.pt_min_eigenvalue() >= -tol
}

/// Entanglement verdict from the PPT criterion, only where it is necessary
/// and sufficient (2×2, 2×3, 3×2).
pub fn is_entangled_ppt_decisive(state: &BipartiteState) -> Result<bool> {
    let BipartiteDims { n_a, n_b } = state.dims();
    match (n_a, n_b) {
        (2, 2) | (2, 3) | (3, 2) => Ok(!is_ppt(state, PPT_TOL)),
        _ => Err(Error::PptNotDecisive { n_a, n_b }),
    }
}

/// Hilbert-Schmidt distance between two states.
pub fn hs_distance(a: &BipartiteState, b: &BipartiteState) -> f64 {
    hs_norm(&(a.rho() - b.rho()))
}

/// Inline state description, e.g. `form1:p=0.8,d=0.1,a=0.7071`,
/// `memory:a=0.7071,eta=0.9,mu=0.5`, `upb:p=0.97` or `mixed:n_a=3,n_b=3`.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Form1 { p: f64, d: f64, a: f64 },
    Memory(MemoryChannelParams),
    Upb { p: f64 },
    Mixed(BipartiteDims),
}

impl StateSpec {
    /// Builds the state; a noisy `form1` spec (`d > 0`) draws its noise from
    /// stream 0 of `seed` and fails without one.
    pub fn build(&self, seed: Option<u64>) -> Result<BipartiteState> {
        match *self {
            StateSpec::Form1 { p, d, a } => {
                let psi = target_ket(a)?;
                let ball = NoiseBall::around_mixed(d, BipartiteDims::qubits())?;
                let sigma = if d == 0.0 {
                    ball.center.clone()
                } else {
                    let seed = seed.ok_or_else(|| {
                        Error::InvalidArgument("a seed is required for noisy form1 states".into())
                    })?;
                    sample_noise(&ball, &mut rng::stream(seed, 0))?
                };
                noisy_target(&psi, p, &sigma)
            }
            StateSpec::Memory(params) => memory_channel_state(params),
            StateSpec::Upb { p } => upb_noisy_state(p),
            StateSpec::Mixed(dims) => Ok(BipartiteState::maximally_mixed(dims)),
        }
    }

    /// Schmidt coefficients `(a, b)` of the target, when the spec has one.
    pub fn schmidt_pair(&self) -> Option<(f64, f64)> {
        match *self {
            StateSpec::Form1 { a, .. } => Some((a, (1.0 - a * a).sqrt())),
            StateSpec::Memory(m) => Some((m.a, m.b())),
            _ => None,
        }
    }
}

fn parse_params(body: &str) -> Result<Vec<(String, f64)>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, found `{kv}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{v}` for `{k}`")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn take(params: &[(String, f64)], key: &str) -> Option<f64> {
    params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
}

fn reject_unknown(params: &[(String, f64)], allowed: &[&str]) -> Result<()> {
    match params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(Error::Parse(format!("unknown state parameter `{k}`"))),
        None => Ok(()),
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, body) = s.split_once(':').unwrap_or((s, ""));
        let params = parse_params(body)?;
        let need = |key: &str| {
            take(&params, key).ok_or_else(|| Error::Parse(format!("missing parameter `{key}`")))
        };
        match family.trim() {
            "form1" => {
                reject_unknown(&params, &["p", "d", "a"])?;
                Ok(StateSpec::Form1 {
                    p: need("p")?,
                    d: take(&params, "d").unwrap_or(0.0),
                    a: take(&params, "a").unwrap_or(FRAC_1_SQRT_2),
                })
            }
            "memory" => {
                reject_unknown(&params, &["a", "eta", "mu"])?;
                Ok(StateSpec::Memory(MemoryChannelParams::new(
                    need("a")?,
                    need("eta")?,
                    need("mu")?,
                )?))
            }
            "upb" => {
                reject_unknown(&params, &["p"])?;
                Ok(StateSpec::Upb {
                    p: take(&params, "p").unwrap_or(1.0),
                })
            }
            "mixed" => {
                reject_unknown(&params, &["n_a", "n_b"])?;
                let n_a = take(&params, "n_a").unwrap_or(2.0);
                let n_b = take(&params, "n_b").unwrap_or(2.0);
                Ok(StateSpec::Mixed(BipartiteDims::new(
                    n_a as usize,
                    n_b as usize,
                )?))
            }
            other => Err(Error::Parse(format!("unknown state family `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::{partial_trace, trace_product};
    use approx::assert_abs_diff_eq;

    fn mixed4() -> BipartiteState {
        BipartiteState::maximally_mixed(BipartiteDims::qubits())
    }

    #[test]
    fn noisy_target_endpoints() {
        let psi = singlet_plus();
        let pure = noisy_target(&psi, 1.0, &mixed4()).unwrap();
        assert_eq!(pure.rho(), &ComplexMatrix::projector(&psi).hermitian_part());
        let noise = noisy_target(&psi, 0.0, &mixed4()).unwrap();
        assert!(noise.rho().max_abs_diff(mixed4().rho()) < 1e-16);
    }

    #[test]
    fn noisy_target_at_separability_boundary() {
        let rho = noisy_target(&singlet_plus(), 1.0 / 3.0, &mixed4()).unwrap();
        assert_abs_diff_eq!(rho.pt_min_eigenvalue(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn noisy_target_rejects_bad_input() {
        assert!(noisy_target(&singlet_plus(), 1.5, &mixed4()).is_err());
        let mixed9 = BipartiteState::maximally_mixed(BipartiteDims::qutrits());
        assert!(noisy_target(&singlet_plus(), 0.5, &mixed9).is_err());
    }

    #[test]
    fn memory_state_without_depolarization_is_pure_target() {
        for mu in [0.0, 0.3, 1.0] {
            let s = memory_channel_state(MemoryChannelParams::new(FRAC_1_SQRT_2, 1.0, mu).unwrap())
                .unwrap();
            let expected = ComplexMatrix::projector(&singlet_plus());
            assert!(s.rho().max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn memory_state_fully_depolarized_is_mixed() {
        let s = memory_channel_state(MemoryChannelParams::new(0.3, 0.0, 0.0).unwrap()).unwrap();
        assert!(s.rho().max_abs_diff(mixed4().rho()) < 1e-16);
    }

    #[test]
    fn memory_state_perfect_memory_substitution() {
        // η = 0, μ = 1: (1 - ZZ + XX + YY)/4 = |ψ+><ψ+| + ... evaluated entrywise
        let s = memory_channel_state(MemoryChannelParams::new(FRAC_1_SQRT_2, 0.0, 1.0).unwrap())
            .unwrap();
        let (x, y, z) = (sigma_x(), sigma_y(), sigma_z());
        let expected = (&(&(&ComplexMatrix::identity(4) - &kron(&z, &z)) + &kron(&x, &x))
            + &kron(&y, &y))
            .scale(0.25);
        assert!(s.rho().max_abs_diff(&expected) < 1e-15);
        assert_abs_diff_eq!(s.rho().trace().re, 1.0, epsilon = 1e-15);
        assert!(min_eigenvalue(s.rho()).unwrap() > -1e-12);
        // a = b makes the symmetric correlation block equal the target projector
        assert!(
            s.rho()
                .max_abs_diff(&ComplexMatrix::projector(&singlet_plus()))
                < 1e-15
        );
    }

    #[test]
    fn memory_params_validated() {
        assert!(MemoryChannelParams::new(0.0, 0.5, 0.5).is_err());
        assert!(MemoryChannelParams::new(0.5, 1.2, 0.5).is_err());
        assert!(MemoryChannelParams::new(0.5, 0.5, -0.1).is_err());
    }

    #[test]
    fn upb_is_orthonormal_product_set() {
        let v = upb_states();
        for i in 0..5 {
            for j in 0..5 {
                let ip = v[i].inner(&v[j]);
                assert_abs_diff_eq!(ip.norm(), if i == j { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn upb_state_is_ppt_with_rank_four() {
        let rho = upb_rho_be();
        assert_abs_diff_eq!(rho.rho().trace().re, 1.0, epsilon = 1e-14);
        assert_eq!(crate::opalg::numerical_rank(rho.rho(), 1e-10), 4);
        assert!(rho.pt_min_eigenvalue() >= -1e-12);
        assert!(is_ppt(&rho, PPT_TOL));
        for psi in upb_states() {
            assert_abs_diff_eq!(
                trace_product(rho.rho(), &ComplexMatrix::projector(&psi)).unwrap(),
                0.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn upb_reduced_state_matches_local_factor_sum() {
        // Tr_B |a,b><a,b| = |a><a|, so ρ_A = (3·1 - Σ_i |a_i><a_i|)/4
        let rho = upb_rho_be();
        let ra = partial_trace(rho.rho(), rho.dims(), Subsystem::A).unwrap();
        let locals: [&[f64]; 5] = [
            &[1.0, 0.0, 0.0],
            &[1.0, -1.0, 0.0],
            &[0.0, 0.0, 1.0],
            &[0.0, 1.0, -1.0],
            &[1.0, 1.0, 1.0],
        ];
        let sum = locals.iter().fold(ComplexMatrix::zeros(3), |acc, a| {
            &acc + &ComplexMatrix::projector(&Ket::from_real(a).normalized())
        });
        let oracle = (&ComplexMatrix::identity(3).scale(3.0) - &sum).scale(0.25);
        assert!(ra.max_abs_diff(&oracle) < 1e-15);
        let frozen = ComplexMatrix::from_real_rows(&[
            &[7.0 / 24.0, 1.0 / 24.0, -1.0 / 12.0],
            &[1.0 / 24.0, 10.0 / 24.0, 1.0 / 24.0],
            &[-1.0 / 12.0, 1.0 / 24.0, 7.0 / 24.0],
        ]);
        assert!(ra.max_abs_diff(&frozen) < 1e-15);
        assert_abs_diff_eq!(ra.trace().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn upb_completion_forms_basis_with_first_four() {
        let mut all: Vec<Ket> = upb_states()[..4].to_vec();
        all.extend(upb_completion());
        let sum = all.iter().fold(ComplexMatrix::zeros(9), |acc, v| {
            &acc + &ComplexMatrix::projector(v)
        });
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(9)) < 1e-15);
    }

    #[test]
    fn zero_radius_noise_is_center() {
        let ball = NoiseBall::around_mixed(0.0, BipartiteDims::qubits()).unwrap();
        let mut r = rng::stream(1, 0);
        for _ in 0..10 {
            assert_eq!(sample_noise(&ball, &mut r).unwrap(), mixed4());
        }
    }

    #[test]
    fn noise_samples_stay_in_ball_and_psd() {
        let sampler =
            NoiseSampler::new(NoiseBall::around_mixed(0.2, BipartiteDims::qubits()).unwrap());
        let mut r = rng::stream(2, 0);
        for _ in 0..1000 {
            let s = sampler.sample(&mut r).unwrap();
            assert!(hs_distance(&s, &mixed4()) <= 0.2 + 1e-12);
            assert!(min_eigenvalue(s.rho()).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn noise_sample_mean_is_center() {
        let sampler =
            NoiseSampler::new(NoiseBall::around_mixed(0.25, BipartiteDims::qubits()).unwrap());
        let mut r = rng::stream(3, 0);
        let n = 100_000;
        let mut acc = ComplexMatrix::zeros(4);
        for _ in 0..n {
            acc = &acc + sampler.sample(&mut r).unwrap().rho();
        }
        let mean = acc.scale(1.0 / n as f64);
        assert!(mean.max_abs_diff(mixed4().rho()) < 0.01);
    }

    #[test]
    fn sampling_fails_for_oversized_balls() {
        let ball = NoiseBall::around_mixed(5.0, BipartiteDims::qubits()).unwrap();
        assert!(matches!(
            sample_noise(&ball, &mut rng::stream(4, 0)),
            Err(Error::SamplingFailed { .. })
        ));
    }

    #[test]
    fn ppt_verdicts() {
        assert!(is_ppt(&upb_rho_be(), PPT_TOL));
        let rho = noisy_target(&singlet_plus(), 0.5, &mixed4()).unwrap();
        assert_abs_diff_eq!(rho.pt_min_eigenvalue(), 0.125 - 0.25, epsilon = 1e-12);
        assert!(is_entangled_ppt_decisive(&rho).unwrap());
        assert!(!is_entangled_ppt_decisive(&mixed4()).unwrap());
        assert!(is_ppt(&mixed4(), PPT_TOL));
        assert!(matches!(
            is_entangled_ppt_decisive(&upb_rho_be()),
            Err(Error::PptNotDecisive { n_a: 3, n_b: 3 })
        ));
    }

    #[test]
    fn state_specs_parse_and_build() {
        let s: StateSpec = "form1:p=0.8,d=0,a=0.7071".parse().unwrap();
        assert!(matches!(s, StateSpec::Form1 { p, .. } if p == 0.8));
        s.build(None).unwrap();
        let noisy: StateSpec = "form1:p=0.8,d=0.1".parse().unwrap();
        assert!(noisy.build(None).is_err());
        assert_eq!(noisy.build(Some(5)).unwrap(), noisy.build(Some(5)).unwrap());
        let m: StateSpec = "memory:a=0.7071,eta=0.9,mu=0.5".parse().unwrap();
        m.build(None).unwrap();
        assert!("memory:a=0.7,eta=0.9".parse::<StateSpec>().is_err());
        assert!("form1:p=0.5,q=1".parse::<StateSpec>().is_err());
        assert!("bogus:p=1".parse::<StateSpec>().is_err());
        let u: StateSpec = "upb".parse().unwrap();
        assert_eq!(u.build(None).unwrap(), upb_rho_be());
    }
}
