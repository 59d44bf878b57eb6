//! Decompositions of operators into product projectors (pseudo-mixtures)
//! and into correlated local measurement settings.

mod bounds;
mod generic;
mod two_qubit;
mod upb;

use serde::{Deserialize, Serialize};

pub use bounds::{
    generalization_counts, settings_lower_bound, GeneralizationCounts, SettingsLowerBound,
};
pub use generic::generic_setting_decomposition;
pub use two_qubit::{
    onp_for_pure_pt, onp_two_qubit, ons_for_pure_pt, ons_two_qubit, x_basis, y_basis, z_basis,
};
pub use upb::{
    upb_bases, upb_identity_substitute, upb_onp_decomposition, upb_onp_settings, upb_onp_target,
    upb_witness_pseudomixture, upb_witness_settings,
};

use crate::error::{Error, Result};
use crate::opalg::{hs_norm, kron, BipartiteDims, ComplexMatrix, Ket, ProductPair};

/// Tolerance for ray equality and orthogonality when grouping projectors.
pub const RAY_TOL: f64 = 1e-10;

/// One weighted product projector `c |a><a| ⊗ |b><b|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub c: f64,
    pub a: Ket,
    pub b: Ket,
}

impl Term {
    pub fn new(c: f64, a: Ket, b: Ket) -> Self {
        Self { c, a, b }
    }

    pub fn pair(&self) -> ProductPair {
        ProductPair::new(self.a.clone(), self.b.clone())
    }
}

/// Real combination of product projectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoMixture {
    pub dims: BipartiteDims,
    pub terms: Vec<Term>,
}

impl PseudoMixture {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.terms
            .iter()
            .fold(ComplexMatrix::zeros(self.dims.total()), |acc, t| {
                &acc + &t.pair().projector().scale(t.c)
            })
    }

    pub fn coeff_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.c).sum()
    }

    pub fn negative_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.c).filter(|&c| c < 0.0).sum()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Groups the projectors into settings greedily: a term joins the first
    /// group where its local rays are each either already present or
    /// orthogonal to every ray there. The count is an upper bound on the
    /// settings this pseudo-mixture needs.
    pub fn to_settings(&self) -> SettingDecomposition {
        // (rays on A, rays on B, weighted slot entries)
        type Group = (Vec<Ket>, Vec<Ket>, Vec<(usize, usize, f64)>);
        let mut groups: Vec<Group> = Vec::new();
        for t in &self.terms {
            let placed = groups.iter_mut().any(|(ra, rb, entries)| {
                let (Some(k), Some(l)) = (
                    slot_for(ra, &t.a, self.dims.n_a),
                    slot_for(rb, &t.b, self.dims.n_b),
                ) else {
                    return false;
                };
                if k == ra.len() {
                    ra.push(t.a.normalized());
                }
                if l == rb.len() {
                    rb.push(t.b.normalized());
                }
                entries.push((k, l, t.c));
                true
            });
            if !placed {
                groups.push((
                    vec![t.a.normalized()],
                    vec![t.b.normalized()],
                    vec![(0, 0, t.c)],
                ));
            }
        }
        let settings = groups
            .into_iter()
            .map(|(ra, rb, entries)| {
                let basis_a = complete_basis(ra, self.dims.n_a);
                let basis_b = complete_basis(rb, self.dims.n_b);
                let mut weights = vec![vec![0.0; self.dims.n_b]; self.dims.n_a];
                for (k, l, c) in entries {
                    weights[k][l] += c;
                }
                Setting {
                    basis_a,
                    basis_b,
                    weights,
                }
            })
            .collect();
        SettingDecomposition {
            dims: self.dims,
            settings,
        }
    }
}

/// Index of `v` among `rays` if present, `rays.len()` if it is orthogonal to
/// all of them and there is room, `None` otherwise.
fn slot_for(rays: &[Ket], v: &Ket, dim: usize) -> Option<usize> {
    let v = v.normalized();
    let mut all_orthogonal = true;
    for (i, r) in rays.iter().enumerate() {
        let overlap = r.inner(&v).norm();
        if (overlap - 1.0).abs() <= RAY_TOL {
            return Some(i);
        }
        if overlap > RAY_TOL {
            all_orthogonal = false;
        }
    }
    (all_orthogonal && rays.len() < dim).then_some(rays.len())
}

/// Extends orthonormal `rays` to a full basis with Gram-Schmidt on the
/// computational basis.
fn complete_basis(mut rays: Vec<Ket>, dim: usize) -> Vec<Ket> {
    for i in 0..dim {
        if rays.len() == dim {
            break;
        }
        let mut v = Ket::basis(dim, i);
        for r in &rays {
            let p = r.inner(&v);
            v = Ket::new(
                v.amplitudes()
                    .iter()
                    .zip(r.amplitudes())
                    .map(|(x, y)| x - y * p)
                    .collect(),
            );
        }
        if v.norm() > 1e-8 {
            rays.push(v.normalized());
        }
    }
    rays
}

/// A correlated choice of local orthonormal bases with a weight per joint
/// outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    pub basis_a: Vec<Ket>,
    pub basis_b: Vec<Ket>,
    /// `weights[k][l]` multiplies `|a_k><a_k| ⊗ |b_l><b_l|`.
    pub weights: Vec<Vec<f64>>,
}

impl Setting {
    pub fn contribution(&self) -> ComplexMatrix {
        let dim = self.basis_a.len() * self.basis_b.len();
        let mut out = ComplexMatrix::zeros(dim);
        for (k, a) in self.basis_a.iter().enumerate() {
            let pa = ComplexMatrix::projector(a);
            for (l, b) in self.basis_b.iter().enumerate() {
                let w = self.weights[k][l];
                if w != 0.0 {
                    out = &out + &kron(&pa, &ComplexMatrix::projector(b)).scale(w);
                }
            }
        }
        out
    }

    pub fn n_nonzero(&self) -> usize {
        self.weights.iter().flatten().filter(|&&w| w != 0.0).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.n_nonzero() == 0
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().flatten().sum()
    }

    /// Deviation of both bases from orthonormality.
    pub fn orthonormality_defect(&self) -> f64 {
        [&self.basis_a, &self.basis_b]
            .iter()
            .flat_map(|basis| {
                basis.iter().enumerate().flat_map(move |(i, u)| {
                    basis.iter().enumerate().map(move |(j, v)| {
                        let target = if i == j { 1.0 } else { 0.0 };
                        (u.inner(v).norm() - target).abs()
                    })
                })
            })
            .fold(0.0, f64::max)
    }
}

/// For each ray of `from`, its index in `to`, if both bases consist of the
/// same rays.
fn ray_permutation(from: &[Ket], to: &[Ket]) -> Option<Vec<usize>> {
    if from.len() != to.len() {
        return None;
    }
    let mut used = vec![false; to.len()];
    from.iter()
        .map(|u| {
            let j = to
                .iter()
                .enumerate()
                .position(|(j, v)| !used[j] && u.same_ray(v, RAY_TOL))?;
            used[j] = true;
            Some(j)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingDecomposition {
    pub dims: BipartiteDims,
    pub settings: Vec<Setting>,
}

impl SettingDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.settings
            .iter()
            .fold(ComplexMatrix::zeros(self.dims.total()), |acc, s| {
                &acc + &s.contribution()
            })
    }

    /// Merges settings whose basis pairs coincide up to phases and outcome
    /// order, and drops settings with no nonzero weight.
    pub fn merged(&self) -> SettingDecomposition {
        let mut out: Vec<Setting> = Vec::new();
        for s in &self.settings {
            let target = out.iter_mut().find_map(|t| {
                let pa = ray_permutation(&s.basis_a, &t.basis_a)?;
                let pb = ray_permutation(&s.basis_b, &t.basis_b)?;
                Some((t, pa, pb))
            });
            match target {
                Some((t, pa, pb)) => {
                    for (k, &tk) in pa.iter().enumerate() {
                        for (l, &tl) in pb.iter().enumerate() {
                            t.weights[tk][tl] += s.weights[k][l];
                        }
                    }
                }
                None => out.push(s.clone()),
            }
        }
        out.retain(|s| !s.is_trivial());
        SettingDecomposition {
            dims: self.dims,
            settings: out,
        }
    }

    pub fn n_settings(&self) -> usize {
        self.merged().settings.len()
    }

    pub fn n_terms(&self) -> usize {
        self.settings.iter().map(Setting::n_nonzero).sum()
    }

    pub fn weight_sum(&self) -> f64 {
        self.settings.iter().map(Setting::weight_sum).sum()
    }
}

/// Either decomposition flavor; the JSON shapes differ by their `terms` /
/// `settings` field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Decomposition {
    Pseudo(PseudoMixture),
    Settings(SettingDecomposition),
}

impl Decomposition {
    pub fn dims(&self) -> BipartiteDims {
        match self {
            Decomposition::Pseudo(p) => p.dims,
            Decomposition::Settings(s) => s.dims,
        }
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        match self {
            Decomposition::Pseudo(p) => p.reconstruct(),
            Decomposition::Settings(s) => s.reconstruct(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Decomposition = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let dims = self.dims();
        let bad = |what: &str| Err(Error::Parse(format!("decomposition has malformed {what}")));
        match self {
            Decomposition::Pseudo(p) => {
                if p.terms
                    .iter()
                    .any(|t| t.a.dim() != dims.n_a || t.b.dim() != dims.n_b)
                {
                    return bad("term vectors");
                }
            }
            Decomposition::Settings(s) => {
                for st in &s.settings {
                    if st.basis_a.len() != dims.n_a
                        || st.basis_b.len() != dims.n_b
                        || st.basis_a.iter().any(|k| k.dim() != dims.n_a)
                        || st.basis_b.iter().any(|k| k.dim() != dims.n_b)
                        || st.weights.len() != dims.n_a
                        || st.weights.iter().any(|r| r.len() != dims.n_b)
                    {
                        return bad("settings");
                    }
                }
            }
        }
        Ok(())
    }
}

impl From<PseudoMixture> for Decomposition {
    fn from(p: PseudoMixture) -> Self {
        Decomposition::Pseudo(p)
    }
}

impl From<SettingDecomposition> for Decomposition {
    fn from(s: SettingDecomposition) -> Self {
        Decomposition::Settings(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_error: f64,
    pub coeff_sum: f64,
    pub n_terms: usize,
    pub n_settings: usize,
    pub within_tolerance: bool,
}

/// Compares a decomposition against its target; never fails, a dimension
/// mismatch shows up as an infinite error.
pub fn verify_decomposition(
    target: &ComplexMatrix,
    decomp: &Decomposition,
    tol: f64,
) -> VerifyReport {
    let max_error = if decomp.dims().total() == target.dim() {
        hs_norm(&(target - &decomp.reconstruct()))
    } else {
        f64::INFINITY
    };
    let (coeff_sum, n_terms, n_settings) = match decomp {
        Decomposition::Pseudo(p) => (p.coeff_sum(), p.n_terms(), p.to_settings().n_settings()),
        Decomposition::Settings(s) => (s.weight_sum(), s.n_terms(), s.n_settings()),
    };
    VerifyReport {
        max_error,
        coeff_sum,
        n_terms,
        n_settings,
        within_tolerance: max_error <= tol,
    }
}
