//! Witness operators: the partial-transpose construction for NPT states,
//! edge witnesses for PPT entangled states, shifted witnesses and the
//! separability threshold for noisy two-qubit targets.

mod seesaw;

use serde::{Deserialize, Serialize};

pub use seesaw::{
    contract_a, contract_b, optimize_epsilon, optimize_epsilon_ratio, product_expectation,
    see_saw_trajectory, EpsilonResult, SeeSawConfig, Trajectory,
};

use crate::error::{Error, Result};
use crate::opalg::serial::MatrixRecord;
pub use crate::opalg::ProductPair;
use crate::opalg::{
    herm_eig, partial_transpose, BipartiteDims, ComplexMatrix, Subsystem, HERMITIAN_TOL,
};
use crate::states::{self, BipartiteState, PPT_TOL, SEPARABLE_BALL_RADIUS};

const PROJECTOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    NptEigvec,
    Edge,
    Shifted,
    Prewitness,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub op: ComplexMatrix,
    pub dims: BipartiteDims,
    pub kind: WitnessKind,
    pub provenance: Provenance,
}

impl Witness {
    pub fn new(
        op: ComplexMatrix,
        dims: BipartiteDims,
        kind: WitnessKind,
        provenance: Provenance,
    ) -> Result<Self> {
        dims.check(op.dim())?;
        op.ensure_hermitian()?;
        if kind != WitnessKind::Prewitness {
            let lo = herm_eig(&op)?.min_value();
            if lo >= -HERMITIAN_TOL {
                return Err(Error::InvalidArgument(format!(
                    "operator has no negative eigenvalue (minimum {lo:.3e}) and cannot be a witness"
                )));
            }
        }
        Ok(Self {
            op,
            dims,
            kind,
            provenance,
        })
    }

    pub fn record(&self) -> WitnessRecord {
        WitnessRecord {
            matrix: MatrixRecord::new(&self.op, Some(self.dims)),
            kind: self.kind,
            provenance: self.provenance.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("witness serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: WitnessRecord =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        rec.witness()
    }
}

/// Witness file layout: the matrix record plus `kind` and `provenance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    #[serde(flatten)]
    pub matrix: MatrixRecord,
    pub kind: WitnessKind,
    #[serde(default)]
    pub provenance: Provenance,
}

impl WitnessRecord {
    pub fn witness(&self) -> Result<Witness> {
        let op = self.matrix.matrix()?;
        let dims = self
            .matrix
            .bipartite_dims()?
            .ok_or_else(|| Error::Parse("witness file lacks `dims`".into()))?;
        Witness::new(op, dims, self.kind, self.provenance.clone())
    }
}

/// FNV-1a over the bit patterns of the matrix entries.
pub fn matrix_hash(m: &ComplexMatrix) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for z in m.entries() {
        for bits in [z.re.to_bits(), z.im.to_bits()] {
            for byte in bits.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
    format!("{h:016x}")
}

/// `W = (|e_-><e_-|)^{T_A}` with `e_-` the minimal eigenvector of `ρ^{T_A}`.
pub fn witness_from_npt(state: &BipartiteState) -> Result<Witness> {
    let pt = state.partial_transpose();
    let eig = herm_eig(&pt)?;
    let lambda_min = eig.min_value();
    if lambda_min >= -PPT_TOL {
        return Err(Error::NotNpt { lambda_min });
    }
    let e_minus = eig.min_vector();
    let op = partial_transpose(
        &ComplexMatrix::projector(e_minus),
        state.dims(),
        Subsystem::A,
    )?
    .hermitian_part();
    Witness::new(
        op,
        state.dims(),
        WitnessKind::NptEigvec,
        Provenance {
            source_hash: Some(matrix_hash(state.rho())),
            epsilon: None,
            note: Some(format!("lambda_min = {lambda_min:e}")),
        },
    )
}

fn check_projector(p: &ComplexMatrix) -> Result<()> {
    p.ensure_hermitian()?;
    let deviation = (&(p * p) - p)
        .entries()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if deviation > PROJECTOR_TOL {
        return Err(Error::NotProjector { deviation });
    }
    Ok(())
}

/// The witness for the two-qubit target `(|01> + |10>)/√2`, i.e. the
/// partial transpose of the projector onto `(|00> - |11>)/√2`.
pub fn canonical_two_qubit_witness() -> Witness {
    let target = BipartiteState::pure(&states::singlet_plus(), BipartiteDims::qubits())
        .expect("normalized target");
    witness_from_npt(&target).expect("target is entangled")
}

/// `(P + Q^{T_A})/2`
pub fn prewitness(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    dims: BipartiteDims,
) -> Result<ComplexMatrix> {
    dims.check(p.dim())?;
    dims.check(q.dim())?;
    check_projector(p)?;
    check_projector(q)?;
    let qt = partial_transpose(q, dims, Subsystem::A)?;
    Ok((p + &qt).scale(0.5).hermitian_part())
}

/// `W = (P + Q^{T_A})/2 - ε·1`; with `ε = 0` the result is the prewitness.
pub fn edge_witness(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    dims: BipartiteDims,
    epsilon: f64,
) -> Result<Witness> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            reason: "must be finite and non-negative",
        });
    }
    let pre = prewitness(p, q, dims)?;
    let op = &pre - &ComplexMatrix::identity(dims.total()).scale(epsilon);
    let kind = if epsilon == 0.0 {
        WitnessKind::Prewitness
    } else {
        WitnessKind::Edge
    };
    Witness::new(
        op,
        dims,
        kind,
        Provenance {
            epsilon: Some(epsilon),
            ..Provenance::default()
        },
    )
}

/// Projector onto the eigenspace of `m` with eigenvalue magnitude ≤ `tol`.
pub fn kernel_projector(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(m)?;
    Ok(eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(v, _)| v.abs() <= tol)
        .fold(ComplexMatrix::zeros(m.dim()), |acc, (_, v)| {
            &acc + &ComplexMatrix::projector(v)
        }))
}

/// Kernel projectors `P` of `ρ_BE` and `Q` of `ρ_BE^{T_A}`.
pub fn upb_kernel_projectors() -> (ComplexMatrix, ComplexMatrix) {
    let rho = states::upb_rho_be();
    let p = kernel_projector(rho.rho(), 1e-10).expect("Hermitian");
    let q = kernel_projector(&rho.partial_transpose(), 1e-10).expect("Hermitian");
    (p.hermitian_part(), q.hermitian_part())
}

/// `(P + Q^{T_A})/2` for the tiles UPB state.
pub fn upb_prewitness() -> ComplexMatrix {
    let (p, q) = upb_kernel_projectors();
    prewitness(&p, &q, BipartiteDims::qutrits()).expect("kernel projectors are projectors")
}

pub fn upb_edge_witness(epsilon: f64) -> Result<Witness> {
    let (p, q) = upb_kernel_projectors();
    edge_witness(&p, &q, BipartiteDims::qutrits(), epsilon)
}

/// `W_ε = W - ε·1`. For `ε > 0` this operator is negative on some separable
/// states, so its verdicts are heuristic.
pub fn shifted_witness(w: &Witness, epsilon: f64) -> Result<Witness> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            reason: "must be finite and non-negative",
        });
    }
    let op = &w.op - &ComplexMatrix::identity(w.dims.total()).scale(epsilon);
    let note = if epsilon > 0.0 {
        "shifted operator yields negative expectation values for some separable states"
    } else {
        "zero shift"
    };
    Ok(Witness {
        op,
        dims: w.dims,
        kind: WitnessKind::Shifted,
        provenance: Provenance {
            source_hash: w.provenance.source_hash.clone(),
            epsilon: Some(epsilon),
            note: Some(note.into()),
        },
    })
}

/// Lower threshold `τ(d)`: for the two-qubit target with `a = b` and noise
/// radius `d`, `Tr(Wρ) ≥ τ(d)` implies separability.
pub fn tau_bound(d: f64) -> Result<f64> {
    if !(0.0..=SEPARABLE_BALL_RADIUS).contains(&d) {
        return Err(Error::OutOfRange {
            name: "d",
            value: d,
            reason: "noise radius must lie in [0, 1/sqrt(12)]",
        });
    }
    let d2 = d * d;
    // (1/12 - d²)(3/4 - d²) = (1 - 12d²)(3 - 4d²)/48, exact at d = 0
    let prod = ((1.0 - 12.0 * d2) * (3.0 - 4.0 * d2)).max(0.0) / 48.0;
    Ok(0.25 - d2 - prod.sqrt())
}
