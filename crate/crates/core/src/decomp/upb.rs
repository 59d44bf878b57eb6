//! Decompositions of the tiles-UPB edge witness into local settings.
//!
//! Local bases (|0>, |1>, |2> computational):
//!
//! - `B1 = {|0>, |1>, |2>}`
//! - `B2 = {(|0>-|1>)/√2, |2>, (|0>+|1>)/√2}`
//! - `B3 = {(|1>-|2>)/√2, |0>, (|1>+|2>)/√2}`
//! - `B4 = {(|0>-|1>)/√2, (|0>+|1>+|2>)/√3, (|0>+|1>-2|2>)/√6}`

use super::{PseudoMixture, Setting, SettingDecomposition, Term};
use crate::opalg::{BipartiteDims, ComplexMatrix, Ket};

fn unit(v: &[f64]) -> Ket {
    Ket::from_real(v).normalized()
}

/// `[B1, B2, B3, B4]`
pub fn upb_bases() -> [Vec<Ket>; 4] {
    let b1 = vec![
        unit(&[1.0, 0.0, 0.0]),
        unit(&[0.0, 1.0, 0.0]),
        unit(&[0.0, 0.0, 1.0]),
    ];
    let b2 = vec![
        unit(&[1.0, -1.0, 0.0]),
        unit(&[0.0, 0.0, 1.0]),
        unit(&[1.0, 1.0, 0.0]),
    ];
    let b3 = vec![
        unit(&[0.0, 1.0, -1.0]),
        unit(&[1.0, 0.0, 0.0]),
        unit(&[0.0, 1.0, 1.0]),
    ];
    let b4 = vec![
        unit(&[1.0, -1.0, 0.0]),
        unit(&[1.0, 1.0, 1.0]),
        unit(&[1.0, 1.0, -2.0]),
    ];
    [b1, b2, b3, b4]
}

/// A product vector located in a setting: `(a basis, a index, b basis, b index)`.
type Slot = (usize, usize, usize, usize);

// ψ_0..ψ_4 of the UPB, then the completion ψ̄_4..ψ̄_8.
const PSI: [Slot; 5] = [
    (0, 0, 1, 0),
    (1, 0, 0, 2),
    (0, 2, 2, 0),
    (2, 0, 0, 0),
    (3, 1, 3, 1),
];
const PSI_BAR: [Slot; 5] = [
    (0, 0, 1, 2),
    (0, 2, 2, 2),
    (1, 2, 0, 2),
    (2, 2, 0, 0),
    (0, 1, 0, 1),
];

fn term(c: f64, (ba, ia, bb, ib): Slot) -> Term {
    let bases = upb_bases();
    Term::new(c, bases[ba][ia].clone(), bases[bb][ib].clone())
}

fn group(terms: &[(f64, Slot)]) -> SettingDecomposition {
    let bases = upb_bases();
    let mut settings: Vec<((usize, usize), Setting)> = Vec::new();
    for &(c, (ba, ia, bb, ib)) in terms {
        let idx = match settings.iter().position(|(key, _)| *key == (ba, bb)) {
            Some(i) => i,
            None => {
                settings.push((
                    (ba, bb),
                    Setting {
                        basis_a: bases[ba].clone(),
                        basis_b: bases[bb].clone(),
                        weights: vec![vec![0.0; 3]; 3],
                    },
                ));
                settings.len() - 1
            }
        };
        settings[idx].1.weights[ia][ib] += c;
    }
    SettingDecomposition {
        dims: BipartiteDims::qutrits(),
        settings: settings.into_iter().map(|(_, s)| s).collect(),
    }
}

fn witness_terms(epsilon: f64) -> Vec<(f64, Slot)> {
    let mut out: Vec<(f64, Slot)> = PSI[..4].iter().map(|&s| (1.0 - epsilon, s)).collect();
    out.push((1.0, PSI[4]));
    out.extend(PSI_BAR.iter().map(|&s| (-epsilon, s)));
    out.retain(|(c, _)| *c != 0.0);
    out
}

fn onp_terms(epsilon_prime: f64) -> Vec<(f64, Slot)> {
    let mut out: Vec<(f64, Slot)> = PSI.iter().map(|&s| (1.0 - epsilon_prime, s)).collect();
    out.extend(PSI_BAR[..4].iter().map(|&s| (-epsilon_prime, s)));
    out.retain(|(c, _)| *c != 0.0);
    out
}

/// `W = Σ_{i≤4} |ψ_i><ψ_i| - ε·1` with the identity resolved in the
/// orthonormal product basis `{ψ_0..ψ_3, ψ̄_4..ψ̄_8}`: ten projectors.
pub fn upb_witness_pseudomixture(epsilon: f64) -> PseudoMixture {
    PseudoMixture {
        dims: BipartiteDims::qutrits(),
        terms: witness_terms(epsilon)
            .into_iter()
            .map(|(c, s)| term(c, s))
            .collect(),
    }
}

/// The ten projectors grouped as B1B2, B2B1, B1B3, B3B1, B4B4, B1B1.
pub fn upb_witness_settings(epsilon: f64) -> SettingDecomposition {
    group(&witness_terms(epsilon))
}

/// `I = Σ` of the projectors onto `ψ_0..ψ_4, ψ̄_4..ψ̄_7`. These nine product
/// vectors are linearly independent, so `I` is positive definite.
pub fn upb_identity_substitute() -> ComplexMatrix {
    PSI.iter()
        .chain(&PSI_BAR[..4])
        .map(|&s| term(1.0, s).pair().projector())
        .fold(ComplexMatrix::zeros(9), |acc, p| &acc + &p)
}

/// `W̄ - ε'·I` with `W̄` the UPB projector.
pub fn upb_onp_target(epsilon_prime: f64) -> ComplexMatrix {
    let w_bar = PSI
        .iter()
        .map(|&s| term(1.0, s).pair().projector())
        .fold(ComplexMatrix::zeros(9), |acc, p| &acc + &p);
    &w_bar - &upb_identity_substitute().scale(epsilon_prime)
}

/// Nine projectors: `(1-ε')` on `ψ_0..ψ_4`, `-ε'` on `ψ̄_4..ψ̄_7`.
pub fn upb_onp_decomposition(epsilon_prime: f64) -> PseudoMixture {
    PseudoMixture {
        dims: BipartiteDims::qutrits(),
        terms: onp_terms(epsilon_prime)
            .into_iter()
            .map(|(c, s)| term(c, s))
            .collect(),
    }
}

/// The nine projectors grouped as B1B2, B2B1, B1B3, B3B1, B4B4.
pub fn upb_onp_settings(epsilon_prime: f64) -> SettingDecomposition {
    group(&onp_terms(epsilon_prime))
}
