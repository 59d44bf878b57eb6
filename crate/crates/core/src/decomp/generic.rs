use super::{Setting, SettingDecomposition};
use crate::error::Result;
use crate::opalg::{generalized_expand, local_basis, BipartiteDims, ComplexMatrix};

/// Expansion coefficients below this (relative to the largest) are dropped.
const COEFF_TOL: f64 = 1e-14;

/// Valid but not necessarily minimal setting decomposition: every nonzero
/// product-basis term becomes one setting in the joint eigenbasis of its
/// two local factors, then settings with equal bases are merged. The
/// identity carries the computational basis, so it shares a setting with the
/// diagonal generators.
pub fn generic_setting_decomposition(
    op: &ComplexMatrix,
    dims: BipartiteDims,
) -> Result<SettingDecomposition> {
    let expansion = generalized_expand(op, dims)?;
    let ga = local_basis(dims.n_a);
    let gb = local_basis(dims.n_b);
    let scale = expansion
        .coeffs
        .iter()
        .flatten()
        .fold(0.0_f64, |m, c| m.max(c.abs()));
    let mut settings = Vec::new();
    for (i, row) in expansion.coeffs.iter().enumerate() {
        for (j, &coef) in row.iter().enumerate() {
            if coef.abs() <= COEFF_TOL * scale || coef == 0.0 {
                continue;
            }
            let (ea, eb) = (&ga[i], &gb[j]);
            let weights = ea
                .eigenvalues
                .iter()
                .map(|&x| eb.eigenvalues.iter().map(|&y| coef * x * y).collect())
                .collect();
            settings.push(Setting {
                basis_a: ea.eigenvectors.clone(),
                basis_b: eb.eigenvectors.clone(),
                weights,
            });
        }
    }
    Ok(SettingDecomposition { dims, settings }.merged())
}
