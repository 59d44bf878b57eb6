use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opalg::{
    generalized_expand, hs_norm, numerical_rank_real, BipartiteDims, ComplexMatrix,
};

/// Singular values below this fraction of the largest count as zero.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SettingsLowerBound {
    /// Rank of the block of coefficients on traceless ⊗ traceless elements.
    pub correlation_rank: usize,
    /// `ceil(rank / (min(N, M) - 1))`: a single setting spans at most
    /// `min(N, M) - 1` independent correlation directions.
    pub correlation_bound: usize,
    /// `N + 1`, reported only when the caller flags the operator as the
    /// partial transpose of a full-Schmidt-rank projector.
    pub schmidt_bound: Option<usize>,
    pub value: usize,
}

/// Lower bound on the number of settings any decomposition of `op` needs.
/// For two qubits it is the rank of the 3×3 correlation block.
pub fn settings_lower_bound(
    op: &ComplexMatrix,
    dims: BipartiteDims,
    full_schmidt_rank: bool,
) -> Result<SettingsLowerBound> {
    let block = generalized_expand(op, dims)?.correlation_block();
    let correlation_rank = numerical_rank_real(&block, RANK_TOL);
    let per_setting = dims.n_a.min(dims.n_b) - 1;
    let correlation_bound = correlation_rank.div_ceil(per_setting);
    let schmidt_bound = full_schmidt_rank.then(|| dims.n_a.min(dims.n_b) + 1);
    let nonzero = usize::from(hs_norm(op) > 0.0);
    let value = correlation_bound
        .max(schmidt_bound.unwrap_or(0))
        .max(nonzero);
    Ok(SettingsLowerBound {
        correlation_rank,
        correlation_bound,
        schmidt_bound,
        value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizationCounts {
    pub n: usize,
    pub m: usize,
    pub onp_lower: usize,
    pub onp_upper: usize,
    pub ons_lower: usize,
    pub ons_upper: usize,
}

/// Term and setting counts for partial transposes of pure states in N×M,
/// N ≤ M. For N = 2 the exact values (5 terms, 3 settings) are reported as
/// both bounds.
pub fn generalization_counts(n: usize, m: usize) -> Result<GeneralizationCounts> {
    if n < 2 || n > m {
        return Err(Error::InvalidArgument(format!(
            "counts need 2 <= n <= m, got n = {n}, m = {m}"
        )));
    }
    let (onp_lower, onp_upper, ons_lower, ons_upper) = if n == 2 {
        (5, 5, 3, 3)
    } else {
        let ons_upper = if n.is_multiple_of(2) {
            2 * n - 1
        } else {
            2 * n
        };
        (n * n, 2 * n * n - n, n + 1, ons_upper)
    };
    Ok(GeneralizationCounts {
        n,
        m,
        onp_lower,
        onp_upper,
        ons_lower,
        ons_upper,
    })
}
