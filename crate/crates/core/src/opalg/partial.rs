use num_complex::Complex64;

use super::matrix::{BipartiteDims, ComplexMatrix, Subsystem};
use crate::error::Result;

/// Transposes the indices of one subsystem. An involution that preserves
/// trace and Hermiticity.
pub fn partial_transpose(
    m: &ComplexMatrix,
    dims: BipartiteDims,
    subsystem: Subsystem,
) -> Result<ComplexMatrix> {
    dims.check(m.dim())?;
    let nb = dims.n_b;
    let mut out = ComplexMatrix::zeros(m.dim());
    for i in 0..dims.n_a {
        for j in 0..nb {
            for k in 0..dims.n_a {
                for l in 0..nb {
                    let v = m[(i * nb + j, k * nb + l)];
                    match subsystem {
                        Subsystem::A => out[(k * nb + j, i * nb + l)] = v,
                        Subsystem::B => out[(i * nb + l, k * nb + j)] = v,
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Traces out the subsystem not listed in `keep`.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: BipartiteDims,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    dims.check(m.dim())?;
    let nb = dims.n_b;
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(dims.n_a, |i, k| {
            (0..nb).map(|j| m[(i * nb + j, k * nb + j)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(nb, |j, l| {
            (0..dims.n_a).map(|i| m[(i * nb + j, i * nb + l)]).sum()
        }),
    })
}

/// `Tr(a† b)`
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    a.check_same_dim(b)?;
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `sqrt(Tr(m† m))`
pub fn hs_norm(m: &ComplexMatrix) -> f64 {
    m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `Tr(a b)` real part; the expectation value when one factor is a state.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.check_same_dim(b)?;
    let n = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::matrix::{cr, kron, sigma_z, Ket};

    fn psi_plus() -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ket::from_real(&[0.0, s, s, 0.0])
    }

    #[test]
    fn diagonal_matrix_is_fixed_by_pt() {
        let d = ComplexMatrix::diag(&[0.1, 0.2, 0.3, 0.4]);
        let pt = partial_transpose(&d, BipartiteDims::qubits(), Subsystem::A).unwrap();
        assert_eq!(pt, d);
    }

    #[test]
    fn pt_of_phi_matches_symbolic_expansion() {
        let (alpha, beta) = (0.8, -0.6);
        let phi = Ket::from_real(&[alpha, 0.0, 0.0, beta]);
        let pt = partial_transpose(
            &ComplexMatrix::projector(&phi),
            BipartiteDims::qubits(),
            Subsystem::A,
        )
        .unwrap();
        // alpha^2 |00><00| + beta^2 |11><11| + alpha beta (|01><10| + |10><01|)
        let mut expected = ComplexMatrix::zeros(4);
        expected[(0, 0)] = cr(alpha * alpha);
        expected[(3, 3)] = cr(beta * beta);
        expected[(1, 2)] = cr(alpha * beta);
        expected[(2, 1)] = cr(alpha * beta);
        assert!(pt.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn pt_rejects_bad_dims() {
        let m = ComplexMatrix::identity(5);
        assert!(partial_transpose(&m, BipartiteDims::qubits(), Subsystem::A).is_err());
        assert!(partial_trace(&m, BipartiteDims::qubits(), Subsystem::A).is_err());
    }

    #[test]
    fn partial_traces_of_simple_states() {
        let dims = BipartiteDims::qubits();
        let p00 = ComplexMatrix::projector(&Ket::basis(4, 0));
        let ra = partial_trace(&p00, dims, Subsystem::A).unwrap();
        assert_eq!(ra, ComplexMatrix::projector(&Ket::basis(2, 0)));

        let mixed = ComplexMatrix::identity(4).scale(0.25);
        let rb = partial_trace(&mixed, dims, Subsystem::B).unwrap();
        assert!(rb.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-16);

        let bell = ComplexMatrix::projector(&psi_plus());
        let ra = partial_trace(&bell, dims, Subsystem::A).unwrap();
        assert!(ra.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn hs_norms() {
        let a = ComplexMatrix::identity(4).scale(0.25);
        assert_eq!(hs_norm(&(&a - &a)), 0.0);
        let z = sigma_z().scale(0.5);
        assert!((hs_norm(&z) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let zz = kron(&sigma_z(), &sigma_z());
        let ip = hs_inner(&zz, &zz).unwrap();
        assert!((ip.re - hs_norm(&zz).powi(2)).abs() < 1e-12);
        assert!(hs_inner(&zz, &a.scale(1.0)).is_ok());
        assert!(hs_inner(&zz, &sigma_z()).is_err());
    }
}
