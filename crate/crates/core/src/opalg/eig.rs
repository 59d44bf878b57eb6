use std::cmp::Ordering;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use super::matrix::{BipartiteDims, ComplexMatrix, Ket};
use crate::error::{Error, Result};

/// Eigenvalues within this distance of the minimum are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;
const AMPLITUDE_TOL: f64 = 1e-10;

/// Spectrum of a Hermitian matrix, ascending, with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: Vec<Ket>,
}

impl HermEig {
    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    /// Eigenvector for the minimal eigenvalue. Within a degenerate minimal
    /// eigenspace the vector whose modulus profile is lexicographically
    /// largest wins.
    pub fn min_vector(&self) -> &Ket {
        let lo = self.values[0];
        let cluster = self
            .values
            .iter()
            .take_while(|&&v| v - lo <= DEGENERACY_TOL)
            .count();
        self.vectors[..cluster]
            .iter()
            .max_by(|a, b| compare_modulus_profile(a, b))
            .expect("non-empty spectrum")
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.vectors[0].dim();
        let mut out = ComplexMatrix::zeros(dim);
        for (v, &e) in self.vectors.iter().zip(&self.values) {
            out = &out + &ComplexMatrix::projector(v).scale(e);
        }
        out
    }
}

fn compare_modulus_profile(a: &Ket, b: &Ket) -> Ordering {
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
        let (x, y) = (x.norm(), y.norm());
        if (x - y).abs() > AMPLITUDE_TOL {
            return x.partial_cmp(&y).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

/// Hermitian eigendecomposition, eigenvalues ascending, each eigenvector
/// phase-fixed so its first non-negligible amplitude is real positive.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermEig> {
    m.ensure_hermitian()?;
    let eig = SymmetricEigen::new(m.hermitian_part().to_nalgebra());
    Ok(sorted_eig(eig.eigenvalues.as_slice(), &eig.eigenvectors))
}

fn sorted_eig(values: &[f64], vectors: &DMatrix<Complex64>) -> HermEig {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let values_sorted = order.iter().map(|&i| values[i]).collect();
    let vectors_sorted = order
        .iter()
        .map(|&i| Ket::new(vectors.column(i).iter().copied().collect()).phase_fixed(AMPLITUDE_TOL))
        .collect();
    HermEig {
        values: values_sorted,
        vectors: vectors_sorted,
    }
}

pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(herm_eig(m)?.values)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(m)?.min_value())
}

/// Solves `A x = λ B x` for Hermitian `A` and positive definite `B`.
/// Eigenvectors are returned normalized in the Euclidean norm.
pub fn generalized_herm_eig(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<HermEig> {
    a.ensure_hermitian()?;
    b.ensure_hermitian()?;
    a.check_same_dim(b)?;
    let chol = Cholesky::new(b.hermitian_part().to_nalgebra()).ok_or_else(|| {
        Error::SingularDenominator {
            lambda_min: min_eigenvalue(b).unwrap_or(f64::NAN),
        }
    })?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(&a.hermitian_part().to_nalgebra())
        .ok_or(Error::SingularDenominator { lambda_min: 0.0 })?;
    let reduced = l
        .solve_lower_triangular(&x.adjoint())
        .ok_or(Error::SingularDenominator { lambda_min: 0.0 })?;
    let reduced = ComplexMatrix::from_nalgebra(&reduced).hermitian_part();
    let eig = SymmetricEigen::new(reduced.to_nalgebra());
    let back = l
        .adjoint()
        .solve_upper_triangular(&eig.eigenvectors)
        .ok_or(Error::SingularDenominator { lambda_min: 0.0 })?;
    let mut out = sorted_eig(eig.eigenvalues.as_slice(), &back);
    out.vectors = out.vectors.iter().map(Ket::normalized).collect();
    Ok(out)
}

/// Singular values of a real matrix, descending.
pub fn singular_values_real(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with singular values thresholded relative to the largest.
pub fn numerical_rank_real(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let s = singular_values_real(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel_tol * top).count(),
        _ => 0,
    }
}

/// Rank of a complex square matrix, relative threshold.
pub fn numerical_rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let mut s: Vec<f64> = SVD::new(m.to_nalgebra(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel_tol * top).count(),
        _ => 0,
    }
}

/// Schmidt decomposition `Σ_k c_k |a_k>|b_k>` of a bipartite vector.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub basis_a: Vec<Ket>,
    pub basis_b: Vec<Ket>,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> Ket {
        let dim = self.basis_a[0].dim() * self.basis_b[0].dim();
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for ((c, a), b) in self
            .coefficients
            .iter()
            .zip(&self.basis_a)
            .zip(&self.basis_b)
        {
            for (slot, z) in amps.iter_mut().zip(a.kron(b).amplitudes()) {
                *slot += z * c;
            }
        }
        Ket::new(amps)
    }
}

const SCHMIDT_ZERO: f64 = 1e-12;

pub fn schmidt(v: &Ket, dims: BipartiteDims) -> Result<SchmidtForm> {
    dims.check(v.dim())?;
    let m = DMatrix::from_row_slice(dims.n_a, dims.n_b, v.amplitudes());
    let svd = SVD::new(m, true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));

    let mut out = SchmidtForm {
        coefficients: Vec::new(),
        basis_a: Vec::new(),
        basis_b: Vec::new(),
    };
    for k in order {
        let s = svd.singular_values[k];
        if s <= SCHMIDT_ZERO {
            continue;
        }
        out.coefficients.push(s);
        out.basis_a
            .push(Ket::new(u.column(k).iter().copied().collect()));
        out.basis_b
            .push(Ket::new(v_t.row(k).iter().copied().collect()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::matrix::{cr, kron, Subsystem};
    use crate::opalg::partial::partial_transpose;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn reference_witness() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            &[0.5, 0.0, 0.0, 0.0],
            &[0.0, 0.0, -0.5, 0.0],
            &[0.0, -0.5, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.5],
        ])
    }

    fn assert_close(xs: &[f64], ys: &[f64], tol: f64) {
        assert_eq!(xs.len(), ys.len());
        for (x, y) in xs.iter().zip(ys) {
            assert!((x - y).abs() < tol, "{xs:?} vs {ys:?}");
        }
    }

    #[test]
    fn witness_spectrum() {
        let e = herm_eig(&reference_witness()).unwrap();
        assert_close(&e.values, &[-0.5, 0.5, 0.5, 0.5], 1e-12);
        assert!(e.reconstruct().max_abs_diff(&reference_witness()) < 1e-12);
    }

    #[test]
    fn identity_spectrum() {
        let e = herm_eig(&ComplexMatrix::identity(4)).unwrap();
        assert_close(&e.values, &[1.0; 4], 1e-14);
    }

    #[test]
    fn pt_of_bell_state_spectrum() {
        let psi = Ket::from_real(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]);
        let pt = partial_transpose(
            &ComplexMatrix::projector(&psi),
            BipartiteDims::qubits(),
            Subsystem::A,
        )
        .unwrap();
        assert_close(&eigvalsh(&pt).unwrap(), &[-0.5, 0.5, 0.5, 0.5], 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = cr(1.0);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn degenerate_minimum_is_deterministic() {
        // three-fold degenerate minimum; the tie-break must not depend on solver order
        let m = ComplexMatrix::diag(&[-1.0, -1.0, 2.0, -1.0]);
        let e = herm_eig(&m).unwrap();
        let v = e.min_vector();
        assert!(v.same_ray(&Ket::basis(4, 0), 1e-12));
        assert!(v[0].re > 0.0);
    }

    #[test]
    fn generalized_with_identity_matches_standard() {
        let w = reference_witness();
        let g = generalized_herm_eig(&w, &ComplexMatrix::identity(4)).unwrap();
        assert_close(&g.values, &[-0.5, 0.5, 0.5, 0.5], 1e-12);
        let b = ComplexMatrix::diag(&[1.0, 2.0, 4.0, 8.0]);
        let g = generalized_herm_eig(&w, &b).unwrap();
        for (v, &lam) in g.vectors.iter().zip(&g.values) {
            let lhs = w.apply(v);
            let rhs = b.apply(v);
            for i in 0..4 {
                assert!((lhs[i] - rhs[i] * lam).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn generalized_rejects_singular_denominator() {
        let b = ComplexMatrix::diag(&[1.0, 0.0, 1.0, 1.0]);
        assert!(matches!(
            generalized_herm_eig(&reference_witness(), &b),
            Err(Error::SingularDenominator { .. })
        ));
    }

    #[test]
    fn schmidt_examples() {
        let (a, b) = (0.8, 0.6);
        let psi = Ket::from_real(&[0.0, a, b, 0.0]);
        let s = schmidt(&psi, BipartiteDims::qubits()).unwrap();
        assert_close(&s.coefficients, &[a, b], 1e-12);
        assert!(s
            .reconstruct()
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .all(|(x, y)| (x - y).norm() < 1e-10));

        let s = schmidt(&Ket::basis(4, 0), BipartiteDims::qubits()).unwrap();
        assert_close(&s.coefficients, &[1.0], 1e-12);

        let r = 1.0 / 3f64.sqrt();
        let mut amps = vec![0.0; 9];
        amps[0] = r;
        amps[4] = r;
        amps[8] = r;
        let s = schmidt(&Ket::from_real(&amps), BipartiteDims::qutrits()).unwrap();
        assert_close(&s.coefficients, &[r, r, r], 1e-12);
    }

    #[test]
    fn rank_of_kron_product() {
        let m = kron(
            &ComplexMatrix::diag(&[1.0, 0.0]),
            &ComplexMatrix::identity(2),
        );
        assert_eq!(numerical_rank(&m, 1e-10), 2);
    }
}
