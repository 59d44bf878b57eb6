//! Orthogonal Hermitian operator bases and product-basis expansions.
//!
//! The local basis in dimension `d` is `{1, S_jk, A_jk, D_l}`: the identity,
//! symmetric and antisymmetric off-diagonal generators for each `j < k`, and
//! the generalized diagonal generators for `l = 1..d-1`. For `d = 2` this is
//! exactly `{σ_0, σ_x, σ_y, σ_z}`. Every non-identity element has
//! `Tr(G²) = 2`; the identity has `Tr(1²) = d`.
//!
//! Each element carries an explicit eigenbasis so that a product term
//! `G ⊗ H` can be realized by a single measurement setting.

use nalgebra::DMatrix;

use super::matrix::{c, cr, BipartiteDims, ComplexMatrix, Ket};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BasisElement {
    pub matrix: ComplexMatrix,
    /// `Tr(G²)`
    pub norm_sq: f64,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Ket>,
}

impl BasisElement {
    pub fn is_identity(&self) -> bool {
        self.eigenvalues.iter().all(|&v| v == 1.0)
    }
}

/// Generalized Gell-Mann basis with analytic eigenbases.
#[allow(clippy::needless_range_loop)]
pub fn local_basis(d: usize) -> Vec<BasisElement> {
    let computational: Vec<Ket> = (0..d).map(|i| Ket::basis(d, i)).collect();
    let mut out = vec![BasisElement {
        matrix: ComplexMatrix::identity(d),
        norm_sq: d as f64,
        eigenvalues: vec![1.0; d],
        eigenvectors: computational.clone(),
    }];
    let s = std::f64::consts::FRAC_1_SQRT_2;

    for j in 0..d {
        for k in (j + 1)..d {
            // eigenvectors: (|j> ± |k>)/√2, rest of the computational basis with eigenvalue 0
            let mut sym = ComplexMatrix::zeros(d);
            sym[(j, k)] = cr(1.0);
            sym[(k, j)] = cr(1.0);
            let mut vecs = Vec::with_capacity(d);
            let mut vals = Vec::with_capacity(d);
            for i in 0..d {
                if i == j {
                    let mut v = vec![cr(0.0); d];
                    v[j] = cr(s);
                    v[k] = cr(s);
                    vecs.push(Ket::new(v));
                    vals.push(1.0);
                } else if i == k {
                    let mut v = vec![cr(0.0); d];
                    v[j] = cr(s);
                    v[k] = cr(-s);
                    vecs.push(Ket::new(v));
                    vals.push(-1.0);
                } else {
                    vecs.push(computational[i].clone());
                    vals.push(0.0);
                }
            }
            out.push(BasisElement {
                matrix: sym,
                norm_sq: 2.0,
                eigenvalues: vals.clone(),
                eigenvectors: vecs,
            });

            let mut anti = ComplexMatrix::zeros(d);
            anti[(j, k)] = c(0.0, -1.0);
            anti[(k, j)] = c(0.0, 1.0);
            let mut vecs = Vec::with_capacity(d);
            for i in 0..d {
                if i == j || i == k {
                    let sign = if i == j { 1.0 } else { -1.0 };
                    let mut v = vec![cr(0.0); d];
                    v[j] = cr(s);
                    v[k] = c(0.0, sign * s);
                    vecs.push(Ket::new(v));
                } else {
                    vecs.push(computational[i].clone());
                }
            }
            out.push(BasisElement {
                matrix: anti,
                norm_sq: 2.0,
                eigenvalues: vals,
                eigenvectors: vecs,
            });
        }
    }

    for l in 1..d {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let vals: Vec<f64> = (0..d)
            .map(|i| match i.cmp(&l) {
                std::cmp::Ordering::Less => scale,
                std::cmp::Ordering::Equal => -(l as f64) * scale,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        out.push(BasisElement {
            matrix: ComplexMatrix::diag(&vals),
            norm_sq: 2.0,
            eigenvalues: vals,
            eigenvectors: computational.clone(),
        });
    }
    out
}

/// Coefficients of a Hermitian operator over `{G_i ⊗ H_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductExpansion {
    pub dims: BipartiteDims,
    /// `n_a² × n_b²`, row-major, `coeffs[i][j]` multiplies `G_i ⊗ H_j`.
    pub coeffs: Vec<Vec<f64>>,
}

impl ProductExpansion {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let ba = local_basis(self.dims.n_a);
        let bb = local_basis(self.dims.n_b);
        let mut out = ComplexMatrix::zeros(self.dims.total());
        for (i, g) in ba.iter().enumerate() {
            for (j, h) in bb.iter().enumerate() {
                let cij = self.coeffs[i][j];
                if cij != 0.0 {
                    out = &out + &super::matrix::kron(&g.matrix, &h.matrix).scale(cij);
                }
            }
        }
        out
    }

    /// The block of coefficients pairing two traceless generators.
    pub fn correlation_block(&self) -> DMatrix<f64> {
        let rows = self.coeffs.len() - 1;
        let cols = self.coeffs[0].len() - 1;
        DMatrix::from_fn(rows, cols, |i, j| self.coeffs[i + 1][j + 1])
    }
}

/// Expands a Hermitian operator over the orthogonal product basis.
pub fn generalized_expand(m: &ComplexMatrix, dims: BipartiteDims) -> Result<ProductExpansion> {
    dims.check(m.dim())?;
    m.ensure_hermitian()?;
    let ba = local_basis(dims.n_a);
    let bb = local_basis(dims.n_b);
    let nb = dims.n_b;
    let coeffs = ba
        .iter()
        .map(|g| {
            bb.iter()
                .map(|h| {
                    // Tr(m (G⊗H)) without forming the Kronecker product
                    let mut acc = cr(0.0);
                    for i in 0..dims.n_a {
                        for j in 0..nb {
                            for k in 0..dims.n_a {
                                let gki = g.matrix[(k, i)];
                                if gki == cr(0.0) {
                                    continue;
                                }
                                for l in 0..nb {
                                    acc += m[(i * nb + j, k * nb + l)] * gki * h.matrix[(l, j)];
                                }
                            }
                        }
                    }
                    acc.re / (g.norm_sq * h.norm_sq)
                })
                .collect()
        })
        .collect();
    Ok(ProductExpansion { dims, coeffs })
}

/// Two-qubit expansion `m = Σ λ_ij σ_i ⊗ σ_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliExpansion {
    pub lambda: [[f64; 4]; 4],
}

impl PauliExpansion {
    pub fn reconstruct(&self) -> ComplexMatrix {
        ProductExpansion {
            dims: BipartiteDims::qubits(),
            coeffs: self.lambda.iter().map(|r| r.to_vec()).collect(),
        }
        .reconstruct()
    }

    /// Lower-right 3×3 block of `λ`.
    pub fn correlation_block(&self) -> DMatrix<f64> {
        DMatrix::from_fn(3, 3, |i, j| self.lambda[i + 1][j + 1])
    }
}

pub fn pauli_expand(m: &ComplexMatrix) -> Result<PauliExpansion> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim(),
        });
    }
    let e = generalized_expand(m, BipartiteDims::qubits())?;
    let mut lambda = [[0.0; 4]; 4];
    for (i, row) in e.coeffs.iter().enumerate() {
        lambda[i].copy_from_slice(row);
    }
    Ok(PauliExpansion { lambda })
}
