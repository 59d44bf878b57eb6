use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{c, ComplexMatrix, Ket};

/// Haar-uniform unit vector (normalized complex Gaussian).
pub fn haar_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Ket {
    let amps = (0..dim)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    Ket::new(amps).normalized()
}

/// Haar-random unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Ket> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = haar_ket(dim, rng);
        for u in &cols {
            let p = u.inner(&v);
            v = Ket::new(
                v.amplitudes()
                    .iter()
                    .zip(u.amplitudes())
                    .map(|(a, b)| a - b * p)
                    .collect(),
            );
        }
        if v.norm() > 1e-8 {
            cols.push(v.normalized());
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Hermitian matrix with independent Gaussian entries (GUE-like).
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + &g.adjoint()).scale(0.5)
}
