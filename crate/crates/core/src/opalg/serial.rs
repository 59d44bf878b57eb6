//! JSON wire formats for matrices and kets.
//!
//! A matrix is `{"dim": n, "dims": [n_a, n_b], "entries": [[re, im], ...]}`
//! with entries in row-major order; `dims` is optional. A ket is a bare list
//! of `[re, im]` pairs. Floats are written in shortest round-trip form so
//! that a write/read cycle is bit-exact.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{c, BipartiteDims, ComplexMatrix, Ket};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixRecord {
    pub fn new(m: &ComplexMatrix, dims: Option<BipartiteDims>) -> Self {
        Self {
            dim: m.dim(),
            dims: dims.map(|d| [d.n_a, d.n_b]),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        if let Some([n_a, n_b]) = self.dims {
            BipartiteDims::new(n_a, n_b)?.check(self.dim)?;
        }
        ComplexMatrix::from_row_major(
            self.dim,
            self.entries.iter().map(|[re, im]| c(*re, *im)).collect(),
        )
    }

    pub fn bipartite_dims(&self) -> Result<Option<BipartiteDims>> {
        self.dims
            .map(|[n_a, n_b]| BipartiteDims::new(n_a, n_b))
            .transpose()
    }
}

pub fn matrix_to_json(m: &ComplexMatrix, dims: Option<BipartiteDims>) -> String {
    serde_json::to_string(&MatrixRecord::new(m, dims)).expect("matrix serialization")
}

pub fn matrix_from_json(s: &str) -> Result<(ComplexMatrix, Option<BipartiteDims>)> {
    let rec: MatrixRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((rec.matrix()?, rec.bipartite_dims()?))
}

impl Serialize for Ket {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.amplitudes().iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ket {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        Ok(Ket::new(
            pairs.into_iter().map(|[re, im]| c(re, im)).collect(),
        ))
    }
}

impl Serialize for BipartiteDims {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.n_a, self.n_b].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BipartiteDims {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [n_a, n_b] = <[usize; 2]>::deserialize(deserializer)?;
        BipartiteDims::new(n_a, n_b).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matrix_json_round_trip_is_bit_exact(
            vals in proptest::collection::vec((any::<f64>(), any::<f64>()), 9)
        ) {
            prop_assume!(vals.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
            let m = ComplexMatrix::from_row_major(3, vals.iter().map(|&(a, b)| c(a, b)).collect()).unwrap();
            let s = matrix_to_json(&m, None);
            let (back, dims) = matrix_from_json(&s).unwrap();
            prop_assert!(dims.is_none());
            for (x, y) in m.entries().iter().zip(back.entries()) {
                prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
                prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }

    #[test]
    fn dims_are_checked_on_read() {
        let s = r#"{"dim":2,"dims":[2,2],"entries":[[1,0],[0,0],[0,0],[1,0]]}"#;
        assert!(matrix_from_json(s).is_err());
        let s = r#"{"dim":4,"dims":[2,2],"entries":[[1,0]]}"#;
        assert!(matrix_from_json(s).is_err());
    }

    #[test]
    fn ket_serializes_as_pairs() {
        let k = Ket::new(vec![c(0.5, -0.25), c(0.0, 1.0)]);
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, "[[0.5,-0.25],[0.0,1.0]]");
        let back: Ket = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
    }
}
