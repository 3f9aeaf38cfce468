use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::IntegerMatrix;
use crate::error::{Error, Result};

/// A lattice given by basis columns in `ℤ^n`.
///
/// Equality compares spans, not bases.
#[derive(Clone, Debug)]
pub struct Lattice {
    basis: IntegerMatrix,
    hnf: IntegerMatrix,
    hnf_u: IntegerMatrix,
}

impl Lattice {
    /// Rejects bases with dependent columns.
    pub fn new(basis: IntegerMatrix) -> Result<Self> {
        let rank = basis.rank();
        if rank != basis.cols() {
            return Err(Error::DependentColumns {
                rank,
                cols: basis.cols(),
            });
        }
        let (h, u) = basis.hermite_normal_form();
        Ok(Lattice {
            basis,
            hnf: h,
            hnf_u: u,
        })
    }

    pub fn from_columns(columns: &[Vec<BigInt>], ambient: usize) -> Result<Self> {
        Self::new(IntegerMatrix::from_columns(columns, ambient)?)
    }

    pub fn zero(ambient: usize) -> Self {
        Self::new(IntegerMatrix::zeros(ambient, 0)).expect("empty basis")
    }

    pub fn full(ambient: usize) -> Self {
        Self::new(IntegerMatrix::identity(ambient)).expect("identity basis")
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_rank(&self) -> usize {
        self.basis.rows()
    }

    /// The same lattice with its Hermite basis.
    pub fn canonical(&self) -> Lattice {
        Lattice::new(self.hnf.clone()).expect("hermite basis is independent")
    }

    /// Coefficients `c` with `basis · c = v`, if `v` lies in the lattice.
    pub fn coefficients(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient_rank() {
            return None;
        }
        let m = self.rank();
        let mut d = vec![BigInt::zero(); m];
        let mut row = 0;
        for k in 0..m {
            while self.hnf[(row, k)].is_zero() {
                row += 1;
            }
            let mut acc = v[row].clone();
            for (j, dj) in d.iter().enumerate().take(k) {
                acc -= &self.hnf[(row, j)] * dj;
            }
            let (q, r) = acc.div_rem(&self.hnf[(row, k)]);
            if !r.is_zero() {
                return None;
            }
            d[k] = q;
        }
        if self.hnf.mul_vec(&d) != v {
            return None;
        }
        Some(self.hnf_u.mul_vec(&d))
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coefficients(v).is_some()
    }

    /// Whether every basis vector of `self` lies in `other`.
    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.ambient_rank() == other.ambient_rank()
            && self.basis.to_columns().iter().all(|c| other.contains(c))
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank() == other.ambient_rank() && self.hnf == other.hnf
    }
}

impl Eq for Lattice {}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let basis = IntegerMatrix::deserialize(deserializer)?;
        Lattice::new(basis).map_err(serde::de::Error::custom)
    }
}

/// Saturated basis of `{v : A·v = 0}`, in Hermite form.
pub fn kernel_basis(a: &IntegerMatrix) -> Lattice {
    let (h, u) = a.hermite_normal_form();
    let rank = (0..h.cols()).filter(|&j| !h.col(j).iter().all(Zero::is_zero)).count();
    let cols: Vec<usize> = (rank..a.cols()).collect();
    let k = u.select_cols(&cols);
    Lattice::new(k).expect("kernel columns of a unimodular matrix are independent").canonical()
}

/// True iff every maximal minor of `b` lies in `{0, 1, -1}`.
pub fn is_unimodular(b: &IntegerMatrix) -> Result<bool> {
    let m = b.cols();
    let rank = b.rank();
    if rank != m {
        return Err(Error::DependentColumns { rank, cols: m });
    }
    for rows in (0..b.rows()).combinations(m) {
        let d = b.select_rows(&rows).determinant();
        if d.abs() > BigInt::one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `{(u, -u) : u ∈ L}` inside `ℤ^{2n}`.
pub fn lawrence_lift(l: &Lattice) -> Lattice {
    let b = l.basis();
    Lattice::new(b.vstack(&b.neg())).expect("lift preserves independence")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::big;

    #[test]
    fn kernel_of_row_of_ones() {
        let k = kernel_basis(&IntegerMatrix::from_rows(&[vec![1i64, 1]]));
        assert_eq!(k.basis().to_columns(), vec![big(&[1, -1])]);

        let k = kernel_basis(&IntegerMatrix::from_rows(&[vec![1i64, 1, 1]]));
        assert_eq!(k.rank(), 2);
        assert!(k.contains(&big(&[1, -1, 0])));
        assert!(k.contains(&big(&[0, 1, -1])));
        assert!(!k.contains(&big(&[1, 0, 0])));
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert_eq!(kernel_basis(&IntegerMatrix::identity(3)).rank(), 0);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel spanned by (2,-1), not (4,-2)
        let k = kernel_basis(&IntegerMatrix::from_rows(&[vec![2i64, 4]]));
        assert!(k.contains(&big(&[2, -1])));
    }

    #[test]
    fn unimodularity_examples() {
        let p2 = IntegerMatrix::from_rows(&[vec![1i64, 0], vec![0, 1], vec![-1, -1]]);
        assert!(is_unimodular(&p2).unwrap());
        let blp2 = IntegerMatrix::from_rows(&[vec![1i64, 0], vec![1, 1], vec![0, 1], vec![-1, -1]]);
        assert!(is_unimodular(&blp2).unwrap());
        let p12 = IntegerMatrix::from_rows(&[vec![1i64], vec![-2]]);
        assert!(!is_unimodular(&p12).unwrap());
        let dep = IntegerMatrix::from_rows(&[vec![1i64, 2], vec![2, 4]]);
        assert!(is_unimodular(&dep).is_err());
    }

    #[test]
    fn lawrence_lift_of_p1() {
        let l = Lattice::from_columns(&[big(&[1, -1])], 2).unwrap();
        let lift = lawrence_lift(&l);
        assert_eq!(lift.basis().to_columns(), vec![big(&[1, -1, -1, 1])]);
        assert_eq!(lawrence_lift(&Lattice::zero(3)).rank(), 0);
    }

    #[test]
    fn coefficients_recover_combination() {
        let b = IntegerMatrix::from_rows(&[vec![1i64, 0], vec![1, 1], vec![0, 1], vec![-1, -1]]);
        let l = Lattice::new(b.clone()).unwrap();
        let c = big(&[3, -7]);
        let v = b.mul_vec(&c);
        assert_eq!(l.coefficients(&v), Some(c));
        assert_eq!(l.coefficients(&big(&[1, 0, 0, 0])), None);
    }

    #[test]
    fn span_equality_ignores_basis() {
        let a = Lattice::from_columns(&[big(&[1, 0, -1]), big(&[0, 1, -1])], 3).unwrap();
        let b = Lattice::from_columns(&[big(&[1, -1, 0]), big(&[0, 1, -1])], 3).unwrap();
        assert_eq!(a, b);
    }
}
