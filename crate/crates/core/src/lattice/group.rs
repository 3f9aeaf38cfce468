use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::{kernel_basis, Lattice};
use super::matrix::IntegerMatrix;
use crate::error::{Error, Result};

/// Finite abelian group in invariant-factor form `ℤ/d₁ ⊕ … ⊕ ℤ/d_k`, `d_i | d_{i+1}`, `d_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::from_moduli(&[BigInt::from(n)])
    }

    /// Normalizes an arbitrary product of cyclic groups into invariant-factor form.
    pub fn from_moduli(moduli: &[BigInt]) -> Result<Self> {
        if moduli.iter().any(|d| !d.is_positive()) {
            return Err(Error::InvalidInput("cyclic factors must be positive".into()));
        }
        let k = moduli.len();
        let mut diag = IntegerMatrix::zeros(k, k);
        for (i, d) in moduli.iter().enumerate() {
            diag[(i, i)] = d.clone();
        }
        let invariant_factors = diag
            .invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        Ok(FiniteAbelianGroup { invariant_factors })
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.invariant_factors.len()]
    }

    pub fn reduce(&self, g: &[BigInt]) -> Vec<BigInt> {
        g.iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| x.mod_floor(d))
            .collect()
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.add(a, &self.neg(b))
    }

    /// All elements in lexicographic order of residues.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![Vec::new()];
        for d in &self.invariant_factors {
            let d = d.to_u64().expect("group factor fits in u64");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for prefix in &out {
                for r in 0..d {
                    let mut e = prefix.clone();
                    e.push(BigInt::from(r));
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }
}

/// Quotient map `L → L/L̃` expressed on coefficient vectors with respect to the basis of `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetLabeling {
    pub group: FiniteAbelianGroup,
    /// Rows of the Smith left transform that carry nontrivial factors.
    pub projection: IntegerMatrix,
}

impl CosetLabeling {
    /// Coset of the lattice vector with basis coefficients `c`.
    pub fn label_coefficients(&self, c: &[BigInt]) -> Vec<BigInt> {
        self.group.reduce(&self.projection.mul_vec(c))
    }

    /// Coset of an ambient vector of `L`; `None` if it is not in `L`.
    pub fn label(&self, l: &Lattice, v: &[BigInt]) -> Option<Vec<BigInt>> {
        l.coefficients(v).map(|c| self.label_coefficients(&c))
    }
}

/// `L/L̃` with its labeling.
pub fn quotient_group(l: &Lattice, sub: &Lattice) -> Result<CosetLabeling> {
    if sub.ambient_rank() != l.ambient_rank() {
        return Err(Error::DimensionMismatch(
            "lattices live in different ambient spaces".into(),
        ));
    }
    if sub.rank() < l.rank() {
        return Err(Error::InfiniteIndex {
            sub_rank: sub.rank(),
            rank: l.rank(),
        });
    }
    let mut coeff_cols = Vec::with_capacity(sub.rank());
    for v in sub.basis().to_columns() {
        coeff_cols.push(l.coefficients(&v).ok_or(Error::NotSublattice)?);
    }
    let c = IntegerMatrix::from_columns(&coeff_cols, l.rank())?;
    let (d, p, _) = c.smith_normal_form();
    let m = l.rank();
    let mut factors = Vec::new();
    let mut rows = Vec::new();
    for i in 0..m {
        if !d[(i, i)].is_one() {
            factors.push(d[(i, i)].clone());
            rows.push(i);
        }
    }
    Ok(CosetLabeling {
        group: FiniteAbelianGroup {
            invariant_factors: factors,
        },
        projection: p.select_rows(&rows),
    })
}

/// The kernel `L̃` of the homomorphism `L → ⊕ ℤ/moduli_i` sending basis vector `j` to `images[j]`.
///
/// Fails with `NotSurjective` unless the map is onto.
pub fn cofinite_sublattice(
    l: &Lattice,
    moduli: &[BigInt],
    images: &[Vec<BigInt>],
) -> Result<(Lattice, CosetLabeling)> {
    let m = l.rank();
    let k = moduli.len();
    if images.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} images for a rank {} lattice",
            images.len(),
            m
        )));
    }
    if moduli.iter().any(|d| !d.is_positive()) {
        return Err(Error::InvalidInput("cyclic factors must be positive".into()));
    }
    let map = IntegerMatrix::from_columns(images, k)?;
    let mut rel = IntegerMatrix::zeros(k, k);
    for (i, d) in moduli.iter().enumerate() {
        rel[(i, i)] = -d;
    }
    let ker = kernel_basis(&map.hstack(&rel));
    let proj = ker.basis().select_rows(&(0..m).collect::<Vec<_>>());
    let (h, _) = proj.hermite_normal_form();
    let nonzero: Vec<usize> = (0..h.cols())
        .filter(|&j| !h.col(j).iter().all(Zero::is_zero))
        .collect();
    let coeffs = h.select_cols(&nonzero);
    let order: BigInt = moduli.iter().product();
    let index = if coeffs.cols() == m {
        coeffs.determinant().abs()
    } else {
        BigInt::zero()
    };
    if index != order {
        return Err(Error::NotSurjective {
            image_index: index.to_string(),
            order: order.to_string(),
        });
    }
    let sub = Lattice::new(l.basis().mul(&coeffs))?;
    let labeling = quotient_group(l, &sub)?;
    Ok((sub, labeling))
}
