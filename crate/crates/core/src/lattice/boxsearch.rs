//! Lattice points in axis-parallel boxes.
//!
//! Coefficient bounds come from the vertices of the polytope `{c : lo ≤ B·c ≤ hi}`; the
//! integer points inside those bounds are then enumerated, so an empty answer is a proof.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lattice::Lattice;
use super::matrix::IntegerMatrix;
use crate::rational::{ceil, dot_int, floor, inverse, qi, Q};

/// Precomputed row-subset inverses for repeated box queries against one basis.
#[derive(Clone, Debug)]
pub struct BoxSearcher {
    basis: IntegerMatrix,
    charts: Vec<(Vec<usize>, Vec<Vec<Q>>)>,
}

impl BoxSearcher {
    /// `basis` must have independent columns.
    pub fn new(basis: &IntegerMatrix) -> Self {
        let m = basis.cols();
        let mut charts = Vec::new();
        for rows in (0..basis.rows()).combinations(m) {
            let sub: Vec<Vec<Q>> = rows
                .iter()
                .map(|&i| basis.row(i).iter().map(qi).collect())
                .collect();
            if m == 0 {
                continue;
            }
            if let Some(inv) = inverse(&sub) {
                charts.push((rows, inv));
            }
        }
        BoxSearcher {
            basis: basis.clone(),
            charts,
        }
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    /// Exact real bounds `(min, max)` on each coefficient, or `None` if the polytope is empty.
    pub fn real_bounds(&self, lo: &[BigInt], hi: &[BigInt]) -> Option<(Vec<Q>, Vec<Q>)> {
        let n = self.basis.rows();
        let m = self.basis.cols();
        assert_eq!(lo.len(), n);
        assert_eq!(hi.len(), n);
        if lo.iter().zip(hi).any(|(l, h)| l > h) {
            return None;
        }
        if m == 0 {
            let ok = lo.iter().zip(hi).all(|(l, h)| !l.is_positive() && !h.is_negative());
            return ok.then(|| (Vec::new(), Vec::new()));
        }
        let rows: Vec<Vec<BigInt>> = (0..n).map(|i| self.basis.row(i)).collect();
        let mut min: Option<Vec<Q>> = None;
        let mut max: Option<Vec<Q>> = None;
        for (sel, inv) in &self.charts {
            for choice in 0..(1u32 << m) {
                let y: Vec<Q> = sel
                    .iter()
                    .enumerate()
                    .map(|(k, &i)| qi(if choice >> k & 1 == 1 { &hi[i] } else { &lo[i] }))
                    .collect();
                let c: Vec<Q> = inv.iter().map(|row| crate::rational::dot(row, &y)).collect();
                let feasible = rows.iter().enumerate().all(|(i, r)| {
                    let v = dot_int(r, &c);
                    qi(&lo[i]) <= v && v <= qi(&hi[i])
                });
                if !feasible {
                    continue;
                }
                match (&mut min, &mut max) {
                    (Some(mn), Some(mx)) => {
                        for j in 0..m {
                            if c[j] < mn[j] {
                                mn[j] = c[j].clone();
                            }
                            if c[j] > mx[j] {
                                mx[j] = c[j].clone();
                            }
                        }
                    }
                    _ => {
                        min = Some(c.clone());
                        max = Some(c);
                    }
                }
            }
        }
        Some((min?, max?))
    }

    /// Inclusive integer bounds on each coefficient, or `None` if no integer range survives.
    pub fn bounds(&self, lo: &[BigInt], hi: &[BigInt]) -> Option<Vec<(BigInt, BigInt)>> {
        let (min, max) = self.real_bounds(lo, hi)?;
        let out: Vec<(BigInt, BigInt)> = min
            .iter()
            .zip(&max)
            .map(|(a, b)| (ceil(a), floor(b)))
            .collect();
        if out.iter().any(|(a, b)| a > b) {
            return None;
        }
        Some(out)
    }

    /// Calls `f` on every coefficient vector `c` with `lo ≤ B·c ≤ hi`, in lexicographic order,
    /// until `f` returns `false`.
    pub fn for_each<F: FnMut(&[BigInt]) -> bool>(&self, lo: &[BigInt], hi: &[BigInt], mut f: F) {
        let Some(bounds) = self.bounds(lo, hi) else {
            return;
        };
        let m = bounds.len();
        let n = self.basis.rows();
        let mut c: Vec<BigInt> = bounds.iter().map(|(a, _)| a.clone()).collect();
        loop {
            let v = self.basis.mul_vec(&c);
            let inside = (0..n).all(|i| lo[i] <= v[i] && v[i] <= hi[i]);
            if inside && !f(&c) {
                return;
            }
            // odometer increment
            let mut k = m;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if c[k] < bounds[k].1 {
                    c[k] += BigInt::one();
                    for j in k + 1..m {
                        c[j] = bounds[j].0.clone();
                    }
                    break;
                }
            }
        }
    }
}

/// Inclusive integer bounds for the coefficients of points of `basis·c` inside the box.
pub fn coefficient_bounds(
    basis: &IntegerMatrix,
    lo: &[BigInt],
    hi: &[BigInt],
) -> Option<Vec<(BigInt, BigInt)>> {
    BoxSearcher::new(basis).bounds(lo, hi)
}

/// All coefficient vectors `c` with `lo ≤ basis·c ≤ hi`.
pub fn box_coefficients(basis: &IntegerMatrix, lo: &[BigInt], hi: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    BoxSearcher::new(basis).for_each(lo, hi, |c| {
        out.push(c.to_vec());
        true
    });
    out
}

/// Some point `u ∈ L` with `lo ≤ u ≤ hi`, preferring the origin when it is admissible.
pub fn box_lattice_point(l: &Lattice, lo: &[BigInt], hi: &[BigInt]) -> Option<Vec<BigInt>> {
    if lo.iter().zip(hi).all(|(a, b)| *a <= BigInt::zero() && BigInt::zero() <= *b) {
        return Some(vec![BigInt::zero(); lo.len()]);
    }
    let searcher = BoxSearcher::new(l.basis());
    let mut found = None;
    searcher.for_each(lo, hi, |c| {
        found = Some(l.basis().mul_vec(c));
        false
    });
    found
}
