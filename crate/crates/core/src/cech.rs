//! Line bundles `O(n)` on the weighted projective line `P(a, b)`, computed on graded pieces of
//! `k[z₁, z₂]` with `deg z₁ = a`, `deg z₂ = b`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::matrix::integer_rank;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedProjLine {
    pub a: i64,
    pub b: i64,
}

impl WeightedProjLine {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a < 1 || b < 1 {
            return Err(Error::InvalidInput(format!("weights must be positive, got ({a}, {b})")));
        }
        if a.gcd(&b) != 1 {
            return Err(Error::InvalidInput(format!("weights ({a}, {b}) are not coprime")));
        }
        Ok(WeightedProjLine { a, b })
    }

    /// `#{(i, j) ≥ lo : a·i + b·j = n}`.
    fn count(&self, n: i64, lo: i64) -> usize {
        if n < (self.a + self.b) * lo {
            return 0;
        }
        (lo..=n / self.a)
            .filter(|i| {
                let rest = n - self.a * i;
                rest % self.b == 0 && rest / self.b >= lo
            })
            .count()
    }

    /// `(h⁰, h¹)` of `O(n)` by counting monomials.
    pub fn h_dims(&self, n: i64) -> (usize, usize) {
        (self.count(n, 0), self.count(-n, 1))
    }

    /// `(h⁰, h¹)` from the ranks of the two-chart Čech differential on degree-`n` Laurent monomials
    /// with exponents bounded by `max(|n|, a + b) + 4`.
    pub fn h_dims_cech(&self, n: i64) -> (usize, usize) {
        let w = n.abs().max(self.a + self.b) + 4;
        let mut cells = Vec::new();
        for i in -w..=w {
            let rest = n - self.a * i;
            if rest % self.b == 0 && (rest / self.b).abs() <= w {
                cells.push((i, rest / self.b));
            }
        }
        // C⁰ = S_{z₁} ⊕ S_{z₂}, C¹ = S_{z₁z₂}, all in degree n
        let chart1: Vec<usize> = (0..cells.len()).filter(|&k| cells[k].1 >= 0).collect();
        let chart2: Vec<usize> = (0..cells.len()).filter(|&k| cells[k].0 >= 0).collect();
        let mut rows = Vec::with_capacity(chart1.len() + chart2.len());
        for &k in &chart1 {
            let mut r = vec![BigInt::from(0); cells.len()];
            r[k] = BigInt::from(1);
            rows.push(r);
        }
        for &k in &chart2 {
            let mut r = vec![BigInt::from(0); cells.len()];
            r[k] = BigInt::from(-1);
            rows.push(r);
        }
        let c0 = rows.len();
        let rank = integer_rank(rows, cells.len());
        (c0 - rank, cells.len() - rank)
    }

    /// `Ext^k(O(i), O(j)) = H^k(O(j - i))` as `(k, dim)` pairs.
    pub fn ext_dims(&self, i: i64, j: i64) -> Vec<(usize, usize)> {
        let (h0, h1) = self.h_dims(j - i);
        vec![(0, h0), (1, h1)]
    }

    /// `h¹(n) = h⁰(-n - a - b)`.
    pub fn serre_duality_holds(&self, n: i64) -> bool {
        self.h_dims(n).1 == self.h_dims(-n - self.a - self.b).0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub exceptional: bool,
    pub violations: Vec<String>,
}

/// Each `O(t)` has one-dimensional `Hom` and no `Ext¹`, and every `Ext` from a later twist to an
/// earlier one vanishes.
pub fn exceptional_collection_check(x: &WeightedProjLine, twists: &[i64]) -> Result<ExceptionalReport> {
    if twists.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("twists must be strictly increasing".into()));
    }
    let mut violations = Vec::new();
    for &t in twists {
        let e = x.ext_dims(t, t);
        if e != [(0, 1), (1, 0)] {
            violations.push(format!("O({t}) is not exceptional: {e:?}"));
        }
    }
    for (k, &ti) in twists.iter().enumerate() {
        for &tj in &twists[k + 1..] {
            for (deg, dim) in x.ext_dims(tj, ti) {
                if dim != 0 {
                    violations.push(format!("Ext^{deg}(O({tj}), O({ti})) has dimension {dim}"));
                }
            }
        }
    }
    Ok(ExceptionalReport {
        exceptional: violations.is_empty(),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulDegree {
    pub degree: i64,
    pub injective: bool,
    pub exact_middle: bool,
    pub cokernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulReport {
    pub degrees: Vec<KoszulDegree>,
    /// Exact everywhere except for a cokernel concentrated in degree 0, which is killed by the
    /// irrelevant ideal and so vanishes as a sheaf.
    pub exact: bool,
}

/// Degree `d` part of `0 → S(-a-b) → S(-a) ⊕ S(-b) → S`, maps `f ↦ (z₂f, -z₁f)` and
/// `(g, h) ↦ z₁g + z₂h`, for `0 ≤ d ≤ N`.
pub fn koszul_sequence_check(x: &WeightedProjLine, max_degree: i64) -> KoszulReport {
    let (a, b) = (x.a, x.b);
    let monomials = |d: i64| -> Vec<(i64, i64)> {
        if d < 0 {
            return Vec::new();
        }
        (0..=d / a)
            .filter(|i| (d - a * i) % b == 0)
            .map(|i| (i, (d - a * i) / b))
            .collect()
    };
    let index = |basis: &[(i64, i64)], m: (i64, i64)| basis.iter().position(|&x| x == m).expect("monomial in basis");
    let mut degrees = Vec::new();
    for d in 0..=max_degree {
        let left = monomials(d - a - b);
        let mid_g = monomials(d - a);
        let mid_h = monomials(d - b);
        let right = monomials(d);
        let mid = mid_g.len() + mid_h.len();
        let zero = |len: usize| vec![BigInt::from(0); len];
        let mut first = Vec::new();
        for &(i, j) in &left {
            let mut r = zero(mid);
            r[index(&mid_g, (i, j + 1))] += 1;
            r[mid_g.len() + index(&mid_h, (i + 1, j))] -= 1;
            first.push(r);
        }
        let mut second = Vec::new();
        for &(i, j) in &mid_g {
            let mut r = zero(right.len());
            r[index(&right, (i + 1, j))] += 1;
            second.push(r);
        }
        for &(i, j) in &mid_h {
            let mut r = zero(right.len());
            r[index(&right, (i, j + 1))] += 1;
            second.push(r);
        }
        // the composite must vanish for the ranks to measure homology
        let composite_zero = first.iter().all(|r| {
            (0..right.len()).all(|c| {
                r.iter()
                    .zip(&second)
                    .map(|(x, row)| x * &row[c])
                    .sum::<BigInt>()
                    .is_zero()
            })
        });
        let r1 = integer_rank(first, mid);
        let r2 = integer_rank(second, right.len());
        degrees.push(KoszulDegree {
            degree: d,
            injective: r1 == left.len(),
            exact_middle: composite_zero && mid - r2 == r1,
            cokernel_dim: right.len() - r2,
        });
    }
    let exact = degrees
        .iter()
        .all(|k| k.injective && k.exact_middle && k.cokernel_dim == usize::from(k.degree == 0));
    KoszulReport { degrees, exact }
}
