//! Fans, class groups and the toric invariants the arrangement pipeline needs.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{big, is_unimodular, kernel_basis, FiniteAbelianGroup, IntegerMatrix, Lattice};
use crate::rational::{dot_int, find_point, nullspace, primitive_integer, q, solve, Constraint, Rel, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Validates ray primitivity, index ranges and that no maximal cone contains another.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "ray {} has length {}, expected {}",
                    i,
                    r.len(),
                    dim
                )));
            }
            let g = r.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g != 1 {
                return Err(Error::NonPrimitiveRay {
                    index: i,
                    ray: r.clone(),
                });
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for c in max_cones {
            let set: BTreeSet<usize> = c.iter().copied().collect();
            if set.len() != c.len() {
                return Err(Error::InvalidInput(format!("cone {c:?} repeats a ray")));
            }
            if let Some(&bad) = set.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidInput(format!("ray index {bad} out of range")));
            }
            cones.push(set.into_iter().collect::<Vec<_>>());
        }
        for (a, b) in (0..cones.len()).tuple_combinations() {
            let sa: BTreeSet<_> = cones[a].iter().collect();
            let sb: BTreeSet<_> = cones[b].iter().collect();
            if sa.is_subset(&sb) || sb.is_subset(&sa) {
                return Err(Error::InvalidInput(format!(
                    "maximal cones {a} and {b} are nested"
                )));
            }
        }
        Ok(Fan {
            dim,
            rays,
            max_cones: cones,
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Fan = serde_json::from_str(s)?;
        Fan::new(raw.dim, raw.rays, raw.max_cones)
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    /// Rows are the ray generators.
    pub fn ray_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(&self.rays)
    }

    /// Rays that lie in no maximal cone.
    pub fn i_empty(&self) -> Vec<usize> {
        (0..self.n_rays())
            .filter(|i| !self.max_cones.iter().any(|c| c.contains(i)))
            .collect()
    }

    fn check_spanning(&self) -> Result<()> {
        let rank = self.ray_matrix().rank();
        if rank != self.dim {
            return Err(Error::TorusFactor {
                rank,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// `L = Im(B)`, with the columns of `B` as basis.
    pub fn principal_lattice(&self) -> Result<Lattice> {
        self.check_spanning()?;
        Lattice::new(self.ray_matrix())
    }

    pub fn class_group(&self) -> Result<DegreeMap> {
        self.check_spanning()?;
        Ok(DegreeMap::cokernel(&self.ray_matrix()))
    }

    fn cone_matrix(&self, cone: &[usize]) -> IntegerMatrix {
        IntegerMatrix::from_rows(&cone.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>())
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones
            .iter()
            .all(|c| self.cone_matrix(c).rank() == c.len())
    }

    /// Each maximal cone's rays extend to a basis of `ℤ^d`.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| {
            let m = self.cone_matrix(c);
            m.rank() == c.len() && m.invariant_factors().iter().all(One::is_one)
        })
    }

    /// Facet pairing: every facet of a full-dimensional simplicial cone lies in exactly two
    /// maximal cones, on opposite sides of the facet hyperplane.
    pub fn is_complete(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        if self.max_cones.is_empty() || !self.is_simplicial() {
            return false;
        }
        if self.max_cones.iter().any(|c| c.len() != self.dim) {
            return false;
        }
        let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &self.max_cones {
            for f in c.iter().copied().combinations(self.dim - 1) {
                facets.insert(f);
            }
        }
        for f in facets {
            let rows: Vec<Vec<Q>> = f
                .iter()
                .map(|&i| self.rays[i].iter().map(|&x| q(x)).collect())
                .collect();
            let normals = nullspace(&rows, self.dim);
            if normals.len() != 1 {
                return false;
            }
            let normal = &normals[0];
            let mut sides = Vec::new();
            for c in &self.max_cones {
                if f.iter().all(|i| c.contains(i)) {
                    let apex = c.iter().find(|i| !f.contains(i)).unwrap();
                    let s = dot_int(&big(&self.rays[*apex]), normal);
                    sides.push(s.is_positive());
                }
            }
            if sides.len() != 2 || sides[0] == sides[1] {
                return false;
            }
        }
        true
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        self.check_spanning()?;
        is_unimodular(&self.ray_matrix())
    }

    /// Per maximal cone: `Some(true)` iff it is a smooth full-dimensional cone; `None` when the
    /// cone is not full-dimensional.
    pub fn affine_chart_check(&self) -> Vec<Option<bool>> {
        self.max_cones
            .iter()
            .map(|c| {
                if c.len() != self.dim {
                    return None;
                }
                Some(self.cone_matrix(c).determinant().abs().is_one())
            })
            .collect()
    }

    pub fn check(&self) -> Result<FanReport> {
        let cl = self.class_group()?;
        Ok(FanReport {
            smooth: self.is_smooth(),
            simplicial: self.is_simplicial(),
            complete: self.is_complete(),
            unimodular: self.is_unimodular()?,
            fano_per_cone: (0..self.max_cones.len())
                .map(|i| self.fano_support_vector(&self.max_cones[i]).is_some())
                .collect(),
            affine_charts: self.affine_chart_check(),
            class_group: ClassGroupReport {
                free_rank: cl.free_rank(),
                torsion: cl.group.invariant_factors().iter().map(|d| d.to_string()).collect(),
                pi: cl.pi_free.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect(),
            },
            i_empty: self.i_empty(),
        })
    }

    /// Generators `x^σ̂` (complement indicators), or with `product` all `x^σ̂₁ y^σ̂₂`.
    pub fn irrelevant_ideal(&self, product: bool) -> SquarefreeMonomialIdeal {
        let n = self.n_rays();
        let single: Vec<Vec<u8>> = self
            .max_cones
            .iter()
            .map(|c| (0..n).map(|i| u8::from(!c.contains(&i))).collect())
            .collect();
        if !product {
            return SquarefreeMonomialIdeal {
                nvars: n,
                paired: false,
                generators: single,
            };
        }
        let mut gens = Vec::with_capacity(single.len() * single.len());
        for a in &single {
            for b in &single {
                let mut g = a.clone();
                g.extend_from_slice(b);
                gens.push(g);
            }
        }
        SquarefreeMonomialIdeal {
            nvars: n,
            paired: true,
            generators: gens,
        }
    }

    /// Integer functional vanishing on common rays, positive on `σ₁∖σ₂`, negative on `σ₂∖σ₁`.
    pub fn separation_functional(&self, sigma1: &[usize], sigma2: &[usize]) -> Result<Vec<BigInt>> {
        if sigma1 == sigma2 {
            return Ok(vec![BigInt::zero(); self.dim]);
        }
        let mut cons = Vec::new();
        for &i in sigma1.iter().chain(sigma2) {
            let coeffs: Vec<Q> = self.rays[i].iter().map(|&x| q(x)).collect();
            let (a, b) = (sigma1.contains(&i), sigma2.contains(&i));
            let (rel, rhs) = match (a, b) {
                (true, true) => (Rel::Eq, q(0)),
                (true, false) => (Rel::Ge, q(1)),
                _ => (Rel::Le, q(-1)),
            };
            cons.push(Constraint::new(coeffs, rel, rhs));
        }
        let label = |s: &[usize]| {
            self.max_cones
                .iter()
                .position(|c| c == s)
                .unwrap_or(usize::MAX)
        };
        let p = find_point(self.dim, &cons)
            .ok_or_else(|| Error::NotSeparable(label(sigma1), label(sigma2)))?;
        Ok(primitive_integer(&p))
    }

    /// The principal divisor `v = B·m` with `⟨m, u_ρ⟩ = -1` on `σ` and `v ≥ 0` off `σ`, if any.
    pub fn fano_support_vector(&self, sigma: &[usize]) -> Option<Vec<BigInt>> {
        if sigma.len() != self.dim {
            return None;
        }
        let a: Vec<Vec<Q>> = sigma
            .iter()
            .map(|&i| self.rays[i].iter().map(|&x| q(x)).collect())
            .collect();
        let m = solve(&a, &vec![q(-1); self.dim])?;
        if m.iter().any(|x| !x.is_integer()) {
            return None;
        }
        let m: Vec<BigInt> = m.iter().map(|x| x.to_integer()).collect();
        let v = self.ray_matrix().mul_vec(&m);
        let ok = (0..self.n_rays())
            .filter(|i| !sigma.contains(i))
            .all(|i| !v[i].is_negative());
        ok.then_some(v)
    }
}

/// Report printed by `fan check`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanReport {
    pub smooth: bool,
    pub simplicial: bool,
    pub complete: bool,
    pub unimodular: bool,
    pub fano_per_cone: Vec<bool>,
    pub affine_charts: Vec<Option<bool>>,
    pub class_group: ClassGroupReport,
    #[serde(rename = "I_empty")]
    pub i_empty: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupReport {
    pub free_rank: usize,
    pub torsion: Vec<String>,
    pub pi: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeMonomialIdeal {
    pub nvars: usize,
    /// Generators are over `x₁..x_n, y₁..y_n` when set.
    pub paired: bool,
    pub generators: Vec<Vec<u8>>,
}

impl SquarefreeMonomialIdeal {
    pub fn generator_exponents(&self) -> Vec<Vec<i64>> {
        self.generators
            .iter()
            .map(|g| g.iter().map(|&e| i64::from(e)).collect())
            .collect()
    }
}

/// The projection `ℤ^n → ℤ^n / Im(A) ≅ ℤ^r ⊕ G`.
///
/// The free part is the canonical kernel basis of `Aᵀ`; the torsion part comes from the Smith form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeMap {
    pub pi_free: IntegerMatrix,
    pub torsion_rows: IntegerMatrix,
    pub group: FiniteAbelianGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradedClass {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl DegreeMap {
    pub fn cokernel(a: &IntegerMatrix) -> Self {
        let n = a.rows();
        let free = kernel_basis(&a.transpose());
        let pi_free = free.basis().transpose();
        let (d, p, _) = a.smith_normal_form();
        let mut rows = Vec::new();
        let mut factors = Vec::new();
        for i in 0..n.min(a.cols()) {
            let di = &d[(i, i)];
            if !di.is_zero() && !di.is_one() {
                rows.push(i);
                factors.push(di.clone());
            }
        }
        DegreeMap {
            pi_free,
            torsion_rows: p.select_rows(&rows),
            group: FiniteAbelianGroup::from_moduli(&factors).expect("positive factors"),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.pi_free.rows()
    }

    pub fn class(&self, v: &[BigInt]) -> GradedClass {
        GradedClass {
            free: self.pi_free.mul_vec(v),
            torsion: self.group.reduce(&self.torsion_rows.mul_vec(v)),
        }
    }

    pub fn class_i64(&self, v: &[i64]) -> GradedClass {
        self.class(&big(v))
    }

    pub fn is_zero(&self, c: &GradedClass) -> bool {
        c.free.iter().all(Zero::is_zero) && c.torsion.iter().all(Zero::is_zero)
    }
}

pub mod examples {
    //! Standard fans used by the corpus and tests.
    use super::Fan;

    pub fn p1() -> Fan {
        Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
    }

    pub fn p2() -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap()
    }

    /// Blow-up of the plane at a torus-fixed point.
    pub fn blp2() -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }

    /// The same rays with the exceptional ray in no cone.
    pub fn blp2_other() -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }

    /// Blow-up of `blp2` along a point of the exceptional divisor.
    pub fn double_blowup() -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![2, 1], vec![1, 1], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn class_groups() {
        let c = p1().class_group().unwrap();
        assert_eq!(c.pi_free, IntegerMatrix::from_rows(&[vec![1i64, 1]]));
        assert!(c.group.is_trivial());
        let c = p2().class_group().unwrap();
        assert_eq!(c.pi_free, IntegerMatrix::from_rows(&[vec![1i64, 1, 1]]));
        let c = blp2().class_group().unwrap();
        assert_eq!(c.free_rank(), 2);
        assert!(c.group.is_trivial());
        // relations D1+D2-D4 and D2+D3-D4 map to zero
        assert!(c.is_zero(&c.class_i64(&[1, 1, 0, -1])));
        assert!(c.is_zero(&c.class_i64(&[0, 1, 1, -1])));
        assert!(!c.is_zero(&c.class_i64(&[1, 0, 0, 0])));
    }

    #[test]
    fn pi_kills_b() {
        for f in [p1(), p2(), blp2(), double_blowup()] {
            let c = f.class_group().unwrap();
            let b = f.ray_matrix();
            assert!(c.pi_free.mul(&b).is_zero());
            assert_eq!(c.pi_free.rank() + b.rank(), f.n_rays());
        }
    }

    #[test]
    fn torus_factor_rejected() {
        let f = Fan::new(2, vec![vec![1, 0], vec![-1, 0]], vec![vec![0], vec![1]]).unwrap();
        assert!(matches!(f.class_group(), Err(Error::TorusFactor { .. })));
    }

    #[test]
    fn principal_lattices() {
        let l = p1().principal_lattice().unwrap();
        assert_eq!(l, Lattice::from_columns(&[big(&[1, -1])], 2).unwrap());
        let l = p2().principal_lattice().unwrap();
        assert_eq!(
            l,
            Lattice::from_columns(&[big(&[1, 0, -1]), big(&[0, 1, -1])], 3).unwrap()
        );
        let l = blp2().principal_lattice().unwrap();
        assert_eq!(
            l,
            Lattice::from_columns(&[big(&[1, 1, 0, -1]), big(&[0, 1, 1, -1])], 4).unwrap()
        );
    }

    #[test]
    fn structural_checks() {
        let f = p2();
        assert!(f.is_smooth() && f.is_simplicial() && f.is_complete());
        let quadrant = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(quadrant.is_smooth());
        assert!(!quadrant.is_complete());
        assert!(p1().is_complete());
        assert!(blp2().is_complete());
        assert!(blp2_other().is_complete());
        assert!(matches!(
            Fan::new(1, vec![vec![1], vec![-2]], vec![vec![0], vec![1]]),
            Err(Error::NonPrimitiveRay { index: 1, .. })
        ));
    }

    #[test]
    fn unimodularity_of_fans() {
        assert!(p1().is_unimodular().unwrap());
        assert!(p2().is_unimodular().unwrap());
        assert!(blp2().is_unimodular().unwrap());
        assert!(!double_blowup().is_unimodular().unwrap());
        // every cone of the double blow-up is still smooth
        assert!(double_blowup().is_smooth());
    }

    #[test]
    fn charts() {
        assert_eq!(p2().affine_chart_check(), vec![Some(true); 3]);
        assert_eq!(blp2().affine_chart_check(), vec![Some(true); 4]);
        let f = Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap();
        assert_eq!(f.affine_chart_check(), vec![Some(false)]);
    }

    #[test]
    fn irrelevant_ideals() {
        let g = p1().irrelevant_ideal(false).generators;
        assert_eq!(g, vec![vec![0, 1], vec![1, 0]]);
        let g = blp2().irrelevant_ideal(false).generators;
        assert_eq!(
            g,
            vec![vec![0, 0, 1, 1], vec![1, 0, 0, 1], vec![1, 1, 0, 0], vec![0, 1, 1, 0]]
        );
        let g = blp2_other().irrelevant_ideal(false).generators;
        assert_eq!(g, vec![vec![0, 1, 0, 1], vec![1, 1, 0, 0], vec![0, 1, 1, 0]]);
        assert_eq!(blp2().irrelevant_ideal(true).generators.len(), 16);
        assert_eq!(blp2_other().i_empty(), vec![1]);
    }

    #[test]
    fn separation() {
        let f = p2();
        let u = f.separation_functional(&[0, 1], &[1, 2]).unwrap();
        let ev = |r: usize| f.rays[r].iter().zip(&u).map(|(a, b)| BigInt::from(*a) * b).sum::<BigInt>();
        assert!(ev(1).is_zero());
        assert!(ev(0).is_positive());
        assert!(ev(2).is_negative());
        assert_eq!(f.separation_functional(&[0, 1], &[0, 1]).unwrap(), big(&[0, 0]));

        let f = blp2();
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            let (s1, s2) = (&f.max_cones[a], &f.max_cones[b]);
            let u = f.separation_functional(s1, s2).unwrap();
            for &r in s1.iter().chain(s2) {
                let v: BigInt = f.rays[r].iter().zip(&u).map(|(a, b)| BigInt::from(*a) * b).sum();
                match (s1.contains(&r), s2.contains(&r)) {
                    (true, true) => assert!(v.is_zero()),
                    (true, false) => assert!(v.is_positive()),
                    _ => assert!(v.is_negative()),
                }
            }
        }
        // two opposite rays of the line cannot be separated with a common face that
        // contains both
        let f = p1();
        assert!(f.separation_functional(&[0, 1], &[0]).is_err());
    }

    #[test]
    fn fano_vectors() {
        assert_eq!(ints(&p2().fano_support_vector(&[0, 1]).unwrap()), vec![-1, -1, 2]);
        assert_eq!(ints(&p1().fano_support_vector(&[0]).unwrap()), vec![-1, 1]);
        let f = blp2();
        assert_eq!(ints(&f.fano_support_vector(&[0, 1]).unwrap()), vec![-1, -1, 0, 1]);
        for c in &f.max_cones {
            let v = f.fano_support_vector(c).unwrap();
            for i in 0..4 {
                if c.contains(&i) {
                    assert_eq!(v[i], BigInt::from(-1));
                } else {
                    assert!(!v[i].is_negative());
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = blp2();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(Fan::from_json(&s).unwrap(), f);
    }
}
