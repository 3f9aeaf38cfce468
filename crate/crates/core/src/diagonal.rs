//! Membership in the lattice module, binomial generators, the cokernel of `M_{Λ(L)} → Im(f)`
//! and its torsion certificates, and the lattice-shift identities.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::QuotientComplex;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::boxsearch::BoxSearcher;
use crate::lattice::{big, box_lattice_point, Lattice, LaurentMonomial};
use crate::pipeline::Pipeline;
use crate::rational::{floor, q, solve, Q};

/// Default bound on the power of each irrelevant generator.
pub const DEFAULT_KMAX: u32 = 16;

fn split(w: &[i64]) -> (&[i64], &[i64]) {
    w.split_at(w.len() / 2)
}

/// Whether `x^{w_x} y^{w_y}` lies in the `S`-module spanned by `x^u y^{-u}`, `u ∈ L`.
pub fn in_lattice_module(w: &[i64], l: &Lattice) -> bool {
    let (wx, wy) = split(w);
    let lo: Vec<BigInt> = wy.iter().map(|&a| BigInt::from(-a)).collect();
    box_lattice_point(l, &lo, &big(wx)).is_some()
}

/// Every `u ∈ L` with `(u, -u) ≤ w`, smallest first by `ℓ¹` norm and then lexicographically.
fn module_witnesses(w: &[i64], l: &Lattice) -> Vec<Vec<i64>> {
    let (wx, wy) = split(w);
    let lo: Vec<BigInt> = wy.iter().map(|&a| BigInt::from(-a)).collect();
    let searcher = BoxSearcher::new(l.basis());
    let mut out = Vec::new();
    searcher.for_each(&lo, &big(wx), |c| {
        let u = l.basis().mul_vec(c);
        out.push(u.iter().map(|x| x.to_i64().expect("small witness")).collect::<Vec<i64>>());
        true
    });
    out.sort_by_key(|u| (u.iter().map(|x| x.abs()).sum::<i64>(), u.clone()));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinomialMode {
    /// `x^{v₊} - x^{v₋}`.
    LatticeIdeal,
    /// `x^{v₊} y^{v₋} - x^{v₋} y^{v₊}`.
    Lawrence,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Binomial {
    pub lead: LaurentMonomial,
    pub trail: LaurentMonomial,
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.lead, self.trail)
    }
}

pub fn binomial_generators(vectors: &[Vec<i64>], mode: BinomialMode) -> Vec<Binomial> {
    vectors
        .iter()
        .map(|v| {
            let plus: Vec<i64> = v.iter().map(|&a| a.max(0)).collect();
            let minus: Vec<i64> = v.iter().map(|&a| (-a).max(0)).collect();
            match mode {
                BinomialMode::LatticeIdeal => Binomial {
                    lead: LaurentMonomial::x(plus),
                    trail: LaurentMonomial::x(minus),
                },
                BinomialMode::Lawrence => Binomial {
                    lead: LaurentMonomial::xy([plus.clone(), minus.clone()].concat()),
                    trail: LaurentMonomial::xy([minus, plus].concat()),
                },
            }
        })
        .collect()
}

/// Rewrites the lattice-ideal generator of each `(u, -u)` in `x, y` variables and compares it
/// with the Lawrence generator of `u`.
pub fn lawrence_equals_lattice_ideal_check(vectors: &[Vec<i64>]) -> bool {
    let lifted: Vec<Vec<i64>> = vectors
        .iter()
        .map(|u| u.iter().copied().chain(u.iter().map(|a| -a)).collect())
        .collect();
    let lattice_side: Vec<Binomial> = binomial_generators(&lifted, BinomialMode::LatticeIdeal)
        .into_iter()
        .map(|b| Binomial {
            lead: LaurentMonomial::xy(b.lead.exponent),
            trail: LaurentMonomial::xy(b.trail.exponent),
        })
        .collect();
    lattice_side == binomial_generators(vectors, BinomialMode::Lawrence)
}

/// A vertex label of the quotient complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMonomial {
    pub vertex: usize,
    /// Label of the translate of the vertex closest to the origin.
    pub exponent: Vec<i64>,
    pub display: String,
    pub in_module: bool,
}

/// Vertex labels, each taken at the translate of the vertex nearest the origin.
pub fn image_monomials(qc: &QuotientComplex, l: &Lattice) -> Vec<VertexMonomial> {
    let m = qc.m();
    let k = qc.translation_matrix();
    let b = qc.basis_matrix();
    let mut out = Vec::new();
    for id in qc.cells_of_dim(0) {
        let cell = &qc.cells[id];
        let mut best: Option<(Q, Vec<i64>)> = None;
        for c in itertools::Itertools::multi_cartesian_product((0..m).map(|_| -2i64..=1)) {
            let shift: Vec<i64> = k
                .mul_vec(&big(&c))
                .iter()
                .map(|x| x.to_i64().expect("small shift"))
                .collect();
            let t: Vec<Q> = cell.point.iter().zip(&shift).map(|(p, s)| p + q(*s)).collect();
            let norm: Q = (0..b.rows())
                .map(|i| {
                    let row = b.row(i);
                    row.iter()
                        .zip(&t)
                        .map(|(a, x)| Q::from_integer(a.clone()) * x)
                        .fold(Q::zero(), |s, x| s + x)
                        .abs()
                })
                .fold(Q::zero(), |s, x| s + x);
            let label = qc.shifted_label(id, &shift);
            let better = match &best {
                None => true,
                Some((bn, bl)) => norm < *bn || (norm == *bn && label < *bl),
            };
            if better {
                best = Some((norm, label));
            }
        }
        let exponent = best.expect("nonempty search").1;
        out.push(VertexMonomial {
            vertex: id,
            display: LaurentMonomial::xy(exponent.clone()).to_string(),
            in_module: in_lattice_module(&exponent, l),
            exponent,
        });
    }
    out
}

/// Vertex labels outside `M_{Λ(L)}`, which generate the cokernel of the inclusion.
pub fn cokernel_extra_monomials(qc: &QuotientComplex, l: &Lattice) -> Vec<VertexMonomial> {
    image_monomials(qc, l).into_iter().filter(|v| !v.in_module).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorWitness {
    pub generator: Vec<i64>,
    pub k: u32,
    /// `u ∈ L` with `g^k · m ≥ (u, -u)`.
    pub witness: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCertificate {
    pub monomial: Vec<i64>,
    pub display: String,
    pub per_generator: Vec<GeneratorWitness>,
    /// Generators with no witness up to `k_max`.
    pub failures: Vec<Vec<i64>>,
    pub k: u32,
    pub k_max: u32,
    /// The monomial already lies in the module.
    pub degenerate: bool,
}

impl TorsionCertificate {
    pub fn is_certified(&self) -> bool {
        self.failures.is_empty()
    }

    /// Re-checks every witness against its exponent.
    pub fn verify(&self, l: &Lattice) -> bool {
        let n = self.monomial.len() / 2;
        self.per_generator.iter().all(|w| {
            let e: Vec<i64> = self
                .monomial
                .iter()
                .zip(&w.generator)
                .map(|(a, g)| a + i64::from(w.k) * g)
                .collect();
            let lifted: Vec<i64> = w.witness.iter().copied().chain(w.witness.iter().map(|a| -a)).collect();
            w.k >= 1
                && w.witness.len() == n
                && l.contains(&big(&w.witness))
                && e.iter().zip(&lifted).all(|(a, b)| a >= b)
        })
    }
}

/// For each generator `g`, the least `k ≤ k_max` with `g^k · m ∈ M_{Λ(L)}`.
pub fn torsion_certificate(m: &[i64], generators: &[Vec<i64>], l: &Lattice, k_max: u32) -> Result<TorsionCertificate> {
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    if m.len() != 2 * l.ambient_rank() {
        return Err(Error::DimensionMismatch(format!(
            "monomial has {} exponents, expected {}",
            m.len(),
            2 * l.ambient_rank()
        )));
    }
    if let Some(g) = generators.iter().find(|g| g.len() != m.len()) {
        return Err(Error::DimensionMismatch(format!(
            "generator has {} exponents, expected {}",
            g.len(),
            m.len()
        )));
    }
    let mut per_generator = Vec::new();
    let mut failures = Vec::new();
    'gens: for g in generators {
        for k in 1..=k_max {
            let e: Vec<i64> = m.iter().zip(g).map(|(a, b)| a + i64::from(k) * b).collect();
            if let Some(u) = module_witnesses(&e, l).into_iter().next() {
                per_generator.push(GeneratorWitness {
                    generator: g.clone(),
                    k,
                    witness: u,
                });
                continue 'gens;
            }
        }
        failures.push(g.clone());
    }
    Ok(TorsionCertificate {
        monomial: m.to_vec(),
        display: LaurentMonomial::xy(m.to_vec()).to_string(),
        k: per_generator.iter().map(|w| w.k).max().unwrap_or(1),
        per_generator,
        failures,
        k_max,
        degenerate: in_lattice_module(m, l),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CokernelReport {
    pub extra_monomials: Vec<VertexMonomial>,
    pub certificates: Vec<TorsionCertificate>,
    /// Displays of the extra monomials that some generator fails to kill.
    pub failures: Vec<String>,
}

impl CokernelReport {
    pub fn is_torsion(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Extra monomials of the pipeline's complex with certificates against the irrelevant ideal
/// of `X × X`.
pub fn cokernel_report(p: &Pipeline, k_max: u32) -> Result<CokernelReport> {
    let extra = cokernel_extra_monomials(&p.complex, &p.lattice);
    let gens = p.fan.irrelevant_ideal(true).generator_exponents();
    let mut certificates = Vec::new();
    let mut failures = Vec::new();
    for v in &extra {
        let c = torsion_certificate(&v.exponent, &gens, &p.lattice, k_max)?;
        if !c.is_certified() {
            failures.push(v.display.clone());
        }
        certificates.push(c);
    }
    Ok(CokernelReport {
        extra_monomials: extra,
        certificates,
        failures,
    })
}

/// `⌊p + v⌋ = ⌊p⌋ + v`, and the labels `x^{⌊·⌋} y^{-⌊·⌋}` multiply accordingly.
pub fn floor_shift_check(p: &[Q], v: &[i64]) -> bool {
    if p.len() != v.len() {
        return false;
    }
    let fp: Vec<BigInt> = p.iter().map(floor).collect();
    let shifted: Vec<BigInt> = p.iter().zip(v).map(|(a, &b)| floor(&(a + q(b)))).collect();
    let sum: Vec<BigInt> = fp.iter().zip(v).map(|(a, &b)| a + b).collect();
    if shifted != sum {
        return false;
    }
    let label = |f: &[BigInt]| {
        let u: Vec<i64> = f.iter().map(|x| x.to_i64().expect("small floor")).collect();
        LaurentMonomial::lattice(&u)
    };
    label(&shifted) == label(&fp).mul(&LaurentMonomial::lattice(v))
}

/// `v ∈ L` such that `p + v` is negative exactly on the rays of the maximal cone `sigma`.
///
/// Tries `r·v + k·ṽ` first, where `v` is the support vector of `sigma` and `ṽ` rounds the
/// `sigma` coordinates of `p` up to integers, then falls back to a box search over functionals.
pub fn v_sigma_finder(p: &[Q], fan: &Fan, sigma: usize, bound: i64) -> Result<Vec<i64>> {
    let n = fan.n_rays();
    if p.len() != n {
        return Err(Error::DimensionMismatch(format!("point has {} coordinates, expected {n}", p.len())));
    }
    let cone = fan
        .max_cones
        .get(sigma)
        .ok_or_else(|| Error::InvalidInput(format!("no maximal cone {sigma}")))?
        .clone();
    if cone.len() != fan.dim {
        return Err(Error::NotSmoothCone(sigma));
    }
    let b = fan.ray_matrix();
    let pattern_ok = |v: &[BigInt]| {
        (0..n).all(|i| {
            let x = &p[i] + Q::from_integer(v[i].clone());
            if cone.contains(&i) {
                x.is_negative()
            } else {
                x.is_positive()
            }
        })
    };
    let to_i64 = |v: &[BigInt]| v.iter().map(|x| x.to_i64().expect("small vector")).collect::<Vec<_>>();

    let a: Vec<Vec<Q>> = cone.iter().map(|&i| fan.rays[i].iter().map(|&x| q(x)).collect()).collect();
    let rhs: Vec<Q> = cone.iter().map(|&i| -Q::from_integer(crate::rational::ceil(&p[i]))).collect();
    let tilde = solve(&a, &rhs)
        .filter(|m| m.iter().all(|x| x.is_integer()))
        .map(|m| b.mul_vec(&m.iter().map(|x| x.to_integer()).collect::<Vec<_>>()));
    if let (Some(v), Some(vt)) = (fan.fano_support_vector(&cone), tilde.as_ref()) {
        for r in 0..=bound {
            for k in -bound..=bound {
                let cand: Vec<BigInt> = v.iter().zip(vt).map(|(a, b)| a * r + b * k).collect();
                if pattern_ok(&cand) {
                    return Ok(to_i64(&cand));
                }
            }
        }
    }
    let mut found = None;
    for m in itertools::Itertools::multi_cartesian_product((0..fan.dim).map(|_| -bound..=bound)) {
        let cand = b.mul_vec(&big(&m));
        if pattern_ok(&cand) {
            let key = cand.iter().map(|x| x.abs()).sum::<BigInt>();
            if found.as_ref().is_none_or(|(k, _): &(BigInt, Vec<BigInt>)| key < *k) {
                found = Some((key, cand));
            }
        }
    }
    found
        .map(|(_, v)| to_i64(&v))
        .ok_or_else(|| Error::BoundExhausted(format!("no v_sigma for cone {sigma} with |r|, |k|, |m_i| <= {bound}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::examples::*;
    use crate::io::parse_rational_list;
    use crate::pipeline::GroupSpec;
    use crate::resolution::tests::pipeline;

    fn blp2_lattice() -> Lattice {
        blp2().principal_lattice().unwrap()
    }

    fn lift(u: &[i64]) -> Vec<i64> {
        LaurentMonomial::lattice(u).exponent
    }

    #[test]
    fn module_membership() {
        let l = blp2_lattice();
        assert!(in_lattice_module(&[0; 8], &l));
        assert!(in_lattice_module(&[1, 1, 0, -1, -1, -1, 0, 1], &l));
        assert!(!in_lattice_module(&lift(&[0, -1, 0, 0]), &l));
    }

    #[test]
    fn generators_of_blp2() {
        let vs = vec![vec![1, 1, 0, -1], vec![0, 1, 1, -1], vec![1, 0, -1, 0]];
        let show = |m| binomial_generators(&vs, m).iter().map(|b| b.to_string()).collect::<Vec<_>>();
        assert_eq!(show(BinomialMode::LatticeIdeal), ["x1x2 - x4", "x2x3 - x4", "x1 - x3"]);
        assert_eq!(
            show(BinomialMode::Lawrence),
            ["x1x2y4 - x4y1y2", "x2x3y4 - x4y2y3", "x1y3 - x3y1"]
        );
        assert!(lawrence_equals_lattice_ideal_check(&vs));
        let affine: Vec<String> = binomial_generators(&[vec![1, 0], vec![0, 1]], BinomialMode::Lawrence)
            .iter()
            .map(|b| b.to_string())
            .collect();
        assert_eq!(affine, ["x1 - y1", "x2 - y2"]);
        assert!(lawrence_equals_lattice_ideal_check(&[vec![1, -1]]));
        assert!(lawrence_equals_lattice_ideal_check(&[vec![1, 0, -1], vec![0, 1, -1]]));
    }

    #[test]
    fn p2_has_no_extra_monomials() {
        let p = pipeline(p2(), "", GroupSpec::trivial());
        let im = image_monomials(&p.complex, &p.lattice);
        assert_eq!(im.len(), 1);
        assert_eq!(im[0].display, "1");
        assert!(cokernel_extra_monomials(&p.complex, &p.lattice).is_empty());
    }

    #[test]
    fn nef_chamber_cokernel() {
        let p = pipeline(blp2(), "1/100,0,0,1/100", GroupSpec::trivial());
        let im = image_monomials(&p.complex, &p.lattice);
        assert_eq!(im.len(), 5);
        assert!(im.iter().any(|v| v.display == "1"));
        let r = cokernel_report(&p, DEFAULT_KMAX).unwrap();
        let extra: Vec<&str> = r.extra_monomials.iter().map(|v| v.display.as_str()).collect();
        assert_eq!(extra, ["y2/x2"]);
        let c = &r.certificates[0];
        assert!(c.is_certified() && c.verify(&p.lattice) && !c.degenerate);
        assert_eq!(c.per_generator.len(), 16);
        assert!(c.per_generator.iter().all(|w| w.k == 1));
    }

    #[test]
    fn other_chamber_cokernel() {
        let p = pipeline(blp2_other(), "0,1/100,0,1/100", GroupSpec::trivial());
        let r = cokernel_report(&p, DEFAULT_KMAX).unwrap();
        let mut extra: Vec<&str> = r.extra_monomials.iter().map(|v| v.display.as_str()).collect();
        extra.sort();
        assert_eq!(extra, ["y1/x1", "y3/x3"]);
        assert!(r.is_torsion());
        for c in &r.certificates {
            assert!(c.verify(&p.lattice));
        }
        // the three cases for y1/x1: x1, x3 or x4·y2 divides the generator
        let c = r.certificates.iter().find(|c| c.display == "y1/x1").unwrap();
        for w in &c.per_generator {
            let g = &w.generator;
            let expected: Vec<i64> = if g[0] == 1 {
                vec![0, 0, 0, 0]
            } else if g[2] == 1 {
                vec![-1, 0, 1, 0]
            } else {
                assert!(g[3] == 1 && g[5] == 1);
                vec![-1, -1, 0, 1]
            };
            let e: Vec<i64> = c.monomial.iter().zip(g).map(|(a, b)| a + b).collect();
            assert!(module_witnesses(&e, &p.lattice).contains(&expected), "{g:?}");
        }
    }

    #[test]
    fn trivial_monomial_is_degenerate() {
        let l = blp2_lattice();
        let gens = blp2().irrelevant_ideal(true).generator_exponents();
        let c = torsion_certificate(&[0; 8], &gens, &l, 4).unwrap();
        assert!(c.degenerate && c.is_certified());
        assert_eq!(c.k, 1);
        assert!(torsion_certificate(&[0; 8], &gens, &l, 0).is_err());
    }

    #[test]
    fn unkillable_monomial_fails() {
        // P² with the trivial ideal generator 1 cannot clear a denominator
        let l = p2().principal_lattice().unwrap();
        let c = torsion_certificate(&lift(&[0, -1, 0]), &[vec![0; 6]], &l, 3).unwrap();
        assert!(!c.is_certified());
    }

    #[test]
    fn floor_shift() {
        let p = parse_rational_list("1/3,-1/3").unwrap();
        assert!(floor_shift_check(&p, &[1, -1]));
        assert!(floor_shift_check(&[q(2), q(-5)], &[3, 4]));
        assert!(!floor_shift_check(&p, &[1]));
    }

    #[test]
    fn v_sigma_examples() {
        let half = parse_rational_list("1/2,1/2").unwrap();
        let v = v_sigma_finder(&half, &p1(), 0, 20).unwrap();
        assert!(v[0] < 0 && v[0] == -v[1]);
        let eps = parse_rational_list("1/100,1/50,1/30").unwrap();
        let v = v_sigma_finder(&eps, &p2(), 0, 20).unwrap();
        assert!(v[0] < 0 && v[1] < 0 && v[2] > 0);
        let p = pipeline(blp2(), "1/100,0,0,1/100", GroupSpec::trivial());
        let fan = blp2();
        for id in p.complex.cells_of_dim(0) {
            let t = &p.complex.cells[id].point;
            let pt: Vec<Q> = fan
                .rays
                .iter()
                .zip(&p.complex.epsilon)
                .map(|(r, e)| r.iter().zip(t).map(|(a, x)| q(*a) * x).fold(e.clone(), |s, x| s + x))
                .collect();
            for sigma in 0..4 {
                let v = v_sigma_finder(&pt, &fan, sigma, 20).unwrap();
                assert!(p.lattice.contains(&big(&v)));
            }
        }
    }
}
