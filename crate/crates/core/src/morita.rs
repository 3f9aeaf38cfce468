//! Graded Morita check for `𝔸ⁿ/G`: the endomorphism algebra of `⊕_χ O(χ)` against
//! `π(M_{Λ(L)}) = M_{Λ(L)} ⊗_{S[Λ(L̃)]} S`, both truncated by total degree.

use std::collections::{BTreeMap, HashMap, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{big, cofinite_sublattice, quotient_group, CosetLabeling, Lattice};

/// Default truncation degree.
pub const DEFAULT_DEGREE: usize = 6;

/// `⊕ ℤ/d_i` with elements as reduced residue vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterGroup {
    pub moduli: Vec<i64>,
}

impl CharacterGroup {
    pub fn new(moduli: Vec<i64>) -> Result<Self> {
        if moduli.iter().any(|&d| d < 1) {
            return Err(Error::InvalidInput("cyclic factors must be positive".into()));
        }
        Ok(CharacterGroup { moduli })
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product::<i64>() as usize
    }

    pub fn reduce(&self, g: &[i64]) -> Vec<i64> {
        g.iter().zip(&self.moduli).map(|(a, d)| a.rem_euclid(*d)).collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        if self.moduli.is_empty() {
            return vec![Vec::new()];
        }
        self.moduli.iter().map(|&d| 0..d).multi_cartesian_product().collect()
    }
}

/// `𝔸ⁿ` with coordinate `i` of character `weights[i]`.
#[derive(Clone, Debug)]
pub struct MoritaSetup {
    pub n: usize,
    pub group: CharacterGroup,
    pub weights: Vec<Vec<i64>>,
    /// `L̃ = ker(ℤⁿ → Ĝ)`.
    pub sublattice: Lattice,
    pub labeling: CosetLabeling,
    to_coset: HashMap<Vec<i64>, Vec<i64>>,
    to_character: HashMap<Vec<i64>, Vec<i64>>,
}

/// Parses per-coordinate weights: `"1,3"` for a cyclic group, `"1,0;0,1"` otherwise.
pub fn parse_weights(s: &str, factors: usize) -> Result<Vec<Vec<i64>>> {
    let ints = |t: &str| crate::pipeline::parse_ints(t, ',');
    if factors == 1 && !s.contains(';') {
        return Ok(ints(s)?.into_iter().map(|w| vec![w]).collect());
    }
    s.split(';').map(ints).collect()
}

impl MoritaSetup {
    pub fn new(group: CharacterGroup, weights: Vec<Vec<i64>>) -> Result<Self> {
        let n = weights.len();
        if weights.iter().any(|w| w.len() != group.moduli.len()) {
            return Err(Error::DimensionMismatch("each weight needs one entry per cyclic factor".into()));
        }
        let full = Lattice::full(n);
        let moduli: Vec<BigInt> = group.moduli.iter().map(|&d| BigInt::from(d)).collect();
        let images: Vec<Vec<BigInt>> = weights.iter().map(|w| big(w)).collect();
        let (sublattice, labeling) = cofinite_sublattice(&full, &moduli, &images)?;
        // walk the group from 0 along the coordinate vectors, pairing characters with cosets
        let coset_of = |v: &[i64]| -> Vec<i64> {
            labeling
                .label_coefficients(&big(v))
                .iter()
                .map(|x| x.to_i64().expect("small coset"))
                .collect()
        };
        let zero = vec![0i64; n];
        let mut to_coset = HashMap::new();
        let mut to_character = HashMap::new();
        let mut queue = VecDeque::from([zero.clone()]);
        to_coset.insert(group.reduce(&vec![0; group.moduli.len()]), coset_of(&zero));
        while let Some(v) = queue.pop_front() {
            let rho = character(&group, &weights, &v);
            let c = coset_of(&v);
            if to_coset.get(&rho).is_some_and(|x| *x != c) {
                return Err(Error::Internal("characters and cosets disagree".into()));
            }
            to_coset.insert(rho.clone(), c.clone());
            to_character.insert(c, rho);
            for i in 0..n {
                let mut w = v.clone();
                w[i] += 1;
                if !to_coset.contains_key(&character(&group, &weights, &w)) {
                    queue.push_back(w);
                }
            }
        }
        if to_coset.len() != group.order() {
            return Err(Error::Internal("weights do not reach every character".into()));
        }
        Ok(MoritaSetup {
            n,
            group,
            weights,
            sublattice,
            labeling,
            to_coset,
            to_character,
        })
    }

    /// `|α| = Σ αᵢ wᵢ`.
    pub fn weight(&self, alpha: &[i64]) -> Vec<i64> {
        character(&self.group, &self.weights, alpha)
    }

    /// `Λ(ρ) ∈ ℤⁿ/L̃`.
    pub fn coset(&self, rho: &[i64]) -> Vec<i64> {
        self.to_coset[&self.group.reduce(rho)].clone()
    }

    pub fn character_of(&self, coset: &[i64]) -> Vec<i64> {
        self.to_character[coset].clone()
    }
}

fn character(group: &CharacterGroup, weights: &[Vec<i64>], alpha: &[i64]) -> Vec<i64> {
    let mut g = vec![0i64; group.moduli.len()];
    for (a, w) in alpha.iter().zip(weights) {
        for (gi, wi) in g.iter_mut().zip(w) {
            *gi += a * wi;
        }
    }
    group.reduce(&g)
}

fn exponents(n: usize, max_degree: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|_| 0..=max_degree as i64)
        .multi_cartesian_product()
        .filter(|a| a.iter().sum::<i64>() as usize <= max_degree)
        .collect()
}

/// `w^α e_{ρ₁ρ₂}`, defined when `|α| = ρ₁ - ρ₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub alpha: Vec<i64>,
    pub rho1: Vec<i64>,
    pub rho2: Vec<i64>,
}

/// `x^α ⊗ z^{v̄}` with `v̄ ∈ ℤⁿ/L̃`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PiElement {
    pub alpha: Vec<i64>,
    pub coset: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct GradedBasisAlgebra {
    pub truncation: usize,
    pub basis: Vec<AlgebraElement>,
}

#[derive(Clone, Debug)]
pub struct GradedPiModule {
    pub truncation: usize,
    pub basis: Vec<PiElement>,
}

/// Degree `(|α|₁, ρ₁, -ρ₂)`.
pub type Degree = (usize, Vec<i64>, Vec<i64>);

pub fn build_algebra(s: &MoritaSetup, truncation: usize) -> GradedBasisAlgebra {
    let mut basis = Vec::new();
    for alpha in exponents(s.n, truncation) {
        let wa = s.weight(&alpha);
        for rho2 in s.group.elements() {
            basis.push(AlgebraElement {
                rho1: s.group.add(&rho2, &wa),
                alpha: alpha.clone(),
                rho2,
            });
        }
    }
    basis.sort();
    GradedBasisAlgebra { truncation, basis }
}

pub fn build_pi_module(s: &MoritaSetup, truncation: usize) -> GradedPiModule {
    let mut cosets: Vec<Vec<i64>> = s.to_character.keys().cloned().collect();
    cosets.sort();
    let mut basis = Vec::new();
    for alpha in exponents(s.n, truncation) {
        for c in &cosets {
            basis.push(PiElement {
                alpha: alpha.clone(),
                coset: c.clone(),
            });
        }
    }
    basis.sort();
    GradedPiModule { truncation, basis }
}

impl AlgebraElement {
    pub fn is_admissible(&self, s: &MoritaSetup) -> bool {
        s.group.sub(&self.rho1, &self.rho2) == s.weight(&self.alpha)
    }

    pub fn degree(&self, s: &MoritaSetup) -> Degree {
        (
            self.alpha.iter().sum::<i64>() as usize,
            self.rho1.clone(),
            s.group.reduce(&self.rho2.iter().map(|x| -x).collect::<Vec<_>>()),
        )
    }

    /// `x^β · w^α e_{ρ₁ρ₂} = w^{α+β} e_{ρ₁+|β|, ρ₂}`.
    pub fn left(&self, s: &MoritaSetup, beta: &[i64]) -> AlgebraElement {
        AlgebraElement {
            alpha: add(&self.alpha, beta),
            rho1: s.group.add(&self.rho1, &s.weight(beta)),
            rho2: self.rho2.clone(),
        }
    }

    /// `y^β · w^α e_{ρ₁ρ₂} = w^{α+β} e_{ρ₁, ρ₂-|β|}`.
    pub fn right(&self, s: &MoritaSetup, beta: &[i64]) -> AlgebraElement {
        AlgebraElement {
            alpha: add(&self.alpha, beta),
            rho1: self.rho1.clone(),
            rho2: s.group.sub(&self.rho2, &s.weight(beta)),
        }
    }
}

impl PiElement {
    /// `(α + v, -v)` reduced to characters.
    pub fn degree(&self, s: &MoritaSetup) -> Degree {
        let v = s.character_of(&self.coset);
        (
            self.alpha.iter().sum::<i64>() as usize,
            s.group.add(&s.weight(&self.alpha), &v),
            s.group.reduce(&v.iter().map(|x| -x).collect::<Vec<_>>()),
        )
    }

    pub fn left(&self, beta: &[i64]) -> PiElement {
        PiElement {
            alpha: add(&self.alpha, beta),
            coset: self.coset.clone(),
        }
    }

    /// `y^β` acts as `x^β ⊗ z^{(-β, β)}`.
    pub fn right(&self, s: &MoritaSetup, beta: &[i64]) -> PiElement {
        let v = s.character_of(&self.coset);
        PiElement {
            alpha: add(&self.alpha, beta),
            coset: s.coset(&s.group.sub(&v, &s.weight(beta))),
        }
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `Ψ(w^α e_{ρ₁ρ₂}) = x^α ⊗ z^{Λ(ρ₂)}`.
pub fn psi(s: &MoritaSetup, a: &AlgebraElement) -> PiElement {
    PiElement {
        alpha: a.alpha.clone(),
        coset: s.coset(&a.rho2),
    }
}

/// `Φ(x^α ⊗ z^{v̄}) = w^α e_{|α|+v̄, v̄}`.
pub fn phi(s: &MoritaSetup, m: &PiElement) -> AlgebraElement {
    let v = s.character_of(&m.coset);
    AlgebraElement {
        alpha: m.alpha.clone(),
        rho1: s.group.add(&s.weight(&m.alpha), &v),
        rho2: v,
    }
}

/// `Ψ∘Φ` and `Φ∘Ψ` are identities on the truncated bases, and `Ψ` preserves degree.
pub fn bijection_check(s: &MoritaSetup, truncation: usize) -> bool {
    let a = build_algebra(s, truncation);
    let m = build_pi_module(s, truncation);
    a.basis.len() == m.basis.len()
        && a.basis.iter().all(|e| {
            let p = psi(s, e);
            e.is_admissible(s) && phi(s, &p) == *e && p.degree(s) == e.degree(s)
        })
        && m.basis.iter().all(|p| psi(s, &phi(s, p)) == *p)
}

/// `Ψ(x^β·m) = x^β·Ψ(m)` and `Ψ(y^β·m) = y^β·Ψ(m)` for `|β|₁ ≤ N/2`.
pub fn action_compatibility(s: &MoritaSetup, truncation: usize) -> bool {
    let a = build_algebra(s, truncation);
    let betas = exponents(s.n, truncation / 2);
    a.basis.iter().all(|e| {
        let p = psi(s, e);
        betas.iter().all(|b| psi(s, &e.left(s, b)) == p.left(b) && psi(s, &e.right(s, b)) == p.right(s, b))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDim {
    pub degree: usize,
    pub rho1: Vec<i64>,
    pub rho2: Vec<i64>,
    pub algebra: usize,
    pub module: usize,
}

pub fn graded_dims(s: &MoritaSetup, truncation: usize) -> Vec<GradedDim> {
    let mut table: BTreeMap<Degree, (usize, usize)> = BTreeMap::new();
    for e in build_algebra(s, truncation).basis {
        table.entry(e.degree(s)).or_default().0 += 1;
    }
    for p in build_pi_module(s, truncation).basis {
        table.entry(p.degree(s)).or_default().1 += 1;
    }
    table
        .into_iter()
        .map(|((degree, rho1, rho2), (algebra, module))| GradedDim {
            degree,
            rho1,
            rho2,
            algebra,
            module,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoritaReport {
    pub bijection: bool,
    pub action_compat: bool,
    pub graded_dims: Vec<GradedDim>,
    pub dims_agree: bool,
}

impl MoritaReport {
    pub fn passed(&self) -> bool {
        self.bijection && self.action_compat && self.dims_agree
    }
}

pub fn morita_check(s: &MoritaSetup, truncation: usize) -> MoritaReport {
    let graded_dims = graded_dims(s, truncation);
    MoritaReport {
        bijection: bijection_check(s, truncation),
        action_compat: action_compatibility(s, truncation),
        dims_agree: graded_dims.iter().all(|d| d.algebra == d.module),
        graded_dims,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntidiagonalReport {
    pub summands: usize,
    pub checked: usize,
    pub unique: bool,
}

/// Every `v ∈ L` with coefficients in `[-N, N]` is `ṽ + ū` for exactly one fixed coset
/// representative `ū` and `ṽ ∈ L̃`.
pub fn antidiagonal_decomposition_check(l: &Lattice, sub: &Lattice, truncation: i64) -> Result<AntidiagonalReport> {
    let labeling = quotient_group(l, sub)?;
    let order = labeling.group.order().to_usize().ok_or_else(|| Error::Unsupported("huge index".into()))?;
    let m = l.rank();
    // smallest representative of each coset, searched in growing cubes
    let mut reps: BTreeMap<Vec<BigInt>, Vec<i64>> = BTreeMap::new();
    let mut r = 0i64;
    while reps.len() < order {
        for c in (0..m).map(|_| -r..=r).multi_cartesian_product() {
            reps.entry(labeling.label_coefficients(&big(&c))).or_insert(c);
        }
        r += 1;
    }
    let rep_vectors: Vec<Vec<BigInt>> = reps.values().map(|c| l.basis().mul_vec(&big(c))).collect();
    let mut checked = 0;
    let mut unique = true;
    for c in (0..m).map(|_| -truncation..=truncation).multi_cartesian_product() {
        let v = l.basis().mul_vec(&big(&c));
        let hits = rep_vectors
            .iter()
            .filter(|u| {
                let diff: Vec<BigInt> = v.iter().zip(u.iter()).map(|(a, b)| a - b).collect();
                sub.contains(&diff)
            })
            .count();
        unique &= hits == 1;
        checked += 1;
    }
    Ok(AntidiagonalReport {
        summands: reps.len(),
        checked,
        unique,
    })
}
