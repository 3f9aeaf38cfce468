//! Acyclicity of the degree-restricted subcomplexes of the periodic complex.
//!
//! A cell of the infinite complex is a pair `(F, c)`: the quotient representative `F` moved by
//! `K·c`, where the columns of `K` span the translation lattice. For a degree `b` the cells with
//! label `≤ b` form a finite subcomplex, found by a box search in `c`.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arrangement::{CodeReducer, QuotientComplex};
use crate::error::{Error, Result};
use crate::lattice::boxsearch::BoxSearcher;
use crate::lattice::matrix::integer_rank;
use crate::lattice::IntegerMatrix;
use crate::rational::{inverse, q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcyclicityFailure {
    pub degree: Vec<i64>,
    /// Reduced Betti numbers by dimension, starting at `-1`.
    pub reduced_betti: Vec<usize>,
}

/// Reduced homology of `X_{≤b}` in dimension `i ≥ 1` is homology of the free complex at
/// homological index `i`; in dimension 0 it measures the gap between the cokernel of `∂₁` and
/// the module generated by the vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub degrees_checked: usize,
    pub distinct_subcomplexes: usize,
    /// Degrees with reduced homology in some dimension `≥ 1`.
    pub failures: Vec<AcyclicityFailure>,
    /// Degrees whose restriction is acyclic above dimension 0 but disconnected.
    pub index_zero_defects: Vec<AcyclicityFailure>,
}

impl ExactnessReport {
    /// Exact at every positive homological index.
    pub fn is_exact(&self) -> bool {
        self.failures.is_empty()
    }

    /// Also exact at index 0, so the complex resolves the module of its vertex labels.
    pub fn resolves_image(&self) -> bool {
        self.failures.is_empty() && self.index_zero_defects.is_empty()
    }
}

struct Unfolded<'a> {
    qc: &'a QuotientComplex,
    n: usize,
    m: usize,
    bk: Vec<Vec<i64>>,
    searcher: BoxSearcher,
    /// Per incidence, the facet shift in `c`-coordinates.
    facet_shift: Vec<Vec<i64>>,
    by_cell: Vec<Vec<usize>>,
}

impl<'a> Unfolded<'a> {
    fn new(qc: &'a QuotientComplex) -> Result<Self> {
        let n = qc.n();
        let m = qc.m();
        let k = qc.translation_matrix();
        let b = qc.basis_matrix();
        let bk_m = b.mul(&k);
        let bk: Vec<Vec<i64>> = bk_m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("small")).collect())
            .collect();
        let kq: Vec<Vec<Q>> = qc.translation.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let kinv = inverse(&kq).ok_or_else(|| Error::Internal("singular translation lattice".into()))?;
        let mut facet_shift = Vec::with_capacity(qc.incidence.len());
        let mut by_cell = vec![Vec::new(); qc.cells.len()];
        for (idx, inc) in qc.incidence.iter().enumerate() {
            let tau: Vec<Q> = inc.shift.iter().map(|&x| q(x)).collect();
            let c: Vec<Q> = kinv.iter().map(|row| crate::rational::dot(row, &tau)).collect();
            if c.iter().any(|x| !x.is_integer()) {
                return Err(Error::Internal("facet shift outside the translation lattice".into()));
            }
            facet_shift.push(c.iter().map(|x| x.to_integer().to_i64().unwrap()).collect());
            by_cell[inc.from].push(idx);
        }
        Ok(Unfolded {
            qc,
            n,
            m,
            bk,
            searcher: BoxSearcher::new(&bk_m),
            facet_shift,
            by_cell,
        })
    }

    fn shift_label(&self, id: usize, c: &[i64]) -> Vec<i64> {
        let mut l = self.qc.cells[id].label.clone();
        for i in 0..self.n {
            let v: i64 = self.bk[i].iter().zip(c).map(|(a, b)| a * b).sum();
            l[i] += v;
            l[self.n + i] -= v;
        }
        l
    }

    /// Cells `(F, c)` with label `≤ b`, sorted.
    fn restrict(&self, b: &[i64]) -> Vec<(usize, Vec<i64>)> {
        let n = self.n;
        let mut out = Vec::new();
        for cell in &self.qc.cells {
            let l = &cell.label;
            let lo: Vec<BigInt> = (0..n).map(|i| BigInt::from(l[n + i] - b[n + i])).collect();
            let hi: Vec<BigInt> = (0..n).map(|i| BigInt::from(b[i] - l[i])).collect();
            self.searcher.for_each(&lo, &hi, |c| {
                out.push((cell.id, c.iter().map(|x| x.to_i64().unwrap()).collect()));
                true
            });
        }
        out.sort();
        out
    }

    /// Reduced Betti numbers over `ℚ` of a subcomplex, indexed from dimension `-1`.
    fn reduced_betti(&self, cells: &[(usize, Vec<i64>)]) -> Vec<usize> {
        let m = self.m;
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
        let mut pos: HashMap<(usize, &[i64]), usize> = HashMap::new();
        for (k, (id, c)) in cells.iter().enumerate() {
            let d = self.qc.cells[*id].dim;
            pos.insert((*id, c.as_slice()), by_dim[d].len());
            by_dim[d].push(k);
        }
        let f: Vec<usize> = by_dim.iter().map(Vec::len).collect();
        // rank[d] = rank of ∂_d : C_d → C_{d-1}, with ∂_0 the augmentation
        let mut rank = vec![0usize; m + 2];
        rank[0] = usize::from(f[0] > 0);
        for d in 1..=m {
            if f[d] == 0 || f[d - 1] == 0 {
                continue;
            }
            let mut rows = vec![vec![BigInt::from(0); f[d - 1]]; f[d]];
            for (col, &k) in by_dim[d].iter().enumerate() {
                let (id, c) = &cells[k];
                for &inc_idx in &self.by_cell[*id] {
                    let inc = &self.qc.incidence[inc_idx];
                    let target: Vec<i64> = c.iter().zip(&self.facet_shift[inc_idx]).map(|(a, b)| a + b).collect();
                    let r = pos[&(inc.to, target.as_slice())];
                    rows[col][r] += BigInt::from(inc.sign);
                }
            }
            rank[d] = integer_rank(rows, f[d - 1]);
        }
        let mut betti = vec![usize::from(f[0] == 0)];
        for d in 0..=m {
            betti.push(f[d] - rank[d] - rank[d + 1]);
        }
        if f[0] == 0 {
            // the empty complex counts as acyclic
            betti[0] = 0;
        }
        betti
    }
}

/// Labels of the cells near the origin together with their pairwise joins, one per translation class.
pub fn candidate_degrees(qc: &QuotientComplex) -> Result<Vec<Vec<i64>>> {
    let u = Unfolded::new(qc)?;
    let mut labels: Vec<Vec<i64>> = Vec::new();
    for c in (0..u.m).map(|_| -1i64..=1).multi_cartesian_product() {
        for cell in &qc.cells {
            labels.push(u.shift_label(cell.id, &c));
        }
    }
    labels.sort();
    labels.dedup();
    let reducer = translation_reducer(&u);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (a, b) in labels.iter().tuple_combinations().chain(labels.iter().map(|l| (l, l))) {
        let j: Vec<i64> = a.iter().zip(b).map(|(x, y)| *x.max(y)).collect();
        if seen.insert(reducer.reduce(&j)) {
            out.push(j);
        }
    }
    out.sort();
    Ok(out)
}

/// Reduces degrees modulo the Lawrence lift of the translation lattice.
fn translation_reducer(u: &Unfolded<'_>) -> CodeReducer {
    let mut rows: Vec<Vec<i64>> = u.bk.clone();
    rows.extend(u.bk.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
    CodeReducer::new(&IntegerMatrix::from_rows(&rows))
}

/// Checks that every restriction `{cells with label ≤ b}` has vanishing reduced homology.
///
/// With `degrees = None` the candidates come from [`candidate_degrees`].
pub fn exactness_certificate(qc: &QuotientComplex, degrees: Option<&[Vec<i64>]>) -> Result<ExactnessReport> {
    let u = Unfolded::new(qc)?;
    let owned;
    let degrees = match degrees {
        Some(d) => d,
        None => {
            owned = candidate_degrees(qc)?;
            &owned
        }
    };
    let mut cache: HashMap<Vec<(usize, Vec<i64>)>, Vec<usize>> = HashMap::new();
    let mut failures = Vec::new();
    let mut index_zero_defects = Vec::new();
    for b in degrees {
        if b.len() != 2 * u.n {
            return Err(Error::DimensionMismatch(format!(
                "degree has {} entries, expected {}",
                b.len(),
                2 * u.n
            )));
        }
        let cells = u.restrict(b);
        let betti = match cache.get(&cells) {
            Some(v) => v.clone(),
            None => {
                let v = u.reduced_betti(&cells);
                cache.insert(cells, v.clone());
                v
            }
        };
        let failure = AcyclicityFailure {
            degree: b.clone(),
            reduced_betti: betti.clone(),
        };
        if betti[2..].iter().any(|&x| x != 0) {
            failures.push(failure);
        } else if betti[..2].iter().any(|&x| x != 0) {
            index_zero_defects.push(failure);
        }
    }
    Ok(ExactnessReport {
        degrees_checked: degrees.len(),
        distinct_subcomplexes: cache.len(),
        failures,
        index_zero_defects,
    })
}
