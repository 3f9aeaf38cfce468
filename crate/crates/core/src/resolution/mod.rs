//! Cellular free complexes from labeled quotient complexes.

pub mod compare;
pub mod exactness;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arrangement::QuotientComplex;
use crate::error::{Error, Result};
use crate::fan::{DegreeMap, GradedClass};
use crate::lattice::LaurentMonomial;

pub use compare::{matches_up_to_symmetry, parse_matrix, parse_polynomial, Polynomial};
pub use exactness::{exactness_certificate, ExactnessReport};

/// One term `sign · x^a y^b` at position `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
    pub exp: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Entry>,
}

impl SparseMatrix {
    /// Entry polynomials, indexed by `(row, col)`; zero entries omitted.
    pub fn polynomials(&self) -> BTreeMap<(usize, usize), Polynomial> {
        let mut out: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
        for e in &self.entries {
            out.entry((e.i, e.j))
                .or_default()
                .add_term(e.exp.clone(), i64::from(e.sign));
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn dense(&self) -> Vec<Vec<Polynomial>> {
        let mut m = vec![vec![Polynomial::default(); self.cols]; self.rows];
        for ((i, j), p) in self.polynomials() {
            m[i][j] = p;
        }
        m
    }

    /// Dense rendering with entries like `y1x3 - x1y3`.
    pub fn display(&self, nvars: usize) -> Vec<Vec<String>> {
        self.dense()
            .iter()
            .map(|row| row.iter().map(|p| p.display(nvars)).collect())
            .collect()
    }
}

/// The grading class of a summand under `ℤ^n/L̃ × ℤ^n/L̃`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Twist {
    pub x: GradedClass,
    pub y: GradedClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    /// Number of variable pairs.
    pub n: usize,
    /// Rank of the free module in homological degree `i`.
    pub ranks: Vec<usize>,
    /// `differentials[i]` maps degree `i + 1` to degree `i`.
    pub differentials: Vec<SparseMatrix>,
    /// Per degree, the label exponent of each summand.
    pub labels: Vec<Vec<Vec<i64>>>,
    /// Per degree, the quotient-complex cell behind each summand.
    pub cells: Vec<Vec<usize>>,
    #[serde(default)]
    pub twists: Vec<Vec<Twist>>,
}

impl ChainComplex {
    pub fn f_vector(&self) -> Vec<usize> {
        self.ranks.clone()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cc: ChainComplex = serde_json::from_str(s)?;
        cc.validate()?;
        Ok(cc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.differentials.len() + 1 != self.ranks.len() && !self.ranks.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{} ranks but {} differentials",
                self.ranks.len(),
                self.differentials.len()
            )));
        }
        for (i, d) in self.differentials.iter().enumerate() {
            if d.rows != self.ranks[i] || d.cols != self.ranks[i + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "differential {} is {}x{}, expected {}x{}",
                    i + 1,
                    d.rows,
                    d.cols,
                    self.ranks[i],
                    self.ranks[i + 1]
                )));
            }
            for e in &d.entries {
                if e.i >= d.rows || e.j >= d.cols || e.exp.len() != 2 * self.n || e.sign.abs() != 1 {
                    return Err(Error::InvalidInput(format!(
                        "malformed entry in differential {}: {e:?}",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Entries that are nonzero constants; a minimal complex has none.
    pub fn unit_entries(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (k, d) in self.differentials.iter().enumerate() {
            for ((i, j), p) in d.polynomials() {
                if p.terms.len() == 1 && p.terms.keys().all(|e| e.iter().all(|&x| x == 0)) {
                    out.push((k + 1, i, j));
                }
            }
        }
        out
    }

    pub fn is_minimal(&self) -> bool {
        self.unit_entries().is_empty()
    }

    /// Copy with the sign of one term negated.
    pub fn with_flipped_sign(&self, degree: usize, term: usize) -> ChainComplex {
        let mut cc = self.clone();
        let e = &mut cc.differentials[degree - 1].entries[term];
        e.sign = -e.sign;
        cc
    }
}

/// `∂(F) = Σ ε(F,F′)·(m_F/m_{F′})·F′` over the facets of each cell.
pub fn cellular_differential(qc: &QuotientComplex) -> Result<ChainComplex> {
    let m = qc.m();
    let n = qc.n();
    let mut index = vec![0usize; qc.cells.len()];
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
    for c in &qc.cells {
        index[c.id] = cells[c.dim].len();
        cells[c.dim].push(c.id);
    }
    let ranks: Vec<usize> = cells.iter().map(Vec::len).collect();
    let mut differentials: Vec<SparseMatrix> = (1..=m)
        .map(|d| SparseMatrix {
            rows: ranks[d - 1],
            cols: ranks[d],
            entries: Vec::new(),
        })
        .collect();
    for inc in &qc.incidence {
        let f = &qc.cells[inc.from];
        let g_label = qc.shifted_label(inc.to, &inc.shift);
        let exp: Vec<i64> = f.label.iter().zip(&g_label).map(|(a, b)| a - b).collect();
        if exp.iter().any(|&e| e < 0) {
            return Err(Error::LabelDivision {
                cell: LaurentMonomial::xy(f.label.clone()).to_string(),
                facet: LaurentMonomial::xy(g_label).to_string(),
            });
        }
        differentials[f.dim - 1].entries.push(Entry {
            i: index[inc.to],
            j: index[inc.from],
            sign: inc.sign,
            exp,
        });
    }
    for d in &mut differentials {
        d.entries.sort();
    }
    let labels = cells
        .iter()
        .map(|ids| ids.iter().map(|&id| qc.cells[id].label.clone()).collect())
        .collect();
    Ok(ChainComplex {
        n,
        ranks,
        differentials,
        labels,
        cells,
        twists: Vec::new(),
    })
}

fn product(a: &SparseMatrix, b: &SparseMatrix) -> BTreeMap<(usize, usize), Polynomial> {
    let mut by_row: BTreeMap<usize, Vec<&Entry>> = BTreeMap::new();
    for e in &b.entries {
        by_row.entry(e.i).or_default().push(e);
    }
    let mut out: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
    for e in &a.entries {
        if let Some(rest) = by_row.get(&e.j) {
            for f in rest {
                let exp = e.exp.iter().zip(&f.exp).map(|(x, y)| x + y).collect();
                out.entry((e.i, f.j))
                    .or_default()
                    .add_term(exp, i64::from(e.sign * f.sign));
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Whether every composite `∂_i ∘ ∂_{i+1}` vanishes as a polynomial matrix.
pub fn verify_d_squared(cc: &ChainComplex) -> bool {
    cc.differentials
        .windows(2)
        .all(|w| product(&w[0], &w[1]).is_empty())
}

/// Attaches `(class(x-part), class(y-part))` to every summand and checks each entry has degree 0.
pub fn graded_twists(cc: &ChainComplex, degrees: &DegreeMap) -> Result<ChainComplex> {
    let n = cc.n;
    let twist = |label: &[i64]| Twist {
        x: degrees.class_i64(&label[..n]),
        y: degrees.class_i64(&label[n..]),
    };
    let twists: Vec<Vec<Twist>> = cc
        .labels
        .iter()
        .map(|ls| ls.iter().map(|l| twist(l)).collect())
        .collect();
    for (k, d) in cc.differentials.iter().enumerate() {
        for e in &d.entries {
            let src = &cc.labels[k + 1][e.j];
            let shifted: Vec<i64> = src.iter().zip(&e.exp).map(|(a, b)| a - b).collect();
            if twist(&shifted) != twists[k][e.i] {
                return Err(Error::Grading(format!(
                    "entry ({}, {}) of differential {} is not homogeneous of degree 0",
                    e.i,
                    e.j,
                    k + 1
                )));
            }
        }
    }
    Ok(ChainComplex {
        twists,
        ..cc.clone()
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fan::examples::*;
    use num_bigint::BigInt;
    use crate::io::parse_rational_list;
    use crate::pipeline::{run_pipeline, GroupSpec, Pipeline, PipelineSpec};

    pub(crate) fn pipeline(fan: crate::fan::Fan, eps: &str, group: GroupSpec) -> Pipeline {
        run_pipeline(&PipelineSpec {
            fan,
            epsilon: parse_rational_list(eps).unwrap(),
            group,
            window: None,
        })
        .unwrap()
    }

    #[test]
    fn p2_matches_displayed_resolution() {
        let p = pipeline(p2(), "", GroupSpec::trivial());
        let cc = cellular_differential(&p.complex).unwrap();
        assert_eq!(cc.f_vector(), vec![1, 3, 2]);
        assert!(verify_d_squared(&cc));
        let d1 = parse_matrix(&[&["y1x3 - x1y3", "x2y3 - x3y2", "x1y2 - x2y1"]], 3).unwrap();
        let d2 = parse_matrix(&[&["y2", "x2"], &["y1", "x1"], &["y3", "x3"]], 3).unwrap();
        assert!(matches_up_to_symmetry(&cc.differentials[0].dense(), &d1));
        assert!(matches_up_to_symmetry(&cc.differentials[1].dense(), &d2));
        assert!(cc.is_minimal());
    }

    #[test]
    fn p1_mu6_circulant() {
        let p = pipeline(p1(), "", GroupSpec::cyclic(6));
        let cc = cellular_differential(&p.complex).unwrap();
        assert_eq!(cc.f_vector(), vec![6, 6]);
        let rows: Vec<Vec<String>> = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| {
                        if i == j {
                            "-x1y2".to_string()
                        } else if i == (j + 1) % 6 {
                            "x2y1".to_string()
                        } else {
                            "0".to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        let refs: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
        let slices: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
        let target = parse_matrix(&slices, 2).unwrap();
        assert!(matches_up_to_symmetry(&cc.differentials[0].dense(), &target));
    }

    pub(crate) const BLP2_TABLE: [[&str; 10]; 5] = [
        ["0", "0", "0", "0", "1", "-1", "0", "x3y4", "0", "-x3y1"],
        ["0", "1", "-y2", "0", "0", "1", "0", "0", "-x3y1", "0"],
        ["0", "0", "0", "1", "-1", "0", "-x1y4", "0", "0", "x1y3"],
        ["y2", "-1", "0", "-1", "0", "0", "0", "0", "x1y3", "0"],
        ["-x2", "0", "x2", "0", "0", "0", "x4y1", "-x4y3", "0", "0"],
    ];

    #[test]
    fn blp2_nef_chamber_table() {
        let p = pipeline(blp2(), "1/100,0,0,1/100", GroupSpec::trivial());
        assert!(p.gate.transversal);
        let cc = cellular_differential(&p.complex).unwrap();
        assert_eq!(cc.f_vector(), vec![5, 10, 5]);
        assert!(verify_d_squared(&cc));
        let rows: Vec<&[&str]> = BLP2_TABLE.iter().map(|r| &r[..]).collect();
        let table = parse_matrix(&rows, 4).unwrap();
        let ours = cc.differentials[0].dense();
        assert!(
            matches_up_to_symmetry(&ours, &table),
            "{:#?}",
            cc.differentials[0].display(4)
        );
        assert!(!cc.is_minimal());
        let r = exactness_certificate(&p.complex, None).unwrap();
        assert!(r.is_exact(), "{:?}", r.failures);
        assert!(!r.index_zero_defects.is_empty());
    }

    #[test]
    fn blp2_other_chamber_exact() {
        let p = pipeline(blp2_other(), "0,1/100,0,1/100", GroupSpec::trivial());
        let cc = cellular_differential(&p.complex).unwrap();
        assert!(verify_d_squared(&cc));
        let r = exactness_certificate(&p.complex, None).unwrap();
        assert!(r.is_exact(), "{:?}", r.failures);
    }

    #[test]
    fn sign_flip_breaks_d_squared() {
        let p = pipeline(p2(), "", GroupSpec::trivial());
        let cc = cellular_differential(&p.complex).unwrap();
        assert!(!verify_d_squared(&cc.with_flipped_sign(2, 0)));
    }

    #[test]
    fn p2_twists() {
        let p = pipeline(p2(), "", GroupSpec::trivial());
        let cc = cellular_differential(&p.complex).unwrap();
        let g = graded_twists(&cc, &p.degree_map()).unwrap();
        let v = &g.twists[0][0];
        assert!(v.x.free.iter().chain(&v.y.free).all(|x| *x == BigInt::from(0)));
    }

    #[test]
    fn p1_mu4_twists_are_antidiagonal() {
        let p = pipeline(p1(), "", GroupSpec::cyclic(4));
        let cc = cellular_differential(&p.complex).unwrap();
        let g = graded_twists(&cc, &p.degree_map()).unwrap();
        let dm = p.degree_map();
        let mut chars = Vec::new();
        for t in &g.twists[0] {
            assert!(t.x.free.iter().chain(&t.y.free).all(|x| *x == BigInt::from(0)));
            assert_eq!(dm.group.neg(&t.x.torsion), t.y.torsion);
            chars.push(t.x.torsion.clone());
        }
        chars.sort();
        chars.dedup();
        assert_eq!(chars.len(), 4);
    }

    #[test]
    fn json_round_trip() {
        let p = pipeline(p2(), "", GroupSpec::trivial());
        let cc = cellular_differential(&p.complex).unwrap();
        let s = serde_json::to_string(&cc).unwrap();
        assert_eq!(ChainComplex::from_json(&s).unwrap(), cc);
    }
}
