//! Periodic hyperplane arrangements `{t ∈ ℝ^m : b_i·t + ε_i ∈ ℤ}`.
//!
//! A cell is identified by its code `c_i = ⌊f_i⌋ + ⌈f_i⌉` with `f_i = b_i·t + ε_i`, constant on
//! the cell: even entries say the cell lies on the hyperplane `f_i = c_i/2`, odd entries that it
//! lies strictly between `⌊c_i/2⌋` and `⌊c_i/2⌋ + 1`. Translating by `z ∈ ℤ^m` adds `2Bz`.

pub mod checks;
pub mod quotient;

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::boxsearch::BoxSearcher;
use crate::lattice::IntegerMatrix;
use crate::rational::{ceil, floor, find_point, inverse, q, rank, Constraint, Rel, Q};

pub use checks::{check_transversality, epsilon_stable, vertices_equal_lattice, TransversalityReport};
pub use quotient::{covering_map, quotient_complex, CoveringMap, Incidence, QCell, QuotientComplex};

/// Largest lattice rank handled by the cell enumerator.
pub const MAX_RANK: usize = 3;

#[derive(Clone, Debug)]
pub struct ArrangementSpec {
    /// `n × m` basis of `L`; row `i` is the normal of family `i` in lattice coordinates.
    pub basis: IntegerMatrix,
    pub epsilon: Vec<Q>,
    pub window: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Q>,
    pub code: Vec<i64>,
    /// Families whose hyperplane passes through the vertex.
    pub on: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Offset {
    /// On the hyperplane `f_i = j`.
    On(i64),
    /// Strictly between `f_i = j` and `f_i = j + 1`.
    Between(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub dim: usize,
    pub code: Vec<i64>,
    /// Centroid of the closure vertices.
    #[serde(with = "crate::io::qvec")]
    pub point: Vec<Q>,
    /// Exponent in `ℤ^{2n}`: x-part then y-part.
    pub label: Vec<i64>,
    #[serde(with = "crate::io::qmat")]
    pub vertices: Vec<Vec<Q>>,
}

impl Cell {
    pub fn offsets(&self) -> Vec<Offset> {
        self.code
            .iter()
            .map(|&c| {
                if c % 2 == 0 {
                    Offset::On(c / 2)
                } else {
                    Offset::Between(c.div_euclid(2))
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    n: usize,
    m: usize,
    b: Vec<Vec<i64>>,
    eps: Vec<Q>,
    active: Vec<bool>,
    diameter: Vec<Q>,
    vertices: Vec<Vertex>,
    stars: HashMap<Vec<usize>, Vec<Vec<i8>>>,
}

impl Arrangement {
    pub fn new(basis: &IntegerMatrix, epsilon: &[Q]) -> Result<Self> {
        let n = basis.rows();
        let m = basis.cols();
        if m == 0 || m > MAX_RANK {
            return Err(Error::Unsupported(format!(
                "cell enumeration needs lattice rank between 1 and {MAX_RANK}, got {m}"
            )));
        }
        let r = basis.rank();
        if r != m {
            return Err(Error::DependentColumns { rank: r, cols: m });
        }
        if epsilon.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "epsilon has {} entries, expected {}",
                epsilon.len(),
                n
            )));
        }
        if let Some(e) = epsilon.iter().find(|e| e.is_negative() || **e >= q(1)) {
            return Err(Error::InvalidInput(format!(
                "epsilon entries must lie in [0, 1), got {}",
                crate::io::format_rational(e)
            )));
        }
        let mut b = Vec::with_capacity(n);
        for i in 0..n {
            let row: Option<Vec<i64>> = basis.row(i).iter().map(|x| x.to_i64()).collect();
            b.push(row.ok_or_else(|| Error::Unsupported("basis entries exceed 64 bits".into()))?);
        }
        let mut active = Vec::with_capacity(n);
        for i in 0..n {
            let nonzero = b[i].iter().any(|&x| x != 0);
            if !nonzero && !epsilon[i].is_zero() {
                return Err(Error::DegenerateArrangement(format!(
                    "family {i} has zero normal and nonzero shift"
                )));
            }
            active.push(nonzero);
        }
        let ones = vec![BigInt::from(1); n];
        let neg: Vec<BigInt> = ones.iter().map(|x| -x).collect();
        let (lo, hi) = BoxSearcher::new(basis)
            .real_bounds(&neg, &ones)
            .expect("origin is feasible");
        let diameter = lo.iter().zip(&hi).map(|(a, b)| a.abs().max(b.abs())).collect();

        let mut arr = Arrangement {
            n,
            m,
            b,
            eps: epsilon.to_vec(),
            active,
            diameter,
            vertices: Vec::new(),
            stars: HashMap::new(),
        };
        arr.vertices = arr.vertex_orbits(basis);
        let on_sets: BTreeSet<Vec<usize>> = arr.vertices.iter().map(|v| v.on.clone()).collect();
        for s in on_sets {
            let signs = arr.realizable_signs(&s);
            arr.stars.insert(s, signs);
        }
        Ok(arr)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn epsilon(&self) -> &[Q] {
        &self.eps
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    /// Per-coordinate bound on `|p - p'|` for two points in one closed cell.
    pub fn diameter(&self) -> &[Q] {
        &self.diameter
    }

    /// Vertex orbits under `ℤ^m`, each with its point in `[0,1)^m`.
    pub fn vertex_orbits_mod_z(&self) -> &[Vertex] {
        &self.vertices
    }

    fn vertex_orbits(&self, basis: &IntegerMatrix) -> Vec<Vertex> {
        let m = self.m;
        let families: Vec<usize> = (0..self.n).filter(|&i| self.active[i]).collect();
        let mut points: BTreeSet<Vec<Q>> = BTreeSet::new();
        for s in families.into_iter().combinations(m) {
            let sub: Vec<Vec<Q>> = s
                .iter()
                .map(|&i| self.b[i].iter().map(|&x| q(x)).collect())
                .collect();
            let Some(inv) = inverse(&sub) else { continue };
            let det = basis
                .select_rows(&s)
                .determinant()
                .abs()
                .to_i64()
                .expect("small determinant");
            for j in (0..m).map(|_| 0..det).multi_cartesian_product() {
                let rhs: Vec<Q> = j
                    .iter()
                    .zip(&s)
                    .map(|(&jj, &i)| q(jj) - &self.eps[i])
                    .collect();
                let t: Vec<Q> = inv
                    .iter()
                    .map(|row| crate::rational::dot(row, &rhs))
                    .map(|x| {
                        let f = Q::from_integer(floor(&x));
                        x - f
                    })
                    .collect();
                points.insert(t);
            }
        }
        points
            .into_iter()
            .map(|t| {
                let code = self.code_at(&t);
                let on = self.on_families(&code);
                Vertex { point: t, code, on }
            })
            .collect()
    }

    fn realizable_signs(&self, on: &[usize]) -> Vec<Vec<i8>> {
        let mut out = Vec::new();
        for sigma in (0..on.len()).map(|_| [-1i8, 0, 1]).multi_cartesian_product() {
            let cons: Vec<Constraint> = on
                .iter()
                .zip(&sigma)
                .map(|(&i, &s)| {
                    let coeffs = self.b[i].iter().map(|&x| q(x)).collect();
                    match s {
                        0 => Constraint::new(coeffs, Rel::Eq, q(0)),
                        1 => Constraint::new(coeffs, Rel::Ge, q(1)),
                        _ => Constraint::new(coeffs, Rel::Le, q(-1)),
                    }
                })
                .collect();
            if find_point(self.m, &cons).is_some() {
                out.push(sigma);
            }
        }
        out
    }

    /// `f_i(t) = b_i·t + ε_i`.
    pub fn values(&self, t: &[Q]) -> Vec<Q> {
        (0..self.n)
            .map(|i| {
                self.b[i]
                    .iter()
                    .zip(t)
                    .fold(self.eps[i].clone(), |acc, (&x, y)| acc + q(x) * y)
            })
            .collect()
    }

    pub fn code_at(&self, t: &[Q]) -> Vec<i64> {
        self.values(t)
            .iter()
            .map(|f| (floor(f) + ceil(f)).to_i64().expect("code fits in i64"))
            .collect()
    }

    /// Code of the translate by `z`.
    pub fn translate_code(&self, code: &[i64], z: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| code[i] + 2 * self.b[i].iter().zip(z).map(|(a, b)| a * b).sum::<i64>())
            .collect()
    }

    /// Active families whose hyperplane contains the cell.
    pub fn on_families(&self, code: &[i64]) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.active[i] && code[i] % 2 == 0)
            .collect()
    }

    pub fn cell_dim(&self, code: &[i64]) -> usize {
        let rows: Vec<Vec<Q>> = self
            .on_families(code)
            .iter()
            .map(|&i| self.b[i].iter().map(|&x| q(x)).collect())
            .collect();
        self.m - rank(&rows, self.m)
    }

    /// Whether the cell with code `g` lies in the closure of the cell with code `c`.
    pub fn is_face(&self, g: &[i64], c: &[i64]) -> bool {
        (0..self.n).all(|i| {
            if !self.active[i] {
                return true;
            }
            if c[i] % 2 == 0 {
                g[i] == c[i]
            } else {
                (g[i] - c[i]).abs() <= 1
            }
        })
    }

    /// Codes of all cells whose closure contains the vertex with code `vertex_code`.
    pub fn star(&self, vertex_code: &[i64]) -> Vec<Vec<i64>> {
        let on = self.on_families(vertex_code);
        let signs = self
            .stars
            .get(&on)
            .cloned()
            .unwrap_or_else(|| self.realizable_signs(&on));
        signs
            .iter()
            .map(|sigma| {
                let mut c = vertex_code.to_vec();
                for (&i, &s) in on.iter().zip(sigma) {
                    c[i] += i64::from(s);
                }
                c
            })
            .collect()
    }

    /// Vertex translates within `radius` of `center` in every coordinate.
    pub fn vertices_near(&self, center: &[Q], radius: &[Q]) -> Vec<(Vec<Q>, Vec<i64>)> {
        let ranges: Vec<std::ops::RangeInclusive<i64>> = (0..self.m)
            .map(|l| {
                let lo = ceil(&(&center[l] - &radius[l] - q(1))).to_i64().unwrap();
                let hi = floor(&(&center[l] + &radius[l])).to_i64().unwrap();
                lo..=hi
            })
            .collect();
        let mut out = Vec::new();
        for z in ranges.into_iter().multi_cartesian_product() {
            for v in &self.vertices {
                let w: Vec<Q> = v.point.iter().zip(&z).map(|(a, &b)| a + q(b)).collect();
                let close = (0..self.m).all(|l| (&w[l] - &center[l]).abs() <= radius[l]);
                if close {
                    out.push((w, self.translate_code(&v.code, &z)));
                }
            }
        }
        out
    }

    /// Builds the cell with the given code; `near` must be a point of its closure.
    pub fn make_cell(&self, code: &[i64], near: &[Q]) -> Cell {
        let verts: Vec<(Vec<Q>, Vec<i64>)> = self
            .vertices_near(near, &self.diameter)
            .into_iter()
            .filter(|(_, g)| self.is_face(g, code))
            .collect();
        self.cell_from_vertices(code, verts)
    }

    /// Builds a cell from its complete list of closure vertices.
    pub fn cell_from_vertices(&self, code: &[i64], mut verts: Vec<(Vec<Q>, Vec<i64>)>) -> Cell {
        verts.sort();
        verts.dedup();
        assert!(!verts.is_empty(), "cell without vertices");
        let k = q(verts.len() as i64);
        let point: Vec<Q> = (0..self.m)
            .map(|l| verts.iter().fold(Q::zero(), |acc, (w, _)| acc + &w[l]) / &k)
            .collect();
        let mut hi = vec![i64::MIN; self.n];
        let mut lo = vec![i64::MAX; self.n];
        for (_, g) in &verts {
            for i in 0..self.n {
                let u = g[i].div_euclid(2);
                hi[i] = hi[i].max(u);
                lo[i] = lo[i].min(u);
            }
        }
        let mut label = hi;
        label.extend(lo.iter().map(|u| -u));
        Cell {
            dim: self.cell_dim(code),
            code: code.to_vec(),
            point,
            label,
            vertices: verts.into_iter().map(|(w, _)| w).collect(),
        }
    }

    /// Number of cell orbits under `ℤ^m` in each dimension.
    pub fn orbit_f_vector(&self) -> Vec<usize> {
        let two_b = IntegerMatrix::from_rows(&self.b).mul(&scalar(2, self.m));
        let reducer = CodeReducer::new(&two_b);
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut f = vec![0; self.m + 1];
        for v in &self.vertices {
            for c in self.star(&v.code) {
                if seen.insert(reducer.reduce(&c)) {
                    f[self.cell_dim(&c)] += 1;
                }
            }
        }
        f
    }
}

fn scalar(k: i64, m: usize) -> IntegerMatrix {
    let mut s = IntegerMatrix::identity(m);
    for i in 0..m {
        s[(i, i)] = BigInt::from(k);
    }
    s
}

/// Canonical representatives of `ℤ^n` modulo the column span of a matrix.
#[derive(Clone, Debug)]
pub struct CodeReducer {
    columns: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl CodeReducer {
    pub fn new(a: &IntegerMatrix) -> Self {
        let (h, _) = a.hermite_normal_form();
        let mut columns = Vec::new();
        let mut pivots = Vec::new();
        for j in 0..h.cols() {
            let col: Vec<i64> = h.col(j).iter().map(|x| x.to_i64().expect("small")).collect();
            if let Some(p) = col.iter().position(|&x| x != 0) {
                pivots.push(p);
                columns.push(col);
            }
        }
        CodeReducer { columns, pivots }
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for (col, &p) in self.columns.iter().zip(&self.pivots) {
            let f = v[p].div_euclid(col[p]);
            if f != 0 {
                for (x, c) in v.iter_mut().zip(col) {
                    *x -= f * c;
                }
            }
        }
        v
    }
}

/// Cells of the arrangement having a closure vertex in `[-k, k]^m`.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub arrangement: Arrangement,
    pub window: u64,
    pub cells: Vec<Cell>,
    index: HashMap<Vec<i64>, usize>,
}

impl CellComplex {
    pub fn find(&self, code: &[i64]) -> Option<&Cell> {
        self.index.get(code).map(|&i| &self.cells[i])
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.arrangement.m + 1];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }
}

/// Default window radius for a basis: `2·(max |b| + 1)`.
pub fn default_window(basis: &IntegerMatrix) -> u64 {
    let max = basis
        .to_rows()
        .iter()
        .flatten()
        .map(|x| x.abs().to_u64().unwrap_or(u64::MAX))
        .max()
        .unwrap_or(0);
    2 * (max + 1)
}

pub fn build_arrangement(spec: &ArrangementSpec) -> Result<CellComplex> {
    if spec.window < 1 {
        return Err(Error::InvalidInput("window radius must be at least 1".into()));
    }
    let arr = Arrangement::new(&spec.basis, &spec.epsilon)?;
    let k = spec.window as i64;
    let kq = q(k);
    // vertices of a cell meeting the window lie within the window grown by the diameter
    let reach: Vec<i64> = arr
        .diameter
        .iter()
        .map(|d| k + ceil(d).to_i64().expect("small diameter") + 1)
        .collect();
    let mut verts: HashMap<Vec<i64>, Vec<(Vec<Q>, Vec<i64>)>> = HashMap::new();
    let mut wanted: BTreeSet<Vec<i64>> = BTreeSet::new();
    for v in &arr.vertices {
        for z in reach.iter().map(|&r| -r..=r).multi_cartesian_product() {
            let w: Vec<Q> = v.point.iter().zip(&z).map(|(a, &b)| a + q(b)).collect();
            let code = arr.translate_code(&v.code, &z);
            let inside = w.iter().all(|x| x.abs() <= kq);
            for c in arr.star(&code) {
                if inside {
                    wanted.insert(c.clone());
                }
                verts.entry(c).or_default().push((w.clone(), code.clone()));
            }
        }
    }
    let mut cells: Vec<Cell> = wanted
        .into_iter()
        .map(|c| {
            let vs = verts.remove(&c).expect("cell has vertices");
            arr.cell_from_vertices(&c, vs)
        })
        .collect();
    cells.sort_by(|a, b| (a.dim, &a.point, &a.code).cmp(&(b.dim, &b.point, &b.code)));
    let index = cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.code.clone(), i))
        .collect();
    Ok(CellComplex {
        arrangement: arr,
        window: spec.window,
        cells,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_rational_list;

    fn p2() -> IntegerMatrix {
        IntegerMatrix::from_rows(&[vec![1i64, 0], vec![0, 1], vec![-1, -1]])
    }

    fn blp2() -> IntegerMatrix {
        IntegerMatrix::from_rows(&[vec![1i64, 0], vec![1, 1], vec![0, 1], vec![-1, -1]])
    }

    #[test]
    fn p2_orbits() {
        let arr = Arrangement::new(&p2(), &[q(0), q(0), q(0)]).unwrap();
        assert_eq!(arr.orbit_f_vector(), vec![1, 3, 2]);
        assert_eq!(arr.vertex_orbits_mod_z().len(), 1);
        assert_eq!(arr.vertex_orbits_mod_z()[0].on.len(), 3);
    }

    #[test]
    fn p1_orbits() {
        let b = IntegerMatrix::from_rows(&[vec![1i64], vec![-1]]);
        let arr = Arrangement::new(&b, &[q(0), q(0)]).unwrap();
        assert_eq!(arr.orbit_f_vector(), vec![1, 1]);
    }

    #[test]
    fn blp2_orbits() {
        let eps = parse_rational_list("1/100,0,0,1/100").unwrap();
        let arr = Arrangement::new(&blp2(), &eps).unwrap();
        assert_eq!(arr.orbit_f_vector(), vec![5, 10, 5]);
    }

    #[test]
    fn degenerate_family_rejected() {
        let b = IntegerMatrix::from_rows(&[vec![1i64], vec![0]]);
        let err = Arrangement::new(&b, &[q(0), Q::new(1.into(), 2.into())]).unwrap_err();
        assert!(matches!(err, Error::DegenerateArrangement(_)));
        assert!(Arrangement::new(&b, &[q(0), q(0)]).is_ok());
    }

    #[test]
    fn windowed_complex_is_periodic() {
        let eps = parse_rational_list("1/100,0,0,1/100").unwrap();
        let spec = ArrangementSpec {
            basis: blp2(),
            epsilon: eps,
            window: 3,
        };
        let cx = build_arrangement(&spec).unwrap();
        let arr = &cx.arrangement;
        for cell in &cx.cells {
            if cell.point.iter().any(|x| x.abs() > q(1)) {
                continue;
            }
            for z in [[1i64, 0], [0, 1], [-1, 1]] {
                let code = arr.translate_code(&cell.code, &z);
                let moved = cx.find(&code).expect("translate inside window");
                let bz: Vec<i64> = arr
                    .normals()
                    .iter()
                    .map(|r| r[0] * z[0] + r[1] * z[1])
                    .collect();
                let n = arr.n();
                for i in 0..n {
                    assert_eq!(moved.label[i], cell.label[i] + bz[i]);
                    assert_eq!(moved.label[n + i], cell.label[n + i] - bz[i]);
                }
            }
        }
    }

    #[test]
    fn face_labels_divide() {
        let spec = ArrangementSpec {
            basis: p2(),
            epsilon: vec![q(0); 3],
            window: 2,
        };
        let cx = build_arrangement(&spec).unwrap();
        let arr = &cx.arrangement;
        for f in &cx.cells {
            for g in &cx.cells {
                if g.dim < f.dim && arr.is_face(&g.code, &f.code) {
                    assert!(g.label.iter().zip(&f.label).all(|(a, b)| a <= b));
                }
            }
        }
    }

    #[test]
    fn reducer_is_canonical() {
        let b = blp2();
        let r = CodeReducer::new(&b.mul(&scalar(2, 2)));
        let c = vec![1, 3, -1, 0];
        let moved = vec![1 + 2, 3 + 2 + 2, -1 + 2, 0 - 4];
        assert_eq!(r.reduce(&c), r.reduce(&moved));
    }
}
