//! Quotients of the arrangement by a finite-index translation lattice.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Arrangement, CellComplex, CodeReducer, Offset};
use crate::error::{Error, Result};
use crate::lattice::{IntegerMatrix, Lattice};
use crate::rational::{det, inverse, nullspace, q, rank, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QCell {
    pub id: usize,
    pub dim: usize,
    pub code: Vec<i64>,
    pub offsets: Vec<Offset>,
    #[serde(with = "crate::io::qvec")]
    pub point: Vec<Q>,
    pub label: Vec<i64>,
    #[serde(with = "crate::io::qmat")]
    pub vertices: Vec<Vec<Q>>,
}

/// `to + shift` is a facet of `from`, with the given incidence sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Incidence {
    pub from: usize,
    pub to: usize,
    pub sign: i8,
    /// Translation in lattice coordinates; lies in the translation lattice.
    pub shift: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientComplex {
    /// Rows are the family normals.
    pub basis: Vec<Vec<i64>>,
    #[serde(with = "crate::io::qvec")]
    pub epsilon: Vec<Q>,
    /// Columns span the translation lattice (Hermite form).
    pub translation: Vec<Vec<i64>>,
    pub window: u64,
    pub cells: Vec<QCell>,
    pub incidence: Vec<Incidence>,
}

impl QuotientComplex {
    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn m(&self) -> usize {
        self.translation.len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.m() + 1];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &k)| if d % 2 == 0 { k as i64 } else { -(k as i64) })
            .sum()
    }

    pub fn basis_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(&self.basis)
    }

    pub fn translation_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(&self.translation)
    }

    /// Index of the translation lattice in `ℤ^m`.
    pub fn index(&self) -> u64 {
        self.translation_matrix()
            .determinant()
            .abs()
            .to_u64()
            .unwrap_or(u64::MAX)
    }

    /// `B·z` for `z` in lattice coordinates.
    pub fn apply_basis(&self, z: &[i64]) -> Vec<i64> {
        self.basis
            .iter()
            .map(|r| r.iter().zip(z).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Label of the translate of cell `id` by `shift`.
    pub fn shifted_label(&self, id: usize, shift: &[i64]) -> Vec<i64> {
        let n = self.n();
        let bz = self.apply_basis(shift);
        let mut l = self.cells[id].label.clone();
        for i in 0..n {
            l[i] += bz[i];
            l[n + i] -= bz[i];
        }
        l
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        self.cells.iter().filter(|c| c.dim == d).map(|c| c.id).collect()
    }

    /// Removes a cell and everything whose boundary reaches it, renumbering the rest.
    pub fn without_cell(&self, id: usize) -> QuotientComplex {
        let mut removed: BTreeSet<usize> = BTreeSet::new();
        removed.insert(id);
        loop {
            let before = removed.len();
            for inc in &self.incidence {
                if removed.contains(&inc.to) {
                    removed.insert(inc.from);
                }
            }
            if removed.len() == before {
                break;
            }
        }
        let mut remap = HashMap::new();
        let mut cells = Vec::new();
        for c in &self.cells {
            if removed.contains(&c.id) {
                continue;
            }
            let mut c = c.clone();
            remap.insert(c.id, cells.len());
            c.id = cells.len();
            cells.push(c);
        }
        let incidence = self
            .incidence
            .iter()
            .filter(|i| !removed.contains(&i.from) && !removed.contains(&i.to))
            .map(|i| Incidence {
                from: remap[&i.from],
                to: remap[&i.to],
                sign: i.sign,
                shift: i.shift.clone(),
            })
            .collect();
        QuotientComplex {
            cells,
            incidence,
            ..self.clone()
        }
    }
}

fn to_i64_rows(m: &IntegerMatrix) -> Vec<Vec<i64>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small entry")).collect())
        .collect()
}

fn qmat(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

/// Smallest window radius for which every orbit representative and its boundary is present.
pub fn required_window(arr: &Arrangement, translation: &IntegerMatrix) -> u64 {
    let (h, _) = translation.hermite_normal_form();
    let k = to_i64_rows(&h);
    let d = arr.diameter();
    let mut need = Q::zero();
    for l in 0..arr.m() {
        let lo: i64 = k[l].iter().filter(|&&x| x < 0).sum();
        let hi: i64 = k[l].iter().filter(|&&x| x > 0).sum();
        let a = &d[l] - q(lo);
        let b = &d[l] + q(hi);
        need = need.max(a).max(b);
    }
    crate::rational::ceil(&need).to_u64().unwrap_or(u64::MAX)
}

/// Orientation data: tangent basis and a complementary set of normals.
fn frame(arr: &Arrangement, code: &[i64]) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let m = arr.m();
    let on: Vec<Vec<Q>> = arr
        .on_families(code)
        .iter()
        .map(|&i| arr.normals()[i].iter().map(|&x| q(x)).collect())
        .collect();
    let tangent = if on.is_empty() {
        (0..m)
            .map(|l| (0..m).map(|j| if j == l { q(1) } else { q(0) }).collect())
            .collect()
    } else {
        nullspace(&on, m)
    };
    let mut normals: Vec<Vec<Q>> = Vec::new();
    for v in on {
        let mut trial = normals.clone();
        trial.push(v.clone());
        if rank(&trial, m) == trial.len() {
            normals.push(v);
        }
        if normals.len() + tangent.len() == m {
            break;
        }
    }
    (tangent, normals)
}

fn sign_of(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Representatives, facets and signs for the quotient by the columns of `translation`.
pub fn quotient_complex(cx: &CellComplex, translation: &IntegerMatrix) -> Result<QuotientComplex> {
    let arr = &cx.arrangement;
    let m = arr.m();
    if translation.rows() != m || translation.cols() != m || translation.rank() != m {
        return Err(Error::InvalidInput(format!(
            "translation lattice must have a full-rank {m}x{m} basis"
        )));
    }
    let need = required_window(arr, translation);
    if cx.window < need {
        return Err(Error::WindowTooSmall {
            given: cx.window,
            required: need,
        });
    }
    let (kh, _) = translation.hermite_normal_form();
    let k = to_i64_rows(&kh);
    let kinv = inverse(&qmat(&k)).expect("full rank");
    let b = IntegerMatrix::from_rows(arr.normals());
    let l_b = Lattice::new(b.clone())?;
    let two_bk = b.mul(&kh).mul(&{
        let mut s = IntegerMatrix::identity(m);
        for i in 0..m {
            s[(i, i)] = BigInt::from(2);
        }
        s
    });
    let reducer = CodeReducer::new(&two_bk);

    let in_domain = |p: &[Q]| {
        kinv.iter().all(|row| {
            let x = crate::rational::dot(row, p);
            !x.is_negative() && x < q(1)
        })
    };
    let reps: Vec<usize> = (0..cx.cells.len())
        .filter(|&i| in_domain(&cx.cells[i].point))
        .collect();
    let mut key_to_rep: HashMap<Vec<i64>, usize> = HashMap::new();
    for (r, &i) in reps.iter().enumerate() {
        let key = reducer.reduce(&cx.cells[i].code);
        if key_to_rep.insert(key, r).is_some() {
            return Err(Error::Internal(
                "two representatives share an orbit".into(),
            ));
        }
    }

    let mut incidence = Vec::new();
    for (r, &i) in reps.iter().enumerate() {
        let f = &cx.cells[i];
        if f.dim == 0 {
            continue;
        }
        let mut facets: BTreeSet<Vec<i64>> = BTreeSet::new();
        for w in &f.vertices {
            let wc = arr.code_at(w);
            for g in arr.star(&wc) {
                if arr.cell_dim(&g) + 1 == f.dim && arr.is_face(&g, &f.code) {
                    facets.insert(g);
                }
            }
        }
        let (tf, nf) = frame(arr, &f.code);
        let mut base: Vec<Vec<Q>> = tf.clone();
        base.extend(nf.iter().cloned());
        let orient_f = sign_of(&det(&base));
        for g in facets {
            if cx.find(&g).is_none() {
                return Err(Error::UnmatchedOrbit(format!("{g:?}")));
            }
            let key = reducer.reduce(&g);
            let &gr = key_to_rep
                .get(&key)
                .ok_or_else(|| Error::UnmatchedOrbit(format!("{g:?}")))?;
            let grep = &cx.cells[reps[gr]];
            let diff: Vec<BigInt> = g
                .iter()
                .zip(&grep.code)
                .map(|(a, c)| {
                    debug_assert!((a - c) % 2 == 0);
                    BigInt::from((a - c) / 2)
                })
                .collect();
            let tau = l_b
                .coefficients(&diff)
                .ok_or_else(|| Error::Internal("facet shift outside the lattice".into()))?;
            let tau: Vec<i64> = tau.iter().map(|x| x.to_i64().unwrap()).collect();
            let tq: Vec<Q> = tau.iter().map(|&x| q(x)).collect();
            if kinv
                .iter()
                .any(|row| !crate::rational::dot(row, &tq).is_integer())
            {
                return Err(Error::Internal(
                    "facet shift outside the translation lattice".into(),
                ));
            }
            let o: Vec<Q> = (0..m).map(|l| &grep.point[l] + &tq[l] - &f.point[l]).collect();
            let (tg, _) = frame(arr, &g);
            let mut rows = vec![o];
            rows.extend(tg);
            rows.extend(nf.iter().cloned());
            let s = sign_of(&det(&rows)) * orient_f;
            if s == 0 {
                return Err(Error::Internal("degenerate orientation".into()));
            }
            incidence.push((r, gr, s, tau));
        }
    }

    let mut qcells: Vec<QCell> = reps
        .iter()
        .enumerate()
        .map(|(r, &i)| {
            let c = &cx.cells[i];
            QCell {
                id: r,
                dim: c.dim,
                code: c.code.clone(),
                offsets: c.offsets(),
                point: c.point.clone(),
                label: c.label.clone(),
                vertices: c.vertices.clone(),
            }
        })
        .collect();
    qcells.sort_by(|a, b| (a.dim, &a.point, &a.code).cmp(&(b.dim, &b.point, &b.code)));
    let remap: HashMap<usize, usize> = qcells.iter().enumerate().map(|(new, c)| (c.id, new)).collect();
    for (new, c) in qcells.iter_mut().enumerate() {
        c.id = new;
    }
    let mut incidence: Vec<Incidence> = incidence
        .into_iter()
        .map(|(from, to, sign, shift)| Incidence {
            from: remap[&from],
            to: remap[&to],
            sign,
            shift,
        })
        .collect();
    incidence.sort();

    Ok(QuotientComplex {
        basis: arr.normals().to_vec(),
        epsilon: arr.epsilon().to_vec(),
        translation: k,
        window: cx.window,
        cells: qcells,
        incidence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringMap {
    /// For each fine cell: the coarse cell and the translation `z` with fine = coarse + z.
    pub image: Vec<(usize, Vec<i64>)>,
    pub degree: u64,
    pub surjective: bool,
    pub uniform_fibers: bool,
    pub labels_compatible: bool,
    pub commutes_with_incidence: bool,
}

impl CoveringMap {
    pub fn is_valid(&self) -> bool {
        self.surjective && self.uniform_fibers && self.labels_compatible && self.commutes_with_incidence
    }
}

/// The projection from the quotient by a finer lattice onto the quotient by a coarser one.
pub fn covering_map(fine: &QuotientComplex, coarse: &QuotientComplex) -> Result<CoveringMap> {
    if fine.basis != coarse.basis || fine.epsilon != coarse.epsilon {
        return Err(Error::InvalidInput(
            "complexes come from different arrangements".into(),
        ));
    }
    let m = fine.m();
    let kc = coarse.translation_matrix();
    let kc_lat = Lattice::new(kc.clone())?;
    for col in fine.translation_matrix().to_columns() {
        if !kc_lat.contains(&col) {
            return Err(Error::InvalidInput(
                "fine translation lattice is not contained in the coarse one".into(),
            ));
        }
    }
    let b = coarse.basis_matrix();
    let l_b = Lattice::new(b.clone())?;
    let mut two = IntegerMatrix::identity(m);
    for i in 0..m {
        two[(i, i)] = BigInt::from(2);
    }
    let reducer = CodeReducer::new(&b.mul(&kc).mul(&two));
    let keys: HashMap<Vec<i64>, usize> = coarse
        .cells
        .iter()
        .map(|c| (reducer.reduce(&c.code), c.id))
        .collect();
    let mut image = Vec::with_capacity(fine.cells.len());
    for c in &fine.cells {
        let &target = keys
            .get(&reducer.reduce(&c.code))
            .ok_or_else(|| Error::UnmatchedOrbit(format!("{:?}", c.code)))?;
        let diff: Vec<BigInt> = c
            .code
            .iter()
            .zip(&coarse.cells[target].code)
            .map(|(a, b)| BigInt::from((a - b) / 2))
            .collect();
        let z = l_b
            .coefficients(&diff)
            .ok_or_else(|| Error::Internal("covering shift outside the lattice".into()))?;
        image.push((target, z.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>()));
    }
    let degree = fine.index() / coarse.index().max(1);
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for (t, _) in &image {
        *counts.entry(*t).or_default() += 1;
    }
    let surjective = counts.len() == coarse.cells.len();
    let uniform_fibers = counts.values().all(|&c| c == degree);
    let labels_compatible = fine
        .cells
        .iter()
        .zip(&image)
        .all(|(c, (t, z))| coarse.shifted_label(*t, z) == c.label);
    let coarse_inc: BTreeSet<(usize, usize, i8, Vec<i64>)> = coarse
        .incidence
        .iter()
        .map(|i| (i.from, i.to, i.sign, i.shift.clone()))
        .collect();
    let commutes_with_incidence = fine.incidence.iter().all(|inc| {
        let (cf, zf) = &image[inc.from];
        let (cg, zg) = &image[inc.to];
        // fine facet = G_rep + shift = coarse(G) + zg + shift, seen from coarse(F) + zf
        let rel: Vec<i64> = (0..m).map(|l| zg[l] + inc.shift[l] - zf[l]).collect();
        coarse_inc.contains(&(*cf, *cg, inc.sign, rel))
    });
    Ok(CoveringMap {
        image,
        degree,
        surjective,
        uniform_fibers,
        labels_compatible,
        commutes_with_incidence,
    })
}
