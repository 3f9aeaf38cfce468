//! Dense integer matrices with exact Hermite and Smith normal forms.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(IntegerMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| x.into()));
        }
        IntegerMatrix { rows: r, cols: c, entries }
    }

    pub fn from_big_rows(rows: &[Vec<BigInt>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            entries.extend(row.iter().cloned());
        }
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<BigInt>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {} has length {}, expected {}",
                    j,
                    col.len(),
                    rows
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Matrix product. Panics if the inner dimensions differ.
    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &self[(i, j)] * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn neg(&self) -> IntegerMatrix {
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntegerMatrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(&self.entries[i * self.cols..(i + 1) * self.cols]);
        }
        IntegerMatrix {
            rows: idx.len(),
            cols: self.cols,
            entries,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntegerMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        IntegerMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Panics if not square.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        integer_rank(self.to_rows(), self.cols)
    }

    /// Column Hermite normal form: returns `(H, U)` with `H = A·U`, `U` unimodular,
    /// `H` lower echelon with positive pivots, entries left of each pivot reduced into
    /// `[0, pivot)`, and zero columns last.
    pub fn hermite_normal_form(&self) -> (IntegerMatrix, IntegerMatrix) {
        let mut h = self.clone();
        let mut u = IntegerMatrix::identity(self.cols);
        let mut k = 0;
        for r in 0..self.rows {
            if k == self.cols {
                break;
            }
            for j in k + 1..self.cols {
                if h[(r, j)].is_zero() {
                    continue;
                }
                if h[(r, k)].is_zero() {
                    h.swap_cols(k, j);
                    u.swap_cols(k, j);
                    continue;
                }
                let a = h[(r, k)].clone();
                let b = h[(r, j)].clone();
                let eg = a.extended_gcd(&b);
                let (g, x, y) = (eg.gcd, eg.x, eg.y);
                let p = -(&b / &g);
                let q = &a / &g;
                h.combine_cols(k, j, &x, &y, &p, &q);
                u.combine_cols(k, j, &x, &y, &p, &q);
            }
            if h[(r, k)].is_zero() {
                continue;
            }
            if h[(r, k)].is_negative() {
                h.negate_col(k);
                u.negate_col(k);
            }
            let pivot = h[(r, k)].clone();
            for j in 0..k {
                let f = h[(r, j)].div_floor(&pivot);
                if !f.is_zero() {
                    h.sub_col_multiple(j, k, &f);
                    u.sub_col_multiple(j, k, &f);
                }
            }
            k += 1;
        }
        (h, u)
    }

    /// Smith normal form: returns `(D, P, Q)` with `D = P·A·Q` diagonal, nonnegative,
    /// each diagonal entry dividing the next, and `P`, `Q` unimodular.
    pub fn smith_normal_form(&self) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
        let mut d = self.clone();
        let mut p = IntegerMatrix::identity(self.rows);
        let mut q = IntegerMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        for t in 0..n {
            loop {
                // smallest nonzero entry of the trailing block
                let mut best: Option<(usize, usize)> = None;
                for i in t..self.rows {
                    for j in t..self.cols {
                        if d[(i, j)].is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let (bi, bj) = match best {
                    Some(x) => x,
                    None => break,
                };
                d.swap_rows(t, bi);
                p.swap_rows(t, bi);
                d.swap_cols(t, bj);
                q.swap_cols(t, bj);

                let pivot = d[(t, t)].clone();
                let mut dirty = false;
                for i in t + 1..self.rows {
                    let f = d[(i, t)].div_floor(&pivot);
                    if !f.is_zero() {
                        d.sub_row_multiple(i, t, &f);
                        p.sub_row_multiple(i, t, &f);
                    }
                    if !d[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    let f = d[(t, j)].div_floor(&pivot);
                    if !f.is_zero() {
                        d.sub_col_multiple(j, t, &f);
                        q.sub_col_multiple(j, t, &f);
                    }
                    if !d[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                // divisibility of the trailing block
                let mut offender = None;
                'outer: for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if !d[(i, j)].is_multiple_of(&pivot) {
                            offender = Some(i);
                            break 'outer;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        d.add_row(t, i);
                        p.add_row(t, i);
                    }
                    None => break,
                }
            }
            if d[(t, t)].is_negative() {
                d.negate_row(t);
                p.negate_row(t);
            }
        }
        (d, p, q)
    }

    /// Diagonal of the Smith form, including zeros.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let (d, _, _) = self.smith_normal_form();
        (0..self.rows.min(self.cols)).map(|i| d[(i, i)].clone()).collect()
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// col_j -= f * col_k
    fn sub_col_multiple(&mut self, j: usize, k: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, k)] * f;
            self[(i, j)] -= v;
        }
    }

    /// row_i -= f * row_k
    fn sub_row_multiple(&mut self, i: usize, k: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(k, j)] * f;
            self[(i, j)] -= v;
        }
    }

    /// row_t += row_i
    fn add_row(&mut self, t: usize, i: usize) {
        for j in 0..self.cols {
            let v = self[(i, j)].clone();
            self[(t, j)] += v;
        }
    }

    /// (col_k, col_j) <- (x col_k + y col_j, p col_k + q col_j)
    fn combine_cols(&mut self, k: usize, j: usize, x: &BigInt, y: &BigInt, p: &BigInt, q: &BigInt) {
        for i in 0..self.rows {
            let a = self[(i, k)].clone();
            let b = self[(i, j)].clone();
            self[(i, k)] = x * &a + y * &b;
            self[(i, j)] = p * &a + q * &b;
        }
    }
}

impl Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.entries.len() != raw.rows {
            return Err(D::Error::custom("row count does not match entries"));
        }
        let mut entries = Vec::with_capacity(raw.rows * raw.cols);
        for row in &raw.entries {
            if row.len() != raw.cols {
                return Err(D::Error::custom("column count does not match entries"));
            }
            for s in row {
                let v: BigInt = s
                    .parse()
                    .map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))?;
                entries.push(v);
            }
        }
        Ok(IntegerMatrix {
            rows: raw.rows,
            cols: raw.cols,
            entries,
        })
    }
}

/// Rank over the rationals of an integer row list, by fraction-free elimination.
pub fn integer_rank(mut rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            let g = pivot_row[c].gcd(&f);
            let a = &pivot_row[c] / &g;
            let b = &f / &g;
            for j in c..cols {
                row[j] = &row[j] * &a - &pivot_row[j] * &b;
            }
            // keep entries small
            let content = row[c..].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if content > BigInt::one() {
                for x in row[c..].iter_mut() {
                    *x /= &content;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows)
    }

    #[test]
    fn hnf_of_identity_is_identity() {
        let a = IntegerMatrix::identity(2);
        let (h, u) = a.hermite_normal_form();
        assert_eq!(h, a);
        assert_eq!(u, a);
    }

    #[test]
    fn hnf_factor_identity_and_unimodular() {
        let a = m(&[vec![2, 4], vec![0, 6]]);
        let (h, u) = a.hermite_normal_form();
        assert_eq!(a.mul(&u), h);
        assert_eq!(u.determinant().abs(), BigInt::one());
        // lower echelon
        assert!(h[(0, 1)].is_zero());
    }

    #[test]
    fn hnf_of_p2_ray_matrix_has_rank_two() {
        let a = m(&[vec![1, 0], vec![0, 1], vec![-1, -1]]);
        let (h, u) = a.hermite_normal_form();
        assert_eq!(a.mul(&u), h);
        assert_eq!(h.rank(), 2);
        assert_eq!(h, a);
    }

    #[test]
    fn smith_of_zero_matrix() {
        let a = IntegerMatrix::zeros(2, 3);
        let (d, p, q) = a.smith_normal_form();
        assert!(d.is_zero());
        assert_eq!(p, IntegerMatrix::identity(2));
        assert_eq!(q, IntegerMatrix::identity(3));
    }

    #[test]
    fn smith_of_diag_2_3() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let (d, p, q) = a.smith_normal_form();
        assert_eq!(d, m(&[vec![1, 0], vec![0, 6]]));
        assert_eq!(p.mul(&a).mul(&q), d);
        assert_eq!(p.determinant().abs(), BigInt::one());
        assert_eq!(q.determinant().abs(), BigInt::one());
    }

    #[test]
    fn smith_of_single_entry() {
        let a = m(&[vec![6]]);
        let (d, _, _) = a.smith_normal_form();
        assert_eq!(d, a);
        let a = m(&[vec![-6]]);
        let (d, _, _) = a.smith_normal_form();
        assert_eq!(d, m(&[vec![6]]));
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(m(&[vec![1, 2], vec![3, 4]]).determinant(), BigInt::from(-2));
        assert_eq!(
            m(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).determinant(),
            BigInt::from(-2)
        );
        assert_eq!(IntegerMatrix::zeros(0, 0).determinant(), BigInt::one());
    }

    #[test]
    fn json_uses_decimal_strings() {
        let a = m(&[vec![1, -2]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"entries":[["1","-2"]]}"#);
        let back: IntegerMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
