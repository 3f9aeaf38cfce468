//! Exact rational linear algebra and a Fourier–Motzkin feasibility solver.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

pub fn qi(x: &BigInt) -> Q {
    Q::from_integer(x.clone())
}

pub fn floor(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[BigInt], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .fold(Q::zero(), |acc, (x, y)| acc + qi(x) * y)
}

/// Reduced row echelon form; returns the reduced rows and pivot columns.
pub fn rref(rows: &[Vec<Q>], cols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(rows: &[Vec<Q>], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

/// Basis of `{x : rows·x = 0}`, one vector per free column, with a 1 in that column.
pub fn nullspace(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(rows, cols);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// Solves a square system; `None` if singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let aug: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.iter().map(|row| row[n..].to_vec()).collect())
}

pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        let pivot_row = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
    }
    d
}

/// Multiplies through by the common denominator and divides by the content.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * qi(&lcm)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
    Le,
}

/// `coeffs · x  rel  rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Rel,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, rel: Rel, rhs: Q) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.rel {
            Rel::Eq => lhs == self.rhs,
            Rel::Ge => lhs >= self.rhs,
            Rel::Le => lhs <= self.rhs,
        }
    }
}

// a·x <= b
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Ineq {
    a: Vec<Q>,
    b: Q,
}

fn normalize(mut ineq: Ineq) -> Ineq {
    // scale so the first nonzero coefficient has absolute value one
    if let Some(lead) = ineq.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
        for x in ineq.a.iter_mut() {
            *x /= &lead;
        }
        ineq.b /= &lead;
    }
    ineq
}

/// Finds a point satisfying all constraints, or `None` if the system is infeasible.
///
/// The returned point prefers small values: each coordinate is set, in back-substitution order,
/// to 0 if allowed, otherwise to the allowed integer nearest 0, otherwise to the interval midpoint.
pub fn find_point(n: usize, constraints: &[Constraint]) -> Option<Vec<Q>> {
    let mut system: Vec<Ineq> = Vec::new();
    for c in constraints {
        debug_assert_eq!(c.coeffs.len(), n);
        let pos = Ineq {
            a: c.coeffs.clone(),
            b: c.rhs.clone(),
        };
        let neg = Ineq {
            a: c.coeffs.iter().map(|x| -x).collect(),
            b: -c.rhs.clone(),
        };
        match c.rel {
            Rel::Le => system.push(pos),
            Rel::Ge => system.push(neg),
            Rel::Eq => {
                system.push(pos);
                system.push(neg);
            }
        }
    }
    // stages[k] is the system in variables k.. before eliminating k
    let mut stages: Vec<Vec<Ineq>> = Vec::with_capacity(n);
    let mut current: Vec<Ineq> = dedup(system);
    for k in 0..n {
        stages.push(current.clone());
        let mut keep = Vec::new();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for ineq in current {
            if ineq.a[k].is_positive() {
                upper.push(ineq);
            } else if ineq.a[k].is_negative() {
                lower.push(ineq);
            } else {
                keep.push(ineq);
            }
        }
        for u in &upper {
            for l in &lower {
                let su = -l.a[k].clone();
                let sl = u.a[k].clone();
                let a: Vec<Q> = u
                    .a
                    .iter()
                    .zip(&l.a)
                    .map(|(x, y)| x * &su + y * &sl)
                    .collect();
                let b = &u.b * &su + &l.b * &sl;
                keep.push(Ineq { a, b });
            }
        }
        current = dedup(keep);
        if current
            .iter()
            .any(|i| i.a.iter().all(Zero::is_zero) && i.b.is_negative())
        {
            return None;
        }
    }
    if current.iter().any(|i| i.b.is_negative()) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for k in (0..n).rev() {
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for ineq in &stages[k] {
            let ak = &ineq.a[k];
            if ak.is_zero() {
                continue;
            }
            let rest: Q = (k + 1..n).fold(Q::zero(), |acc, j| acc + &ineq.a[j] * &x[j]);
            let bound = (&ineq.b - rest) / ak;
            if ak.is_positive() {
                hi = Some(match hi {
                    Some(h) if h <= bound => h,
                    _ => bound,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            }
        }
        x[k] = pick(lo.as_ref(), hi.as_ref())?;
    }
    debug_assert!(constraints.iter().all(|c| c.holds(&x)));
    Some(x)
}

fn dedup(mut v: Vec<Ineq>) -> Vec<Ineq> {
    v = v
        .into_iter()
        .map(normalize)
        .filter(|i| !(i.a.iter().all(Zero::is_zero) && !i.b.is_negative()))
        .collect();
    v.sort();
    v.dedup();
    // among rows with identical left side keep the tightest
    let mut out: Vec<Ineq> = Vec::with_capacity(v.len());
    for i in v {
        if let Some(last) = out.last() {
            if last.a == i.a {
                continue;
            }
        }
        out.push(i);
    }
    out
}

fn pick(lo: Option<&Q>, hi: Option<&Q>) -> Option<Q> {
    if let (Some(l), Some(h)) = (lo, hi) {
        if l > h {
            return None;
        }
    }
    let zero = Q::zero();
    let ok = |v: &Q| lo.is_none_or(|l| l <= v) && hi.is_none_or(|h| v <= h);
    if ok(&zero) {
        return Some(zero);
    }
    match (lo, hi) {
        (Some(l), _) if l.is_positive() => {
            let c = qi(&ceil(l));
            if ok(&c) {
                Some(c)
            } else {
                Some((l + hi.unwrap()) / q(2))
            }
        }
        (_, Some(h)) => {
            let f = qi(&floor(h));
            if ok(&f) {
                Some(f)
            } else {
                Some((lo.unwrap() + h) / q(2))
            }
        }
        _ => unreachable!("zero is admissible when both bounds are absent"),
    }
}

/// Rank of an integer matrix given by rows (fraction-free).
pub fn int_rank(rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    crate::lattice::matrix::integer_rank(rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn nullspace_of_plane() {
        let ns = nullspace(&[qv(&[1, 1, 1])], 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(dot(&qv(&[1, 1, 1]), &v).is_zero());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = vec![qv(&[2, 1]), qv(&[1, 1])];
        assert_eq!(solve(&a, &qv(&[3, 2])), Some(qv(&[1, 1])));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![qv(&[1, -1]), qv(&[-1, 2])]);
        assert_eq!(det(&a), q(1));
        assert!(inverse(&[qv(&[1, 2]), qv(&[2, 4])]).is_none());
    }

    #[test]
    fn fourier_motzkin_feasible_and_infeasible() {
        let cons = vec![
            Constraint::new(qv(&[1, 0]), Rel::Ge, q(1)),
            Constraint::new(qv(&[1, 1]), Rel::Le, q(0)),
            Constraint::new(qv(&[0, 1]), Rel::Ge, q(-5)),
        ];
        let p = find_point(2, &cons).unwrap();
        assert!(cons.iter().all(|c| c.holds(&p)));

        let bad = vec![
            Constraint::new(qv(&[1, 1]), Rel::Ge, q(1)),
            Constraint::new(qv(&[1, 1]), Rel::Le, q(-1)),
        ];
        assert!(find_point(2, &bad).is_none());
    }

    #[test]
    fn fourier_motzkin_with_equalities() {
        let cons = vec![
            Constraint::new(qv(&[1, -1]), Rel::Eq, q(0)),
            Constraint::new(qv(&[1, 1]), Rel::Ge, q(3)),
        ];
        let p = find_point(2, &cons).unwrap();
        assert_eq!(p[0], p[1]);
        assert!(&p[0] + &p[1] >= q(3));
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![Q::new(1.into(), 2.into()), Q::new((-3).into(), 4.into())];
        assert_eq!(primitive_integer(&v), vec![BigInt::from(2), BigInt::from(-3)]);
    }
}
