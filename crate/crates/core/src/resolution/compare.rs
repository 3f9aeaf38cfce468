//! Polynomials with monomial terms, a small parser, and comparison of matrices up to
//! permutations and signs of rows and columns.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LaurentMonomial;

/// Sparse integer polynomial in `x₁..x_n, y₁..y_n`, keyed by exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: BTreeMap<Vec<i64>, i64>,
}

impl Polynomial {
    pub fn add_term(&mut self, exp: Vec<i64>, coeff: i64) {
        let c = self.terms.entry(exp.clone()).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Sign of the first term, 0 for the zero polynomial.
    fn leading_sign(&self) -> i64 {
        self.terms.values().next().map_or(0, |c| c.signum())
    }

    pub fn display(&self, nvars: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (e, &c)) in self.terms.iter().rev().enumerate() {
            let mono = if e.is_empty() || e.iter().all(|&x| x == 0) {
                String::new()
            } else {
                debug_assert_eq!(e.len(), 2 * nvars);
                LaurentMonomial::xy(e.clone()).to_string()
            };
            let mag = c.abs();
            let body = match (mag, mono.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => mono,
                (_, false) => format!("{mag}{mono}"),
            };
            match (k, c < 0) {
                (0, true) => s.push_str(&format!("-{body}")),
                (0, false) => s.push_str(&body),
                (_, true) => s.push_str(&format!(" - {body}")),
                (_, false) => s.push_str(&format!(" + {body}")),
            }
        }
        s
    }
}

/// Parses expressions like `y1x3 - x1y3`, `-x_3y_1`, `2x1^2y2`, `1` or `0`
/// over `n` variable pairs.
pub fn parse_polynomial(s: &str, n: usize) -> Result<Polynomial> {
    let bad = |why: &str| Error::Parse(format!("cannot parse polynomial {s:?}: {why}"));
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let mut p = Polynomial::default();
    let mut pos = 0;
    if chars.is_empty() {
        return Err(bad("empty"));
    }
    while pos < chars.len() {
        let mut sign = 1;
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        }
        let start = pos;
        while pos < chars.len() && chars[pos].is_ascii_digit() {
            pos += 1;
        }
        let coeff: i64 = if pos > start {
            chars[start..pos].iter().collect::<String>().parse().map_err(|_| bad("coefficient"))?
        } else {
            1
        };
        let mut exp = vec![0i64; 2 * n];
        let mut any_var = false;
        while pos < chars.len() && (chars[pos] == 'x' || chars[pos] == 'y') {
            let offset = if chars[pos] == 'x' { 0 } else { n };
            pos += 1;
            if pos < chars.len() && chars[pos] == '_' {
                pos += 1;
            }
            let braced = pos < chars.len() && chars[pos] == '{';
            if braced {
                pos += 1;
            }
            let st = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == st {
                return Err(bad("variable without index"));
            }
            let idx: usize = chars[st..pos].iter().collect::<String>().parse().map_err(|_| bad("index"))?;
            if braced {
                if pos >= chars.len() || chars[pos] != '}' {
                    return Err(bad("unclosed brace"));
                }
                pos += 1;
            }
            if idx == 0 || idx > n {
                return Err(bad("variable index out of range"));
            }
            let mut power = 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let st = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                power = chars[st..pos].iter().collect::<String>().parse().map_err(|_| bad("power"))?;
            }
            exp[offset + idx - 1] += power;
            any_var = true;
        }
        if pos == start && !any_var {
            return Err(bad("unexpected character"));
        }
        if pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
            return Err(bad("unexpected character"));
        }
        p.add_term(exp, sign * coeff);
    }
    Ok(p)
}

pub fn parse_matrix(rows: &[&[&str]], n: usize) -> Result<Vec<Vec<Polynomial>>> {
    rows.iter()
        .map(|r| r.iter().map(|s| parse_polynomial(s, n)).collect())
        .collect()
}

fn transpose(a: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

fn canonical_columns(a: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    let mut cols: Vec<Vec<Polynomial>> = transpose(a)
        .into_iter()
        .map(|c| {
            let s = c.iter().map(Polynomial::leading_sign).find(|&s| s != 0).unwrap_or(1);
            if s < 0 {
                c.iter().map(Polynomial::neg).collect()
            } else {
                c
            }
        })
        .collect();
    cols.sort();
    cols
}

/// Largest side permuted exhaustively.
const MAX_PERMUTED: usize = 7;

/// Whether `b` arises from `a` by permuting rows and columns and negating some of them.
///
/// Exhaustive over the shorter side, which must not exceed 7.
pub fn matches_up_to_symmetry(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>]) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if b.len() != rows || b.first().map_or(0, Vec::len) != cols {
        return false;
    }
    if rows == 0 || cols == 0 {
        return true;
    }
    if rows > cols {
        return matches_up_to_symmetry(&transpose(a), &transpose(b));
    }
    if rows > MAX_PERMUTED {
        return false;
    }
    let target = canonical_columns(b);
    for perm in (0..rows).permutations(rows) {
        // the first row's sign is absorbed by column signs
        for signs in 0..(1u32 << (rows - 1)) {
            let moved: Vec<Vec<Polynomial>> = perm
                .iter()
                .enumerate()
                .map(|(k, &src)| {
                    if k > 0 && signs >> (k - 1) & 1 == 1 {
                        a[src].iter().map(Polynomial::neg).collect()
                    } else {
                        a[src].clone()
                    }
                })
                .collect();
            if canonical_columns(&moved) == target {
                return true;
            }
        }
    }
    false
}
