use std::fmt;

use serde::{Deserialize, Serialize};

/// Laurent monomial `x^a` or, when `paired`, `x^a y^b` with exponent `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LaurentMonomial {
    pub exponent: Vec<i64>,
    pub paired: bool,
}

impl LaurentMonomial {
    pub fn x(exponent: Vec<i64>) -> Self {
        LaurentMonomial {
            exponent,
            paired: false,
        }
    }

    /// Monomial in `x₁..x_n, y₁..y_n`; `exponent` has length `2n`.
    pub fn xy(exponent: Vec<i64>) -> Self {
        debug_assert!(exponent.len().is_multiple_of(2));
        LaurentMonomial {
            exponent,
            paired: true,
        }
    }

    /// `x^u y^{-u}`.
    pub fn lattice(u: &[i64]) -> Self {
        let mut e = u.to_vec();
        e.extend(u.iter().map(|x| -x));
        Self::xy(e)
    }

    pub fn one(len: usize, paired: bool) -> Self {
        LaurentMonomial {
            exponent: vec![0; len],
            paired,
        }
    }

    pub fn is_one(&self) -> bool {
        self.exponent.iter().all(|&e| e == 0)
    }

    /// Nonnegative exponent.
    pub fn is_polynomial(&self) -> bool {
        self.exponent.iter().all(|&e| e >= 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        LaurentMonomial {
            exponent: self
                .exponent
                .iter()
                .zip(&other.exponent)
                .map(|(a, b)| a + b)
                .collect(),
            paired: self.paired,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        LaurentMonomial {
            exponent: self
                .exponent
                .iter()
                .zip(&other.exponent)
                .map(|(a, b)| a - b)
                .collect(),
            paired: self.paired,
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        LaurentMonomial {
            exponent: self.exponent.iter().map(|a| a * k).collect(),
            paired: self.paired,
        }
    }

    /// Componentwise maximum of exponents.
    pub fn lcm(&self, other: &Self) -> Self {
        LaurentMonomial {
            exponent: self
                .exponent
                .iter()
                .zip(&other.exponent)
                .map(|(a, b)| *a.max(b))
                .collect(),
            paired: self.paired,
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exponent.iter().zip(&other.exponent).all(|(a, b)| a <= b)
    }

    fn var_name(&self, i: usize) -> String {
        if self.paired {
            let n = self.exponent.len() / 2;
            if i < n {
                format!("x{}", i + 1)
            } else {
                format!("y{}", i - n + 1)
            }
        } else {
            format!("x{}", i + 1)
        }
    }

    fn factor_string(&self, positive: bool) -> (String, usize) {
        let mut s = String::new();
        let mut count = 0;
        for (i, &e) in self.exponent.iter().enumerate() {
            let e = if positive { e } else { -e };
            if e <= 0 {
                continue;
            }
            s.push_str(&self.var_name(i));
            if e > 1 {
                s.push_str(&format!("^{e}"));
            }
            count += e as usize;
        }
        (s, count)
    }
}

impl fmt::Display for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, _) = self.factor_string(true);
        let (den, den_count) = self.factor_string(false);
        let num = if num.is_empty() { "1".to_string() } else { num };
        match den_count {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num}/{den}"),
            _ => write!(f, "{num}/({den})"),
        }
    }
}
