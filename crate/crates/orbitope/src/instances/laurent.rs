//! Exact Laurent polynomials in one variable and small matrices over them,
//! for computing orders of vanishing along one-parameter curves.

use crate::rat::{format_rat, Rat, RatMat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A Laurent polynomial with rational coefficients: a finite map from
/// integer exponents to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentScalar {
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentScalar {
    pub fn zero() -> LaurentScalar {
        LaurentScalar::default()
    }

    pub fn constant(c: Rat) -> LaurentScalar {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(0, c);
        }
        LaurentScalar { coeffs: m }
    }

    pub fn one() -> LaurentScalar {
        LaurentScalar::constant(Rat::from_integer(1.into()))
    }

    /// The monomial `c t^k`.
    pub fn monomial(k: i64, c: Rat) -> LaurentScalar {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        LaurentScalar { coeffs: m }
    }

    pub fn from_terms(terms: &[(i64, Rat)]) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (k, c) in terms {
            out = &out + &LaurentScalar::monomial(*k, c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of vanishing at the origin: the least exponent carrying a
    /// nonzero coefficient. `None` for the zero polynomial.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, k: i64) -> Rat {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Substitutes `t -> t^k` (positive `k`).
    pub fn rescale_exponents(&self, k: i64) -> LaurentScalar {
        assert!(k > 0);
        LaurentScalar {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e * k, c.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| match k {
                0 => format_rat(c),
                1 => format!("{}*t", format_rat(c)),
                _ => format!("{}*t^{}", format_rat(c), k),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, other: &LaurentScalar) -> LaurentScalar {
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let entry = coeffs.entry(*k).or_insert_with(Rat::zero);
            *entry = &*entry + c;
            if entry.is_zero() {
                coeffs.remove(k);
            }
        }
        LaurentScalar { coeffs }
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, other: &LaurentScalar) -> LaurentScalar {
        self + &(-other)
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, other: &LaurentScalar) -> LaurentScalar {
        let mut coeffs: BTreeMap<i64, Rat> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let k = ka + kb;
                let entry = coeffs.entry(k).or_insert_with(Rat::zero);
                *entry = &*entry + &(ca * cb);
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentScalar { coeffs }
    }
}

/// A square matrix of Laurent polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMat {
    pub entries: Vec<Vec<LaurentScalar>>,
}

impl LaurentMat {
    pub fn identity(n: usize) -> LaurentMat {
        LaurentMat {
            entries: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                LaurentScalar::one()
                            } else {
                                LaurentScalar::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> LaurentScalar) -> LaurentMat {
        LaurentMat {
            entries: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentScalar {
        &self.entries[i][j]
    }

    pub fn mul(&self, other: &LaurentMat) -> LaurentMat {
        let n = self.n();
        LaurentMat::from_fn(n, |i, j| {
            let mut acc = LaurentScalar::zero();
            for k in 0..n {
                acc = &acc + &(&self.entries[i][k] * &other.entries[k][j]);
            }
            acc
        })
    }

    /// Constant rational matrix embedded as Laurent degree zero.
    pub fn from_rat(m: &RatMat) -> LaurentMat {
        LaurentMat {
            entries: (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| LaurentScalar::constant(m.row(i)[j].clone()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn det2(&self) -> LaurentScalar {
        assert_eq!(self.n(), 2);
        &(&self.entries[0][0] * &self.entries[1][1]) - &(&self.entries[0][1] * &self.entries[1][0])
    }
}
