//! Exact rational scalars, vectors and dense matrices.
//!
//! Everything in the polyhedral half of the crate runs on [`Rat`] =
//! arbitrary-precision rationals; no floating point enters until the
//! numerical half converts explicitly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};
use std::str::FromStr;

pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact conversion of a finite `f64` (every finite double is rational).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    BigRational::from_float(x)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    BigRational::from_str(s.trim()).map_err(|e| format!("invalid rational {s:?}: {e}"))
}

pub fn serialize_rat<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(r))
}

pub fn deserialize_rat<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
    let s = String::deserialize(d)?;
    parse_rat(&s).map_err(DeError::custom)
}

/// A fixed-length vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RatVec(pub Vec<Rat>);

impl RatVec {
    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Rat::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rat::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RatVec(xs.iter().map(|&x| rat(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        assert_eq!(self.len(), other.len(), "dot length mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * c).collect())
    }

    /// True when every entry has denominator 1.
    pub fn is_integer(&self) -> bool {
        self.0.iter().all(|x| x.denom().is_one())
    }

    /// The unique positive multiple with coprime integer entries.
    /// Zero vectors are returned unchanged.
    pub fn primitive(&self) -> RatVec {
        if self.is_zero() {
            return self.clone();
        }
        let lcm_den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| x.numer() * &lcm_den / x.denom())
            .collect();
        let gcd = ints
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(&x.abs()));
        RatVec(
            ints.into_iter()
                .map(|x| Rat::from_integer(x / &gcd))
                .collect(),
        )
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|x| x.to_f64().expect("rational out of f64 range"))
            .collect()
    }

    pub fn from_f64_exact(xs: &[f64]) -> Option<RatVec> {
        xs.iter()
            .map(|&x| rat_from_f64(x))
            .collect::<Option<Vec<_>>>()
            .map(RatVec)
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(x))?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, other: &RatVec) -> RatVec {
        assert_eq!(self.len(), other.len());
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, other: &RatVec) -> RatVec {
        assert_eq!(self.len(), other.len());
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|x| -x).collect())
    }
}

impl Mul<&RatVec> for &Rat {
    type Output = RatVec;
    fn mul(self, v: &RatVec) -> RatVec {
        v.scale(self)
    }
}

impl Serialize for RatVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.0.iter().map(format_rat).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strs: Vec<String> = Vec::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rat(s).map_err(DeError::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(RatVec)
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    rows: Vec<RatVec>,
    ncols: usize,
}

impl RatMat {
    pub fn from_rows(rows: Vec<RatVec>, ncols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged matrix");
        }
        RatMat { rows, ncols }
    }

    pub fn identity(n: usize) -> Self {
        RatMat::from_rows((0..n).map(|i| RatVec::unit(n, i)).collect(), n)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &RatVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[RatVec] {
        &self.rows
    }

    pub fn col(&self, j: usize) -> RatVec {
        RatVec(self.rows.iter().map(|r| r[j].clone()).collect())
    }

    pub fn transpose(&self) -> RatMat {
        RatMat::from_rows((0..self.ncols).map(|j| self.col(j)).collect(), self.nrows())
    }

    pub fn mul_vec(&self, v: &RatVec) -> RatVec {
        RatVec(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    /// Row echelon reduction; returns (rref matrix, pivot columns).
    pub fn rref(&self) -> (RatMat, Vec<usize>) {
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let (nr, nc) = (m.len(), self.ncols);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..nc {
            if row >= nr {
                break;
            }
            let Some(p) = (row..nr).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for x in m[row].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..nr {
                if i != row && !m[i][col].is_zero() {
                    let f = m[i][col].clone();
                    for j in 0..nc {
                        let t = &m[row][j] * &f;
                        m[i][j] = &m[i][j] - &t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (
            RatMat::from_rows(m.into_iter().map(RatVec).collect(), nc),
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : Ax = 0}`.
    pub fn kernel_basis(&self) -> Vec<RatVec> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = RatVec::zeros(self.ncols);
                v.0[fc] = Rat::one();
                for (prow, &pcol) in pivots.iter().enumerate() {
                    v.0[pcol] = -r.rows[prow][fc].clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `Ax = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &RatVec) -> Option<RatVec> {
        assert_eq!(b.len(), self.nrows());
        let aug = RatMat::from_rows(
            self.rows
                .iter()
                .zip(&b.0)
                .map(|(r, bi)| {
                    let mut row = r.0.clone();
                    row.push(bi.clone());
                    RatVec(row)
                })
                .collect(),
            self.ncols + 1,
        );
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.ncols) {
            return None; // pivot in the constant column
        }
        let mut x = RatVec::zeros(self.ncols);
        for (prow, &pcol) in pivots.iter().enumerate() {
            x.0[pcol] = r.rows[prow][self.ncols].clone();
        }
        Some(x)
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.nrows(), self.ncols, "det of non-square matrix");
        let n = self.nrows();
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                m.swap(col, p);
                det = -det;
            }
            det = det * m[col][col].clone();
            let inv = m[col][col].recip();
            for i in (col + 1)..n {
                if m[i][col].is_zero() {
                    continue;
                }
                let f = &m[i][col] * &inv;
                for j in col..n {
                    let t = &m[col][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.nrows(), self.ncols);
        let n = self.nrows();
        let aug = RatMat::from_rows(
            self.rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut row = r.0.clone();
                    row.extend(RatVec::unit(n, i).0);
                    RatVec(row)
                })
                .collect(),
            2 * n,
        );
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).cloned().ne(0..n) {
            return None;
        }
        Some(RatMat::from_rows(
            r.rows
                .iter()
                .take(n)
                .map(|row| RatVec(row.0[n..].to_vec()))
                .collect(),
            n,
        ))
    }
}

/// Rank of the span of a set of vectors.
pub fn span_rank(vecs: &[RatVec], ambient: usize) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    RatMat::from_rows(vecs.to_vec(), ambient).rank()
}

/// Affine rank (dimension of the affine hull) of a point set.
pub fn affine_rank(points: &[RatVec], ambient: usize) -> usize {
    match points {
        [] => 0,
        [base, rest @ ..] => span_rank(
            &rest.iter().map(|p| p - base).collect::<Vec<_>>(),
            ambient,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["3", "-5/7", "0", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
    }

    #[test]
    fn f64_conversion_is_exact() {
        let r = rat_from_f64(0.05).unwrap();
        assert_ne!(r, ratio(1, 20)); // 0.05 is not exactly 1/20 in binary
        assert!((r.to_f64().unwrap() - 0.05).abs() == 0.0);
        assert_eq!(rat_from_f64(0.25).unwrap(), ratio(1, 4));
    }

    #[test]
    fn primitive_normalization() {
        let v = RatVec(vec![ratio(2, 3), ratio(-4, 3)]);
        assert_eq!(v.primitive(), RatVec::from_ints(&[1, -2]));
        let z = RatVec::zeros(2);
        assert_eq!(z.primitive(), z);
    }

    #[test]
    fn solve_and_kernel() {
        let a = RatMat::from_rows(
            vec![RatVec::from_ints(&[1, 2, 3]), RatVec::from_ints(&[0, 1, 1])],
            3,
        );
        let b = RatVec::from_ints(&[6, 2]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).is_zero());

        let inconsistent = RatMat::from_rows(
            vec![RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[1, 0])],
            2,
        );
        assert!(inconsistent.solve(&RatVec::from_ints(&[1, 2])).is_none());
    }

    #[test]
    fn det_and_inverse() {
        let m = RatMat::from_rows(
            vec![RatVec::from_ints(&[2, 1]), RatVec::from_ints(&[1, 1])],
            2,
        );
        assert_eq!(m.det(), rat(1));
        let inv = m.inverse().unwrap();
        let prod = RatMat::from_rows(
            (0..2).map(|i| inv.mul_vec(m.row(i))).collect(),
            2,
        );
        // rows of m mapped through inv give unit vectors
        assert_eq!(prod, RatMat::identity(2));
    }

    #[test]
    fn empty_dimension_edge_cases() {
        let v = RatVec::zeros(0);
        assert!(v.is_zero());
        assert_eq!(affine_rank(&[v.clone()], 0), 0);
        let m = RatMat::from_rows(vec![], 0);
        assert_eq!(m.rank(), 0);
    }
}
