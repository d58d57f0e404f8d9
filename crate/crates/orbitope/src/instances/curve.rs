//! Orders of vanishing along one-parameter curves: the symbolic oracle that
//! turns a curve through a boundary divisor into the divisor's valuation
//! vector, using generic group translates to dodge special position.

use crate::instances::laurent::{LaurentMat, LaurentScalar};
use crate::rat::{rat, Rat, RatMat, RatVec};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("orders disagree across generic translates: {0:?}")]
    NonGeneric(Vec<Option<i64>>),
    #[error("function vanishes identically on the whole curve family")]
    IdenticallyZero,
}

/// A one-parameter family of group-like matrices (one entry per factor of
/// the ambient product group).
#[derive(Clone, Debug)]
pub struct LaurentCurve {
    pub mats: Vec<LaurentMat>,
}

/// A rational group element: one exact matrix per factor.
pub type GroupElement = Vec<RatMat>;

/// How a group element translates a curve. Keeping the action explicit lets
/// one catalog entry act on triples and another on single matrices.
pub type CurveAction = fn(&GroupElement, &LaurentCurve) -> LaurentCurve;

/// A named polynomial in the curve's matrix entries.
pub struct CurveFunction {
    pub name: String,
    pub eval: fn(&LaurentCurve) -> LaurentScalar,
}

/// Order of vanishing of `f` along the generically translated curve.
///
/// Evaluated at each supplied translate with exact Laurent arithmetic; all
/// translates must agree on the order. All-zero evaluations report
/// [`CurveError::IdenticallyZero`]; any other disagreement is
/// [`CurveError::NonGeneric`].
pub fn valuation_from_curve(
    f: &CurveFunction,
    curve: &LaurentCurve,
    action: CurveAction,
    translates: &[GroupElement],
) -> Result<i64, CurveError> {
    assert!(
        translates.len() >= 3,
        "need at least three independent generic translates"
    );
    let orders: Vec<Option<i64>> = translates
        .iter()
        .map(|g| (f.eval)(&action(g, curve)).order())
        .collect();
    if orders.iter().all(|o| o.is_none()) {
        return Err(CurveError::IdenticallyZero);
    }
    let first = orders[0];
    if first.is_some() && orders.iter().all(|o| *o == first) {
        Ok(first.unwrap())
    } else {
        Err(CurveError::NonGeneric(orders))
    }
}

/// Random integer matrix with entries in [-7, 7], determinant corrected to
/// one by scaling the first row (the result is rational, unimodular and
/// generic with overwhelming probability).
pub fn random_rational_sl(n: usize, rng: &mut ChaCha8Rng) -> RatMat {
    loop {
        let rows: Vec<RatVec> = (0..n)
            .map(|_| RatVec::from_ints(&(0..n).map(|_| rng.gen_range(-7..=7)).collect::<Vec<_>>()))
            .collect();
        let m = RatMat::from_rows(rows, n);
        let det = m.det();
        if det.is_zero() {
            continue;
        }
        let inv = det.recip();
        let mut rows: Vec<RatVec> = m.rows().to_vec();
        rows[0] = rows[0].scale(&inv);
        return RatMat::from_rows(rows, n);
    }
}

/// Random upper-triangular rational matrix with determinant one: a generic
/// Borel element. Needed when the divisor under study is only stable under
/// the Borel subgroup, so that the translate stays on the divisor.
pub fn random_rational_borel2(rng: &mut ChaCha8Rng) -> RatMat {
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let x: i64 = rng.gen_range(-7..=7);
        if x != 0 {
            return x;
        }
    };
    let a = nonzero(rng);
    let d = nonzero(rng);
    let b: i64 = rng.gen_range(-7..=7);
    let det = rat(a * d);
    let inv = det.recip();
    RatMat::from_rows(
        vec![
            RatVec(vec![rat(a) * &inv, rat(b) * &inv]),
            RatVec::from_ints(&[0, d]),
        ],
        2,
    )
}

/// `k` independent full-group translates, each a tuple of `factors` random
/// special-linear matrices.
pub fn generic_translates(
    factors: usize,
    n: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<GroupElement> {
    (0..k)
        .map(|_| (0..factors).map(|_| random_rational_sl(n, rng)).collect())
        .collect()
}

/// `k` independent Borel translates (upper-triangular 2x2 factors).
pub fn generic_borel_translates(
    factors: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<GroupElement> {
    (0..k)
        .map(|_| (0..factors).map(|_| random_rational_borel2(rng)).collect())
        .collect()
}

/// Conjugation-free two-sided translation `x -> g1 x g2^{-1}` on a single
/// matrix curve.
pub fn group_case_action(g: &GroupElement, x: &LaurentCurve) -> LaurentCurve {
    assert_eq!(g.len(), 2);
    assert_eq!(x.mats.len(), 1);
    let g2_inv = g[1].inverse().expect("group element invertible");
    LaurentCurve {
        mats: vec![LaurentMat::from_rat(&g[0])
            .mul(&x.mats[0])
            .mul(&LaurentMat::from_rat(&g2_inv))],
    }
}

/// The triple action on `(x1, x2, x3)` with `x1 x2 x3 = 1`:
/// `(g1,g2,g3) . (x1,x2,x3) = (g2 x1 g3^{-1}, g3 x2 g1^{-1}, g1 x3 g2^{-1})`.
pub fn triple_action(g: &GroupElement, x: &LaurentCurve) -> LaurentCurve {
    assert_eq!(g.len(), 3);
    assert_eq!(x.mats.len(), 3);
    let inv: Vec<RatMat> = g.iter().map(|m| m.inverse().expect("invertible")).collect();
    let tr = |a: usize, i: usize, b: usize| {
        LaurentMat::from_rat(&g[a])
            .mul(&x.mats[i])
            .mul(&LaurentMat::from_rat(&inv[b]))
    };
    LaurentCurve {
        mats: vec![tr(1, 0, 2), tr(2, 1, 0), tr(0, 2, 1)],
    }
}

/// Checks the defining constraints of a triple curve: each factor has
/// determinant one and the product is the identity.
pub fn check_triple_curve(c: &LaurentCurve) -> bool {
    c.mats.len() == 3
        && c.mats.iter().all(|m| m.det2() == LaurentScalar::one())
        && c.mats[0].mul(&c.mats[1]).mul(&c.mats[2]) == LaurentMat::identity(2)
}

/// Solves `c . lambda_i = pairing_i` for the coordinate vector `c` of a
/// valuation, given its pairings against basis vectors `lambda_i` expressed
/// in some common coordinates (used to convert curve orders into vectors).
pub fn vector_from_pairings(basis: &[RatVec], pairings: &[Rat]) -> Option<RatVec> {
    let dim = basis.first()?.len();
    RatMat::from_rows(basis.to_vec(), dim).solve(&RatVec(pairings.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn constant_curve_nonvanishing_function_order_zero() {
        // f(x) = x_{11} on the identity curve in the group case
        let curve = LaurentCurve {
            mats: vec![LaurentMat::identity(2)],
        };
        let f = CurveFunction {
            name: "f".into(),
            eval: |c| c.mats[0].entry(0, 0).clone(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let gs = generic_translates(2, 2, 3, &mut rng);
        assert_eq!(
            valuation_from_curve(&f, &curve, group_case_action, &gs).unwrap(),
            0
        );
    }

    #[test]
    fn identically_zero_detected() {
        let curve = LaurentCurve {
            mats: vec![LaurentMat::identity(2)],
        };
        let f = CurveFunction {
            name: "zero".into(),
            eval: |_| LaurentScalar::zero(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let gs = generic_translates(2, 2, 3, &mut rng);
        assert!(matches!(
            valuation_from_curve(&f, &curve, group_case_action, &gs),
            Err(CurveError::IdenticallyZero)
        ));
    }

    #[test]
    fn sampled_elements_are_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random_rational_sl(2, &mut rng);
            assert_eq!(m.det(), rat(1));
            let b = random_rational_borel2(&mut rng);
            assert_eq!(b.det(), rat(1));
            assert!(b.row(1)[0].is_zero());
        }
    }

    #[test]
    fn generic_g_agreement_is_exact() {
        // three independent translates agree on the pole order of the
        // det-vanishing curve in the group case
        let curve = LaurentCurve {
            mats: vec![LaurentMat::from_fn(2, |i, j| {
                if i == j {
                    LaurentScalar::monomial(if i == 0 { -1 } else { 1 }, rat(1))
                } else {
                    LaurentScalar::zero()
                }
            })],
        };
        let f = CurveFunction {
            name: "x11".into(),
            eval: |c| c.mats[0].entry(0, 0).clone(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let gs = generic_translates(2, 2, 3, &mut rng);
        assert_eq!(
            valuation_from_curve(&f, &curve, group_case_action, &gs).unwrap(),
            -1
        );
    }
}
