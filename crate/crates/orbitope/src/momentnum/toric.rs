//! The toric moment parametrization and its inversion.
//!
//! For integer weights `l_i` with positive amplitudes `c_i`, the map
//! `xi -> sum c_i e^{2 l_i(xi)} l_i / sum c_i e^{2 l_i(xi)}` sends the
//! parameter space onto the relative interior of the weight hull. It is the
//! gradient of the strictly convex potential
//! `F(xi) = (1/2) log sum c_i e^{2 l_i(xi)}`, which makes Newton inversion
//! straightforward.

use crate::momentnum::{NumError, NumericConfig};
use crate::polycore::Polytope;
use crate::rat::{RatMat, RatVec};
use nalgebra::{DMatrix, DVector};

/// Integer weights with positive amplitudes; the numeric avatar of a vector
/// in a projective representation of a torus. Duplicate weights merge by
/// summing their amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVector {
    rank: usize,
    weights: Vec<RatVec>,
    amplitudes: Vec<f64>,
}

impl WeightedVector {
    pub fn new(
        weights: Vec<RatVec>,
        amplitudes: Vec<f64>,
        rank: usize,
    ) -> Result<WeightedVector, NumError> {
        if weights.is_empty() {
            return Err(NumError::Invalid("weight list is empty".into()));
        }
        if weights.len() != amplitudes.len() {
            return Err(NumError::Dimension(
                "weights and amplitudes differ in length".into(),
            ));
        }
        let mut merged: Vec<(RatVec, f64)> = Vec::new();
        for (w, &c) in weights.iter().zip(&amplitudes) {
            if w.len() != rank {
                return Err(NumError::Dimension(format!(
                    "weight {w:?} has wrong length"
                )));
            }
            if !w.is_integer() {
                return Err(NumError::Invalid(format!("weight {w:?} is not integral")));
            }
            if !(c > 0.0) {
                return Err(NumError::Invalid("amplitudes must be positive".into()));
            }
            match merged.iter_mut().find(|(v, _)| v == w) {
                Some((_, acc)) => *acc += c,
                None => merged.push((w.clone(), c)),
            }
        }
        let (weights, amplitudes) = merged.into_iter().unzip();
        Ok(WeightedVector {
            rank,
            weights,
            amplitudes,
        })
    }

    pub fn from_int_weights(weights: &[&[i64]], amplitudes: &[f64], rank: usize) -> WeightedVector {
        WeightedVector::new(
            weights.iter().map(|w| RatVec::from_ints(w)).collect(),
            amplitudes.to_vec(),
            rank,
        )
        .expect("valid weighted vector")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weights(&self) -> &[RatVec] {
        &self.weights
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn weights_f64(&self) -> Vec<Vec<f64>> {
        self.weights.iter().map(|w| w.to_f64_vec()).collect()
    }

    /// Exact convex hull of the weights.
    pub fn weight_hull(&self) -> Polytope {
        Polytope::from_points(&self.weights, self.rank).expect("hull of finitely many points")
    }
}

/// Gibbs log-weights `2 l_i(xi) + log c_i`, max-shifted.
fn log_weights(w: &WeightedVector, xi: &[f64]) -> Vec<f64> {
    w.weights_f64()
        .iter()
        .zip(w.amplitudes())
        .map(|(l, &c)| 2.0 * l.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>() + c.ln())
        .collect()
}

fn gibbs(w: &WeightedVector, xi: &[f64]) -> Vec<f64> {
    let a = log_weights(w, xi);
    let m = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = a.iter().map(|x| (x - m).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|x| x / z).collect()
}

/// The moment value `sum p_i l_i` with `p` the Gibbs weights at `xi`.
/// Always lies in the relative interior of the weight hull.
pub fn toric_moment(w: &WeightedVector, xi: &[f64]) -> Vec<f64> {
    assert_eq!(xi.len(), w.rank(), "parameter dimension mismatch");
    let p = gibbs(w, xi);
    let ls = w.weights_f64();
    let mut mu = vec![0.0; w.rank()];
    for (pi, l) in p.iter().zip(&ls) {
        for (m, li) in mu.iter_mut().zip(l) {
            *m += pi * li;
        }
    }
    mu
}

/// The convex potential `F(xi) = (1/2) log sum c_i e^{2 l_i(xi)}`.
///
/// The log-sum-exp is evaluated through `ln_1p` so the result keeps full
/// relative precision even when one term dominates by hundreds of orders of
/// magnitude; descent certification in the minimizers depends on this.
pub fn toric_potential(w: &WeightedVector, xi: &[f64]) -> f64 {
    let a = log_weights(w, xi);
    0.5 * log_sum_exp(&a)
}

pub(crate) fn log_sum_exp(a: &[f64]) -> f64 {
    let (argmax, m) = a
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    let rest: f64 = a
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != argmax)
        .map(|(_, &x)| (x - m).exp())
        .sum();
    m + rest.ln_1p()
}

/// Hessian of `F`: twice the Gibbs covariance of the weights. Positive
/// definite on the span of weight differences.
fn hessian(w: &WeightedVector, xi: &[f64]) -> DMatrix<f64> {
    let p = gibbs(w, xi);
    let ls = w.weights_f64();
    let k = w.rank();
    let mean = toric_moment(w, xi);
    let mut h = DMatrix::zeros(k, k);
    for (pi, l) in p.iter().zip(&ls) {
        for a in 0..k {
            for b in 0..k {
                h[(a, b)] += 2.0 * pi * (l[a] - mean[a]) * (l[b] - mean[b]);
            }
        }
    }
    h
}

#[derive(Debug, Clone)]
pub struct InversionResult {
    pub xi: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Inverts the toric moment map at a point strictly inside the weight hull.
///
/// Membership is checked exactly: the floating target is converted to its
/// exact rational value and tested against the hull polytope (after exact
/// projection onto the weights' affine hull when they are degenerate).
/// Newton iteration on the potential then converges quadratically.
pub fn invert_toric_moment(
    w: &WeightedVector,
    mu: &[f64],
    cfg: &NumericConfig,
) -> Result<InversionResult, NumError> {
    cfg.validate()?;
    if mu.len() != w.rank() {
        return Err(NumError::Dimension("target dimension mismatch".into()));
    }
    let mu_rat = RatVec::from_f64_exact(mu).ok_or(NumError::Invalid("non-finite target".into()))?;

    // exact affine-hull handling for degenerate weight sets
    let base = &w.weights()[0];
    let diffs: Vec<RatVec> = w.weights()[1..].iter().map(|x| x - base).collect();
    let k = w.rank();
    let target = if diffs.is_empty() || crate::rat::span_rank(&diffs, k) < k {
        // project mu - base onto the span of the differences, exactly
        let span_mat = RatMat::from_rows(diffs.clone(), k).transpose(); // k x (m-1)
        let offset = &mu_rat - base;
        let proj = exact_projection(&span_mat, &offset);
        let dist2: f64 = (&offset - &proj)
            .to_f64_vec()
            .iter()
            .map(|x| x * x)
            .sum();
        if dist2.sqrt() > cfg.residual_tol.max(1e-9) {
            return Err(NumError::RankDeficient);
        }
        base + &proj
    } else {
        mu_rat
    };

    let hull = w.weight_hull();
    if !hull.contains_in_relative_interior(&target) {
        return Err(NumError::BoundaryPoint);
    }

    let mu_f: Vec<f64> = target.to_f64_vec();
    let mut xi = vec![0.0; k];
    for it in 0..cfg.max_newton_iters {
        let m = toric_moment(w, &xi);
        let grad: Vec<f64> = m.iter().zip(&mu_f).map(|(a, b)| a - b).collect();
        let res = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
        if res <= cfg.residual_tol {
            return Ok(InversionResult {
                xi,
                iterations: it,
                residual: res,
            });
        }
        let h = hessian(w, &xi);
        let step = solve_psd(&h, &grad, cfg.rank_tol);
        // backtracking on the potential F(xi) - mu . xi
        let obj = |x: &[f64]| {
            toric_potential(w, x) - x.iter().zip(&mu_f).map(|(a, b)| a * b).sum::<f64>()
        };
        let f0 = obj(&xi);
        let slope: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = xi.iter().zip(&step).map(|(x, s)| x - alpha * s).collect();
            if obj(&cand) <= f0 - 1e-4 * alpha * slope {
                xi = cand;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
        if xi.iter().map(|x| x * x).sum::<f64>().sqrt() > cfg.divergence_norm {
            return Err(NumError::BoundaryPoint);
        }
    }
    let m = toric_moment(w, &xi);
    let res = m
        .iter()
        .zip(&mu_f)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if res <= cfg.residual_tol {
        Ok(InversionResult {
            xi,
            iterations: cfg.max_newton_iters,
            residual: res,
        })
    } else {
        Err(NumError::BoundaryPoint)
    }
}

/// Least-squares solve of a PSD system via eigendecomposition with a
/// relative threshold (pseudo-inverse on the numerically nonzero part).
pub(crate) fn solve_psd(h: &DMatrix<f64>, rhs: &[f64], rank_tol: f64) -> Vec<f64> {
    let n = h.nrows();
    let eig = h.clone().symmetric_eigen();
    let maxev = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let thresh = rank_tol * maxev.max(1e-300);
    let b = DVector::from_column_slice(rhs);
    let mut y = DVector::zeros(n);
    for i in 0..n {
        let ev = eig.eigenvalues[i];
        if ev > thresh {
            let u = eig.eigenvectors.column(i);
            let coef = u.dot(&b) / ev;
            y += coef * u;
        }
    }
    y.iter().cloned().collect()
}

/// Exact orthogonal projection of `b` onto the column space of `a`.
fn exact_projection(a: &RatMat, b: &RatVec) -> RatVec {
    // solve the normal equations a^T a x = a^T b in exact arithmetic on a
    // column-space basis
    let cols: Vec<RatVec> = (0..a.ncols()).map(|j| a.col(j)).collect();
    let mut basis: Vec<RatVec> = Vec::new();
    for c in cols {
        let mut test = basis.clone();
        test.push(c.clone());
        if crate::rat::span_rank(&test, a.nrows()) > basis.len() {
            basis.push(c);
        }
    }
    if basis.is_empty() {
        return RatVec::zeros(a.nrows());
    }
    let bmat = RatMat::from_rows(basis.clone(), a.nrows()); // rows = basis vectors
    let gram = RatMat::from_rows(
        basis
            .iter()
            .map(|u| RatVec(basis.iter().map(|v| u.dot(v)).collect()))
            .collect(),
        basis.len(),
    );
    let rhs = RatVec(basis.iter().map(|u| u.dot(b)).collect());
    let x = gram.solve(&rhs).expect("gram matrix invertible on a basis");
    bmat.transpose().mul_vec(&x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn segment() -> WeightedVector {
        WeightedVector::from_int_weights(&[&[0], &[1]], &[1.0, 1.0], 1)
    }

    #[test]
    fn symmetric_midpoint() {
        let mu = toric_moment(&segment(), &[0.0]);
        assert_relative_eq!(mu[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn logistic_closed_form() {
        // e^{2 xi} = 3 puts 3/4 of the Gibbs mass on weight 1
        let xi = 0.5 * 3.0f64.ln();
        let mu = toric_moment(&segment(), &[xi]);
        assert_relative_eq!(mu[0], 0.75, epsilon = 1e-14);
    }

    #[test]
    fn single_weight_is_constant() {
        let w = WeightedVector::from_int_weights(&[&[2, -1]], &[0.7], 2);
        for xi in [[0.0, 0.0], [3.0, -4.0], [-20.0, 5.0]] {
            let mu = toric_moment(&w, &xi);
            assert_relative_eq!(mu[0], 2.0, epsilon = 1e-12);
            assert_relative_eq!(mu[1], -1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn duplicate_weights_merge() {
        let w = WeightedVector::new(
            vec![RatVec::from_ints(&[1]), RatVec::from_ints(&[1])],
            vec![0.5, 1.5],
            1,
        )
        .unwrap();
        assert_eq!(w.weights().len(), 1);
        assert_relative_eq!(w.amplitudes()[0], 2.0);
    }

    #[test]
    fn inversion_closed_forms() {
        let cfg = NumericConfig::default();
        let r = invert_toric_moment(&segment(), &[0.5], &cfg).unwrap();
        assert!(r.xi[0].abs() <= 1e-9);

        let r = invert_toric_moment(&segment(), &[0.75], &cfg).unwrap();
        assert_relative_eq!(r.xi[0], 0.5 * 3.0f64.ln(), epsilon = 1e-9);
        assert!(r.iterations <= 50);
    }

    #[test]
    fn boundary_point_rejected() {
        let cfg = NumericConfig::default();
        assert!(matches!(
            invert_toric_moment(&segment(), &[1.0], &cfg),
            Err(NumError::BoundaryPoint)
        ));
        assert!(matches!(
            invert_toric_moment(&segment(), &[0.0], &cfg),
            Err(NumError::BoundaryPoint)
        ));
        assert!(matches!(
            invert_toric_moment(&segment(), &[1.5], &cfg),
            Err(NumError::BoundaryPoint)
        ));
    }

    #[test]
    fn rank_deficient_detection() {
        // weights on a line inside rank 2
        let w = WeightedVector::from_int_weights(&[&[0, 0], &[1, 1]], &[1.0, 1.0], 2);
        let cfg = NumericConfig::default();
        // off the affine hull
        assert!(matches!(
            invert_toric_moment(&w, &[0.5, 0.6], &cfg),
            Err(NumError::RankDeficient)
        ));
        // on the hull: fine, kernel component of xi is zero
        let r = invert_toric_moment(&w, &[0.5, 0.5], &cfg).unwrap();
        let m = toric_moment(&w, &r.xi);
        assert_relative_eq!(m[0], 0.5, epsilon = 1e-9);
    }

    #[test]
    fn gradient_identity_by_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let w = WeightedVector::from_int_weights(
            &[&[0, 0], &[1, 0], &[0, 1], &[2, 1]],
            &[1.0, 2.0, 0.5, 1.25],
            2,
        );
        let h = 1e-6;
        for _ in 0..100 {
            let xi = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let mu = toric_moment(&w, &xi);
            for a in 0..2 {
                let mut xp = xi;
                xp[a] += h;
                let mut xm = xi;
                xm[a] -= h;
                let fd = (toric_potential(&w, &xp) - toric_potential(&w, &xm)) / (2.0 * h);
                assert_relative_eq!(fd, mu[a], epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn geodesic_convexity_second_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let w = WeightedVector::from_int_weights(&[&[1, 0], &[0, 1], &[-1, -1]], &[1.0, 1.0, 1.0], 2);
        for _ in 0..200 {
            let dir = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let q = |t: f64| {
                let xi = [t * dir[0], t * dir[1]];
                (2.0 * toric_potential(&w, &xi)).exp()
            };
            let t0 = rng.gen_range(-1.0..1.0);
            let h = 1e-3;
            let second = q(t0 + h) - 2.0 * q(t0) + q(t0 - h);
            assert!(second >= -1e-9, "second difference {second}");
        }
    }

    #[test]
    fn round_trip_forward_then_invert() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let w = WeightedVector::from_int_weights(
            &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]],
            &[1.0, 0.5, 2.0, 1.0],
            2,
        );
        let cfg = NumericConfig::default();
        for _ in 0..50 {
            let xi = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let mu = toric_moment(&w, &xi);
            let back = invert_toric_moment(&w, &mu, &cfg).unwrap();
            let err: f64 = back
                .xi
                .iter()
                .zip(&xi)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-6, "round trip error {err}");
        }
    }
}
