//! Kempf–Ness norm-square minimization along the non-compact directions of
//! a group orbit.
//!
//! The flow minimizes `log |g v|^2` over the non-compact part of the group.
//! A minimum exists iff the orbit is closed; then the minimizer is a zero
//! of the moment map. Otherwise the infimum sits on the orbit boundary and
//! the flow escapes to infinity. Divergence is detected by the parameter
//! norm passing `divergence_norm` while the objective still decreases.
//!
//! A subtle point: near a non-attained infimum the moment value can become
//! small while the parameter is still escaping, so a small residual alone
//! never certifies a minimum. The Newton step length is the discriminator:
//! at a genuine minimum the step collapses quadratically, while along an
//! escape valley the Newton step stays bounded away from zero.

use crate::momentnum::rep::{CMat, CVec, CompactRep, C64};
use crate::momentnum::toric::{toric_moment, toric_potential, WeightedVector};
use crate::momentnum::{NumError, NumericConfig};
use nalgebra::DMatrix;

/// Outcome of the minimization.
#[derive(Debug, Clone)]
pub enum KempfNessOutcome {
    /// the orbit is closed: a critical vector with (numerically) zero
    /// moment was reached
    MinimumFound {
        minimizer: CVec,
        moment_norm: f64,
        /// complex dimension of the stabilizer subalgebra of the minimizer
        stabilizer_dim: usize,
        iterations: usize,
    },
    /// the infimum is not attained (the orbit is not closed)
    Divergent {
        parameter_norm: f64,
        iterations: usize,
    },
}

impl KempfNessOutcome {
    pub fn is_minimum(&self) -> bool {
        matches!(self, KempfNessOutcome::MinimumFound { .. })
    }
}

/// Runs the minimization from `v`, optionally pre-translated by a
/// non-compact torus parameter (a different start on the same orbit).
pub fn kempf_ness_minimize(
    rep: &CompactRep,
    v: &CVec,
    cfg: &NumericConfig,
) -> Result<KempfNessOutcome, NumError> {
    kempf_ness_minimize_from(rep, v, None, cfg)
}

pub fn kempf_ness_minimize_from(
    rep: &CompactRep,
    v: &CVec,
    start: Option<&[f64]>,
    cfg: &NumericConfig,
) -> Result<KempfNessOutcome, NumError> {
    cfg.validate()?;
    if v.dotc(v).re == 0.0 {
        return Err(NumError::ZeroVector);
    }
    if v.len() != rep.dim_v() {
        return Err(NumError::Dimension("vector length mismatch".into()));
    }
    match rep {
        CompactRep::Torus(w) => torus_flow(w, v, start, cfg),
        CompactRep::SpecialUnitary { .. } => matrix_flow(rep, v, start, cfg),
    }
}

/// Gibbs log-masses below this are zero at double precision: the flow has
/// escaped to a smaller-support locus, which lies on the orbit boundary.
const SUPPORT_COLLAPSE_LOG: f64 = -700.0;

/// Torus case: the potential along `exp(xi)` is the toric potential of the
/// support of `v`, so the flow runs in explicit `xi` coordinates with
/// damped Newton steps (gradient steps when the Hessian degenerates).
fn torus_flow(
    w: &WeightedVector,
    v: &CVec,
    start: Option<&[f64]>,
    cfg: &NumericConfig,
) -> Result<KempfNessOutcome, NumError> {
    let k = w.rank();
    // support of v: weights with nonzero coordinate, amplitude |v_j|^2
    let mut ws = Vec::new();
    let mut cs = Vec::new();
    for (j, wt) in w.weights().iter().enumerate() {
        let a = v[j].norm_sqr();
        if a > 0.0 {
            ws.push(wt.clone());
            cs.push(a);
        }
    }
    let support = WeightedVector::new(ws, cs, k)?;

    let mut xi: Vec<f64> = start.map(|s| s.to_vec()).unwrap_or_else(|| vec![0.0; k]);
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        let xin = xi.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));

        // a support weight has lost all its mass: the limit lives on a
        // smaller support, i.e. on the orbit boundary, not on the orbit
        if min_log_gibbs(&support, &xi) < SUPPORT_COLLAPSE_LOG {
            return Ok(KempfNessOutcome::Divergent {
                parameter_norm: xin.max(1.0),
                iterations,
            });
        }
        if xin > cfg.divergence_norm {
            return Ok(KempfNessOutcome::Divergent {
                parameter_norm: xin,
                iterations,
            });
        }

        let m = toric_moment(&support, &xi);
        let res = norm(&m);
        let h = hessian_of(&support, &xi);
        let newton = crate::momentnum::toric::solve_psd(&h, &m, 1e-12);
        let newton_norm = norm(&newton);

        // genuine minimum: tiny residual AND a collapsing Newton step.
        // (Along an escape valley the residual can be tiny while the Newton
        // step stays bounded away from zero, so the residual alone never
        // certifies a minimum.)
        if res <= cfg.residual_tol
            && newton_norm <= cfg.residual_tol.max(1e-12) * (1.0 + norm(&xi))
        {
            let minimizer = translate(w, v, &xi);
            let stab = stabilizer_dim_torus(w, &minimizer, cfg.rank_tol);
            return Ok(KempfNessOutcome::MinimumFound {
                moment_norm: res,
                stabilizer_dim: stab,
                minimizer,
                iterations,
            });
        }

        // direction: Newton when it is a genuine descent direction,
        // otherwise the gradient (the gradient of the potential is m)
        let newton_slope: f64 = m.iter().zip(&newton).map(|(g, s)| g * s).sum();
        let (dir, slope) = if newton_norm > 0.0 && newton_slope > 0.0 {
            (newton.clone(), newton_slope)
        } else {
            (m.clone(), res * res)
        };

        let f0 = toric_potential(&support, &xi);
        let mut alpha = 1.0;
        let mut moved = false;
        for _ in 0..80 {
            let cand: Vec<f64> = xi.iter().zip(&dir).map(|(x, s)| x - alpha * s).collect();
            if toric_potential(&support, &cand) < f0 - 1e-4 * alpha * slope {
                xi = cand;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if !moved {
            // numerically critical: a minimum needs both the residual and
            // the Newton step to have collapsed; anything else is an escape
            if res <= cfg.residual_tol
                && newton_norm <= cfg.residual_tol.max(1e-12) * (1.0 + norm(&xi))
            {
                let minimizer = translate(w, v, &xi);
                let stab = stabilizer_dim_torus(w, &minimizer, cfg.rank_tol);
                return Ok(KempfNessOutcome::MinimumFound {
                    moment_norm: res,
                    stabilizer_dim: stab,
                    minimizer,
                    iterations,
                });
            }
            return Ok(KempfNessOutcome::Divergent {
                parameter_norm: xin,
                iterations,
            });
        }
    }
}

/// Smallest Gibbs log-mass over the support at `xi`.
fn min_log_gibbs(w: &WeightedVector, xi: &[f64]) -> f64 {
    let ws = w.weights_f64();
    let a: Vec<f64> = ws
        .iter()
        .zip(w.amplitudes())
        .map(|(l, &c)| 2.0 * l.iter().zip(xi).map(|(x, y)| x * y).sum::<f64>() + c.ln())
        .collect();
    let lse = crate::momentnum::toric::log_sum_exp(&a);
    a.iter().map(|x| x - lse).fold(f64::INFINITY, f64::min)
}

fn hessian_of(w: &WeightedVector, xi: &[f64]) -> DMatrix<f64> {
    // 2 * Gibbs covariance of the weights
    let k = w.rank();
    let ws = w.weights_f64();
    let mean = toric_moment(w, xi);
    // Gibbs weights via the potential's softmax
    let a: Vec<f64> = ws
        .iter()
        .zip(w.amplitudes())
        .map(|(l, &c)| 2.0 * l.iter().zip(xi).map(|(x, y)| x * y).sum::<f64>() + c.ln())
        .collect();
    let m = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = a.iter().map(|x| (x - m).exp()).collect();
    let z: f64 = e.iter().sum();
    let mut h = DMatrix::zeros(k, k);
    for (j, l) in ws.iter().enumerate() {
        let p = e[j] / z;
        for r in 0..k {
            for c in 0..k {
                h[(r, c)] += 2.0 * p * (l[r] - mean[r]) * (l[c] - mean[c]);
            }
        }
    }
    h
}

fn translate(w: &WeightedVector, v: &CVec, xi: &[f64]) -> CVec {
    let ws = w.weights_f64();
    CVec::from_iterator(
        v.len(),
        (0..v.len()).map(|j| {
            let e: f64 = ws[j].iter().zip(xi).map(|(a, b)| a * b).sum();
            v[j] * e.exp()
        }),
    )
}

/// Complex dimension of `{xi in the acting torus algebra : xi v = 0}` via
/// singular-value thresholding of the stacked action columns.
fn stabilizer_dim_torus(w: &WeightedVector, v: &CVec, rank_tol: f64) -> usize {
    let k = w.rank();
    let ws = w.weights_f64();
    let mut mat = CMat::zeros(v.len(), k);
    for a in 0..k {
        for j in 0..v.len() {
            mat[(j, a)] = v[j] * C64::new(ws[j][a], 0.0);
        }
    }
    k - numerical_rank(&mat, rank_tol)
}

fn numerical_rank(m: &CMat, rank_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let smax = svd
        .singular_values
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    svd.singular_values
        .iter()
        .filter(|&&s| s > rank_tol * smax.max(1.0))
        .count()
}

/// Matrix-group case: gradient flow on the vector itself, Hermitian moment
/// direction steps, cumulative parameter tracking.
fn matrix_flow(
    rep: &CompactRep,
    v: &CVec,
    start: Option<&[f64]>,
    cfg: &NumericConfig,
) -> Result<KempfNessOutcome, NumError> {
    let CompactRep::SpecialUnitary { n } = rep else {
        unreachable!()
    };
    let n = *n;
    let mut cur = v.clone();
    if let Some(s) = start {
        // interpret the start as a diagonal traceless non-compact parameter
        for j in 0..n.min(s.len()) {
            cur[j] *= s[j].exp();
        }
    }
    let mut cumulative = 0.0f64;
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        let norm2 = cur.dotc(&cur).re;
        if norm2 == 0.0 {
            return Ok(KempfNessOutcome::Divergent {
                parameter_norm: cumulative,
                iterations,
            });
        }
        // Hermitian moment matrix: traceless part of v v^H / |v|^2
        let mut mm = CMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                mm[(r, c)] = cur[r] * cur[c].conj() / norm2;
            }
        }
        let tr = mm.trace() / (n as f64);
        for d in 0..n {
            mm[(d, d)] -= tr;
        }
        let mnorm = mm.norm();
        if mnorm <= cfg.residual_tol {
            let stab = stabilizer_dim_sl(n, &cur, cfg.rank_tol);
            return Ok(KempfNessOutcome::MinimumFound {
                moment_norm: mnorm,
                stabilizer_dim: stab,
                minimizer: cur,
                iterations,
            });
        }
        // descend along exp(-t mm), exponentiated through the Hermitian
        // eigendecomposition
        let eig = mm.symmetric_eigen();
        let w = eig.eigenvectors.adjoint() * &cur;
        let f0 = norm2.ln();
        let mut t = 1.0f64;
        let mut moved = false;
        while t >= 1e-18 {
            let scaled = CVec::from_iterator(
                n,
                (0..n).map(|j| w[j] * (-t * eig.eigenvalues[j]).exp()),
            );
            let stepped = &eig.eigenvectors * scaled;
            let f1 = stepped.dotc(&stepped).re.ln();
            if f1 < f0 - 1e-4 * t * mnorm * mnorm {
                cur = stepped;
                cumulative += t * mnorm;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            // numerically critical without a small moment: not a minimum
            return Ok(KempfNessOutcome::Divergent {
                parameter_norm: cumulative,
                iterations,
            });
        }
        if cumulative > cfg.divergence_norm {
            return Ok(KempfNessOutcome::Divergent {
                parameter_norm: cumulative,
                iterations,
            });
        }
    }
}

/// Stabilizer dimension in sl(n) acting on C^n: stack the elementary-basis
/// action applied to v.
fn stabilizer_dim_sl(n: usize, v: &CVec, rank_tol: f64) -> usize {
    // basis of sl_n: E_{rc} (r != c) and diagonal traceless
    let mut cols: Vec<CVec> = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if r != c {
                let mut col = CVec::zeros(n);
                col[r] = v[c];
                cols.push(col);
            }
        }
    }
    for d in 0..n - 1 {
        let mut col = CVec::zeros(n);
        col[d] = v[d];
        col[d + 1] = -v[d + 1];
        cols.push(col);
    }
    let mut mat = CMat::zeros(n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        mat.set_column(j, col);
    }
    cols.len() - numerical_rank(&mat, rank_tol)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
