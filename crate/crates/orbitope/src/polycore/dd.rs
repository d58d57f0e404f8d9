//! Double description: extreme rays of `{x : a_i . x >= 0}`.
//!
//! Desk-scale implementation (rank <= ~8, <= 128 constraints). Lineality is
//! split off exactly first, the pointed part is initialized from a
//! nonsingular subsystem and remaining constraints are inserted one at a
//! time with the combinatorial adjacency test.

use crate::rat::{Rat, RatMat, RatVec};
use num_traits::Zero;

const MAX_CONSTRAINTS: usize = 128;

#[derive(Clone, Debug)]
struct Ray {
    dir: RatVec,
    /// processed constraints evaluating to zero on this ray
    zero: u128,
}

/// Extreme rays and a lineality basis for the cone `{x : a . x >= 0 for all a}`.
///
/// The returned rays are primitive integer vectors, sorted; together with
/// `+-lineality` they generate the cone. Rays are taken modulo lineality.
pub fn extreme_rays(constraints: &[RatVec], ambient: usize) -> (Vec<RatVec>, Vec<RatVec>) {
    assert!(
        constraints.len() <= MAX_CONSTRAINTS,
        "too many constraints for the dd backend"
    );
    for c in constraints {
        assert_eq!(c.len(), ambient, "constraint dimension mismatch");
    }
    let nonzero: Vec<RatVec> = constraints.iter().filter(|c| !c.is_zero()).cloned().collect();

    // lineality = kernel of the constraint matrix
    let lineality: Vec<RatVec> = if nonzero.is_empty() {
        (0..ambient).map(|i| RatVec::unit(ambient, i)).collect()
    } else {
        RatMat::from_rows(nonzero.clone(), ambient).kernel_basis()
    };
    let lin_dim = lineality.len();
    let m = ambient - lin_dim;
    if m == 0 {
        return (vec![], canonical_basis(lineality, ambient));
    }

    // complementary subspace: kernel of the lineality rows (orthogonal
    // complement over Q), guaranteed to meet the lineality trivially
    let w_basis: Vec<RatVec> = if lin_dim == 0 {
        (0..ambient).map(|i| RatVec::unit(ambient, i)).collect()
    } else {
        RatMat::from_rows(lineality.clone(), ambient).kernel_basis()
    };
    debug_assert_eq!(w_basis.len(), m);

    // constraints restricted to the complement: a'_ij = a_i . w_j
    let reduced: Vec<RatVec> = nonzero
        .iter()
        .map(|a| RatVec(w_basis.iter().map(|w| a.dot(w)).collect()))
        .collect();

    let pointed = pointed_extreme_rays(&reduced, m);
    let rays = pointed
        .into_iter()
        .map(|y| {
            let mut x = RatVec::zeros(ambient);
            for (c, w) in y.iter().zip(&w_basis) {
                x = &x + &w.scale(c);
            }
            x.primitive()
        })
        .collect();
    (sorted(rays), canonical_basis(lineality, ambient))
}

/// Extreme rays of a pointed cone (constraint matrix has full column rank).
fn pointed_extreme_rays(constraints: &[RatVec], dim: usize) -> Vec<RatVec> {
    // initial nonsingular subsystem
    let mat = RatMat::from_rows(constraints.to_vec(), dim);
    let (_, pivot_cols) = mat.transpose().rref();
    let init: Vec<usize> = pivot_cols; // row indices forming a basis
    debug_assert_eq!(init.len(), dim, "cone not pointed after reduction");

    let b = RatMat::from_rows(init.iter().map(|&i| constraints[i].clone()).collect(), dim);
    let b_inv = b.inverse().expect("initial subsystem is nonsingular");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let dir = b_inv.col(j).primitive();
            Ray { dir, zero: 0 }
        })
        .collect();

    let mut processed: Vec<usize> = Vec::new();
    let process = |rays: &mut Vec<Ray>, idx: usize, processed: &mut Vec<usize>| {
        let a = &constraints[idx];
        let bit = 1u128 << processed.len();
        let vals: Vec<Rat> = rays.iter().map(|r| a.dot(&r.dir)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if v.is_zero() {
                let mut r2 = r.clone();
                r2.zero |= bit;
                next.push(r2);
            } else if v > &Rat::zero() {
                next.push(r.clone());
            }
        }
        for (i, ri) in rays.iter().enumerate() {
            if vals[i] <= Rat::zero() {
                continue;
            }
            for (j, rj) in rays.iter().enumerate() {
                if vals[j] >= Rat::zero() {
                    continue;
                }
                let common = ri.zero & rj.zero;
                // adjacency: no third ray's zero set contains the common set
                let adjacent = rays.iter().enumerate().all(|(k, rk)| {
                    k == i || k == j || (rk.zero & common) != common
                });
                if !adjacent {
                    continue;
                }
                let pos = vals[i].clone();
                let neg = vals[j].clone();
                let dir = (&rj.dir.scale(&pos) - &ri.dir.scale(&neg)).primitive();
                debug_assert!(a.dot(&dir).is_zero());
                next.push(Ray {
                    dir,
                    zero: common | bit,
                });
            }
        }
        *rays = next;
        processed.push(idx);
    };

    // initial constraints are tight-tracked first, in order
    for &idx in &init {
        process(&mut rays, idx, &mut processed);
    }
    for idx in 0..constraints.len() {
        if !init.contains(&idx) {
            process(&mut rays, idx, &mut processed);
        }
    }

    let mut out: Vec<RatVec> = rays.into_iter().map(|r| r.dir).collect();
    out.sort();
    out.dedup();
    out
}

fn sorted(mut v: Vec<RatVec>) -> Vec<RatVec> {
    v.sort();
    v.dedup();
    v
}

/// Canonical lineality basis: rational RREF rows scaled to primitive integers.
pub fn canonical_basis(vecs: Vec<RatVec>, ambient: usize) -> Vec<RatVec> {
    if vecs.is_empty() {
        return vecs;
    }
    let (r, pivots) = RatMat::from_rows(vecs, ambient).rref();
    let mut rows: Vec<RatVec> = r
        .rows()
        .iter()
        .take(pivots.len())
        .map(|row| row.primitive())
        .collect();
    rows.sort();
    rows
}

/// Brute-force extreme-ray oracle for tests: candidates are kernels of
/// (dim-1)-subsets of constraints, kept when feasible.
#[doc(hidden)]
pub fn brute_extreme_rays(constraints: &[RatVec], ambient: usize) -> Vec<RatVec> {
    let nonzero: Vec<RatVec> = constraints.iter().filter(|c| !c.is_zero()).cloned().collect();
    let lin = if nonzero.is_empty() {
        ambient
    } else {
        RatMat::from_rows(nonzero.clone(), ambient).kernel_basis().len()
    };
    let mut out: Vec<RatVec> = Vec::new();
    let n = nonzero.len();
    let subsets = 1u64 << n.min(63);
    for mask in 0..subsets {
        let subset: Vec<RatVec> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| nonzero[i].clone())
            .collect();
        let kernel = if subset.is_empty() {
            (0..ambient).map(|i| RatVec::unit(ambient, i)).collect()
        } else {
            RatMat::from_rows(subset, ambient).kernel_basis()
        };
        if kernel.len() != lin + 1 {
            continue;
        }
        // candidate direction modulo lineality: try both signs of each basis vector
        for cand in &kernel {
            for sign in [1i64, -1] {
                let d = cand.scale(&crate::rat::rat(sign));
                if nonzero.iter().all(|a| a.dot(&d) >= Rat::zero())
                    && !d.is_zero()
                {
                    out.push(d.primitive());
                }
            }
        }
    }
    out.sort();
    out.dedup();
    // drop directions inside the lineality space
    out.retain(|d| {
        !nonzero.iter().all(|a| a.dot(d).is_zero()) || lin == 0
    });
    out
}
