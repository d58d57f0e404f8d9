//! Cartan (KAK) decomposition of special-linear matrices through the SVD:
//! `h = k1 exp(val) k2` with unitary determinant-one factors and the
//! diagonal part sorted into the antidominant (ascending) order.

use crate::momentnum::rep::{CMat, C64};
use crate::momentnum::NumError;
use crate::rootsys::{ChamberPoint, ChamberSide, RootSystem};
use nalgebra::DVector;

/// Element of a product of special-linear or special-unitary factors,
/// validated on construction (determinant one per factor; unitarity for
/// compact-tagged elements).
#[derive(Debug, Clone, PartialEq, Eq, Copy)]
pub enum GroupTag {
    SpecialLinear,
    SpecialUnitary,
}

#[derive(Debug, Clone)]
pub struct MatrixGroupElement {
    factors: Vec<CMat>,
    tag: GroupTag,
}

impl MatrixGroupElement {
    pub fn new(factors: Vec<CMat>, tag: GroupTag) -> Result<MatrixGroupElement, NumError> {
        if factors.is_empty() {
            return Err(NumError::Invalid("no factors".into()));
        }
        for f in &factors {
            if f.nrows() != f.ncols() || !(2..=5).contains(&f.nrows()) {
                return Err(NumError::Invalid(
                    "factors must be square of size 2..=5".into(),
                ));
            }
            let det = det_c(f);
            let err = (det - C64::new(1.0, 0.0)).norm();
            if err > 1e-12 {
                return Err(NumError::NotUnimodular(err));
            }
            if tag == GroupTag::SpecialUnitary {
                let u = f.adjoint() * f;
                let id = CMat::identity(f.nrows(), f.ncols());
                if (u - id).norm() > 1e-12 {
                    return Err(NumError::Invalid("factor is not unitary".into()));
                }
            }
        }
        Ok(MatrixGroupElement { factors, tag })
    }

    pub fn single(m: CMat, tag: GroupTag) -> Result<MatrixGroupElement, NumError> {
        MatrixGroupElement::new(vec![m], tag)
    }

    pub fn factors(&self) -> &[CMat] {
        &self.factors
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn factor_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.nrows()).collect()
    }
}

fn det_c(m: &CMat) -> C64 {
    m.clone().lu().determinant()
}

/// The result of the decomposition: unitary factors `k1`, `k2`, the
/// positive diagonal `a = exp(val)` with per-factor entries ascending, and
/// the chamber point `val` (logs of the diagonal).
#[derive(Debug, Clone)]
pub struct CartanDecomposition {
    pub k1: Vec<CMat>,
    pub a: Vec<CMat>,
    pub k2: Vec<CMat>,
    pub val: ChamberPoint,
    /// reconstruction residual max over factors
    pub residual: f64,
}

impl CartanDecomposition {
    pub fn val_coords(&self) -> Vec<f64> {
        self.val.as_f64()
    }
}

/// Decomposes `h = k1 exp(val) k2` per factor. The SVD supplies unitary
/// factors and descending singular values; a reversal permutation makes the
/// diagonal ascending (antidominant), and diagonal phase corrections push
/// both unitary determinants to one without disturbing the product.
pub fn cartan_decompose(h: &MatrixGroupElement) -> Result<CartanDecomposition, NumError> {
    let mut k1s = Vec::new();
    let mut asv = Vec::new();
    let mut k2s = Vec::new();
    let mut val = Vec::new();
    let mut residual = 0.0f64;
    for f in h.factors() {
        let det = det_c(f);
        let err = (det - C64::new(1.0, 0.0)).norm();
        if err > 1e-10 {
            return Err(NumError::NotUnimodular(err));
        }
        let n = f.nrows();
        let svd = f.clone().svd(true, true);
        let u = svd.u.as_ref().expect("svd with u").clone();
        let vt = svd.v_t.as_ref().expect("svd with v_t").clone();
        let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();

        // reversal: ascending singular values
        let rev: Vec<usize> = (0..n).rev().collect();
        let mut k1 = CMat::zeros(n, n);
        let mut k2 = CMat::zeros(n, n);
        let mut diag = vec![0.0; n];
        for (new, &old) in rev.iter().enumerate() {
            k1.set_column(new, &u.column(old));
            k2.set_row(new, &vt.row(old));
            diag[new] = sv[old];
        }

        // determinant phase corrections: multiply the first column of k1 and
        // the first row of k2 by the conjugate phases; diagonal commutes
        let d1 = det_c(&k1);
        let d2 = det_c(&k2);
        let p1 = d1 / d1.norm();
        let p2 = d2 / d2.norm();
        for r in 0..n {
            k1[(r, 0)] /= p1;
        }
        for c in 0..n {
            k2[(0, c)] /= p2;
        }
        // the product of the two phases is 1 (real positive determinant of
        // the diagonal equals |det h| = 1), so the middle factor absorbs
        // nothing
        let phase_residual = (p1 * p2 - C64::new(1.0, 0.0)).norm();
        if phase_residual > 1e-8 {
            return Err(NumError::Invalid(format!(
                "phase correction inconsistent by {phase_residual:.3e}"
            )));
        }

        let a = CMat::from_diagonal(&DVector::from_iterator(
            n,
            diag.iter().map(|&s| C64::new(s, 0.0)),
        ));
        let recon = &k1 * &a * &k2;
        residual = residual.max((recon - f).norm());

        val.extend(diag.iter().map(|&s| s.ln()));
        k1s.push(k1);
        asv.push(a);
        k2s.push(k2);
    }
    let rs = RootSystem::type_a_product(h.factor_sizes());
    let point = ChamberPoint::new_numeric(&rs, val, ChamberSide::Antidominant, 1e-9)
        .map_err(|e| NumError::Invalid(e.to_string()))?;
    Ok(CartanDecomposition {
        k1: k1s,
        a: asv,
        k2: k2s,
        val: point,
        residual,
    })
}
