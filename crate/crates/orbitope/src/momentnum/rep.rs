//! Projective moment maps and the invariant (Kirwan) map for the compact
//! groups the catalog uses: compact tori acting diagonally and special
//! unitary groups in their standard representations.

use crate::momentnum::{NumError, WeightedVector};
use crate::rootsys::{dominance_project_f64, ChamberPoint, ChamberSide, RootSystem};
use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Moment-map component of a unit projective vector along one
/// anti-Hermitian generator: `(1/i) (v | A v) / (v | v)`.
///
/// The action matrices must be anti-Hermitian within `1e-8`; the imaginary
/// residue of each component must vanish within `1e-12` (asserted).
pub fn moment_map(action: &[CMat], v: &CVec) -> Result<Vec<f64>, NumError> {
    let norm2 = v.dotc(v).re;
    if norm2 == 0.0 {
        return Err(NumError::ZeroVector);
    }
    for (i, a) in action.iter().enumerate() {
        let resid = (a + a.adjoint()).norm();
        if resid > 1e-8 * a.norm().max(1.0) {
            return Err(NumError::NotAntiHermitian(i));
        }
    }
    let mut out = Vec::with_capacity(action.len());
    for a in action {
        let val = v.dotc(&(a * v)) / norm2;
        // (v|Av) is purely imaginary for anti-Hermitian A
        let component = C64::new(0.0, -1.0) * val;
        assert!(
            component.im.abs() <= 1e-12 * (1.0 + component.re.abs()),
            "moment component has imaginary residue {}",
            component.im
        );
        out.push(component.re);
    }
    Ok(out)
}

/// An anti-Hermitian basis of su(2) acting on C^2:
/// `i sigma_3, [[0,1],[-1,0]], i sigma_1`.
pub fn su2_algebra_basis() -> Vec<CMat> {
    let i = C64::new(0.0, 1.0);
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    vec![
        CMat::from_row_slice(2, 2, &[i, z, z, -i]),
        CMat::from_row_slice(2, 2, &[z, one, -one, z]),
        CMat::from_row_slice(2, 2, &[z, i, i, z]),
    ]
}

/// The compact symmetry data of a representation, enough to evaluate the
/// full moment map and reduce it into a Weyl chamber.
#[derive(Debug, Clone)]
pub enum CompactRep {
    /// compact torus acting diagonally with the given integer weight rows
    Torus(WeightedVector),
    /// SU(n) in its standard representation on C^n
    SpecialUnitary { n: usize },
}

impl CompactRep {
    pub fn dim_v(&self) -> usize {
        match self {
            CompactRep::Torus(w) => w.weights().len(),
            CompactRep::SpecialUnitary { n } => *n,
        }
    }

    /// The natural root system for chamber reduction.
    pub fn root_system(&self) -> RootSystem {
        match self {
            CompactRep::Torus(w) => RootSystem::torus(w.rank()),
            CompactRep::SpecialUnitary { n } => RootSystem::type_a(*n),
        }
    }

    /// Anti-Hermitian generators of the compact torus part, one per
    /// coordinate of the chamber space.
    pub fn cartan_action(&self) -> Vec<CMat> {
        let i = C64::new(0.0, 1.0);
        match self {
            CompactRep::Torus(w) => {
                let m = w.weights().len();
                let ws = w.weights_f64();
                (0..w.rank())
                    .map(|a| {
                        CMat::from_diagonal(&CVec::from_iterator(
                            m,
                            (0..m).map(|j| i * ws[j][a]),
                        ))
                    })
                    .collect()
            }
            CompactRep::SpecialUnitary { n } => {
                // i (E_aa - (1/n) I): traceless diagonal generators
                (0..*n)
                    .map(|a| {
                        let mut d = CMat::from_diagonal(&CVec::from_element(
                            *n,
                            -i / (*n as f64),
                        ));
                        d[(a, a)] += i;
                        d
                    })
                    .collect()
            }
        }
    }
}

/// A Kirwan value: the chamber representative of the moment image, stored
/// on the dominant side so it compares directly against the moment
/// polytope. The antidominant representative (the raw invariant-moment-map
/// value) is the negation.
#[derive(Debug, Clone)]
pub struct KirwanValue {
    pub point: ChamberPoint,
}

impl KirwanValue {
    /// Coordinates on the polytope side (dominant).
    pub fn pol_coords(&self) -> Vec<f64> {
        self.point.as_f64()
    }

    /// The raw invariant-moment value in the negative chamber.
    pub fn chamber_coords(&self) -> Vec<f64> {
        self.pol_coords().iter().map(|x| -x).collect()
    }
}

/// The invariant moment map: evaluate the moment map, conjugate its value
/// into the Weyl chamber, and return the result in polytope coordinates
/// (one global negation of the raw chamber value, so reports compare
/// directly against the moment polytope).
pub fn kirwan(rep: &CompactRep, v: &CVec, rs: &RootSystem) -> Result<KirwanValue, NumError> {
    let norm2 = v.dotc(v).re;
    if norm2 == 0.0 {
        return Err(NumError::ZeroVector);
    }
    if v.len() != rep.dim_v() {
        return Err(NumError::Dimension("vector length mismatch".into()));
    }
    let torus_values: Vec<f64> = match rep {
        CompactRep::Torus(w) => {
            // diagonal action: moment components along the torus basis
            let ws = w.weights_f64();
            let mut mu = vec![0.0; w.rank()];
            for (j, l) in ws.iter().enumerate() {
                let p = v[j].norm_sqr() / norm2;
                for (m, li) in mu.iter_mut().zip(l) {
                    *m += p * li;
                }
            }
            mu
        }
        CompactRep::SpecialUnitary { n } => {
            // Hermitian moment matrix: traceless part of v v^H / |v|^2;
            // its eigenvalues are the torus coordinates of the coadjoint
            // orbit through the moment value
            let n = *n;
            let mut a = CMat::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    a[(r, c)] = v[r] * v[c].conj() / norm2;
                }
            }
            let tr = a.trace() / (n as f64);
            for d in 0..n {
                a[(d, d)] -= tr;
            }
            let eig = a.symmetric_eigen();
            let mut evs: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
            evs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            evs
        }
    };
    if torus_values.len() != rs.dim() {
        return Err(NumError::Dimension(
            "root system does not match the representation torus".into(),
        ));
    }
    let (anti, _) = dominance_project_f64(rs, &torus_values)
        .map_err(|e| NumError::Invalid(e.to_string()))?;
    let dominant: Vec<f64> = anti.as_f64().iter().map(|x| -x).collect();
    let point = ChamberPoint::new_numeric(rs, dominant, ChamberSide::Dominant, 1e-9)
        .map_err(|e| NumError::Invalid(e.to_string()))?;
    Ok(KirwanValue { point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cv(xs: &[(f64, f64)]) -> CVec {
        CVec::from_iterator(xs.len(), xs.iter().map(|&(re, im)| C64::new(re, im)))
    }

    #[test]
    fn torus_moment_reduces_to_toric_at_origin() {
        // weights {0, 1}, unit amplitudes: pairing with the torus generator
        // is 1/2 at the symmetric vector
        let w = WeightedVector::from_int_weights(&[&[0], &[1]], &[1.0, 1.0], 1);
        let rep = CompactRep::Torus(w);
        let action = rep.cartan_action();
        let v = cv(&[(1.0, 0.0), (1.0, 0.0)]);
        let mu = moment_map(&action, &v).unwrap();
        assert_relative_eq!(mu[0], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn single_weight_vector_gives_its_weight() {
        let w = WeightedVector::from_int_weights(&[&[3, -2], &[1, 1]], &[1.0, 1.0], 2);
        let rep = CompactRep::Torus(w);
        let action = rep.cartan_action();
        let v = cv(&[(0.0, 2.0), (0.0, 0.0)]); // supported on weight (3,-2)
        let mu = moment_map(&action, &v).unwrap();
        assert_relative_eq!(mu[0], 3.0, epsilon = 1e-14);
        assert_relative_eq!(mu[1], -2.0, epsilon = 1e-14);
    }

    #[test]
    fn su2_moment_of_highest_weight_line() {
        // direct 2x2 evaluation against the anti-Hermitian basis
        let basis = su2_algebra_basis();
        let v = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let mu = moment_map(&basis, &v).unwrap();
        assert_relative_eq!(mu[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(mu[1], 0.0, epsilon = 1e-14);
        assert_relative_eq!(mu[2], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_vector_rejected() {
        let basis = su2_algebra_basis();
        let v = cv(&[(0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(moment_map(&basis, &v), Err(NumError::ZeroVector)));
    }

    #[test]
    fn non_anti_hermitian_rejected() {
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        let bad = vec![CMat::from_row_slice(2, 2, &[one, z, z, one])];
        let v = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            moment_map(&bad, &v),
            Err(NumError::NotAntiHermitian(0))
        ));
    }

    #[test]
    fn kirwan_su2_is_constant_on_projective_space() {
        let rep = CompactRep::SpecialUnitary { n: 2 };
        let rs = rep.root_system();
        for v in [
            cv(&[(1.0, 0.0), (0.0, 0.0)]),
            cv(&[(0.0, 0.0), (1.0, 0.0)]),
            cv(&[(0.3, -0.2), (1.4, 2.0)]),
        ] {
            let k = kirwan(&rep, &v, &rs).unwrap();
            let p = k.pol_coords();
            assert_relative_eq!(p[0], 0.5, epsilon = 1e-12);
            assert_relative_eq!(p[1], -0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn kirwan_torus_matches_toric_moment() {
        use crate::momentnum::toric_moment;
        let w = WeightedVector::from_int_weights(&[&[0, 1], &[1, 0], &[1, 1]], &[1.0, 1.0, 1.0], 2);
        let rep = CompactRep::Torus(w.clone());
        let rs = rep.root_system();
        // vector with component moduli e^{l(xi)} sqrt(c): the polar
        // parameter of the toric map
        let xi = [0.4, -0.7];
        let ws = w.weights_f64();
        let v = CVec::from_iterator(
            3,
            (0..3).map(|j| {
                let e: f64 = ws[j].iter().zip(&xi).map(|(a, b)| a * b).sum();
                C64::new(e.exp(), 0.0)
            }),
        );
        let k = kirwan(&rep, &v, &rs).unwrap();
        let expect = toric_moment(&w, &xi);
        // dominant-side value is the negated moment for the torus
        for (a, b) in k.pol_coords().iter().zip(&expect) {
            assert_relative_eq!(*a, -b, epsilon = 1e-12);
        }
    }
}
