//! Fans of cones: validity, smooth-simpliciality with certificates, and
//! exact coverage tests against a target cone.

use crate::polycore::cone::Cone;
use crate::polycore::lattice::lattice_saturation_defect;
use crate::polycore::polytope::{Halfspace, Polytope};
use crate::polycore::PolyError;
use crate::rat::{rat, Rat, RatMat, RatVec};
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A finite collection of cones. Construction only stores and sorts;
/// fan-ness (face closure, proper pairwise intersections) is checked by
/// [`Fan::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fan {
    ambient_rank: usize,
    cones: Vec<Cone>,
}

/// Outcome of the smooth-simplicial check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmoothCheck {
    pub is_smooth_simplicial: bool,
    /// first violation found, if any
    pub certificate: Option<String>,
}

impl Fan {
    pub fn new(cones: Vec<Cone>, ambient_rank: usize) -> Fan {
        let mut cones = cones;
        for c in &cones {
            assert_eq!(c.ambient_rank(), ambient_rank);
        }
        cones.sort_by_key(|c| (c.dim(), c.rays().to_vec(), c.lineality().to_vec()));
        cones.dedup();
        Fan {
            ambient_rank,
            cones,
        }
    }

    pub fn empty(ambient_rank: usize) -> Fan {
        Fan::new(vec![], ambient_rank)
    }

    /// All faces of a single cone.
    pub fn face_fan_of_cone(c: &Cone) -> Fan {
        Fan::new(c.faces(), c.ambient_rank())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.cones.iter().any(|x| x == c)
    }

    /// Cones not properly contained in another cone of the fan.
    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|d| d != *c && d.contains_cone(c))
            })
            .collect()
    }

    /// Checks face closure and that pairwise intersections are common faces.
    pub fn validate(&self) -> Result<(), PolyError> {
        for (i, c) in self.cones.iter().enumerate() {
            for f in c.faces() {
                if !self.contains_cone(&f) {
                    return Err(PolyError::NotAFan(format!(
                        "a face of cone #{i} is missing from the fan"
                    )));
                }
            }
        }
        for (i, c) in self.cones.iter().enumerate() {
            for (j, d) in self.cones.iter().enumerate().skip(i + 1) {
                let inter = c.intersection(d);
                if !(inter.is_face_of(c) && inter.is_face_of(d)) {
                    return Err(PolyError::NotAFan(format!(
                        "cones #{i} and #{j} do not intersect in a common face"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smooth-simplicial test with a certificate naming the first violation:
    /// every cone must be pointed and simplicial and its primitive ray
    /// generators must extend to a basis of the integer lattice.
    pub fn is_smooth_simplicial(&self) -> SmoothCheck {
        if let Err(e) = self.validate() {
            return SmoothCheck {
                is_smooth_simplicial: false,
                certificate: Some(e.to_string()),
            };
        }
        for (i, c) in self.cones.iter().enumerate() {
            if !c.is_pointed() {
                return SmoothCheck {
                    is_smooth_simplicial: false,
                    certificate: Some(format!("cone #{i} has nonzero lineality")),
                };
            }
            if c.rays().len() != c.dim() {
                return SmoothCheck {
                    is_smooth_simplicial: false,
                    certificate: Some(format!(
                        "cone #{i} is not simplicial: {} rays span dimension {}",
                        c.rays().len(),
                        c.dim()
                    )),
                };
            }
            if c.rays().is_empty() {
                continue;
            }
            match lattice_saturation_defect(c.rays()) {
                Ok(None) => {}
                Ok(Some(d)) => {
                    return SmoothCheck {
                        is_smooth_simplicial: false,
                        certificate: Some(format!(
                            "cone #{i}: ray generators have lattice index {d}, determinant obstruction {d}"
                        )),
                    }
                }
                Err(e) => {
                    return SmoothCheck {
                        is_smooth_simplicial: false,
                        certificate: Some(format!("cone #{i}: {e}")),
                    }
                }
            }
        }
        SmoothCheck {
            is_smooth_simplicial: true,
            certificate: None,
        }
    }
}

/// Does the union of the fan's maximal cones equal the target cone?
///
/// Requires every fan cone to sit inside `target` (error otherwise). The
/// test is exact: both sides are intersected with a unit box in coordinates
/// of the target's linear span and triangulated volumes are compared.
pub fn fan_covers_cone(fan: &Fan, target: &Cone) -> Result<bool, PolyError> {
    assert_eq!(fan.ambient_rank(), target.ambient_rank());
    for (i, c) in fan.cones().iter().enumerate() {
        for g in c.generators() {
            if !target.contains(&g) {
                return Err(PolyError::FanNotInsideCone {
                    cone_index: i,
                    ray: format!("{g:?}"),
                });
            }
        }
    }
    let d = target.dim();
    if d == 0 {
        return Ok(fan.cones().iter().all(|c| c.is_zero_cone()));
    }

    // coordinates on the span of the target
    let span_basis: Vec<RatVec> = {
        let gens = target.generators();
        let m = RatMat::from_rows(gens.clone(), target.ambient_rank());
        let (_, pivots) = m.transpose().rref();
        pivots.iter().map(|&i| gens[i].clone()).collect()
    };
    debug_assert_eq!(span_basis.len(), d);
    let basis_mat = RatMat::from_rows(span_basis, target.ambient_rank()).transpose();
    let coords = |v: &RatVec| -> RatVec {
        basis_mat
            .solve(v)
            .expect("vector inside the span of the target cone")
    };

    let section_volume = |cone: &Cone| -> Result<Rat, PolyError> {
        let mut hs: Vec<Halfspace> = Vec::new();
        for n in cone.facet_normals() {
            // pull back the inequality to span coordinates: n . (B y) >= 0
            let pulled = RatVec(
                (0..d)
                    .map(|j| {
                        let col = basis_mat.col(j);
                        n.dot(&col)
                    })
                    .collect(),
            );
            if !pulled.is_zero() {
                hs.push(Halfspace::new(pulled, Rat::zero()));
            }
        }
        for j in 0..d {
            hs.push(Halfspace::new(RatVec::unit(d, j), rat(-1)));
            hs.push(Halfspace::new(-&RatVec::unit(d, j), rat(-1)));
        }
        Polytope::from_halfspaces(hs, d)?.volume()
    };

    // express fan cones in span coordinates by mapping their generators
    let cone_in_coords = |c: &Cone| -> Cone {
        Cone::from_generators(
            c.generators().iter().map(&coords).collect::<Vec<_>>(),
            d,
        )
    };

    let target_c = cone_in_coords(target);
    let total = section_volume(&target_c)?;
    let mut covered = Rat::zero();
    let mut any_top = false;
    for c in fan.maximal_cones() {
        if c.dim() == d {
            any_top = true;
            covered = covered + section_volume(&cone_in_coords(c))?;
        }
    }
    if !any_top {
        return Ok(false);
    }
    Ok(covered == total)
}

#[derive(Serialize, Deserialize)]
struct FanWire {
    ambient_rank: usize,
    cones: Vec<Cone>,
}

impl Serialize for Fan {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FanWire {
            ambient_rank: self.ambient_rank,
            cones: self.cones.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fan {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = FanWire::deserialize(d)?;
        Ok(Fan::new(wire.cones, wire.ambient_rank))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    #[test]
    fn negative_octant_face_fan_is_smooth() {
        let oct = Cone::from_generators(
            vec![iv(&[-1, 0, 0]), iv(&[0, -1, 0]), iv(&[0, 0, -1])],
            3,
        );
        let fan = Fan::face_fan_of_cone(&oct);
        assert_eq!(fan.cones().len(), 8);
        fan.validate().unwrap();
        let check = fan.is_smooth_simplicial();
        assert!(check.is_smooth_simplicial, "{:?}", check.certificate);
        assert!(fan_covers_cone(&fan, &oct).unwrap());
    }

    #[test]
    fn non_smooth_cone_certificate_names_determinant() {
        // determinant oracle: |det [[1,0],[1,2]]| = 2
        let c = Cone::from_generators(vec![iv(&[1, 0]), iv(&[1, 2])], 2);
        let fan = Fan::face_fan_of_cone(&c);
        let check = fan.is_smooth_simplicial();
        assert!(!check.is_smooth_simplicial);
        assert!(check.certificate.unwrap().contains('2'));
    }

    #[test]
    fn empty_fan_is_smooth() {
        let fan = Fan::empty(2);
        assert!(fan.is_smooth_simplicial().is_smooth_simplicial);
    }

    #[test]
    fn barycentric_split_covers_quadrant() {
        // triangulation volume oracle: two halves fill the quadrant
        let quadrant = Cone::from_generators(vec![iv(&[1, 0]), iv(&[0, 1])], 2);
        let c1 = Cone::from_generators(vec![iv(&[1, 0]), iv(&[1, 1])], 2);
        let c2 = Cone::from_generators(vec![iv(&[1, 1]), iv(&[0, 1])], 2);
        let mut cones = c1.faces();
        cones.extend(c2.faces());
        let fan = Fan::new(cones, 2);
        fan.validate().unwrap();
        assert!(fan_covers_cone(&fan, &quadrant).unwrap());
    }

    #[test]
    fn single_ray_does_not_cover() {
        let quadrant = Cone::from_generators(vec![iv(&[1, 0]), iv(&[0, 1])], 2);
        let ray = Cone::from_generators(vec![iv(&[1, 1])], 2);
        let fan = Fan::face_fan_of_cone(&ray);
        assert!(!fan_covers_cone(&fan, &quadrant).unwrap());
    }

    #[test]
    fn ray_outside_errors() {
        let quadrant = Cone::from_generators(vec![iv(&[1, 0]), iv(&[0, 1])], 2);
        let bad = Cone::from_generators(vec![iv(&[-1, 1])], 2);
        let fan = Fan::face_fan_of_cone(&bad);
        assert!(matches!(
            fan_covers_cone(&fan, &quadrant),
            Err(PolyError::FanNotInsideCone { .. })
        ));
    }

    #[test]
    fn covering_full_space() {
        // normal-fan style: four quadrants cover the plane
        let quads = [
            vec![iv(&[1, 0]), iv(&[0, 1])],
            vec![iv(&[0, 1]), iv(&[-1, 0])],
            vec![iv(&[-1, 0]), iv(&[0, -1])],
            vec![iv(&[0, -1]), iv(&[1, 0])],
        ];
        let mut cones = Vec::new();
        for q in &quads {
            cones.extend(Cone::from_generators(q.clone(), 2).faces());
        }
        let fan = Fan::new(cones, 2);
        fan.validate().unwrap();
        assert!(fan_covers_cone(&fan, &Cone::full_space(2)).unwrap());
    }

    #[test]
    fn improper_intersection_rejected() {
        let c1 = Cone::from_generators(vec![iv(&[1, 0]), iv(&[1, 2])], 2);
        let c2 = Cone::from_generators(vec![iv(&[2, 1]), iv(&[0, 1])], 2);
        let mut cones = c1.faces();
        cones.extend(c2.faces());
        let fan = Fan::new(cones, 2);
        assert!(fan.validate().is_err());
    }

    #[test]
    fn zero_target() {
        let z = Cone::zero(2);
        assert!(fan_covers_cone(&Fan::empty(2), &z).unwrap());
        assert!(fan_covers_cone(&Fan::new(vec![Cone::zero(2)], 2), &z).unwrap());
    }
}
