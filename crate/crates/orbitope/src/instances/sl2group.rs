//! SL(2) as a homogeneous space under its own doubled group, acting by
//! two-sided translation. Rank one; the valuation cone is a half-line and
//! the orbit-space map is the Cartan decomposition. The boundary divisor's
//! vector is computed by the curve oracle, not transcribed.

use crate::instances::curve::{
    generic_translates, group_case_action, random_rational_borel2, valuation_from_curve,
    CurveFunction, GroupElement, LaurentCurve,
};
use crate::instances::laurent::{LaurentMat, LaurentScalar};
use crate::instances::{ExampleInstance, ExampleRepresentation};
use crate::momentnum::{cartan_decompose, MatrixGroupElement};
use crate::polycore::{Cone, Fan};
use crate::rat::{rat, RatMat, RatVec};
use crate::rootsys::RootSystem;
use crate::spherical::{DivisorRecord, RootSystemLink, SphericalDatum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeMap;

/// The semi-invariant matrix coefficient generating the weight lattice:
/// the top-left entry.
fn f_top_left() -> CurveFunction {
    CurveFunction {
        name: "x11".into(),
        eval: |c| c.mats[0].entry(0, 0).clone(),
    }
}

/// Curve leaving every chart: `diag(1/t, t)`, transversal to the boundary
/// of the quadric compactification.
fn det_vanishing_curve() -> LaurentCurve {
    LaurentCurve {
        mats: vec![LaurentMat::from_fn(2, |i, j| {
            if i != j {
                LaurentScalar::zero()
            } else if i == 0 {
                LaurentScalar::monomial(-1, rat(1))
            } else {
                LaurentScalar::monomial(1, rat(1))
            }
        })],
    }
}

/// Curve crossing the color `{x11 = 0}` transversally while staying
/// unimodular.
fn color_crossing_curve() -> LaurentCurve {
    // [[t, -1], [1, 0]] has determinant 1 and top-left entry t
    LaurentCurve {
        mats: vec![LaurentMat::from_fn(2, |i, j| match (i, j) {
            (0, 0) => LaurentScalar::monomial(1, rat(1)),
            (0, 1) => LaurentScalar::constant(rat(-1)),
            (1, 0) => LaurentScalar::one(),
            (1, 1) => LaurentScalar::zero(),
            _ => unreachable!(),
        })],
    }
}

/// Borel translates for the two-sided action: lower-triangular on the left,
/// upper-triangular on the right (the color is stable only under these).
pub fn group_borel_translates(k: usize, rng: &mut ChaCha8Rng) -> Vec<GroupElement> {
    (0..k)
        .map(|_| {
            let upper = random_rational_borel2(rng);
            let lower = transpose(&random_rational_borel2(rng));
            vec![lower, upper]
        })
        .collect()
}

fn transpose(m: &RatMat) -> RatMat {
    m.transpose()
}

/// Computes both divisor vectors through the curve oracle and assembles the
/// rank-one datum: one color, one boundary divisor, the positive root of
/// the little rank-one system as (primitive) spherical root.
pub fn build_sl2_group() -> ExampleInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(20_26);
    let f = f_top_left();

    // boundary: full-group generic translates (the divisor is G-stable)
    let boundary_pairing = valuation_from_curve(
        &f,
        &det_vanishing_curve(),
        group_case_action,
        &generic_translates(2, 2, 3, &mut rng),
    )
    .expect("generic translates agree on the boundary order");

    // color: Borel translates (the divisor is only B-stable)
    let color_pairing = valuation_from_curve(
        &f,
        &color_crossing_curve(),
        group_case_action,
        &group_borel_translates(3, &mut rng),
    )
    .expect("Borel translates agree on the color order");

    let datum = SphericalDatum::new(
        1,
        vec![RatVec::from_ints(&[1])],
        RatVec::zeros(1),
        vec![
            DivisorRecord {
                label: "color".into(),
                v: RatVec::from_ints(&[color_pairing]),
                m: 0,
                g_stable: false,
            },
            DivisorRecord {
                label: "boundary".into(),
                v: RatVec::from_ints(&[boundary_pairing]),
                m: 1,
                g_stable: true,
            },
        ],
        Some(RootSystemLink {
            root_system: RootSystem::a1_power(2),
            // the weight lattice embeds antidiagonally into the characters
            // of the doubled torus
            embedding: vec![RatVec::from_ints(&[-1, 1])],
            kappa_char: RatVec::zeros(2),
        }),
    )
    .expect("group datum is valid");

    let fan = Fan::face_fan_of_cone(&Cone::from_generators(
        vec![RatVec::from_ints(&[boundary_pairing])],
        1,
    ));

    let mut fixtures = BTreeMap::new();
    fixtures.insert(
        "divisors.boundary_vector".into(),
        json!({"value": [boundary_pairing], "provenance": "curve-oracle (det-vanishing curve), frozen in fixtures/v1"}),
    );
    fixtures.insert(
        "divisors.color_vector".into(),
        json!({"value": [color_pairing], "provenance": "curve-oracle (color-crossing curve), frozen in fixtures/v1"}),
    );
    fixtures.insert(
        "satellites.compact_dims".into(),
        json!({"value": {"general": 3, "interior": 1}, "provenance": "diagonal compact subgroup / diagonal circle"}),
    );

    ExampleInstance {
        name: "sl2-group".into(),
        datum,
        fan,
        representation: ExampleRepresentation::GroupCartan { n: 2 },
        reference_fixtures: fixtures,
    }
}

/// The orbit-space coordinate of a group element: the first (smallest)
/// entry of its Cartan vector, a point of the valuation half-line.
pub fn sl2_group_orbit_coordinate(h: &MatrixGroupElement) -> Result<f64, crate::momentnum::NumError> {
    let d = cartan_decompose(h)?;
    Ok(d.val_coords()[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momentnum::GroupTag;
    use crate::spherical::{orbit_space_model, stratification_report};
    use nalgebra::{Complex, DMatrix};

    #[test]
    fn valuation_cone_is_negative_half_line() {
        let inst = build_sl2_group();
        let val = inst.datum.valuation_cone();
        assert_eq!(val.rays(), &[RatVec::from_ints(&[-1])]);
        assert!(val.lineality().is_empty());
    }

    #[test]
    fn boundary_vector_is_negative_coroot_direction() {
        // frozen oracle output: the det-vanishing curve pairs to -1
        let inst = build_sl2_group();
        let b = inst.datum.divisor("boundary").unwrap();
        assert_eq!(b.v, RatVec::from_ints(&[-1]));
        let c = inst.datum.divisor("color").unwrap();
        assert_eq!(c.v, RatVec::from_ints(&[1]));
    }

    #[test]
    fn moment_polytope_is_unit_segment() {
        let inst = build_sl2_group();
        let pol = inst.datum.moment_polytope().unwrap();
        assert_eq!(
            pol.vertices(),
            &[RatVec::from_ints(&[0]), RatVec::from_ints(&[1])]
        );
    }

    #[test]
    fn orbit_space_has_two_strata() {
        let inst = build_sl2_group();
        let model = orbit_space_model(&inst.datum, &inst.fan).unwrap();
        // removed: the vertex matching the boundary ray
        assert_eq!(model.removed_faces.len(), 1);
        assert_eq!(model.removed_faces[0].dimension, 0);
        assert_eq!(model.retained_faces.len(), 2);

        let link = inst.datum.root_system.as_ref().unwrap();
        let mut general = 0;
        let mut degenerate = 0;
        for f in &model.retained_faces {
            let rep = stratification_report(&inst.datum, &model, f).unwrap();
            let hint = rep.satellite_hint(&link.root_system);
            if hint.general {
                general += 1;
                // the identity-coset stratum: Levi is everything
                assert_eq!(rep.levi_roots.len(), link.root_system.roots().len());
            }
            if hint.most_degenerate {
                degenerate += 1;
            }
        }
        assert_eq!(general, 1);
        assert_eq!(degenerate, 1);
    }

    #[test]
    fn cartan_value_lands_in_the_valuation_cone() {
        let inst = build_sl2_group();
        let val = inst.datum.valuation_cone();
        let h = MatrixGroupElement::single(
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex::new(3.0, 0.0),
                    Complex::new(1.0, 0.0),
                    Complex::new(2.0, 0.0),
                    Complex::new(1.0, 0.0),
                ],
            ),
            GroupTag::SpecialLinear,
        )
        .unwrap();
        let coord = sl2_group_orbit_coordinate(&h).unwrap();
        assert!(coord <= 0.0);
        // membership in the cone via the exact facets, with float slack
        for n in val.facet_normals() {
            let v: f64 = n.to_f64_vec()[0] * coord;
            assert!(v >= -1e-12);
        }
        // identity sits at the apex
        let id = MatrixGroupElement::single(
            DMatrix::identity(2, 2),
            GroupTag::SpecialLinear,
        )
        .unwrap();
        assert!(sl2_group_orbit_coordinate(&id).unwrap().abs() <= 1e-12);
    }
}
