//! Small synthetic rank-2 data for exercising the pipeline: a triangle with
//! a single boundary ray, and a pentagon whose three-ray fan covers the
//! whole valuation cone.

use crate::instances::{ExampleInstance, ExampleRepresentation};
use crate::polycore::{Cone, Fan};
use crate::rat::RatVec;
use crate::rootsys::RootSystem;
use crate::spherical::{DivisorRecord, RootSystemLink, SphericalDatum};
use serde_json::json;
use std::collections::BTreeMap;

fn rec(label: &str, v: &[i64], m: u64, g_stable: bool) -> DivisorRecord {
    DivisorRecord {
        label: label.into(),
        v: RatVec::from_ints(v),
        m,
        g_stable,
    }
}

fn torus_link(rank: usize) -> RootSystemLink {
    RootSystemLink {
        root_system: RootSystem::torus(rank),
        embedding: (0..rank).map(|i| RatVec::unit(rank, i)).collect(),
        kappa_char: RatVec::zeros(rank),
    }
}

/// Triangle moment polytope with two colors and one boundary divisor on the
/// hypotenuse; the valuation cone is the negative quadrant, so the single
/// boundary ray cannot cover it (a deliberately incomplete fan).
pub fn toy_triangle() -> ExampleInstance {
    let datum = SphericalDatum::new(
        2,
        vec![RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])],
        RatVec::zeros(2),
        vec![
            rec("c1", &[1, 0], 1, false),
            rec("c2", &[0, 1], 1, false),
            rec("b3", &[-1, -1], 0, true),
        ],
        Some(torus_link(2)),
    )
    .expect("triangle datum is valid");
    let fan = Fan::face_fan_of_cone(&Cone::from_generators(
        vec![RatVec::from_ints(&[-1, -1])],
        2,
    ));
    let mut fixtures = BTreeMap::new();
    fixtures.insert(
        "polytope.vertices".into(),
        json!({"value": [[-1, -1], [-1, 1], [1, -1]], "provenance": "vertex enumeration, frozen"}),
    );
    ExampleInstance {
        name: "toy-triangle".into(),
        datum,
        fan,
        representation: ExampleRepresentation::None,
        reference_fixtures: fixtures,
    }
}

/// Pentagon moment polytope whose boundary fan (three rays, two maximal
/// cones) covers the negative quadrant exactly, giving a connected removed
/// arc and a valid orbit-space model.
pub fn toy_pentagon() -> ExampleInstance {
    let datum = SphericalDatum::new(
        2,
        vec![RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])],
        RatVec::zeros(2),
        vec![
            rec("c1", &[1, 0], 2, false),
            rec("c2", &[0, 1], 2, false),
            rec("b1", &[-1, 0], 2, true),
            rec("b2", &[0, -1], 2, true),
            rec("b3", &[-1, -1], 3, true),
        ],
        Some(torus_link(2)),
    )
    .expect("pentagon datum is valid");
    let c1 = Cone::from_generators(
        vec![RatVec::from_ints(&[-1, 0]), RatVec::from_ints(&[-1, -1])],
        2,
    );
    let c2 = Cone::from_generators(
        vec![RatVec::from_ints(&[-1, -1]), RatVec::from_ints(&[0, -1])],
        2,
    );
    let mut cones = c1.faces();
    cones.extend(c2.faces());
    let fan = Fan::new(cones, 2);
    let mut fixtures = BTreeMap::new();
    fixtures.insert(
        "orbit_space.removed_face_count".into(),
        json!({"value": 5, "provenance": "normal-cone membership, frozen"}),
    );
    fixtures.insert(
        "orbit_space.retained_face_count".into(),
        json!({"value": 6, "provenance": "normal-cone membership, frozen"}),
    );
    ExampleInstance {
        name: "toy-pentagon".into(),
        datum,
        fan,
        representation: ExampleRepresentation::None,
        reference_fixtures: fixtures,
    }
}
