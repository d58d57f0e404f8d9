//! The projective line as a flag variety of SL(2): weight lattice zero,
//! the compact group acts transitively, the whole pipeline degenerates to a
//! single point.

use crate::instances::{ExampleInstance, ExampleRepresentation};
use crate::polycore::Fan;
use crate::rat::RatVec;
use crate::rootsys::RootSystem;
use crate::spherical::{DivisorRecord, RootSystemLink, SphericalDatum};
use serde_json::json;
use std::collections::BTreeMap;

pub fn build_flag() -> ExampleInstance {
    let datum = SphericalDatum::new(
        0,
        vec![],
        RatVec::zeros(0),
        vec![DivisorRecord {
            label: "schubert".into(),
            v: RatVec::zeros(0),
            m: 1,
            g_stable: false,
        }],
        Some(RootSystemLink {
            root_system: RootSystem::a1_power(1),
            embedding: vec![],
            kappa_char: RatVec::from_ints(&[1]),
        }),
    )
    .expect("flag datum is valid");

    let mut fixtures = BTreeMap::new();
    fixtures.insert(
        "orbit_space.expected_stratum_count".into(),
        json!({"value": 1, "provenance": "transitive compact action"}),
    );
    fixtures.insert(
        "kirwan.constant_value_su2_coords".into(),
        json!({"value": [0.5, -0.5], "provenance": "highest-weight line of the defining representation"}),
    );

    ExampleInstance {
        name: "flag".into(),
        datum,
        fan: Fan::empty(0),
        representation: ExampleRepresentation::None,
        reference_fixtures: fixtures,
    }
}
