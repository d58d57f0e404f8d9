//! A catalog of worked homogeneous spaces: each entry packages a spherical
//! datum, a toroidal fan, an optional numeric representation and a bag of
//! reference fixtures, ready for the pipeline and the command line.

mod curve;
mod flag;
mod laurent;
mod sl2cubed;
mod sl2group;
mod toric;
mod toy;

pub use curve::{
    check_triple_curve, generic_borel_translates, generic_translates, group_case_action,
    random_rational_borel2, random_rational_sl, triple_action, valuation_from_curve,
    vector_from_pairings, CurveAction, CurveError, CurveFunction, GroupElement, LaurentCurve,
};
pub use flag::build_flag;
pub use laurent::{LaurentMat, LaurentScalar};
pub use sl2cubed::{
    build_sl2cubed, coroot_chart, random_sum_zero_triple, sample_sl2cubed_orbit, OrbitSample,
    StratumClass, TripleClassError,
};
pub use sl2group::{build_sl2_group, group_borel_translates, sl2_group_orbit_coordinate};
pub use toric::{build_toric, toric_random, toric_segment, toric_square};
pub use toy::{toy_pentagon, toy_triangle};

use crate::momentnum::WeightedVector;
use crate::polycore::Fan;
use crate::spherical::SphericalDatum;
use std::collections::BTreeMap;

/// What numeric model an instance carries beyond its combinatorial datum.
#[derive(Debug, Clone)]
pub enum ExampleRepresentation {
    None,
    /// diagonal torus action: the weighted vector doubles as base vector
    Weighted(WeightedVector),
    /// a single special-linear factor whose orbit-space map is the Cartan
    /// decomposition
    GroupCartan { n: usize },
    /// the sum-zero Hermitian-triple sampler
    TripleSampler,
}

/// A fully assembled worked instance.
#[derive(Debug, Clone)]
pub struct ExampleInstance {
    pub name: String,
    pub datum: SphericalDatum,
    pub fan: Fan,
    pub representation: ExampleRepresentation,
    /// frozen reference values with provenance notes
    pub reference_fixtures: BTreeMap<String, serde_json::Value>,
}

/// Names accepted by `--example`.
pub fn registry() -> Vec<&'static str> {
    vec![
        "flag",
        "toric-segment",
        "toric-square",
        "toric-random",
        "sl2-group",
        "sl2cubed",
        "toy-triangle",
        "toy-pentagon",
    ]
}

/// Builds a catalog entry by name.
pub fn build(name: &str) -> Option<ExampleInstance> {
    match name {
        "flag" => Some(build_flag()),
        "toric-segment" => Some(toric_segment()),
        "toric-square" => Some(toric_square()),
        "toric-random" => Some(toric_random(1789)),
        "sl2-group" => Some(build_sl2_group()),
        "sl2cubed" => Some(build_sl2cubed()),
        "toy-triangle" => Some(toy_triangle()),
        "toy-pentagon" => Some(toy_pentagon()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_entries_all_build_and_validate() {
        for name in registry() {
            let inst = build(name).unwrap_or_else(|| panic!("{name} missing"));
            inst.datum.validate().unwrap();
            assert_eq!(inst.name, name);
        }
        assert!(build("no-such-example").is_none());
    }
}
