//! Toric instances: the full torus case, where the moment polytope is the
//! convex hull of the negated weights and the moment parametrization is
//! invertible on its interior. The global sign flip between the weight hull
//! and the moment polytope is handled once, here.

use crate::instances::{ExampleInstance, ExampleRepresentation};
use crate::momentnum::WeightedVector;
use crate::polycore::{Cone, Fan};
use crate::rat::{Rat, RatVec};
use crate::rootsys::RootSystem;
use crate::spherical::{DivisorRecord, RootSystemLink, SphericalDatum};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ToricBuildError {
    #[error("weight hull is not full-dimensional")]
    DegenerateHull,
}

/// Builds the toric instance of a weighted vector: the datum has no
/// spherical roots, its divisors are the facets of the hull of the negated
/// weights, and the base point is the lexicographically least negated
/// weight.
pub fn build_toric(w: &WeightedVector) -> Result<ExampleInstance, ToricBuildError> {
    let rank = w.rank();
    let negated: Vec<RatVec> = w.weights().iter().map(|x| -x).collect();
    let pol = crate::polycore::Polytope::from_points(&negated, rank)
        .expect("hull of finitely many points");
    if pol.dim() < rank {
        return Err(ToricBuildError::DegenerateHull);
    }
    let kappa = negated.iter().min().cloned().expect("nonempty weights");

    let divisors: Vec<DivisorRecord> = pol
        .halfspaces()
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let m = h.normal.dot(&kappa) - &h.offset;
            assert!(
                !m.is_negative() && m.denom().to_i64() == Some(1),
                "facet multiplicity must be a nonnegative integer"
            );
            DivisorRecord {
                label: format!("F{i}"),
                v: h.normal.clone(),
                m: m.numer().to_u64().expect("small multiplicity"),
                g_stable: true,
            }
        })
        .collect();

    let datum = SphericalDatum::new(
        rank,
        vec![],
        kappa.clone(),
        divisors,
        Some(RootSystemLink {
            root_system: RootSystem::torus(rank),
            embedding: (0..rank).map(|i| RatVec::unit(rank, i)).collect(),
            kappa_char: kappa,
        }),
    )
    .expect("toric datum is valid");

    // complete fan: all normal cones of all faces of the polytope
    let mut cones: Vec<Cone> = pol
        .face_lattice()
        .expect("hull is nonempty and bounded")
        .iter()
        .map(|f| pol.normal_cone(f))
        .collect();
    cones.sort_by_key(|c| (c.dim(), c.rays().to_vec()));
    cones.dedup();
    let fan = Fan::new(cones, rank);

    let mut fixtures = BTreeMap::new();
    fixtures.insert(
        "polytope.is_negated_weight_hull".into(),
        json!({"value": true, "provenance": "construction: sign handled once here"}),
    );

    Ok(ExampleInstance {
        name: String::new(),
        datum,
        fan,
        representation: ExampleRepresentation::Weighted(w.clone()),
        reference_fixtures: fixtures,
    })
}

/// Weights {0, 1} on a line: the moment polytope is the segment [-1, 0].
pub fn toric_segment() -> ExampleInstance {
    let w = WeightedVector::from_int_weights(&[&[0], &[1]], &[1.0, 1.0], 1);
    let mut inst = build_toric(&w).expect("segment hull is full-dimensional");
    inst.name = "toric-segment".into();
    inst.reference_fixtures.insert(
        "polytope.vertices".into(),
        json!({"value": [[-1], [0]], "provenance": "negated weight hull"}),
    );
    inst
}

/// The vertices of a lattice square.
pub fn toric_square() -> ExampleInstance {
    let w = WeightedVector::from_int_weights(
        &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]],
        &[1.0, 1.0, 1.0, 1.0],
        2,
    );
    let mut inst = build_toric(&w).expect("square hull is full-dimensional");
    inst.name = "toric-square".into();
    inst
}

/// A seeded random full-dimensional weight configuration in rank 3.
pub fn toric_random(seed: u64) -> ExampleInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let count = rng.gen_range(4..=6);
        let weights: Vec<RatVec> = (0..count)
            .map(|_| {
                RatVec::from_ints(&[
                    rng.gen_range(0..=2),
                    rng.gen_range(0..=2),
                    rng.gen_range(0..=2),
                ])
            })
            .collect();
        let amplitudes: Vec<f64> = (0..count).map(|_| rng.gen_range(0.5..2.0)).collect();
        let Ok(w) = WeightedVector::new(weights, amplitudes, 3) else {
            continue;
        };
        if let Ok(mut inst) = build_toric(&w) {
            inst.name = "toric-random".into();
            return inst;
        }
    }
}

/// The hull-side target of a polytope-side point: the toric moment map
/// parametrizes the hull of the weights, the moment polytope is its
/// negative.
pub fn pol_point_to_hull_target(mu_pol: &[f64]) -> Vec<f64> {
    mu_pol.iter().map(|x| -x).collect()
}

/// Exact interior lattice-grid points of a polytope with the given
/// denominator pitch (e.g. 20 for a 1/20 grid).
pub fn interior_grid_points(
    pol: &crate::polycore::Polytope,
    denominator: i64,
) -> Vec<RatVec> {
    let rank = pol.ambient_rank();
    if pol.is_empty() || rank == 0 {
        return vec![];
    }
    // exact bounding box from the vertices
    let mut lo = vec![Rat::zero(); rank];
    let mut hi = vec![Rat::zero(); rank];
    for (i, v) in pol.vertices().iter().enumerate() {
        for d in 0..rank {
            if i == 0 || v[d] < lo[d] {
                lo[d] = v[d].clone();
            }
            if i == 0 || v[d] > hi[d] {
                hi[d] = v[d].clone();
            }
        }
    }
    let step = Rat::new(1.into(), denominator.into());
    let mut out = Vec::new();
    let mut idx: Vec<i64> = lo
        .iter()
        .map(|x| (x / &step).ceil().to_integer().to_i64().unwrap())
        .collect();
    let max_idx: Vec<i64> = hi
        .iter()
        .map(|x| (x / &step).floor().to_integer().to_i64().unwrap())
        .collect();
    let min_idx = idx.clone();
    loop {
        let point = RatVec(
            idx.iter()
                .map(|&i| &step * Rat::from_integer(i.into()))
                .collect(),
        );
        if pol.contains_in_relative_interior(&point) {
            out.push(point);
        }
        // odometer increment
        let mut d = 0;
        loop {
            if d == rank {
                return out;
            }
            idx[d] += 1;
            if idx[d] <= max_idx[d] {
                break;
            }
            idx[d] = min_idx[d];
            d += 1;
        }
    }
}
