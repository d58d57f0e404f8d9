//! The triple product of SL(2) acting on itself modulo the diagonal: the
//! rank-three instance where the orbit-type stratification is strictly
//! coarser than the face stratification of the valuation cone.
//!
//! Coordinates: the weight lattice has basis (w1+w2, w1+w3, w2+w3) where
//! the w_i are the fundamental weights of the three factors. The three
//! colors pair as the dual basis; the boundary divisors pair as the
//! negated coroots.

use crate::instances::curve::{CurveFunction, LaurentCurve};
use crate::instances::laurent::{LaurentMat, LaurentScalar};
use crate::instances::{ExampleInstance, ExampleRepresentation};
use crate::momentnum::CMat;
use crate::polycore::{Cone, Fan};
use crate::rat::{rat, RatMat, RatVec};
use crate::rootsys::RootSystem;
use crate::spherical::{DivisorRecord, RootSystemLink, SphericalDatum};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeMap;
use thiserror::Error;

pub fn build_sl2cubed() -> ExampleInstance {
    let datum = SphericalDatum::new(
        3,
        // the simple roots in weight-lattice coordinates
        vec![
            RatVec::from_ints(&[1, 1, -1]),
            RatVec::from_ints(&[1, -1, 1]),
            RatVec::from_ints(&[-1, 1, 1]),
        ],
        RatVec::zeros(3),
        vec![
            DivisorRecord {
                label: "c12".into(),
                v: RatVec::from_ints(&[1, 0, 0]),
                m: 1,
                g_stable: false,
            },
            DivisorRecord {
                label: "c13".into(),
                v: RatVec::from_ints(&[0, 1, 0]),
                m: 1,
                g_stable: false,
            },
            DivisorRecord {
                label: "c23".into(),
                v: RatVec::from_ints(&[0, 0, 1]),
                m: 1,
                g_stable: false,
            },
            DivisorRecord {
                label: "b1".into(),
                v: RatVec::from_ints(&[-1, -1, 0]),
                m: 1,
                g_stable: true,
            },
            DivisorRecord {
                label: "b2".into(),
                v: RatVec::from_ints(&[-1, 0, -1]),
                m: 1,
                g_stable: true,
            },
            DivisorRecord {
                label: "b3".into(),
                v: RatVec::from_ints(&[0, -1, -1]),
                m: 1,
                g_stable: true,
            },
        ],
        Some(RootSystemLink {
            root_system: RootSystem::a1_power(3),
            // basis vector w_i + w_j maps to e_i + e_j in character coords
            embedding: vec![
                RatVec::from_ints(&[1, 1, 0]),
                RatVec::from_ints(&[1, 0, 1]),
                RatVec::from_ints(&[0, 1, 1]),
            ],
            kappa_char: RatVec::from_ints(&[2, 2, 2]),
        }),
    )
    .expect("datum is valid");

    // toroidal fan: all faces of the cone on the three boundary vectors
    // (the image of the negative octant)
    let fan = Fan::face_fan_of_cone(&Cone::from_generators(
        vec![
            RatVec::from_ints(&[-1, -1, 0]),
            RatVec::from_ints(&[-1, 0, -1]),
            RatVec::from_ints(&[0, -1, -1]),
        ],
        3,
    ));

    let mut fixtures = BTreeMap::new();
    fixtures.insert(
        "valuations.color_in_coroot_coords".into(),
        json!({"value": ["1/2", "1/2", "-1/2"], "provenance": "curve-oracle pairings (1,0,0) on the weight basis, frozen"}),
    );
    fixtures.insert(
        "valuations.boundary_pairings".into(),
        json!({"value": {"b1": [-1, -1, 0], "b2": [-1, 0, -1], "b3": [0, -1, -1]},
               "provenance": "curve-oracle orders along the diagonal boundary curves, frozen"}),
    );
    fixtures.insert(
        "sampler.stabilizer_dims".into(),
        json!({"value": {"zero": 3, "collinear": 1, "generic": 0},
               "provenance": "stabilizers of sum-zero vector triples under rotations: full group / circle / trivial"}),
    );
    fixtures.insert(
        "satellites.compact_dims".into(),
        json!({"value": {"edge": 1, "face": 1, "origin": 3, "interior": 0},
               "provenance": "maximal compact subgroups of the printed satellite shapes"}),
    );
    fixtures.insert(
        "satellites.edge_shape".into(),
        json!({"value": "g_i = [[s,0],[*,1/s]], g_j = g_k = [[s,*],[0,1/s]]",
               "provenance": "stabilizer of a generic normal vector along a boundary divisor"}),
    );
    fixtures.insert(
        "satellites.face_shape".into(),
        json!({"value": "g_i = [[s,0],[*,1/s]], g_j = [[s,*],[0,1/s]], g_k = [[s,0],[0,1/s]]",
               "provenance": "stabilizer of a generic normal vector along a codimension-two orbit"}),
    );
    fixtures.insert(
        "strata.count_vs_valuation_faces".into(),
        json!({"value": {"strata": 3, "valuation_cone_faces": 8},
               "provenance": "orbit types are coarser than cone faces: all six boundary faces share the circle class"}),
    );

    ExampleInstance {
        name: "sl2cubed".into(),
        datum,
        fan,
        representation: ExampleRepresentation::TripleSampler,
        reference_fixtures: fixtures,
    }
}

/// Change of coordinates on the valuation side: expresses a vector in the
/// coroot basis of the three factors.
pub fn coroot_chart(rho: &RatVec) -> RatVec {
    // rho = sum c_i coroot_i has weight-basis pairings
    // (c1+c2, c1+c3, c2+c3)
    let m = RatMat::from_rows(
        vec![
            RatVec::from_ints(&[1, 1, 0]),
            RatVec::from_ints(&[1, 0, 1]),
            RatVec::from_ints(&[0, 1, 1]),
        ],
        3,
    );
    m.solve(rho).expect("chart matrix is invertible")
}

/// The three generating semi-invariant functions: the bottom-left entries
/// of the three matrices of a triple.
pub fn functions() -> Vec<CurveFunction> {
    vec![
        CurveFunction {
            name: "f12".into(),
            eval: |c| c.mats[2].entry(1, 0).clone(),
        },
        CurveFunction {
            name: "f13".into(),
            eval: |c| c.mats[1].entry(1, 0).clone(),
        },
        CurveFunction {
            name: "f23".into(),
            eval: |c| c.mats[0].entry(1, 0).clone(),
        },
    ]
}

fn diag_t(neg: bool) -> LaurentMat {
    LaurentMat::from_fn(2, |i, j| {
        if i != j {
            LaurentScalar::zero()
        } else {
            let k = if (i == 0) == neg { -1 } else { 1 };
            LaurentScalar::monomial(k, rat(1))
        }
    })
}

fn lower_unipotent(entry: LaurentScalar) -> LaurentMat {
    LaurentMat::from_fn(2, |i, j| match (i, j) {
        (0, 0) | (1, 1) => LaurentScalar::one(),
        (1, 0) => entry.clone(),
        _ => LaurentScalar::zero(),
    })
}

/// Curves transversal to the three boundary divisors: one factor stays at
/// the identity, the other two run through inverse one-parameter subgroups.
pub fn boundary_curve(i: usize) -> LaurentCurve {
    let id = LaurentMat::identity(2);
    let mats = match i {
        1 => vec![id, diag_t(false), diag_t(true)],
        2 => vec![diag_t(true), id, diag_t(false)],
        3 => vec![diag_t(false), diag_t(true), id],
        _ => panic!("boundary index must be 1..=3"),
    };
    LaurentCurve { mats }
}

/// Curves crossing the three colors at a generic point, reparametrized by
/// t -> t^2 (the color valuations are half-integral in coroot coordinates,
/// so only the doubled curve has integer orders).
pub fn color_curve(pair: (usize, usize)) -> LaurentCurve {
    let one = || lower_unipotent(LaurentScalar::one());
    let tsq = || lower_unipotent(LaurentScalar::monomial(2, rat(1)));
    let comp = || {
        lower_unipotent(LaurentScalar::from_terms(&[(0, rat(-1)), (2, rat(-1))]))
    };
    let mats = match pair {
        (1, 2) => vec![one(), comp(), tsq()],
        (1, 3) => vec![one(), tsq(), comp()],
        (2, 3) => vec![tsq(), one(), comp()],
        _ => panic!("color pair must be (1,2), (1,3) or (2,3)"),
    };
    LaurentCurve { mats }
}

/// Reparametrization degree of the color curves.
pub const COLOR_CURVE_RESCALE: i64 = 2;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TripleClassError {
    #[error("triple does not sum to zero (residual {0:.3e})")]
    SumNotZero(f64),
    #[error("matrix #{0} is not Hermitian within tolerance")]
    NotHermitian(usize),
    #[error("matrix #{0} is not traceless within tolerance")]
    NotTraceless(usize),
}

/// Where a sample sits in the triangle-inequality cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum StratumClass {
    /// all three vectors vanish
    Vertex,
    /// nonzero but collinear: some triangle inequality is tight
    Boundary,
    /// planar: all triangle inequalities strict
    Interior,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct OrbitSample {
    /// the rotation-invariant lengths `sqrt(tr xi_i^2)`
    pub lengths: [f64; 3],
    /// real dimension of the stabilizer of the triple under rotations
    pub stabilizer_dim: usize,
    pub stratum_class: StratumClass,
    /// which triangle inequalities are tight
    pub tight: [bool; 3],
}

/// Classifies a sum-zero triple of traceless Hermitian 2x2 matrices: the
/// lengths separate orbits, the Gram rank detects collinearity, and the
/// triangle-inequality activity pattern names the stratum.
pub fn sample_sl2cubed_orbit(
    xi: &[CMat; 3],
    rank_tol: f64,
) -> Result<OrbitSample, TripleClassError> {
    for (i, m) in xi.iter().enumerate() {
        if (m - m.adjoint()).norm() > 1e-12 * m.norm().max(1.0) {
            return Err(TripleClassError::NotHermitian(i));
        }
        if m.trace().norm() > 1e-12 * m.norm().max(1.0) {
            return Err(TripleClassError::NotTraceless(i));
        }
    }
    let sum = &xi[0] + &xi[1] + &xi[2];
    let scale = xi.iter().map(|m| m.norm()).fold(1.0f64, f64::max);
    if sum.norm() > 1e-12 * scale {
        return Err(TripleClassError::SumNotZero(sum.norm()));
    }

    // lengths |xi| = sqrt(tr xi^2) = Frobenius norm for Hermitian matrices
    let lengths = [xi[0].norm(), xi[1].norm(), xi[2].norm()];

    // Gram matrix of the triple under the trace form
    let mut gram = nalgebra::DMatrix::<f64>::zeros(3, 3);
    for a in 0..3 {
        for b in 0..3 {
            gram[(a, b)] = (&xi[a] * &xi[b]).trace().re;
        }
    }
    let eig = gram.symmetric_eigen();
    let emax = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let rank = eig
        .eigenvalues
        .iter()
        .filter(|&&e| e > rank_tol * emax)
        .count();

    let (stabilizer_dim, stratum_class) = match rank {
        0 => (3, StratumClass::Vertex),
        1 => (1, StratumClass::Boundary),
        _ => (0, StratumClass::Interior),
    };

    let mut tight = [false; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let slack = lengths[j] + lengths[k] - lengths[i];
        tight[i] = slack.abs() <= rank_tol * scale;
    }

    Ok(OrbitSample {
        lengths,
        stabilizer_dim,
        stratum_class,
        tight,
    })
}

/// A random sum-zero triple of traceless Hermitian matrices.
pub fn random_sum_zero_triple(rng: &mut ChaCha8Rng) -> [CMat; 3] {
    let herm = |rng: &mut ChaCha8Rng| {
        let a: f64 = rng.gen_range(-1.0..1.0);
        let b: f64 = rng.gen_range(-1.0..1.0);
        let c: f64 = rng.gen_range(-1.0..1.0);
        CMat::from_row_slice(
            2,
            2,
            &[
                nalgebra::Complex::new(a, 0.0),
                nalgebra::Complex::new(b, c),
                nalgebra::Complex::new(b, -c),
                nalgebra::Complex::new(-a, 0.0),
            ],
        )
    };
    let x1 = herm(rng);
    let x2 = herm(rng);
    let x3 = -(&x1 + &x2);
    [x1, x2, x3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::curve::{
        check_triple_curve, generic_borel_translates, generic_translates, triple_action,
        valuation_from_curve, vector_from_pairings,
    };
    use crate::rat::ratio;
    use crate::spherical::{orbit_space_model, stratification_report, verify_toroidal_normal_fan};
    use rand::SeedableRng;

    #[test]
    fn valuation_cone_is_octant_in_coroot_coordinates() {
        let inst = build_sl2cubed();
        let val = inst.datum.valuation_cone();
        assert_eq!(val.facet_normals().len(), 3);
        assert!(!inst.datum.is_horospherical());
        let mut rays: Vec<RatVec> = val.rays().iter().map(coroot_chart).collect();
        rays.sort();
        assert_eq!(
            rays,
            vec![
                RatVec::from_ints(&[-1, 0, 0]),
                RatVec::from_ints(&[0, -1, 0]),
                RatVec::from_ints(&[0, 0, -1]),
            ]
        );
    }

    #[test]
    fn color_vector_in_coroot_coordinates() {
        let inst = build_sl2cubed();
        let c12 = inst.datum.divisor("c12").unwrap();
        assert_eq!(
            coroot_chart(&c12.v),
            RatVec(vec![ratio(1, 2), ratio(1, 2), ratio(-1, 2)])
        );
    }

    #[test]
    fn curves_satisfy_the_triple_constraints() {
        for i in 1..=3 {
            assert!(check_triple_curve(&boundary_curve(i)), "boundary {i}");
        }
        for pair in [(1, 2), (1, 3), (2, 3)] {
            assert!(check_triple_curve(&color_curve(pair)), "color {pair:?}");
        }
    }

    #[test]
    fn boundary_curve_orders_give_negated_coroots() {
        let inst = build_sl2cubed();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fs = functions();
        for (i, label) in [(1usize, "b1"), (2, "b2"), (3, "b3")] {
            let translates = generic_translates(3, 2, 3, &mut rng);
            let orders: Vec<i64> = fs
                .iter()
                .map(|f| {
                    valuation_from_curve(f, &boundary_curve(i), triple_action, &translates)
                        .unwrap()
                })
                .collect();
            let pairings: Vec<crate::rat::Rat> = orders.iter().map(|&o| rat(o)).collect();
            let basis = vec![
                RatVec::from_ints(&[1, 0, 0]),
                RatVec::from_ints(&[0, 1, 0]),
                RatVec::from_ints(&[0, 0, 1]),
            ];
            let vector = vector_from_pairings(&basis, &pairings).unwrap();
            assert_eq!(vector, inst.datum.divisor(label).unwrap().v, "divisor {label}");
        }
    }

    #[test]
    fn color_curve_orders_give_half_sum_of_coroots() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let fs = functions();
        let expect = [
            ((1usize, 2usize), [2i64, 0, 0]),
            ((1, 3), [0, 2, 0]),
            ((2, 3), [0, 0, 2]),
        ];
        for (pair, want) in expect {
            let translates = generic_borel_translates(3, 3, &mut rng);
            let orders: Vec<i64> = fs
                .iter()
                .map(|f| {
                    valuation_from_curve(f, &color_curve(pair), triple_action, &translates)
                        .unwrap()
                })
                .collect();
            assert_eq!(orders, want.to_vec(), "pair {pair:?}");
            // after undoing the t -> t^2 rescale, the pairings determine the
            // color vector; in coroot coordinates it is half-integral
            let pairings: Vec<crate::rat::Rat> = orders
                .iter()
                .map(|&o| ratio(o, COLOR_CURVE_RESCALE))
                .collect();
            let basis = vec![
                RatVec::from_ints(&[1, 0, 0]),
                RatVec::from_ints(&[0, 1, 0]),
                RatVec::from_ints(&[0, 0, 1]),
            ];
            let v = vector_from_pairings(&basis, &pairings).unwrap();
            let half: Vec<crate::rat::Rat> = coroot_chart(&v).0;
            assert!(half.iter().all(|x| (x * rat(2)).denom() == &1.into()));
        }
    }

    #[test]
    fn fan_is_verified_and_complete_but_not_smooth() {
        let inst = build_sl2cubed();
        let report = verify_toroidal_normal_fan(&inst.datum, &inst.fan).unwrap();
        assert!(report.verified());
        assert!(report.inside_valuation_cone);
        assert!(report.complete);
        // the full three-dimensional cone has lattice index 2: the fan is
        // simplicial but not unimodular
        let check = inst.fan.is_smooth_simplicial();
        assert!(!check.is_smooth_simplicial);
        assert!(check.certificate.unwrap().contains('2'));
    }

    #[test]
    fn orbit_space_face_census() {
        let inst = build_sl2cubed();
        let model = orbit_space_model(&inst.datum, &inst.fan).unwrap();
        let pol = &model.polytope;
        assert_eq!(pol.vertices().len(), 5);
        let total = model.removed_faces.len() + model.retained_faces.len();
        assert_eq!(total, 21); // 5 vertices + 9 edges + 6 facets + 1 body
        assert_eq!(model.removed_faces.len(), 7); // one per nonzero fan cone
        assert_eq!(model.retained_faces.len(), 14);
    }

    #[test]
    fn stratification_levi_census() {
        let inst = build_sl2cubed();
        let model = orbit_space_model(&inst.datum, &inst.fan).unwrap();
        let link = inst.datum.root_system.as_ref().unwrap();
        let mut by_levi: BTreeMap<usize, usize> = BTreeMap::new();
        let mut general = 0usize;
        for f in &model.retained_faces {
            let rep = stratification_report(&inst.datum, &model, f).unwrap();
            *by_levi.entry(rep.levi_roots.len()).or_default() += 1;
            if rep.satellite_hint(&link.root_system).general {
                general += 1;
                // the origin vertex: everything is Levi
                assert_eq!(rep.active_b_divisors.len(), 3);
            }
        }
        // levi sizes: 0 roots (trivial class), 2 roots (one factor), 6 (all)
        assert_eq!(by_levi.get(&0), Some(&7));
        assert_eq!(by_levi.get(&2), Some(&6));
        assert_eq!(by_levi.get(&6), Some(&1));
        assert_eq!(general, 1);
        // three Levi classes versus eight faces of the valuation cone:
        // the orbit-type stratification is coarser
        assert_eq!(by_levi.len(), 3);
        let val_faces = inst.datum.valuation_cone().faces().len();
        assert_eq!(val_faces, 8);
    }

    #[test]
    fn sampler_fixture_triples() {
        let z = CMat::zeros(2, 2);
        let s = sample_sl2cubed_orbit(&[z.clone(), z.clone(), z], 1e-8).unwrap();
        assert_eq!(s.stabilizer_dim, 3);
        assert_eq!(s.stratum_class, StratumClass::Vertex);

        let d = CMat::from_row_slice(
            2,
            2,
            &[
                nalgebra::Complex::new(1.0, 0.0),
                nalgebra::Complex::new(0.0, 0.0),
                nalgebra::Complex::new(0.0, 0.0),
                nalgebra::Complex::new(-1.0, 0.0),
            ],
        );
        let collinear = [d.clone(), d.clone(), -(&d + &d)];
        let s = sample_sl2cubed_orbit(&collinear, 1e-8).unwrap();
        assert_eq!(s.stabilizer_dim, 1);
        assert_eq!(s.stratum_class, StratumClass::Boundary);
        assert!(s.tight.iter().any(|&t| t));

        let off = CMat::from_row_slice(
            2,
            2,
            &[
                nalgebra::Complex::new(0.0, 0.0),
                nalgebra::Complex::new(1.0, 0.0),
                nalgebra::Complex::new(1.0, 0.0),
                nalgebra::Complex::new(0.0, 0.0),
            ],
        );
        let generic = [d.clone(), off.clone(), -(&d + &off)];
        let s = sample_sl2cubed_orbit(&generic, 1e-8).unwrap();
        assert_eq!(s.stabilizer_dim, 0);
        assert_eq!(s.stratum_class, StratumClass::Interior);
        assert!(s.tight.iter().all(|&t| !t));
    }

    #[test]
    fn sampler_rejects_bad_input() {
        let d = CMat::from_row_slice(
            2,
            2,
            &[
                nalgebra::Complex::new(1.0, 0.0),
                nalgebra::Complex::new(0.0, 0.0),
                nalgebra::Complex::new(0.0, 0.0),
                nalgebra::Complex::new(-1.0, 0.0),
            ],
        );
        assert!(matches!(
            sample_sl2cubed_orbit(&[d.clone(), d.clone(), d.clone()], 1e-8),
            Err(TripleClassError::SumNotZero(_))
        ));
    }

    #[test]
    fn triangle_inequalities_and_scale_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..500 {
            let triple = random_sum_zero_triple(&mut rng);
            let s = sample_sl2cubed_orbit(&triple, 1e-8).unwrap();
            for i in 0..3 {
                let j = (i + 1) % 3;
                let k = (i + 2) % 3;
                assert!(
                    s.lengths[i] <= s.lengths[j] + s.lengths[k] + 1e-12,
                    "triangle inequality violated"
                );
            }
            // scaling does not change the class
            let t = nalgebra::Complex::new(3.25, 0.0);
            let scaled = [&triple[0] * t, &triple[1] * t, &triple[2] * t];
            let s2 = sample_sl2cubed_orbit(&scaled, 1e-8).unwrap();
            assert_eq!(s.stratum_class, s2.stratum_class);
            assert_eq!(s.stabilizer_dim, s2.stabilizer_dim);
        }
    }
}
