//! The combinatorial pipeline for spherical homogeneous spaces: from a
//! colored-divisor datum to the valuation cone, the moment polytope, the
//! toroidal-fan verification, the orbit-space model (a polytope with the
//! boundary faces matching the fan removed), and per-face stratification
//! reports.

use crate::polycore::{fan_covers_cone, Cone, FaceDescriptor, Fan, Halfspace, PolyError, Polytope};
use crate::rat::{span_rank, Rat, RatVec};
use crate::rootsys::{levi_roots, parabolic_roots, RootSystem};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SphericalError {
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("moment polytope is unbounded: divisor vectors do not positively span the space")]
    Unbounded,
    #[error("divisor set does not cut a nonempty orbit face: {0}")]
    InfeasibleOrbit(String),
    #[error("fan ray {0} is not a G-stable divisor vector")]
    NotToroidal(String),
    #[error("toroidal fan verification failed: {0}")]
    VerificationFailed(String),
    #[error("fan does not cover the valuation cone")]
    IncompleteFan,
    #[error("face is a removed boundary face; stratification applies to retained faces only")]
    RemovedFace,
    #[error("face is not a face of the model polytope")]
    UnknownFace,
    #[error("datum carries no root-system link")]
    MissingRootSystem,
}

/// One boundary-or-color divisor record: the pairing vector `v` of its
/// valuation, its multiplicity `m` in the chosen ample divisor, and whether
/// the full group stabilizes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorRecord {
    pub label: String,
    pub v: RatVec,
    pub m: u64,
    pub g_stable: bool,
}

/// Embedding of the weight lattice into the character space of the acting
/// group, with the affine anchor for the ample weight. Needed to pair
/// polytope points against roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSystemLink {
    #[serde(rename = "type")]
    pub root_system: RootSystem,
    /// columns: images of the weight-lattice basis vectors in character
    /// coordinates (dimension `root_system.dim()` x `rank`)
    pub embedding: Vec<RatVec>,
    /// character-space image of the polytope's base point `kappa`
    pub kappa_char: RatVec,
}

/// The combinatorial fingerprint of a spherical homogeneous space together
/// with a projective compactification: weight-lattice rank, spherical
/// roots, the ample weight and the colored divisor data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalDatum {
    pub rank: usize,
    pub spherical_roots: Vec<RatVec>,
    pub kappa: RatVec,
    pub divisors: Vec<DivisorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_system: Option<RootSystemLink>,
}

impl SphericalDatum {
    pub fn new(
        rank: usize,
        spherical_roots: Vec<RatVec>,
        kappa: RatVec,
        divisors: Vec<DivisorRecord>,
        root_system: Option<RootSystemLink>,
    ) -> Result<SphericalDatum, SphericalError> {
        let d = SphericalDatum {
            rank,
            spherical_roots,
            kappa,
            divisors,
            root_system,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), SphericalError> {
        let bad = |m: String| Err(SphericalError::InvalidDatum(m));
        if self.kappa.len() != self.rank {
            return bad(format!("kappa has length {}, want {}", self.kappa.len(), self.rank));
        }
        for s in &self.spherical_roots {
            if s.len() != self.rank {
                return bad("spherical root with wrong length".into());
            }
            if !s.is_integer() {
                return bad(format!("spherical root {s:?} is not integral"));
            }
            if s.is_zero() {
                return bad("zero spherical root".into());
            }
        }
        if span_rank(&self.spherical_roots, self.rank) != self.spherical_roots.len() {
            return bad("spherical roots are not linearly independent".into());
        }
        for rec in &self.divisors {
            if rec.v.len() != self.rank {
                return bad(format!("divisor {} has wrong vector length", rec.label));
            }
            if !rec.v.is_integer() {
                return bad(format!("divisor {} vector is not integral", rec.label));
            }
        }
        let val = self.valuation_cone();
        for rec in &self.divisors {
            if rec.g_stable && !val.contains(&rec.v) {
                return bad(format!(
                    "G-stable divisor {} has vector outside the valuation cone",
                    rec.label
                ));
            }
        }
        if let Some(link) = &self.root_system {
            if link.embedding.len() != self.rank {
                return bad("embedding must have one column per lattice rank".into());
            }
            let cd = link.root_system.dim();
            if link.kappa_char.len() != cd || link.embedding.iter().any(|c| c.len() != cd) {
                return bad("embedding/kappa_char dimension mismatch".into());
            }
        }
        Ok(())
    }

    pub fn divisor(&self, label: &str) -> Option<&DivisorRecord> {
        self.divisors.iter().find(|d| d.label == label)
    }

    pub fn g_stable_divisors(&self) -> Vec<&DivisorRecord> {
        self.divisors.iter().filter(|d| d.g_stable).collect()
    }

    /// The valuation cone `{rho : rho(sigma_i) <= 0}` in the dual of the
    /// weight space. Cosimplicial by construction and always
    /// full-dimensional.
    pub fn valuation_cone(&self) -> Cone {
        Cone::from_inequalities(
            self.spherical_roots.iter().map(|s| -s).collect::<Vec<_>>(),
            self.rank,
        )
    }

    /// Horospherical means no spherical roots; equivalently the valuation
    /// cone is the whole space.
    pub fn is_horospherical(&self) -> bool {
        self.spherical_roots.is_empty()
    }

    /// The moment polytope `{mu : v_i(mu - kappa) >= -m_i}`, in coordinates
    /// of the weight space (affinely anchored at `kappa`).
    pub fn moment_polytope(&self) -> Result<Polytope, SphericalError> {
        let hs: Vec<Halfspace> = self
            .divisors
            .iter()
            .map(|d| {
                let offset = d.v.dot(&self.kappa) - Rat::from_integer(d.m.into());
                Halfspace::new(d.v.clone(), offset)
            })
            .collect();
        Polytope::from_halfspaces(hs, self.rank).map_err(|e| match e {
            PolyError::Unbounded => SphericalError::Unbounded,
            other => SphericalError::Poly(other),
        })
    }

    /// Character-space image of a polytope point through the root-system
    /// link: `kappa_char + embedding . (mu - kappa)`.
    pub fn character_point(&self, mu: &RatVec) -> Result<RatVec, SphericalError> {
        let link = self
            .root_system
            .as_ref()
            .ok_or(SphericalError::MissingRootSystem)?;
        let offset = mu - &self.kappa;
        let mut out = link.kappa_char.clone();
        for (col, coef) in link.embedding.iter().zip(offset.iter()) {
            out = &out + &col.scale(coef);
        }
        Ok(out)
    }

    /// The face of the moment polytope where the named G-stable divisors'
    /// inequalities hold with equality. Its normal cone must be exactly the
    /// cone spanned by those divisor vectors, as the toroidal picture
    /// demands; otherwise the set does not cut an orbit face.
    pub fn orbit_face(
        &self,
        orbit_divisors: &BTreeSet<String>,
    ) -> Result<FaceDescriptor, SphericalError> {
        for l in orbit_divisors {
            match self.divisor(l) {
                None => {
                    return Err(SphericalError::InfeasibleOrbit(format!(
                        "unknown divisor label {l}"
                    )))
                }
                Some(d) if !d.g_stable => {
                    return Err(SphericalError::InfeasibleOrbit(format!(
                        "divisor {l} is not G-stable"
                    )))
                }
                _ => {}
            }
        }
        let pol = self.moment_polytope()?;
        let eq_indices: BTreeSet<usize> = pol
            .halfspaces()
            .iter()
            .enumerate()
            .filter(|(_, h)| {
                orbit_divisors.iter().any(|l| {
                    let d = self.divisor(l).unwrap();
                    let offset = d.v.dot(&self.kappa) - Rat::from_integer(d.m.into());
                    Halfspace::new(d.v.clone(), offset).primitive_eq(h)
                })
            })
            .map(|(j, _)| j)
            .collect();
        if eq_indices.len() < orbit_divisors.len() {
            return Err(SphericalError::InfeasibleOrbit(
                "some divisor inequality is redundant in the polytope".into(),
            ));
        }
        let face = pol
            .face_from_equalities(&eq_indices)
            .ok_or_else(|| SphericalError::InfeasibleOrbit("equality system cuts the polytope empty".into()))?;
        let expected = Cone::from_generators(
            orbit_divisors
                .iter()
                .map(|l| self.divisor(l).unwrap().v.clone())
                .collect::<Vec<_>>(),
            self.rank,
        );
        if pol.normal_cone(&face) != expected {
            return Err(SphericalError::InfeasibleOrbit(format!(
                "normal cone of the cut face is not the cone on {orbit_divisors:?}"
            )));
        }
        Ok(face)
    }
}

impl Halfspace {
    fn primitive_eq(&self, other: &Halfspace) -> bool {
        let mut a = self.normal.0.clone();
        a.push(self.offset.clone());
        let mut b = other.normal.0.clone();
        b.push(other.offset.clone());
        RatVec(a).primitive() == RatVec(b).primitive()
    }
}

/// Result of checking a candidate toroidal fan against the moment polytope.
#[derive(Clone, Debug, Serialize)]
pub struct ToroidalFanReport {
    /// per fan cone: the face of the polytope realizing it as a normal
    /// cone, when one exists
    pub cone_matches: Vec<ConeMatch>,
    pub all_cones_realized: bool,
    pub inside_valuation_cone: bool,
    /// fan covers the whole valuation cone
    pub complete: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeMatch {
    pub cone_index: usize,
    pub cone_dim: usize,
    pub matched_face: Option<FaceDescriptor>,
}

impl ToroidalFanReport {
    pub fn verified(&self) -> bool {
        self.all_cones_realized && self.inside_valuation_cone
    }
}

/// Checks that every fan cone appears as the normal cone of a face of the
/// moment polytope, that the fan sits inside the valuation cone, and
/// whether it covers it. Fan rays must be G-stable divisor vectors.
pub fn verify_toroidal_normal_fan(
    d: &SphericalDatum,
    fan: &Fan,
) -> Result<ToroidalFanReport, SphericalError> {
    let g_dirs: Vec<RatVec> = d
        .g_stable_divisors()
        .iter()
        .map(|r| r.v.primitive())
        .collect();
    for c in fan.cones() {
        for ray in c.rays() {
            if !g_dirs.contains(&ray.primitive()) {
                return Err(SphericalError::NotToroidal(format!("{ray:?}")));
            }
        }
        if !c.lineality().is_empty() {
            return Err(SphericalError::NotToroidal(
                "fan cone with lineality".into(),
            ));
        }
    }
    fan.validate()?;

    let pol = d.moment_polytope()?;
    let faces = if pol.is_empty() {
        vec![]
    } else {
        pol.face_lattice()?
    };
    let val = d.valuation_cone();
    let mut matches = Vec::new();
    let mut all = true;
    for (i, c) in fan.cones().iter().enumerate() {
        let found = faces.iter().find(|f| &pol.normal_cone(f) == c).cloned();
        if found.is_none() {
            all = false;
        }
        matches.push(ConeMatch {
            cone_index: i,
            cone_dim: c.dim(),
            matched_face: found,
        });
    }
    let inside = fan.cones().iter().all(|c| val.contains_cone(c));
    let complete = if inside {
        fan_covers_cone(fan, &val)?
    } else {
        false
    };
    Ok(ToroidalFanReport {
        cone_matches: matches,
        all_cones_realized: all,
        inside_valuation_cone: inside,
        complete,
    })
}

/// The orbit-space model: the moment polytope with the faces whose normal
/// cones lie in the toroidal fan removed. What is left is a topological
/// model of the orbit space, carrying the same stratification data.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitSpaceModel {
    pub polytope: Polytope,
    pub removed_faces: Vec<FaceDescriptor>,
    pub retained_faces: Vec<FaceDescriptor>,
}

pub fn orbit_space_model(
    d: &SphericalDatum,
    fan: &Fan,
) -> Result<OrbitSpaceModel, SphericalError> {
    let report = verify_toroidal_normal_fan(d, fan)?;
    if !report.verified() {
        return Err(SphericalError::VerificationFailed(
            if report.inside_valuation_cone {
                "a fan cone is not realized as a normal cone".into()
            } else {
                "fan leaves the valuation cone".into()
            },
        ));
    }
    if !report.complete {
        return Err(SphericalError::IncompleteFan);
    }
    let pol = d.moment_polytope()?;
    let faces = pol.face_lattice()?;
    let mut removed = Vec::new();
    let mut retained = Vec::new();
    for f in faces {
        let nc = pol.normal_cone(&f);
        if !nc.is_zero_cone() && fan.contains_cone(&nc) {
            removed.push(f);
        } else {
            retained.push(f);
        }
    }
    Ok(OrbitSpaceModel {
        polytope: pol,
        removed_faces: removed,
        retained_faces: retained,
    })
}

/// Per-face stratification data: the divisors active at the face, the chart
/// complement, and the parabolic/Levi root sets at the face's interior
/// point. `type_key` hashes (active labels, Levi roots), so faces with the
/// same combinatorial type share a key.
#[derive(Clone, Debug, Serialize)]
pub struct StratificationReport {
    pub face: FaceDescriptor,
    pub active_b_divisors: BTreeSet<String>,
    /// divisors removed to form the affine chart around the fiber: strict
    /// inequality and not G-stable (G-stable divisors do not meet the open
    /// orbit)
    pub chart_complement: BTreeSet<String>,
    pub parabolic_roots: Vec<RatVec>,
    pub levi_roots: Vec<RatVec>,
    pub type_key: String,
}

/// Positions of a report relative to the two degenerate satellite
/// situations: the full-group chart (weight orthogonal to all roots) and
/// the open-chart case (no active divisors).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SatelliteHint {
    /// parabolic contains every root: the stabilizer degenerates to (a
    /// maximal compact of) the generic stabilizer itself
    pub general: bool,
    /// no active divisors: the fiber sits in the open chart and the
    /// stabilizer is the most degenerate satellite's compact form
    pub most_degenerate: bool,
}

impl StratificationReport {
    pub fn satellite_hint(&self, rs: &RootSystem) -> SatelliteHint {
        SatelliteHint {
            general: self.parabolic_roots.len() == rs.roots().len(),
            most_degenerate: self.active_b_divisors.is_empty(),
        }
    }
}

pub fn stratification_report(
    d: &SphericalDatum,
    model: &OrbitSpaceModel,
    face: &FaceDescriptor,
) -> Result<StratificationReport, SphericalError> {
    if model.removed_faces.iter().any(|f| f == face) {
        return Err(SphericalError::RemovedFace);
    }
    if !model.retained_faces.iter().any(|f| f == face) {
        return Err(SphericalError::UnknownFace);
    }
    let link = d
        .root_system
        .as_ref()
        .ok_or(SphericalError::MissingRootSystem)?;
    let mu = &face.relative_interior_point;

    let mut active = BTreeSet::new();
    let mut chart = BTreeSet::new();
    for rec in &d.divisors {
        let lhs = rec.v.dot(&(mu - &d.kappa));
        let rhs = -Rat::from_integer(rec.m.into());
        if lhs == rhs {
            active.insert(rec.label.clone());
        } else if !rec.g_stable {
            chart.insert(rec.label.clone());
        }
    }

    let chi = d.character_point(mu)?;
    let rs = &link.root_system;
    let par_idx = parabolic_roots(rs, &chi);
    let levi_idx = levi_roots(rs, &chi);
    let par: Vec<RatVec> = par_idx.iter().map(|&i| rs.roots()[i].clone()).collect();
    let levi: Vec<RatVec> = levi_idx.iter().map(|&i| rs.roots()[i].clone()).collect();

    Ok(StratificationReport {
        face: face.clone(),
        type_key: type_key(&active, &levi),
        active_b_divisors: active,
        chart_complement: chart,
        parabolic_roots: par,
        levi_roots: levi,
    })
}

fn type_key(active: &BTreeSet<String>, levi: &[RatVec]) -> String {
    let mut levi_sorted: Vec<String> = levi.iter().map(|v| format!("{v:?}")).collect();
    levi_sorted.sort();
    let canonical = format!(
        "active=[{}];levi=[{}]",
        active.iter().cloned().collect::<Vec<_>>().join(","),
        levi_sorted.join(",")
    );
    let digest = Sha256::digest(canonical.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Stable content hash of a datum (over its canonical JSON form).
pub fn datum_hash(d: &SphericalDatum) -> String {
    let json = serde_json::to_string(d).expect("datum serializes");
    let digest = Sha256::digest(json.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn iv(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    fn rec(label: &str, v: &[i64], m: u64, g: bool) -> DivisorRecord {
        DivisorRecord {
            label: label.into(),
            v: iv(v),
            m,
            g_stable: g,
        }
    }

    /// Toy rank-2 datum: triangle moment polytope, one G-stable divisor on
    /// the hypotenuse, valuation cone = negative quadrant.
    fn toy_triangle() -> SphericalDatum {
        SphericalDatum::new(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1])],
            RatVec::zeros(2),
            vec![
                rec("c1", &[1, 0], 1, false),
                rec("c2", &[0, 1], 1, false),
                rec("b3", &[-1, -1], 0, true),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn valuation_cone_shapes() {
        // quadrant datum
        let d = toy_triangle();
        let val = d.valuation_cone();
        assert_eq!(val.rays(), &[iv(&[-1, 0]), iv(&[0, -1])]);
        assert_eq!(val.facet_normals().len(), 2);
        assert!(!d.is_horospherical());

        // horospherical: whole space
        let h = SphericalDatum::new(2, vec![], RatVec::zeros(2), vec![], None).unwrap();
        assert!(h.is_horospherical());
        assert!(h.valuation_cone().is_full_space());

        // rank 0: zero space
        let f = SphericalDatum::new(0, vec![], RatVec::zeros(0), vec![], None).unwrap();
        let v0 = f.valuation_cone();
        assert_eq!(v0.ambient_rank(), 0);
        assert_eq!(v0.dim(), 0);
    }

    #[test]
    fn cosimplicial_by_construction() {
        let d = toy_triangle();
        let val = d.valuation_cone();
        // number of facets = number of spherical roots, facet normals are
        // exactly the negated spherical roots
        assert_eq!(val.facet_normals().len(), d.spherical_roots.len());
        for s in &d.spherical_roots {
            assert!(val.facet_normals().contains(&-s));
        }
    }

    #[test]
    fn g_stable_vector_must_lie_in_valuation_cone() {
        let bad = SphericalDatum::new(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1])],
            RatVec::zeros(2),
            vec![rec("b", &[1, 1], 1, true)],
            None,
        );
        assert!(matches!(bad, Err(SphericalError::InvalidDatum(_))));
    }

    #[test]
    fn toy_moment_polytope_is_triangle() {
        let d = toy_triangle();
        let pol = d.moment_polytope().unwrap();
        assert_eq!(
            pol.vertices(),
            &[iv(&[-1, -1]), iv(&[-1, 1]), iv(&[1, -1])]
        );
    }

    #[test]
    fn rank_zero_polytope_is_kappa() {
        let f = SphericalDatum::new(
            0,
            vec![],
            RatVec::zeros(0),
            vec![DivisorRecord {
                label: "schubert".into(),
                v: RatVec::zeros(0),
                m: 1,
                g_stable: false,
            }],
            None,
        )
        .unwrap();
        let pol = f.moment_polytope().unwrap();
        assert_eq!(pol.vertices(), &[RatVec::zeros(0)]);
    }

    #[test]
    fn dilation_equivariance() {
        let d = toy_triangle();
        let pol = d.moment_polytope().unwrap();
        for n in 2..=5u64 {
            let scaled = SphericalDatum::new(
                2,
                d.spherical_roots.clone(),
                d.kappa.clone(),
                d.divisors
                    .iter()
                    .map(|r| DivisorRecord {
                        label: r.label.clone(),
                        v: r.v.clone(),
                        m: r.m * n,
                        g_stable: r.g_stable,
                    })
                    .collect(),
                None,
            )
            .unwrap();
            let spol = scaled.moment_polytope().unwrap();
            let factor = rat(n as i64);
            let dilated: Vec<RatVec> = pol
                .vertices()
                .iter()
                .map(|v| {
                    // dilation about kappa = 0
                    v.scale(&factor)
                })
                .collect();
            let mut dilated = dilated;
            dilated.sort();
            assert_eq!(spol.vertices(), &dilated[..]);
        }
    }

    #[test]
    fn unbounded_detected() {
        let d = SphericalDatum::new(
            2,
            vec![],
            RatVec::zeros(2),
            vec![rec("a", &[1, 0], 1, false)],
            None,
        )
        .unwrap();
        assert!(matches!(
            d.moment_polytope(),
            Err(SphericalError::Unbounded)
        ));
    }

    #[test]
    fn orbit_face_on_toy_triangle() {
        let d = toy_triangle();
        // the G-stable divisor cuts the hypotenuse edge
        let face = d
            .orbit_face(&BTreeSet::from(["b3".to_string()]))
            .unwrap();
        assert_eq!(face.dimension, 1);
        let pol = d.moment_polytope().unwrap();
        let vs = pol.face_vertices(&face);
        let pts: Vec<&RatVec> = vs.iter().map(|&i| &pol.vertices()[i]).collect();
        assert_eq!(pts, vec![&iv(&[-1, 1]), &iv(&[1, -1])]);

        // empty set: the whole polytope
        let whole = d.orbit_face(&BTreeSet::new()).unwrap();
        assert_eq!(whole.dimension, 2);

        // non-G-stable label rejected
        assert!(matches!(
            d.orbit_face(&BTreeSet::from(["c1".to_string()])),
            Err(SphericalError::InfeasibleOrbit(_))
        ));
    }

    #[test]
    fn verify_fan_on_toy_triangle() {
        let d = toy_triangle();
        let ray = Cone::from_generators(vec![iv(&[-1, -1])], 2);
        let fan = Fan::face_fan_of_cone(&ray);
        let report = verify_toroidal_normal_fan(&d, &fan).unwrap();
        assert!(report.verified());
        assert!(report.inside_valuation_cone);
        assert!(!report.complete); // one ray cannot cover the quadrant

        // a fan whose ray is not a G-stable divisor vector
        let alien = Fan::face_fan_of_cone(&Cone::from_generators(vec![iv(&[-1, 0])], 2));
        assert!(matches!(
            verify_toroidal_normal_fan(&d, &alien),
            Err(SphericalError::NotToroidal(_))
        ));
    }

    #[test]
    fn orbit_space_requires_complete_fan() {
        let d = toy_triangle();
        let ray = Cone::from_generators(vec![iv(&[-1, -1])], 2);
        let fan = Fan::face_fan_of_cone(&ray);
        assert!(matches!(
            orbit_space_model(&d, &fan),
            Err(SphericalError::IncompleteFan)
        ));
    }

    /// Rank-2 datum whose fan has three rays covering the valuation cone
    /// (the negative quadrant): a pentagon moment polytope with a connected
    /// removed boundary arc.
    pub fn pentagon() -> (SphericalDatum, Fan) {
        let d = SphericalDatum::new(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1])],
            RatVec::zeros(2),
            vec![
                rec("c1", &[1, 0], 2, false),
                rec("c2", &[0, 1], 2, false),
                rec("b1", &[-1, 0], 2, true),
                rec("b2", &[0, -1], 2, true),
                rec("b3", &[-1, -1], 3, true),
            ],
            None,
        )
        .unwrap();
        let c1 = Cone::from_generators(vec![iv(&[-1, 0]), iv(&[-1, -1])], 2);
        let c2 = Cone::from_generators(vec![iv(&[-1, -1]), iv(&[0, -1])], 2);
        let mut cones = c1.faces();
        cones.extend(c2.faces());
        (d, Fan::new(cones, 2))
    }

    #[test]
    fn pentagon_orbit_space() {
        let (d, fan) = pentagon();
        let report = verify_toroidal_normal_fan(&d, &fan).unwrap();
        assert!(report.verified());
        assert!(report.complete);

        let model = orbit_space_model(&d, &fan).unwrap();
        let pol = &model.polytope;
        assert_eq!(pol.vertices().len(), 5);
        // removed: 3 boundary edges + 2 vertices between them
        assert_eq!(model.removed_faces.len(), 5);
        assert_eq!(
            model.removed_faces.iter().filter(|f| f.dimension == 1).count(),
            3
        );
        // retained: whole + 2 edges + 3 vertices
        assert_eq!(model.retained_faces.len(), 6);

        // every retained proper face has normal cone not inside any fan cone
        for f in &model.retained_faces {
            let nc = pol.normal_cone(f);
            if nc.is_zero_cone() {
                continue;
            }
            assert!(
                !fan.cones().iter().any(|c| c.contains_cone(&nc)),
                "retained face {f:?} has normal cone inside the fan"
            );
        }
        // removed faces' normal cones are exactly the nonzero fan cones
        let mut removed_ncs: Vec<Cone> = model
            .removed_faces
            .iter()
            .map(|f| pol.normal_cone(f))
            .collect();
        removed_ncs.sort_by_key(|c| (c.dim(), c.rays().to_vec()));
        let mut fan_ncs: Vec<Cone> = fan
            .cones()
            .iter()
            .filter(|c| !c.is_zero_cone())
            .cloned()
            .collect();
        fan_ncs.sort_by_key(|c| (c.dim(), c.rays().to_vec()));
        assert_eq!(removed_ncs, fan_ncs);
    }

    #[test]
    fn horospherical_removes_all_proper_faces() {
        // square datum with no spherical roots, fan = full normal fan
        let d = SphericalDatum::new(
            2,
            vec![],
            RatVec::zeros(2),
            vec![
                rec("f0", &[1, 0], 1, true),
                rec("f1", &[0, 1], 1, true),
                rec("f2", &[-1, 0], 1, true),
                rec("f3", &[0, -1], 1, true),
            ],
            None,
        )
        .unwrap();
        let pol = d.moment_polytope().unwrap();
        let mut cones: Vec<Cone> = pol
            .face_lattice()
            .unwrap()
            .iter()
            .map(|f| pol.normal_cone(f))
            .collect();
        cones.sort_by_key(|c| (c.dim(), c.rays().to_vec()));
        cones.dedup();
        let fan = Fan::new(cones, 2);
        let model = orbit_space_model(&d, &fan).unwrap();
        assert_eq!(model.retained_faces.len(), 1);
        assert_eq!(model.retained_faces[0].dimension, 2);
        assert_eq!(model.removed_faces.len(), 8);
    }

    #[test]
    fn stratification_on_pentagon() {
        let (mut d, fan) = pentagon();
        // attach a torus link so pairings are defined (no roots: all trivial)
        d.root_system = Some(RootSystemLink {
            root_system: RootSystem::torus(2),
            embedding: vec![iv(&[1, 0]), iv(&[0, 1])],
            kappa_char: RatVec::zeros(2),
        });
        let model = orbit_space_model(&d, &fan).unwrap();
        let interior = model
            .retained_faces
            .iter()
            .find(|f| f.dimension == 2)
            .unwrap();
        let rep = stratification_report(&d, &model, interior).unwrap();
        assert!(rep.active_b_divisors.is_empty());
        assert_eq!(
            rep.chart_complement,
            BTreeSet::from(["c1".to_string(), "c2".to_string()])
        );
        let hint = rep.satellite_hint(&RootSystem::torus(2));
        assert!(hint.most_degenerate);
        assert!(hint.general); // torus: no roots at all

        // a removed face is rejected
        let removed = &model.removed_faces[0];
        assert!(matches!(
            stratification_report(&d, &model, removed),
            Err(SphericalError::RemovedFace)
        ));

        // retained boundary vertex: active divisors appear
        let v = model
            .retained_faces
            .iter()
            .find(|f| f.dimension == 0 && f.relative_interior_point == iv(&[-2, -2]))
            .unwrap();
        let rep_v = stratification_report(&d, &model, v).unwrap();
        assert_eq!(
            rep_v.active_b_divisors,
            BTreeSet::from(["c1".to_string(), "c2".to_string()])
        );
        assert_ne!(rep_v.type_key, rep.type_key);
    }

    #[test]
    fn type_key_depends_only_on_active_and_levi() {
        let a = BTreeSet::from(["x".to_string()]);
        let l = vec![iv(&[1, -1])];
        assert_eq!(type_key(&a, &l), type_key(&a, &l));
        assert_ne!(type_key(&a, &l), type_key(&BTreeSet::new(), &l));
    }

    #[test]
    fn datum_serde_round_trip() {
        let (d, _) = pentagon();
        let json = serde_json::to_string_pretty(&d).unwrap();
        let back: SphericalDatum = serde_json::from_str(&json).unwrap();
        assert_eq!(d, back);
        assert_eq!(datum_hash(&d), datum_hash(&back));
    }
}
