//! Bounded rational polytopes: vertex enumeration, face lattices, normal
//! cones (minimizing convention) and exact volumes.

use crate::polycore::cone::Cone;
use crate::polycore::dd::extreme_rays;
use crate::polycore::PolyError;
use crate::rat::{affine_rank, rat, Rat, RatMat, RatVec};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;

/// One inequality `normal . x >= offset`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: RatVec,
    #[serde(serialize_with = "crate::rat::serialize_rat")]
    #[serde(deserialize_with = "crate::rat::deserialize_rat")]
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: RatVec, offset: Rat) -> Halfspace {
        Halfspace { normal, offset }
    }

    /// Scales to a primitive integer normal form (unique representative).
    fn primitive(&self) -> Halfspace {
        let mut v = self.normal.0.clone();
        v.push(self.offset.clone());
        let p = RatVec(v).primitive();
        let n = p.len();
        Halfspace {
            normal: RatVec(p.0[..n - 1].to_vec()),
            offset: p.0[n - 1].clone(),
        }
    }

    pub fn eval(&self, x: &RatVec) -> Rat {
        self.normal.dot(x) - &self.offset
    }
}

/// A face of a polytope, identified by the exact set of halfspaces tight on
/// it, together with its dimension and an interior witness point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FaceDescriptor {
    pub active_halfspace_indices: BTreeSet<usize>,
    pub dimension: usize,
    pub relative_interior_point: RatVec,
}

/// A bounded polytope `{x : normal_j . x >= offset_j}` with enumerated
/// vertices. Construction rejects unbounded systems; the empty polytope is a
/// legal value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polytope {
    ambient_rank: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<RatVec>,
}

impl Polytope {
    /// Builds from inequalities, reducing to an irredundant system:
    /// affine-hull equalities are kept, each remaining halfspace must be
    /// tight on a facet, and exact duplicates collapse.
    pub fn from_halfspaces(
        halfspaces: Vec<Halfspace>,
        ambient_rank: usize,
    ) -> Result<Polytope, PolyError> {
        for h in &halfspaces {
            assert_eq!(h.normal.len(), ambient_rank);
        }
        let mut hs: Vec<Halfspace> = halfspaces.iter().map(Halfspace::primitive).collect();
        hs.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
        hs.dedup();

        let vertices = enumerate_vertices(&hs, ambient_rank)?;
        if vertices.is_empty() {
            return Ok(Polytope {
                ambient_rank,
                halfspaces: hs,
                vertices,
            });
        }
        let dim = affine_rank(&vertices, ambient_rank);
        let keep: Vec<Halfspace> = hs
            .into_iter()
            .filter(|h| {
                let tight: Vec<RatVec> = vertices
                    .iter()
                    .filter(|v| h.eval(v).is_zero())
                    .cloned()
                    .collect();
                if tight.len() == vertices.len() {
                    return true; // affine-hull equality
                }
                if tight.is_empty() {
                    return false;
                }
                dim >= 1 && affine_rank(&tight, ambient_rank) == dim - 1
            })
            .collect();
        Ok(Polytope {
            ambient_rank,
            halfspaces: keep,
            vertices,
        })
    }

    /// Convex hull of a point set.
    pub fn from_points(points: &[RatVec], ambient_rank: usize) -> Result<Polytope, PolyError> {
        if points.is_empty() {
            return Ok(Polytope {
                ambient_rank,
                halfspaces: vec![],
                vertices: vec![],
            });
        }
        // homogenize: the hull's inequalities are the dual rays of the cone
        // over the lifted points (p_i, 1)
        let lifted: Vec<RatVec> = points
            .iter()
            .map(|p| {
                let mut v = p.0.clone();
                v.push(rat(1));
                RatVec(v)
            })
            .collect();
        let (dual_rays, dual_lin) = extreme_rays(&lifted, ambient_rank + 1);
        let mut hs: Vec<Halfspace> = Vec::new();
        let mut push = |v: &RatVec| {
            let n = v.len();
            hs.push(Halfspace::new(
                RatVec(v.0[..n - 1].to_vec()),
                -v.0[n - 1].clone(),
            ));
        };
        for r in &dual_rays {
            push(r);
        }
        for l in &dual_lin {
            push(l);
            push(&-l);
        }
        // a single point has an empty inequality set in ambient rank 0
        if hs.is_empty() && ambient_rank == 0 {
            hs.push(Halfspace::new(RatVec::zeros(0), rat(0)));
        }
        Polytope::from_halfspaces(hs, ambient_rank)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        affine_rank(&self.vertices, self.ambient_rank)
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.halfspaces.iter().all(|h| h.eval(x) >= Rat::zero())
    }

    /// Strict interior relative to the affine hull.
    pub fn contains_in_relative_interior(&self, x: &RatVec) -> bool {
        self.halfspaces.iter().all(|h| {
            let val = h.eval(x);
            if self.is_equality(h) {
                val.is_zero()
            } else {
                val > Rat::zero()
            }
        })
    }

    fn is_equality(&self, h: &Halfspace) -> bool {
        self.vertices.iter().all(|v| h.eval(v).is_zero())
    }

    pub fn centroid(&self) -> RatVec {
        assert!(!self.is_empty());
        let sum = self
            .vertices
            .iter()
            .fold(RatVec::zeros(self.ambient_rank), |acc, v| &acc + v);
        let n = rat(self.vertices.len() as i64);
        sum.scale(&n.recip())
    }

    /// All faces of all dimensions (the empty face excluded, the polytope
    /// itself included), ordered by dimension then by active set.
    pub fn face_lattice(&self) -> Result<Vec<FaceDescriptor>, PolyError> {
        if self.is_empty() {
            return Err(PolyError::EmptyPolytope);
        }
        let mut faces: Vec<FaceDescriptor> = self
            .face_vertex_sets()
            .into_iter()
            .map(|vs| self.descriptor_for(&vs))
            .collect();
        faces.sort_by_key(|f| {
            (
                f.dimension,
                f.active_halfspace_indices
                    .iter()
                    .cloned()
                    .collect::<Vec<_>>(),
            )
        });
        Ok(faces)
    }

    /// Distinct nonempty vertex sets of faces: intersections of the
    /// per-halfspace tight sets, closed under intersection.
    fn face_vertex_sets(&self) -> Vec<BTreeSet<usize>> {
        let all: BTreeSet<usize> = (0..self.vertices.len()).collect();
        let per_hs: Vec<BTreeSet<usize>> = self
            .halfspaces
            .iter()
            .map(|h| {
                (0..self.vertices.len())
                    .filter(|&i| h.eval(&self.vertices[i]).is_zero())
                    .collect()
            })
            .collect();
        let mut sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        sets.insert(all.clone());
        let mut frontier = vec![all];
        while let Some(s) = frontier.pop() {
            for t in &per_hs {
                let inter: BTreeSet<usize> = s.intersection(t).cloned().collect();
                if !inter.is_empty() && sets.insert(inter.clone()) {
                    frontier.push(inter);
                }
            }
        }
        sets.into_iter().collect()
    }

    fn descriptor_for(&self, vertex_set: &BTreeSet<usize>) -> FaceDescriptor {
        let pts: Vec<RatVec> = vertex_set.iter().map(|&i| self.vertices[i].clone()).collect();
        let active: BTreeSet<usize> = (0..self.halfspaces.len())
            .filter(|&j| pts.iter().all(|p| self.halfspaces[j].eval(p).is_zero()))
            .collect();
        let sum = pts
            .iter()
            .fold(RatVec::zeros(self.ambient_rank), |acc, v| &acc + v);
        let rel = sum.scale(&rat(pts.len() as i64).recip());
        FaceDescriptor {
            active_halfspace_indices: active,
            dimension: affine_rank(&pts, self.ambient_rank),
            relative_interior_point: rel,
        }
    }

    /// Vertex indices lying on a face.
    pub fn face_vertices(&self, face: &FaceDescriptor) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| {
                face.active_halfspace_indices
                    .iter()
                    .all(|&j| self.halfspaces[j].eval(&self.vertices[i]).is_zero())
            })
            .collect()
    }

    /// The face cut out by requiring equality on the given halfspaces, if
    /// nonempty.
    pub fn face_from_equalities(&self, eq: &BTreeSet<usize>) -> Option<FaceDescriptor> {
        let vs: BTreeSet<usize> = (0..self.vertices.len())
            .filter(|&i| {
                eq.iter()
                    .all(|&j| self.halfspaces[j].eval(&self.vertices[i]).is_zero())
            })
            .collect();
        if vs.is_empty() {
            None
        } else {
            Some(self.descriptor_for(&vs))
        }
    }

    /// Smallest face whose relative interior contains `x` (if `x` is in the
    /// polytope).
    pub fn face_of_point(&self, x: &RatVec) -> Option<FaceDescriptor> {
        if !self.contains(x) {
            return None;
        }
        let eq: BTreeSet<usize> = (0..self.halfspaces.len())
            .filter(|&j| self.halfspaces[j].eval(x).is_zero())
            .collect();
        self.face_from_equalities(&eq)
    }

    /// Normal cone of a face under the minimizing convention: the set of
    /// directions whose minimum over the polytope is attained exactly on the
    /// face's closure, i.e. the cone spanned by the active inward normals.
    pub fn normal_cone(&self, face: &FaceDescriptor) -> Cone {
        Cone::from_generators(
            face.active_halfspace_indices
                .iter()
                .map(|&j| self.halfspaces[j].normal.clone())
                .collect::<Vec<_>>(),
            self.ambient_rank,
        )
    }

    /// Exact volume of a full-dimensional polytope via a recursive
    /// triangulation of the face lattice.
    pub fn volume(&self) -> Result<Rat, PolyError> {
        if self.is_empty() {
            return Ok(Rat::zero());
        }
        let d = self.ambient_rank;
        if self.dim() < d {
            return Ok(Rat::zero());
        }
        if d == 0 {
            return Ok(rat(1));
        }
        let faces = self.face_lattice()?;
        let face_sets: Vec<(usize, BTreeSet<usize>)> = faces
            .iter()
            .map(|f| (f.dimension, self.face_vertices(f).into_iter().collect()))
            .collect();
        let top: BTreeSet<usize> = (0..self.vertices.len()).collect();
        let simplices = self.triangulate(&top, d, &face_sets);
        let mut vol = Rat::zero();
        let dfact: Rat = (1..=d as i64).fold(rat(1), |acc, k| acc * rat(k));
        for s in simplices {
            let base = &self.vertices[s[0]];
            let rows: Vec<RatVec> = s[1..].iter().map(|&i| &self.vertices[i] - base).collect();
            let det = RatMat::from_rows(rows, d).det();
            vol = vol + det.abs() / dfact.clone();
        }
        Ok(vol)
    }

    /// Simplices (as vertex index lists) triangulating the face with the
    /// given vertex set and dimension.
    fn triangulate(
        &self,
        vset: &BTreeSet<usize>,
        dim: usize,
        face_sets: &[(usize, BTreeSet<usize>)],
    ) -> Vec<Vec<usize>> {
        if vset.len() == dim + 1 {
            return vec![vset.iter().cloned().collect()];
        }
        let apex = *vset.iter().next().unwrap();
        let mut out = Vec::new();
        // ridges of this face: maximal proper subfaces
        for (fd, fs) in face_sets {
            if *fd + 1 == dim && fs.is_subset(vset) && !fs.contains(&apex) {
                for mut simplex in self.triangulate(fs, dim - 1, face_sets) {
                    simplex.insert(0, apex);
                    out.push(simplex);
                }
            }
        }
        out
    }
}

fn enumerate_vertices(hs: &[Halfspace], ambient: usize) -> Result<Vec<RatVec>, PolyError> {
    // homogenize into a cone in rank+1: (normal, -offset) and t >= 0
    let mut constraints: Vec<RatVec> = hs
        .iter()
        .map(|h| {
            let mut v = h.normal.0.clone();
            v.push(-h.offset.clone());
            RatVec(v)
        })
        .collect();
    constraints.push(RatVec::unit(ambient + 1, ambient));
    let (rays, lineality) = extreme_rays(&constraints, ambient + 1);
    if !lineality.is_empty() {
        return Err(PolyError::Unbounded);
    }
    let mut vertices = Vec::new();
    for r in rays {
        let t = r.0[ambient].clone();
        if t.is_zero() {
            return Err(PolyError::Unbounded);
        }
        let inv = t.recip();
        vertices.push(RatVec(r.0[..ambient].iter().map(|x| x * &inv).collect()));
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

/// Brute-force vertex oracle for tests: solve every square active subsystem
/// and keep feasible solutions.
#[doc(hidden)]
pub fn brute_vertices(hs: &[Halfspace], ambient: usize) -> Vec<RatVec> {
    let n = hs.len();
    let mut out: Vec<RatVec> = Vec::new();
    let masks = 1u64 << n.min(63);
    for mask in 0..masks {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if idx.len() != ambient {
            continue;
        }
        let a = RatMat::from_rows(idx.iter().map(|&i| hs[i].normal.clone()).collect(), ambient);
        let b = RatVec(idx.iter().map(|&i| hs[i].offset.clone()).collect());
        if a.rank() < ambient {
            continue;
        }
        if let Some(x) = a.solve(&b) {
            if hs.iter().all(|h| h.eval(&x) >= Rat::zero()) {
                out.push(x);
            }
        }
    }
    if ambient == 0 && hs.iter().all(|h| -h.offset.clone() >= Rat::zero()) {
        out.push(RatVec::zeros(0));
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Serialize, Deserialize)]
struct PolytopeWire {
    ambient_rank: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<RatVec>,
}

impl Serialize for Polytope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolytopeWire {
            ambient_rank: self.ambient_rank,
            halfspaces: self.halfspaces.clone(),
            vertices: self.vertices.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = PolytopeWire::deserialize(d)?;
        Polytope::from_halfspaces(wire.halfspaces, wire.ambient_rank)
            .map_err(serde::de::Error::custom)
    }
}
