//! Polyhedral convex cones with exact dual descriptions.

use crate::polycore::dd::{canonical_basis, extreme_rays};
use crate::rat::{span_rank, Rat, RatVec};
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;

/// A rational polyhedral cone, stored in canonical form: primitive sorted
/// extreme rays modulo lineality, a canonical lineality basis, and an
/// irredundant inequality system (`facet_normals`, with +- pairs cutting the
/// linear span when the cone is not full-dimensional).
///
/// Two cones are equal as sets iff they are equal as values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<RatVec>,
    lineality: Vec<RatVec>,
    facet_normals: Vec<RatVec>,
}

impl Cone {
    /// Cone generated by the given vectors (possibly redundant).
    pub fn from_generators<I: IntoIterator<Item = RatVec>>(gens: I, ambient_rank: usize) -> Cone {
        let gens: Vec<RatVec> = gens
            .into_iter()
            .inspect(|g| assert_eq!(g.len(), ambient_rank))
            .filter(|g| !g.is_zero())
            .collect();
        let (dual_rays, dual_lin) = extreme_rays(&gens, ambient_rank);
        let normals = assemble_normals(dual_rays, dual_lin, ambient_rank);
        let (rays, lineality) = extreme_rays(&normals, ambient_rank);
        Cone {
            ambient_rank,
            rays,
            lineality,
            facet_normals: normals,
        }
    }

    /// Cone `{x : n . x >= 0}` for the given inequality normals.
    pub fn from_inequalities<I: IntoIterator<Item = RatVec>>(
        normals: I,
        ambient_rank: usize,
    ) -> Cone {
        let raw: Vec<RatVec> = normals
            .into_iter()
            .inspect(|n| assert_eq!(n.len(), ambient_rank))
            .filter(|n| !n.is_zero())
            .collect();
        let (rays, lineality) = extreme_rays(&raw, ambient_rank);
        // canonical irredundant normals from the generator side
        let gens: Vec<RatVec> = rays
            .iter()
            .chain(&lineality)
            .cloned()
            .chain(lineality.iter().map(|l| -l))
            .collect();
        let (dual_rays, dual_lin) = extreme_rays(&gens, ambient_rank);
        let facet_normals = assemble_normals(dual_rays, dual_lin, ambient_rank);
        Cone {
            ambient_rank,
            rays,
            lineality,
            facet_normals,
        }
    }

    pub fn zero(ambient_rank: usize) -> Cone {
        Cone::from_generators(vec![], ambient_rank)
    }

    pub fn full_space(ambient_rank: usize) -> Cone {
        Cone::from_inequalities(vec![], ambient_rank)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[RatVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[RatVec] {
        &self.lineality
    }

    pub fn facet_normals(&self) -> &[RatVec] {
        &self.facet_normals
    }

    /// Generating set: extreme rays plus +- the lineality basis.
    pub fn generators(&self) -> Vec<RatVec> {
        self.rays
            .iter()
            .cloned()
            .chain(self.lineality.iter().cloned())
            .chain(self.lineality.iter().map(|l| -l))
            .collect()
    }

    pub fn dim(&self) -> usize {
        let spanning: Vec<RatVec> = self.rays.iter().chain(&self.lineality).cloned().collect();
        span_rank(&spanning, self.ambient_rank)
    }

    pub fn is_zero_cone(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_full_space(&self) -> bool {
        self.facet_normals.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn contains(&self, v: &RatVec) -> bool {
        assert_eq!(v.len(), self.ambient_rank);
        self.facet_normals.iter().all(|n| n.dot(v) >= Rat::zero())
    }

    pub fn contains_in_relative_interior(&self, v: &RatVec) -> bool {
        // strict on facets, tight on the span-cutting pairs
        self.contains(v)
            && self.facet_normals.iter().all(|n| {
                let val = n.dot(v);
                !val.is_zero() || self.facet_normals.contains(&-n)
            })
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    /// A point in the relative interior (sum of the extreme rays).
    pub fn relative_interior_point(&self) -> RatVec {
        self.rays
            .iter()
            .fold(RatVec::zeros(self.ambient_rank), |acc, r| &acc + r)
    }

    /// All faces, including the cone itself and its minimal face.
    /// Ordered by dimension, then lexicographically by ray set.
    pub fn faces(&self) -> Vec<Cone> {
        // tight-ray sets of each facet normal, closed under intersection
        let ray_set: Vec<RatVec> = self.rays.clone();
        let all: BTreeSet<usize> = (0..ray_set.len()).collect();
        let mut sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        sets.insert(all.clone());
        let per_normal: Vec<BTreeSet<usize>> = self
            .facet_normals
            .iter()
            .map(|n| {
                (0..ray_set.len())
                    .filter(|&i| n.dot(&ray_set[i]).is_zero())
                    .collect()
            })
            .collect();
        let mut frontier: Vec<BTreeSet<usize>> = vec![all];
        while let Some(s) = frontier.pop() {
            for pn in &per_normal {
                let inter: BTreeSet<usize> = s.intersection(pn).cloned().collect();
                if sets.insert(inter.clone()) {
                    frontier.push(inter);
                }
            }
        }
        let mut faces: Vec<Cone> = sets
            .into_iter()
            .map(|s| {
                let gens: Vec<RatVec> = s
                    .iter()
                    .map(|&i| ray_set[i].clone())
                    .chain(self.lineality.iter().cloned())
                    .chain(self.lineality.iter().map(|l| -l))
                    .collect();
                Cone::from_generators(gens, self.ambient_rank)
            })
            .collect();
        faces.sort_by_key(|c| (c.dim(), c.rays.clone()));
        faces.dedup();
        faces
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.faces().iter().any(|f| f == self)
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        Cone::from_inequalities(
            self.facet_normals
                .iter()
                .chain(&other.facet_normals)
                .cloned()
                .collect::<Vec<_>>(),
            self.ambient_rank,
        )
    }
}

fn assemble_normals(dual_rays: Vec<RatVec>, dual_lin: Vec<RatVec>, ambient: usize) -> Vec<RatVec> {
    let lin = canonical_basis(dual_lin, ambient);
    let mut normals: Vec<RatVec> = dual_rays;
    for l in lin {
        normals.push(l.clone());
        normals.push(-&l);
    }
    normals.sort();
    normals.dedup();
    normals
}

#[derive(Serialize, Deserialize)]
struct ConeWire {
    ambient_rank: usize,
    generators: Vec<RatVec>,
    facet_normals: Vec<RatVec>,
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ConeWire {
            ambient_rank: self.ambient_rank,
            generators: self.generators(),
            facet_normals: self.facet_normals.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = ConeWire::deserialize(d)?;
        Ok(Cone::from_generators(wire.generators, wire.ambient_rank))
    }
}
