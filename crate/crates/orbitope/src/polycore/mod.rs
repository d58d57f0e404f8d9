//! Exact-rational polyhedral geometry: cones, fans, polytopes, face
//! lattices and integer-lattice tools.
//!
//! All arithmetic is arbitrary-precision rational; every operation here is a
//! pure function on immutable values.

mod cone;
mod dd;
mod fan;
mod lattice;
mod polytope;

pub use cone::Cone;
pub use dd::{brute_extreme_rays, extreme_rays};
pub use fan::{fan_covers_cone, Fan, SmoothCheck};
pub use lattice::{complete_to_lattice_basis, lattice_saturation_defect, smith_normal_form, Snf};
pub use polytope::{brute_vertices, FaceDescriptor, Halfspace, Polytope};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("vectors do not extend to a lattice basis: invariant factor {invariant_factor}")]
    NotExtendable { invariant_factor: String },
    #[error("input vectors are not linearly independent")]
    NotIndependent,
    #[error("expected integer vector, got {0}")]
    NotIntegral(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("fan cone #{cone_index} leaves the target cone at ray {ray}")]
    FanNotInsideCone { cone_index: usize, ray: String },
    #[error("not a fan: {0}")]
    NotAFan(String),
}
