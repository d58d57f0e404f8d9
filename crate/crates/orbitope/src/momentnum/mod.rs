//! Floating-point engine: projective moment maps, the invariant (Kirwan)
//! map, the toric moment parametrization and its convex inversion,
//! Kempf–Ness norm-square minimization, and SVD-based Cartan decomposition.
//!
//! Everything is stateless; tolerances travel in a [`NumericConfig`] and all
//! randomness is injected by callers through explicit seeds.

mod cartan;
mod kempf;
mod rep;
mod toric;

pub use cartan::{cartan_decompose, CartanDecomposition, GroupTag, MatrixGroupElement};
pub use kempf::{kempf_ness_minimize, kempf_ness_minimize_from, KempfNessOutcome};
pub use rep::{kirwan, moment_map, su2_algebra_basis, CMat, CVec, CompactRep, KirwanValue, C64};
pub use toric::{invert_toric_moment, toric_moment, InversionResult, WeightedVector};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum NumError {
    #[error("zero vector")]
    ZeroVector,
    #[error("target lies on or outside the weight hull")]
    BoundaryPoint,
    #[error("weights are affinely degenerate and the target leaves their affine hull")]
    RankDeficient,
    #[error("matrix determinant differs from 1 by {0:.3e}")]
    NotUnimodular(f64),
    #[error("action matrix #{0} is not anti-Hermitian within tolerance")]
    NotAntiHermitian(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Tolerances and guards for the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericConfig {
    /// target residual for moment equations
    pub residual_tol: f64,
    /// iteration cap for Newton-type solves
    pub max_newton_iters: usize,
    /// parameter norm past which a flow counts as divergent
    pub divergence_norm: f64,
    /// singular-value threshold for numerical ranks
    pub rank_tol: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            residual_tol: 1e-9,
            max_newton_iters: 50,
            divergence_norm: 1e6,
            rank_tol: 1e-8,
        }
    }
}

impl NumericConfig {
    pub fn validate(&self) -> Result<(), NumError> {
        if self.residual_tol <= 0.0
            || self.divergence_norm <= 0.0
            || self.rank_tol <= 0.0
            || self.max_newton_iters == 0
        {
            return Err(NumError::Invalid("config values must be positive".into()));
        }
        Ok(())
    }
}
