//! Quadric manifolds built from the normed division algebras ℝ, ℂ, ℍ, 𝕆.
//!
//! The pipeline runs algebra → simplex frame → variety → maps → topology:
//! [`algebra`] supplies Cayley–Dickson arithmetic, [`simplex`] the symmetric
//! frame `λ`, [`variety`] the defining equations, Jacobians, hull tests and
//! sampling, [`maps`] the correspondences between `Y`, `X` and the sphere,
//! and [`topology`] the predicted diffeomorphism types.

pub mod algebra;
pub mod cli;
pub mod formats;
pub mod maps;
pub mod simplex;
pub mod topology;
pub mod variety;
pub mod verify;

pub use algebra::{AlgebraDim, AlgebraElement, AlgebraError};
pub use simplex::{build_lambda, LambdaFrame, SimplexError};
pub use variety::{Field, PointX, PointY, TorusElement, VarietyError, VarietySpec};
