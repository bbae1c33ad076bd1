//! Conic mixed-integer programming with subadditive duality.
//!
//! This crate solves small conic mixed-integer programs
//! `min c'x + d'y  s.t.  Ax + Gy >=_K b,  x integer,  y continuous`
//! over products of orthant, second-order and PSD cones, together with the
//! machinery around their subadditive duals:
//!
//! - [`cone`]: cone membership margins, projections and interior directions;
//! - [`model`]: the instance data model, the CMIP text format, relaxations,
//!   right-hand-side perturbations and two-block views;
//! - [`ipm`]: a homogeneous self-dual interior-point solver with
//!   Nesterov-Todd scaling, dual feasibility search and certificate
//!   verification;
//! - [`mip`]: enumeration-based mixed-integer solving, value functions and
//!   strict feasibility searches;
//! - [`dual`]: subadditive dual function representations, perturbed problem
//!   constructions, dual feasibility checking and cut generation;
//! - [`certify`]: the strong-duality condition catalog and verdicts;
//! - [`dirichlet`]: mixed lattices, Diophantine half-line searches, Dirichlet
//!   convex set probing and finiteness experiments;
//! - [`builtin`]: embedded reference instances used by the CLI and tests.

pub mod builtin;
pub mod certify;
pub mod cone;
pub mod dirichlet;
pub mod dual;
mod error;
pub mod ipm;
pub mod linalg;
pub mod mip;
pub mod model;

pub use error::CoreError;
