//! Numerical differential geometry of surface curves under conformal maps.
//!
//! The crate is organised bottom-up:
//!
//! * [`surface`] evaluates parametric patches, fundamental forms and
//!   Christoffel symbols.
//! * [`curve`] builds curves on patches, their Frenet apparatus, the
//!   osculating decomposition and normal/geodesic curvature.
//! * [`conformal`] represents correspondences between two patches over a
//!   shared domain and checks how curve quantities transform.
//! * [`geodesic`] integrates geodesics and evaluates geodesic residuals.
//! * [`verify`] runs declarative scenarios and renders reports.

// `!(x > y)` is used on purpose so that NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conformal;
pub mod curve;
pub mod error;
pub mod expr;
pub mod geodesic;
pub mod jet;
pub mod surface;
pub mod trace;
pub mod verify;

pub use error::{GeomError, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
