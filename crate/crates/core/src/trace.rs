//! Records which named operations were dispatched.
//!
//! The scenario runner uses this to prove that a scenario suite exercises
//! every geometric operation. Recording is off until [`enable`] is called,
//! so library users pay one relaxed atomic load per operation.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

static ENABLED: AtomicBool = AtomicBool::new(false);
static HITS: Mutex<BTreeSet<&'static str>> = Mutex::new(BTreeSet::new());

/// Operations whose results carry the geometric content of the library.
/// A coverage run must see every one of these.
pub const GEOMETRIC_OPS: &[&str] = &[
    "first_form",
    "surface_normal",
    "second_form",
    "metric_jet",
    "christoffel",
    "dot_product_identities",
    "curve_jet",
    "frenet",
    "binormal_expansion_check",
    "osculating_decompose",
    "is_osculating",
    "normal_curvature",
    "is_asymptotic",
    "geodesic_curvature_def",
    "geodesic_curvature_intrinsic",
    "dilation_field",
    "classify_map",
    "metric_derivative_relations",
    "christoffel_correction",
    "conformal_christoffel_check",
    "osculating_image_condition",
    "normal_component_relation",
    "tangential_component_relation",
    "geodesic_curvature_relation",
    "covariant_derivative_defect",
    "geodesic_rhs",
    "integrate_geodesic",
    "geodesic_residual",
    "conformal_geodesic_terms",
    "conformal_geodesic_residual",
    "homothety_invariance_check",
];

#[inline]
pub fn hit(op: &'static str) {
    if ENABLED.load(Ordering::Relaxed) {
        HITS.lock().unwrap_or_else(|e| e.into_inner()).insert(op);
    }
}

pub fn enable() {
    ENABLED.store(true, Ordering::Relaxed);
}

pub fn snapshot() -> BTreeSet<&'static str> {
    HITS.lock().unwrap_or_else(|e| e.into_inner()).clone()
}

/// Geometric operations not seen since recording was enabled.
pub fn missing() -> Vec<&'static str> {
    let seen = snapshot();
    GEOMETRIC_OPS
        .iter()
        .copied()
        .filter(|op| !seen.contains(op))
        .collect()
}
