//! Areas of Hügelschäffer egg curves.
//!
//! The egg part of `2wxy² + b²x² + (a² + w²)y² - a²b² = 0` has area
//! `(4/3) abq ((1 - 1/k²) K(k) + (1 + 1/k²) E(k))` with `q = 1` for `w ≤ a`,
//! `q = a/w` otherwise, and `k = q²w/a`. This crate evaluates that closed
//! form, its modulus series, two-sided Taylor enclosures of it, and checks
//! every formula against direct quadrature.

pub mod area;
pub mod cli;
pub mod curve;
pub mod elliptic;
pub mod error;
pub mod format;
pub mod oracle;
pub mod taylor;
pub mod verify;

pub use area::{area_exact, area_series, area_taylor, bounds, inv_pi_partial, AreaBreakdown, BoundsCertificate};
pub use curve::{CurveParams, DerivedShape, PlanePoint, Regime};
pub use elliptic::{complete_d, complete_e, complete_k, series_eval, Modulus, SeriesTarget};
pub use error::{Error, Result};
pub use oracle::{quad, quad_area, QuadratureSpec, Rule};
pub use taylor::{first_taylor, second_taylor, verify_chain, ApproxKind, TaylorApprox};
