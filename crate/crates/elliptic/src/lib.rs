//! Elliptic regular elements of GL(N, Q_p): the invariants of `K = F[γ]`, minimality,
//! the unique hereditary order normalized by `K^×`, and fixed-point subcomplexes.

pub mod analyze;
pub mod error;
pub mod fixed;

pub use analyze::{
    analyze_elliptic, constructive_order, divisibility_gate, is_minimal, EllipticExport, EllipticReport, GateData,
};
pub use error::{EllipticError, Result};
pub use fixed::{
    brute_force_normalized, fixed_point_set, normalizes, order_normalized_by, vertex_images, FixedCell, FixedComplex,
    NormalizedOrder,
};
