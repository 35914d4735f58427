//! Exact truncated arithmetic over Q_p and its monogenic extensions.
//!
//! Every valuation this crate reports is certified: when the available digits
//! cannot decide, callers get [`PadicError::PrecisionInsufficient`] or
//! [`PadicError::Indeterminate`] and are expected to raise the precision.

pub mod error;
pub mod field;
pub mod fp;
pub mod poly;
pub mod scalar;

pub use error::{PadicError, Result};
pub use field::{ExtensionShape, FieldBlock, LocalFieldDesc, PAdicScalar, DEFAULT_PRECISION};
pub use fp::{FpPoly, Gf};
pub use poly::{certified_irreducible, ef_invariants, is_square, newton_polygon, EfInvariants, NewtonPolygon, QpPoly};
pub use scalar::{is_prime, mod_inverse, pow_u64, precision_cap, Padic};
