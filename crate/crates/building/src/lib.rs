//! The Bruhat–Tits building of GL(N, Q_p) near a base point.
//!
//! Vertices are homothety classes of lattices ([`Lattice`], keyed by [`VertexKey`]),
//! simplices are periodic lattice chains ([`Simplex`]), and each simplex corresponds
//! to a hereditary order ([`HereditaryOrder`]); the two directions of that bijection
//! are computed by independent routes. Group elements are exact rational matrices.

pub mod chain;
pub mod embed;
pub mod error;
pub mod fplin;
pub mod lattice;
pub mod matrix;
pub mod order;
pub mod patch;

pub use chain::{p_power, LatticeChain, Simplex};
pub use embed::{
    act_on_point, chain_conjugacy_search, embed_j, embed_j_subdivision, isobarycenter, order_of_oe_chain, ConjugacyVerdict,
    EStructure, OEChain, Point,
};
pub use error::{BuildingError, Result};
pub use lattice::{Lattice, VertexKey};
pub use matrix::{fmt_q, parse_entry, pow_q, q, reduce_q, val_q, QpMatrix, Q};
pub use order::{gl_order, order_of_simplex, simplex_of_order, FpMatrix, HereditaryOrder, OrderKey, ParahoricQuotient};
pub use patch::{enumerate_ball, BallOptions, BuildingPatch, PatchExport};

/// Default working precision for lattice computations (raised automatically).
pub const DEFAULT_PRECISION: u32 = 12;
