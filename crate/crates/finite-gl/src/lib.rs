//! Exact character theory of GL(n, q) for small `n` and `q`: conjugacy classes,
//! complete character tables with values in `Z[ζ_m]`, parabolic induction, cuspidal
//! and generic characters, and generalized Steinberg characters.

pub mod cache;
pub mod cyclo;
pub mod error;
pub mod group;
pub mod induce;
pub mod table;

pub use cache::{cache_file, character_table, load_or_compute, resolve_cache_dir, CACHE_ENV};
pub use cyclo::Cyclo;
pub use error::{FglError, Result};
pub use group::{gl_order, ClassInfo, GlGroup, DEFAULT_BUDGET};
pub use induce::{
    cuspidal_list, gelfand_graev, generalized_steinberg, parabolic_induced_character, regular_orbit_count, GlData, Induced,
};
pub use table::{compute_table, CharacterTable, FiniteGLCharacter};
