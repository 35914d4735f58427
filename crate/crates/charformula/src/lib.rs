//! Level-zero discrete series of GL(N, Q_p): coefficient systems on the building,
//! their chain complexes, Euler–Poincaré functions, and character values on elliptic
//! regular elements by several independent routes.

pub mod coeffsys;
pub mod complex;
pub mod ep;
pub mod error;
pub mod routes;
pub mod spec;
pub mod value;

pub use coeffsys::{
    build_coefficient_system, canonical_composition, composition_types, principal_uniformizer, residue_matrix, CoefficientDatum,
    CoefficientSystem, OrbitDatum, TableOptions, TraceFactorization,
};
pub use complex::{apartment_isotypic_check, chain_complex, rank_q, ApartmentReport, ChainComplexReport};
pub use ep::{char_orbital, ep_function, orbital_integral_stabilization, parabolic_index, EPFunction, EPTerm, Stabilization};
pub use error::{CharError, Result};
pub use routes::{char_fixed_sum, char_simple, char_supercuspidal_oracle};
pub use spec::{DiscreteSeriesSpec, ExtendedAction, Twist};
pub use value::{CharacterValue, QCyclo, Route};
