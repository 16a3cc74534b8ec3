//! Structural and decomposition analysis of chemical reaction networks.
//!
//! The crate covers deficiency and linkage analysis ([`structure`]),
//! classification of network decompositions ([`decomposition`]),
//! realizations of S-systems and species-coverable networks ([`ssystem`]),
//! and numerical checks of equilibria under power-law kinetics
//! ([`kinetics`]). All structural computations use exact rationals through
//! the scalar-generic kernel in [`linalg`].

pub mod decomposition;
pub mod error;
pub mod generate;
pub mod kinetics;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod ssystem;
pub mod structure;

pub use error::{Error, Result};
pub use model::{
    parse_network, serialize_network, union, Complex, Network, NetworkBuilder, Reaction, SpeciesId,
};
pub use scalar::Scalar;

/// Exact stoichiometric coefficient type.
pub type Rational = num_rational::BigRational;
/// Exact matrix used by every structural computation.
pub type RationalMatrix = linalg::Matrix<Rational>;
/// Floating-point matrix over the same kernel.
pub type FloatMatrix = linalg::Matrix<f64>;
/// Power-law kinetics with double-precision parameters.
pub type PowerLawKinetics64 = kinetics::PowerLawKinetics<f64>;
/// Power-law kinetics with single-precision parameters.
pub type PowerLawKinetics32 = kinetics::PowerLawKinetics<f32>;
