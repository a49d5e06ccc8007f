//! Multiqubit entanglement toolkit built around the monogamy of the squared
//! entanglement of formation.
//!
//! The crate provides:
//! - self-contained dense complex linear algebra for small Hilbert spaces
//!   ([`linalg`]),
//! - constructors for the named states and seeded random state generators
//!   ([`states`]),
//! - entanglement measures and the analytic derivative machinery
//!   ([`measures`]),
//! - a numerical convex-roof minimizer ([`roof`]),
//! - quantum discord and the Koashi-Winter route to mixed-state EoF
//!   ([`discord`]),
//! - monogamy indicators and closed forms ([`indicators`]),
//! - cavity-reservoir dynamics and the LOCC counterexample ([`dynamics`]).

pub mod discord;
pub mod dynamics;
pub mod error;
pub mod indicators;
pub mod linalg;
pub mod measures;
pub mod rng;
pub mod roof;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{CMatrix, DensityMatrix, PureState, SchmidtResult};
pub use rng::{Seed, SplitMix64};
