//! Finite-scale classification invariants of equivariant principal bundles.
//!
//! Everything here works with concrete finite data: groups as Cayley tables,
//! bundles as finite sets with commuting actions, representations as dense
//! complex matrices, cohomology as exact root-of-unity arithmetic. The crate
//! is organized bottom-up:
//!
//! * [`group`], [`catalog`] — finite group arithmetic and a library of small
//!   groups up to isomorphism.
//! * [`family`] — closed families of pairs (subgroup, homomorphism) and their
//!   graph-subgroup counterparts inside a product group.
//! * [`bundle`] — finite models of bundles with a left group action upstairs
//!   and downstairs and a free right structure-group action on the total
//!   space; local representations; classification over a single orbit.
//! * [`character`], [`matrix`], [`reps`] — ordinary character theory and the
//!   dense numerical kernel (Jacobi eigensolver, intertwiner averaging, polar
//!   retraction, conjugator recovery).
//! * [`snf`], [`cohomology`] — integer Smith normal form and degree-two group
//!   cohomology with root-of-unity coefficients, Schur multipliers, twisted
//!   representation counting.
//! * [`report`] — symbolic fixed-point-set reports (component counts,
//!   classifying-space atoms, Poincaré series).
//! * [`verify`], [`cli`] — the acceptance checks and the command-line front
//!   end that drives all of the above.

pub mod bundle;
pub mod catalog;
pub mod character;
pub mod cli;
pub mod cohomology;
pub mod config;
pub mod error;
pub mod family;
pub mod group;
pub mod jsonout;
pub mod matrix;
pub mod report;
pub mod reps;
pub mod snf;
pub mod verify;

pub use config::Config;
pub use error::{Error, Result};
