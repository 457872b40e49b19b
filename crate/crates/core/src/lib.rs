//! Embedding toolkit for knowledge bases with multi-fold (n-ary) relations.
//!
//! The crate is organised the way data flows through it:
//!
//! - [`kb`]: instance and fact representations, validation and statistics
//! - [`convert`]: fact-to-instance conversions and star-to-clique (S2C)
//! - [`model`]: TransH and m-TransH cost functions with analytic gradients
//! - [`train`]: negative sampling and the margin-based SGD loop
//! - [`eval`]: entity-ranking evaluation (Hit@10, mean rank, per-fold)
//! - [`dataio`]: file formats, dataset construction and model persistence

pub mod convert;
pub mod dataio;
pub mod error;
pub mod eval;
pub mod kb;
pub mod model;
pub mod symbol;
pub mod synthetic;
pub mod train;

pub use error::{Error, ErrorClass, Result};
pub use kb::{Fact, FactRepresentation, Instance, InstanceRepresentation, RelationSchema, Stats};
pub use symbol::{EntityId, Interner, RelTypeId, RoleId};
