//! Characteristic subspaces and ideal series of finite-dimensional algebras over prime fields.
//!
//! The crate is organised bottom-up: exact linear algebra ([`field`],
//! [`subspace`]), structure-constant algebras ([`algebra`]), multilinear words
//! ([`words`]), morphisms ([`morphisms`]), finite sublattices ([`lattice`]),
//! the predicate framework ([`predicates`]) and the two engines
//! ([`engine`]). Engine outputs are [`certificate`]s that the independent
//! checker in [`verify`] can replay without running any search.

pub mod algebra;
pub mod certificate;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod field;
pub mod lattice;
pub mod morphisms;
pub mod predicates;
pub mod subspace;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
