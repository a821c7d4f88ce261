//! Finite relational structures and the homomorphism-homogeneity toolkit
//! built on them: map search in every morphism mode, homogeneity checks,
//! class properties (HP, JEP, AP, HAP), tuple type orders, cores, and
//! finite stages of limit constructions.

pub mod ages;
pub mod budget;
pub mod canon;
pub mod catalog;
pub mod cores;
pub mod error;
pub mod format;
pub mod homsearch;
pub mod limits;
pub mod structures;

pub use error::{Error, Result};
pub use homsearch::{Decision, HomogeneityKind, Outcome, SearchResult};
pub use structures::{check_map, check_partial_map, Mode, PartialMap, Signature, Structure, Tuple};
