//! Predicate transformers induced by relations on finite powersets, and
//! resolutions of interior and closure operators through interpolant sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`setcore`]: universes, subset masks and families;
//! * [`relalg`]: relations, the angelic/demonic/orthogonal transformers and
//!   exhaustive checks of their negation and Galois laws;
//! * [`optable`]: operators as materialized tables, classification, duality;
//! * [`resolve`]: fixpoint lattices, minimal bases, resolutions and the
//!   general monotone factorization;
//! * [`dsl`]: a small declaration language plus record and graph emitters.

pub mod dsl;
pub mod error;
pub mod optable;
pub mod relalg;
pub mod resolve;
pub mod setcore;

pub use error::{Error, Result};
pub use optable::{ClassReport, CompositeCheck, OperatorExpr, OperatorKind, OperatorTable, RandomKind, RelExpr};
pub use relalg::{GaloisReport, MorphismKind, Relation, TransformKind};
pub use resolve::{
    BasisChoice, BasisKind, ClosureForm, FactorVariant, Factorization, FixLattice, Resolution, ResolutionForm,
};
pub use setcore::{Bits, Check, SaturateMode, SubsetFamily, SubsetMask, Universe};
