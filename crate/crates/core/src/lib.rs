//! Branching-time temporal logic with indistinguishability relations.
//!
//! Finite trees carry, at every moment, a partition of the histories through
//! that moment. Formulas are evaluated at points `(moment, class)`. The crate
//! provides:
//!
//! * [`structures`]: trees, histories, frames, models and their validation,
//! * [`formula`]: the languages L and LF (parser, printer, generator),
//! * [`semantics`]: two model checkers (history clauses and derived relations),
//!   model/frame validity and satisfiability,
//! * [`morphisms`]: p-morphism checking, search and valuation pullback,
//! * [`bisimulation`]: bisimulation checking, the greatest bisimulation and
//!   distinguishing-formula search,
//! * [`cli`]: the `itl` command-line front end.

pub mod bisimulation;
pub mod cli;
pub mod corpus;
mod error;
pub mod formula;
pub mod gen;
pub mod mask;
pub mod morphisms;
pub mod par;
pub mod semantics;
pub mod structures;
pub mod suite;

pub use error::{Error, Result};
pub use formula::{parse, Formula, Language};
pub use structures::{Frame, Model, PointId, PointRef, Tree};
