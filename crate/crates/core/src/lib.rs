//! Finite belief base revision: base logics, postulate checking, preference
//! assignments, critical loops and total-preorder construction.

pub mod assignment;
pub mod critical_loop;
pub mod encoding;
pub mod error;
pub mod gallery;
pub mod io;
pub mod logic;
pub mod operator;
pub mod postulates;
pub mod relation;
pub mod space;
pub mod tpo;
pub mod verify;

pub use error::{Error, Result};
pub use logic::{BaseFamily, BaseLogic, BeliefBase, FamilyKind, ModelSet, Sentence};
pub use operator::{Evaluator, Operator};
pub use relation::PreferenceRelation;
pub use space::BaseSpace;
