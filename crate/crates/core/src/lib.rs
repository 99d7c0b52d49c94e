//! Exact enumeration of φ⁴ vacuum graphs through RC-magic squares.
//!
//! An `m × m` nonnegative integer matrix whose rows and columns all sum to
//! four encodes how the four fields of each vertex are split among the
//! vertices. Squares are classified up to independent row and column
//! permutations, each class representative is expanded into labeled
//! multigraphs by choosing one of three pairings per vertex, and the
//! resulting graphs are merged up to isomorphism with exact multiplicities.
//!
//! ```
//! use rcms::enumerate::{class_representatives, count_total};
//!
//! assert_eq!(count_total(3, 4).unwrap(), 120u32.into());
//! assert_eq!(class_representatives(3, 4).unwrap().len(), 9);
//! ```

pub mod birkhoff;
pub mod burnside;
mod canon;
pub mod enumerate;
pub mod error;
pub mod expand;
pub mod graph;
pub mod matrix;
pub mod oracle;
pub mod perm;
pub mod reference;
pub mod verify;

pub use error::{RcmsError, Result};
pub use graph::{MultiplicityRecord, VacGraph};
pub use matrix::{ClassRep, PartialRcMatrix, RcMatrix};
pub use perm::Permutation;

/// Version tag carried by every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
