//! Proportionality by item deletion.
//!
//! Agents rank every item strictly. An allocation is proportional when each
//! agent, for every `i`, receives at least `i / |N|` of its top `i` items. Given
//! a profile that admits no such allocation, the task is to delete as few
//! items as possible so that one exists.
//!
//! - [`matching`] decides proportionality through slot matching and returns
//!   either an allocation or a minimal obstruction certificate.
//! - [`oracle`] holds exact solvers for any number of agents.
//! - [`mindel`] is the polynomial-time solver for three agents.
//! - [`generators`] builds random profiles and instances from dominating set
//!   and from antimonotone weighted satisfiability.
//!
//! ```
//! use propdel::{fixtures::figure_one, mindel::solve3, profile::item_set};
//!
//! let outcome = solve3(&figure_one(), Some(1)).unwrap();
//! assert_eq!(outcome.solution.deleted, item_set([2]));
//! assert_eq!(outcome.decision, Some(true));
//! ```

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generators;
pub mod matching;
pub mod mindel;
pub mod oracle;
pub mod prefix;
pub mod profile;
pub mod report;

pub use error::{PidError, Result};
pub use matching::{Allocation, ObstructionCertificate, Outcome};
pub use oracle::Solution;
pub use prefix::{Prefix, Shape, Slot};
pub use profile::{Item, ItemSet, Profile};
