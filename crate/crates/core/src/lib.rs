//! Bargraph statistics on inversion sequences: exact distribution tables,
//! closed-form totals, generating-function checks and bijections.

pub mod bijections;
pub mod cli;
pub mod gfseries;
pub mod invseq;
pub mod mpoly;
pub mod recur;
pub mod verify;

pub use bijections::CycleForm;
pub use gfseries::{Rational, RationalSeries};
pub use invseq::{InversionSequence, Permutation, StatRecord};
pub use mpoly::{MPoly, Var};
pub use recur::DistTable;
