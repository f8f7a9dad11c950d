//! Chromatic symmetric functions in noncommuting variables for unit interval
//! graphs, their elementary expansions, and an arc-diagram sign-reversing
//! involution on the triangular ladder.

pub mod chromatic;
pub mod diagrams;
pub mod error;
pub mod graphs;
pub mod involution;
pub mod ncsym;
pub mod partitions;

pub use diagrams::{ArcDiagram, CaseId, Decomposition, LabeledDiagram};
pub use error::{Error, Result};
pub use graphs::{parse_graph, UnitIntervalGraph};
pub use ncsym::{Basis, CommExpr, NCExpr, SemiSymE};
pub use partitions::{ClassKey, IntegerPartition, Permutation, SetPartition};
