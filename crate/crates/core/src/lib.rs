//! Toolkit for plane graphs without 4-cycles and 5-cycles and their
//! partitions into a forest of maximum degree 3 and a forest of maximum
//! degree 4.

pub mod embed;
pub mod error;
pub mod graph;

pub use error::{Error, Result};
pub use graph::{class_membership, ClassReport, Face, PlaneGraph};
pub mod classify;
pub mod format;
pub mod gadgets;
pub mod configs;
pub mod discharging;
pub mod partition;
pub mod reducer;
pub mod corpus;
pub mod batch;
