//! Finite racks: validated operation tables, their coloured multigraphs, a
//! lossless codec driven by greedy component merging, exhaustive small-order
//! enumeration and numerical checks of the supporting inequalities.

pub mod analysis;
pub mod codec;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod graph;
pub mod iso;
pub mod perm;
pub mod rack;
pub mod text;

pub use error::{ParseError, RackError};
pub use perm::Perm;
pub use rack::{rack_from_table, AxiomReport, Rack, Violation};
