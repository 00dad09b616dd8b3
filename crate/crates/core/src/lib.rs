//! Topological semantics workbench for the provability logics GL, GL.3 and GLP.
//!
//! * [`formula`]: syntax of the polymodal language.
//! * [`space`]: finite topological spaces, derivative operators, d-maps and d-sums.
//! * [`kripke`]: finite irreflexive trees, GL and GL.3 decision procedures.
//! * [`ordinal`]: Cantor normal forms below epsilon-zero.
//! * [`dmap`]: d-maps from ordinals onto finite trees.
//! * [`icard`]: the word fragment of GLP evaluated on ordinals.

pub mod dmap;
pub mod error;
pub mod formula;
pub mod icard;
pub mod io;
pub mod kripke;
pub mod ordinal;
pub mod selftest;
pub mod space;

pub use error::{Error, ParseError, Result};
pub use formula::{Formula, Word};
pub use ordinal::Ordinal;
