//! Comodules over Hopf algebroids, computed exactly.
//!
//! The crate is layered: [`ring`] does arithmetic in finitely presented
//! algebras, [`module`] handles finitely presented modules, [`algebroid`]
//! holds the Hopf algebroid data, [`comodule`] and [`monoidal`] build the
//! closed symmetric monoidal category of comodules, and [`complex`] adds
//! bounded complexes and the cobar resolution.

pub mod algebroid;
pub mod cli;
pub mod comodule;
pub mod complex;
pub mod error;
pub mod format;
pub mod graded;
pub mod kspace;
pub mod module;
pub mod monoidal;
pub mod oracle;
pub mod ring;

pub use error::{Error, Result};
