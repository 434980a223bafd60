//! Exact homological algebra for permutohedral tropical coamoebas.
//!
//! The crate builds the directed A-infinity category of the tropical
//! coamoeba mirror to projective space, its covers and finite quotients,
//! twisted complexes over finite A-infinity categories, and compares the
//! results against the exterior-algebra category of the Beilinson
//! collection.

pub mod ainfinity;
pub mod beilinson;
pub mod coamoeba;
pub mod error;
pub mod exactlinalg;
pub mod permutohedron;
pub mod twisted;
pub mod verify;

pub use error::{Error, Result};
