//! Burnside rings, tables of marks, H-free bisets and the Ravenel filtration
//! for small finite groups, computed exactly.

pub mod biset;
pub mod burnside;
pub mod catalog;
pub mod error;
pub mod filtration;
pub mod group;
pub mod io;
pub mod lattice;
pub mod oracle;
pub mod subgroup;
pub mod verify;

pub use error::{Error, Result};
