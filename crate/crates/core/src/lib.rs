//! Exact intersection theory and classification enumeration for weak Fano
//! threefolds carrying a del Pezzo fibration over the projective line.

pub mod chowring;
pub mod enumerate;
pub mod error;
pub mod exclusions;
pub mod flopinv;
pub mod genericity;
pub mod golden;
pub mod models;
pub mod verify;

pub use error::{Error, Result};
