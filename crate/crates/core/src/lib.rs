//! Exact tropical and valuative geometry over small examples.

pub mod error;
pub mod gaussfield;
pub mod linalg;
pub mod linarith;
pub mod mpolytope;
pub mod ovalgroup;
pub mod rational;
pub mod skeleton;
pub mod tropicalizer;

pub use error::{Error, Result};
pub use ovalgroup::{GroupElement, ValueGroupDesc};
