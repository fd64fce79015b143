//! A desk-scale laboratory for compression complexity.
//!
//! The crate fixes a concrete total machine ([`toyvm`]), computes exact
//! Kolmogorov complexity, busy-beaver values and related sets by exhaustive
//! enumeration ([`oracle`]), builds compression functions on top of that
//! machine ([`compressors`]), and checks the size/quality trade-offs between
//! compressors and complexity exactly on small instances ([`theorems`],
//! [`timebounded`]).

pub mod bits;
pub mod compressors;
pub mod error;
pub mod oracle;
pub mod theorems;
pub mod timebounded;
pub mod toyvm;

pub use bits::BitString;
pub use error::{LabError, Result};
