//! Construction and certification of open point sets in R^d that avoid
//! integral distances, together with exact evaluation of the associated
//! extremal volumes.
//!
//! The crate is organised around the pipeline
//! search -> build -> certify -> measure:
//!
//! - [`volumes`]: closed-form volumes (balls, slices, caps), extremal
//!   volume functions, and the upper bounds used to certify them.
//! - [`diophantine`]: simultaneous fractional-part searches over scaled
//!   polygon diagonals, plus lattice-reduction integer relation detection
//!   used as a heuristic rational-independence check.
//! - [`geometry`]: components (balls cut by symmetric slabs), annulus
//!   shells, rigorous distance/diameter enclosures and exact line chords.
//! - [`certifier`]: the avoidance criteria (pairwise interval test, line
//!   criterion, exact one-dimensional test) producing machine-checkable
//!   certificates or violation witnesses.
//! - [`constructions`]: the explicit extremal configurations, ready to be
//!   certified and measured.

pub mod certifier;
pub mod constructions;
pub mod diophantine;
pub mod error;
pub mod geometry;
pub mod interval1d;
mod lll;
pub mod precision;
mod quadrature;
mod support;
pub mod volumes;

pub use error::{Error, Result};
pub use precision::{Dimension, PrecisionContext};

// re-export the bignum backend for downstream formatting
pub use rug;
