//! Working-precision context shared by all numeric operations.
//!
//! Everything precision-sensitive (volume formulas, fractional-part
//! searches, relation detection) computes in MPFR binary floats with a
//! configurable mantissa. Geometry bounds run in f64 with explicit slop;
//! see the geometry module.

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Ambient or formula dimension, always >= 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("dimension must be >= 1"));
        }
        Ok(Dimension(d))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Debug for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Mantissa width and comparison tolerance for a run.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    bits: u32,
    tol: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            bits: DEFAULT_BITS,
            tol: DEFAULT_TOL,
        }
    }
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Result<Self> {
        Self::with_tol(bits, DEFAULT_TOL)
    }

    pub fn with_tol(bits: u32, tol: f64) -> Result<Self> {
        if bits < 64 {
            return Err(Error::domain("precision must be at least 64 bits"));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::domain("tolerance must lie in (0, 1)"));
        }
        Ok(PrecisionContext { bits, tol })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Working precision with guard bits for intermediate arithmetic.
    pub fn guard_bits(&self) -> u32 {
        self.bits + 64
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits, v)
    }

    pub fn guard_float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.guard_bits(), v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits, Constant::Pi)
    }

    pub fn guard_pi(&self) -> Float {
        Float::with_val(self.guard_bits(), Constant::Pi)
    }

    /// Parse a decimal literal at working precision.
    pub fn parse(&self, s: &str) -> Result<Float> {
        let incomplete = Float::parse(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(Float::with_val(self.bits, incomplete))
    }

    /// Rounds a guard-precision value down to working precision.
    pub fn round(&self, v: Float) -> Float {
        Float::with_val(self.bits, v)
    }

    /// Quadrature error target, 2^(-bits/2) per the module contract.
    pub fn quad_target(&self) -> Float {
        let mut t = Float::with_val(self.bits, 1u32);
        t >>= self.bits / 2;
        t
    }
}
