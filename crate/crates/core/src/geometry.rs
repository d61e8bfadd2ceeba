use crate::error::{Error, Result};

/// Complex dimension and Ricci lower bound, the two inputs every constant
/// in this crate depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    m: u32,
    rho: f64,
}

impl GeometryParams {
    /// Requires `m >= 2` and `rho > 0`.
    pub fn new(m: u32, rho: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!(
                "complex dimension m must be >= 2, got {m}"
            )));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain(format!(
                "Ricci lower bound rho must be positive and finite, got {rho}"
            )));
        }
        Ok(Self { m, rho })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Critical Sobolev exponent 2m/(m-1) (real dimension n = 2m, 2n/(n-2)).
    pub fn critical_exponent(&self) -> f64 {
        2.0 * self.m as f64 / (self.m as f64 - 1.0)
    }
}
