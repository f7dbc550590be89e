//! Admissible (γ, n) pairs for the Lieb–Thirring family.
//!
//! The inequality can hold only for γ ≥ 1/2 when n = 1, γ > 0 when n = 2,
//! and γ ≥ 0 when n ≥ 3.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("gamma = {gamma} is outside the admissible range for n = {dim} ({rule})")]
pub struct InvalidGamma {
    pub gamma: f64,
    pub dim: u32,
    pub rule: &'static str,
}

/// Returns `Ok(())` when a Lieb–Thirring bound with exponent `gamma` can hold in dimension `dim`.
pub fn check_gamma(gamma: f64, dim: u32) -> Result<(), InvalidGamma> {
    let (ok, rule) = match dim {
        0 => (false, "dimension must be at least 1"),
        1 => (gamma >= 0.5, "n = 1 requires gamma >= 1/2"),
        2 => (gamma > 0.0, "n = 2 requires gamma > 0"),
        _ => (gamma >= 0.0, "n >= 3 requires gamma >= 0"),
    };
    if ok && gamma.is_finite() {
        Ok(())
    } else {
        Err(InvalidGamma { gamma, dim, rule })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        assert!(check_gamma(0.5, 1).is_ok());
        assert!(check_gamma(0.499, 1).is_err());
        assert!(check_gamma(0.0, 2).is_err());
        assert!(check_gamma(1e-9, 2).is_ok());
        assert!(check_gamma(0.0, 3).is_ok());
        assert!(check_gamma(0.0, 7).is_ok());
        assert!(check_gamma(-0.1, 3).is_err());
        assert!(check_gamma(1.0, 0).is_err());
        assert!(check_gamma(f64::INFINITY, 3).is_err());
        assert!(check_gamma(f64::NAN, 3).is_err());
    }
}
