//! Gamma function via the Lanczos approximation (g = 7, nine terms).

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("gamma function requires x > 0, got {0}")]
    NonPositive(f64),
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    // z is the shifted argument x - 1
    LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEFFS[0], |acc, (i, c)| {
            acc + c / (z + (i + 1) as f64)
        })
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64, DomainError> {
    if !(x > 0.0) {
        return Err(DomainError::NonPositive(x));
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        return Ok(PI / ((PI * x).sin() * gamma_unchecked(1.0 - x)));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64, DomainError> {
    if !(x > 0.0) {
        return Err(DomainError::NonPositive(x));
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Γ(a)/Γ(b), switching to logarithms once either argument would overflow.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64, DomainError> {
    if a < 170.0 && b < 170.0 {
        Ok(gamma(a)? / gamma(b)?)
    } else {
        Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn classical_values() {
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(2.5).unwrap(), 0.75 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(
            gamma(2.5).unwrap(),
            1.329_340_388_179_137,
            max_relative = 1e-12
        );
    }

    #[test]
    fn factorials() {
        let mut fact = 1.0;
        for n in 1..25u32 {
            assert_relative_eq!(gamma(n as f64).unwrap(), fact, max_relative = 1e-12);
            fact *= n as f64;
        }
    }

    #[test]
    fn small_arguments_use_reflection() {
        // Γ(0.1) from mpmath
        assert_relative_eq!(
            gamma(0.1).unwrap(),
            9.513_507_698_668_732,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            ln_gamma(0.1).unwrap(),
            9.513_507_698_668_732f64.ln(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn log_gamma_matches_gamma() {
        for &x in &[0.7, 1.3, 4.5, 10.25, 33.0] {
            assert_relative_eq!(
                ln_gamma(x).unwrap(),
                gamma(x).unwrap().ln(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn large_ratio_does_not_overflow() {
        // Γ(200.5)/Γ(200) ≈ √200 · (1 − 1/1600)
        let r = gamma_ratio(200.5, 200.0).unwrap();
        assert_relative_eq!(r, 200f64.sqrt() * (1.0 - 1.0 / 1600.0), max_relative = 1e-6);
    }

    #[test]
    fn rejects_non_positive() {
        assert_eq!(gamma(0.0), Err(DomainError::NonPositive(0.0)));
        assert!(gamma(-1.5).is_err());
        assert!(gamma(f64::NAN).is_err());
    }
}
