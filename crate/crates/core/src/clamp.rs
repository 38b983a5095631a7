//! Inverse trigonometric and hyperbolic functions with a small domain slack.
//!
//! Arguments that miss the domain by less than [`DOMAIN_SLACK`] are clamped
//! onto it (roundoff); anything further out is reported as a domain error.

use crate::error::{Error, Result};

/// Distance outside a function's domain that is still treated as roundoff.
pub const DOMAIN_SLACK: f64 = 1e-9;

pub fn asin_checked(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain { func: "asin", value: x });
    }
    Ok(x.clamp(-1.0, 1.0).asin())
}

pub fn acos_checked(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain { func: "acos", value: x });
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

pub fn acosh_checked(x: f64) -> Result<f64> {
    if x.is_nan() || x < 1.0 - DOMAIN_SLACK {
        return Err(Error::Domain { func: "acosh", value: x });
    }
    Ok(x.max(1.0).acosh())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_roundoff_and_rejects_the_rest() {
        assert_eq!(asin_checked(1.0 + 1e-12).unwrap(), std::f64::consts::FRAC_PI_2);
        assert!(asin_checked(1.0 + 1e-6).is_err());
        assert_eq!(acos_checked(-1.0 - 5e-10).unwrap(), std::f64::consts::PI);
        assert_eq!(acosh_checked(1.0 - 1e-10).unwrap(), 0.0);
        assert!(acosh_checked(0.5).is_err());
        assert!(asin_checked(f64::NAN).is_err());
    }
}
