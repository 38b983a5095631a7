//! Packing-radius equation and the maximal injectivity radius.
//!
//! For a surface with Euler characteristic `chi`, `n` cusps, `b` boundary
//! components and `k` disks, the radius `r` solves
//!
//! ```text
//! 3 (2 - (2 chi + b + n)/k) alpha(r) + (2n/k) beta(r) + (2b/k) gamma(r) = 2 pi
//! ```

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytrig::{alpha, alpha_prime, beta, beta_prime, gamma, gamma_prime};
use crate::roots::{bisect_newton, RootOptions};

/// Upper end of the root bracket.
pub const R_MAX: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub chi: i64,
    pub n: i64,
    pub b: i64,
    pub k: i64,
}

impl Signature {
    pub fn new(chi: i64, n: i64, b: i64, k: i64) -> Result<Self> {
        let sig = Signature { chi, n, b, k };
        sig.validate()?;
        Ok(sig)
    }

    pub fn validate(&self) -> Result<()> {
        if self.chi >= 0 {
            return Err(Error::InvalidSignature(format!("chi = {} must be negative", self.chi)));
        }
        if self.n < 0 || self.b < 0 {
            return Err(Error::InvalidSignature(format!(
                "cusp and boundary counts must be nonnegative (n = {}, b = {})",
                self.n, self.b
            )));
        }
        if self.k < 1 {
            return Err(Error::InvalidSignature(format!("k = {} must be positive", self.k)));
        }
        Ok(())
    }

    /// Genus `(2 - chi - n - b)/2`, if it is a nonnegative integer.
    pub fn genus(&self) -> Option<i64> {
        let twice = 2 - self.chi - self.n - self.b;
        (twice >= 0 && twice % 2 == 0).then_some(twice / 2)
    }

    /// Coefficients of `alpha`, `beta`, `gamma` in the angle sum.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        let k = self.k as f64;
        let m = (2 * self.chi + self.b + self.n) as f64;
        (3.0 * (2.0 - m / k), 2.0 * self.n as f64 / k, 2.0 * self.b as f64 / k)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(chi={}, n={}, b={}, k={})", self.chi, self.n, self.b, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSolution {
    pub r: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

pub fn angle_sum(r: f64, sig: &Signature) -> f64 {
    let (ca, cb, cg) = sig.coefficients();
    ca * alpha(r) + cb * beta(r) + cg * gamma(r)
}

pub fn angle_sum_prime(r: f64, sig: &Signature) -> f64 {
    let (ca, cb, cg) = sig.coefficients();
    ca * alpha_prime(r) + cb * beta_prime(r) + cg * gamma_prime(r)
}

pub fn packing_radius(sig: &Signature) -> Result<RadiusSolution> {
    packing_radius_with(sig, RootOptions::default())
}

pub fn packing_radius_with(sig: &Signature, opts: RootOptions) -> Result<RadiusSolution> {
    sig.validate()?;
    let top = angle_sum(0.0, sig);
    if top <= 2.0 * PI {
        return Err(Error::NoSolution(format!("angle sum at r = 0 is {top}, not above 2 pi, for {sig}")));
    }
    let bottom = angle_sum(R_MAX, sig);
    if bottom >= 2.0 * PI {
        return Err(Error::NoSolution(format!("angle sum at r = {R_MAX} is {bottom} for {sig}")));
    }
    let root = bisect_newton(|r| angle_sum(r, sig) - 2.0 * PI, |r| angle_sum_prime(r, sig), 0.0, R_MAX, opts)?;
    Ok(RadiusSolution { r: root.x, residual: root.residual, iterations: root.iterations, bracket: root.bracket })
}

/// Maximal injectivity radius: the one-disk packing radius.
pub fn max_injrad(chi: i64, n: i64, b: i64) -> Result<RadiusSolution> {
    packing_radius(&Signature::new(chi, n, b, 1)?)
}

/// Boundary length `2 asinh(tanh r)` of a maximizing surface.
pub fn boundary_length_at_max(r: f64) -> f64 {
    2.0 * r.tanh().asinh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_sum_at_zero() {
        let sig = Signature::new(-1, 0, 1, 1).unwrap();
        assert!((angle_sum(0.0, &sig) - 4.0 * PI).abs() < 1e-14);
        assert!(angle_sum(30.0, &sig) < 1e-8);
    }

    #[test]
    fn closed_surfaces_reduce_to_triangles_only() {
        let sig = Signature::new(-2, 0, 0, 1).unwrap();
        let sol = packing_radius(&sig).unwrap();
        assert!((18.0 * alpha(sol.r) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_signatures() {
        assert!(Signature::new(1, 0, 0, 1).is_err());
        assert!(Signature::new(-1, -1, 0, 1).is_err());
        assert!(Signature::new(-1, 0, 0, 0).is_err());
        assert!(max_injrad(0, 0, 0).is_err());
    }

    #[test]
    fn genus() {
        assert_eq!(Signature::new(-3, 2, 1, 1).unwrap().genus(), Some(1));
        assert_eq!(Signature::new(-1, 0, 1, 1).unwrap().genus(), Some(1));
        assert_eq!(Signature::new(-1, 0, 2, 1).unwrap().genus(), None);
    }

    #[test]
    fn boundary_length_limits() {
        assert_eq!(boundary_length_at_max(0.0), 0.0);
        let lim = 2.0 * (1.0 + 2f64.sqrt()).ln();
        assert!((boundary_length_at_max(40.0) - lim).abs() < 1e-14);
    }
}
