//! Closed-form trigonometry of the polygons used by the extremal constructions.
//!
//! Angle functions at radius `r` (a side of length `2r`):
//! `alpha` for an equilateral triangle, `beta` for the finite vertices of a
//! horocyclic ideal triangle and `gamma` for a square. Areas are angle
//! defects.

use std::f64::consts::PI;

use crate::clamp::{acosh_checked, DOMAIN_SLACK};
use crate::error::{Error, Result};

pub fn alpha(r: f64) -> f64 {
    2.0 * (0.5 / r.cosh()).asin()
}

pub fn beta(r: f64) -> f64 {
    (1.0 / r.cosh()).asin()
}

pub fn gamma(r: f64) -> f64 {
    2.0 * (1.0 / (2f64.sqrt() * r.cosh())).asin()
}

pub fn alpha_prime(r: f64) -> f64 {
    let c = r.cosh();
    -2.0 * r.tanh() / (4.0 * c * c - 1.0).sqrt()
}

pub fn beta_prime(r: f64) -> f64 {
    -1.0 / r.cosh()
}

pub fn gamma_prime(r: f64) -> f64 {
    let c = r.cosh();
    -2.0 * r.tanh() / (2.0 * c * c - 1.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl AngleTriple {
    pub fn at(r: f64) -> Self {
        AngleTriple { alpha: alpha(r), beta: beta(r), gamma: gamma(r) }
    }
}

/// Area of the equilateral triangle with side `d`.
pub fn area_equilateral(d: f64) -> f64 {
    PI - 3.0 * alpha(d / 2.0)
}

/// Area of the square with side `d`.
pub fn area_square(d: f64) -> f64 {
    2.0 * PI - 4.0 * gamma(d / 2.0)
}

/// Area of the horocyclic ideal triangle with compact side `d`.
pub fn area_horocyclic(d: f64) -> f64 {
    PI - 2.0 * beta(d / 2.0)
}

/// `A_m(d)`, the isosceles triangle area; equals half the side-`d` square.
pub fn area_am(d: f64) -> f64 {
    area_square(d) / 2.0
}

/// `asin(cosh u / cosh v)` for `v >= u >= 0`, accurate when `v` is close to `u`.
pub(crate) fn asin_cosh_ratio(u: f64, v: f64) -> f64 {
    let s = ((v - u).sinh() * (v + u).sinh()).max(0.0);
    u.cosh().atan2(s.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaccheriQuad {
    pub base: f64,
    pub legs: f64,
    pub summit: f64,
    pub summit_angle: f64,
}

/// Saccheri quadrilateral with base `b` and legs `x` perpendicular to it.
pub fn saccheri_from_leg(b: f64, x: f64) -> SaccheriQuad {
    let h = b / 2.0;
    let summit = 2.0 * (x.cosh() * h.sinh()).asinh();
    // cosh^2(summit/2) - cosh^2(b/2) = sinh^2(b/2) sinh^2(x)
    SaccheriQuad { base: b, legs: x, summit, summit_angle: h.cosh().atan2(h.sinh() * x.sinh()) }
}

/// Quadrilateral with two right angles on a base geodesic: legs `b` and
/// `a` stand on the base, `c` is the side joining their tops, and `alpha`
/// is the interior angle at the top of `b`. Returns `a`.
pub fn birect_side(b: f64, c: f64, alpha: f64) -> f64 {
    (b.sinh() * c.cosh() - b.cosh() * c.sinh() * alpha.cos()).asinh()
}

/// The leg reached by going the other way from the top of `b`, a distance
/// `ellp - c` along the same line.
pub fn birect_coside(b: f64, c: f64, ellp: f64, alpha: f64) -> Result<f64> {
    if c < -DOMAIN_SLACK || c > ellp + DOMAIN_SLACK {
        return Err(Error::DegenerateInput(format!("c = {c} is outside [0, {ellp}]")));
    }
    let e = ellp - c;
    Ok((b.sinh() * e.cosh() + b.cosh() * e.sinh() * alpha.cos()).asinh())
}

/// Right-angled hexagon with alternate sides `a, b, c`.
///
/// `a_op` is the side opposite `a`, and so on. Going around the hexagon the
/// sides read `a, c_op, b, a_op, c, b_op`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RightHexagon {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a_op: f64,
    pub b_op: f64,
    pub c_op: f64,
}

impl RightHexagon {
    /// Sides in cyclic order.
    pub fn cyclic(&self) -> [f64; 6] {
        [self.a, self.c_op, self.b, self.a_op, self.c, self.b_op]
    }

    /// Largest violation of the three cosine relations.
    pub fn relation_residual(&self) -> f64 {
        let rel = |x: f64, y: f64, z: f64, opp: f64| {
            (opp.cosh() * y.sinh() * z.sinh() - y.cosh() * z.cosh() - x.cosh()).abs() / x.cosh()
        };
        rel(self.a, self.b, self.c, self.a_op)
            .max(rel(self.b, self.c, self.a, self.b_op))
            .max(rel(self.c, self.a, self.b, self.c_op))
    }
}

fn opposite(x: f64, y: f64, z: f64) -> Result<f64> {
    acosh_checked((x.cosh() + y.cosh() * z.cosh()) / (y.sinh() * z.sinh()))
}

pub fn hexagon_solve(a: f64, b: f64, c: f64) -> Result<RightHexagon> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::DegenerateInput(format!("hexagon side {name} = {v}")));
        }
    }
    Ok(RightHexagon { a, b, c, a_op: opposite(a, b, c)?, b_op: opposite(b, c, a)?, c_op: opposite(c, a, b)? })
}

/// Apex angle `psi` and base angles `theta` of the isosceles triangle with
/// legs `x` and base `b3`.
///
/// Halving the triangle gives a right triangle with hypotenuse `x` and leg
/// `b3/2`, so `sin(psi/2) = sinh(b3/2)/sinh(x)` and
/// `cos(theta) = tanh(b3/2)/tanh(x)`.
pub fn isosceles_angles(b3: f64, x: f64) -> Result<(f64, f64)> {
    let c = b3 / 2.0;
    if !(c > 0.0) || x < c - DOMAIN_SLACK {
        return Err(Error::Domain { func: "isosceles_angles", value: x });
    }
    let x = x.max(c);
    let s = ((x - c).sinh() * (x + c).sinh()).max(0.0);
    let half_psi = c.sinh().atan2(s.sqrt());
    // tanh^2 x - tanh^2 c = sinh(x-c) sinh(x+c) / (cosh^2 x cosh^2 c)
    let sin_theta = s.sqrt() / (x.cosh() * c.cosh());
    let theta = sin_theta.atan2(c.tanh());
    Ok((2.0 * half_psi, theta))
}
