//! Hyperboloid model of the hyperbolic plane.
//!
//! Minkowski space carries the form `<u,v> = -u0 v0 + u1 v1 + u2 v2`.
//! Points live on the upper sheet `<p,p> = -1, p0 > 0`; a geodesic is
//! stored as a unit spacelike normal `n` and `sinh d(p, g) = |<p,n>|`.
//! By convention a region bounded by `g` lies on its negative side.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type V3 = Vector3<f64>;
pub type M3 = Matrix3<f64>;

/// Tolerance on `<p,p> = -1` and `<n,n> = 1` after renormalization.
pub const SHEET_TOL: f64 = 1e-12;

/// The Gram matrix `diag(-1, 1, 1)`.
pub fn gram() -> M3 {
    M3::from_diagonal(&V3::new(-1.0, 1.0, 1.0))
}

#[inline]
pub fn minkowski_dot(u: &V3, v: &V3) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Minkowski cross product: orthogonal to both arguments under the form.
#[inline]
pub fn minkowski_cross(u: &V3, v: &V3) -> V3 {
    let c = u.cross(v);
    V3::new(-c[0], c[1], c[2])
}

/// Reflection `x - 2<x,n>n` across the timelike plane with unit normal `n`.
#[inline]
pub fn reflect_vec(n: &V3, x: &V3) -> V3 {
    x - n * (2.0 * minkowski_dot(x, n))
}

/// Matrix of the reflection with unit normal `n`: `I - 2 n n^T J`.
pub fn reflection_matrix(n: &V3) -> M3 {
    M3::identity() - (n * n.transpose()) * gram() * 2.0
}

/// A point on the upper sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint(V3);

impl HPoint {
    /// The point (1,0,0).
    pub fn origin() -> Self {
        HPoint(V3::new(1.0, 0.0, 0.0))
    }

    /// Projects `v` onto the upper sheet. `v` must be timelike.
    pub fn new(v: V3) -> Result<Self> {
        let q = -minkowski_dot(&v, &v);
        if !(q > 0.0) || !v.iter().all(|c| c.is_finite()) {
            return Err(Error::DegenerateInput(format!("{v:?} is not timelike")));
        }
        let s = if v[0] < 0.0 { -q.sqrt() } else { q.sqrt() };
        Ok(onto_sheet(v / s))
    }

    /// For a vector already on the sheet up to rounding. Skips the rescaling
    /// in [`HPoint::new`], whose `<v,v>` loses digits far from the origin.
    pub fn from_sheet(v: V3) -> Self {
        onto_sheet(v)
    }

    /// Point with spatial coordinates `(x1, x2)` and `x0` chosen on the sheet.
    pub fn from_spatial(x1: f64, x2: f64) -> Self {
        HPoint(V3::new((1.0 + x1 * x1 + x2 * x2).sqrt(), x1, x2))
    }

    /// Inverse of the Poincaré disk projection.
    pub fn from_disk(u: f64, v: f64) -> Result<Self> {
        let r2 = u * u + v * v;
        if r2 >= 1.0 {
            return Err(Error::DegenerateInput(format!("({u}, {v}) is outside the unit disk")));
        }
        let d = 1.0 - r2;
        Ok(HPoint(V3::new((1.0 + r2) / d, 2.0 * u / d, 2.0 * v / d)))
    }

    #[inline]
    pub fn coords(&self) -> &V3 {
        &self.0
    }

    /// Poincaré disk coordinates `(x1/(1+x0), x2/(1+x0))`.
    pub fn to_disk(&self) -> (f64, f64) {
        let p = &self.0;
        (p[1] / (1.0 + p[0]), p[2] / (1.0 + p[0]))
    }

    /// Applies a Lorentz matrix preserving the upper sheet.
    pub fn transform(&self, m: &M3) -> HPoint {
        onto_sheet(m * self.0)
    }
}

/// Recomputes `x0` from the spatial part, which involves no cancellation.
fn onto_sheet(v: V3) -> HPoint {
    HPoint(V3::new((1.0 + v[1] * v[1] + v[2] * v[2]).sqrt(), v[1], v[2]))
}

/// An oriented geodesic, stored as its unit spacelike normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HGeodesic {
    normal: V3,
}

impl HGeodesic {
    pub fn from_normal(n: V3) -> Result<Self> {
        let q = minkowski_dot(&n, &n);
        if !(q > 0.0) || !n.iter().all(|c| c.is_finite()) {
            return Err(Error::DegenerateInput(format!("{n:?} is not spacelike")));
        }
        Ok(HGeodesic { normal: n / q.sqrt() })
    }

    /// For a normal known to be unit up to rounding; no rescaling.
    pub fn from_unit_normal(n: V3) -> Self {
        HGeodesic { normal: n }
    }

    #[inline]
    pub fn normal(&self) -> &V3 {
        &self.normal
    }

    pub fn flipped(&self) -> Self {
        HGeodesic { normal: -self.normal }
    }

    /// Flips the normal if needed so that `reference` lies on the negative side.
    pub fn oriented_away_from(self, reference: &HPoint) -> Self {
        if minkowski_dot(reference.coords(), &self.normal) > 0.0 {
            self.flipped()
        } else {
            self
        }
    }

    /// `<p,n>`; negative on the side the geodesic bounds.
    #[inline]
    pub fn signed(&self, p: &HPoint) -> f64 {
        minkowski_dot(p.coords(), &self.normal)
    }

    pub fn transform(&self, m: &M3) -> HGeodesic {
        HGeodesic { normal: m * self.normal }
    }

    /// Orthogonal projection of `p` onto the geodesic.
    pub fn foot(&self, p: &HPoint) -> HPoint {
        let s = self.signed(p);
        onto_sheet((p.coords() - self.normal * s) / (1.0 + s * s).sqrt())
    }

    /// Unit tangent at a point `q` of the geodesic, turning clockwise from
    /// the normal's direction.
    pub fn tangent_at(&self, q: &HPoint) -> V3 {
        minkowski_cross(&self.normal, q.coords())
    }
}

/// Unit-speed parametrization of a geodesic segment, centred at its
/// midpoint. Flowing from a far endpoint with a tangent built from the
/// difference of the endpoints loses digits; this does not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub mid: HPoint,
    /// Unit tangent at `mid` pointing towards the second endpoint.
    pub dir: V3,
    pub half_length: f64,
}

impl Segment {
    /// The segment from `p` to `q`, both on `line`.
    pub fn new(p: &HPoint, q: &HPoint, line: &HGeodesic) -> Result<Self> {
        let mid = line.foot(&HPoint::new(p.coords() + q.coords())?);
        let t = line.tangent_at(&mid);
        let dir = if minkowski_dot(&t, q.coords()) >= 0.0 { t } else { -t };
        Ok(Segment { mid, dir, half_length: dist_point_point(p, q) / 2.0 })
    }

    /// Point at signed arclength `s` from the midpoint.
    pub fn at(&self, s: f64) -> HPoint {
        flow(&self.mid, &self.dir, s)
    }

    /// Point at arclength `u` from the first endpoint.
    pub fn from_start(&self, u: f64) -> HPoint {
        self.at(u - self.half_length)
    }
}

/// Unit tangent vector `v` at `base`, with `<base, v> = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HTangent {
    pub base: HPoint,
    pub vector: V3,
}

impl HTangent {
    /// Projects `v` onto the tangent plane at `base` and normalizes it.
    pub fn new(base: HPoint, v: V3) -> Result<Self> {
        let w = v + base.coords() * minkowski_dot(base.coords(), &v);
        let q = minkowski_dot(&w, &w);
        if !(q > 0.0) {
            return Err(Error::DegenerateInput("zero tangent vector".into()));
        }
        Ok(HTangent { base, vector: w / q.sqrt() })
    }

    /// Unit tangent at `p` pointing towards `q`.
    pub fn towards(p: &HPoint, q: &HPoint) -> Result<Self> {
        HTangent::new(*p, q.coords() - p.coords())
    }

    /// Rotates by a right angle counter-clockwise (in the disk picture).
    pub fn rotate90(&self) -> Self {
        let v = gram() * self.base.coords().cross(&self.vector);
        HTangent { base: self.base, vector: v }
    }

    /// Rotates counter-clockwise by `angle`.
    pub fn rotate(&self, angle: f64) -> Self {
        let w = self.rotate90().vector;
        HTangent { base: self.base, vector: self.vector * angle.cos() + w * angle.sin() }
    }

    /// Geodesic through the base point in direction `vector`.
    pub fn geodesic(&self) -> HGeodesic {
        let n = minkowski_cross(self.base.coords(), &self.vector);
        HGeodesic::from_normal(n).expect("tangent spans a timelike plane")
    }

    /// Endpoint and transported velocity after unit-speed time `t`.
    pub fn advance(&self, t: f64) -> HTangent {
        let p = self.base.coords();
        let q = onto_sheet(p * t.cosh() + self.vector * t.sinh());
        let v = p * t.sinh() + self.vector * t.cosh();
        HTangent::new(q, v).expect("transported tangent is nonzero")
    }
}

/// `acosh(-<p,q>)`, evaluated as `2 asinh(|p-q|/2)` to keep short distances accurate.
pub fn dist_point_point(p: &HPoint, q: &HPoint) -> f64 {
    let d = p.coords() - q.coords();
    let s = minkowski_dot(&d, &d).max(0.0);
    2.0 * (0.5 * s.sqrt()).asinh()
}

pub fn dist_point_geodesic(p: &HPoint, g: &HGeodesic) -> f64 {
    g.signed(p).abs().asinh()
}

/// Reflection of an arbitrary vector across `g`.
pub fn reflect(g: &HGeodesic, x: &V3) -> V3 {
    reflect_vec(g.normal(), x)
}

pub fn reflect_point(g: &HGeodesic, p: &HPoint) -> HPoint {
    onto_sheet(reflect(g, p.coords()))
}

pub fn geodesic_through(p: &HPoint, q: &HPoint) -> Result<HGeodesic> {
    if dist_point_point(p, q) < 1e-12 {
        return Err(Error::DegenerateInput("points coincide".into()));
    }
    // |p x q| = sinh d(p,q)
    let d = dist_point_point(p, q);
    Ok(HGeodesic::from_unit_normal(minkowski_cross(p.coords(), q.coords()) / d.sinh()))
}

pub fn common_perpendicular_length(g1: &HGeodesic, g2: &HGeodesic) -> Result<f64> {
    let d = minkowski_dot(g1.normal(), g2.normal()).abs();
    if d <= 1.0 + 1e-12 {
        return Err(Error::NotUltraparallel { dot: d });
    }
    Ok(d.acosh())
}

/// Intersection point of two crossing geodesics.
pub fn intersection(g1: &HGeodesic, g2: &HGeodesic) -> Result<HPoint> {
    let c = minkowski_dot(g1.normal(), g2.normal());
    if !(c.abs() < 1.0) {
        return Err(Error::DegenerateInput("geodesics do not cross".into()));
    }
    let v = minkowski_cross(g1.normal(), g2.normal()) / (1.0 - c * c).sqrt();
    Ok(onto_sheet(if v[0] < 0.0 { -v } else { v }))
}

/// `cosh t p + sinh t v`, renormalized onto the sheet.
pub fn flow(p: &HPoint, v: &V3, t: f64) -> HPoint {
    onto_sheet(p.coords() * t.cosh() + v * t.sinh())
}

/// Interior angle at `vertex` between the rays to `a` and `b`.
pub fn angle_at(vertex: &HPoint, a: &HPoint, b: &HPoint) -> Result<f64> {
    let u = HTangent::towards(vertex, a)?;
    let w = HTangent::towards(vertex, b)?;
    crate::clamp::acos_checked(minkowski_dot(&u.vector, &w.vector))
}

/// Lorentz boost taking `c` to the origin.
pub fn boost_to_origin(c: &HPoint) -> M3 {
    let c = c.coords();
    let k = 1.0 / (1.0 + c[0]);
    M3::new(
        c[0],
        -c[1],
        -c[2],
        -c[1],
        1.0 + c[1] * c[1] * k,
        c[1] * c[2] * k,
        -c[2],
        c[1] * c[2] * k,
        1.0 + c[2] * c[2] * k,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn axis_point(t: f64) -> HPoint {
        HPoint::new(V3::new(t.cosh(), t.sinh(), 0.0)).unwrap()
    }

    #[test]
    fn dot_signature() {
        let e0 = V3::new(1.0, 0.0, 0.0);
        let e1 = V3::new(0.0, 1.0, 0.0);
        assert_eq!(minkowski_dot(&e0, &e0), -1.0);
        assert_eq!(minkowski_dot(&e1, &e1), 1.0);
        assert_eq!(minkowski_dot(&e0, &e1), 0.0);
    }

    #[test]
    fn distances_on_coordinate_geodesics() {
        let p = HPoint::origin();
        assert_eq!(dist_point_point(&p, &p), 0.0);
        assert!(close(dist_point_point(&p, &axis_point(1.25)), 1.25, 1e-14));
        let q = HPoint::new(V3::new(0.7f64.cosh(), 0.0, 0.7f64.sinh())).unwrap();
        let g = HGeodesic::from_normal(V3::new(0.0, 0.0, 1.0)).unwrap();
        assert!(close(dist_point_geodesic(&q, &g), 0.7, 1e-14));
        assert_eq!(dist_point_geodesic(&p, &g), 0.0);
    }

    #[test]
    fn geodesic_through_coordinate_axis() {
        let p = HPoint::origin();
        let q = axis_point(1.0);
        let g = geodesic_through(&p, &q).unwrap();
        assert!(close(g.normal()[2].abs(), 1.0, 1e-14));
        assert!(dist_point_geodesic(&p, &g) < 1e-14);
        let mid = HPoint::new(p.coords() + q.coords()).unwrap();
        assert!(dist_point_geodesic(&mid, &g) < 1e-10);
        assert!(geodesic_through(&p, &p).is_err());
    }

    #[test]
    fn perpendicular_length() {
        let s = 0.9f64;
        let g1 = HGeodesic::from_normal(V3::new(0.0, 0.0, 1.0)).unwrap();
        let g2 = HGeodesic::from_normal(V3::new(s.sinh(), 0.0, s.cosh())).unwrap();
        assert!(close(common_perpendicular_length(&g1, &g2).unwrap(), s, 1e-14));
        let g3 = HGeodesic::from_normal(V3::new(0.0, 1.0, 0.0)).unwrap();
        assert!(matches!(common_perpendicular_length(&g1, &g3), Err(Error::NotUltraparallel { .. })));
    }

    #[test]
    fn flow_is_unit_speed() {
        let p = HPoint::from_spatial(0.3, -0.4);
        let v = HTangent::new(p, V3::new(0.2, 1.0, 0.5)).unwrap();
        assert_eq!(flow(&p, &v.vector, 0.0), p);
        let q = flow(&p, &v.vector, 2.0);
        assert!(close(dist_point_point(&p, &q), 2.0, 1e-12));
        let (a, b) = (0.6, 1.1);
        let mid = v.advance(a);
        let direct = flow(&p, &v.vector, a + b);
        let two_step = flow(&mid.base, &mid.vector, b);
        assert!((direct.coords() - two_step.coords()).norm() < 1e-10);
    }

    #[test]
    fn reflection_fixes_its_geodesic() {
        let g = HGeodesic::from_normal(V3::new(0.3, 1.0, -0.2)).unwrap();
        let p = g.foot(&HPoint::from_spatial(1.0, 2.0));
        assert!((reflect(&g, p.coords()) - p.coords()).norm() < 1e-12);
        let x = V3::new(1.0, -2.0, 0.5);
        assert!((reflect(&g, &reflect(&g, &x)) - x).norm() < 1e-12);
        let m = reflection_matrix(g.normal());
        assert!((m * x - reflect(&g, &x)).norm() < 1e-12);
        assert!((m * m - M3::identity()).norm() < 1e-12);
    }

    #[test]
    fn boost_moves_center_to_origin() {
        let c = HPoint::from_spatial(1.5, -0.7);
        let b = boost_to_origin(&c);
        assert!((b * c.coords() - V3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
        let j = gram();
        assert!((b.transpose() * j * b - j).norm() < 1e-12);
    }

    #[test]
    fn rotate90_is_counter_clockwise_at_origin() {
        let t = HTangent::new(HPoint::origin(), V3::new(0.0, 1.0, 0.0)).unwrap();
        let r = t.rotate90();
        assert!((r.vector - V3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn disk_round_trip() {
        let p = HPoint::from_spatial(2.0, -3.0);
        let (u, v) = p.to_disk();
        let q = HPoint::from_disk(u, v).unwrap();
        assert!((p.coords() - q.coords()).norm() < 1e-12);
    }
}
