//! The three-holed sphere: hexagon embedding, pointwise systole of loops and
//! its maximum.
//!
//! The seams cut the pants into two isometric right-angled hexagons with
//! alternate sides `b1/2, b2/2, b3/2`. Points are represented in the closed
//! hexagon; a point at distance `X_i` from `B_i` has a simple loop around
//! `B_i` of length `l_i` with `sinh(l_i/2) = cosh(X_i) sinh(b_i/2)`, and the
//! systole at the point is `min(l_1, l_2, l_3)`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clamp::DOMAIN_SLACK;
use crate::error::{Error, Result};
use crate::lorentz::{
    common_perpendicular_length, dist_point_point, flow, intersection, minkowski_cross, minkowski_dot, HGeodesic,
    HPoint, V3,
};
use crate::polytrig::{
    alpha, alpha_prime, asin_cosh_ratio, hexagon_solve, isosceles_angles, saccheri_from_leg, RightHexagon,
};
use crate::roots::{bisect_newton, Root, RootOptions};

/// Containment slack for the side-of-geodesic tests, on `<p, n>`.
pub const CONTAINMENT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PantsSpec {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl PantsSpec {
    /// Sorts the lengths ascending.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let mut v = [a, b, c];
        for x in v {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::DegenerateInput(format!("boundary length {x} must be positive and finite")));
            }
        }
        v.sort_by(|x, y| x.total_cmp(y));
        Ok(PantsSpec { b1: v[0], b2: v[1], b3: v[2] })
    }

    pub fn lengths(&self) -> [f64; 3] {
        [self.b1, self.b2, self.b3]
    }
}

impl fmt::Display for PantsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.b1, self.b2, self.b3)
    }
}

/// One of the two hexagons, placed with its `B3` side on the geodesic
/// `x2 = 0`, centred at (1,0,0), and the hexagon in `x2 > 0`.
///
/// Vertices run counter-clockwise: `v0 v1` on `B1`, `v2 v3` on `B2`,
/// `v4 v5` on `B3`. Side `j` joins `v_j` to `v_{j+1}`:
/// `B1, seam12, B2, seam23, B3, seam31`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedHexagon {
    pub spec: PantsSpec,
    pub hexagon: RightHexagon,
    /// Geodesics containing `B1, B2, B3`, hexagon on the negative side.
    pub boundary_geodesics: [HGeodesic; 3],
    /// Seam opposite `B_i` at index `i`: `seam23, seam31, seam12`.
    pub seam_geodesics: [HGeodesic; 3],
    pub vertices: [HPoint; 6],
    pub closure_residual: f64,
}

impl EmbeddedHexagon {
    /// The six side geodesics in cyclic order.
    pub fn sides(&self) -> [HGeodesic; 6] {
        let [b1, b2, b3] = self.boundary_geodesics;
        let [s23, s31, s12] = self.seam_geodesics;
        [b1, s12, b2, s23, b3, s31]
    }

    /// Side lengths in cyclic order.
    pub fn side_lengths(&self) -> [f64; 6] {
        let h = &self.hexagon;
        [h.a, h.c_op, h.b, h.a_op, h.c, h.b_op]
    }

    /// The slack grows with `x0`: the products behind `signed` lose about
    /// `x0 * EPSILON` far from the origin.
    pub fn check_contains(&self, p: &HPoint) -> Result<()> {
        let slack = CONTAINMENT_SLACK * p.coords()[0];
        for (side, g) in self.sides().iter().enumerate() {
            let v = g.signed(p);
            if v > slack {
                return Err(Error::OutsideDomain { side, value: v });
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.check_contains(p).is_ok()
    }

    /// Point at signed arclength `s` along `B3` (from its midpoint towards
    /// `v5`) and distance `t` from it.
    pub fn fermi_point(&self, s: f64, t: f64) -> HPoint {
        HPoint::from_sheet(fermi_vec(s, t))
    }

    /// Inverse of [`fermi_point`](Self::fermi_point).
    pub fn fermi_coords(&self, p: &HPoint) -> (f64, f64) {
        let x = p.coords();
        ((x[1] / x[0]).atanh(), x[2].asinh())
    }

    /// Half-length of the `B3` side: the side spans `s` in `[-h, h]`.
    pub fn b3_half_side(&self) -> f64 {
        self.spec.b3 / 4.0
    }

    /// Centroid of the six vertices, projected to the sheet.
    pub fn centroid(&self) -> HPoint {
        let sum = self.vertices.iter().fold(V3::zeros(), |acc, v| acc + v.coords());
        HPoint::new(sum).expect("sum of sheet points is timelike")
    }
}

fn fermi_vec(s: f64, t: f64) -> V3 {
    V3::new(t.cosh() * s.cosh(), t.cosh() * s.sinh(), t.sinh())
}

pub fn embed_hexagon(spec: &PantsSpec) -> Result<EmbeddedHexagon> {
    let hexagon = hexagon_solve(spec.b1 / 2.0, spec.b2 / 2.0, spec.b3 / 2.0)?;
    let h = hexagon.c / 2.0;
    let v4 = HPoint::from_sheet(V3::new(h.cosh(), -h.sinh(), 0.0));
    let v5 = HPoint::from_sheet(V3::new(h.cosh(), h.sinh(), 0.0));
    let up = V3::new(0.0, 0.0, 1.0);
    let v0 = flow(&v5, &up, hexagon.b_op);
    let v3 = flow(&v4, &up, hexagon.a_op);
    // Normals are built from exact transports rather than cross products of
    // far-away points, which cancel badly.
    let n31 = V3::new(h.sinh(), h.cosh(), 0.0);
    let n23 = V3::new(-h.sinh(), h.cosh(), 0.0);
    let n1 = v5.coords() * hexagon.b_op.sinh() + up * hexagon.b_op.cosh();
    let n2 = v4.coords() * hexagon.a_op.sinh() + up * hexagon.a_op.cosh();
    let n12 = minkowski_cross(&n1, &n2) / hexagon.c_op.sinh();

    let reference = HPoint::new(v0.coords() + v3.coords() + v4.coords() + v5.coords())?;
    let line = |n: V3| -> Result<HGeodesic> { Ok(HGeodesic::from_unit_normal(n).oriented_away_from(&reference)) };
    let b1 = line(n1)?;
    let b2 = line(n2)?;
    let b3 = HGeodesic::from_normal(V3::new(0.0, 0.0, -1.0))?;
    let s12 = line(n12)?;
    let s23 = line(n23)?;
    let s31 = line(n31)?;
    let v1 = intersection(&b1, &s12)?;
    let v2 = intersection(&b2, &s12)?;
    let vertices = [v0, v1, v2, v3, v4, v5];

    let closure_residual = (dist_point_point(&v0, &v1) - hexagon.a)
        .abs()
        .max((dist_point_point(&v2, &v3) - hexagon.b).abs())
        .max((dist_point_point(&v1, &v2) - hexagon.c_op).abs() / hexagon.c_op.max(1.0));

    let emb = EmbeddedHexagon {
        spec: *spec,
        hexagon,
        boundary_geodesics: [b1, b2, b3],
        seam_geodesics: [s23, s31, s12],
        vertices,
        closure_residual,
    };
    if !(closure_residual < closure_tolerance(spec)) {
        return Err(Error::Construction(format!("hexagon for {spec} fails to close (residual {closure_residual:e})")));
    }
    Ok(emb)
}

/// Bound on the closure residual of [`embed_hexagon`].
///
/// A hexagon with a long `B3` side is a thin strip: its far corners move by
/// roughly `cosh(b3/2)` times any rounding in the seam lengths, so the bound
/// is `1e-8` widened by that factor.
pub fn closure_tolerance(spec: &PantsSpec) -> f64 {
    1e-8f64.max(64.0 * f64::EPSILON * (spec.b3 / 2.0).cosh())
}

/// Seam lengths measured between the boundary geodesics, in the order
/// `seam23, seam31, seam12`.
pub fn measured_seams(emb: &EmbeddedHexagon) -> Result<[f64; 3]> {
    let [b1, b2, b3] = emb.boundary_geodesics;
    Ok([
        common_perpendicular_length(&b2, &b3)?,
        common_perpendicular_length(&b3, &b1)?,
        common_perpendicular_length(&b1, &b2)?,
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystoleReport {
    pub point: HPoint,
    pub x: [f64; 3],
    pub ell: [f64; 3],
    pub sys: f64,
    /// Indices (1-based) attaining the minimum, within `1e-12` relative.
    pub argmin: Vec<usize>,
}

/// Loop length around a boundary of length `b` from a point at distance `x`.
pub fn loop_length(b: f64, x: f64) -> f64 {
    saccheri_from_leg(b, x).summit
}

pub fn systole_at(emb: &EmbeddedHexagon, p: &HPoint) -> Result<SystoleReport> {
    emb.check_contains(p)?;
    Ok(systole_unchecked(emb, p))
}

/// As [`systole_at`] without the containment test.
pub fn systole_unchecked(emb: &EmbeddedHexagon, p: &HPoint) -> SystoleReport {
    let lengths = emb.spec.lengths();
    let mut x = [0.0; 3];
    let mut ell = [0.0; 3];
    for i in 0..3 {
        x[i] = (-emb.boundary_geodesics[i].signed(p)).max(0.0).asinh();
        ell[i] = loop_length(lengths[i], x[i]);
    }
    let sys = ell[0].min(ell[1]).min(ell[2]);
    let argmin = (0..3).filter(|&i| ell[i] - sys <= 1e-12 * sys).map(|i| i + 1).collect();
    SystoleReport { point: *p, x, ell, sys, argmin }
}

/// `f_(b1,b2)(x) = 6 asin(1/(2 cosh(x/2))) + 2 sum_i asin(cosh(b_i/2)/cosh(x/2))`.
pub fn f_pair(b1: f64, b2: f64, x: f64) -> Result<f64> {
    check_domain(x, b1.max(b2))?;
    let y = x / 2.0;
    Ok(3.0 * alpha(y) + 2.0 * asin_cosh_ratio(b1 / 2.0, y) + 2.0 * asin_cosh_ratio(b2 / 2.0, y))
}

fn check_domain(x: f64, floor: f64) -> Result<()> {
    if x.is_nan() || x < floor - DOMAIN_SLACK {
        return Err(Error::Domain { func: "asin(cosh(b/2)/cosh(x/2))", value: x });
    }
    Ok(())
}

/// Derivative of `2 asin(cosh(b/2)/cosh(x/2))` in `x`.
fn arcsine_term_prime(b: f64, x: f64) -> f64 {
    let (u, y) = (b / 2.0, x / 2.0);
    let s = ((y - u).sinh() * (y + u).sinh()).max(0.0);
    -u.cosh() * y.tanh() / s.sqrt()
}

/// Left side of the angle-sum equation for `k` boundary lengths on a surface
/// of Euler characteristic `chi`.
pub fn f_general(chi: i64, k: usize, lengths: &[f64], x: f64) -> Result<f64> {
    if lengths.len() != k {
        return Err(Error::DegenerateInput(format!("{} lengths given for k = {k}", lengths.len())));
    }
    let top = lengths.iter().copied().fold(0.0, f64::max);
    check_domain(x, top)?;
    let y = x / 2.0;
    let coeff = 6.0 * (-2.0 * chi as f64 + 2.0 - k as f64);
    let sum: f64 = lengths.iter().map(|&l| asin_cosh_ratio(l / 2.0, y)).sum();
    Ok(coeff * (0.5 * alpha(y)) + 2.0 * sum)
}

/// `f_(b1,b2)(x) + 2 asin(cosh(b3/2)/cosh(x/2))`; the interior maximum
/// solves `interior_lhs = 2 pi`.
pub fn interior_lhs(spec: &PantsSpec, x: f64) -> Result<f64> {
    check_domain(x, spec.b3)?;
    Ok(f_pair(spec.b1, spec.b2, x)? + 2.0 * asin_cosh_ratio(spec.b3 / 2.0, x / 2.0))
}

fn interior_lhs_prime(spec: &PantsSpec, x: f64) -> f64 {
    1.5 * alpha_prime(x / 2.0)
        + arcsine_term_prime(spec.b1, x)
        + arcsine_term_prime(spec.b2, x)
        + arcsine_term_prime(spec.b3, x)
}

/// `g(x) = 2 theta + psi + 2 sum_i asin(cosh(b_i/2)/cosh(x/2))` where
/// `psi` and `theta` are the apex and base angles of the isosceles triangle
/// with legs `x` and base `b3`. Defined for `x >= max(b2, b3/2)`.
pub fn g_fn(spec: &PantsSpec, x: f64) -> Result<f64> {
    check_domain(x, spec.b2.max(spec.b3 / 2.0))?;
    let (psi, theta) = isosceles_angles(spec.b3, x)?;
    let y = x / 2.0;
    Ok(2.0 * theta + psi + 2.0 * asin_cosh_ratio(spec.b1 / 2.0, y) + 2.0 * asin_cosh_ratio(spec.b2 / 2.0, y))
}

fn g_prime(spec: &PantsSpec, x: f64) -> f64 {
    let c = spec.b3 / 2.0;
    let s = ((x - c).sinh() * (x + c).sinh()).max(0.0);
    2.0 * c.sinh() * (1.0 - x.cosh()) / (x.sinh() * s.sqrt())
        + arcsine_term_prime(spec.b1, x)
        + arcsine_term_prime(spec.b2, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    Interior,
    Boundary,
}

impl CaseTag {
    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::Interior => "Interior",
            CaseTag::Boundary => "Boundary",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Interior iff `f_(b1,b2)(b3) > pi`; equality counts as Boundary.
pub fn classify_case(spec: &PantsSpec) -> CaseTag {
    match f_pair(spec.b1, spec.b2, spec.b3) {
        Ok(v) if v > PI => CaseTag::Interior,
        _ => CaseTag::Boundary,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    Interior(HPoint),
    /// Point on `B3` at Fermi parameter `s`.
    Boundary {
        s: f64,
        point: HPoint,
    },
}

impl Witness {
    pub fn point(&self) -> HPoint {
        match *self {
            Witness::Interior(p) => p,
            Witness::Boundary { point, .. } => point,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxSystoleResult {
    pub value: f64,
    pub case_tag: CaseTag,
    pub witness: Witness,
    /// Residual of the defining equation at the root.
    pub residual: f64,
    /// Largest `|l_i - value|` over the loops through the witness that
    /// realize the maximum.
    pub witness_residual: f64,
}

/// Root of `interior_lhs = 2 pi` on `[b3, inf)`, without checking the case.
pub fn interior_root(spec: &PantsSpec, opts: RootOptions) -> Result<Root> {
    let f = |x: f64| interior_lhs(spec, x).unwrap_or(f64::NAN) - 2.0 * PI;
    let lo = spec.b3;
    if f(lo) < 0.0 {
        return Err(Error::NoRoot(format!("interior equation is below 2 pi at x = b3 for {spec}")));
    }
    let mut hi = lo + 1.0;
    while f(hi) > 0.0 {
        hi = lo + 2.0 * (hi - lo);
        if hi > 1e3 {
            return Err(Error::NoRoot(format!("no upper bracket for the interior equation of {spec}")));
        }
    }
    bisect_newton(f, |x| interior_lhs_prime(spec, x), lo, hi, opts)
}

/// Root of `g = pi` on `[max(b2, b3/2), b3]`, without checking the case.
pub fn boundary_root(spec: &PantsSpec, opts: RootOptions) -> Result<Root> {
    let lo = spec.b2.max(spec.b3 / 2.0);
    let f = |x: f64| g_fn(spec, x).unwrap_or(f64::NAN) - PI;
    bisect_newton(f, |x| g_prime(spec, x), lo, spec.b3, opts)
        .map_err(|e| Error::NoRoot(format!("g(x) = pi on [{lo}, {}] for {spec}: {e}", spec.b3)))
}

/// Interior point where all three loops have length `x`, by Gauss-Newton in
/// Fermi coordinates seeded at the hexagon centroid.
///
/// The residuals are `(sinh(l_i/2) - sinh(x/2)) / cosh(x/2)`, roughly
/// `(l_i - x)/2`. Matching distances instead goes wrong near `B3`, where
/// `acosh` blows small errors in `x` up into large distance errors.
///
/// Fails if some residual stays above `tol`.
pub fn locate_by_loops(emb: &EmbeddedHexagon, x: f64, tol: f64) -> Result<HPoint> {
    let (mut s, mut t) = emb.fermi_coords(&emb.centroid());
    let normals = emb.boundary_geodesics.map(|g| *g.normal());
    let half = emb.spec.lengths().map(|b| (b / 2.0).sinh());
    let (sx, cx) = ((x / 2.0).sinh(), (x / 2.0).cosh());
    let eval = |s: f64, t: f64| -> ([f64; 3], [[f64; 2]; 3]) {
        let p = fermi_vec(s, t);
        let ds = V3::new(t.cosh() * s.sinh(), t.cosh() * s.cosh(), 0.0);
        let dt = V3::new(t.sinh() * s.cosh(), t.sinh() * s.sinh(), t.cosh());
        let mut r = [0.0; 3];
        let mut j = [[0.0; 2]; 3];
        for i in 0..3 {
            let u = (-minkowski_dot(&p, &normals[i])).max(0.0);
            let c = (1.0 + u * u).sqrt();
            let w = half[i] * u / (c * cx);
            r[i] = (half[i] * c - sx) / cx;
            j[i] = [-minkowski_dot(&ds, &normals[i]) * w, -minkowski_dot(&dt, &normals[i]) * w];
        }
        (r, j)
    };
    let norm2 = |r: &[f64; 3]| r.iter().map(|v| v * v).sum::<f64>();
    let (mut r, mut j) = eval(s, t);
    for _ in 0..200 {
        let (mut a11, mut a12, mut a22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..3 {
            a11 += j[i][0] * j[i][0];
            a12 += j[i][0] * j[i][1];
            a22 += j[i][1] * j[i][1];
            g1 += j[i][0] * r[i];
            g2 += j[i][1] * r[i];
        }
        let det = a11 * a22 - a12 * a12;
        if det.abs() < 1e-300 {
            break;
        }
        let ds = -(a22 * g1 - a12 * g2) / det;
        let dt = -(a11 * g2 - a12 * g1) / det;
        let mut lambda = 1.0;
        let base = norm2(&r);
        let mut moved = false;
        while lambda > 1e-6 {
            let (rn, jn) = eval(s + lambda * ds, t + lambda * dt);
            if norm2(&rn) <= base {
                s += lambda * ds;
                t += lambda * dt;
                r = rn;
                j = jn;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !moved || (lambda * ds).abs().max((lambda * dt).abs()) < 1e-15 {
            break;
        }
    }
    // l3 is even in t, so a witness hugging B3 can land just across it
    let p = emb.fermi_point(s, t.max(0.0));
    let worst = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(worst < tol) {
        return Err(Error::NoSolution(format!("no hexagon point with all loops of length {x} (residual {worst:e})")));
    }
    Ok(p)
}

pub fn solve_interior_max(spec: &PantsSpec) -> Result<MaxSystoleResult> {
    solve_interior_max_with(spec, RootOptions::default())
}

pub fn solve_interior_max_with(spec: &PantsSpec, opts: RootOptions) -> Result<MaxSystoleResult> {
    let case = classify_case(spec);
    if case != CaseTag::Interior {
        return Err(Error::WrongCase { expected: "Interior", found: case.name() });
    }
    let root = interior_root(spec, opts)?;
    let x = root.x;
    let emb = embed_hexagon(spec)?;
    // x is only known to the bracket width; near the threshold the root
    // hugs x = b3 and bisection stops a few 1e-9 short of it.
    let p = locate_by_loops(&emb, x, opts.bracket_width.max(1e-9))?;
    let rep = systole_at(&emb, &p)?;
    let witness_residual = rep.ell.iter().fold(0.0f64, |m, l| m.max((l - x).abs()));
    Ok(MaxSystoleResult {
        value: x,
        case_tag: CaseTag::Interior,
        witness: Witness::Interior(p),
        residual: root.residual,
        witness_residual,
    })
}

/// Point of `B3` where `l1 = l2`, as a Fermi parameter.
pub fn boundary_balance_point(emb: &EmbeddedHexagon) -> Result<f64> {
    let h = emb.b3_half_side();
    let diff = |s: f64| {
        let rep = systole_unchecked(emb, &emb.fermi_point(s, 0.0));
        rep.ell[0] - rep.ell[1]
    };
    let (mut lo, mut hi) = (-h, h);
    let (flo, fhi) = (diff(lo), diff(hi));
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(Error::NoBracket { lo, hi, flo, fhi });
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        if diff(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn solve_boundary_max(spec: &PantsSpec) -> Result<MaxSystoleResult> {
    solve_boundary_max_with(spec, RootOptions::default())
}

pub fn solve_boundary_max_with(spec: &PantsSpec, opts: RootOptions) -> Result<MaxSystoleResult> {
    let case = classify_case(spec);
    if case != CaseTag::Boundary {
        return Err(Error::WrongCase { expected: "Boundary", found: case.name() });
    }
    let root = boundary_root(spec, opts)?;
    let x = root.x;
    let emb = embed_hexagon(spec)?;
    let s = boundary_balance_point(&emb)?;
    let point = emb.fermi_point(s, 0.0);
    let rep = systole_at(&emb, &point)?;
    let witness_residual = (rep.ell[0] - x).abs().max((rep.ell[1] - x).abs());
    Ok(MaxSystoleResult {
        value: x,
        case_tag: CaseTag::Boundary,
        witness: Witness::Boundary { s, point },
        residual: root.residual,
        witness_residual,
    })
}

pub fn max_systole(spec: &PantsSpec) -> Result<MaxSystoleResult> {
    max_systole_with(spec, RootOptions::default())
}

pub fn max_systole_with(spec: &PantsSpec, opts: RootOptions) -> Result<MaxSystoleResult> {
    match classify_case(spec) {
        CaseTag::Interior => solve_interior_max_with(spec, opts),
        CaseTag::Boundary => solve_boundary_max_with(spec, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: f64, b: f64, c: f64) -> PantsSpec {
        PantsSpec::new(a, b, c).unwrap()
    }

    #[test]
    fn sorts_and_rejects() {
        let s = spec(3.0, 1.0, 2.0);
        assert_eq!(s.lengths(), [1.0, 2.0, 3.0]);
        assert!(PantsSpec::new(0.0, 1.0, 1.0).is_err());
        assert!(PantsSpec::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn embedding_closes() {
        for s in [spec(1.0, 2.0, 3.0), spec(0.5, 1.5, 4.0), spec(1.0, 1.0, 40.0), spec(2.0, 2.0, 2.0)] {
            let e = embed_hexagon(&s).unwrap();
            assert!(e.closure_residual < closure_tolerance(&s), "{s}: {}", e.closure_residual);
            let seams = measured_seams(&e).unwrap();
            let h = e.hexagon;
            for (m, want) in seams.iter().zip([h.a_op, h.b_op, h.c_op]) {
                assert!((m - want).abs() < 1e-9 * want.max(1.0), "{s}: {m} vs {want}");
            }
        }
    }

    #[test]
    fn boundary_points_have_base_length_loops() {
        let s = spec(1.0, 2.0, 3.0);
        let e = embed_hexagon(&s).unwrap();
        let [v0, v1, v2, _, v4, v5] = e.vertices;
        let mid = |a: &HPoint, b: &HPoint| HPoint::new(a.coords() + b.coords()).unwrap();
        let r = systole_at(&e, &mid(&v0, &v1)).unwrap();
        assert!(r.x[0] < 1e-12 && (r.ell[0] - 1.0).abs() < 1e-12);
        let r = systole_at(&e, &mid(&v4, &v5)).unwrap();
        assert!((r.ell[2] - 3.0).abs() < 1e-12);
        let r = systole_at(&e, &v2).unwrap();
        assert!(r.x[1] < 1e-12 && r.argmin == vec![2]);
        let outside = e.fermi_point(0.0, -0.5);
        assert!(matches!(systole_at(&e, &outside), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn general_and_pair_forms_agree() {
        let s = spec(1.0, 2.0, 3.0);
        for x in [3.0, 3.5, 5.0, 9.0] {
            let a = interior_lhs(&s, x).unwrap();
            let b = f_general(-1, 3, &[1.0, 2.0, 3.0], x).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
        assert!((2.0 * asin_cosh_ratio(1.5, 1.5) - PI).abs() < 1e-15);
        assert!(f_general(-1, 3, &[1.0, 2.0, 3.0], 2.0).is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        let s = spec(1.0, 2.0, 3.0);
        let h = 1e-6;
        for x in [3.2, 4.0, 6.0] {
            let fd = (interior_lhs(&s, x + h).unwrap() - interior_lhs(&s, x - h).unwrap()) / (2.0 * h);
            assert!((fd - interior_lhs_prime(&s, x)).abs() < 1e-6);
        }
        let s = spec(1.0, 1.0, 10.0);
        for x in [5.5, 7.0, 9.5] {
            let fd = (g_fn(&s, x + h).unwrap() - g_fn(&s, x - h).unwrap()) / (2.0 * h);
            assert!((fd - g_prime(&s, x)).abs() < 1e-6);
        }
    }

    #[test]
    fn g_meets_f_at_b3() {
        for s in [spec(1.0, 1.0, 40.0), spec(1.0, 2.0, 3.0), spec(0.5, 0.5, 15.0)] {
            let g = g_fn(&s, s.b3).unwrap();
            let f = f_pair(s.b1, s.b2, s.b3).unwrap();
            assert!((g - f).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_case_errors() {
        assert!(matches!(solve_boundary_max(&spec(1.0, 1.0, 1.0)), Err(Error::WrongCase { .. })));
        assert!(matches!(solve_interior_max(&spec(1.0, 1.0, 40.0)), Err(Error::WrongCase { .. })));
    }
}
