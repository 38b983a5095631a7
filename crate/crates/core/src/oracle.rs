//! Independent checks: plain bisection, finite differences, brute-force
//! maximizers and polygons built point by point in the hyperboloid.
//!
//! Nothing here calls the solvers it is used to check. Equations are
//! restated from their formulas, and the geometric constructions only use
//! the primitives of [`crate::lorentz`].

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{angle_at, dist_point_point, flow, HPoint, HTangent, Segment, V3};
use crate::pants::{EmbeddedHexagon, PantsSpec};

/// Step cap for [`bisect`].
pub const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectRoot {
    pub x: f64,
    pub fx: f64,
    pub width: f64,
    pub steps: usize,
}

/// Bisection until the bracket is narrower than `tol`, the midpoint stops
/// moving, or [`MAX_BISECTIONS`] steps.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<BisectRoot> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(BisectRoot { x: a, fx: 0.0, width: 0.0, steps: 0 });
    }
    if fb == 0.0 {
        return Ok(BisectRoot { x: b, fx: 0.0, width: 0.0, steps: 0 });
    }
    if !(fa.signum() != fb.signum()) {
        return Err(Error::NoBracket { lo: a, hi: b, flo: fa, fhi: fb });
    }
    let rising = fb > 0.0;
    let mut steps = 0;
    while steps < MAX_BISECTIONS && b - a >= tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if (fm > 0.0) == rising {
            b = m;
        } else {
            a = m;
        }
        steps += 1;
    }
    let x = 0.5 * (a + b);
    Ok(BisectRoot { x, fx: f(x), width: b - a, steps })
}

/// Central difference `f(x+h) - f(x-h)`.
pub fn fd_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    f(x + h) - f(x - h)
}

/// Sign of `f(x+h) - f(x-h)`: 1, -1, or 0 when equal.
pub fn fd_derivative_sign<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> i8 {
    let d = fd_difference(f, x, h);
    if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    }
}

// Equations, restated.

fn asin_clamped(v: f64) -> f64 {
    v.clamp(-1.0, 1.0).asin()
}

fn acos_clamped(v: f64) -> f64 {
    v.clamp(-1.0, 1.0).acos()
}

/// Packing-radius angle sum minus `2 pi`.
pub fn radius_equation(chi: i64, n: i64, b: i64, k: i64, r: f64) -> f64 {
    let k = k as f64;
    let m = (2 * chi + b + n) as f64;
    let a = 2.0 * asin_clamped(1.0 / (2.0 * r.cosh()));
    let be = asin_clamped(1.0 / r.cosh());
    let g = 2.0 * asin_clamped(1.0 / (2f64.sqrt() * r.cosh()));
    3.0 * (2.0 - m / k) * a + 2.0 * n as f64 / k * be + 2.0 * b as f64 / k * g - 2.0 * PI
}

pub fn oracle_radius(chi: i64, n: i64, b: i64, k: i64) -> Result<BisectRoot> {
    bisect(|r| radius_equation(chi, n, b, k, r), 0.0, 30.0, 0.0)
}

/// `6 asin(1/(2cosh(x/2))) + 2 asin(cosh(b1/2)/cosh(x/2)) + 2 asin(cosh(b2/2)/cosh(x/2))`.
pub fn pair_function(b1: f64, b2: f64, x: f64) -> f64 {
    let ch = (x / 2.0).cosh();
    6.0 * asin_clamped(1.0 / (2.0 * ch))
        + 2.0 * asin_clamped((b1 / 2.0).cosh() / ch)
        + 2.0 * asin_clamped((b2 / 2.0).cosh() / ch)
}

pub fn interior_equation(b: [f64; 3], x: f64) -> f64 {
    pair_function(b[0], b[1], x) + 2.0 * asin_clamped((b[2] / 2.0).cosh() / (x / 2.0).cosh()) - 2.0 * PI
}

pub fn boundary_equation(b: [f64; 3], x: f64) -> f64 {
    let c = b[2] / 2.0;
    2.0 * acos_clamped(c.tanh() / x.tanh())
        + 2.0 * asin_clamped(c.sinh() / x.sinh())
        + 2.0 * asin_clamped((b[0] / 2.0).cosh() / (x / 2.0).cosh())
        + 2.0 * asin_clamped((b[1] / 2.0).cosh() / (x / 2.0).cosh())
        - PI
}

pub fn oracle_interior_root(b: [f64; 3]) -> Result<BisectRoot> {
    let mut hi = b[2] + 1.0;
    while interior_equation(b, hi) > 0.0 && hi < 1e3 {
        hi *= 2.0;
    }
    bisect(|x| interior_equation(b, x), b[2], hi, 0.0)
}

pub fn oracle_boundary_root(b: [f64; 3]) -> Result<BisectRoot> {
    bisect(|x| boundary_equation(b, x), b[1].max(b[2] / 2.0), b[2], 0.0)
}

/// The `b3` at which `pair_function(b1, b2, b3) = pi`.
pub fn oracle_threshold(b1: f64, b2: f64) -> Result<BisectRoot> {
    bisect(|x| pair_function(b1, b2, x) - PI, b2, 100.0, 0.0)
}

// Pointwise systole, restated.

/// Loop lengths at `p`, from the distance to the foot of the perpendicular
/// on each boundary geodesic.
pub fn oracle_loop_lengths(emb: &EmbeddedHexagon, p: &HPoint) -> [f64; 3] {
    let b = emb.spec.lengths();
    let mut ell = [0.0; 3];
    for i in 0..3 {
        let foot = emb.boundary_geodesics[i].foot(p);
        let x = dist_point_point(p, &foot);
        ell[i] = 2.0 * (x.cosh() * (b[i] / 2.0).sinh()).asinh();
    }
    ell
}

pub fn oracle_sys(emb: &EmbeddedHexagon, p: &HPoint) -> f64 {
    let l = oracle_loop_lengths(emb, p);
    l[0].min(l[1]).min(l[2])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Points per axis of the coarse and refined 2-d grids; at least 16.
    pub resolution: usize,
    pub refinement_levels: usize,
    /// Points on each boundary side.
    pub boundary_resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { resolution: 64, refinement_levels: 6, boundary_resolution: 1024 }
    }
}

/// Cells kept on each side of the incumbent when refining.
const REFINE_HALO: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    pub value: f64,
    pub point: HPoint,
    /// `Some(i)` (0-based) if the point came from the 1-d grid on `B_i`.
    pub boundary: Option<usize>,
    /// Cell size at the last level, in the grid's own parameter.
    pub cell: f64,
}

/// Brute-force maximum of the pointwise systole over the closed hexagon.
pub fn grid_max_systole(spec: &PantsSpec, grid: GridSpec) -> Result<(GridMax, [GridMax; 3])> {
    if grid.resolution < 16 {
        return Err(Error::DegenerateInput(format!("grid resolution {} below 16", grid.resolution)));
    }
    let emb = crate::pants::embed_hexagon(spec)?;
    let area = grid_max_area(&emb, grid)?;
    let sides = [0, 1, 2].map(|i| grid_max_side(&emb, i, grid));
    let mut best = area;
    for s in &sides {
        if s.value > best.value {
            best = *s;
        }
    }
    Ok((best, sides))
}

/// 2-d scan in Fermi coordinates about `B3`, refined around the incumbent.
pub fn grid_max_area(emb: &EmbeddedHexagon, grid: GridSpec) -> Result<GridMax> {
    let coords: Vec<(f64, f64)> = emb.vertices.iter().map(|v| emb.fermi_coords(v)).collect();
    let smin = coords.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let smax = coords.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let tmax = coords.iter().map(|c| c.1).fold(0.0, f64::max);
    let full = (smin, smax, 0.0, tmax);
    let mut bx = full;
    let n = grid.resolution;
    let mut best: Option<(f64, f64, f64)> = None;
    let mut cell = 0.0;
    for _ in 0..=grid.refinement_levels {
        let (s0, s1, t0, t1) = bx;
        let (ds, dt) = ((s1 - s0) / (n - 1) as f64, (t1 - t0) / (n - 1) as f64);
        cell = ds.max(dt);
        let level = (0..n * n)
            .into_par_iter()
            .filter_map(|k| {
                let s = s0 + ds * (k % n) as f64;
                let t = t0 + dt * (k / n) as f64;
                let p = emb.fermi_point(s, t);
                emb.contains(&p).then(|| (oracle_sys(emb, &p), s, t))
            })
            .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) { b } else { a });
        if let Some(l) = level {
            if best.is_none_or(|b| l.0 > b.0) {
                best = Some(l);
            }
        }
        let (_, s, t) = best.ok_or_else(|| Error::Construction("no grid point in the hexagon".into()))?;
        bx = (
            (s - REFINE_HALO * ds).max(full.0),
            (s + REFINE_HALO * ds).min(full.1),
            (t - REFINE_HALO * dt).max(full.2),
            (t + REFINE_HALO * dt).min(full.3),
        );
    }
    let (value, s, t) = best.expect("set above");
    Ok(GridMax { value, point: emb.fermi_point(s, t), boundary: None, cell })
}

/// 1-d scan of the hexagon side on `B_i`, refined around the incumbent.
pub fn grid_max_side(emb: &EmbeddedHexagon, i: usize, grid: GridSpec) -> GridMax {
    let v = emb.vertices;
    let (p, q) = [(v[0], v[1]), (v[2], v[3]), (v[4], v[5])][i];
    let line = emb.boundary_geodesics[i];
    let seg = match Segment::new(&p, &q, &line) {
        Ok(seg) => seg,
        Err(_) => return GridMax { value: f64::NEG_INFINITY, point: p, boundary: Some(i), cell: 0.0 },
    };
    let len = 2.0 * seg.half_length;
    let at = |s: f64| line.foot(&seg.from_start(s));
    let n = grid.boundary_resolution.max(2);
    let (mut a, mut b) = (0.0, len);
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut cell = 0.0;
    for _ in 0..=grid.refinement_levels {
        let h = (b - a) / (n - 1) as f64;
        cell = h;
        let level = (0..n)
            .into_par_iter()
            .map(|k| {
                let s = a + h * k as f64;
                (oracle_sys(emb, &at(s)), s)
            })
            .reduce(|| (f64::NEG_INFINITY, 0.0), |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x });
        if level.0 > best.0 {
            best = level;
        }
        a = (best.1 - REFINE_HALO * h).max(0.0);
        b = (best.1 + REFINE_HALO * h).min(len);
    }
    GridMax { value: best.0, point: at(best.1), boundary: Some(i), cell }
}

// Polygons built point by point.

/// Regular `k`-gon centred at the origin with side `side`; the circumradius
/// is found by bisection on the measured side.
pub fn regular_polygon(k: usize, side: f64) -> Result<Vec<HPoint>> {
    if k < 3 {
        return Err(Error::DegenerateInput(format!("a polygon needs 3 vertices, got {k}")));
    }
    let o = HPoint::origin();
    let vert = |radius: f64, j: usize| {
        let th = 2.0 * PI * j as f64 / k as f64;
        flow(&o, &V3::new(0.0, th.cos(), th.sin()), radius)
    };
    let root = bisect(|radius| dist_point_point(&vert(radius, 0), &vert(radius, 1)) - side, 0.0, side + 5.0, 0.0)?;
    Ok((0..k).map(|j| vert(root.x, j)).collect())
}

/// Interior angles of a convex polygon.
pub fn polygon_angles(verts: &[HPoint]) -> Result<Vec<f64>> {
    let k = verts.len();
    (0..k).map(|j| angle_at(&verts[j], &verts[(j + k - 1) % k], &verts[(j + 1) % k])).collect()
}

/// `(k - 2) pi` minus the angle sum.
pub fn angle_defect(verts: &[HPoint]) -> Result<f64> {
    let sum: f64 = polygon_angles(verts)?.iter().sum();
    Ok((verts.len() as f64 - 2.0) * PI - sum)
}

pub fn equilateral_triangle(side: f64) -> Result<Vec<HPoint>> {
    regular_polygon(3, side)
}

pub fn square(side: f64) -> Result<Vec<HPoint>> {
    regular_polygon(4, side)
}

/// Half of the square of side `d`, cut along a diagonal.
pub fn half_square(d: f64) -> Result<Vec<HPoint>> {
    let sq = square(d)?;
    Ok(vec![sq[0], sq[1], sq[2]])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuiltSaccheri {
    pub summit: f64,
    pub summit_angle: f64,
    pub vertices: [HPoint; 4],
}

/// Quadrilateral with base `base` on the geodesic `x2 = 0` and legs of
/// length `legs` perpendicular to it.
pub fn build_saccheri(base: f64, legs: f64) -> Result<BuiltSaccheri> {
    let o = HPoint::origin();
    let along = V3::new(0.0, 1.0, 0.0);
    let p0 = flow(&o, &along, -base / 2.0);
    let p1 = flow(&o, &along, base / 2.0);
    let up0 = HTangent::new(p0, V3::new(0.0, 0.0, 1.0))?;
    let up1 = HTangent::new(p1, V3::new(0.0, 0.0, 1.0))?;
    let q0 = up0.advance(legs).base;
    let q1 = up1.advance(legs).base;
    Ok(BuiltSaccheri {
        summit: dist_point_point(&q0, &q1),
        summit_angle: angle_at(&q1, &q0, &p1)?,
        vertices: [p0, p1, q1, q0],
    })
}

/// Base of the Saccheri quadrilateral with legs `legs` and summit `summit`.
pub fn saccheri_base(legs: f64, summit: f64) -> Result<f64> {
    Ok(bisect(|b| build_saccheri(b, legs).map(|q| q.summit).unwrap_or(f64::NAN) - summit, 0.0, summit, 0.0)?.x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuiltIsosceles {
    pub apex: f64,
    pub base_angle: f64,
    pub vertices: [HPoint; 3],
}

/// Triangle with base `base` and two sides `legs`; the apex height is
/// found by bisection on the measured leg.
pub fn build_isosceles(base: f64, legs: f64) -> Result<BuiltIsosceles> {
    let o = HPoint::origin();
    let p0 = flow(&o, &V3::new(0.0, 1.0, 0.0), -base / 2.0);
    let p1 = flow(&o, &V3::new(0.0, 1.0, 0.0), base / 2.0);
    let up = V3::new(0.0, 0.0, 1.0);
    let h = bisect(|t| dist_point_point(&flow(&o, &up, t), &p0) - legs, 0.0, legs, 0.0)?;
    let apex = flow(&o, &up, h.x);
    Ok(BuiltIsosceles {
        apex: angle_at(&apex, &p0, &p1)?,
        base_angle: angle_at(&p0, &apex, &p1)?,
        vertices: [p0, p1, apex],
    })
}

/// Heights over the base geodesic `x2 = 0` of two points on one line: a
/// leg of length `b` stands on the base, the line leaves its top at angle
/// `alpha` to the downward leg, and the points lie at distance `c` forwards
/// and `ellp - c` backwards along it. Returns `(a, a')`.
pub fn birect_heights(b: f64, c: f64, ellp: f64, alpha: f64) -> Result<(f64, f64)> {
    let top = HTangent::new(HPoint::origin(), V3::new(0.0, 0.0, 1.0))?.advance(b);
    let down = HTangent::new(top.base, -top.vector)?;
    let dir = down.rotate(alpha).vector;
    let height = |t: f64| flow(&top.base, &dir, t).coords()[2].asinh();
    Ok((height(c), height(c - ellp)))
}

/// Walks six sides with left turns of a right angle and returns the gap
/// between the start and the end point.
pub fn hexagon_walk_gap(sides: [f64; 6]) -> Result<f64> {
    let start = HPoint::origin();
    let mut t = HTangent::new(start, V3::new(0.0, 1.0, 0.0))?;
    for s in sides {
        t = t.advance(s).rotate90();
    }
    Ok(dist_point_point(&start, &t.base))
}

// Fixtures.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    #[serde(with = "crate::num17")]
    pub value: f64,
    pub settings: String,
    pub command: String,
    pub date: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureFile {
    pub constants: Vec<Fixture>,
}

impl FixtureFile {
    pub fn get(&self, name: &str) -> Result<f64> {
        self.constants
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.value)
            .ok_or_else(|| Error::Schema(format!("fixture {name:?} missing")))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// The fixture file shipped with the crate.
pub const BUNDLED_FIXTURES: &str = include_str!("../fixtures/constants.json");

pub fn bundled_fixtures() -> Result<FixtureFile> {
    FixtureFile::parse(BUNDLED_FIXTURES)
}

pub const INTERIOR_SPECS: [[f64; 3]; 3] = [[1.0, 1.0, 1.0], [0.5, 1.0, 1.5], [2.0, 2.0, 2.0]];
pub const BOUNDARY_SPECS: [[f64; 3]; 3] = [[1.0, 1.0, 40.0], [1.0, 2.0, 20.0], [0.5, 0.5, 15.0]];

pub fn spec_tag(b: [f64; 3]) -> String {
    format!("{}_{}_{}", b[0], b[1], b[2])
}

/// Regenerates every constant. `command` and `date` are recorded verbatim.
pub fn generate_fixtures(command: &str, date: &str) -> Result<FixtureFile> {
    let bis = format!("bisection, {MAX_BISECTIONS} steps max, to adjacent floats");
    let mut out = Vec::new();
    let mut push = |name: String, value: f64, settings: String| {
        out.push(Fixture { name, value, settings, command: command.to_string(), date: date.to_string() });
    };
    for (chi, n, b) in [(-1, 0, 1), (-1, 1, 0), (-2, 0, 1), (-3, 2, 1)] {
        let r = oracle_radius(chi, n, b, 1)?;
        push(format!("radius_chi{chi}_n{n}_b{b}_k1"), r.x, format!("{bis} on [0, 30]"));
    }
    for b in INTERIOR_SPECS {
        let r = oracle_interior_root(b)?;
        push(format!("interior_root_{}", spec_tag(b)), r.x, format!("{bis} on [b3, 2^k (b3 + 1)]"));
    }
    for b in BOUNDARY_SPECS {
        let r = oracle_boundary_root(b)?;
        push(format!("boundary_root_{}", spec_tag(b)), r.x, format!("{bis} on [max(b2, b3/2), b3]"));
    }
    let t = oracle_threshold(1.0, 1.0)?;
    push("threshold_b3_1_1".into(), t.x, format!("{bis} on [b2, 100]"));
    let grid = GridSpec::default();
    for b in INTERIOR_SPECS.iter().chain(&BOUNDARY_SPECS) {
        let spec = PantsSpec::new(b[0], b[1], b[2])?;
        let (best, _) = grid_max_systole(&spec, grid)?;
        push(
            format!("grid_max_{}", spec_tag(*b)),
            best.value,
            format!(
                "grid {}^2 plus {} per side, {} refinements of +-3 cells",
                grid.resolution, grid.boundary_resolution, grid.refinement_levels
            ),
        );
    }
    Ok(FixtureFile { constants: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_linear() {
        let r = bisect(|x| x - 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((r.x - 1.0).abs() < 1e-12);
        assert!(r.width < 1e-12);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn fd_sign_of_cosh() {
        assert_eq!(fd_derivative_sign(f64::cosh, 1.0, 1e-5), 1);
        assert_eq!(fd_derivative_sign(|x: f64| -x, 1.0, 1e-5), -1);
    }
}
