//! Cut locus of a boundary geodesic of a pants surface, sampled through the
//! lifts of the boundary to the universal cover.
//!
//! The pants group is the orientation-preserving half of the group generated
//! by reflections `r1, r2, r3` in the seams of the embedded hexagon, `r_i`
//! being the reflection in the seam opposite `B_i`. With `a1 = r2 r3` and
//! `a2 = r3 r1`, the elements `a1`, `a2` and `a1 a2` translate along `B1`,
//! `B2` and `B3` by their lengths.

use rayon::prelude::*;

use crate::clamp::acosh_checked;
use crate::error::{Error, Result};
use crate::lorentz::{
    boost_to_origin, dist_point_geodesic, dist_point_point, gram, minkowski_dot, reflection_matrix, HGeodesic, HPoint,
    Segment, M3, V3,
};
use crate::pants::{embed_hexagon, systole_at, EmbeddedHexagon, PantsSpec};

/// Largest word-length cap tried by [`stabilize`].
pub const MAX_WORD_CAP: usize = 12;

/// Tolerance of the stabilization test on the distance fields.
pub const STABLE_TOL: f64 = 1e-10;

/// Boundary samples used by the quadrilateral count.
pub const RAY_SAMPLES: usize = 4096;

const TRACE_STRICT: f64 = 1e-8;
const TRACE_FATAL: f64 = 1e-6;
const SAME_LIFT: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct HolonomyGroup {
    pub embedding: EmbeddedHexagon,
    pub seam_reflections: [M3; 3],
    /// `a1 = r2 r3`, `a2 = r3 r1`.
    pub generators: [M3; 2],
    /// Measured translation lengths of `a1`, `a2`, `a1 a2`.
    pub translation_lengths: [f64; 3],
}

impl HolonomyGroup {
    /// The element translating along `B_i` (0-based), as a word in the
    /// generators.
    pub fn boundary_element(&self, i: usize) -> M3 {
        let [a1, a2] = self.generators;
        match i {
            0 => a1,
            1 => a2,
            _ => a1 * a2,
        }
    }

    /// Matrix of a letter: 0 = `a1`, 1 = `a1^-1`, 2 = `a2`, 3 = `a2^-1`.
    pub fn letter(&self, l: u8) -> M3 {
        let g = self.generators[(l / 2) as usize];
        if l.is_multiple_of(2) {
            g
        } else {
            lorentz_inverse(&g)
        }
    }

    /// Matrix of a word over `A = a1, a = a1^-1, B = a2, b = a2^-1`.
    pub fn word(&self, w: &str) -> Result<M3> {
        w.chars().try_fold(M3::identity(), |m, c| {
            let l = letter_index(c).ok_or_else(|| Error::DegenerateInput(format!("bad letter {c:?} in {w:?}")))?;
            Ok(m * self.letter(l))
        })
    }
}

/// Inverse `J m^T J` of an isometry.
pub fn lorentz_inverse(m: &M3) -> M3 {
    let j = gram();
    j * m.transpose() * j
}

/// Translation length from `tr = 1 + 2 cosh l`.
pub fn translation_length(m: &M3) -> Result<f64> {
    acosh_checked((m.trace() - 1.0) / 2.0)
}

fn letter_index(c: char) -> Option<u8> {
    match c {
        'A' => Some(0),
        'a' => Some(1),
        'B' => Some(2),
        'b' => Some(3),
        _ => None,
    }
}

const LETTERS: [char; 4] = ['A', 'a', 'B', 'b'];

pub fn build_holonomy(emb: &EmbeddedHexagon) -> Result<HolonomyGroup> {
    let seam_reflections = emb.seam_geodesics.map(|g| reflection_matrix(g.normal()));
    let [r1, r2, r3] = seam_reflections;
    let a1 = r2 * r3;
    let a2 = r3 * r1;
    let mut hol =
        HolonomyGroup { embedding: emb.clone(), seam_reflections, generators: [a1, a2], translation_lengths: [0.0; 3] };
    let lengths = emb.spec.lengths();
    for (i, &len) in lengths.iter().enumerate() {
        let m = hol.boundary_element(i);
        let l = translation_length(&m)?;
        hol.translation_lengths[i] = l;
        let err = (l - len).abs() / len.max(1.0);
        if !(err < TRACE_FATAL) {
            return Err(Error::Construction(format!(
                "boundary element {} has translation length {l}, expected {}",
                i + 1,
                len
            )));
        }
        let n = emb.boundary_geodesics[i].normal();
        if axis_defect(&m, n) > TRACE_FATAL {
            return Err(Error::Construction(format!("boundary element {} does not preserve B{}", i + 1, i + 1)));
        }
    }
    Ok(hol)
}

/// `|m n - n|` relative to `|n|`.
pub fn axis_defect(m: &M3, n: &V3) -> f64 {
    (m * n - n).norm() / n.norm()
}

/// Whether every trace and axis check holds to the strict tolerance.
pub fn holonomy_is_tight(hol: &HolonomyGroup) -> bool {
    let lengths = hol.embedding.spec.lengths();
    (0..3).all(|i| {
        (hol.translation_lengths[i] - lengths[i]).abs() < TRACE_STRICT * lengths[i].max(1.0)
            && axis_defect(&hol.boundary_element(i), hol.embedding.boundary_geodesics[i].normal()) < TRACE_STRICT
    })
}

/// Word endings that are dropped so that each coset of the stabilizer of
/// `B_i` is hit once: `A^k`, `B^k`, and `(AB)^k` with `wa = wB (AB)^-1`.
fn forbidden_ending(i: usize, w: &[u8]) -> bool {
    let last = match w.last() {
        Some(&l) => l,
        None => return false,
    };
    match i {
        0 => last <= 1,
        1 => last >= 2,
        _ => {
            let pair = w.len() >= 2 && matches!((w[w.len() - 2], last), (0, 2) | (3, 1));
            last == 1 || pair
        }
    }
}

#[derive(Debug, Clone)]
pub struct Lift {
    pub geodesic: HGeodesic,
    pub word: String,
}

#[derive(Debug, Clone)]
pub struct LiftSet {
    /// 0-based boundary index.
    pub target_boundary: usize,
    pub lifts: Vec<Lift>,
    pub word_length_cap: usize,
}

impl LiftSet {
    pub fn len(&self) -> usize {
        self.lifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifts.is_empty()
    }

    /// The lifts whose shortest word has length at most `cap`.
    pub fn truncate(&self, cap: usize) -> LiftSet {
        LiftSet {
            target_boundary: self.target_boundary,
            lifts: self.lifts.iter().filter(|l| l.word.len() <= cap).cloned().collect(),
            word_length_cap: cap.min(self.word_length_cap),
        }
    }
}

/// Ball outside which lifts are dropped.
#[derive(Debug, Clone, Copy)]
pub struct Ball {
    pub center: HPoint,
    pub radius: f64,
}

/// Images of the axis of `B_i` under canonical reduced words of length at
/// most `cap`, restricted to lifts meeting `ball` and oriented with
/// `orient` on their negative side. Duplicates keep the shortest word.
pub fn enumerate_lifts_within(
    hol: &HolonomyGroup,
    i: usize,
    cap: usize,
    ball: Option<&Ball>,
    orient: &HPoint,
) -> LiftSet {
    let axis = *hol.embedding.boundary_geodesics[i].normal();
    let letters: [M3; 4] = [0, 1, 2, 3].map(|l| hol.letter(l));
    let mut found: Vec<(V3, Vec<u8>)> = Vec::new();
    let mut word: Vec<u8> = Vec::new();
    let mut stack: Vec<(M3, usize, u8)> = vec![(M3::identity(), 0, u8::MAX)];
    // iterative DFS; `depth` is the word length of the stacked element
    while let Some((m, depth, l)) = stack.pop() {
        word.truncate(depth.saturating_sub(1));
        if depth > 0 {
            word.push(l);
        }
        if !forbidden_ending(i, &word) {
            let n = m * axis;
            let keep = match ball {
                Some(b) => (-minkowski_dot(b.center.coords(), &n)).abs().asinh() <= b.radius,
                None => true,
            };
            if keep {
                found.push((n, word.clone()));
            }
        }
        if depth < cap {
            for next in 0..4u8 {
                if depth > 0 && next == (l ^ 1) {
                    continue;
                }
                stack.push((m * letters[next as usize], depth + 1, next));
            }
        }
    }
    found.sort_by_key(|(_, w)| w.len());
    let mut lifts: Vec<Lift> = Vec::new();
    for (n, w) in found {
        let scale = n.norm().max(1.0);
        let dup = lifts.iter().any(|l| {
            let m = l.geodesic.normal();
            (m - n).norm() < SAME_LIFT * scale || (m + n).norm() < SAME_LIFT * scale
        });
        if !dup {
            let g = HGeodesic::from_unit_normal(n).oriented_away_from(orient);
            lifts.push(Lift { geodesic: g, word: w.iter().map(|&c| LETTERS[c as usize]).collect() });
        }
    }
    LiftSet { target_boundary: i, lifts, word_length_cap: cap }
}

/// Lifts of `B_i` that can be nearest or second nearest to some point of
/// the sampling domain of `B_i`.
pub fn enumerate_lifts(hol: &HolonomyGroup, i: usize, cap: usize) -> LiftSet {
    let dom = CutDomain::new(hol, i);
    enumerate_lifts_within(hol, i, cap, Some(&dom.pruning_ball(hol)), &dom.center)
}

/// Sorted distances from `p` to the lifts.
pub fn distance_spectrum(p: &HPoint, lifts: &LiftSet) -> Vec<f64> {
    let mut d: Vec<f64> = lifts.lifts.iter().map(|l| dist_point_geodesic(p, &l.geodesic)).collect();
    d.sort_by(|a, b| a.total_cmp(b));
    d
}

fn two_smallest(p: &HPoint, lifts: &LiftSet) -> (f64, f64) {
    let mut d1 = f64::INFINITY;
    let mut d2 = f64::INFINITY;
    for l in &lifts.lifts {
        let d = dist_point_geodesic(p, &l.geodesic);
        if d < d1 {
            d2 = d1;
            d1 = d;
        } else if d < d2 {
            d2 = d;
        }
    }
    (d1, d2)
}

/// The hexagon together with its mirror in the seam opposite `B_i`, viewed
/// in a frame that puts the centre of the pair at the origin.
#[derive(Debug, Clone)]
pub struct CutDomain {
    pub boundary: usize,
    /// Reflection in the seam opposite `B_i`.
    pub mirror: M3,
    /// Centre of the pair, in hexagon coordinates.
    pub center: HPoint,
    /// Isometry taking `center` to the origin.
    pub frame: M3,
    /// Largest distance from `center` to a vertex.
    pub radius: f64,
}

impl CutDomain {
    pub fn new(hol: &HolonomyGroup, i: usize) -> Self {
        let emb = &hol.embedding;
        let mirror = hol.seam_reflections[i];
        let mut verts: Vec<HPoint> = emb.vertices.to_vec();
        verts.extend(emb.vertices.iter().map(|v| v.transform(&mirror)));
        let sum = verts.iter().fold(V3::zeros(), |acc, v| acc + v.coords());
        let center = HPoint::new(sum).expect("sum of sheet points is timelike");
        let radius = verts.iter().map(|v| dist_point_point(&center, v)).fold(0.0, f64::max);
        CutDomain { boundary: i, mirror, center, frame: boost_to_origin(&center), radius }
    }

    /// Sheet of `p`: 0 for the hexagon, 1 for its mirror, `None` outside.
    pub fn sheet(&self, emb: &EmbeddedHexagon, p: &HPoint) -> Option<u8> {
        if emb.contains(p) {
            Some(0)
        } else if emb.contains(&p.transform(&self.mirror)) {
            Some(1)
        } else {
            None
        }
    }

    /// A ball such that lifts outside it are farther from every point of
    /// the domain than the two nearest lifts.
    pub fn pruning_ball(&self, hol: &HolonomyGroup) -> Ball {
        let i = self.boundary;
        let lift0 = hol.embedding.boundary_geodesics[i];
        // a1 moves B2 and B3 off themselves, a2 moves B1
        let other = lift0.transform(&hol.generators[if i == 0 { 1 } else { 0 }]);
        let near = dist_point_geodesic(&self.center, &lift0).max(dist_point_geodesic(&self.center, &other));
        Ball { center: self.center, radius: 2.0 * self.radius + near + 1e-6 }
    }

    pub fn to_frame(&self, p: &HPoint) -> HPoint {
        p.transform(&self.frame)
    }

    pub fn from_frame(&self, p: &HPoint) -> HPoint {
        p.transform(&lorentz_inverse(&self.frame))
    }
}

/// Grid points of the domain in disk coordinates of the centred frame:
/// cell-centred, with a `u`-range symmetric about 0.
#[derive(Debug, Clone)]
pub struct DomainGrid {
    pub resolution: usize,
    pub cell: f64,
    /// `(u, v, sheet, point)` with the point in hexagon coordinates.
    pub points: Vec<(f64, f64, u8, HPoint)>,
}

pub fn domain_grid(hol: &HolonomyGroup, dom: &CutDomain, resolution: usize) -> DomainGrid {
    let emb = &hol.embedding;
    let sides = emb.sides();
    let verts = emb.vertices;
    // the outline, sampled densely since geodesic arcs bow in the disk
    let mut outline = Vec::new();
    for k in 0..6 {
        let (p, q) = (verts[k], verts[(k + 1) % 6]);
        let seg = match Segment::new(&p, &q, &sides[k]) {
            Ok(seg) => seg,
            Err(_) => continue,
        };
        for j in 0..=64 {
            let x = seg.from_start(2.0 * seg.half_length * j as f64 / 64.0);
            outline.push(x);
            outline.push(x.transform(&dom.mirror));
        }
    }
    let (mut umax, mut vmin, mut vmax) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for p in &outline {
        let (u, v) = dom.to_frame(p).to_disk();
        umax = umax.max(u.abs());
        vmin = vmin.min(v);
        vmax = vmax.max(v);
    }
    let cell = (2.0 * umax).max(vmax - vmin) / resolution as f64;
    let nu = ((2.0 * umax) / cell).ceil() as usize;
    let nv = ((vmax - vmin) / cell).ceil() as usize;
    let u0 = -(nu as f64) * cell / 2.0;
    let points = (0..nv)
        .into_par_iter()
        .flat_map_iter(|jv| {
            let v = vmin + (jv as f64 + 0.5) * cell;
            (0..nu).filter_map(move |ju| {
                let u = u0 + (ju as f64 + 0.5) * cell;
                let q = HPoint::from_disk(u, v).ok()?;
                let p = dom.from_frame(&q);
                dom.sheet(emb, &p).map(|s| (u, v, s, p))
            })
        })
        .collect();
    DomainGrid { resolution, cell, points }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub u: f64,
    pub v: f64,
    pub sheet: u8,
    pub dist1: f64,
    pub dist2: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone)]
pub struct CutLocusSample {
    pub boundary: usize,
    /// Flagged grid points, in hexagon coordinates.
    pub points: Vec<HPoint>,
    /// Flagging tolerance as a multiple of the local grid spacing.
    pub epsilon: f64,
    pub quadrilateral_count: usize,
    pub rows: Vec<GridRow>,
    pub cell: f64,
    pub word_length_cap: usize,
    /// Near-minimal lift counts at the cut-locus vertices found by the
    /// boundary rays.
    pub valence_estimates: Vec<usize>,
    /// Quadrilateral bases as parameter intervals along one period of `B_i`.
    pub arcs: Vec<(f64, f64)>,
    pub ray_cap: usize,
}

pub const DEFAULT_EPSILON: f64 = 1.0;

/// Hyperbolic length of a grid cell at disk point `(u, v)`.
pub fn local_spacing(cell: f64, u: f64, v: f64) -> f64 {
    2.0 * cell / (1.0 - u * u - v * v)
}

/// Samples the cut locus of `B_i` (0-based) on a `resolution` grid.
///
/// Points where the two nearest lifts are within `eps` times the local
/// grid spacing are flagged. The quadrilateral count comes from the inward
/// normal rays of `B_i`: each maximal arc of `B_i` whose rays end on the
/// same competing lift is the base of one quadrilateral.
pub fn sample_cut_locus(hol: &HolonomyGroup, i: usize, resolution: usize, eps: Option<f64>) -> Result<CutLocusSample> {
    let stab = stabilize(hol, i, resolution.min(64))?;
    let cap = stab
        .stable_at
        .ok_or_else(|| Error::Construction(format!("lift enumeration for B{} did not stabilize", i + 1)))?;
    sample_cut_locus_at(hol, i, resolution, eps, cap)
}

pub fn sample_cut_locus_at(
    hol: &HolonomyGroup,
    i: usize,
    resolution: usize,
    eps: Option<f64>,
    cap: usize,
) -> Result<CutLocusSample> {
    if i > 2 {
        return Err(Error::DegenerateInput(format!("boundary index {i} out of range")));
    }
    let epsilon = eps.unwrap_or(DEFAULT_EPSILON);
    if !(epsilon > 0.0) {
        return Err(Error::DegenerateInput(format!("epsilon {epsilon} must be positive")));
    }
    let dom = CutDomain::new(hol, i);
    let lifts = enumerate_lifts_within(hol, i, cap, Some(&dom.pruning_ball(hol)), &dom.center);
    let grid = domain_grid(hol, &dom, resolution);
    if grid.points.is_empty() {
        return Err(Error::EmptyGrid { resolution });
    }
    let rows: Vec<GridRow> = grid
        .points
        .par_iter()
        .map(|(u, v, sheet, p)| {
            let (d1, d2) = two_smallest(p, &lifts);
            let flagged = d2 - d1 < epsilon * local_spacing(grid.cell, *u, *v);
            GridRow { u: *u, v: *v, sheet: *sheet, dist1: d1, dist2: d2, flagged }
        })
        .collect();
    let points = grid.points.iter().zip(&rows).filter(|(_, r)| r.flagged).map(|(g, _)| g.3).collect();
    let rays = boundary_rays(hol, i, RAY_SAMPLES)?;
    Ok(CutLocusSample {
        boundary: i,
        points,
        epsilon,
        quadrilateral_count: rays.quadrilateral_count,
        rows,
        cell: grid.cell,
        word_length_cap: cap,
        valence_estimates: rays.valences,
        arcs: rays.arcs,
        ray_cap: rays.cap,
    })
}

/// Whether the flagged set is invariant under `u -> -u` up to one cell.
pub fn flagged_symmetric(sample: &CutLocusSample) -> bool {
    let tol = sample.cell * 1.000001;
    let flagged: Vec<&GridRow> = sample.rows.iter().filter(|r| r.flagged).collect();
    flagged.iter().all(|r| flagged.iter().any(|s| (s.u + r.u).abs() <= tol && (s.v - r.v).abs() <= tol))
}

#[derive(Debug, Clone)]
pub struct StabilizationReport {
    /// Smallest cap `L` whose field agrees with `L + 2` within
    /// [`STABLE_TOL`].
    pub stable_at: Option<usize>,
    /// Largest change of `(dist1, dist2)` from `L` to `L + 2`, by `L`.
    pub changes: Vec<f64>,
    pub lift_counts: Vec<usize>,
}

/// Sweeps the word-length cap up to [`MAX_WORD_CAP`] on a `resolution`
/// grid of the domain.
pub fn stabilize(hol: &HolonomyGroup, i: usize, resolution: usize) -> Result<StabilizationReport> {
    let dom = CutDomain::new(hol, i);
    let all = enumerate_lifts_within(hol, i, MAX_WORD_CAP + 2, Some(&dom.pruning_ball(hol)), &dom.center);
    let grid = domain_grid(hol, &dom, resolution);
    if grid.points.is_empty() {
        return Err(Error::EmptyGrid { resolution });
    }
    let fields: Vec<Vec<(f64, f64)>> = (0..=MAX_WORD_CAP + 2)
        .map(|cap| {
            let set = all.truncate(cap);
            grid.points.par_iter().map(|g| two_smallest(&g.3, &set)).collect()
        })
        .collect();
    let lift_counts = (0..=MAX_WORD_CAP + 2).map(|cap| all.truncate(cap).len()).collect();
    let mut changes = Vec::new();
    let mut stable_at = None;
    for cap in 0..=MAX_WORD_CAP {
        let change = fields[cap]
            .iter()
            .zip(&fields[cap + 2])
            .map(|(a, b)| field_change(a.0, b.0).max(field_change(a.1, b.1)))
            .fold(0.0, f64::max);
        changes.push(change);
        if stable_at.is_none() && change < STABLE_TOL {
            stable_at = Some(cap);
        }
    }
    Ok(StabilizationReport { stable_at, changes, lift_counts })
}

fn field_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

#[derive(Debug, Clone)]
pub struct RayReport {
    pub quadrilateral_count: usize,
    pub valences: Vec<usize>,
    pub arcs: Vec<(f64, f64)>,
    /// Word-length cap at which the ray endpoints stabilized.
    pub cap: usize,
}

struct Candidate {
    normal: V3,
    same_boundary: bool,
    word_len: usize,
}

/// Time at which the inward ray from `q` stops: where it becomes equidistant
/// to a competing lift of `B_i`, or meets another boundary lift.
fn ray_stop(q: &V3, n0: &V3, c: &Candidate) -> f64 {
    let a = minkowski_dot(q, &c.normal);
    let b = -minkowski_dot(n0, &c.normal);
    let th = if c.same_boundary { -a / (1.0 + b) } else { -a / b };
    if th > 0.0 && th < 1.0 {
        th.atanh()
    } else {
        f64::INFINITY
    }
}

fn ray_label(q: &V3, n0: &V3, cands: &[Candidate], cap: usize) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for (k, c) in cands.iter().enumerate() {
        if c.word_len > cap {
            continue;
        }
        let t = ray_stop(q, n0, c);
        if t < best.1 {
            best = (k, t);
        }
    }
    best
}

/// Follows the inward normal rays of `B_i` and counts the arcs of one
/// period whose rays stop on a common lift.
///
/// Only the hexagon side is swept. The reflections in the two seams through
/// its ends preserve the lift configuration, so the other half of the period
/// is the mirror image: a transition inside the side appears twice, and an
/// end is a transition when the lift stopping the rays there is not fixed by
/// that seam's reflection. Sweeping far along `B_i` instead loses everything
/// to cancellation in `<q, m>`.
///
/// The word-length cap is raised until the stopping times agree with the
/// cap two higher within [`STABLE_TOL`].
pub fn boundary_rays(hol: &HolonomyGroup, i: usize, samples: usize) -> Result<RayReport> {
    if i > 2 {
        return Err(Error::DegenerateInput(format!("boundary index {i} out of range")));
    }
    let emb = &hol.embedding;
    let n0 = *emb.boundary_geodesics[i].normal();
    let (start, end) = boundary_side(emb, i);
    let seg = Segment::new(&start, &end, &emb.boundary_geodesics[i])?;
    let side = 2.0 * seg.half_length;
    let period = 2.0 * side;
    let [seam_start, seam_end] = [[1, 2], [2, 0], [0, 1]][i];
    let dom = CutDomain::new(hol, i);
    let top = MAX_WORD_CAP + 2;
    let gather = |radius: f64| -> Vec<Candidate> {
        let ball = Ball { center: seg.mid, radius };
        let mut out = Vec::new();
        for j in 0..3 {
            for l in enumerate_lifts_within(hol, j, top, Some(&ball), &dom.center).lifts {
                let n = *l.geodesic.normal();
                if !(j == i && same_line(&n, &n0)) {
                    out.push(Candidate { normal: n, same_boundary: j == i, word_len: l.word.len() });
                }
            }
        }
        out
    };
    let half = (samples / 2).max(2);
    let at = |k: usize| side * (k as f64 + 0.5) / half as f64;
    let param = |s: f64| *seg.from_start(s).coords();
    let sweep = |cands: &[Candidate], cap: usize| -> Vec<(usize, f64)> {
        (0..half).into_par_iter().map(|k| ray_label(&param(at(k)), &n0, cands, cap)).collect()
    };
    // a first pass bounds the stopping time; every lift that could stop a
    // ray sooner lies within twice that of the side
    let first = gather(dom.pruning_ball(hol).radius);
    let tmax = sweep(&first, top).iter().map(|x| x.1).fold(0.0, f64::max);
    if !tmax.is_finite() {
        return Err(Error::Construction(format!("a normal ray of B{} never stops", i + 1)));
    }
    let cands = gather(2.0 * tmax + side / 2.0 + 1e-6);
    let sweeps: Vec<Vec<(usize, f64)>> = (0..=top).map(|cap| sweep(&cands, cap)).collect();
    let cap = (0..=MAX_WORD_CAP)
        .find(|&c| {
            sweeps[c]
                .iter()
                .zip(&sweeps[c + 2])
                .all(|(a, b)| a.1.is_finite() && a.0 == b.0 && (a.1 - b.1).abs() < STABLE_TOL)
        })
        .ok_or_else(|| Error::Construction(format!("normal rays of B{} did not stabilize", i + 1)))?;
    let labels = &sweeps[cap];
    let valence_at = |s: f64| -> usize {
        let q = param(s);
        let (_, t) = ray_label(&q, &n0, &cands, cap);
        let tie = 1e-6 * t.max(1.0);
        1 + cands.iter().filter(|c| (ray_stop(&q, &n0, c) - t).abs() < tie).count()
    };

    // (position along the period, valence)
    let mut vertices: Vec<(f64, usize)> = Vec::new();
    for k in 0..half - 1 {
        if labels[k].0 != labels[k + 1].0 {
            let (mut lo, mut hi) = (at(k), at(k + 1));
            let left = labels[k].0;
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                if ray_label(&param(m), &n0, &cands, cap).0 == left {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            let s = 0.5 * (lo + hi);
            let v = valence_at(s);
            vertices.push((s, v));
            vertices.push((period - s, v));
        }
    }
    for (label, seam, s) in [(labels[0].0, seam_start, 0.0), (labels[half - 1].0, seam_end, side)] {
        // the seam's reflection fixes the lift iff the normals are
        // orthogonal; applying the reflection itself loses digits far out
        let m = cands[label].normal;
        let ns = emb.seam_geodesics[seam].normal();
        if minkowski_dot(&m, ns).abs() > SAME_LIFT * m.norm() * ns.norm() {
            vertices.push((s, valence_at(s)));
        }
    }
    vertices.sort_by(|a, b| a.0.total_cmp(&b.0));

    let quadrilateral_count = vertices.len().max(1);
    let valences = vertices.iter().map(|v| v.1).collect();
    let arcs =
        match vertices.len() {
            0 => vec![(0.0, period)],
            n => (0..n)
                .map(|k| {
                    if k == 0 {
                        (vertices[n - 1].0 - period, vertices[0].0)
                    } else {
                        (vertices[k - 1].0, vertices[k].0)
                    }
                })
                .collect(),
        };
    Ok(RayReport { quadrilateral_count, valences, arcs, cap })
}

/// Whether two spacelike normals span the same geodesic.
fn same_line(a: &V3, b: &V3) -> bool {
    let tol = SAME_LIFT * a.norm().max(b.norm()).max(1.0);
    (a - b).norm() < tol || (a + b).norm() < tol
}

/// Endpoints of the hexagon side on `B_i`.
fn boundary_side(emb: &EmbeddedHexagon, i: usize) -> (HPoint, HPoint) {
    let v = emb.vertices;
    let (p, q) = match i {
        0 => (v[0], v[1]),
        1 => (v[2], v[3]),
        _ => (v[4], v[5]),
    };
    (p, q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SysLowerBound {
    pub max_boundary_sys: f64,
    pub bound: f64,
    pub ok: bool,
    /// Point of `B_i` attaining the sampled maximum.
    pub argmax: HPoint,
}

pub const BOUNDARY_SAMPLES: usize = 10_000;

/// Largest systole over `samples` points of `B_i` (0-based), against the
/// bound `b_i / 6`.
pub fn verify_sys_lower_bound(spec: &PantsSpec, i: usize) -> Result<SysLowerBound> {
    verify_sys_lower_bound_with(spec, i, BOUNDARY_SAMPLES)
}

pub fn verify_sys_lower_bound_with(spec: &PantsSpec, i: usize, samples: usize) -> Result<SysLowerBound> {
    if i > 2 {
        return Err(Error::DegenerateInput(format!("boundary index {i} out of range")));
    }
    let emb = embed_hexagon(spec)?;
    let (p, q) = boundary_side(&emb, i);
    let seg = Segment::new(&p, &q, &emb.boundary_geodesics[i])?;
    let len = 2.0 * seg.half_length;
    let best = (0..samples)
        .into_par_iter()
        .map(|k| {
            let s = len * k as f64 / (samples - 1).max(1) as f64;
            let x = emb.boundary_geodesics[i].foot(&seg.from_start(s));
            systole_at(&emb, &x).map(|r| (r.sys, x))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((f64::NEG_INFINITY, p), |a, b| if b.0 > a.0 { b } else { a });
    let bound = spec.lengths()[i] / 6.0;
    Ok(SysLowerBound { max_boundary_sys: best.0, bound, ok: best.0 >= bound - 1e-9, argmax: best.1 })
}

/// Builds the holonomy of a spec.
pub fn holonomy_for(spec: &PantsSpec) -> Result<HolonomyGroup> {
    build_holonomy(&embed_hexagon(spec)?)
}

/// CSV with the header `u,v,sheet,dist1,dist2,flagged`.
pub fn rows_to_csv(rows: &[GridRow]) -> String {
    let mut out = String::from("u,v,sheet,dist1,dist2,flagged\n");
    for r in rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{},{:.16e},{:.16e},{}\n",
            r.u, r.v, r.sheet, r.dist1, r.dist2, r.flagged as u8
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hol(a: f64, b: f64, c: f64) -> HolonomyGroup {
        holonomy_for(&PantsSpec::new(a, b, c).unwrap()).unwrap()
    }

    #[test]
    fn reflections_are_involutions() {
        let h = hol(1.0, 2.0, 3.0);
        for r in &h.seam_reflections {
            assert!((r * r - M3::identity()).norm() < 1e-12);
            let j = gram();
            assert!((r.transpose() * j * r - j).norm() < 1e-12);
        }
    }

    #[test]
    fn translation_lengths_match() {
        for (a, b, c) in [(1.0, 1.0, 1.0), (1.0, 2.0, 3.0), (0.5, 1.0, 1.5)] {
            let h = hol(a, b, c);
            assert!(holonomy_is_tight(&h), "{:?}", h.translation_lengths);
        }
    }

    #[test]
    fn canonical_words() {
        assert!(forbidden_ending(0, &[2, 0]));
        assert!(!forbidden_ending(0, &[0, 2]));
        assert!(forbidden_ending(2, &[0, 2]));
        assert!(forbidden_ending(2, &[3, 1]));
        assert!(!forbidden_ending(2, &[2]));
    }

    #[test]
    fn single_lift_at_cap_zero() {
        let h = hol(1.0, 1.0, 1.0);
        let set = enumerate_lifts(&h, 2, 0);
        assert_eq!(set.len(), 1);
        assert_eq!(set.lifts[0].word, "");
    }
}
