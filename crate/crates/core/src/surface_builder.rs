//! Maximizing surfaces for the injectivity radius, as explicit polygon data.
//!
//! A fan of `4g+n+b-2` equilateral triangles of side `2r` around a vertex
//! `v` forms a polygon whose outer edges are labelled cyclically
//! `a1 b1 c1 d1 ... ag bg cg dg e1 ... en f1 ... fb`. A horocyclic ideal
//! triangle is glued to each `e_j` and a Saccheri quadrilateral (summit `2r`,
//! legs `r`) to each `f_k`. The side pairings are
//!
//! * `A_i: a_i -> reverse(c_i)`, `B_i: b_i -> reverse(d_i)`,
//! * `E_j`: the two infinite sides of the j-th horocyclic triangle,
//! * `F_k: f_k1 -> reverse(f_k3)`, the legs of the k-th quadrilateral.
//!
//! Quadrilateral bases `f_k2` stay unpaired and make up the boundary.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{flow, HPoint, HTangent, V3};
use crate::num17;
use crate::polytrig::{alpha, area_equilateral, area_horocyclic, area_square, beta, gamma};
use crate::radius_solver::{boundary_length_at_max, max_injrad, Signature};

pub const FORMAT: &str = "hypext-decomposition";
pub const VERSION: u32 = 1;

/// Relative tolerance for length and angle bookkeeping in [`validate`].
const BOOK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Also build the `n = 0` or `b = 0` cases, which the fan construction
    /// handles but where it is not known to be extremal.
    pub allow_degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub chi: i64,
    pub n: i64,
    pub b: i64,
    pub genus: i64,
    #[serde(with = "num17")]
    pub r: f64,
    #[serde(with = "num17")]
    pub boundary_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    EquilateralTriangle {
        #[serde(with = "num17")]
        side: f64,
    },
    HorocyclicIdealTriangle {
        #[serde(with = "num17")]
        compact_side: f64,
    },
    SaccheriQuadrilateral {
        #[serde(with = "num17")]
        summit: f64,
        #[serde(with = "num17")]
        legs: f64,
        #[serde(with = "num17")]
        base: f64,
    },
}

impl Shape {
    pub fn area(&self) -> f64 {
        match *self {
            Shape::EquilateralTriangle { side } => area_equilateral(side),
            Shape::HorocyclicIdealTriangle { compact_side } => area_horocyclic(compact_side),
            Shape::SaccheriQuadrilateral { summit, .. } => area_square(summit) / 2.0,
        }
    }

    fn corners(&self) -> usize {
        match self {
            Shape::SaccheriQuadrilateral { .. } => 4,
            _ => 3,
        }
    }
}

/// A polygon with its edges listed counter-clockwise; `angles[i]` sits at
/// the start of `edges[i]`. Ideal vertices have angle 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub id: String,
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(with = "num17::vec")]
    pub angles: Vec<f64>,
    pub edges: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeRole {
    /// Shared by two polygons of the fundamental domain.
    Interior,
    /// On the domain boundary and identified by a side pairing.
    Paired,
    /// A quadrilateral base, part of the surface boundary.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    /// `None` for the infinite sides of horocyclic triangles.
    #[serde(with = "num17::opt")]
    pub length: Option<f64>,
    pub role: EdgeRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairingKind {
    A,
    B,
    E,
    F,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    /// Generator name such as `A1` or `F2`.
    pub generator: String,
    pub kind: PairingKind,
    pub edges: [String; 2],
    /// The second edge is traversed against its polygon's orientation.
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDecomposition {
    pub format: String,
    pub version: u32,
    pub header: Header,
    pub polygons: Vec<Polygon>,
    pub edges: Vec<Edge>,
    pub pairings: Vec<Pairing>,
    #[serde(with = "num17::vec")]
    pub fan_vertex_angle_terms: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexReport {
    pub angle_sum: f64,
    pub target: f64,
    pub residual: f64,
}

impl PolygonDecomposition {
    pub fn triangle_count(&self) -> usize {
        self.count(|s| matches!(s, Shape::EquilateralTriangle { .. }))
    }

    pub fn horocyclic_count(&self) -> usize {
        self.count(|s| matches!(s, Shape::HorocyclicIdealTriangle { .. }))
    }

    pub fn quadrilateral_count(&self) -> usize {
        self.count(|s| matches!(s, Shape::SaccheriQuadrilateral { .. }))
    }

    fn count(&self, f: impl Fn(&Shape) -> bool) -> usize {
        self.polygons.iter().filter(|p| f(&p.shape)).count()
    }

    pub fn total_area(&self) -> f64 {
        self.polygons.iter().map(|p| p.shape.area()).sum()
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }
}

/// Outer edge labels of the fan, in counter-clockwise order.
pub fn fan_labels(g: i64, n: i64, b: i64) -> Vec<String> {
    let mut labels = Vec::new();
    for i in 1..=g {
        for c in ["a", "b", "c", "d"] {
            labels.push(format!("{c}{i}"));
        }
    }
    labels.extend((1..=n).map(|j| format!("e{j}")));
    labels.extend((1..=b).map(|k| format!("f{k}")));
    labels
}

fn check_signature(chi: i64, n: i64, b: i64, opts: BuildOptions) -> Result<(Signature, i64, i64)> {
    let sig = Signature::new(chi, n, b, 1)?;
    let g = sig.genus().ok_or_else(|| {
        Error::InvalidSignature(format!("genus (2 - {chi} - {n} - {b})/2 is not a nonnegative integer"))
    })?;
    if !opts.allow_degenerate && (n < 1 || b < 1) {
        return Err(Error::InvalidSignature(format!(
            "the fan construction needs n >= 1 and b >= 1 (got n = {n}, b = {b})"
        )));
    }
    let triangles = 4 * g + n + b - 2;
    if triangles < 1 {
        return Err(Error::DegenerateFan { triangles });
    }
    Ok((sig, g, triangles))
}

pub fn build_max_surface(chi: i64, n: i64, b: i64) -> Result<PolygonDecomposition> {
    build_max_surface_with(chi, n, b, BuildOptions::default())
}

pub fn build_max_surface_with(chi: i64, n: i64, b: i64, opts: BuildOptions) -> Result<PolygonDecomposition> {
    check_signature(chi, n, b, opts)?;
    let r = max_injrad(chi, n, b)?.r;
    build_at_radius(chi, n, b, r, opts)
}

/// The fan construction at an arbitrary radius `r`. Only `r = r_max` closes
/// up; other radii are useful to exercise the checks.
pub fn build_at_radius(chi: i64, n: i64, b: i64, r: f64, opts: BuildOptions) -> Result<PolygonDecomposition> {
    let (_, g, triangles) = check_signature(chi, n, b, opts)?;
    let t = triangles as usize;
    let side = 2.0 * r;
    let (a, be, ga) = (alpha(r), beta(r), gamma(r));
    let base = boundary_length_at_max(r);

    let labels = fan_labels(g, n, b);
    debug_assert_eq!(labels.len(), t + 2);
    // spokes s0..st; s0 and st are the first and last outer edges
    let spoke = |j: usize| -> String {
        if j == 0 {
            labels[0].clone()
        } else if j == t {
            labels[t + 1].clone()
        } else {
            format!("s{j}")
        }
    };

    let mut polygons = Vec::new();
    let mut edges = Vec::new();
    let mut pairings = Vec::new();
    let mut terms = Vec::new();

    for j in 1..t {
        edges.push(Edge { id: spoke(j), length: Some(side), role: EdgeRole::Interior });
    }
    for j in 0..t {
        // v -> w_j -> w_{j+1}
        polygons.push(Polygon {
            id: format!("T{}", j + 1),
            shape: Shape::EquilateralTriangle { side },
            angles: vec![a; 3],
            edges: vec![spoke(j), labels[j + 1].clone(), spoke(j + 1)],
        });
        terms.extend([a; 3]);
    }

    let mut outer_role = HashMap::new();
    for l in &labels {
        outer_role.insert(l.clone(), EdgeRole::Paired);
    }
    for j in 1..=n {
        let e = format!("e{j}");
        outer_role.insert(e.clone(), EdgeRole::Interior);
        let (left, right) = (format!("e{j}-1"), format!("e{j}-2"));
        polygons.push(Polygon {
            id: format!("H{j}"),
            shape: Shape::HorocyclicIdealTriangle { compact_side: side },
            angles: vec![be, be, 0.0],
            edges: vec![e, left.clone(), right.clone()],
        });
        edges.push(Edge { id: left.clone(), length: None, role: EdgeRole::Paired });
        edges.push(Edge { id: right.clone(), length: None, role: EdgeRole::Paired });
        pairings.push(Pairing {
            generator: format!("E{j}"),
            kind: PairingKind::E,
            edges: [left, right],
            reversed: true,
        });
        terms.extend([be, be]);
    }
    for k in 1..=b {
        let f = format!("f{k}");
        outer_role.insert(f.clone(), EdgeRole::Interior);
        let legs = [format!("f{k}-1"), format!("f{k}-2"), format!("f{k}-3")];
        polygons.push(Polygon {
            id: format!("Q{k}"),
            shape: Shape::SaccheriQuadrilateral { summit: side, legs: r, base },
            angles: vec![ga, ga, PI / 2.0, PI / 2.0],
            edges: vec![f, legs[0].clone(), legs[1].clone(), legs[2].clone()],
        });
        edges.push(Edge { id: legs[0].clone(), length: Some(r), role: EdgeRole::Paired });
        edges.push(Edge { id: legs[1].clone(), length: Some(base), role: EdgeRole::Boundary });
        edges.push(Edge { id: legs[2].clone(), length: Some(r), role: EdgeRole::Paired });
        pairings.push(Pairing {
            generator: format!("F{k}"),
            kind: PairingKind::F,
            edges: [legs[0].clone(), legs[2].clone()],
            reversed: true,
        });
        terms.extend([ga, ga]);
    }
    for i in 1..=g {
        pairings.insert(
            (2 * (i - 1)) as usize,
            Pairing {
                generator: format!("A{i}"),
                kind: PairingKind::A,
                edges: [format!("a{i}"), format!("c{i}")],
                reversed: true,
            },
        );
        pairings.insert(
            (2 * i - 1) as usize,
            Pairing {
                generator: format!("B{i}"),
                kind: PairingKind::B,
                edges: [format!("b{i}"), format!("d{i}")],
                reversed: true,
            },
        );
    }
    let outer: Vec<Edge> =
        labels.iter().map(|l| Edge { id: l.clone(), length: Some(side), role: outer_role[l] }).collect();
    edges.splice(0..0, outer);

    Ok(PolygonDecomposition {
        format: FORMAT.to_string(),
        version: VERSION,
        header: Header { chi, n, b, genus: g, r, boundary_length: base },
        polygons,
        edges,
        pairings,
        fan_vertex_angle_terms: terms,
    })
}

pub fn verify_vertex_angle(dec: &PolygonDecomposition) -> VertexReport {
    let angle_sum: f64 = dec.fan_vertex_angle_terms.iter().sum();
    VertexReport { angle_sum, target: 2.0 * PI, residual: (angle_sum - 2.0 * PI).abs() }
}

/// `|sum of polygon areas + 2 pi chi|`.
pub fn verify_gauss_bonnet(dec: &PolygonDecomposition) -> f64 {
    (dec.total_area() + 2.0 * PI * dec.header.chi as f64).abs()
}

/// Structural checks on a decomposition document.
pub fn validate(dec: &PolygonDecomposition) -> Result<()> {
    let bad = |m: String| Err(Error::Schema(m));
    if dec.format != FORMAT || dec.version != VERSION {
        return bad(format!("unknown format {} version {}", dec.format, dec.version));
    }
    let h = &dec.header;
    let g = h.genus;
    if 2 * g != 2 - h.chi - h.n - h.b || g < 0 {
        return bad(format!("genus {g} inconsistent with chi {}, n {}, b {}", h.chi, h.n, h.b));
    }
    let t = 4 * g + h.n + h.b - 2;
    let counts = (dec.triangle_count() as i64, dec.horocyclic_count() as i64, dec.quadrilateral_count() as i64);
    if counts != (t, h.n, h.b) {
        return bad(format!("polygon counts {counts:?}, expected ({t}, {}, {})", h.n, h.b));
    }
    if dec.pairings.len() as i64 != 2 * g + h.n + h.b {
        return bad(format!("{} pairings, expected {}", dec.pairings.len(), 2 * g + h.n + h.b));
    }
    let terms = 3 * t + 2 * h.n + 2 * h.b;
    if dec.fan_vertex_angle_terms.len() as i64 != terms {
        return bad(format!("{} vertex angle terms, expected {terms}", dec.fan_vertex_angle_terms.len()));
    }

    let mut by_id: HashMap<&str, &Edge> = HashMap::new();
    for e in &dec.edges {
        if by_id.insert(&e.id, e).is_some() {
            return bad(format!("duplicate edge {}", e.id));
        }
    }
    let mut uses: HashMap<&str, usize> = HashMap::new();
    for p in &dec.polygons {
        let k = p.shape.corners();
        if p.edges.len() != k || p.angles.len() != k {
            return bad(format!("polygon {} needs {k} edges and angles", p.id));
        }
        for e in &p.edges {
            if !by_id.contains_key(e.as_str()) {
                return bad(format!("polygon {} uses unknown edge {e}", p.id));
            }
            *uses.entry(e).or_default() += 1;
        }
    }
    let mut paired: HashMap<&str, usize> = HashMap::new();
    for pr in &dec.pairings {
        for e in &pr.edges {
            *paired.entry(e).or_default() += 1;
        }
        let (e0, e1) = (by_id.get(pr.edges[0].as_str()), by_id.get(pr.edges[1].as_str()));
        let (Some(e0), Some(e1)) = (e0, e1) else {
            return bad(format!("pairing {} names an unknown edge", pr.generator));
        };
        let same = match (e0.length, e1.length) {
            (None, None) => true,
            (Some(x), Some(y)) => (x - y).abs() <= BOOK_TOL * x.abs().max(1.0),
            _ => false,
        };
        if !same {
            return bad(format!("pairing {} joins edges of different length", pr.generator));
        }
    }
    let mut boundary = 0;
    for e in &dec.edges {
        let used = uses.get(e.id.as_str()).copied().unwrap_or(0);
        let pairs = paired.get(e.id.as_str()).copied().unwrap_or(0);
        let ok = match e.role {
            EdgeRole::Interior => used == 2 && pairs == 0,
            EdgeRole::Paired => used == 1 && pairs == 1,
            EdgeRole::Boundary => used == 1 && pairs == 0,
        };
        if !ok {
            return bad(format!("edge {} ({:?}) used {used} times, paired {pairs} times", e.id, e.role));
        }
        if e.role == EdgeRole::Boundary {
            boundary += 1;
            let len = e.length.unwrap_or(f64::NAN);
            if !((len - h.boundary_length).abs() <= BOOK_TOL * len.max(1.0)) {
                return bad(format!("boundary edge {} has length {len}", e.id));
            }
        }
    }
    if boundary != h.b {
        return bad(format!("{boundary} boundary edges, expected {}", h.b));
    }
    Ok(())
}

pub fn to_json(dec: &PolygonDecomposition) -> Result<String> {
    let mut s = serde_json::to_string_pretty(dec)?;
    s.push('\n');
    Ok(s)
}

pub fn emit_decomposition<W: Write>(dec: &PolygonDecomposition, mut sink: W) -> Result<()> {
    sink.write_all(to_json(dec)?.as_bytes())?;
    sink.flush()?;
    Ok(())
}

pub fn parse_decomposition(text: &str) -> Result<PolygonDecomposition> {
    let dec: PolygonDecomposition = serde_json::from_str(text)?;
    validate(&dec)?;
    Ok(dec)
}

/// Vertex of a realized polygon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Vertex {
    Finite(HPoint),
    /// Ideal point, in Poincaré disk coordinates.
    Ideal(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizedPolygon {
    pub id: String,
    pub vertices: Vec<Vertex>,
}

fn ideal_endpoint(t: &HTangent) -> (f64, f64) {
    let w = t.base.coords() + t.vector;
    (w[1] / w[0], w[2] / w[0])
}

/// Places one copy of the fundamental domain in the plane, fan vertex at
/// the origin. Vertices follow each polygon's edge order.
pub fn realize(dec: &PolygonDecomposition) -> Result<Vec<RealizedPolygon>> {
    let r = dec.header.r;
    let t = dec.triangle_count();
    let a = alpha(r);
    let v = HPoint::origin();
    let w: Vec<HPoint> = (0..=t)
        .map(|j| {
            let th = j as f64 * a;
            flow(&v, &V3::new(0.0, th.cos(), th.sin()), 2.0 * r)
        })
        .collect();
    // outer edge label -> (start, end) counter-clockwise around the fan
    let mut outer: HashMap<String, (HPoint, HPoint)> = HashMap::new();
    let labels = fan_labels(dec.header.genus, dec.header.n, dec.header.b);
    outer.insert(labels[0].clone(), (v, w[0]));
    for j in 0..t {
        outer.insert(labels[j + 1].clone(), (w[j], w[j + 1]));
    }
    outer.insert(labels[t + 1].clone(), (w[t], v));

    let mut out = Vec::new();
    let mut tri = 0;
    for p in &dec.polygons {
        let vertices = match p.shape {
            Shape::EquilateralTriangle { .. } => {
                tri += 1;
                vec![Vertex::Finite(v), Vertex::Finite(w[tri - 1]), Vertex::Finite(w[tri])]
            }
            Shape::HorocyclicIdealTriangle { .. } => {
                let (p0, q0) = outer[&p.edges[0]];
                let dir = HTangent::towards(&p0, &q0)?.rotate(-beta(r));
                vec![
                    Vertex::Finite(q0),
                    Vertex::Finite(p0),
                    Vertex::Ideal(ideal_endpoint(&dir).0, ideal_endpoint(&dir).1),
                ]
            }
            Shape::SaccheriQuadrilateral { legs, .. } => {
                let (p0, q0) = outer[&p.edges[0]];
                let g = gamma(r);
                let from_p = HTangent::towards(&p0, &q0)?.rotate(-g);
                let from_q = HTangent::towards(&q0, &p0)?.rotate(g);
                let p1 = flow(&p0, &from_p.vector, legs);
                let q1 = flow(&q0, &from_q.vector, legs);
                vec![Vertex::Finite(q0), Vertex::Finite(p0), Vertex::Finite(p1), Vertex::Finite(q1)]
            }
        };
        out.push(RealizedPolygon { id: p.id.clone(), vertices });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_small_signatures() {
        let d = build_max_surface(-2, 1, 1).unwrap();
        assert_eq!((d.triangle_count(), d.horocyclic_count(), d.quadrilateral_count()), (4, 1, 1));
        let opts = BuildOptions { allow_degenerate: true };
        let d = build_max_surface_with(-1, 0, 1, opts).unwrap();
        assert_eq!((d.triangle_count(), d.horocyclic_count(), d.quadrilateral_count()), (3, 0, 1));
        assert!(matches!(build_max_surface(-1, 0, 1), Err(Error::InvalidSignature(_))));
    }

    #[test]
    fn rejects_fractional_genus() {
        assert!(matches!(build_max_surface(-1, 1, 1), Err(Error::InvalidSignature(_))));
    }

    #[test]
    fn single_triangle_fans() {
        let opts = BuildOptions { allow_degenerate: true };
        assert!(build_max_surface_with(-1, 3, 0, opts).is_ok());
        assert!(build_max_surface_with(-1, 2, 1, opts).is_ok());
    }

    #[test]
    fn validate_catches_tampering() {
        let mut d = build_max_surface(-3, 2, 1).unwrap();
        validate(&d).unwrap();
        d.pairings.pop();
        assert!(validate(&d).is_err());
    }
}
