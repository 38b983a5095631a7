//! The acceptance suite: ten numbered criteria, each a pass/fail with a
//! one-line detail and its runtime.

use std::f64::consts::PI;
use std::time::Instant;

use serde::Serialize;

use crate::cutlocus::{
    flagged_symmetric, holonomy_for, sample_cut_locus_at, stabilize, verify_sys_lower_bound, MAX_WORD_CAP,
};
use crate::error::Result;
use crate::lorentz::{flow, HPoint, Segment};
use crate::oracle::{
    self, angle_defect, equilateral_triangle, fd_difference, grid_max_side, grid_max_systole, half_square,
    oracle_interior_root, oracle_radius, oracle_threshold, spec_tag, square, FixtureFile, GridSpec, BOUNDARY_SPECS,
    INTERIOR_SPECS,
};
use crate::pants::{
    boundary_root, classify_case, embed_hexagon, g_fn, interior_lhs, interior_root, max_systole, solve_boundary_max,
    solve_interior_max, systole_unchecked, CaseTag, PantsSpec, Witness,
};
use crate::polytrig::{alpha, area_am, area_equilateral, area_horocyclic, area_square, beta, gamma};
use crate::radius_solver::{angle_sum, packing_radius, Signature};
use crate::roots::RootOptions;
use crate::surface_builder::{
    build_max_surface, parse_decomposition, to_json, validate, verify_gauss_bonnet, verify_vertex_angle,
};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} {}: {} ({:.3} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

pub const CRITERIA: [(u8, &str, f64); 10] = [
    (1, "angle-function anchors", 1.0),
    (2, "area identities", 5.0),
    (3, "packing-radius solver", 10.0),
    (4, "maximizing-surface construction", 2.0),
    (5, "pants interior case", 90.0),
    (6, "pants boundary case", 90.0),
    (7, "case threshold", 5.0),
    (8, "systole lower bound", 20.0),
    (9, "cut locus", 120.0),
    (10, "loop-length monotonicity", 5.0),
];

/// Outcome of a criterion body: pass flag and detail.
type Outcome = Result<(bool, String)>;

pub fn run_criterion(id: u8, fx: &FixtureFile) -> CriterionResult {
    let (_, name, limit) = CRITERIA.iter().copied().find(|c| c.0 == id).unwrap_or((id, "unknown", 0.0));
    let start = Instant::now();
    let outcome = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(fx),
        4 => criterion_4(),
        5 => criterion_5(fx),
        6 => criterion_6(fx),
        7 => criterion_7(fx),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    if seconds >= limit {
        passed = false;
        detail.push_str(&format!("; over the {limit} s budget"));
    }
    CriterionResult { id, name, passed, detail, seconds, limit_seconds: limit }
}

pub fn run_all(fx: &FixtureFile) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run_criterion(c.0, fx)).collect()
}

/// Collects failures of named checks into a detail line.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failed.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self) -> Outcome {
        if self.failed.is_empty() {
            Ok((true, self.notes.join("; ")))
        } else {
            let mut shown: Vec<String> = self.failed.iter().take(4).cloned().collect();
            if self.failed.len() > 4 {
                shown.push(format!("{} more", self.failed.len() - 4));
            }
            Ok((false, format!("failed: {}", shown.join("; "))))
        }
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

fn strictly_decreasing(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> bool {
    let v: Vec<f64> = grid(lo, hi, n).map(f).collect();
    v.windows(2).all(|w| w[1] < w[0])
}

fn criterion_1() -> Outcome {
    let mut c = Checks::default();
    let anchors = [(alpha(0.0), PI / 3.0, "alpha"), (beta(0.0), PI / 2.0, "beta"), (gamma(0.0), PI / 2.0, "gamma")];
    let worst = anchors.iter().map(|(v, t, _)| (v - t).abs()).fold(0.0, f64::max);
    for (v, t, name) in anchors {
        c.check((v - t).abs() <= 1e-14, format!("{name}(0) = {v:e}"));
    }
    for (f, name) in [(alpha as fn(f64) -> f64, "alpha"), (beta, "beta"), (gamma, "gamma")] {
        c.check(strictly_decreasing(f, 0.0, 30.0, 1000), format!("{name} not strictly decreasing"));
    }
    c.note(format!("anchor error {worst:.1e}; strictly decreasing on 1000 points of [0, 30]"));
    c.finish()
}

fn criterion_2() -> Outcome {
    let mut c = Checks::default();
    let ds: Vec<f64> = (1..=1000).map(|k| 30.0 * k as f64 / 1000.0).collect();
    let mut am = 0.0f64;
    for &d in &ds {
        am = am.max((2.0 * area_am(d) - area_square(d)).abs());
        c.check(area_square(d) > 2.0 * area_equilateral(d), format!("square vs two triangles at d = {d}"));
        c.check(area_horocyclic(d) > area_equilateral(d), format!("horocyclic vs triangle at d = {d}"));
    }
    c.check(am <= 1e-14, format!("2 A_m - square = {am:e}"));
    let mut worst = 0.0f64;
    for d in [0.5, 1.0, 2.0, 4.0] {
        let eq = (angle_defect(&equilateral_triangle(d)?)? - area_equilateral(d)).abs();
        let sq = (angle_defect(&square(d)?)? - area_square(d)).abs();
        let half = (angle_defect(&half_square(d)?)? - area_am(d)).abs();
        worst = worst.max(eq).max(sq).max(half);
    }
    c.check(worst <= 1e-8, format!("constructed angle defects off by {worst:e}"));
    c.note(format!("2A_m = D0(d,d,d,d) to {am:.1e}; inequalities on 1000 d; constructed defects within {worst:.1e}"));
    c.finish()
}

/// Lattice of signatures with integral genus.
pub fn signature_lattice() -> Vec<Signature> {
    let mut out = Vec::new();
    for chi in -5..=-1 {
        for n in 0..=3 {
            for b in 0..=3 {
                let twice = 2 - chi - n - b;
                if twice < 0 || twice % 2 != 0 {
                    continue;
                }
                for k in 1..=4 {
                    out.push(Signature { chi, n, b, k });
                }
            }
        }
    }
    out
}

fn criterion_3(fx: &FixtureFile) -> Outcome {
    let mut c = Checks::default();
    let lattice = signature_lattice();
    let mut worst_res = 0.0f64;
    let mut worst_agree = 0.0f64;
    let mut solved = std::collections::HashMap::new();
    for sig in &lattice {
        let sol = packing_radius(sig)?;
        let res = (angle_sum(sol.r, sig) - 2.0 * PI).abs();
        let orc = oracle_radius(sig.chi, sig.n, sig.b, sig.k)?;
        worst_res = worst_res.max(res);
        worst_agree = worst_agree.max((sol.r - orc.x).abs());
        solved.insert((sig.chi, sig.n, sig.b, sig.k), sol.r);
    }
    c.check(worst_res < 1e-10, format!("residual {worst_res:e}"));
    c.check(worst_agree < 1e-11, format!("bisection/Newton gap {worst_agree:e}"));
    let mut mono = 0;
    for (&(chi, n, b, k), &r) in &solved {
        if let Some(&r2) = solved.get(&(chi, n, b, k + 1)) {
            c.check(r2 < r - 1e-9, format!("not decreasing in k at ({chi},{n},{b},{k})"));
            mono += 1;
        }
        if let Some(&r2) = solved.get(&(chi - 2, n, b, k)) {
            c.check(r2 > r, format!("not increasing in -chi at ({chi},{n},{b},{k})"));
            mono += 1;
        }
    }
    for (chi, n, b) in [(-1, 0, 1), (-1, 1, 0)] {
        let name = format!("radius_chi{chi}_n{n}_b{b}_k1");
        let want = fx.get(&name)?;
        let got = solved[&(chi, n, b, 1)];
        c.check((got - want).abs() < 1e-11, format!("{name}: {got} vs fixture {want}"));
    }
    c.note(format!(
        "{} signatures; residual {worst_res:.1e}; bisection gap {worst_agree:.1e}; {mono} monotonicity pairs; fixtures match",
        lattice.len()
    ));
    c.finish()
}

pub const SURFACE_SIGNATURES: [(i64, i64, i64); 7] =
    [(-3, 2, 1), (-1, 1, 2), (-1, 2, 1), (-2, 1, 1), (-2, 2, 2), (-3, 1, 2), (-5, 2, 1)];

fn criterion_4() -> Outcome {
    let mut c = Checks::default();
    let (mut va, mut gb) = (0.0f64, 0.0f64);
    for (chi, n, b) in SURFACE_SIGNATURES {
        let dec = build_max_surface(chi, n, b)?;
        validate(&dec)?;
        let v = verify_vertex_angle(&dec).residual;
        let g = verify_gauss_bonnet(&dec);
        va = va.max(v);
        gb = gb.max(g);
        c.check(v < 1e-10, format!("vertex angle {v:e} for ({chi},{n},{b})"));
        c.check(g < 1e-9, format!("Gauss-Bonnet {g:e} for ({chi},{n},{b})"));
        let text = to_json(&dec)?;
        let back = parse_decomposition(&text)?;
        c.check(back == dec && to_json(&back)? == text, format!("round trip for ({chi},{n},{b})"));
    }
    // genus 1: 4g + n + b - 2 = 5 triangles
    let first = build_max_surface(-3, 2, 1)?;
    let counts = (first.triangle_count(), first.horocyclic_count(), first.quadrilateral_count());
    c.check(counts == (5, 2, 1), format!("(-3,2,1) counts {counts:?}"));
    c.note(format!(
        "{} signatures; vertex angle {va:.1e}; Gauss-Bonnet {gb:.1e}; byte-identical round trips",
        SURFACE_SIGNATURES.len()
    ));
    c.finish()
}

fn spec_of(b: [f64; 3]) -> Result<PantsSpec> {
    PantsSpec::new(b[0], b[1], b[2])
}

fn criterion_5(fx: &FixtureFile) -> Outcome {
    let mut c = Checks::default();
    let mut notes = Vec::new();
    for b in INTERIOR_SPECS {
        let spec = spec_of(b)?;
        let tag = spec_tag(b);
        c.check(classify_case(&spec) == CaseTag::Interior, format!("{tag} not Interior"));
        let m = solve_interior_max(&spec)?;
        let res = (interior_lhs(&spec, m.value)? - 2.0 * PI).abs();
        c.check(res < 1e-10, format!("{tag} residual {res:e}"));
        c.check(m.value > spec.b3, format!("{tag} root {} not above b3", m.value));
        c.check(m.witness_residual < 1e-9, format!("{tag} witness {:e}", m.witness_residual));
        let want = fx.get(&format!("interior_root_{tag}"))?;
        c.check((m.value - want).abs() < 1e-11, format!("{tag} root {} vs fixture {want}", m.value));
        let orc = oracle_interior_root(b)?;
        c.check((m.value - orc.x).abs() < 1e-11, format!("{tag} vs bisection {}", orc.x));
        let (best, _) = grid_max_systole(&spec, GridSpec::default())?;
        let gap = (best.value - m.value).abs();
        c.check(gap < 1e-6, format!("{tag} grid {} vs {}", best.value, m.value));
        c.check(best.value <= m.value + 1e-9, format!("{tag} grid exceeds the maximum"));
        notes.push(format!("{tag}: x = {:.12}, grid gap {gap:.1e}", m.value));
    }
    c.note(notes.join(", "));
    c.finish()
}

fn criterion_6(fx: &FixtureFile) -> Outcome {
    let mut c = Checks::default();
    let mut notes = Vec::new();
    for b in BOUNDARY_SPECS {
        let spec = spec_of(b)?;
        let tag = spec_tag(b);
        c.check(classify_case(&spec) == CaseTag::Boundary, format!("{tag} not Boundary"));
        let m = solve_boundary_max(&spec)?;
        c.check(m.value > spec.b2 && m.value <= spec.b3, format!("{tag} root {} outside (b2, b3]", m.value));
        let res = (g_fn(&spec, m.value)? - PI).abs();
        c.check(res < 1e-10, format!("{tag} residual {res:e}"));
        let emb = embed_hexagon(&spec)?;
        match m.witness {
            Witness::Boundary { s, point } => {
                let off = emb.boundary_geodesics[2].signed(&point).abs();
                c.check(off < 1e-12, format!("{tag} witness {off:e} off B3"));
                let h = emb.b3_half_side();
                c.check(s.abs() < h - 1e-6, format!("{tag} witness at a seam foot"));
            }
            Witness::Interior(_) => c.check(false, format!("{tag} witness not on B3")),
        }
        c.check(m.witness_residual < 1e-9, format!("{tag} witness {:e}", m.witness_residual));
        let want = fx.get(&format!("boundary_root_{tag}"))?;
        c.check((m.value - want).abs() < 1e-11, format!("{tag} root {} vs fixture {want}", m.value));
        let side = grid_max_side(&emb, 2, GridSpec::default());
        let gap = (side.value - m.value).abs();
        c.check(gap < 1e-6, format!("{tag} boundary grid {} vs {}", side.value, m.value));
        notes.push(format!("{tag}: x = {:.12}, grid gap {gap:.1e}", m.value));
    }
    c.note(notes.join(", "));
    c.finish()
}

fn criterion_7(fx: &FixtureFile) -> Outcome {
    let mut c = Checks::default();
    let t = oracle_threshold(1.0, 1.0)?;
    c.check(t.width <= 1e-10, format!("threshold bracket {:e}", t.width));
    let want = fx.get("threshold_b3_1_1")?;
    c.check((t.x - want).abs() < 1e-11, format!("threshold {} vs fixture {want}", t.x));
    let below = PantsSpec::new(1.0, 1.0, t.x - 1e-9)?;
    let above = PantsSpec::new(1.0, 1.0, t.x + 1e-9)?;
    c.check(classify_case(&below) == CaseTag::Interior, "Interior just below the threshold");
    c.check(classify_case(&above) == CaseTag::Boundary, "Boundary just above the threshold");
    let xi = interior_root(&below, RootOptions::default())?.x;
    let xb = boundary_root(&above, RootOptions::default())?.x;
    c.check((xi - xb).abs() < 1e-7, format!("solvers disagree: {xi} vs {xb}"));
    c.check((xi - t.x).abs() < 1e-7 && (xb - t.x).abs() < 1e-7, "solver values away from b3");
    c.note(format!("b3* = {:.15}; interior {xi:.12}, boundary {xb:.12}", t.x));
    c.finish()
}

fn criterion_8() -> Outcome {
    let mut c = Checks::default();
    let mut notes = Vec::new();
    for b in [[1.0, 1.0, 1.0], [1.0, 1.0, 40.0]] {
        let spec = spec_of(b)?;
        let r = verify_sys_lower_bound(&spec, 2)?;
        c.check(r.ok, format!("{}: max {} below {}", spec_tag(b), r.max_boundary_sys, r.bound));
        notes.push(format!("{}: max {:.9} >= {:.9}", spec_tag(b), r.max_boundary_sys, r.bound));
    }
    c.note(notes.join(", "));
    c.finish()
}

/// Grid resolution of the cut-locus criterion.
pub const CUT_LOCUS_RESOLUTION: usize = 128;

fn criterion_9() -> Outcome {
    let mut c = Checks::default();
    let mut notes = Vec::new();
    for b in [[1.0, 1.0, 1.0], [1.0, 2.0, 3.0]] {
        let tag = spec_tag(b);
        let hol = holonomy_for(&spec_of(b)?)?;
        let stab = stabilize(&hol, 2, CUT_LOCUS_RESOLUTION)?;
        let cap = match stab.stable_at {
            Some(cap) if cap <= MAX_WORD_CAP => cap,
            _ => {
                c.check(false, format!("{tag} did not stabilize"));
                continue;
            }
        };
        let sample = sample_cut_locus_at(&hol, 2, CUT_LOCUS_RESOLUTION, None, cap)?;
        c.check(sample.quadrilateral_count <= 6, format!("{tag} count {}", sample.quadrilateral_count));
        c.check(!sample.points.is_empty(), format!("{tag} nothing flagged"));
        let sym = if b[0] == b[1] {
            let ok = flagged_symmetric(&sample);
            c.check(ok, format!("{tag} flagged set not symmetric"));
            ", symmetric"
        } else {
            ""
        };
        notes.push(format!(
            "{tag}: stable at L = {cap}, {} quadrilaterals, {} flagged{sym}",
            sample.quadrilateral_count,
            sample.points.len()
        ));
    }
    c.note(notes.join("; "));
    c.finish()
}

/// Offset from a seam at which the escape derivative is sampled; on the
/// seam itself it vanishes to first order.
pub const SEAM_OFFSET: f64 = 0.01;
pub const FD_STEP: f64 = 1e-5;
pub const FD_MARGIN: f64 = 1e-10;

fn criterion_10() -> Outcome {
    let mut c = Checks::default();
    // leaving the seam between B2 and B3 raises l2 and l3
    let spec = PantsSpec::new(1.0, 2.0, 3.0)?;
    let emb = embed_hexagon(&spec)?;
    let v = emb.vertices;
    let seam = emb.seam_geodesics[0];
    let seg = Segment::new(&v[3], &v[4], &seam)?;
    let inward = -*seam.normal();
    let mut worst_interior = f64::INFINITY;
    for k in 0..20 {
        let u = 2.0 * seg.half_length * (k as f64 + 0.5) / 20.0;
        let q = seg.from_start(u);
        let at = |w: f64| -> HPoint { flow(&q, &inward, w) };
        for i in [1, 2] {
            let d = fd_difference(|w| systole_unchecked(&emb, &at(w)).ell[i], SEAM_OFFSET, FD_STEP);
            worst_interior = worst_interior.min(d);
            c.check(d > FD_MARGIN, format!("l{} escape difference {d:e} at seam point {k}", i + 1));
        }
    }
    // along B3, l1 grows away from the foot of seam31 and l2 away from the
    // foot of seam23
    let spec = PantsSpec::new(1.0, 1.0, 40.0)?;
    let emb = embed_hexagon(&spec)?;
    let h = emb.b3_half_side();
    let mut worst_boundary = f64::INFINITY;
    for k in 0..20 {
        let s = -h + 2.0 * h * (k as f64 + 0.5) / 20.0;
        let d1 = fd_difference(|x| systole_unchecked(&emb, &emb.fermi_point(s - x, 0.0)).ell[0], 0.0, FD_STEP);
        let d2 = fd_difference(|x| systole_unchecked(&emb, &emb.fermi_point(s + x, 0.0)).ell[1], 0.0, FD_STEP);
        worst_boundary = worst_boundary.min(d1).min(d2);
        c.check(d1 > FD_MARGIN, format!("l1 difference {d1:e} at B3 point {k}"));
        c.check(d2 > FD_MARGIN, format!("l2 difference {d2:e} at B3 point {k}"));
    }
    c.note(format!(
        "20 seam points, smallest difference {worst_interior:.1e}; 20 points on B3, smallest {worst_boundary:.1e}"
    ));
    c.finish()
}

/// Cross-check used by the CLI and tests: the maximum against the grid
/// oracle for any spec.
pub fn max_vs_grid(spec: &PantsSpec) -> Result<(f64, f64)> {
    let m = max_systole(spec)?;
    let (best, _) = oracle::grid_max_systole(spec, GridSpec::default())?;
    Ok((m.value, best.value))
}
