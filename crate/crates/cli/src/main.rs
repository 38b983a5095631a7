mod scan;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use hypext::cutlocus::{
    boundary_rays, flagged_symmetric, holonomy_for, rows_to_csv, sample_cut_locus, verify_sys_lower_bound, CutDomain,
    RayReport, DEFAULT_EPSILON, RAY_SAMPLES,
};
use hypext::error::Error;
use hypext::lorentz::{boost_to_origin, HPoint, M3};
use hypext::num17;
use hypext::oracle::{bundled_fixtures, generate_fixtures, FixtureFile};
use hypext::pants::{embed_hexagon, max_systole_with, PantsSpec, Witness};
use hypext::radius_solver::{boundary_length_at_max, packing_radius_with, Signature};
use hypext::roots::RootOptions;
use hypext::surface_builder::{
    build_max_surface_with, parse_decomposition, realize, to_json, verify_gauss_bonnet, verify_vertex_angle,
    BuildOptions, Vertex,
};
use hypext::verify::{run_criterion, CriterionResult, CRITERIA};

use crate::svg::{heat, project, Svg};

const TOL_ENV: &str = "HYPEXT_TOL";
const TOL_RANGE: (f64, f64) = (1e-14, 1e-2);

/// Extremal geometry of hyperbolic surfaces with geodesic boundary.
///
/// Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
/// The environment variable HYPEXT_TOL overrides the root-bracket width
/// (allowed range 1e-14 to 1e-2).
#[derive(Parser)]
#[command(name = "hypext", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Packing radius of the maximizing surface of signature (chi, n, b).
    MaxInjrad {
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        /// Number of disks (1 gives the injectivity radius).
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        k: i64,
        #[arg(long)]
        json: bool,
    },
    /// Builds the fan decomposition of a maximizing surface.
    BuildSurface {
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        /// Decomposition file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Figure of the fundamental domain.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Also build n = 0 or b = 0.
        #[arg(long)]
        allow_degenerate: bool,
    },
    /// Maximum of the systole of loops on a pair of pants.
    ///
    /// Scan CSV columns, in order: s,t,u,v,l1,l2,l3,sys,is_max. (s, t) are
    /// Fermi coordinates about B3 and (u, v) disk coordinates of the figure.
    Pants {
        #[arg(long, allow_negative_numbers = true)]
        b1: f64,
        #[arg(long, allow_negative_numbers = true)]
        b2: f64,
        #[arg(long, allow_negative_numbers = true)]
        b3: f64,
        /// Grid points per axis of a scan over the hexagon.
        #[arg(long, value_parser = clap::value_parser!(u32).range(4..=2048))]
        scan: Option<u32>,
        /// Scan CSV; standard output when omitted.
        #[arg(long, requires = "scan")]
        csv: Option<PathBuf>,
        /// Heatmap of the scan with the witness marked.
        #[arg(long, requires = "scan")]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Sampled cut locus of one boundary geodesic.
    ///
    /// CSV columns, in order: u,v,sheet,dist1,dist2,flagged. (u, v) are disk
    /// coordinates centred on the hexagon and its mirror, sheet is 0 for the
    /// hexagon and 1 for the mirror, dist1 <= dist2 the two smallest lift
    /// distances.
    Cutlocus {
        #[arg(long, allow_negative_numbers = true)]
        b1: f64,
        #[arg(long, allow_negative_numbers = true)]
        b2: f64,
        #[arg(long, allow_negative_numbers = true)]
        b3: f64,
        /// Boundary index, 1 to 3.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        gamma: u8,
        /// Grid points per axis.
        #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(8..=1024))]
        grid: u32,
        /// Flagging tolerance as a multiple of the local grid spacing.
        #[arg(long, allow_negative_numbers = true)]
        epsilon: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Runs the acceptance suite.
    Verify {
        /// One record per criterion, as JSON.
        #[arg(long)]
        json: bool,
        /// Fixture file to use instead of the bundled one.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=10))]
        only: Vec<u8>,
    },
    /// Regenerates the fixture file from the independent oracle.
    Fixtures {
        /// Output path, or - for standard output.
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn root_options() -> Result<RootOptions, Failure> {
    let mut opts = RootOptions::default();
    if let Ok(raw) = std::env::var(TOL_ENV) {
        let tol: f64 = raw.trim().parse().map_err(|_| Failure::Usage(format!("{TOL_ENV}={raw} is not a number")))?;
        if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
            return Err(Failure::Usage(format!("{TOL_ENV}={raw} is outside [{:e}, {:e}]", TOL_RANGE.0, TOL_RANGE.1)));
        }
        opts.bracket_width = tol;
    }
    Ok(opts)
}

fn write_out(path: &Path, text: &str) -> Outcome {
    if path.as_os_str() == "-" {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::MaxInjrad { chi, n, b, k, json } => max_injrad(chi, n, b, k, json),
        Command::BuildSurface { chi, n, b, out, svg, allow_degenerate } => {
            build_surface(chi, n, b, out, svg, allow_degenerate)
        }
        Command::Pants { b1, b2, b3, scan, csv, svg, json } => pants(b1, b2, b3, scan, csv, svg, json),
        Command::Cutlocus { b1, b2, b3, gamma, grid, epsilon, csv, svg, json } => {
            cutlocus(b1, b2, b3, gamma, grid, epsilon, csv, svg, json)
        }
        Command::Verify { json, fixtures, only } => verify(json, fixtures, only),
        Command::Fixtures { out } => fixtures(out),
    }
}

#[derive(Serialize)]
struct RadiusReport {
    chi: i64,
    n: i64,
    b: i64,
    k: i64,
    #[serde(with = "num17")]
    r: f64,
    #[serde(with = "num17")]
    residual: f64,
    #[serde(with = "num17")]
    boundary_length: f64,
    iterations: usize,
}

fn max_injrad(chi: i64, n: i64, b: i64, k: i64, json: bool) -> Outcome {
    let sig = Signature::new(chi, n, b, k)?;
    let sol = packing_radius_with(&sig, root_options()?)?;
    let rep = RadiusReport {
        chi,
        n,
        b,
        k,
        r: sol.r,
        residual: sol.residual,
        boundary_length: boundary_length_at_max(sol.r),
        iterations: sol.iterations,
    };
    if json {
        return print_json(&rep);
    }
    println!("r                {}", num17::format(rep.r));
    println!("residual         {}", num17::format(rep.residual));
    println!("boundary length  {}", num17::format(rep.boundary_length));
    Ok(())
}

fn build_surface(
    chi: i64,
    n: i64,
    b: i64,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    allow_degenerate: bool,
) -> Outcome {
    let dec = build_max_surface_with(chi, n, b, BuildOptions { allow_degenerate })?;
    let text = to_json(&dec)?;
    let back = parse_decomposition(&text)?;
    let lossless = back == dec && to_json(&back)? == text;
    match &out {
        Some(path) => write_out(path, &text)?,
        None => println!("{text}"),
    }
    let va = verify_vertex_angle(&dec);
    let gb = verify_gauss_bonnet(&dec);
    eprintln!(
        "polygons: {} triangles, {} horocyclic, {} quadrilaterals",
        dec.triangle_count(),
        dec.horocyclic_count(),
        dec.quadrilateral_count()
    );
    eprintln!("vertex-angle residual  {}", num17::format(va.residual));
    eprintln!("Gauss-Bonnet residual  {}", num17::format(gb));
    eprintln!("round trip             {}", if lossless { "lossless" } else { "LOSSY" });
    if let Some(path) = svg {
        let mut fig = Svg::new();
        for poly in realize(&dec)? {
            let pts: Vec<_> = poly
                .vertices
                .iter()
                .map(|v| match v {
                    Vertex::Finite(p) => project(p),
                    Vertex::Ideal(u, v) => (*u, *v),
                })
                .collect();
            fig.geodesic_path(&pts, true, "#1f77b4", 1.0);
        }
        fig.dot((0.0, 0.0), 3.0, "#d62728");
        fig.caption(&format!("chi = {chi}, n = {n}, b = {b}, r = {:.6}", dec.header.r));
        write_out(&path, &fig.finish())?;
    }
    if lossless {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct PantsReport {
    case: &'static str,
    #[serde(with = "num17")]
    value: f64,
    #[serde(with = "num17::vec")]
    witness: Vec<f64>,
    #[serde(with = "num17::opt")]
    witness_s: Option<f64>,
    #[serde(with = "num17")]
    residual: f64,
    #[serde(with = "num17")]
    witness_residual: f64,
    scan: Option<ScanSummary>,
}

#[derive(Serialize)]
struct ScanSummary {
    points: usize,
    #[serde(with = "num17")]
    max_sys: f64,
    witness_in_max_cell: bool,
}

#[allow(clippy::too_many_arguments)]
fn pants(
    b1: f64,
    b2: f64,
    b3: f64,
    res: Option<u32>,
    csv: Option<PathBuf>,
    svg: Option<PathBuf>,
    json: bool,
) -> Outcome {
    let spec = PantsSpec::new(b1, b2, b3)?;
    let m = max_systole_with(&spec, root_options()?)?;
    let wp = m.witness.point();
    let mut rep = PantsReport {
        case: m.case_tag.name(),
        value: m.value,
        witness: wp.coords().iter().copied().collect(),
        witness_s: match m.witness {
            Witness::Boundary { s, .. } => Some(s),
            Witness::Interior(_) => None,
        },
        residual: m.residual,
        witness_residual: m.witness_residual,
        scan: None,
    };
    if let Some(res) = res {
        let emb = embed_hexagon(&spec)?;
        let grid = scan::scan(&emb, res as usize);
        let frame = boost_to_origin(&emb.centroid());
        let recentre = |p: &HPoint| project(&p.transform(&frame));
        let (ws, wt) = emb.fermi_coords(&wp);
        let max_sys = grid.rows.get(grid.argmax).map_or(f64::NAN, |r| r.sys);
        rep.scan =
            Some(ScanSummary { points: grid.rows.len(), max_sys, witness_in_max_cell: grid.near_max_cell(ws, wt) });
        let text = grid.to_csv(recentre);
        match &csv {
            Some(path) => write_out(path, &text)?,
            None if !json => print!("{text}"),
            None => {}
        }
        if let Some(path) = svg {
            write_out(&path, &pants_figure(&emb.vertices, &grid, &frame, &wp, &rep))?;
        }
    }
    if json {
        return print_json(&rep);
    }
    let summary = format!(
        "case {}\nmax sys {}\nwitness {}\nresidual {}\nwitness residual {}",
        rep.case,
        num17::format(rep.value),
        rep.witness.iter().map(|x| num17::format(*x)).collect::<Vec<_>>().join(" "),
        num17::format(rep.residual),
        num17::format(rep.witness_residual)
    );
    // keep standard output clean for CSV
    if res.is_some() && csv.is_none() {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    if let Some(s) = &rep.scan {
        eprintln!(
            "scan: {} points, max {}, witness in max cell: {}",
            s.points,
            num17::format(s.max_sys),
            s.witness_in_max_cell
        );
    }
    Ok(())
}

fn pants_figure(verts: &[HPoint; 6], grid: &scan::Scan, frame: &M3, witness: &HPoint, rep: &PantsReport) -> String {
    let mut fig = Svg::new();
    let lo = grid.rows.iter().map(|r| r.sys).fold(f64::INFINITY, f64::min);
    let hi = grid.rows.iter().map(|r| r.sys).fold(f64::NEG_INFINITY, f64::max);
    for r in &grid.rows {
        let t = if hi > lo { (r.sys - lo) / (hi - lo) } else { 1.0 };
        fig.dot(project(&r.point.transform(frame)), 2.0, &heat(t));
    }
    let outline: Vec<_> = verts.iter().map(|v| project(&v.transform(frame))).collect();
    fig.geodesic_path(&outline, true, "#333", 1.5);
    fig.marker(project(&witness.transform(frame)), "witness");
    fig.caption(&format!("{} case, max sys = {:.9}", rep.case, rep.value));
    fig.finish()
}

#[derive(Serialize)]
struct CutLocusReport {
    boundary: u8,
    /// Word-length cap of the grid sampling; absent when the grid is empty.
    word_length_cap: Option<usize>,
    ray_cap: usize,
    quadrilateral_count: usize,
    valence_estimates: Vec<usize>,
    flagged: Option<usize>,
    grid_points: usize,
    #[serde(with = "num17")]
    epsilon: f64,
    symmetric: Option<bool>,
    #[serde(with = "num17")]
    max_boundary_sys: f64,
    #[serde(with = "num17")]
    lower_bound: f64,
    lower_bound_ok: bool,
}

#[allow(clippy::too_many_arguments)]
fn cutlocus(
    b1: f64,
    b2: f64,
    b3: f64,
    gamma: u8,
    grid: u32,
    epsilon: Option<f64>,
    csv: Option<PathBuf>,
    svg: Option<PathBuf>,
    json: bool,
) -> Outcome {
    let spec = PantsSpec::new(b1, b2, b3)?;
    let i = gamma as usize - 1;
    let hol = holonomy_for(&spec)?;
    let bound = verify_sys_lower_bound(&spec, i)?;
    let sample = match sample_cut_locus(&hol, i, grid as usize, epsilon) {
        Ok(s) => Some(s),
        // long thin domains can fall between the grid points; the ray count
        // does not depend on the grid
        Err(e @ Error::EmptyGrid { .. }) => {
            eprintln!("warning: {e}; counting from the boundary rays only");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let rays = match &sample {
        Some(s) => RayReport {
            quadrilateral_count: s.quadrilateral_count,
            valences: s.valence_estimates.clone(),
            arcs: s.arcs.clone(),
            cap: s.ray_cap,
        },
        None => boundary_rays(&hol, i, RAY_SAMPLES)?,
    };
    let rows = sample.as_ref().map_or(&[][..], |s| &s.rows[..]);
    let rep = CutLocusReport {
        boundary: gamma,
        word_length_cap: sample.as_ref().map(|s| s.word_length_cap),
        ray_cap: rays.cap,
        quadrilateral_count: rays.quadrilateral_count,
        valence_estimates: rays.valences.clone(),
        flagged: sample.as_ref().map(|s| s.points.len()),
        grid_points: rows.len(),
        epsilon: sample.as_ref().map_or(epsilon.unwrap_or(DEFAULT_EPSILON), |s| s.epsilon),
        // the reflection swapping B1 and B2 fixes B3
        symmetric: sample.as_ref().filter(|_| b1 == b2 && i == 2).map(flagged_symmetric),
        max_boundary_sys: bound.max_boundary_sys,
        lower_bound: bound.bound,
        lower_bound_ok: bound.ok,
    };
    if let Some(path) = &csv {
        write_out(path, &rows_to_csv(rows))?;
    }
    if let Some(path) = &svg {
        let dom = CutDomain::new(&hol, i);
        let mut fig = Svg::new();
        for r in rows.iter().filter(|r| r.flagged) {
            fig.dot((r.u, r.v), 1.5, "#d62728");
        }
        let emb = &hol.embedding;
        let hex: Vec<_> = emb.vertices.iter().map(|v| project(&dom.to_frame(v))).collect();
        let mirror: Vec<_> = emb.vertices.iter().map(|v| project(&dom.to_frame(&v.transform(&dom.mirror)))).collect();
        fig.geodesic_path(&hex, true, "#333", 1.5);
        fig.geodesic_path(&mirror, true, "#999", 1.0);
        let (p, q) = [(0, 1), (2, 3), (4, 5)][i];
        fig.geodesic_path(&[hex[p], hex[q]], false, "#1f77b4", 3.0);
        fig.geodesic_path(&[mirror[p], mirror[q]], false, "#1f77b4", 3.0);
        fig.caption(&format!("cut locus of B{gamma}: {} quadrilaterals", rep.quadrilateral_count));
        write_out(path, &fig.finish())?;
    }
    if json {
        print_json(&rep)?;
    } else {
        if let Some(cap) = rep.word_length_cap {
            println!("boundary B{gamma}, words up to length {cap}");
        }
        println!("quadrilaterals {}", rep.quadrilateral_count);
        println!("vertex valences {:?}", rep.valence_estimates);
        if let Some(flagged) = rep.flagged {
            println!("flagged {flagged} of {} grid points", rep.grid_points);
        }
        if let Some(sym) = rep.symmetric {
            println!("symmetric {sym}");
        }
        println!(
            "max sys on B{gamma} {} >= {}: {}",
            num17::format(rep.max_boundary_sys),
            num17::format(rep.lower_bound),
            rep.lower_bound_ok
        );
    }
    if rep.lower_bound_ok && rep.symmetric != Some(false) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn load_fixtures(path: Option<PathBuf>) -> Result<FixtureFile, Failure> {
    match path {
        None => Ok(bundled_fixtures()?),
        Some(p) => {
            let text =
                fs::read_to_string(&p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
            Ok(FixtureFile::parse(&text)?)
        }
    }
}

fn verify(json: bool, fixtures: Option<PathBuf>, only: Vec<u8>) -> Outcome {
    let fx = load_fixtures(fixtures)?;
    let ids: Vec<u8> = if only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { only };
    let mut results: Vec<CriterionResult> = Vec::new();
    for id in ids {
        let r = run_criterion(id, &fx);
        if !json {
            println!("{}", r.line());
        }
        results.push(r);
    }
    if json {
        print_json(&results)?;
    }
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn fixtures(out: PathBuf) -> Outcome {
    let mut command = vec!["hypext".to_string()];
    command.extend(std::env::args().skip(1));
    let command = command.join(" ");
    let date = chrono::Utc::now().format("%Y-%m-%d").to_string();
    let file = generate_fixtures(&command, &date)?;
    let mut text = file.to_json()?;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    write_out(&out, &text)?;
    eprintln!("{} constants written", file.constants.len());
    Ok(())
}
