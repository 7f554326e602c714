use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use quatsurf::correspondence::{correspond, verify_correspondence, CorrespondenceReport};
use quatsurf::curve::{
    fd_curve_invariants, integrate_frenet_s3_seeded, CurveSpec, IntegrationStats, SampledCurve, SeedFrame,
};
use quatsurf::frame::{frame_identity_residuals, left_frame};
use quatsurf::oracle::{compare_with_closed_form, surface_oracle, surface_richardson, OracleComparison, Quantity, Richardson};
use quatsurf::surface::{analyze, build_surface, GeometryReport, PrintedFormDeviation, SurfaceGrid};
use quatsurf::theorems::{render_summary, ProbeResult, Settings, Verdict};

use crate::config::{Overrides, RunConfig};
use crate::output::{write_curve_csv, write_json, write_mesh_scalars, write_r3_csv, write_surface_csv, write_text};
use crate::project::{auto_pole, conformality_defect, stereographic_project, QuadMesh, CONFORMALITY_TOL};
use crate::{CliError, EXIT_VIOLATES};

#[derive(Debug, Parser)]
#[command(name = "quatsurf", version, about = "Translation surfaces in the 3-sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Arc-length step of the curve integrator.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Regularity margin δ.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Stereographic pole: auto, or ±e1..±e4.
    #[arg(long, global = true)]
    pub pole: Option<String>,
    /// Run only this probe (verify).
    #[arg(long, global = true)]
    pub probe: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Integrate `[alpha]` (and `[beta]` if present) and write node tables.
    Curve,
    /// Closed-form geometry of `alpha·beta` on the grid.
    Surface,
    /// Surface geometry plus finite-difference oracle and Richardson check.
    Analyze,
    /// Run the theorem probes of the manifest.
    Verify,
    /// Lift the generators to ℝ³ and compare the two translation surfaces.
    Correspond,
    /// Stereographic quad mesh with per-vertex H and K.
    Export,
}

/// Files written by a successful run, and the exit code to report.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifacts: Vec<PathBuf>,
    pub exit_code: i32,
    pub message: String,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply(&Overrides { step: cli.step, delta: cli.delta, pole: cli.pole.clone() });
    if cli.probe.is_some() && cli.command != Command::Verify {
        return Err(CliError::Config("--probe: only valid with verify".into()));
    }
    std::fs::create_dir_all(&cli.out).map_err(|source| CliError::Io { path: cli.out.display().to_string(), source })?;
    let out = cli.out.as_path();
    match cli.command {
        Command::Curve => run_curve(&cfg, out),
        Command::Surface => run_surface(&cfg, out),
        Command::Analyze => run_analyze(&cfg, out),
        Command::Verify => run_verify(&cfg, out, cli.probe.as_deref()),
        Command::Correspond => run_correspond(&cfg, out),
        Command::Export => run_export(&cfg, out),
    }
}

fn ok(artifacts: Vec<PathBuf>, message: String) -> Result<Outcome, CliError> {
    Ok(Outcome { artifacts, exit_code: 0, message })
}

fn sample((spec, seed): (CurveSpec, SeedFrame)) -> Result<SampledCurve, CliError> {
    Ok(integrate_frenet_s3_seeded(&spec, seed)?)
}

#[derive(Serialize)]
struct CurveSummary {
    name: &'static str,
    spec: CurveSpec,
    seed: SeedFrame,
    nodes: usize,
    stats: IntegrationStats,
    drift_per_length: f64,
    fd_kappa_error: Option<f64>,
    fd_tau_error: Option<f64>,
    frame_identity_residual: Option<f64>,
}

fn curve_summary(name: &'static str, c: &SampledCurve) -> CurveSummary {
    let fd = fd_curve_invariants(c).ok();
    CurveSummary {
        name,
        spec: c.spec.clone(),
        seed: c.seed,
        nodes: c.len(),
        stats: c.stats,
        drift_per_length: c.stats.drift_per_length(c.step()),
        fd_kappa_error: fd.as_ref().map(|e| e.max_kappa_error()),
        fd_tau_error: fd.as_ref().map(|e| e.max_tau_error()),
        frame_identity_residual: frame_identity_residuals(c).ok().map(|r| r.max()),
    }
}

fn run_curve(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let mut curves = vec![("alpha", sample(cfg.alpha()?)?)];
    if cfg.beta.is_some() {
        curves.push(("beta", sample(cfg.beta()?)?));
    }
    let mut files = Vec::new();
    let mut summaries = Vec::new();
    for (name, c) in &curves {
        files.push(write_curve_csv(&out.join(format!("curve_{name}.csv")), c, &left_frame(c)?)?);
        summaries.push(curve_summary(name, c));
    }
    files.push(write_json(&out.join("curve.json"), &summaries)?);
    ok(files, format!("integrated {} curve(s)", curves.len()))
}

fn build(cfg: &RunConfig, out: &Path) -> Result<(SampledCurve, SampledCurve, SurfaceGrid), CliError> {
    let a = sample(cfg.alpha()?)?;
    let b = sample(cfg.beta()?)?;
    let opts = cfg.surface_options(&a.s_values(), &b.s_values())?;
    match build_surface(&a, &b, &opts) {
        Ok(g) => Ok((a, b, g)),
        Err(e) => {
            let e = CliError::from(e);
            if let CliError::Regularity(nodes) = &e {
                write_json(&out.join("regularity.json"), nodes)?;
            }
            Err(e)
        }
    }
}

#[derive(Serialize)]
struct SurfaceSummary {
    rows: usize,
    cols: usize,
    s_range: [f64; 2],
    t_range: [f64; 2],
    delta: f64,
    /// Extremes of `P = ⟨T_α, T̂_β⟩`; the metric coefficient is `F = −P`.
    frame_product_min: f64,
    frame_product_max: f64,
    h_mean: f64,
    h_stdev: f64,
    h_max_abs: f64,
    k_max_abs: f64,
    k_ext_min: f64,
    k_ext_max: f64,
    minimality_max_abs: f64,
    umbilicity_min: f64,
    printed_deviation: PrintedFormDeviation,
}

fn surface_summary(g: &SurfaceGrid, r: &GeometryReport) -> SurfaceSummary {
    SurfaceSummary {
        rows: g.rows(),
        cols: g.cols(),
        s_range: [g.s[0], *g.s.last().unwrap()],
        t_range: [g.t[0], *g.t.last().unwrap()],
        delta: g.delta,
        frame_product_min: g.frame_product.min(),
        frame_product_max: g.frame_product.max(),
        h_mean: r.h.mean(),
        h_stdev: r.h.stdev(),
        h_max_abs: r.h.max_abs(),
        k_max_abs: r.k.max_abs(),
        k_ext_min: r.k_ext.min(),
        k_ext_max: r.k_ext.max(),
        minimality_max_abs: r.minimality.max_abs(),
        umbilicity_min: r.umbilicity.min(),
        printed_deviation: r.printed_deviation,
    }
}

fn run_surface(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let (_, _, g) = build(cfg, out)?;
    let r = analyze(&g);
    let files = vec![
        write_surface_csv(&out.join("surface.csv"), &r)?,
        write_json(&out.join("surface.json"), &surface_summary(&g, &r))?,
    ];
    ok(files, format!("surface grid {} x {}", g.rows(), g.cols()))
}

#[derive(Serialize)]
struct AnalysisSummary {
    surface: SurfaceSummary,
    oracle_width: usize,
    oracle: OracleComparison,
    gram_schmidt_residual: f64,
    projection_residual: f64,
    richardson: Vec<(Quantity, Richardson)>,
}

fn run_analyze(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let (_, _, g) = build(cfg, out)?;
    let r = analyze(&g);
    let width = cfg.oracle_width()?;
    let o = surface_oracle(&g, width)?;
    let richardson = Quantity::ALL.iter().map(|&q| Ok((q, surface_richardson(&g, q)?))).collect::<Result<Vec<_>, CliError>>()?;
    let summary = AnalysisSummary {
        surface: surface_summary(&g, &r),
        oracle_width: width,
        oracle: compare_with_closed_form(&g, &o),
        gram_schmidt_residual: o.gram_schmidt_residual,
        projection_residual: o.projection_residual,
        richardson,
    };
    let files = vec![write_surface_csv(&out.join("surface.csv"), &r)?, write_json(&out.join("analysis.json"), &summary)?];
    ok(files, format!("oracle max |dH| = {:e}", summary.oracle.h))
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    settings: Settings,
    results: &'a [ProbeResult],
}

fn run_verify(cfg: &RunConfig, out: &Path, only: Option<&str>) -> Result<Outcome, CliError> {
    let manifest = cfg.manifest(only)?;
    let results = manifest.run(None);
    let table = render_summary(&results);
    let files = vec![
        write_json(&out.join("verify.json"), &VerifyOutput { settings: manifest.settings, results: &results })?,
        write_text(&out.join("verify_summary.txt"), &table)?,
    ];
    let violates = results.iter().any(|r| r.verdict == Verdict::Violates);
    Ok(Outcome { artifacts: files, exit_code: if violates { EXIT_VIOLATES } else { 0 }, message: table })
}

#[derive(Serialize)]
struct CorrespondOutput {
    rows: usize,
    cols: usize,
    torsion_shift: [f64; 2],
    report: CorrespondenceReport,
}

fn run_correspond(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let a = sample(cfg.alpha()?)?;
    let b = sample(cfg.beta()?)?;
    let opts = cfg.surface_options(&a.s_values(), &b.s_values())?;
    let pair = correspond(&a, &b, &opts)?;
    let report = verify_correspondence(&pair)?;
    let shift = [pair.torsion_shift.alpha, pair.torsion_shift.beta];
    let msg = format!("shift law residual {:e}", report.shift_law_residual);
    let files = vec![
        write_r3_csv(&out.join("correspond_r3.csv"), &pair)?,
        write_json(&out.join("correspond.json"), &CorrespondOutput { rows: pair.s3.rows(), cols: pair.s3.cols(), torsion_shift: shift, report })?,
    ];
    ok(files, msg)
}

#[derive(Serialize)]
struct MeshSummary {
    pole: String,
    rows: usize,
    cols: usize,
    vertices: usize,
    faces: usize,
    degenerate_faces: usize,
    min_pole_distance: f64,
    conformality_defect: f64,
}

fn run_export(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let (_, _, g) = build(cfg, out)?;
    let r = analyze(&g);
    let pts: Vec<_> = g.x.iter().copied().collect();
    let pole = match cfg.pole()? {
        Some(p) => p,
        None => auto_pole(&pts),
    };
    let vertices = stereographic_project(&pts, g.cols(), pole).map_err(CliError::PoleCollision)?;
    let step_r = (g.rows() / 8).max(1);
    let step_c = (g.cols() / 8).max(1);
    let spots: Vec<_> = (0..g.rows())
        .step_by(step_r)
        .flat_map(|i| (0..g.cols()).step_by(step_c).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (xs, xt) = g.tangents(i, j);
            (g.x.at(i, j), xs, xt)
        })
        .collect();
    let defect = conformality_defect(&spots, pole);
    if defect > CONFORMALITY_TOL {
        return Err(CliError::Config(format!("projection from {pole} distorts grid angles by {defect:e}")));
    }
    let mesh = QuadMesh { vertices, rows: g.rows(), cols: g.cols() };
    let obj = out.join("mesh.obj");
    let f = std::fs::File::create(&obj).map_err(|source| CliError::Io { path: obj.display().to_string(), source })?;
    mesh.write_obj(std::io::BufWriter::new(f)).map_err(|source| CliError::Io { path: obj.display().to_string(), source })?;
    let summary = MeshSummary {
        pole: pole.to_string(),
        rows: mesh.rows,
        cols: mesh.cols,
        vertices: mesh.vertices.len(),
        faces: mesh.faces().count(),
        degenerate_faces: mesh.degenerate_faces(1e-14),
        min_pole_distance: pts.iter().map(|x| (*x - pole.quat()).norm()).fold(f64::INFINITY, f64::min),
        conformality_defect: defect,
    };
    let files = vec![
        obj,
        write_mesh_scalars(&out.join("mesh_scalars.csv"), &r)?,
        write_json(&out.join("mesh.json"), &summary)?,
    ];
    ok(files, format!("mesh {} x {} projected from {pole}", mesh.rows, mesh.cols))
}
