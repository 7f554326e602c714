use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::corpus::{standard_corpus, CurveDef};
use super::{CaseResult, ControlResult, ProbeParams, ProbeResult, Settings, TheoremId};
use crate::curve::{CurveSpec, Family, HelixSign, Profile, SampledCurve, SeedFrame, Table};
use crate::error::Result;
use crate::forms::FormCoeffs;
use crate::frame::{left_frame, right_frame, trace_geometry, Side};
use crate::grid::Grid;
use crate::oracle::{compare_with_closed_form, surface_oracle};
use crate::surface::{analyze, build_surface, regular_window, GeometryReport, SurfaceGrid, SurfaceOptions};

fn wave() -> Profile {
    Profile::Sine { mean: 1.0, amplitude: 0.3, frequency: 1.5 }
}

fn clifford(c: f64, length: f64, step: f64) -> CurveSpec {
    CurveSpec::new(Family::CliffordFactor { r1: ((1.0 + c) / 2.0).sqrt(), r2: ((1.0 - c) / 2.0).sqrt() }, 0.0, length)
        .with_step(step)
}

fn surface(alpha: &SampledCurve, beta: &SampledCurve, settings: &Settings) -> Result<(SurfaceGrid, GeometryReport)> {
    let opts = SurfaceOptions::default().with_delta(settings.delta).fit(alpha.len(), beta.len(), settings.max_side);
    let g = build_surface(alpha, beta, &opts)?;
    let r = analyze(&g);
    Ok((g, r))
}

/// Like [`surface`], after trimming to the largest greedy regular window.
fn trimmed_surface(
    alpha: &SampledCurve,
    beta: &SampledCurve,
    settings: &Settings,
) -> Result<Option<(SurfaceGrid, GeometryReport)>> {
    let base = SurfaceOptions::default().with_delta(settings.delta);
    let Some(win) = regular_window(alpha, beta, &base.fit(alpha.len(), beta.len(), settings.max_side))? else {
        return Ok(None);
    };
    let opts = win.fit(alpha.len(), beta.len(), settings.max_side);
    let g = build_surface(alpha, beta, &opts)?;
    let r = analyze(&g);
    Ok(Some((g, r)))
}

/// Checks `max |grid| ≤ tol` and locates the worst node on failure.
fn check_grid_max(case: &mut CaseResult, key: &str, grid: &Grid<f64>, tol: f64, surf: &SurfaceGrid) -> bool {
    let ((i, j), v) = grid.argmax_abs();
    let ok = case.check(key, v.abs(), v.abs() <= tol);
    if !ok {
        case.locate((surf.rows_idx[i], surf.cols_idx[j]), surf.s[i], surf.t[j]);
    }
    ok
}

fn control(
    label: &str,
    expectation: &str,
    params: &[(&str, f64)],
    observed: Result<BTreeMap<String, f64>>,
    as_designed: impl Fn(&BTreeMap<String, f64>) -> bool,
) -> ControlResult {
    let params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    match observed {
        Ok(obs) => ControlResult {
            label: label.into(),
            expectation: expectation.into(),
            params,
            behaved_as_designed: as_designed(&obs),
            observed: obs,
        },
        Err(e) => ControlResult {
            label: label.into(),
            expectation: format!("{expectation} (not evaluated: {e})"),
            params,
            observed: BTreeMap::new(),
            behaved_as_designed: false,
        },
    }
}

fn obs(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn params(pairs: &[(&str, Vec<f64>)]) -> ProbeParams {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlatConstantConfig {
    /// `R₁²` of the Clifford factor paired with a great circle.
    pub radii_sq: Vec<f64>,
    /// Slopes of general helices paired with a great circle along their pole.
    pub b: Vec<f64>,
    pub length: f64,
    pub tol: f64,
}

impl Default for FlatConstantConfig {
    fn default() -> Self {
        Self { radii_sq: vec![0.5, 0.75, 0.9], b: vec![0.5, 1.0, 2.0], length: 2.0, tol: 1e-6 }
    }
}

/// Great circle whose right tangent is the constant `pole`.
fn great_circle_along(pole: crate::quat::Quat, length: f64, step: f64) -> Result<SampledCurve> {
    CurveDef::seeded(CurveSpec::great_circle(0.0, length).with_step(step), SeedFrame::with_tangent(-pole)?).sample()
}

fn flat_case(mut case: CaseResult, alpha: &SampledCurve, beta: &SampledCurve, settings: &Settings, tol: f64) -> CaseResult {
    let (g, r) = match surface(alpha, beta, settings) {
        Ok(v) => v,
        Err(e) => return CaseResult::errored(case.label, &e),
    };
    let f = g.metric_f();
    case.observe("frame_product_mean", g.frame_product.mean());
    case.check("frame_product_stdev", g.frame_product.stdev(), g.frame_product.stdev() <= tol);
    check_grid_max(&mut case, "max_abs_k", &r.k, tol, &g);
    case.observe("metric_f_mean", f.mean());
    case
}

pub fn probe_flat_constant_frame_product(cfg: &FlatConstantConfig, settings: &Settings) -> ProbeResult {
    let (l, h) = (cfg.length, settings.step);
    let mut cases = Vec::new();
    for &r1sq in &cfg.radii_sq {
        let label = format!("great circle x clifford factor r1^2={r1sq}");
        let c = 2.0 * r1sq - 1.0;
        let run = || -> Result<(SampledCurve, SampledCurve)> {
            Ok((CurveDef::new(CurveSpec::great_circle(0.0, l).with_step(h)).sample()?, CurveDef::new(clifford(c, l, h)).sample()?))
        };
        match run() {
            Ok((a, b)) => cases.push(flat_case(CaseResult::new(label).param("r1_sq", r1sq), &a, &b, settings, cfg.tol)),
            Err(e) => cases.push(CaseResult::errored(label, &e)),
        }
    }
    for (idx, &b) in cfg.b.iter().enumerate() {
        let signs: &[f64] = if idx == 0 { &[1.0, -1.0] } else { &[1.0] };
        for &orient in signs {
            let label = format!("general helix b={b} x great circle along {}pole", if orient > 0.0 { "+" } else { "-" });
            let run = || -> Result<(SampledCurve, SampledCurve, f64)> {
                let a = CurveDef::new(CurveSpec::general_helix(b, HelixSign::Plus, wave(), 0.0, l).with_step(h)).sample()?;
                let tr = trace_geometry(&left_frame(&a)?, &a)?;
                let beta = great_circle_along(tr.pole.quat() * orient, l, h)?;
                Ok((a, beta, tr.coaxiality_defect))
            };
            match run() {
                Ok((a, beta, coax)) => {
                    let mut case = flat_case(
                        CaseResult::new(label).param("b", b).param("orientation", orient),
                        &a,
                        &beta,
                        settings,
                        cfg.tol,
                    );
                    case.observe("coaxiality_defect", coax);
                    if let Some(&p) = case.observed.get("frame_product_mean") {
                        let expect = orient * b / (1.0 + b * b).sqrt();
                        case.check("cone_cosine_error", (p - expect).abs(), (p - expect).abs() <= cfg.tol);
                    }
                    cases.push(case);
                }
                Err(e) => cases.push(CaseResult::errored(label, &e)),
            }
        }
    }

    let stdev_of = |a: Result<SampledCurve>, beta_from: &dyn Fn(&SampledCurve) -> Result<SampledCurve>| {
        let a = a?;
        let beta = beta_from(&a)?;
        let (g, r) = surface(&a, &beta, settings)?;
        Ok(obs(&[("frame_product_stdev", g.frame_product.stdev()), ("max_abs_k", r.k.max_abs())]))
    };
    let tabulated = Table::sample(0.0, l, ((l / h).round() as usize) + 1, |s| (wave().eval(s), 2.0))
        .map(|t| CurveSpec::new(Family::Tabulated { table: t }, 0.0, l).with_step(h));
    let ctl_a = control(
        "varying curvature with constant torsion",
        "tau/kappa - 1/kappa is not constant, so no pole exists and P varies",
        &[("tau", 2.0)],
        stdev_of(tabulated.and_then(|s| CurveDef::new(s).sample()), &|a| {
            let tr = trace_geometry(&left_frame(a)?, a)?;
            great_circle_along(tr.pole.quat(), l, h)
        }),
        |o| o["frame_product_stdev"] > 1e-3,
    );
    let ctl_b = control(
        "general helix with tilted great circle",
        "right tangent of beta off the pole by 0.3 rad, so P varies",
        &[("b", 1.0), ("tilt", 0.3)],
        stdev_of(
            CurveDef::new(CurveSpec::general_helix(1.0, HelixSign::Plus, wave(), 0.0, l).with_step(h)).sample(),
            &|a| {
                let tr = trace_geometry(&left_frame(a)?, a)?;
                let u = tr.pole.vec();
                let w = if u.x.abs() < 0.9 { nalgebra::Vector3::x() } else { nalgebra::Vector3::y() };
                let perp = (w - u * u.dot(&w)).normalize();
                let tilted = u * 0.3f64.cos() + perp * 0.3f64.sin();
                great_circle_along(crate::quat::Quat::pure(tilted), l, h)
            },
        ),
        |o| o["frame_product_stdev"] > 1e-3,
    );

    let config = params(&[
        ("radii_sq", cfg.radii_sq.clone()),
        ("b", cfg.b.clone()),
        ("length", vec![l]),
        ("tol", vec![cfg.tol]),
        ("step", vec![h]),
    ]);
    let worst = cases.iter().filter_map(|c| c.observed.get("max_abs_k")).fold(0.0f64, |m, v| m.max(*v));
    ProbeResult::assemble(TheoremId::FlatConstantFrameProduct, config, cases, vec![ctl_a, ctl_b], obs(&[("max_abs_k", worst)]))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CmcConfig {
    /// Target metric coefficients `C = g12 = R₁² − R₂²`.
    pub c: Vec<f64>,
    pub length: f64,
    /// Tolerance on the constancy of `H` and on the mean-curvature law.
    pub tol: f64,
    /// Side of the small patch compared against the finite-difference oracle.
    pub oracle_side: usize,
    pub oracle_tol: f64,
}

impl Default for CmcConfig {
    fn default() -> Self {
        Self { c: vec![0.0, 0.3, -0.3, 0.5, -0.5, 0.9, -0.9], length: 2.0, tol: 1e-8, oracle_side: 21, oracle_tol: 1e-5 }
    }
}

pub fn probe_cmc_great_circles(cfg: &CmcConfig, settings: &Settings) -> ProbeResult {
    let (l, h) = (cfg.length, settings.step);
    let gc = |len: f64| CurveDef::new(CurveSpec::great_circle(0.0, len).with_step(h)).sample();
    let mut cases = Vec::new();
    for &c in &cfg.c {
        let label = format!("clifford torus C={c}");
        let case = CaseResult::new(label.clone()).param("c", c);
        let run = || -> Result<CaseResult> {
            let mut case = case.clone();
            let (a, b) = (gc(l)?, CurveDef::new(clifford(c, l, h)).sample()?);
            let (g, r) = surface(&a, &b, settings)?;
            let f = g.metric_f();
            let cm = f.mean();
            case.observe("metric_f_mean", cm);
            case.check("metric_f_error", (cm - c).abs(), (cm - c).abs() <= cfg.tol);
            case.observe("h_mean", r.h.mean());
            case.check("h_stdev", r.h.stdev(), r.h.stdev() <= cfg.tol);
            let law = Grid::from_fn(g.rows(), g.cols(), |i, j| {
                let fc = f.at(i, j);
                r.h.at(i, j) + fc / (1.0 - fc * fc).sqrt()
            });
            check_grid_max(&mut case, "law_residual", &law, cfg.tol, &g);
            case.observe("law_with_frame_product_deviation", r.printed_deviation.law_with_frame_product);

            let side = l.min(h * (cfg.oracle_side.max(3) - 1) as f64);
            let (pa, pb) = (gc(side)?, CurveDef::new(clifford(c, side, h)).sample()?);
            let (pg, _) = surface(&pa, &pb, settings)?;
            let cmp = compare_with_closed_form(&pg, &surface_oracle(&pg, 1)?);
            case.check("oracle_h_error", cmp.h, cmp.h <= cfg.oracle_tol);
            Ok(case)
        };
        cases.push(run().unwrap_or_else(|e| CaseResult::errored(label, &e)));
    }
    let ctl = control(
        "helix against clifford factor",
        "alpha is not a great circle, so H varies",
        &[("kappa", 1.0), ("tau", 2.0), ("c", 0.5)],
        (|| {
            let a = CurveDef::new(CurveSpec::proper_helix(1.0, 2.0, 0.0, l).with_step(h)).sample()?;
            let b = CurveDef::new(clifford(0.5, l, h)).sample()?;
            let (_, r) = surface(&a, &b, settings)?;
            Ok(obs(&[("h_stdev", r.h.stdev())]))
        })(),
        |o| o["h_stdev"] > 1e-3,
    );
    let config = params(&[
        ("c", cfg.c.clone()),
        ("length", vec![l]),
        ("tol", vec![cfg.tol]),
        ("oracle_side", vec![cfg.oracle_side as f64]),
        ("oracle_tol", vec![cfg.oracle_tol]),
        ("step", vec![h]),
    ]);
    let worst = cases.iter().filter_map(|c| c.observed.get("law_residual")).fold(0.0f64, |m, v| m.max(*v));
    ProbeResult::assemble(TheoremId::CmcGreatCircleTori, config, cases, vec![ctl], obs(&[("max_law_residual", worst)]))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HelixCirclesConfig {
    pub b: Vec<f64>,
    pub kappa: Vec<f64>,
    pub length: f64,
    /// Tolerance on the trace curvature and cone ratio.
    pub tol: f64,
    pub coaxiality_tol: f64,
}

impl Default for HelixCirclesConfig {
    fn default() -> Self {
        Self { b: vec![0.5, 1.0, 2.0], kappa: vec![0.5, 1.0], length: 6.0, tol: 1e-5, coaxiality_tol: 1e-4 }
    }
}

fn helix_trace_case(label: String, spec: CurveSpec, side: Side, b: f64, cfg: &HelixCirclesConfig) -> CaseResult {
    let mut case = CaseResult::new(label.clone()).param("b", b).param("side", side.shift());
    let run = |case: &mut CaseResult| -> Result<()> {
        let curve = CurveDef::new(spec).sample()?;
        let frames = match side {
            Side::Left => left_frame(&curve)?,
            Side::Right => right_frame(&curve)?,
        };
        let tr = trace_geometry(&frames, &curve)?;
        let m = tr.kappa_hat_mean();
        case.check("kappa_hat_error", (m - b).abs(), (m - b).abs() <= cfg.tol);
        case.check("kappa_hat_spread", tr.kappa_hat_spread(), tr.kappa_hat_spread() <= cfg.tol);
        case.check("coaxiality_defect", tr.coaxiality_defect, tr.coaxiality_defect <= cfg.coaxiality_tol);
        case.check("cos_t_spread", tr.cos_t_spread(), tr.cos_t_spread() <= cfg.tol);
        case.check("cos_b_spread", tr.cos_b_spread(), tr.cos_b_spread() <= cfg.tol);
        if b != 0.0 {
            let err = (tr.cone_ratio() - 1.0 / b).abs();
            case.check("cone_ratio_error", err, err <= cfg.coaxiality_tol);
        }
        case.observe("kappa_hat_mean", m);
        Ok(())
    };
    match run(&mut case) {
        Ok(()) => case,
        Err(e) => CaseResult::errored(label, &e),
    }
}

pub fn probe_helix_frame_circles(cfg: &HelixCirclesConfig, settings: &Settings) -> ProbeResult {
    let (l, h) = (cfg.length, settings.step);
    let mut cases = Vec::new();
    for &b in &cfg.b {
        for &k in &cfg.kappa {
            for (sign, side) in [(HelixSign::Plus, Side::Left), (HelixSign::Minus, Side::Right)] {
                let spec = CurveSpec::general_helix(b, sign, Profile::constant(k), 0.0, l).with_step(h);
                cases.push(helix_trace_case(format!("helix b={b} kappa={k} {side:?} frame"), spec, side, b, cfg));
            }
        }
        let spec = CurveSpec::general_helix(b, HelixSign::Plus, wave(), 0.0, l).with_step(h);
        cases.push(helix_trace_case(format!("general helix b={b} varying kappa, Left frame"), spec, Side::Left, b, cfg));
    }
    let spec = CurveSpec::proper_helix(1.0, 1.0, 0.0, l).with_step(h);
    cases.push(helix_trace_case("unit torsion, Left frame (great circle trace)".into(), spec, Side::Left, 0.0, cfg));

    let tabulated = Table::sample(0.0, l, ((l / h).round() as usize) + 1, |s| (wave().eval(s), 2.0))
        .map(|t| CurveSpec::new(Family::Tabulated { table: t }, 0.0, l).with_step(h));
    let ctl = control(
        "varying curvature with constant torsion",
        "(tau - 1)/kappa is not constant, so the trace is not a circle",
        &[("tau", 2.0)],
        tabulated.and_then(|spec| {
            let c = CurveDef::new(spec).sample()?;
            let tr = trace_geometry(&left_frame(&c)?, &c)?;
            Ok(obs(&[("kappa_hat_spread", tr.kappa_hat_spread()), ("coaxiality_defect", tr.coaxiality_defect)]))
        }),
        |o| o["kappa_hat_spread"] > 1e-3,
    );
    let config = params(&[
        ("b", cfg.b.clone()),
        ("kappa", cfg.kappa.clone()),
        ("length", vec![l]),
        ("tol", vec![cfg.tol]),
        ("coaxiality_tol", vec![cfg.coaxiality_tol]),
        ("step", vec![h]),
    ]);
    let worst = cases.iter().filter_map(|c| c.observed.get("kappa_hat_spread")).fold(0.0f64, |m, v| m.max(*v));
    ProbeResult::assemble(TheoremId::HelixFrameCircles, config, cases, vec![ctl], obs(&[("max_kappa_hat_spread", worst)]))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlatPatchConfig {
    /// Angles of the initial tangent of `β` against that of `α`.
    pub theta: Vec<f64>,
    pub kappa_alpha: Vec<Profile>,
    pub kappa_beta: f64,
    pub length: f64,
    pub tol: f64,
    /// Torsion offset of the control curve `β` (τ = −1 + offset).
    pub control_offset: f64,
}

impl Default for FlatPatchConfig {
    fn default() -> Self {
        Self {
            theta: vec![PI / 6.0, PI / 4.0, PI / 3.0],
            kappa_alpha: vec![Profile::constant(1.0), wave()],
            kappa_beta: 1.0,
            length: 2.0,
            tol: 1e-6,
            control_offset: 0.1,
        }
    }
}

const MIN_WINDOW: usize = 4;

fn flat_patch_case(mut case: CaseResult, alpha: &SampledCurve, beta: &SampledCurve, settings: &Settings, tol: f64) -> CaseResult {
    let label = case.label.clone();
    let run = |case: &mut CaseResult| -> Result<bool> {
        let Some((g, r)) = trimmed_surface(alpha, beta, settings)? else {
            return Ok(false);
        };
        if g.rows() < MIN_WINDOW || g.cols() < MIN_WINDOW {
            return Ok(false);
        }
        case.observe("window_s_min", g.s[0]);
        case.observe("window_s_max", *g.s.last().unwrap());
        case.observe("window_t_min", g.t[0]);
        case.observe("window_t_max", *g.t.last().unwrap());
        check_grid_max(case, "max_abs_e", &r.forms.h11, tol, &g);
        check_grid_max(case, "max_abs_g", &r.forms.h22, tol, &g);
        check_grid_max(case, "max_abs_k", &r.k, tol, &g);
        let kext = r.k_ext.map(|k| k + 1.0);
        check_grid_max(case, "max_abs_k_ext_plus_one", &kext, tol, &g);
        let o = surface_oracle(&g, 1)?;
        let oe = o.forms.h11.max_abs();
        let og = o.forms.h22.max_abs();
        case.check("oracle_max_abs_e", oe, oe <= 1e-5);
        case.check("oracle_max_abs_g", og, og <= 1e-5);
        Ok(true)
    };
    match run(&mut case) {
        Ok(true) => case,
        Ok(false) => CaseResult::errored(label, &crate::error::GeomError::InvalidSpec("no regular window".into())),
        Err(e) => CaseResult::errored(label, &e),
    }
}

pub fn probe_flat_patch_unit_torsion(cfg: &FlatPatchConfig, settings: &Settings) -> ProbeResult {
    let (l, h) = (cfg.length, settings.step);
    let beta_spec = |offset: f64| {
        CurveSpec::proper_helix(cfg.kappa_beta, -1.0 + offset, 0.0, l).with_step(h)
    };
    let mut cases = Vec::new();
    for (pi, prof) in cfg.kappa_alpha.iter().enumerate() {
        for &theta in &cfg.theta {
            let label = format!("unit torsion kappa profile {pi} x torsion -1, theta={theta:.4}");
            let case = CaseResult::new(label.clone()).param("profile", pi as f64).param("theta", theta);
            let run = || -> Result<(SampledCurve, SampledCurve)> {
                let a = CurveDef::new(CurveSpec::general_helix(0.0, HelixSign::Plus, prof.clone(), 0.0, l).with_step(h)).sample()?;
                let b = CurveDef::seeded(beta_spec(0.0), SeedFrame::rotated_tn(theta)).sample()?;
                Ok((a, b))
            };
            cases.push(match run() {
                Ok((a, b)) => flat_patch_case(case, &a, &b, settings, cfg.tol),
                Err(e) => CaseResult::errored(label, &e),
            });
        }
    }
    let label = "great circle x torsion -1".to_string();
    let run = || -> Result<(SampledCurve, SampledCurve)> {
        let a = CurveDef::new(CurveSpec::great_circle(0.0, l).with_step(h)).sample()?;
        let b = CurveDef::seeded(beta_spec(0.0), SeedFrame::rotated_tn(PI / 4.0)).sample()?;
        Ok((a, b))
    };
    cases.push(match run() {
        Ok((a, b)) => flat_patch_case(CaseResult::new(label.clone()).param("theta", PI / 4.0), &a, &b, settings, cfg.tol),
        Err(e) => CaseResult::errored(label, &e),
    });

    let ctl = control(
        "beta torsion off -1",
        "tau_beta != -1, so t-curves are not asymptotic and g != 0",
        &[("tau_beta", -1.0 + cfg.control_offset)],
        (|| {
            let a = CurveDef::new(CurveSpec::proper_helix(1.0, 1.0, 0.0, l).with_step(h)).sample()?;
            let b = CurveDef::seeded(beta_spec(cfg.control_offset), SeedFrame::rotated_tn(PI / 4.0)).sample()?;
            let (_, r) = trimmed_surface(&a, &b, settings)?
                .ok_or_else(|| crate::error::GeomError::InvalidSpec("no regular window".into()))?;
            Ok(obs(&[("max_abs_g", r.forms.h22.max_abs())]))
        })(),
        |o| o["max_abs_g"] > 1e-3,
    );
    let config = params(&[
        ("theta", cfg.theta.clone()),
        ("kappa_beta", vec![cfg.kappa_beta]),
        ("length", vec![l]),
        ("tol", vec![cfg.tol]),
        ("control_offset", vec![cfg.control_offset]),
        ("step", vec![h]),
    ]);
    let worst = cases.iter().filter_map(|c| c.observed.get("max_abs_k")).fold(0.0f64, |m, v| m.max(*v));
    ProbeResult::assemble(TheoremId::AsymptoticUnitTorsionPatch, config, cases, vec![ctl], obs(&[("max_abs_k", worst)]))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanConfig {
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    /// Seed angles of `β` in the `(i, j)` plane.
    pub theta: Vec<f64>,
    /// Elevations of the initial tangent of `β` out of the `(i, j)` plane.
    /// Seeds are tried tilt-major until a regular window is found.
    pub tilt: Vec<f64>,
    pub length: f64,
    /// A configuration supports the statement when `sup |H|` exceeds this.
    pub threshold: f64,
    pub min_side: usize,
    /// Tolerance on the derivative identity of `2P(P² − 1)`.
    pub identity_tol: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            kappa: vec![0.5, 1.0, 2.0],
            tau: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            theta: vec![PI / 3.0, PI / 4.0, PI / 6.0, PI / 2.0],
            tilt: vec![0.0, PI / 4.0],
            length: 2.0,
            threshold: 1e-4,
            min_side: 10,
            identity_tol: 1e-5,
        }
    }
}

/// Largest residual of `∂_s[2P(P² − 1)] = 2(3P² − 1)κ_α⟨N_α, T̂_β⟩`, with the
/// left side by the five-point central difference on native neighbours.
pub(crate) fn frame_product_identity_residual(g: &SurfaceGrid) -> Result<f64> {
    let n = g.left.n()?;
    let h = g.alpha.step();
    let p = |i: usize, j: usize| g.left.t[i].quat().dot(g.right.t[j].quat());
    let phi = |i: usize, j: usize| {
        let x = p(i, j);
        2.0 * x * (x * x - 1.0)
    };
    let mut worst = 0.0f64;
    for &i in &g.rows_idx {
        if i < 2 || i + 2 >= g.alpha.len() {
            continue;
        }
        for &j in &g.cols_idx {
            let lhs = (8.0 * (phi(i + 1, j) - phi(i - 1, j)) - (phi(i + 2, j) - phi(i - 2, j))) / (12.0 * h);
            let pc = p(i, j);
            let rhs = 2.0 * (3.0 * pc * pc - 1.0) * g.alpha.samples[i].kappa * n[i].quat().dot(g.right.t[j].quat());
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

/// Seed at `α = 1` with tangent `(cos θ cos φ, sin θ cos φ, sin φ)`.
fn tilted_seed(theta: f64, tilt: f64) -> Result<SeedFrame> {
    if tilt == 0.0 {
        return Ok(SeedFrame::rotated_tn(theta));
    }
    let (c, s) = (tilt.cos(), tilt.sin());
    SeedFrame::with_tangent(crate::quat::Quat::new(0.0, theta.cos() * c, theta.sin() * c, s))
}

pub fn scan_nonexistence_minimal(cfg: &ScanConfig, settings: &Settings) -> ProbeResult {
    let (l, h) = (cfg.length, settings.step);
    let helix = |k: f64, t: f64, seed: SeedFrame| CurveDef::seeded(CurveSpec::proper_helix(k, t, 0.0, l).with_step(h), seed).sample();
    let seeds: Vec<(f64, f64)> = cfg.tilt.iter().flat_map(|&p| cfg.theta.iter().map(move |&t| (t, p))).collect();
    let pairs: Vec<(f64, f64)> = cfg.kappa.iter().flat_map(|&k| cfg.tau.iter().map(move |&t| (k, t))).collect();
    let mut betas: BTreeMap<(usize, usize), Result<SampledCurve>> = BTreeMap::new();
    let mut cases = Vec::new();
    let mut best: Option<(f64, BTreeMap<String, f64>)> = None;
    for &(ka, ta) in &pairs {
        let alpha = match helix(ka, ta, SeedFrame::default()) {
            Ok(a) => a,
            Err(e) => {
                cases.push(CaseResult::errored(format!("alpha helix({ka},{ta})"), &e));
                continue;
            }
        };
        for (bi, &(kb, tb)) in pairs.iter().enumerate() {
            let label = format!("helix({ka},{ta}) x helix({kb},{tb})");
            let mut case = CaseResult::new(label.clone())
                .param("kappa_alpha", ka)
                .param("tau_alpha", ta)
                .param("kappa_beta", kb)
                .param("tau_beta", tb);
            let mut found = None;
            let mut failure = None;
            for (si, &(theta, tilt)) in seeds.iter().enumerate() {
                let beta = betas.entry((bi, si)).or_insert_with(|| helix(kb, tb, tilted_seed(theta, tilt)?));
                let beta = match beta {
                    Ok(b) => b,
                    Err(e) => {
                        failure = Some(e.clone());
                        break;
                    }
                };
                match trimmed_surface(&alpha, beta, settings) {
                    Ok(Some((g, r))) if g.rows() >= cfg.min_side && g.cols() >= cfg.min_side => {
                        found = Some((theta, tilt, g, r));
                        break;
                    }
                    Ok(_) => {}
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
            }
            let Some((theta, tilt, g, r)) = found else {
                let e = failure.unwrap_or_else(|| {
                    crate::error::GeomError::InvalidSpec(format!("no regular window of {0}x{0} nodes", cfg.min_side))
                });
                cases.push(CaseResult::errored(label, &e));
                continue;
            };
            case.params.insert("theta".into(), theta);
            case.params.insert("tilt".into(), tilt);
            let ((i, j), sup) = r.h.argmax_abs();
            let sup = sup.abs();
            case.observe("rows", g.rows() as f64);
            case.observe("cols", g.cols() as f64);
            case.observe("sup_h_s", g.s[i]);
            case.observe("sup_h_t", g.t[j]);
            if !case.check("sup_abs_h", sup, sup > cfg.threshold) {
                case.locate((g.rows_idx[i], g.cols_idx[j]), g.s[i], g.t[j]);
            }
            match frame_product_identity_residual(&g) {
                Ok(res) => {
                    case.check("identity_residual", res, res <= cfg.identity_tol);
                }
                Err(e) => {
                    cases.push(CaseResult::errored(label, &e));
                    continue;
                }
            }
            if best.as_ref().is_none_or(|(b, _)| sup < *b) {
                let mut m = case.params.clone();
                m.insert("sup_h_s".into(), g.s[i]);
                m.insert("sup_h_t".into(), g.t[j]);
                best = Some((sup, m));
            }
            cases.push(case);
        }
    }
    let ctl = control(
        "minimal clifford torus",
        "great circles have zero curvature, outside the hypothesis, and the scan finds sup|H| = 0",
        &[("r1_sq", 0.5)],
        (|| {
            let a = CurveDef::new(CurveSpec::great_circle(0.0, l).with_step(h)).sample()?;
            let b = CurveDef::new(clifford(0.0, l, h)).sample()?;
            let (_, r) = surface(&a, &b, settings)?;
            Ok(obs(&[("sup_abs_h", r.h.max_abs())]))
        })(),
        |o| o["sup_abs_h"] <= 1e-8,
    );
    let mut observed = BTreeMap::new();
    if let Some((sup, m)) = best {
        observed.insert("min_sup_abs_h".into(), sup);
        for (k, v) in m {
            observed.insert(format!("argmin_{k}"), v);
        }
    }
    let config = params(&[
        ("kappa", cfg.kappa.clone()),
        ("tau", cfg.tau.clone()),
        ("theta", cfg.theta.clone()),
        ("tilt", cfg.tilt.clone()),
        ("length", vec![l]),
        ("threshold", vec![cfg.threshold]),
        ("min_side", vec![cfg.min_side as f64]),
        ("identity_tol", vec![cfg.identity_tol]),
        ("step", vec![h]),
    ]);
    ProbeResult::assemble(TheoremId::NonexistenceMinimalHelixPairs, config, cases, vec![ctl], observed)
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoUmbilicConfig {
    pub length: f64,
    /// Smallest umbilicity defect accepted as "not umbilic".
    pub threshold: f64,
    pub tol: f64,
}

impl Default for NoUmbilicConfig {
    fn default() -> Self {
        Self { length: 1.0, threshold: 1e-3, tol: 1e-6 }
    }
}

pub fn probe_no_umbilic(cfg: &NoUmbilicConfig, settings: &Settings) -> ProbeResult {
    let mut cases = Vec::new();
    let mut overall = f64::INFINITY;
    for entry in standard_corpus(cfg.length, settings.step) {
        let mut case = CaseResult::new(entry.label.clone());
        let run = |case: &mut CaseResult| -> Result<f64> {
            let (a, b) = (entry.alpha.sample()?, entry.beta.sample()?);
            let (g, r) = surface(&a, &b, settings)?;
            let ((i, j), m) = r.umbilicity.argmin();
            if !case.check("min_umbilicity_defect", m, m > cfg.threshold) {
                case.locate((g.rows_idx[i], g.cols_idx[j]), g.s[i], g.t[j]);
            }
            if entry.label == "clifford minimal" {
                let dev = r.umbilicity.map(|d| d - 2.0);
                check_grid_max(case, "defect_minus_two", &dev, cfg.tol, &g);
            }
            Ok(m)
        };
        match run(&mut case) {
            Ok(m) => {
                overall = overall.min(m);
                cases.push(case);
            }
            Err(e) => cases.push(CaseResult::errored(entry.label, &e)),
        }
    }
    // Umbilic second form e = E, f = F, g = G: λ₁ = λ₂ = 1, but f = F forces
    // √(1 − P²) = −P, impossible for a translation surface, whose f and F differ.
    let (fval, p) = (0.3f64, -0.3f64);
    let synth = FormCoeffs { g11: 1.0, g12: fval, g22: 1.0, h11: 1.0, h12: fval, h22: 1.0 };
    let translation_f = (1.0 - p * p).sqrt();
    let ctl = control(
        "synthetic umbilic forms",
        "an umbilic point is detected, and its f differs from the translation-surface value sqrt(1 - P^2)",
        &[("f", fval), ("p", p)],
        Ok(obs(&[
            ("umbilicity_defect", synth.umbilicity_defect()),
            ("f_gap_to_translation", (synth.h12 - translation_f).abs()),
        ])),
        |o| o["umbilicity_defect"] <= 1e-12 && o["f_gap_to_translation"] > 1e-3,
    );
    let config = params(&[
        ("length", vec![cfg.length]),
        ("threshold", vec![cfg.threshold]),
        ("tol", vec![cfg.tol]),
        ("step", vec![settings.step]),
    ]);
    let mut observed = BTreeMap::new();
    if overall.is_finite() {
        observed.insert("min_umbilicity_defect".into(), overall);
    }
    ProbeResult::assemble(TheoremId::NoTotallyUmbilic, config, cases, vec![ctl], observed)
}
