//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Run with `cargo test -p quatsurf-cli --test acceptance`.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use quatsurf::correspondence::{correspond, verify_correspondence};
use quatsurf::curve::{
    fd_curve_invariants, integrate_frenet_s3, integrate_frenet_s3_seeded, CurveSpec, Family, HelixSign, Profile,
    SeedFrame,
};
use quatsurf::frame::{frame_identity_residuals, frame_ode_residuals, left_frame, right_frame};
use quatsurf::oracle::{compare_with_closed_form, surface_oracle, surface_richardson, Quantity};
use quatsurf::surface::{analyze, build_surface, SurfaceOptions};
use quatsurf::theorems::{
    probe_cmc_great_circles, probe_flat_constant_frame_product, probe_helix_frame_circles, probe_no_umbilic,
    scan_nonexistence_minimal, standard_corpus, CmcConfig, CurveDef, FlatConstantConfig, HelixCirclesConfig,
    NoUmbilicConfig, ProbeResult, ScanConfig, Settings, Verdict,
};

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

const TWO_PI: f64 = 2.0 * PI;
const MAX_SIDE: usize = 200;

fn clifford(r1_sq: f64) -> CurveSpec {
    CurveSpec::new(Family::CliffordFactor { r1: r1_sq.sqrt(), r2: (1.0 - r1_sq).sqrt() }, 0.0, TWO_PI)
}

struct Torus {
    h: f64,
    h_const_err: f64,
    k: f64,
    frame_product_err: f64,
    oracle_h: f64,
    oracle_k: f64,
    nodes: usize,
    rows: usize,
    cols: usize,
}

fn torus(r1_sq: f64, h_want: f64, p_want: f64) -> Result<Torus, String> {
    let a = integrate_frenet_s3(&CurveSpec::great_circle(0.0, TWO_PI)).map_err(|e| e.to_string())?;
    let b = integrate_frenet_s3(&clifford(r1_sq)).map_err(|e| e.to_string())?;
    let g = build_surface(&a, &b, &SurfaceOptions::default().fit(a.len(), b.len(), MAX_SIDE)).map_err(|e| e.to_string())?;
    let r = analyze(&g);
    let o = compare_with_closed_form(&g, &surface_oracle(&g, 1).map_err(|e| e.to_string())?);
    let h_const_err = r.h.iter().map(|h| (h.abs() - h_want).abs()).fold(0.0, f64::max);
    let frame_product_err = g.frame_product.iter().map(|p| (p - p_want).abs()).fold(0.0, f64::max);
    Ok(Torus {
        h: r.h.max_abs(),
        h_const_err,
        k: r.k.max_abs(),
        frame_product_err,
        oracle_h: o.h,
        oracle_k: o.k,
        nodes: o.nodes,
        rows: g.rows(),
        cols: g.cols(),
    })
}

fn ac1() -> Outcome {
    let t = torus(0.5, 0.0, 0.0)?;
    let ok = t.h <= 1e-8 && t.k <= 1e-8 && t.oracle_h <= 1e-5 && t.oracle_k <= 1e-5;
    Ok((
        ok,
        format!(
            "grid {}x{}: |H| {:.2e}, |K| {:.2e}; oracle ({} nodes) dH {:.2e}, dK {:.2e}",
            t.rows, t.cols, t.h, t.k, t.nodes, t.oracle_h, t.oracle_k
        ),
    ))
}

fn ac2() -> Outcome {
    let want = 1.0 / 3f64.sqrt();
    let t = torus(0.75, want, -0.5)?;
    let ok = t.h_const_err <= 1e-8 && t.oracle_h <= 1e-5 && t.frame_product_err <= 1e-10;
    Ok((
        ok,
        format!(
            "||H|-1/sqrt3| {:.2e}; oracle dH {:.2e}; |<T_a,T_b>+1/2| {:.2e} (metric F = +1/2)",
            t.h_const_err, t.oracle_h, t.frame_product_err
        ),
    ))
}

fn probe_line(r: &ProbeResult, keys: &[&str]) -> String {
    let obs: Vec<String> = keys.iter().filter_map(|k| r.observed.get(*k).map(|v| format!("{k} {v:.3e}"))).collect();
    let controls = r.controls.iter().filter(|c| c.behaved_as_designed).count();
    format!(
        "{:?}; {}/{} cases, {}/{} controls as designed{}",
        r.verdict,
        r.cases.iter().filter(|c| c.passed()).count(),
        r.cases.len(),
        controls,
        r.controls.len(),
        obs.iter().map(|o| format!("; {o}")).collect::<String>()
    )
}

fn settings() -> Settings {
    Settings { max_side: MAX_SIDE, ..Settings::default() }
}

fn probe_ok(r: &ProbeResult) -> bool {
    r.verdict == Verdict::Supports && r.controls.iter().all(|c| c.behaved_as_designed)
}

fn ac3() -> Outcome {
    let cfg = CmcConfig::default();
    let r = probe_cmc_great_circles(&cfg, &settings());
    let typo_deviation = r
        .cases
        .iter()
        .filter(|c| c.params["c"] != 0.0)
        .filter_map(|c| c.observed.get("law_with_frame_product_deviation"))
        .fold(f64::INFINITY, |m, v| m.min(*v));
    let ok = probe_ok(&r) && cfg.tol <= 1e-8 && r.observed["max_law_residual"] <= 1e-8 && typo_deviation > 1e-3;
    Ok((ok, format!("{}; law with F replaced by <T_a,T_b> off by >= {typo_deviation:.3}", probe_line(&r, &["max_law_residual"]))))
}

fn ac4() -> Outcome {
    let corpus = standard_corpus(1.0, 1e-3);
    let (mut worst_h, mut worst_k, mut worst_order) = (0.0f64, 0.0f64, f64::INFINITY);
    let (mut measured, mut rounding) = (0, 0);
    let mut failures = Vec::new();
    for e in &corpus {
        let (a, b) = (e.alpha.sample().map_err(|x| x.to_string())?, e.beta.sample().map_err(|x| x.to_string())?);
        let g = build_surface(&a, &b, &SurfaceOptions::default().fit(a.len(), b.len(), 101)).map_err(|x| format!("{}: {x}", e.label))?;
        let o = compare_with_closed_form(&g, &surface_oracle(&g, 1).map_err(|x| x.to_string())?);
        worst_h = worst_h.max(o.h);
        worst_k = worst_k.max(o.k);
        let mut ok = o.h <= 1e-5 && o.k <= 1e-5;
        for q in [Quantity::MeanCurvature, Quantity::ExtrinsicCurvature] {
            let rich = surface_richardson(&g, q).map_err(|x| x.to_string())?;
            match rich.order {
                Some(p) => {
                    worst_order = worst_order.min(p);
                    measured += 1;
                }
                None => rounding += 1,
            }
            ok &= rich.meets(1.9);
        }
        if !ok {
            failures.push(format!("{} (dH {:.2e}, dK {:.2e})", e.label, o.h, o.k));
        }
    }
    let ok = corpus.len() >= 10 && failures.is_empty();
    Ok((
        ok,
        format!(
            "{} surfaces: max dH {worst_h:.2e}, max dK {worst_k:.2e}, min Richardson order {worst_order:.3} ({measured} measured, {rounding} at rounding floor){}",
            corpus.len(),
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
        ),
    ))
}

fn long_curves() -> Vec<(&'static str, CurveSpec, SeedFrame)> {
    let wave = Profile::Sine { mean: 1.0, amplitude: 0.3, frequency: 1.5 };
    vec![
        ("helix(1,2)", CurveSpec::proper_helix(1.0, 2.0, 0.0, 10.0), SeedFrame::default()),
        ("helix(0.7,-0.3)", CurveSpec::proper_helix(0.7, -0.3, 0.0, 10.0), SeedFrame::rotated_tn(PI / 3.0)),
        ("helix(2,0)", CurveSpec::proper_helix(2.0, 0.0, 0.0, 10.0), SeedFrame::default()),
        ("general helix(b=1, wave)", CurveSpec::general_helix(1.0, HelixSign::Minus, wave, 0.0, 10.0), SeedFrame::default()),
        ("clifford factor r1^2=3/4", CurveSpec::new(clifford(0.75).family, 0.0, 10.0), SeedFrame::default()),
    ]
}

fn ac5() -> Outcome {
    let (mut drift, mut dk, mut dt) = (0.0f64, 0.0f64, 0.0f64);
    for (_, spec, seed) in long_curves() {
        let c = integrate_frenet_s3_seeded(&spec, seed).map_err(|e| e.to_string())?;
        let est = fd_curve_invariants(&c).map_err(|e| e.to_string())?;
        drift = drift.max(c.stats.drift_per_length(c.step()));
        dk = dk.max(est.max_kappa_error());
        dt = dt.max(est.max_tau_error());
    }
    let ok = drift <= 1e-9 && dk <= 1e-5 && dt <= 1e-5;
    Ok((ok, format!("{} curves on [0,10]: drift/length {drift:.2e}, dkappa {dk:.2e}, dtau {dt:.2e}", long_curves().len())))
}

fn ac6() -> Outcome {
    let (mut ident, mut ode, mut orient_ok) = (0.0f64, 0.0f64, true);
    for (_, spec, seed) in long_curves() {
        let c = integrate_frenet_s3_seeded(&spec, seed).map_err(|e| e.to_string())?;
        if !c.is_framed() {
            continue;
        }
        ident = ident.max(frame_identity_residuals(&c).map_err(|e| e.to_string())?.max());
        let (l, r) = (left_frame(&c).map_err(|e| e.to_string())?, right_frame(&c).map_err(|e| e.to_string())?);
        ode = ode.max(frame_ode_residuals(&c, &l).map_err(|e| e.to_string())?.max());
        ode = ode.max(frame_ode_residuals(&c, &r).map_err(|e| e.to_string())?.max());
        orient_ok &= l.orientation().ok() == Some(1.0) && r.orientation().ok() == Some(-1.0);
    }
    let ok = ident <= 1e-10 && ode <= 1e-5 && orient_ok;
    Ok((ok, format!("identity residual {ident:.2e}, ODE residual {ode:.2e}, orientations +1/-1 {orient_ok}")))
}

fn ac7() -> Outcome {
    let cfg = HelixCirclesConfig::default();
    let r = probe_helix_frame_circles(&cfg, &settings());
    let bs_ok = [0.5, 1.0, 2.0].iter().all(|b| cfg.b.contains(b));
    let ok = probe_ok(&r) && bs_ok && cfg.tol <= 1e-5 && cfg.coaxiality_tol <= 1e-4;
    let kerr = r.cases.iter().filter_map(|c| c.observed.get("kappa_hat_error")).fold(0.0f64, |m, v| m.max(*v));
    let coax = r.cases.iter().filter_map(|c| c.observed.get("coaxiality_defect")).fold(0.0f64, |m, v| m.max(*v));
    Ok((ok, format!("{}; max |kappa_hat - b| {kerr:.2e}, max pole defect {coax:.2e}", probe_line(&r, &[]))))
}

fn ac8() -> Outcome {
    let cfg = FlatConstantConfig::default();
    let r = probe_flat_constant_frame_product(&cfg, &settings());
    let stdev = r.cases.iter().filter_map(|c| c.observed.get("frame_product_stdev")).fold(0.0f64, |m, v| m.max(*v));
    let ok = probe_ok(&r) && cfg.tol <= 1e-6 && stdev <= 1e-6 && r.observed["max_abs_k"] <= 1e-6;
    Ok((ok, format!("{}; max stdev(F) {stdev:.2e}", probe_line(&r, &["max_abs_k"]))))
}

fn ac9() -> Outcome {
    let pairs: Vec<_> = standard_corpus(0.5, 1e-3)
        .into_iter()
        .filter(|e| e.kind == "helix_helix")
        .map(|e| (e.label, e.alpha, e.beta))
        .chain([(
            "helix(0.8,-1.5) x helix(1.2,0.4)".to_string(),
            CurveDef::new(CurveSpec::proper_helix(0.8, -1.5, 0.0, 0.5)),
            CurveDef::seeded(CurveSpec::proper_helix(1.2, 0.4, 0.0, 0.5), SeedFrame::rotated_tn(PI / 4.0)),
        )])
        .collect();
    let (mut first, mut gauss, mut shift) = (0.0f64, 0.0f64, 0.0f64);
    for (label, a, b) in &pairs {
        let (a, b) = (a.sample().map_err(|e| e.to_string())?, b.sample().map_err(|e| e.to_string())?);
        let pair = correspond(&a, &b, &SurfaceOptions::default().fit(a.len(), b.len(), 101)).map_err(|e| format!("{label}: {e}"))?;
        let rep = verify_correspondence(&pair).map_err(|e| format!("{label}: {e}"))?;
        first = first.max(rep.first_form_deviation);
        gauss = gauss.max(rep.gauss_deviation);
        shift = shift.max(rep.shift_law_residual);
    }
    let ok = pairs.len() >= 6 && first <= 1e-8 && gauss <= 1e-5 && shift <= 1e-5;
    Ok((ok, format!("{} pairs: first form {first:.2e}, |K~ - K| {gauss:.2e}, shift law {shift:.2e}", pairs.len())))
}

fn ac10() -> Outcome {
    let cfg = ScanConfig::default();
    let r = scan_nonexistence_minimal(&cfg, &settings());
    let ok = probe_ok(&r) && cfg.threshold <= 1e-4 && !r.controls.is_empty() && r.observed["min_sup_abs_h"] > 1e-4;
    Ok((ok, format!("{}; consistent with theorem: {}", probe_line(&r, &["min_sup_abs_h"]), r.verdict == Verdict::Supports)))
}

fn ac11() -> Outcome {
    let cfg = NoUmbilicConfig::default();
    let r = probe_no_umbilic(&cfg, &settings());
    let clifford = r.cases.iter().find(|c| c.label == "clifford minimal");
    let two = clifford.and_then(|c| c.observed.get("defect_minus_two").copied());
    let ok = probe_ok(&r)
        && cfg.threshold >= 1e-3
        && cfg.tol <= 1e-6
        && r.observed["min_umbilicity_defect"] > 1e-3
        && two.is_some_and(|d| d <= 1e-6);
    Ok((ok, format!("{}; clifford |defect - 2| {:.2e}", probe_line(&r, &["min_umbilicity_defect"]), two.unwrap_or(f64::NAN))))
}

fn run_cli(config: &Path, out: &Path, command: &str) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_quatsurf"))
        .arg(command)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.code() != Some(0) {
        return Err(format!("{command} exited with {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr)));
    }
    Ok(())
}

fn full_run(out: &Path) -> Result<(), String> {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for (name, commands) in [
        ("helix_pair.toml", &["curve", "surface", "analyze", "correspond", "export"][..]),
        ("clifford_minimal.toml", &["surface", "export", "verify"][..]),
    ] {
        for c in commands {
            let dir = out.join(name.trim_end_matches(".toml")).join(c);
            run_cli(&configs.join(name), &dir, c)?;
        }
    }
    Ok(())
}

fn files_under(root: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).into_iter().flatten().flatten() {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

fn ac12() -> Outcome {
    let (a, b) = (tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?);
    full_run(a.path())?;
    full_run(b.path())?;
    let (fa, fb) = (files_under(a.path()), files_under(b.path()));
    let mut differing = Vec::new();
    for f in &fa {
        let same = std::fs::read(a.path().join(f)).ok() == std::fs::read(b.path().join(f)).ok();
        if !same {
            differing.push(f.display().to_string());
        }
    }
    let artifacts = fa.iter().filter(|f| matches!(f.extension().and_then(|e| e.to_str()), Some("json" | "csv"))).count();
    let ok = fa == fb && differing.is_empty() && artifacts > 0;
    Ok((ok, format!("{} files ({artifacts} JSON/CSV) compared across two runs; {} differ {:?}", fa.len(), differing.len(), differing)))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC-1", "minimal clifford torus", ac1),
        ("AC-2", "clifford CMC torus r1^2 = 3/4", ac2),
        ("AC-3", "great-circle pair law", ac3),
        ("AC-4", "oracle agreement on corpus", ac4),
        ("AC-5", "frenet integrator quality", ac5),
        ("AC-6", "frame identities and ODEs", ac6),
        ("AC-7", "general-helix trace circles", ac7),
        ("AC-8", "constant-F flatness", ac8),
        ("AC-9", "correspondence", ac9),
        ("AC-10", "non-existence scan", ac10),
        ("AC-11", "umbilicity", ac11),
        ("AC-12", "determinism", ac12),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!("{} {id} {name} [{:.2}s]: {detail}", if ok { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

