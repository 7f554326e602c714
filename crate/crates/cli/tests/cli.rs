use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use quatsurf::Quat;
use quatsurf_cli::project::{
    auto_pole, conformality_defect, stereographic, stereographic_differential, stereographic_project, Pole,
    POLE_CLEARANCE,
};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn quatsurf(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatsurf"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const HELIX_PAIR: &str = r#"
[grid]
max_side = 30

[alpha]
family = "proper_helix"
kappa = 1.0
tau = 2.0
s_min = 0.0
s_max = 0.5

[beta]
family = "proper_helix"
kappa = 0.6
tau = 0.5
s_min = 0.0
s_max = 0.5
seed = { theta = 1.0471975511965976 }
"#;

#[test]
fn surface_csv_has_one_row_per_node() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), HELIX_PAIR);
    let o = quatsurf(&["surface"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = json(&dir.path().join("surface.json"));
    let (rows, cols) = (summary["rows"].as_u64().unwrap(), summary["cols"].as_u64().unwrap());
    assert!(rows > 10 && rows <= 30 && cols <= 30);
    let mut rdr = csv::Reader::from_path(dir.path().join("surface.csv")).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["s", "t", "F", "e", "f", "g", "H", "K", "K_ext", "min_res", "umb_defect"]);
    let records: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(records.len() as u64, rows * cols);
    for r in &records {
        let k: f64 = r[7].parse().unwrap();
        let k_ext: f64 = r[8].parse().unwrap();
        assert!((k - k_ext - 1.0).abs() < 1e-12);
    }
}

#[test]
fn every_command_succeeds_on_shipped_configs() {
    for (config, commands) in [
        ("helix_pair.toml", &["curve", "surface", "analyze", "correspond", "export"][..]),
        ("clifford_minimal.toml", &["curve", "surface", "analyze", "export"][..]),
    ] {
        for c in commands {
            let dir = tempfile::tempdir().unwrap();
            let o = quatsurf(&[c], &configs().join(config), dir.path());
            assert_eq!(o.status.code(), Some(0), "{config} {c}: {}", stderr(&o));
            let listed = String::from_utf8_lossy(&o.stdout);
            assert!(fs::read_dir(dir.path()).unwrap().count() >= 2, "{config} {c}: {listed}");
        }
    }
}

#[test]
fn analyze_reports_oracle_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let o = quatsurf(&["analyze"], &configs().join("helix_pair.toml"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let a = json(&dir.path().join("analysis.json"));
    assert!(a["oracle"]["h"].as_f64().unwrap() <= 1e-5);
    assert!(a["oracle"]["k"].as_f64().unwrap() <= 1e-5);
    assert!(a["richardson"].as_array().unwrap().len() == 8);
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = write_config(a.path(), HELIX_PAIR);
    for c in ["surface", "correspond", "export"] {
        assert_eq!(quatsurf(&[c], &cfg, a.path()).status.code(), Some(0));
        assert_eq!(quatsurf(&[c], &cfg, b.path()).status.code(), Some(0));
    }
    for f in ["surface.csv", "surface.json", "correspond_r3.csv", "correspond.json", "mesh.obj", "mesh_scalars.csv", "mesh.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn malformed_config_exits_1_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[grid]\nstep = 1e-3\n\n[alpha]\nfamily = \"proper_helix\"\nkappa = \"one\"\n");
    let o = quatsurf(&["curve"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("config error") && err.contains("line"), "{err}");
}

#[test]
fn invalid_values_exit_1_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &HELIX_PAIR.replace("max_side = 30", "max_side = 30\ndelta = -1.0"));
    let o = quatsurf(&["surface"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("delta"), "{}", stderr(&o));
}

#[test]
fn missing_beta_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let text = HELIX_PAIR.split("[beta]").next().unwrap();
    let o = quatsurf(&["surface"], &write_config(dir.path(), text), dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("beta"), "{}", stderr(&o));
}

#[test]
fn probe_flag_outside_verify_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), HELIX_PAIR);
    let o = quatsurf(&["surface", "--probe", "no_totally_umbilic"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn singular_node_exits_2_and_lists_nodes() {
    // Identical generators from the same seed: ⟨T_α, T̂_β⟩ = −1 at the origin.
    let dir = tempfile::tempdir().unwrap();
    let text = HELIX_PAIR.replace("kappa = 0.6\ntau = 0.5", "kappa = 1.0\ntau = 2.0").replace("seed = { theta = 1.0471975511965976 }", "");
    let o = quatsurf(&["surface"], &write_config(dir.path(), &text), dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let nodes = json(&dir.path().join("regularity.json"));
    let first = &nodes.as_array().unwrap()[0];
    assert_eq!((first["i"].as_u64(), first["j"].as_u64()), (Some(0), Some(0)), "{first}");
    assert!(!dir.path().join("surface.csv").exists());
}

#[test]
fn violated_probe_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = "[settings]\nmax_side = 40\n\n[[probes]]\nprobe = \"cmc_great_circle_tori\"\nc = [0.5]\ntol = 0.0\n";
    let o = quatsurf(&["verify"], &write_config(dir.path(), text), dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let v = json(&dir.path().join("verify.json"));
    assert_eq!(v["results"][0]["verdict"], "Violates");
    assert!(v["results"][0]["witness"].is_object());
}

#[test]
fn verify_single_probe() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[settings]\nmax_side = 40\n");
    let o = quatsurf(&["verify", "--probe", "no_totally_umbilic"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&dir.path().join("verify.json"));
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0]["theorem_id"], "no_totally_umbilic");
    assert_eq!(results[0]["verdict"], "Supports");
    assert!(fs::read_to_string(dir.path().join("verify_summary.txt")).unwrap().contains("no_totally_umbilic"));
}

#[test]
fn unknown_probe_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let o = quatsurf(&["verify", "--probe", "riemann"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pole_on_the_surface_is_rejected() {
    // The Clifford torus passes through 1 = e1 at s = t = 0.
    let dir = tempfile::tempdir().unwrap();
    let o = quatsurf(&["export", "--pole", "+e1"], &configs().join("clifford_minimal.toml"), dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pole collision"), "{}", stderr(&o));
    assert!(!dir.path().join("mesh.obj").exists());
}

#[test]
fn export_writes_quads_over_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = quatsurf(&["export"], &configs().join("clifford_minimal.toml"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = json(&dir.path().join("mesh.json"));
    let (rows, cols) = (m["rows"].as_u64().unwrap(), m["cols"].as_u64().unwrap());
    let obj = fs::read_to_string(dir.path().join("mesh.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count() as u64, rows * cols);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count() as u64, (rows - 1) * (cols - 1));
    assert_eq!(m["degenerate_faces"], 0);
    assert_eq!(m["pole"], "-e1");
    assert!(m["conformality_defect"].as_f64().unwrap() < 1e-10);
}

#[test]
fn stereographic_reference_points() {
    let minus_e1 = Pole::parse("-e1").unwrap();
    assert_eq!(stereographic(Quat::new(1.0, 0.0, 0.0, 0.0), minus_e1), [0.0, 0.0, 0.0]);
    assert_eq!(stereographic(Quat::new(0.0, 1.0, 0.0, 0.0), minus_e1), [1.0, 0.0, 0.0]);
    let y = stereographic(Quat::new(0.6, 0.0, 0.8, 0.0), minus_e1);
    assert!((y[1] - 0.5).abs() < 1e-15 && y[0] == 0.0 && y[2] == 0.0);
    let plus_e4 = Pole::parse("+e4").unwrap();
    let y = stereographic(Quat::new(0.0, 0.0, 0.6, -0.8), plus_e4);
    assert!((y[2] - 1.0 / 3.0).abs() < 1e-15 && y[0] == 0.0 && y[1] == 0.0);
}

#[test]
fn projecting_the_pole_itself_fails() {
    let p = Pole::parse("e2").unwrap();
    let pts = [Quat::new(1.0, 0.0, 0.0, 0.0), Quat::new(0.0, 1.0 - 1e-9, 0.0, 0.0).normalize()];
    let err = stereographic_project(&pts, 2, p).unwrap_err();
    assert!(err.to_string().contains("e2"), "{err}");
    assert_eq!(auto_pole(&pts), Pole::parse("-e1").unwrap());
}

fn unit() -> impl Strategy<Value = Quat> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_filter("nonzero", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|a| Quat::from_array(a).normalize())
}

fn tangent(x: Quat) -> impl Strategy<Value = Quat> {
    prop::array::uniform4(-1.0..1.0f64).prop_map(move |a| {
        let v = Quat::from_array(a);
        v - x * x.dot(v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projection_is_conformal((x, u, v) in unit().prop_flat_map(|x| (Just(x), tangent(x), tangent(x))), k in 0usize..8) {
        let pole = Pole::CANDIDATES[k];
        prop_assume!((x - pole.quat()).norm() > 0.1);
        prop_assume!(u.norm() > 1e-3 && v.norm() > 1e-3);
        prop_assert!(conformality_defect(&[(x, u, v)], pole) < 1e-9);
        let (du, dv) = (stereographic_differential(x, u, pole), stereographic_differential(x, v, pole));
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let scale = 1.0 / (1.0 - x.dot(pole.quat()));
        prop_assert!((dot(du, dv) - scale * scale * u.dot(v)).abs() < 1e-9 * (1.0 + scale * scale));
    }

    #[test]
    fn projection_inverts(x in unit(), k in 0usize..8) {
        let pole = Pole::CANDIDATES[k];
        prop_assume!((x - pole.quat()).norm() > 0.1);
        let y = stereographic(x, pole);
        let r2 = y.iter().map(|c| c * c).sum::<f64>();
        // Inverse: x = (2y + (r² − 1) p) / (r² + 1) in the complementary coordinates.
        let p = pole.quat().to_array();
        let mut back = [0.0; 4];
        let mut c = 0;
        for (idx, b) in back.iter_mut().enumerate() {
            if p[idx] != 0.0 {
                *b = (r2 - 1.0) / (r2 + 1.0) * p[idx];
            } else {
                *b = 2.0 * y[c] / (r2 + 1.0);
                c += 1;
            }
        }
        prop_assert!((Quat::from_array(back) - x).max_abs() < 1e-9);
    }

    #[test]
    fn auto_pole_keeps_clearance(pts in prop::collection::vec(unit(), 1..20)) {
        let p = auto_pole(&pts);
        let dmin = pts.iter().map(|x| (*x - p.quat()).norm()).fold(f64::INFINITY, f64::min);
        for q in Pole::CANDIDATES {
            let d = pts.iter().map(|x| (*x - q.quat()).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d <= dmin + 1e-15);
        }
        if dmin > POLE_CLEARANCE {
            prop_assert!(stereographic_project(&pts, pts.len(), p).is_ok());
        }
    }
}
