//! TOML run configuration.
//!
//! ```toml
//! [grid]
//! step = 1e-3
//! delta = 1e-3
//! max_side = 200
//!
//! [alpha]
//! family = "great_circle"
//! s_min = 0.0
//! s_max = 6.283185307179586
//!
//! [beta]
//! family = "clifford_factor"
//! r1 = 0.7071067811865476
//! r2 = 0.7071067811865476
//! s_min = 0.0
//! s_max = 6.283185307179586
//!
//! [export]
//! pole = "auto"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use quatsurf::curve::{CurveSpec, Family, HelixSign, Profile, SeedFrame, Table};
use quatsurf::surface::SurfaceOptions;
use quatsurf::theorems::{ProbeConfig, Settings, SuiteManifest};
use quatsurf::Quat;

use crate::project::Pole;
use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySection {
    GreatCircle,
    ProperHelix { kappa: f64, tau: f64 },
    GeneralHelix { b: f64, sign: HelixSign, kappa: Profile },
    CliffordFactor { r1: f64, r2: f64 },
    /// CSV with columns `s,kappa,tau`, relative to the config file.
    Tabulated { table: PathBuf },
}

/// Initial frame; at most one of the fields may be set.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSection {
    /// Rotation of `(t, n)` in the `(i, j)` plane at `α = 1`.
    pub theta: Option<f64>,
    /// Initial tangent `[x, y, z]` at `α = 1`.
    pub tangent: Option<[f64; 3]>,
    /// Left translation `[w, x, y, z]` of the default frame.
    pub translate: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CurveSection {
    #[serde(flatten)]
    pub family: FamilySection,
    pub s_min: f64,
    pub s_max: f64,
    pub step: Option<f64>,
    pub seed: Option<SeedSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub step: Option<f64>,
    pub delta: Option<f64>,
    pub max_side: Option<usize>,
    /// Arc-length windows `[min, max]` along `α` and `β`.
    pub s_range: Option<[f64; 2]>,
    pub t_range: Option<[f64; 2]>,
    /// Oracle stencil half-width, in native steps.
    pub oracle_width: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExportSection {
    pub pole: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub grid: GridSection,
    pub alpha: Option<CurveSection>,
    pub beta: Option<CurveSection>,
    #[serde(default)]
    pub export: ExportSection,
    /// Probe settings for `verify`.
    pub settings: Option<Settings>,
    pub probes: Option<Vec<ProbeConfig>>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub step: Option<f64>,
    pub delta: Option<f64>,
    pub pole: Option<String>,
}

pub const DEFAULT_MAX_SIDE: usize = 200;

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(field, format!("must be a positive number, got {v}")))
    }
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(&path.display().to_string(), e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(h) = o.step {
            self.grid.step = Some(h);
        }
        if let Some(d) = o.delta {
            self.grid.delta = Some(d);
        }
        if let Some(p) = &o.pole {
            self.export.pole = Some(p.clone());
        }
    }

    pub fn delta(&self) -> Result<f64, CliError> {
        let d = self.grid.delta.unwrap_or(quatsurf::surface::DEFAULT_DELTA);
        if d > 0.0 && d < 1.0 {
            Ok(d)
        } else {
            Err(invalid("grid.delta", format!("must lie in (0, 1), got {d}")))
        }
    }

    pub fn max_side(&self) -> Result<usize, CliError> {
        match self.grid.max_side.unwrap_or(DEFAULT_MAX_SIDE) {
            n if n >= 2 => Ok(n),
            n => Err(invalid("grid.max_side", format!("must be at least 2, got {n}"))),
        }
    }

    pub fn oracle_width(&self) -> Result<usize, CliError> {
        match self.grid.oracle_width.unwrap_or(1) {
            0 => Err(invalid("grid.oracle_width", "must be at least 1")),
            w => Ok(w),
        }
    }

    pub fn pole(&self) -> Result<Option<Pole>, CliError> {
        match self.export.pole.as_deref() {
            None | Some("auto") => Ok(None),
            Some(p) => Pole::parse(p).map(Some).ok_or_else(|| invalid("export.pole", format!("expected auto or ±e1..±e4, got {p:?}"))),
        }
    }

    fn curve(&self, name: &str) -> Result<(CurveSpec, SeedFrame), CliError> {
        let sec = match name {
            "alpha" => &self.alpha,
            _ => &self.beta,
        };
        let sec = sec.as_ref().ok_or_else(|| invalid(name, "section is required by this command"))?;
        let step = positive(&format!("{name}.step"), sec.step.or(self.grid.step).unwrap_or(quatsurf::curve::DEFAULT_STEP))?;
        if !(sec.s_max > sec.s_min) {
            return Err(invalid(&format!("{name}.s_max"), format!("must exceed s_min ({} <= {})", sec.s_max, sec.s_min)));
        }
        let family = match &sec.family {
            FamilySection::GreatCircle => Family::GreatCircle,
            FamilySection::ProperHelix { kappa, tau } => Family::ProperHelix { kappa: *kappa, tau: *tau },
            FamilySection::GeneralHelix { b, sign, kappa } => Family::GeneralHelix { b: *b, sign: *sign, kappa: kappa.clone() },
            FamilySection::CliffordFactor { r1, r2 } => Family::CliffordFactor { r1: *r1, r2: *r2 },
            FamilySection::Tabulated { table } => {
                let path = self.base_dir.join(table);
                let t = Table::from_csv_path(&path).map_err(|e| invalid(&format!("{name}.table"), format!("{}: {e}", path.display())))?;
                Family::Tabulated { table: t }
            }
        };
        let spec = CurveSpec::new(family, sec.s_min, sec.s_max).with_step(step);
        spec.validate().map_err(|e| invalid(name, e))?;
        let seed = match &sec.seed {
            None => SeedFrame::default(),
            Some(s) => {
                let set = [s.theta.is_some(), s.tangent.is_some(), s.translate.is_some()].iter().filter(|b| **b).count();
                if set > 1 {
                    return Err(invalid(&format!("{name}.seed"), "set only one of theta, tangent, translate"));
                }
                if let Some(th) = s.theta {
                    SeedFrame::rotated_tn(th)
                } else if let Some([x, y, z]) = s.tangent {
                    SeedFrame::with_tangent(Quat::new(0.0, x, y, z)).map_err(|e| invalid(&format!("{name}.seed.tangent"), e))?
                } else if let Some([w, x, y, z]) = s.translate {
                    let q = Quat::new(w, x, y, z);
                    if q.norm() < 1e-12 {
                        return Err(invalid(&format!("{name}.seed.translate"), "must be nonzero"));
                    }
                    SeedFrame::translated(q)
                } else {
                    SeedFrame::default()
                }
            }
        };
        Ok((spec, seed))
    }

    pub fn alpha(&self) -> Result<(CurveSpec, SeedFrame), CliError> {
        self.curve("alpha")
    }

    pub fn beta(&self) -> Result<(CurveSpec, SeedFrame), CliError> {
        self.curve("beta")
    }

    /// Grid options for curves with the given node arc lengths.
    pub fn surface_options(&self, alpha_s: &[f64], beta_s: &[f64]) -> Result<SurfaceOptions, CliError> {
        let window = |field: &str, r: Option<[f64; 2]>, s: &[f64]| -> Result<Option<(usize, usize)>, CliError> {
            let Some([a, b]) = r else { return Ok(None) };
            if !(b > a) {
                return Err(invalid(field, format!("empty window [{a}, {b}]")));
            }
            let lo = s.iter().position(|&x| x >= a - 1e-12);
            let hi = s.iter().rposition(|&x| x <= b + 1e-12);
            match (lo, hi) {
                (Some(lo), Some(hi)) if hi >= lo => Ok(Some((lo, hi + 1))),
                _ => Err(invalid(field, format!("[{a}, {b}] contains no curve node"))),
            }
        };
        let mut opts = SurfaceOptions::default().with_delta(self.delta()?);
        opts.s_range = window("grid.s_range", self.grid.s_range, alpha_s)?;
        opts.t_range = window("grid.t_range", self.grid.t_range, beta_s)?;
        Ok(opts.fit(alpha_s.len(), beta_s.len(), self.max_side()?))
    }

    /// Probe manifest: the configured `[[probes]]`, or every probe with defaults.
    pub fn manifest(&self, only: Option<&str>) -> Result<SuiteManifest, CliError> {
        let mut m = match &self.probes {
            Some(p) => SuiteManifest { settings: self.settings.unwrap_or_default(), probes: p.clone() },
            None => SuiteManifest { settings: self.settings.unwrap_or_default(), ..SuiteManifest::default() },
        };
        if let Some(h) = self.grid.step {
            m.settings.step = positive("grid.step", h)?;
        }
        if let Some(d) = self.grid.delta {
            m.settings.delta = self.delta().map(|_| d)?;
        }
        if let Some(n) = self.grid.max_side {
            m.settings.max_side = self.max_side().map(|_| n)?;
        }
        positive("settings.step", m.settings.step)?;
        if let Some(key) = only {
            let id = quatsurf::theorems::TheoremId::from_key(key).ok_or_else(|| invalid("--probe", format!("unknown probe {key:?}")))?;
            if !m.probes.iter().any(|p| p.id() == id) {
                m.probes.push(ProbeConfig::default_for(id));
            }
            m.probes.retain(|p| p.id() == id);
        }
        Ok(m)
    }
}
