use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::quat::Quat;

/// Curvature below this separates geodesics from framed curves.
pub const KAPPA_EPS: f64 = 1e-8;

pub const DEFAULT_STEP: f64 = 1e-3;

/// A named scalar profile of arc length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Constant { value: f64 },
    /// `start + slope·s`
    Linear { start: f64, slope: f64 },
    /// `mean + amplitude·sin(frequency·s)`
    Sine { mean: f64, amplitude: f64, frequency: f64 },
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Profile::Constant { value } => value,
            Profile::Linear { start, slope } => start + slope * s,
            Profile::Sine { mean, amplitude, frequency } => mean + amplitude * (frequency * s).sin(),
        }
    }
}

/// Tabulated `(s, κ, τ)` nodes, linearly interpolated and clamped at the ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    s: Vec<f64>,
    kappa: Vec<f64>,
    tau: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct TableRow {
    s: f64,
    kappa: f64,
    tau: f64,
}

impl Table {
    pub fn new(s: Vec<f64>, kappa: Vec<f64>, tau: Vec<f64>) -> Result<Self> {
        if s.len() != kappa.len() || s.len() != tau.len() {
            return Err(GeomError::Table("column lengths differ".into()));
        }
        if s.len() < 2 {
            return Err(GeomError::Table("need at least two rows".into()));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeomError::Table("s column must be strictly increasing".into()));
        }
        if kappa.iter().any(|k| *k < 0.0 || !k.is_finite()) || tau.iter().any(|t| !t.is_finite()) {
            return Err(GeomError::Table("kappa must be finite and non-negative, tau finite".into()));
        }
        Ok(Self { s, kappa, tau })
    }

    /// Samples `(κ(s), τ(s))` on `[s_min, s_max]` with `n` rows.
    pub fn sample(s_min: f64, s_max: f64, n: usize, f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let s: Vec<f64> = (0..n).map(|i| s_min + (s_max - s_min) * i as f64 / (n - 1) as f64).collect();
        let (kappa, tau) = s.iter().map(|&x| f(x)).unzip();
        Self::new(s, kappa, tau)
    }

    /// Reads a CSV with header `s,kappa,tau`.
    pub fn from_csv_reader(r: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(r);
        let headers = rdr.headers().map_err(|e| GeomError::Table(e.to_string()))?.clone();
        let expect = ["s", "kappa", "tau"];
        if headers.len() != 3 || headers.iter().zip(expect).any(|(h, e)| h != e) {
            return Err(GeomError::Table(format!("expected header s,kappa,tau, got {:?}", headers)));
        }
        let (mut s, mut kappa, mut tau) = (Vec::new(), Vec::new(), Vec::new());
        for (line, row) in rdr.deserialize::<TableRow>().enumerate() {
            let row = row.map_err(|e| GeomError::Table(format!("row {}: {e}", line + 2)))?;
            s.push(row.s);
            kappa.push(row.kappa);
            tau.push(row.tau);
        }
        Self::new(s, kappa, tau)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| GeomError::Table(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(f)
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        let n = self.s.len();
        if s <= self.s[0] {
            return (self.kappa[0], self.tau[0]);
        }
        if s >= self.s[n - 1] {
            return (self.kappa[n - 1], self.tau[n - 1]);
        }
        let k = self.s.partition_point(|x| *x <= s) - 1;
        let w = (s - self.s[k]) / (self.s[k + 1] - self.s[k]);
        (
            self.kappa[k] + w * (self.kappa[k + 1] - self.kappa[k]),
            self.tau[k] + w * (self.tau[k + 1] - self.tau[k]),
        )
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.s[0], self.s[self.s.len() - 1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HelixSign {
    Plus,
    Minus,
}

impl HelixSign {
    pub fn value(self) -> f64 {
        match self {
            HelixSign::Plus => 1.0,
            HelixSign::Minus => -1.0,
        }
    }
}

/// How the curvature and torsion of a curve in S³ are prescribed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    GreatCircle,
    ProperHelix { kappa: f64, tau: f64 },
    /// τ(s) = b·κ(s) ± 1.
    GeneralHelix { b: f64, sign: HelixSign, kappa: Profile },
    CliffordFactor { r1: f64, r2: f64 },
    Tabulated { table: Table },
}

/// Arc-length curve in S³ described by its Frenet invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(flatten)]
    pub family: Family,
    pub s_min: f64,
    pub s_max: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_step() -> f64 {
    DEFAULT_STEP
}

impl CurveSpec {
    pub fn new(family: Family, s_min: f64, s_max: f64) -> Self {
        Self { family, s_min, s_max, step: DEFAULT_STEP }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn great_circle(s_min: f64, s_max: f64) -> Self {
        Self::new(Family::GreatCircle, s_min, s_max)
    }

    pub fn proper_helix(kappa: f64, tau: f64, s_min: f64, s_max: f64) -> Self {
        Self::new(Family::ProperHelix { kappa, tau }, s_min, s_max)
    }

    pub fn general_helix(b: f64, sign: HelixSign, kappa: Profile, s_min: f64, s_max: f64) -> Self {
        Self::new(Family::GeneralHelix { b, sign, kappa }, s_min, s_max)
    }

    pub fn is_geodesic(&self) -> bool {
        matches!(self.family, Family::GreatCircle | Family::CliffordFactor { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(GeomError::InvalidSpec(format!("step must be positive, got {}", self.step)));
        }
        if !(self.s_max > self.s_min) {
            return Err(GeomError::InvalidSpec(format!("empty range [{}, {}]", self.s_min, self.s_max)));
        }
        match &self.family {
            Family::ProperHelix { kappa, tau } if *kappa < 0.0 || !kappa.is_finite() || !tau.is_finite() => {
                Err(GeomError::InvalidSpec("proper helix needs finite κ ≥ 0 and finite τ".into()))
            }
            Family::CliffordFactor { r1, r2 } => check_radii(*r1, *r2),
            _ => Ok(()),
        }
    }

    /// Number of nodes: `s_i = s_min + i·step`, last node within rounding of `s_max`.
    pub fn node_count(&self) -> usize {
        ((self.s_max - self.s_min) / self.step).round() as usize + 1
    }

    /// Prescribed `(κ(s), τ(s))`.
    pub fn invariants_at(&self, s: f64) -> (f64, f64) {
        match &self.family {
            Family::GreatCircle | Family::CliffordFactor { .. } => (0.0, 0.0),
            Family::ProperHelix { kappa, tau } => (*kappa, *tau),
            Family::GeneralHelix { b, sign, kappa } => {
                let k = kappa.eval(s);
                (k, b * k + sign.value())
            }
            Family::Tabulated { table } => table.eval(s),
        }
    }
}

pub(crate) fn check_radii(r1: f64, r2: f64) -> Result<()> {
    let sum = r1 * r1 + r2 * r2;
    if (sum - 1.0).abs() > 1e-10 || r1 < 0.0 || r2 < 0.0 {
        return Err(GeomError::BadRadii { sum });
    }
    Ok(())
}

/// Initial frame `(α, t, n, b)` at `s_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedFrame {
    pub alpha: Quat,
    pub t: Quat,
    pub n: Quat,
    pub b: Quat,
}

impl Default for SeedFrame {
    fn default() -> Self {
        Self { alpha: Quat::ONE, t: Quat::I, n: Quat::J, b: Quat::K }
    }
}

impl SeedFrame {
    pub fn columns(&self) -> [Quat; 4] {
        [self.alpha, self.t, self.n, self.b]
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.columns();
        let mut defect = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                let target = if a == b { 1.0 } else { 0.0 };
                defect = defect.max((c[a].dot(c[b]) - target).abs());
            }
        }
        if defect > 1e-9 || frame_det(&c) <= 0.0 {
            return Err(GeomError::BadSeedFrame { defect });
        }
        Ok(())
    }

    /// Left-translates the default gauge frame by a unit quaternion `q`:
    /// `(q, q·i, q·j, q·k)`. Left translation is an orientation-preserving isometry.
    pub fn translated(q: Quat) -> Self {
        let q = q.normalize();
        Self { alpha: q, t: q * Quat::I, n: q * Quat::J, b: q * Quat::K }
    }

    /// Seed at `α = 1` whose `(t, n)` pair is rotated by `theta` in the `(i, j)` plane.
    pub fn rotated_tn(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            alpha: Quat::ONE,
            t: Quat::new(0.0, c, s, 0.0),
            n: Quat::new(0.0, -s, c, 0.0),
            b: Quat::K,
        }
    }

    /// Seed at `α = 1` with tangent `t = v` (pure unit); `n`, `b` complete a
    /// positive frame.
    pub fn with_tangent(v: Quat) -> Result<Self> {
        let v = Quat::new(0.0, v.x, v.y, v.z).normalize();
        let vv = v.imag();
        let helper = if vv.x.abs() < 0.9 { nalgebra::Vector3::x() } else { nalgebra::Vector3::y() };
        let n = (helper - vv * vv.dot(&helper)).normalize();
        let b = vv.cross(&n);
        let seed = Self { alpha: Quat::ONE, t: v, n: Quat::pure(n), b: Quat::pure(b) };
        seed.validate()?;
        Ok(seed)
    }
}

/// Determinant of the 4×4 matrix with the given columns.
pub fn frame_det(c: &[Quat; 4]) -> f64 {
    let m = nalgebra::Matrix4::from_fn(|r, k| c[k].to_array()[r]);
    m.determinant()
}

/// Curve in ℝ³ described by its Frenet invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpecR3 {
    pub kappa: Profile,
    pub tau: Profile,
    pub s_min: f64,
    pub s_max: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

impl CurveSpecR3 {
    pub fn constant(kappa: f64, tau: f64, s_min: f64, s_max: f64) -> Self {
        Self { kappa: Profile::constant(kappa), tau: Profile::constant(tau), s_min, s_max, step: DEFAULT_STEP }
    }

    pub fn node_count(&self) -> usize {
        ((self.s_max - self.s_min) / self.step).round() as usize + 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !(self.s_max > self.s_min) {
            return Err(GeomError::InvalidSpec("need step > 0 and s_max > s_min".into()));
        }
        Ok(())
    }
}
