use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::curve::{integrate_frenet_s3_seeded, CurveSpec, Family, HelixSign, Profile, SampledCurve, SeedFrame};
use crate::error::Result;

/// A curve in S³ together with its initial frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDef {
    pub spec: CurveSpec,
    #[serde(default)]
    pub seed: SeedFrame,
}

impl CurveDef {
    pub fn new(spec: CurveSpec) -> Self {
        Self { spec, seed: SeedFrame::default() }
    }

    pub fn seeded(spec: CurveSpec, seed: SeedFrame) -> Self {
        Self { spec, seed }
    }

    pub fn sample(&self) -> Result<SampledCurve> {
        integrate_frenet_s3_seeded(&self.spec, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusEntry {
    pub label: String,
    /// `helix_helix`, `helix_circle` or `circle_circle`.
    pub kind: &'static str,
    pub alpha: CurveDef,
    pub beta: CurveDef,
}

/// Regular surfaces over `[0, length]²` covering every generator pairing.
pub fn standard_corpus(length: f64, step: f64) -> Vec<CorpusEntry> {
    let l = length;
    let ph = |k: f64, t: f64| CurveSpec::proper_helix(k, t, 0.0, l).with_step(step);
    let gc = || CurveSpec::great_circle(0.0, l).with_step(step);
    let cf = |r1sq: f64| {
        CurveSpec::new(Family::CliffordFactor { r1: r1sq.sqrt(), r2: (1.0 - r1sq).sqrt() }, 0.0, l).with_step(step)
    };
    let gh = |b: f64, sign: HelixSign, k: Profile| CurveSpec::general_helix(b, sign, k, 0.0, l).with_step(step);
    let rot = SeedFrame::rotated_tn;
    let wave = Profile::Sine { mean: 1.0, amplitude: 0.3, frequency: 1.5 };
    let e = |label: &str, kind: &'static str, alpha: CurveDef, beta: CurveDef| CorpusEntry {
        label: label.to_string(),
        kind,
        alpha,
        beta,
    };
    vec![
        e("helix(1,2) x helix(0.6,0.5)", "helix_helix", CurveDef::new(ph(1.0, 2.0)), CurveDef::seeded(ph(0.6, 0.5), rot(PI / 3.0))),
        e("helix(2,0) x helix(1,1)", "helix_helix", CurveDef::new(ph(2.0, 0.0)), CurveDef::seeded(ph(1.0, 1.0), rot(PI / 2.0))),
        e("helix(0.5,-1) x helix(1.5,-2)", "helix_helix", CurveDef::new(ph(0.5, -1.0)), CurveDef::seeded(ph(1.5, -2.0), rot(PI / 3.0))),
        e(
            "general helix(b=0.5, wave) x helix(1,3)",
            "helix_helix",
            CurveDef::new(gh(0.5, HelixSign::Plus, wave.clone())),
            CurveDef::seeded(ph(1.0, 3.0), rot(PI / 2.0)),
        ),
        e("helix(1,1) x helix(1,-1)", "helix_helix", CurveDef::new(ph(1.0, 1.0)), CurveDef::seeded(ph(1.0, -1.0), rot(PI / 2.0))),
        e("helix(1,2) x great circle", "helix_circle", CurveDef::new(ph(1.0, 2.0)), CurveDef::seeded(gc(), rot(PI / 2.0))),
        e(
            "general helix(b=2) x great circle",
            "helix_circle",
            CurveDef::new(gh(2.0, HelixSign::Plus, Profile::constant(1.0))),
            CurveDef::seeded(gc(), rot(PI / 3.0)),
        ),
        e("great circle x helix(0.7,-0.3)", "helix_circle", CurveDef::new(gc()), CurveDef::seeded(ph(0.7, -0.3), rot(PI / 2.0))),
        e("helix(0.8,-1.5) x great circle", "helix_circle", CurveDef::new(ph(0.8, -1.5)), CurveDef::seeded(gc(), rot(2.0 * PI / 3.0))),
        e("clifford minimal", "circle_circle", CurveDef::new(gc()), CurveDef::new(cf(FRAC_1_SQRT_2 * FRAC_1_SQRT_2))),
        e("clifford r1^2=3/4", "circle_circle", CurveDef::new(gc()), CurveDef::new(cf(0.75))),
        e("clifford r1^2=0.95", "circle_circle", CurveDef::new(gc()), CurveDef::new(cf(0.95))),
        e("great circle x great circle (pi/3)", "circle_circle", CurveDef::new(gc()), CurveDef::seeded(gc(), rot(PI / 3.0))),
    ]
}
