//! Numerical probes of rigidity and non-existence statements about
//! translation surfaces in S³.
//!
//! A probe runs a list of configurations that satisfy a statement's
//! hypotheses, plus negative controls that deliberately break them. Passing
//! cases can only support a statement; the summary says "consistent with
//! Theorem", never "verified".

mod corpus;
mod probes;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use corpus::{standard_corpus, CorpusEntry, CurveDef};
pub use probes::{
    probe_cmc_great_circles, probe_flat_constant_frame_product, probe_flat_patch_unit_torsion,
    probe_helix_frame_circles, probe_no_umbilic, scan_nonexistence_minimal, CmcConfig, FlatConstantConfig,
    FlatPatchConfig, HelixCirclesConfig, NoUmbilicConfig, ScanConfig,
};

use crate::error::GeomError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    FlatConstantFrameProduct,
    CmcGreatCircleTori,
    HelixFrameCircles,
    AsymptoticUnitTorsionPatch,
    NonexistenceMinimalHelixPairs,
    NoTotallyUmbilic,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] = [
        TheoremId::FlatConstantFrameProduct,
        TheoremId::CmcGreatCircleTori,
        TheoremId::HelixFrameCircles,
        TheoremId::AsymptoticUnitTorsionPatch,
        TheoremId::NonexistenceMinimalHelixPairs,
        TheoremId::NoTotallyUmbilic,
    ];

    pub fn key(self) -> &'static str {
        match self {
            TheoremId::FlatConstantFrameProduct => "flat_constant_frame_product",
            TheoremId::CmcGreatCircleTori => "cmc_great_circle_tori",
            TheoremId::HelixFrameCircles => "helix_frame_circles",
            TheoremId::AsymptoticUnitTorsionPatch => "asymptotic_unit_torsion_patch",
            TheoremId::NonexistenceMinimalHelixPairs => "nonexistence_minimal_helix_pairs",
            TheoremId::NoTotallyUmbilic => "no_totally_umbilic",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.key() == key)
    }

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::FlatConstantFrameProduct => {
                "a constant angle between T_alpha and the right tangent of beta makes alpha.beta flat"
            }
            TheoremId::CmcGreatCircleTori => {
                "two great circles generate a CMC Clifford torus with H = -C/sqrt(1 - C^2)"
            }
            TheoremId::HelixFrameCircles => "the quaternionic frame of a general helix traces coaxial circles",
            TheoremId::AsymptoticUnitTorsionPatch => {
                "generators with torsion 1 and -1 and co-axial binormals are asymptotic lines of a flat patch"
            }
            TheoremId::NonexistenceMinimalHelixPairs => {
                "no minimal translation surface is generated by two helices with constant torsion"
            }
            TheoremId::NoTotallyUmbilic => "no translation surface in S^3 is totally umbilic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Supports,
    Violates,
    Inconclusive,
}

/// Where and with which values a check failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub case: String,
    /// Native `(i, j)` node indices, when the failure is located on a grid.
    pub node: Option<(usize, usize)>,
    pub s: Option<f64>,
    pub t: Option<f64>,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum CaseStatus {
    Pass,
    Fail,
    Error(String),
}

/// One configuration run by a probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub observed: BTreeMap<String, f64>,
    pub status: CaseStatus,
    pub witness: Option<Witness>,
}

impl CaseResult {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            params: BTreeMap::new(),
            observed: BTreeMap::new(),
            status: CaseStatus::Pass,
            witness: None,
        }
    }

    pub fn param(mut self, k: &str, v: f64) -> Self {
        self.params.insert(k.to_string(), v);
        self
    }

    pub fn observe(&mut self, k: &str, v: f64) {
        self.observed.insert(k.to_string(), v);
    }

    /// Records `value` and fails the case unless `ok`.
    pub fn check(&mut self, k: &str, value: f64, ok: bool) -> bool {
        self.observe(k, value);
        if !ok && self.status == CaseStatus::Pass {
            self.status = CaseStatus::Fail;
            let mut values = BTreeMap::new();
            values.insert(k.to_string(), value);
            self.witness = Some(Witness { case: self.label.clone(), node: None, s: None, t: None, values });
        }
        ok
    }

    /// Attaches a grid location to the current witness.
    pub fn locate(&mut self, node: (usize, usize), s: f64, t: f64) {
        if let Some(w) = &mut self.witness {
            if w.node.is_none() {
                w.node = Some(node);
                w.s = Some(s);
                w.t = Some(t);
            }
        }
    }

    pub fn errored(label: impl Into<String>, err: &GeomError) -> Self {
        let mut c = Self::new(label);
        c.status = CaseStatus::Error(err.to_string());
        c
    }

    pub fn passed(&self) -> bool {
        self.status == CaseStatus::Pass
    }
}

/// A configuration that breaks a hypothesis on purpose.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlResult {
    pub label: String,
    pub expectation: String,
    pub params: BTreeMap<String, f64>,
    pub observed: BTreeMap<String, f64>,
    /// The control failed the hypothesis check, as intended.
    pub behaved_as_designed: bool,
}

/// Probe configuration record as ordered key/value pairs.
pub type ProbeParams = BTreeMap<String, Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub theorem_id: TheoremId,
    pub statement: String,
    pub config: ProbeParams,
    pub observed: BTreeMap<String, f64>,
    pub cases: Vec<CaseResult>,
    pub controls: Vec<ControlResult>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub summary: String,
}

impl ProbeResult {
    pub fn assemble(
        theorem_id: TheoremId,
        config: ProbeParams,
        cases: Vec<CaseResult>,
        controls: Vec<ControlResult>,
        mut observed: BTreeMap<String, f64>,
    ) -> Self {
        let failed = cases.iter().find(|c| c.status == CaseStatus::Fail);
        let errored = cases.iter().filter(|c| matches!(c.status, CaseStatus::Error(_))).count();
        let bad_controls = controls.iter().filter(|c| !c.behaved_as_designed).count();
        observed.insert("cases".into(), cases.len() as f64);
        observed.insert("cases_passed".into(), cases.iter().filter(|c| c.passed()).count() as f64);
        observed.insert("controls".into(), controls.len() as f64);
        observed.insert("controls_as_designed".into(), (controls.len() - bad_controls) as f64);
        let statement = theorem_id.statement().to_string();
        let (verdict, witness, summary) = if let Some(f) = failed {
            let w = f.witness.clone();
            (Verdict::Violates, w, format!("not consistent with Theorem ({statement}): case {} failed", f.label))
        } else if errored > 0 || bad_controls > 0 || cases.is_empty() {
            (
                Verdict::Inconclusive,
                None,
                format!("inconclusive: {errored} case(s) could not be evaluated, {bad_controls} control(s) did not fail as designed"),
            )
        } else {
            (
                Verdict::Supports,
                None,
                format!("consistent with Theorem ({statement}) on {} configuration(s); {} control(s) failed as designed", cases.len(), controls.len()),
            )
        };
        Self { theorem_id, statement, config, observed, cases, controls, verdict, witness, summary }
    }
}

/// Sampling shared by every probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Settings {
    pub step: f64,
    pub delta: f64,
    /// Largest number of grid nodes per side; curves are strided to fit.
    pub max_side: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self { step: crate::curve::DEFAULT_STEP, delta: crate::surface::DEFAULT_DELTA, max_side: 200 }
    }
}

/// One entry of a suite manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "probe", rename_all = "snake_case")]
pub enum ProbeConfig {
    FlatConstantFrameProduct(FlatConstantConfig),
    CmcGreatCircleTori(CmcConfig),
    HelixFrameCircles(HelixCirclesConfig),
    AsymptoticUnitTorsionPatch(FlatPatchConfig),
    NonexistenceMinimalHelixPairs(ScanConfig),
    NoTotallyUmbilic(NoUmbilicConfig),
}

impl ProbeConfig {
    pub fn id(&self) -> TheoremId {
        match self {
            ProbeConfig::FlatConstantFrameProduct(_) => TheoremId::FlatConstantFrameProduct,
            ProbeConfig::CmcGreatCircleTori(_) => TheoremId::CmcGreatCircleTori,
            ProbeConfig::HelixFrameCircles(_) => TheoremId::HelixFrameCircles,
            ProbeConfig::AsymptoticUnitTorsionPatch(_) => TheoremId::AsymptoticUnitTorsionPatch,
            ProbeConfig::NonexistenceMinimalHelixPairs(_) => TheoremId::NonexistenceMinimalHelixPairs,
            ProbeConfig::NoTotallyUmbilic(_) => TheoremId::NoTotallyUmbilic,
        }
    }

    pub fn default_for(id: TheoremId) -> Self {
        match id {
            TheoremId::FlatConstantFrameProduct => ProbeConfig::FlatConstantFrameProduct(Default::default()),
            TheoremId::CmcGreatCircleTori => ProbeConfig::CmcGreatCircleTori(Default::default()),
            TheoremId::HelixFrameCircles => ProbeConfig::HelixFrameCircles(Default::default()),
            TheoremId::AsymptoticUnitTorsionPatch => ProbeConfig::AsymptoticUnitTorsionPatch(Default::default()),
            TheoremId::NonexistenceMinimalHelixPairs => ProbeConfig::NonexistenceMinimalHelixPairs(Default::default()),
            TheoremId::NoTotallyUmbilic => ProbeConfig::NoTotallyUmbilic(Default::default()),
        }
    }

    pub fn run(&self, settings: &Settings) -> ProbeResult {
        match self {
            ProbeConfig::FlatConstantFrameProduct(c) => probe_flat_constant_frame_product(c, settings),
            ProbeConfig::CmcGreatCircleTori(c) => probe_cmc_great_circles(c, settings),
            ProbeConfig::HelixFrameCircles(c) => probe_helix_frame_circles(c, settings),
            ProbeConfig::AsymptoticUnitTorsionPatch(c) => probe_flat_patch_unit_torsion(c, settings),
            ProbeConfig::NonexistenceMinimalHelixPairs(c) => scan_nonexistence_minimal(c, settings),
            ProbeConfig::NoTotallyUmbilic(c) => probe_no_umbilic(c, settings),
        }
    }
}

/// List of probes with shared sampling settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteManifest {
    #[serde(default)]
    pub settings: Settings,
    pub probes: Vec<ProbeConfig>,
}

impl Default for SuiteManifest {
    fn default() -> Self {
        Self { settings: Settings::default(), probes: TheoremId::ALL.into_iter().map(ProbeConfig::default_for).collect() }
    }
}

impl SuiteManifest {
    /// Runs the probes in manifest order, optionally only those with `only` id.
    pub fn run(&self, only: Option<TheoremId>) -> Vec<ProbeResult> {
        self.probes
            .iter()
            .filter(|p| only.is_none_or(|id| p.id() == id))
            .map(|p| p.run(&self.settings))
            .collect()
    }
}

/// Fixed-width text table: one row per probe.
pub fn render_summary(results: &[ProbeResult]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<34} {:<12} {:>7} {:>9}  summary", "probe", "verdict", "cases", "controls");
    for r in results {
        let cases = format!("{}/{}", r.observed["cases_passed"], r.observed["cases"]);
        let controls = format!("{}/{}", r.observed["controls_as_designed"], r.observed["controls"]);
        let _ = writeln!(
            out,
            "{:<34} {:<12} {:>7} {:>9}  {}",
            r.theorem_id.key(),
            format!("{:?}", r.verdict),
            cases,
            controls,
            r.summary
        );
    }
    out
}
