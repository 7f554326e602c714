//! Correspondence between translation surfaces in S³ and in ℝ³.
//!
//! The pure sphere 𝒮 is identified with the unit sphere of ℝ³ by dropping
//! the real part and keeping `(x, y, z)`. The partner curves are
//!
//! ```text
//! α̃' = T_α,    Frenet frame (T_α, N_α, B_α),     τ̃_α = τ_α − 1
//! β̃' = −T̂_β,   Frenet frame (−T̂_β, −N̂_β, −B̂_β),  τ̃_β = τ_β + 1
//! ```
//!
//! so the ℝ³ frames are the quaternionic frame fields themselves and
//! `⟨α̃', β̃'⟩ = −⟨T_α, T̂_β⟩ = F`.

use nalgebra::Vector3;
use serde::Serialize;

use crate::curve::{
    fd_curve_invariants, CurveSpec, Family, FrenetSampleR3, SampledCurve, SampledCurveR3, Table, KAPPA_EPS,
};
use crate::error::{GeomError, Result};
use crate::frame::{left_frame, right_frame, QuatFrameSamples, Side};
use crate::grid::Grid;
use crate::quat::PureUnit;
use crate::surface::{analyze, build_surface, GeometryReport, SurfaceGrid, SurfaceOptions};
use crate::surface_r3::{r3_translation_surface, GeometryReportR3, SurfaceGridR3};

pub const ISOMETRY_TOL: f64 = 1e-8;

pub const NOTES: [&str; 3] = [
    "pure quaternions are identified with R^3 by dropping w and keeping (x, y, z)",
    "the beta partner uses the conjugated right frame (-T, -N, -B), which is positively oriented in R^3",
    "second-form terms pair B_alpha with the right tangent of beta, <B_alpha, T_beta>; the variant <B_alpha, T_alpha> is not used",
];

fn lift_one(curve: &SampledCurve, frames: &QuatFrameSamples, sign: f64) -> SampledCurveR3 {
    let h = curve.step();
    let v = |p: &PureUnit| p.vec() * sign;
    let t: Vec<Vector3<f64>> = frames.t.iter().map(v).collect();
    let n: Option<Vec<Vector3<f64>>> = frames.n.as_ref().map(|n| n.iter().map(v).collect());
    let b: Option<Vec<Vector3<f64>>> = frames.b.as_ref().map(|b| b.iter().map(v).collect());
    let shift = frames.side.shift();
    let accel = |k: usize| match &n {
        Some(n) => n[k] * curve.samples[k].kappa,
        None => Vector3::zeros(),
    };
    let mut pos = Vector3::zeros();
    let mut samples = Vec::with_capacity(curve.len());
    for (k, p) in curve.samples.iter().enumerate() {
        if k > 0 {
            // trapezoid with endpoint-derivative correction
            pos += (t[k - 1] + t[k]) * (0.5 * h) - (accel(k) - accel(k - 1)) * (h * h / 12.0);
        }
        samples.push(FrenetSampleR3 {
            s: p.s,
            pos,
            t: t[k],
            n: n.as_ref().map(|n| n[k]),
            b: b.as_ref().map(|b| b[k]),
            kappa: p.kappa,
            tau: if n.is_some() { p.tau + shift } else { 0.0 },
        });
    }
    SampledCurveR3 { samples, step: h, max_step_drift: 0.0 }
}

/// ℝ³ partners `(α̃, β̃)` of the generators of `α·β`.
pub fn lift_to_r3(alpha: &SampledCurve, beta: &SampledCurve) -> Result<(SampledCurveR3, SampledCurveR3)> {
    Ok((lift_one(alpha, &left_frame(alpha)?, 1.0), lift_one(beta, &right_frame(beta)?, -1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorsionShift {
    pub alpha: f64,
    pub beta: f64,
}

pub const TORSION_SHIFT: TorsionShift = TorsionShift { alpha: -1.0, beta: 1.0 };

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondencePair {
    pub s3: SurfaceGrid,
    pub s3_report: GeometryReport,
    pub r3: SurfaceGridR3,
    pub r3_report: GeometryReportR3,
    pub torsion_shift: TorsionShift,
}

/// Builds `α·β` and its ℝ³ partner `α̃ + β̃` on identical node sets.
pub fn correspond(alpha: &SampledCurve, beta: &SampledCurve, opts: &SurfaceOptions) -> Result<CorrespondencePair> {
    let s3 = build_surface(alpha, beta, opts)?;
    let s3_report = analyze(&s3);
    let (a, b) = lift_to_r3(alpha, beta)?;
    let (r3, r3_report) = r3_translation_surface(&a, &b, opts)?;
    Ok(CorrespondencePair { s3, s3_report, r3, r3_report, torsion_shift: TORSION_SHIFT })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondenceReport {
    /// `max ‖Ẽ − E‖, ‖F̃ − F‖, ‖G̃ − G‖`.
    pub first_form_deviation: f64,
    /// `max |H̃ − H − F/√(1 − F²)|`.
    pub shift_law_residual: f64,
    pub gauss_deviation: f64,
    /// Recomputed invariants of the partners against `(κ, τ ∓ 1)`.
    pub alpha_kappa_error: f64,
    pub alpha_tau_error: f64,
    pub beta_kappa_error: f64,
    pub beta_tau_error: f64,
    pub s3_h_stdev: f64,
    pub r3_h_stdev: f64,
    pub s3_k_max: f64,
    pub r3_k_max: f64,
    pub notes: Vec<String>,
}

impl CorrespondenceReport {
    /// Both surfaces have constant mean curvature to `tol`.
    pub fn both_cmc(&self, tol: f64) -> bool {
        self.s3_h_stdev <= tol && self.r3_h_stdev <= tol
    }

    pub fn both_flat(&self, tol: f64) -> bool {
        self.s3_k_max <= tol && self.r3_k_max <= tol
    }
}

fn invariant_errors(c: &SampledCurveR3) -> Result<(f64, f64)> {
    if c.len() < 5 {
        return Ok((0.0, 0.0));
    }
    let est = fd_curve_invariants(c)?;
    Ok((est.max_kappa_error(), est.max_tau_error()))
}

/// Checks isometry, the mean-curvature shift law and equality of Gaussian
/// curvatures node by node.
pub fn verify_correspondence(pair: &CorrespondencePair) -> Result<CorrespondenceReport> {
    let (s3, r3) = (&pair.s3_report, &pair.r3_report);
    if (s3.h.rows(), s3.h.cols()) != (r3.h.rows(), r3.h.cols()) || pair.s3.rows_idx != pair.r3.rows_idx {
        return Err(GeomError::ShapeMismatch("surfaces are not sampled on the same nodes".into()));
    }
    let first = [
        s3.forms.g11.max_abs_diff(&r3.forms.g11),
        s3.forms.g12.max_abs_diff(&r3.forms.g12),
        s3.forms.g22.max_abs_diff(&r3.forms.g22),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if first > ISOMETRY_TOL {
        return Err(GeomError::GaugeMismatch { deviation: first });
    }
    let f = &s3.forms.g12;
    let law = Grid::from_fn(f.rows(), f.cols(), |i, j| {
        let c = f.at(i, j);
        r3.h.at(i, j) - s3.h.at(i, j) - c / (1.0 - c * c).sqrt()
    });
    let (ak, at) = invariant_errors(&pair.r3.alpha)?;
    let (bk, bt) = invariant_errors(&pair.r3.beta)?;
    Ok(CorrespondenceReport {
        first_form_deviation: first,
        shift_law_residual: law.max_abs(),
        gauss_deviation: s3.k.max_abs_diff(&r3.k),
        alpha_kappa_error: ak,
        alpha_tau_error: at,
        beta_kappa_error: bk,
        beta_tau_error: bt,
        s3_h_stdev: s3.h.stdev(),
        r3_h_stdev: r3.h.stdev(),
        s3_k_max: s3.k.max_abs(),
        r3_k_max: r3.k.max_abs(),
        notes: NOTES.iter().map(|s| s.to_string()).collect(),
    })
}

fn spec_from_r3(c: &SampledCurveR3, side: Side) -> Result<CurveSpec> {
    let first = c.samples.first().ok_or(GeomError::TooFewSamples { needed: 2, got: 0 })?;
    let last = c.samples.last().unwrap();
    let (s0, s1) = (first.s, last.s);
    if c.samples.iter().all(|p| p.kappa < KAPPA_EPS) {
        return Ok(CurveSpec::great_circle(s0, s1).with_step(c.step));
    }
    if let Some(p) = c.samples.iter().find(|p| p.kappa < KAPPA_EPS) {
        return Err(GeomError::VanishingCurvature { s: p.s, kappa: p.kappa });
    }
    // S³ torsion undoes the shift: τ = τ̃ + 1 for α, τ̃ − 1 for β
    let tau = |p: &FrenetSampleR3| p.tau - side.shift();
    let constant = c
        .samples
        .iter()
        .all(|p| (p.kappa - first.kappa).abs() <= 1e-12 && (tau(p) - tau(first)).abs() <= 1e-12);
    let family = if constant {
        Family::ProperHelix { kappa: first.kappa, tau: tau(first) }
    } else {
        Family::Tabulated {
            table: Table::new(
                c.samples.iter().map(|p| p.s).collect(),
                c.samples.iter().map(|p| p.kappa).collect(),
                c.samples.iter().map(tau).collect(),
            )?,
        }
    };
    Ok(CurveSpec::new(family, s0, s1).with_step(c.step))
}

/// S³ generator specs whose partners are `(α̃, β̃)`.
pub fn reverse_lift(alpha: &SampledCurveR3, beta: &SampledCurveR3) -> Result<(CurveSpec, CurveSpec)> {
    Ok((spec_from_r3(alpha, Side::Left)?, spec_from_r3(beta, Side::Right)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{
        clifford_factor_curve, integrate_frenet_r3, integrate_frenet_s3, integrate_frenet_s3_seeded, CurveSpecR3,
        SeedFrame, SeedFrameR3,
    };
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn helix(k: f64, t: f64, seed: SeedFrame) -> SampledCurve {
        integrate_frenet_s3_seeded(&CurveSpec::proper_helix(k, t, 0.0, 1.0), seed).unwrap()
    }

    #[test]
    fn unit_torsion_lifts_to_planar_circles() {
        let a = helix(1.0, 1.0, SeedFrame::default());
        let b = helix(1.0, -1.0, SeedFrame::rotated_tn(PI / 4.0));
        let (ra, rb) = lift_to_r3(&a, &b).unwrap();
        for c in [&ra, &rb] {
            let est = fd_curve_invariants(c).unwrap();
            assert!(est.kappa.iter().all(|k| (k - 1.0).abs() < 1e-5));
            assert!(est.tau.iter().all(|t| t.unwrap().abs() < 1e-5));
        }
    }

    #[test]
    fn great_circle_lifts_to_line() {
        let a = integrate_frenet_s3(&CurveSpec::great_circle(0.0, 2.0)).unwrap();
        let b = clifford_factor_curve(0.8, 0.6, 0.0, 2.0, 1e-3).unwrap();
        let (ra, rb) = lift_to_r3(&a, &b).unwrap();
        for c in [&ra, &rb] {
            let d = c.samples[1].pos.normalize();
            assert!(c.samples.iter().all(|p| (p.pos - d * p.s).amax() < 1e-10));
        }
    }

    #[test]
    fn clifford_pair_maps_to_plane() {
        let a = integrate_frenet_s3(&CurveSpec::great_circle(0.0, 1.0)).unwrap();
        let b = clifford_factor_curve(3f64.sqrt() / 2.0, 0.5, 0.0, 1.0, 1e-3).unwrap();
        let pair = correspond(&a, &b, &SurfaceOptions::default().with_strides(100, 100)).unwrap();
        let rep = verify_correspondence(&pair).unwrap();
        assert!(pair.r3_report.h.max_abs() < 1e-12);
        assert!(rep.shift_law_residual < 1e-8 && rep.first_form_deviation < 1e-12);
        assert!(rep.both_cmc(1e-8) && rep.both_flat(1e-6));
        let m = correspond(&a, &clifford_factor_curve(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 1.0, 1e-3).unwrap(), &SurfaceOptions::default().with_strides(100, 100)).unwrap();
        assert!(m.s3_report.h.max_abs() < 1e-12 && m.r3_report.h.max_abs() < 1e-12);
    }

    #[test]
    fn helix_pair_shift_law() {
        let a = helix(1.0, 2.0, SeedFrame::default());
        let b = helix(0.6, 0.5, SeedFrame::rotated_tn(PI / 3.0));
        let pair = correspond(&a, &b, &SurfaceOptions::default().with_strides(50, 50)).unwrap();
        let rep = verify_correspondence(&pair).unwrap();
        assert!(rep.first_form_deviation <= 1e-8);
        assert!(rep.shift_law_residual <= 1e-5, "{rep:?}");
        assert!(rep.gauss_deviation <= 1e-5, "{rep:?}");
        assert!(rep.alpha_tau_error < 1e-5 && rep.beta_tau_error < 1e-5, "{rep:?}");
    }

    #[test]
    fn gauge_mismatch_detected() {
        let a = helix(1.0, 2.0, SeedFrame::default());
        let b = helix(0.6, 0.5, SeedFrame::rotated_tn(PI / 3.0));
        let mut pair = correspond(&a, &b, &SurfaceOptions::default().with_strides(50, 50)).unwrap();
        pair.r3_report.forms.g12 = pair.r3_report.forms.g12.map(|f| -f);
        assert!(matches!(verify_correspondence(&pair), Err(GeomError::GaugeMismatch { .. })));
    }

    #[test]
    fn reverse_lift_examples() {
        let helix_r3 = integrate_frenet_r3(&CurveSpecR3::constant(1.0, 1.0, 0.0, 1.0), SeedFrameR3::default()).unwrap();
        let circle = integrate_frenet_r3(&CurveSpecR3::constant(2.0, 0.0, 0.0, 1.0), SeedFrameR3::default()).unwrap();
        let (sa, sb) = reverse_lift(&helix_r3, &circle).unwrap();
        assert_eq!(sa.family, Family::ProperHelix { kappa: 1.0, tau: 2.0 });
        assert_eq!(sb.family, Family::ProperHelix { kappa: 2.0, tau: -1.0 });
        let line = integrate_frenet_r3(&CurveSpecR3::constant(0.0, 0.0, 0.0, 1.0), SeedFrameR3::default()).unwrap();
        let (sl, _) = reverse_lift(&line, &circle).unwrap();
        assert_eq!(sl.family, Family::GreatCircle);
    }

    #[test]
    fn round_trip_reproduces_invariants() {
        let spec = CurveSpecR3 {
            kappa: crate::curve::Profile::Sine { mean: 1.0, amplitude: 0.3, frequency: 2.0 },
            tau: crate::curve::Profile::Linear { start: -0.5, slope: 0.4 },
            s_min: 0.0,
            s_max: 2.0,
            step: 1e-3,
        };
        let a = integrate_frenet_r3(&spec, SeedFrameR3::default()).unwrap();
        let (sa, sb) = reverse_lift(&a, &a).unwrap();
        let (ca, cb) = (integrate_frenet_s3(&sa).unwrap(), integrate_frenet_s3(&sb).unwrap());
        let (la, lb) = lift_to_r3(&ca, &cb).unwrap();
        let orig = fd_curve_invariants(&a).unwrap();
        for l in [la, lb] {
            let est = fd_curve_invariants(&l).unwrap();
            for k in 0..est.kappa.len() {
                assert!((est.kappa[k] - orig.kappa_spec[k]).abs() < 1e-5);
                assert!((est.tau[k].unwrap() - orig.tau_spec[k]).abs() < 1e-5);
            }
        }
    }
}
