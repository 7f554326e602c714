//! Arc-length curves in ℝ³ with the classical Frenet equations.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::spec::{CurveSpecR3, KAPPA_EPS};
use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetSampleR3 {
    pub s: f64,
    pub pos: Vector3<f64>,
    pub t: Vector3<f64>,
    /// `None` on straight lines.
    pub n: Option<Vector3<f64>>,
    pub b: Option<Vector3<f64>>,
    pub kappa: f64,
    pub tau: f64,
}

/// Orthonormal, positively oriented seed `(t, n, b)` at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeedFrameR3 {
    pub origin: Vector3<f64>,
    pub t: Vector3<f64>,
    pub n: Vector3<f64>,
    pub b: Vector3<f64>,
}

impl Default for SeedFrameR3 {
    fn default() -> Self {
        Self { origin: Vector3::zeros(), t: Vector3::x(), n: Vector3::y(), b: Vector3::z() }
    }
}

impl SeedFrameR3 {
    pub fn validate(&self) -> Result<()> {
        let m = Matrix3::from_columns(&[self.t, self.n, self.b]);
        let defect = (m.transpose() * m - Matrix3::identity()).abs().max();
        if defect > 1e-9 || m.determinant() <= 0.0 {
            return Err(GeomError::BadSeedFrame { defect });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledCurveR3 {
    pub samples: Vec<FrenetSampleR3>,
    pub step: f64,
    /// Largest orthonormality drift of a single RK4 step, before re-projection.
    pub max_step_drift: f64,
}

impl SampledCurveR3 {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_framed(&self) -> bool {
        self.samples.iter().all(|p| p.n.is_some())
    }

    /// Second derivative `κ n` of the position (zero on lines).
    pub fn acceleration(&self, k: usize) -> Vector3<f64> {
        let p = &self.samples[k];
        p.n.map(|n| n * p.kappa).unwrap_or_else(Vector3::zeros)
    }
}

type FrameR3 = [Vector3<f64>; 4];

fn rhs(f: &FrameR3, kappa: f64, tau: f64) -> FrameR3 {
    let [_, t, n, b] = *f;
    [t, n * kappa, b * tau - t * kappa, -n * tau]
}

fn axpy(f: &FrameR3, k: &FrameR3, h: f64) -> FrameR3 {
    [f[0] + k[0] * h, f[1] + k[1] * h, f[2] + k[2] * h, f[3] + k[3] * h]
}

fn defect(f: &FrameR3) -> f64 {
    let m = Matrix3::from_columns(&[f[1], f[2], f[3]]);
    (m.transpose() * m - Matrix3::identity()).abs().max()
}

fn reorthonormalize(f: &mut FrameR3) {
    f[1] = f[1].normalize();
    f[2] = (f[2] - f[1] * f[1].dot(&f[2])).normalize();
    f[3] = f[3] - f[1] * f[1].dot(&f[3]);
    f[3] = (f[3] - f[2] * f[2].dot(&f[3])).normalize();
}

/// RK4 + Gram–Schmidt integration of `x' = t, t' = κn, n' = −κt + τb, b' = −τn`.
///
/// A curve with `κ ≡ 0` is a straight line and carries no normal; a curve
/// whose curvature vanishes only somewhere is rejected.
pub fn integrate_frenet_r3(spec: &CurveSpecR3, seed: SeedFrameR3) -> Result<SampledCurveR3> {
    spec.validate()?;
    seed.validate()?;
    let n = spec.node_count();
    let h = spec.step;
    let s_at = |i: usize| spec.s_min + i as f64 * h;
    let inv = |s: f64| (spec.kappa.eval(s), spec.tau.eval(s));

    let small: Vec<bool> = (0..n).map(|i| inv(s_at(i)).0 < KAPPA_EPS).collect();
    let line = small.iter().all(|x| *x);
    if !line {
        if let Some(i) = small.iter().position(|x| *x) {
            return Err(GeomError::VanishingCurvature { s: s_at(i), kappa: inv(s_at(i)).0 });
        }
    }

    let mut frame: FrameR3 = [seed.origin, seed.t, seed.n, seed.b];
    let mut samples = Vec::with_capacity(n);
    let mut max_step_drift = 0.0f64;
    for i in 0..n {
        let s = s_at(i);
        let (kappa, tau) = inv(s);
        samples.push(FrenetSampleR3 {
            s,
            pos: frame[0],
            t: frame[1],
            n: (!line).then_some(frame[2]),
            b: (!line).then_some(frame[3]),
            kappa: if line { 0.0 } else { kappa },
            tau: if line { 0.0 } else { tau },
        });
        if i + 1 < n {
            let (k0, t0) = inv(s);
            let (km, tm) = inv(s + 0.5 * h);
            let (k1, t1) = inv(s + h);
            let d1 = rhs(&frame, k0, t0);
            let d2 = rhs(&axpy(&frame, &d1, 0.5 * h), km, tm);
            let d3 = rhs(&axpy(&frame, &d2, 0.5 * h), km, tm);
            let d4 = rhs(&axpy(&frame, &d3, h), k1, t1);
            for c in 0..4 {
                frame[c] += (d1[c] + d2[c] * 2.0 + d3[c] * 2.0 + d4[c]) * (h / 6.0);
            }
            max_step_drift = max_step_drift.max(defect(&frame));
            reorthonormalize(&mut frame);
        }
    }
    Ok(SampledCurveR3 { samples, step: h, max_step_drift })
}
