//! Finite-difference recovery of curvature and torsion from sampled frames.
//!
//! The normal and binormal are rebuilt from `t'` alone, so the estimates do
//! not depend on the `n`, `b` the integrator stored.

use nalgebra::{Matrix4, Vector3};
use serde::Serialize;

use super::r3::SampledCurveR3;
use super::s3::SampledCurve;
use crate::error::{GeomError, Result};
use crate::quat::Quat;

/// Estimates on nodes `2..len−2` (a full two-level central stencil).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantEstimates {
    pub s: Vec<f64>,
    pub kappa: Vec<f64>,
    /// `None` where the estimated curvature is too small to define a normal.
    pub tau: Vec<Option<f64>>,
    /// Prescribed values on the same nodes, for comparison.
    pub kappa_spec: Vec<f64>,
    pub tau_spec: Vec<f64>,
}

impl InvariantEstimates {
    pub fn max_kappa_error(&self) -> f64 {
        self.kappa.iter().zip(&self.kappa_spec).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest torsion error over nodes where the estimate exists.
    pub fn max_tau_error(&self) -> f64 {
        self.tau
            .iter()
            .zip(&self.tau_spec)
            .filter_map(|(a, b)| a.map(|a| (a - b).abs()))
            .fold(0.0f64, f64::max)
    }
}

const NORMAL_EPS: f64 = 1e-6;

pub trait FdInvariants {
    fn fd_invariants(&self) -> Result<InvariantEstimates>;
}

/// Recovers `κ̂`, `τ̂` from a sampled curve by central differences.
pub fn fd_curve_invariants<C: FdInvariants + ?Sized>(curve: &C) -> Result<InvariantEstimates> {
    curve.fd_invariants()
}

/// Unit vector completing orthonormal `(a, b, c)` so that `det(a, b, c, d) > 0`.
pub(crate) fn complete_positive(a: Quat, b: Quat, c: Quat) -> Quat {
    let mut d = [0.0; 4];
    for (k, dk) in d.iter_mut().enumerate() {
        let e = Quat::basis(k);
        let cols = [a, b, c, e];
        *dk = Matrix4::from_fn(|r, col| cols[col].to_array()[r]).determinant();
    }
    Quat::from_array(d).normalize()
}

impl FdInvariants for SampledCurve {
    fn fd_invariants(&self) -> Result<InvariantEstimates> {
        let m = self.samples.len();
        if m < 5 {
            return Err(GeomError::TooFewSamples { needed: 5, got: m });
        }
        let h = self.step();
        let p = &self.samples;
        // κ = |t' + α|, n = (t' + α)/κ, b completes a positive frame
        let mut kappa = vec![0.0; m];
        let mut normal: Vec<Option<Quat>> = vec![None; m];
        let mut binormal: Vec<Option<Quat>> = vec![None; m];
        for i in 1..m - 1 {
            let dt = (p[i + 1].t - p[i - 1].t) / (2.0 * h);
            let acc = dt + p[i].position();
            let k = acc.norm();
            kappa[i] = k;
            if k > NORMAL_EPS {
                let n = acc / k;
                normal[i] = Some(n);
                binormal[i] = Some(complete_positive(p[i].position(), p[i].t, n));
            }
        }
        let mut out = InvariantEstimates {
            s: Vec::new(),
            kappa: Vec::new(),
            tau: Vec::new(),
            kappa_spec: Vec::new(),
            tau_spec: Vec::new(),
        };
        for i in 2..m - 2 {
            out.s.push(p[i].s);
            out.kappa.push(kappa[i]);
            out.kappa_spec.push(p[i].kappa);
            out.tau_spec.push(p[i].tau);
            let tau = match (binormal[i - 1], binormal[i + 1], normal[i]) {
                (Some(bm), Some(bp), Some(n)) => Some(-((bp - bm) / (2.0 * h)).dot(n)),
                _ => None,
            };
            out.tau.push(tau);
        }
        Ok(out)
    }
}

impl FdInvariants for SampledCurveR3 {
    fn fd_invariants(&self) -> Result<InvariantEstimates> {
        let m = self.samples.len();
        if m < 5 {
            return Err(GeomError::TooFewSamples { needed: 5, got: m });
        }
        let h = self.step;
        let p = &self.samples;
        let mut kappa = vec![0.0; m];
        let mut normal: Vec<Option<Vector3<f64>>> = vec![None; m];
        let mut binormal: Vec<Option<Vector3<f64>>> = vec![None; m];
        for i in 1..m - 1 {
            let dt = (p[i + 1].t - p[i - 1].t) / (2.0 * h);
            let k = dt.norm();
            kappa[i] = k;
            if k > NORMAL_EPS {
                let n = dt / k;
                normal[i] = Some(n);
                binormal[i] = Some(p[i].t.cross(&n).normalize());
            }
        }
        let mut out = InvariantEstimates {
            s: Vec::new(),
            kappa: Vec::new(),
            tau: Vec::new(),
            kappa_spec: Vec::new(),
            tau_spec: Vec::new(),
        };
        for i in 2..m - 2 {
            out.s.push(p[i].s);
            out.kappa.push(kappa[i]);
            out.kappa_spec.push(p[i].kappa);
            out.tau_spec.push(p[i].tau);
            let tau = match (binormal[i - 1], binormal[i + 1], normal[i]) {
                (Some(bm), Some(bp), Some(n)) => Some(-((bp - bm) / (2.0 * h)).dot(&n)),
                _ => None,
            };
            out.tau.push(tau);
        }
        Ok(out)
    }
}
