//! Left and right quaternionic frames of a curve in S³.
//!
//! The left frame `T = ᾱ·t, N = ᾱ·n, B = ᾱ·b` and the right frame
//! `T̂ = α·t̄, N̂ = α·n̄, B̂ = α·b̄` live in the sphere 𝒮 of pure unit
//! quaternions. They satisfy Frenet equations with torsion shifted to
//! `τ − 1` (left) and `τ + 1` (right).

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::Serialize;

use crate::curve::SampledCurve;
use crate::error::{GeomError, Result};
use crate::quat::{PureUnit, Quat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Torsion shift of the frame equations: `−1` for left, `+1` for right.
    pub fn shift(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }

    fn apply(self, alpha: Quat, x: Quat) -> Quat {
        match self {
            Side::Left => alpha.conj() * x,
            Side::Right => alpha * x.conj(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuatFrameSamples {
    pub side: Side,
    pub s: Vec<f64>,
    pub t: Vec<PureUnit>,
    /// `None` for geodesics.
    pub n: Option<Vec<PureUnit>>,
    pub b: Option<Vec<PureUnit>>,
    /// Largest `|w|` of the raw products before projection to 𝒮.
    pub max_real_part: f64,
    /// Largest `|‖·‖ − 1|` of the raw products.
    pub max_norm_defect: f64,
}

impl QuatFrameSamples {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn n(&self) -> Result<&[PureUnit]> {
        self.n.as_deref().ok_or(GeomError::MissingFrame)
    }

    pub fn b(&self) -> Result<&[PureUnit]> {
        self.b.as_deref().ok_or(GeomError::MissingFrame)
    }

    /// Largest deviation of `{T, N, B}` from an orthonormal triple.
    pub fn orthonormality_defect(&self) -> Result<f64> {
        let (n, b) = (self.n()?, self.b()?);
        let mut d = 0.0f64;
        for k in 0..self.len() {
            let v = [self.t[k].vec(), n[k].vec(), b[k].vec()];
            for a in 0..3 {
                for c in 0..3 {
                    let target = if a == c { 1.0 } else { 0.0 };
                    d = d.max((v[a].dot(&v[c]) - target).abs());
                }
            }
        }
        Ok(d)
    }

    /// Sign of `det(T, N, B)` as vectors of ℝ³ at the first node.
    pub fn orientation(&self) -> Result<f64> {
        let (n, b) = (self.n()?, self.b()?);
        Ok(self.t[0].vec().cross(&n[0].vec()).dot(&b[0].vec()).signum())
    }
}

fn build(curve: &SampledCurve, side: Side) -> Result<QuatFrameSamples> {
    let framed = curve.is_framed();
    let mut max_real_part = 0.0f64;
    let mut max_norm_defect = 0.0f64;
    let mut lift = |alpha: Quat, x: Quat| -> Result<PureUnit> {
        let q = side.apply(alpha, x);
        max_real_part = max_real_part.max(q.w.abs());
        max_norm_defect = max_norm_defect.max((q.norm() - 1.0).abs());
        PureUnit::new(q)
    };
    let mut t = Vec::with_capacity(curve.len());
    let mut n = Vec::new();
    let mut b = Vec::new();
    for p in &curve.samples {
        let a = p.position();
        t.push(lift(a, p.t)?);
        if framed {
            n.push(lift(a, p.n.ok_or(GeomError::MissingFrame)?)?);
            b.push(lift(a, p.b.ok_or(GeomError::MissingFrame)?)?);
        }
    }
    Ok(QuatFrameSamples {
        side,
        s: curve.s_values(),
        t,
        n: framed.then_some(n),
        b: framed.then_some(b),
        max_real_part,
        max_norm_defect,
    })
}

pub fn left_frame(curve: &SampledCurve) -> Result<QuatFrameSamples> {
    build(curve, Side::Left)
}

pub fn right_frame(curve: &SampledCurve) -> Result<QuatFrameSamples> {
    build(curve, Side::Right)
}

/// Max-norm residuals of the product identities of both frames:
///
/// ```text
/// T = b̄·n    N = t̄·b    B = n̄·t
/// T̂ = −b·n̄  N̂ = −t·b̄  B̂ = −n·t̄
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FrameIdentityResiduals {
    pub left_t: f64,
    pub left_n: f64,
    pub left_b: f64,
    pub right_t: f64,
    pub right_n: f64,
    pub right_b: f64,
}

impl FrameIdentityResiduals {
    pub fn max(&self) -> f64 {
        [self.left_t, self.left_n, self.left_b, self.right_t, self.right_n, self.right_b]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Checks the product identities using the curve's own `(t, n, b)` and the
/// frames recomputed from it.
pub fn frame_identity_residuals(curve: &SampledCurve) -> Result<FrameIdentityResiduals> {
    let left = left_frame(curve)?;
    let right = right_frame(curve)?;
    let (ln, lb, rn, rb) = (left.n()?, left.b()?, right.n()?, right.b()?);
    let mut r = FrameIdentityResiduals::default();
    for (k, p) in curve.samples.iter().enumerate() {
        let (t, n, b) = (p.t, p.n.ok_or(GeomError::MissingFrame)?, p.b.ok_or(GeomError::MissingFrame)?);
        let upd = |m: &mut f64, a: Quat, want: PureUnit| *m = m.max((a - want.quat()).max_abs());
        upd(&mut r.left_t, b.conj() * n, left.t[k]);
        upd(&mut r.left_n, t.conj() * b, ln[k]);
        upd(&mut r.left_b, n.conj() * t, lb[k]);
        upd(&mut r.right_t, -(b * n.conj()), right.t[k]);
        upd(&mut r.right_n, -(t * b.conj()), rn[k]);
        upd(&mut r.right_b, -(n * t.conj()), rb[k]);
    }
    Ok(r)
}

/// Max-norm residuals over interior nodes of
///
/// ```text
/// T' = κ N
/// N' = −κ T + (τ ∓ 1) B
/// B' = −(τ ∓ 1) N
/// ```
///
/// with derivatives taken by central differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameOdeResiduals {
    pub side: Side,
    pub t: f64,
    pub n: f64,
    pub b: f64,
    /// `max ‖B(s) − B(s₀)‖∞`, zero exactly when the binormal field is constant.
    pub b_variation: f64,
}

impl FrameOdeResiduals {
    pub fn max(&self) -> f64 {
        self.t.max(self.n).max(self.b)
    }
}

pub fn frame_ode_residuals(curve: &SampledCurve, frames: &QuatFrameSamples) -> Result<FrameOdeResiduals> {
    let m = frames.len();
    if m < 3 {
        return Err(GeomError::TooFewSamples { needed: 3, got: m });
    }
    let (n, b) = (frames.n()?, frames.b()?);
    let h = curve.step();
    let shift = frames.side.shift();
    let d = |v: &[PureUnit], k: usize| (v[k + 1].quat() - v[k - 1].quat()) / (2.0 * h);
    let mut r = FrameOdeResiduals { side: frames.side, t: 0.0, n: 0.0, b: 0.0, b_variation: 0.0 };
    for k in 1..m - 1 {
        let p = &curve.samples[k];
        let sigma = p.tau + shift;
        let (tk, nk, bk) = (frames.t[k].quat(), n[k].quat(), b[k].quat());
        r.t = r.t.max((d(&frames.t, k) - nk * p.kappa).max_abs());
        r.n = r.n.max((d(n, k) - (tk * -p.kappa + bk * sigma)).max_abs());
        r.b = r.b.max((d(b, k) + nk * sigma).max_abs());
    }
    r.b_variation = b.iter().map(|x| (x.quat() - b[0].quat()).max_abs()).fold(0.0, f64::max);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TraceShape {
    GreatCircle,
    SmallCircle,
    /// The geodesic curvature of the trace is not constant.
    NotCircle,
}

/// Geometry of the `T`-trace as a curve on the unit sphere 𝒮.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceGeometry {
    pub side: Side,
    /// Arc-length parameters of the interior nodes where `κ̂` is estimated.
    pub s: Vec<f64>,
    /// Trace arc length `ŝ = ∫κ ds` on the same nodes, from the first one.
    pub s_hat: Vec<f64>,
    /// Geodesic curvature of the trace, measured against the frame's orientation.
    pub kappa_hat: Vec<f64>,
    /// Fitted pole of the `T`-trace, oriented so that `⟨B, u⟩ ≥ 0` on average.
    pub pole: PureUnit,
    pub cos_t_pole: Vec<f64>,
    pub cos_b_pole: Vec<f64>,
    /// Fitted pole of the `B`-trace (the mean of `B` when `B` is constant).
    pub b_pole: PureUnit,
    /// `1 − |⟨u_T, u_B⟩|`.
    pub coaxiality_defect: f64,
    pub shape: TraceShape,
}

fn spread(v: &[f64]) -> f64 {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

impl TraceGeometry {
    pub fn kappa_hat_mean(&self) -> f64 {
        mean(&self.kappa_hat)
    }

    pub fn kappa_hat_spread(&self) -> f64 {
        spread(&self.kappa_hat)
    }

    pub fn cos_t_spread(&self) -> f64 {
        spread(&self.cos_t_pole)
    }

    pub fn cos_b_spread(&self) -> f64 {
        spread(&self.cos_b_pole)
    }

    /// `⟨B, u⟩ / ⟨T, u⟩` from the mean cosines.
    pub fn cone_ratio(&self) -> f64 {
        mean(&self.cos_b_pole) / mean(&self.cos_t_pole)
    }
}

const CIRCLE_TOL: f64 = 1e-4;
const POINT_TOL: f64 = 1e-8;

/// Unit normal of the least-squares plane through `pts`; `None` when the
/// points do not span a plane's worth of directions.
fn plane_normal(pts: &[Vector3<f64>]) -> Option<Vector3<f64>> {
    let c = pts.iter().sum::<Vector3<f64>>() / pts.len() as f64;
    let mut cov = Matrix3::zeros();
    for p in pts {
        let d = p - c;
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov / pts.len() as f64);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    if eig.eigenvalues[idx[1]] < POINT_TOL * POINT_TOL {
        return None;
    }
    Some(eig.eigenvectors.column(idx[0]).normalize())
}

/// Curvature and pole of the `T`-trace of a non-geodesic curve.
///
/// A trace whose geodesic curvature vanishes identically (`τ ≡ 1` on the
/// left, `τ ≡ −1` on the right) is a great circle with pole `±B`.
pub fn trace_geometry(frames: &QuatFrameSamples, curve: &SampledCurve) -> Result<TraceGeometry> {
    let m = frames.len();
    if m < 5 {
        return Err(GeomError::TooFewSamples { needed: 5, got: m });
    }
    let b = frames.b()?;
    let orient = frames.orientation()?;
    let h = curve.step();
    let tv: Vec<Vector3<f64>> = frames.t.iter().map(|x| x.vec()).collect();
    let bv: Vec<Vector3<f64>> = b.iter().map(|x| x.vec()).collect();

    let mut s = Vec::new();
    let mut kappa_hat = Vec::new();
    for k in 1..m - 1 {
        let d1 = (tv[k + 1] - tv[k - 1]) / (2.0 * h);
        let d2 = (tv[k + 1] - tv[k] * 2.0 + tv[k - 1]) / (h * h);
        let speed = d1.norm();
        if speed < POINT_TOL {
            return Err(GeomError::DegenerateTrace(format!("T-trace is stationary at s = {}", curve.samples[k].s)));
        }
        s.push(curve.samples[k].s);
        kappa_hat.push(orient * tv[k].cross(&d1).dot(&d2) / speed.powi(3));
    }
    let mut s_hat = vec![0.0];
    for k in 2..m - 1 {
        let (a, c) = (&curve.samples[k - 1], &curve.samples[k]);
        s_hat.push(s_hat.last().unwrap() + 0.5 * (a.kappa + c.kappa) * (c.s - a.s));
    }

    let b_mean = bv.iter().sum::<Vector3<f64>>() / m as f64;
    let b_pole = match plane_normal(&bv) {
        Some(u) => u,
        None => b_mean.normalize(),
    };
    let mut pole = plane_normal(&tv).ok_or_else(|| GeomError::DegenerateTrace("T-trace is a point".into()))?;
    if pole.dot(&b_mean) < 0.0 {
        pole = -pole;
    }
    let b_pole = if b_pole.dot(&pole) < 0.0 { -b_pole } else { b_pole };
    let interior = 1..m - 1;
    let cos_t_pole: Vec<f64> = tv[interior.clone()].iter().map(|x| x.dot(&pole)).collect();
    let cos_b_pole: Vec<f64> = bv[interior].iter().map(|x| x.dot(&pole)).collect();

    let shape = if spread(&kappa_hat) > CIRCLE_TOL {
        TraceShape::NotCircle
    } else if mean(&kappa_hat).abs() <= CIRCLE_TOL {
        TraceShape::GreatCircle
    } else {
        TraceShape::SmallCircle
    };
    Ok(TraceGeometry {
        side: frames.side,
        s,
        s_hat,
        kappa_hat,
        pole: PureUnit::from_vec(pole)?,
        cos_t_pole,
        cos_b_pole,
        b_pole: PureUnit::from_vec(b_pole)?,
        coaxiality_defect: 1.0 - pole.dot(&b_pole).abs(),
        shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{integrate_frenet_s3, CurveSpec, HelixSign, Profile};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn helix(k: f64, t: f64) -> SampledCurve {
        integrate_frenet_s3(&CurveSpec::proper_helix(k, t, 0.0, 4.0)).unwrap()
    }

    #[test]
    fn gauge_node_frames() {
        let c = helix(1.0, 2.0);
        let l = left_frame(&c).unwrap();
        assert!((l.t[0].quat() - Quat::I).max_abs() < 1e-15);
        assert!((l.n().unwrap()[0].quat() - Quat::J).max_abs() < 1e-15);
        assert!((l.b().unwrap()[0].quat() - Quat::K).max_abs() < 1e-15);
        let r = right_frame(&c).unwrap();
        assert!((r.t[0].quat() + Quat::I).max_abs() < 1e-15);
        assert!((Quat::K.conj() * Quat::J - Quat::I).max_abs() < 1e-15);
    }

    #[test]
    fn great_circle_frames() {
        let c = integrate_frenet_s3(&CurveSpec::great_circle(0.0, 3.0)).unwrap();
        for fr in [left_frame(&c).unwrap(), right_frame(&c).unwrap()] {
            assert!(fr.n.is_none());
            let t0 = fr.t[0].quat();
            assert!(fr.t.iter().all(|x| (x.quat() - t0).max_abs() < 1e-8));
            assert!(matches!(fr.b(), Err(GeomError::MissingFrame)));
        }
        assert!((left_frame(&c).unwrap().t[0].quat() - Quat::I).max_abs() < 1e-15);
        assert!(matches!(frame_identity_residuals(&c), Err(GeomError::MissingFrame)));
    }

    #[test]
    fn identities_hold_on_helix() {
        let c = helix(1.0, 2.0);
        assert!(frame_identity_residuals(&c).unwrap().max() <= 1e-10);
    }

    #[test]
    fn frames_orthonormal_and_oriented() {
        let c = helix(0.7, -1.3);
        let l = left_frame(&c).unwrap();
        let r = right_frame(&c).unwrap();
        assert!(l.orthonormality_defect().unwrap() < 1e-9);
        assert!(r.orthonormality_defect().unwrap() < 1e-9);
        assert!(l.max_real_part < 1e-10 && r.max_real_part < 1e-10);
        assert_eq!(l.orientation().unwrap(), 1.0);
        assert_eq!(r.orientation().unwrap(), -1.0);
    }

    #[test]
    fn unit_torsion_fixes_binormal() {
        let c = helix(1.0, 1.0);
        let r = frame_ode_residuals(&c, &left_frame(&c).unwrap()).unwrap();
        assert!(r.b <= 1e-6 && r.b_variation < 1e-8, "{r:?}");
        let c = helix(1.0, -1.0);
        let r = frame_ode_residuals(&c, &right_frame(&c).unwrap()).unwrap();
        assert!(r.b <= 1e-6 && r.b_variation < 1e-8, "{r:?}");
    }

    #[test]
    fn shifted_ode_residuals() {
        let spec = CurveSpec::general_helix(0.5, HelixSign::Plus, Profile::Sine { mean: 1.0, amplitude: 0.3, frequency: 2.0 }, 0.0, 3.0);
        let c = integrate_frenet_s3(&spec).unwrap();
        for fr in [left_frame(&c).unwrap(), right_frame(&c).unwrap()] {
            assert!(frame_ode_residuals(&c, &fr).unwrap().max() <= 1e-5);
        }
    }

    #[test]
    fn general_helix_trace_is_small_circle() {
        let spec = CurveSpec::general_helix(2.0, HelixSign::Plus, Profile::constant(1.0), 0.0, 6.0);
        let c = integrate_frenet_s3(&spec).unwrap();
        let g = trace_geometry(&left_frame(&c).unwrap(), &c).unwrap();
        assert_eq!(g.shape, TraceShape::SmallCircle);
        assert!((g.kappa_hat_mean() - 2.0).abs() < 1e-5);
        assert!(g.kappa_hat_spread() < 1e-5);
        assert!(g.cos_t_spread() < 1e-6 && g.cos_b_spread() < 1e-6);
        assert!((g.cone_ratio() - 0.5).abs() < 1e-4);
        assert!(g.coaxiality_defect < 1e-4);
        let want = (Quat::I * 2.0 + Quat::K) / 5f64.sqrt();
        assert!((g.pole.quat() - want).max_abs() < 1e-6);
    }

    #[test]
    fn unit_torsion_trace_is_great_circle() {
        let c = helix(1.0, 1.0);
        let g = trace_geometry(&left_frame(&c).unwrap(), &c).unwrap();
        assert_eq!(g.shape, TraceShape::GreatCircle);
        assert!(g.kappa_hat.iter().all(|k| k.abs() < 1e-5));
        assert!((g.pole.quat() - Quat::K).max_abs() < 1e-8);
        assert!(g.coaxiality_defect < 1e-8);
    }

    #[test]
    fn right_trace_uses_plus_shift() {
        let c = helix(FRAC_1_SQRT_2, 1.0);
        let g = trace_geometry(&right_frame(&c).unwrap(), &c).unwrap();
        assert!((g.kappa_hat_mean() - 2.0 / FRAC_1_SQRT_2).abs() < 1e-5);
    }
}
