//! Translation surfaces `X̃(s, t) = α̃(s) + β̃(t)` in ℝ³.

use nalgebra::Vector3;
use serde::Serialize;

use crate::curve::SampledCurveR3;
use crate::error::{GeomError, RegularityNode, Result};
use crate::forms::{mean_curvature, umbilicity_defect, FormCoeffs, FundForms};
use crate::grid::Grid;
use crate::oracle::{Ambient, PatchSampler};
use crate::quat::Quat;
use crate::surface::SurfaceOptions;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceGridR3 {
    pub alpha: SampledCurveR3,
    pub beta: SampledCurveR3,
    pub rows_idx: Vec<usize>,
    pub cols_idx: Vec<usize>,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub x: Grid<Vector3<f64>>,
    /// `F̃ = ⟨α̃', β̃'⟩`.
    pub metric_f: Grid<f64>,
    pub delta: f64,
}

impl SurfaceGridR3 {
    pub fn rows(&self) -> usize {
        self.rows_idx.len()
    }

    pub fn cols(&self) -> usize {
        self.cols_idx.len()
    }
}

impl PatchSampler for SurfaceGridR3 {
    fn ambient(&self) -> Ambient {
        Ambient::EuclideanR3
    }

    fn native_shape(&self) -> (usize, usize) {
        (self.alpha.len(), self.beta.len())
    }

    fn steps(&self) -> (f64, f64) {
        (self.alpha.step, self.beta.step)
    }

    fn point(&self, i: usize, j: usize) -> Quat {
        Quat::pure(self.alpha.samples[i].pos + self.beta.samples[j].pos)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReportR3 {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub forms: FundForms,
    pub h: Grid<f64>,
    /// Gaussian curvature (equal to the extrinsic one in ℝ³).
    pub k: Grid<f64>,
    pub umbilicity: Grid<f64>,
    /// `Ñ = α̃' × β̃' / √(1 − F̃²)`.
    pub normals: Grid<Vector3<f64>>,
}

pub fn build_surface_r3(alpha: &SampledCurveR3, beta: &SampledCurveR3, opts: &SurfaceOptions) -> Result<SurfaceGridR3> {
    let rows_idx = SurfaceOptions::indices(alpha.len(), opts.stride_s, opts.s_range);
    let cols_idx = SurfaceOptions::indices(beta.len(), opts.stride_t, opts.t_range);
    if rows_idx.is_empty() || cols_idx.is_empty() {
        return Err(GeomError::InvalidSpec("empty surface grid".into()));
    }
    let metric_f = Grid::from_fn(rows_idx.len(), cols_idx.len(), |i, j| {
        alpha.samples[rows_idx[i]].t.dot(&beta.samples[cols_idx[j]].t)
    });
    let nodes: Vec<RegularityNode> = metric_f
        .indexed()
        .filter(|(_, f)| f.abs() > 1.0 - opts.delta)
        .map(|((i, j), f)| RegularityNode {
            i: rows_idx[i],
            j: cols_idx[j],
            s: alpha.samples[rows_idx[i]].s,
            t: beta.samples[cols_idx[j]].s,
            frame_product: *f,
        })
        .collect();
    if !nodes.is_empty() {
        return Err(GeomError::RegularityViolation { nodes });
    }
    let x = Grid::from_fn(rows_idx.len(), cols_idx.len(), |i, j| {
        alpha.samples[rows_idx[i]].pos + beta.samples[cols_idx[j]].pos
    });
    Ok(SurfaceGridR3 {
        s: rows_idx.iter().map(|&i| alpha.samples[i].s).collect(),
        t: cols_idx.iter().map(|&j| beta.samples[j].s).collect(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        rows_idx,
        cols_idx,
        x,
        metric_f,
        delta: opts.delta,
    })
}

/// Closed-form normal and fundamental forms: `Ẽ = G̃ = 1`, `f̃ = 0`,
/// `ẽ = ⟨α̃'', Ñ⟩`, `g̃ = ⟨β̃'', Ñ⟩`.
pub fn analyze_r3(grid: &SurfaceGridR3) -> GeometryReportR3 {
    let (r, c) = (grid.rows(), grid.cols());
    let normals = Grid::from_fn(r, c, |i, j| {
        let f = grid.metric_f.at(i, j);
        let ta = grid.alpha.samples[grid.rows_idx[i]].t;
        let tb = grid.beta.samples[grid.cols_idx[j]].t;
        ta.cross(&tb) / (1.0 - f * f).sqrt()
    });
    let forms = FundForms::from_fn(r, c, |i, j| {
        let n = normals.at(i, j);
        FormCoeffs {
            g11: 1.0,
            g12: grid.metric_f.at(i, j),
            g22: 1.0,
            h11: grid.alpha.acceleration(grid.rows_idx[i]).dot(&n),
            h12: 0.0,
            h22: grid.beta.acceleration(grid.cols_idx[j]).dot(&n),
        }
    });
    let k = Grid::from_fn(r, c, |i, j| forms.at(i, j).extrinsic_curvature());
    GeometryReportR3 {
        s: grid.s.clone(),
        t: grid.t.clone(),
        h: mean_curvature(&forms),
        umbilicity: umbilicity_defect(&forms),
        k,
        normals,
        forms,
    }
}

/// Builds the ℝ³ translation surface and evaluates its closed-form geometry.
pub fn r3_translation_surface(
    alpha: &SampledCurveR3,
    beta: &SampledCurveR3,
    opts: &SurfaceOptions,
) -> Result<(SurfaceGridR3, GeometryReportR3)> {
    let g = build_surface_r3(alpha, beta, opts)?;
    let r = analyze_r3(&g);
    Ok((g, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{integrate_frenet_r3, CurveSpecR3, SeedFrameR3};
    use crate::oracle::fd_fundamental_forms;

    fn seed(t: Vector3<f64>, n: Vector3<f64>) -> SeedFrameR3 {
        SeedFrameR3 { origin: Vector3::zeros(), t, n, b: t.cross(&n) }
    }

    #[test]
    fn orthogonal_lines_make_a_plane() {
        let a = integrate_frenet_r3(&CurveSpecR3::constant(0.0, 0.0, 0.0, 1.0), SeedFrameR3::default()).unwrap();
        let b = integrate_frenet_r3(&CurveSpecR3::constant(0.0, 0.0, 0.0, 1.0), seed(Vector3::y(), Vector3::z())).unwrap();
        let (_, r) = r3_translation_surface(&a, &b, &SurfaceOptions::default().with_strides(100, 100)).unwrap();
        assert!(r.h.max_abs() == 0.0 && r.k.max_abs() == 0.0);
    }

    #[test]
    fn line_and_circle_make_a_cylinder() {
        let a = integrate_frenet_r3(&CurveSpecR3::constant(0.0, 0.0, 0.0, 1.0), seed(Vector3::z(), Vector3::x())).unwrap();
        let b = integrate_frenet_r3(&CurveSpecR3::constant(2.0, 0.0, 0.0, 3.0), SeedFrameR3::default()).unwrap();
        let (_, r) = r3_translation_surface(&a, &b, &SurfaceOptions::default().with_strides(50, 50)).unwrap();
        assert!(r.k.max_abs() < 1e-12);
        assert!(r.h.iter().all(|h| (h.abs() - 1.0).abs() < 1e-10));
    }

    #[test]
    fn closed_forms_match_oracle() {
        let a = integrate_frenet_r3(&CurveSpecR3::constant(1.0, 0.5, 0.0, 0.5), SeedFrameR3::default()).unwrap();
        let b = integrate_frenet_r3(&CurveSpecR3::constant(0.8, -1.0, 0.0, 0.5), seed(Vector3::y(), Vector3::z())).unwrap();
        let (g, r) = r3_translation_surface(&a, &b, &SurfaceOptions::default().with_strides(25, 25)).unwrap();
        let align = r.normals.map(|n| Quat::pure(*n));
        let o = fd_fundamental_forms(&g, &g.rows_idx, &g.cols_idx, 1, Some(&align)).unwrap();
        for (oi, &gi) in o.rows_at.iter().enumerate() {
            for (oj, &gj) in o.cols_at.iter().enumerate() {
                assert!((o.h.at(oi, oj) - r.h.at(gi, gj)).abs() < 1e-5);
                assert!((o.k_ext.at(oi, oj) - r.k.at(gi, gj)).abs() < 1e-5);
                assert!(o.forms.h12.at(oi, oj).abs() < 1e-5);
            }
        }
    }
}
