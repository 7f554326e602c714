//! Translation surfaces `X(s, t) = α(s)·β(t)` in S³ and their closed-form geometry.
//!
//! `α` carries its left frame and `β` its right frame. With the frame product
//! `P = ⟨T_α, T̂_β⟩` the closed forms are
//!
//! ```text
//! E = G = 1,   F = ⟨X_s, X_t⟩ = −P
//! N = (α'·β' − P α·β) / √(1 − P²)
//! e = κ_α⟨B_α, T̂_β⟩ / √(1 − P²)
//! f = √(1 − P²)
//! g = −κ_β⟨T_α, B̂_β⟩ / √(1 − P²)
//! ```

use serde::Serialize;

use crate::curve::SampledCurve;
use crate::error::{GeomError, RegularityNode, Result};
use crate::forms::{gauss_curvature, mean_curvature, umbilicity_defect, FormCoeffs, FundForms};
use crate::frame::{left_frame, right_frame, QuatFrameSamples};
use crate::grid::Grid;
use crate::quat::Quat;

pub const DEFAULT_DELTA: f64 = 1e-3;

/// Which native nodes of the generating curves make up the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceOptions {
    /// Regularity margin: nodes with `|P| > 1 − δ` are rejected.
    pub delta: f64,
    pub stride_s: usize,
    pub stride_t: usize,
    /// Half-open native index window `[start, end)` along `α`.
    pub s_range: Option<(usize, usize)>,
    pub t_range: Option<(usize, usize)>,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        Self { delta: DEFAULT_DELTA, stride_s: 1, stride_t: 1, s_range: None, t_range: None }
    }
}

impl SurfaceOptions {
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_strides(mut self, stride_s: usize, stride_t: usize) -> Self {
        self.stride_s = stride_s.max(1);
        self.stride_t = stride_t.max(1);
        self
    }

    /// Smallest strides keeping the grid within `max_side × max_side` nodes.
    pub fn fit(mut self, alpha_len: usize, beta_len: usize, max_side: usize) -> Self {
        let span = |len: usize, r: Option<(usize, usize)>| r.map_or(len, |(a, b)| b - a);
        let stride = |n: usize| if n <= max_side { 1 } else { (n - 1).div_ceil(max_side - 1) };
        self.stride_s = stride(span(alpha_len, self.s_range));
        self.stride_t = stride(span(beta_len, self.t_range));
        self
    }

    pub(crate) fn indices(len: usize, stride: usize, range: Option<(usize, usize)>) -> Vec<usize> {
        let (a, b) = range.unwrap_or((0, len));
        (a..b.min(len)).step_by(stride.max(1)).collect()
    }
}

/// Sampled translation surface on the tensor grid of two curves' native nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceGrid {
    pub alpha: SampledCurve,
    pub beta: SampledCurve,
    pub left: QuatFrameSamples,
    pub right: QuatFrameSamples,
    /// Native node indices of `α` (rows) and `β` (columns).
    pub rows_idx: Vec<usize>,
    pub cols_idx: Vec<usize>,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub x: Grid<Quat>,
    /// `P = ⟨T_α, T̂_β⟩`.
    pub frame_product: Grid<f64>,
    pub delta: f64,
}

/// Frame data of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
struct NodeFrames {
    p: f64,
    /// `κ_α⟨B_α, T̂_β⟩`, zero on geodesics.
    a: f64,
    /// `κ_β⟨T_α, B̂_β⟩`, zero on geodesics.
    b: f64,
}

impl SurfaceGrid {
    pub fn rows(&self) -> usize {
        self.rows_idx.len()
    }

    pub fn cols(&self) -> usize {
        self.cols_idx.len()
    }

    /// First-form coefficient `F = ⟨X_s, X_t⟩ = −P`.
    pub fn metric_f(&self) -> Grid<f64> {
        self.frame_product.map(|p| -p)
    }

    fn node(&self, i: usize, j: usize) -> NodeFrames {
        let (a_i, b_j) = (self.rows_idx[i], self.cols_idx[j]);
        let pa = &self.alpha.samples[a_i];
        let pb = &self.beta.samples[b_j];
        let a = match &self.left.b {
            Some(bl) if pa.kappa != 0.0 => pa.kappa * bl[a_i].quat().dot(self.right.t[b_j].quat()),
            _ => 0.0,
        };
        let b = match &self.right.b {
            Some(br) if pb.kappa != 0.0 => pb.kappa * self.left.t[a_i].quat().dot(br[b_j].quat()),
            _ => 0.0,
        };
        NodeFrames { p: self.frame_product.at(i, j), a, b }
    }

    /// `(α'·β, α·β')` at a node.
    pub fn tangents(&self, i: usize, j: usize) -> (Quat, Quat) {
        let pa = &self.alpha.samples[self.rows_idx[i]];
        let pb = &self.beta.samples[self.cols_idx[j]];
        (pa.t * pb.position(), pa.position() * pb.t)
    }
}

fn product(left: &QuatFrameSamples, right: &QuatFrameSamples, i: usize, j: usize) -> f64 {
    left.t[i].quat().dot(right.t[j].quat())
}

/// Builds `α·β` over the selected nodes and enforces `|P| ≤ 1 − δ`.
///
/// Every offending node is reported; nothing is clipped.
pub fn build_surface(alpha: &SampledCurve, beta: &SampledCurve, opts: &SurfaceOptions) -> Result<SurfaceGrid> {
    if !(opts.delta > 0.0 && opts.delta < 1.0) {
        return Err(GeomError::InvalidSpec(format!("regularity margin must lie in (0, 1), got {}", opts.delta)));
    }
    let left = left_frame(alpha)?;
    let right = right_frame(beta)?;
    let rows_idx = SurfaceOptions::indices(alpha.len(), opts.stride_s, opts.s_range);
    let cols_idx = SurfaceOptions::indices(beta.len(), opts.stride_t, opts.t_range);
    if rows_idx.is_empty() || cols_idx.is_empty() {
        return Err(GeomError::InvalidSpec("empty surface grid".into()));
    }
    let frame_product = Grid::from_fn(rows_idx.len(), cols_idx.len(), |i, j| product(&left, &right, rows_idx[i], cols_idx[j]));
    let nodes: Vec<RegularityNode> = frame_product
        .indexed()
        .filter(|(_, p)| p.abs() > 1.0 - opts.delta)
        .map(|((i, j), p)| RegularityNode {
            i: rows_idx[i],
            j: cols_idx[j],
            s: alpha.samples[rows_idx[i]].s,
            t: beta.samples[cols_idx[j]].s,
            frame_product: *p,
        })
        .collect();
    if !nodes.is_empty() {
        return Err(GeomError::RegularityViolation { nodes });
    }
    let x = Grid::from_fn(rows_idx.len(), cols_idx.len(), |i, j| {
        alpha.samples[rows_idx[i]].position() * beta.samples[cols_idx[j]].position()
    });
    Ok(SurfaceGrid {
        s: rows_idx.iter().map(|&i| alpha.samples[i].s).collect(),
        t: cols_idx.iter().map(|&j| beta.samples[j].s).collect(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        left,
        right,
        rows_idx,
        cols_idx,
        x,
        frame_product,
        delta: opts.delta,
    })
}

/// Shrinks the index window greedily, one edge row or column at a time, until
/// no node violates regularity. Returns `None` when nothing regular remains.
pub fn regular_window(alpha: &SampledCurve, beta: &SampledCurve, opts: &SurfaceOptions) -> Result<Option<SurfaceOptions>> {
    let left = left_frame(alpha)?;
    let right = right_frame(beta)?;
    let rows = SurfaceOptions::indices(alpha.len(), opts.stride_s, opts.s_range);
    let cols = SurfaceOptions::indices(beta.len(), opts.stride_t, opts.t_range);
    let bad = Grid::from_fn(rows.len(), cols.len(), |i, j| product(&left, &right, rows[i], cols[j]).abs() > 1.0 - opts.delta);
    let (mut r0, mut r1, mut c0, mut c1) = (0usize, rows.len(), 0usize, cols.len());
    loop {
        if r0 >= r1 || c0 >= c1 {
            return Ok(None);
        }
        let row_bad = |i: usize| (c0..c1).filter(|&j| *bad.get(i, j)).count();
        let col_bad = |j: usize| (r0..r1).filter(|&i| *bad.get(i, j)).count();
        let total: usize = (r0..r1).map(row_bad).sum();
        if total == 0 {
            break;
        }
        // ties favour the earliest candidate in this order
        let cands = [(row_bad(r0), 0), (row_bad(r1 - 1), 1), (col_bad(c0), 2), (col_bad(c1 - 1), 3)];
        let (_, which) = cands.iter().copied().max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1))).unwrap();
        match which {
            0 => r0 += 1,
            1 => r1 -= 1,
            2 => c0 += 1,
            _ => c1 -= 1,
        }
    }
    Ok(Some(SurfaceOptions {
        s_range: Some((rows[r0], rows[r1 - 1] + 1)),
        t_range: Some((cols[c0], cols[c1 - 1] + 1)),
        ..*opts
    }))
}

/// `N = (α'·β' − P α·β) / √(1 − P²)`.
pub fn closed_form_normal(grid: &SurfaceGrid) -> Grid<Quat> {
    Grid::from_fn(grid.rows(), grid.cols(), |i, j| {
        let pa = &grid.alpha.samples[grid.rows_idx[i]];
        let pb = &grid.beta.samples[grid.cols_idx[j]];
        let p = grid.frame_product.at(i, j);
        (pa.t * pb.t - grid.x.at(i, j) * p) / (1.0 - p * p).sqrt()
    })
}

pub fn closed_form_coeffs(grid: &SurfaceGrid, i: usize, j: usize) -> FormCoeffs {
    let nf = grid.node(i, j);
    let root = (1.0 - nf.p * nf.p).sqrt();
    FormCoeffs { g11: 1.0, g12: -nf.p, g22: 1.0, h11: nf.a / root, h12: root, h22: -nf.b / root }
}

pub fn closed_form_second_form(grid: &SurfaceGrid) -> FundForms {
    FundForms::from_fn(grid.rows(), grid.cols(), |i, j| closed_form_coeffs(grid, i, j))
}

/// `κ_α⟨B_α, T̂_β⟩ − κ_β⟨T_α, B̂_β⟩ − 2P(P² − 1)`, which equals `2(1 − P²)^{3/2} H`.
pub fn minimality_residual(grid: &SurfaceGrid) -> Grid<f64> {
    Grid::from_fn(grid.rows(), grid.cols(), |i, j| {
        let nf = grid.node(i, j);
        nf.a - nf.b - 2.0 * nf.p * (nf.p * nf.p - 1.0)
    })
}

/// `κ_ακ_β⟨B_α, T̂_β⟩⟨T_α, B̂_β⟩`, which equals `−(1 − P²)² K`.
pub fn flatness_residual(grid: &SurfaceGrid) -> Grid<f64> {
    Grid::from_fn(grid.rows(), grid.cols(), |i, j| {
        let nf = grid.node(i, j);
        nf.a * nf.b
    })
}

/// Largest differences between the coefficient-route curvatures and the
/// fully expanded printed expressions
///
/// ```text
/// H = [κ_α⟨B_α,T̂_β⟩ − κ_β⟨T_α,B̂_β⟩ − 2P(P² − 1)] / (2(1 − P²)^{3/2})
/// K = κ_ακ_β⟨B_α,T̂_β⟩⟨T_α,B̂_β⟩ / (1 − P²)²
/// K_ext = −κ_ακ_β⟨B_α,T̂_β⟩⟨T_α,B̂_β⟩ / (1 − P²) − 1
/// ```
///
/// and the great-circle law `H = −C/√(1 − C²)` read with `C = P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrintedFormDeviation {
    pub expanded_h: f64,
    pub printed_k: f64,
    pub printed_k_ext: f64,
    pub law_with_frame_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub frame_product: Grid<f64>,
    pub forms: FundForms,
    pub h: Grid<f64>,
    pub k: Grid<f64>,
    pub k_ext: Grid<f64>,
    pub minimality: Grid<f64>,
    pub flatness: Grid<f64>,
    pub umbilicity: Grid<f64>,
    pub normals: Grid<Quat>,
    pub printed_deviation: PrintedFormDeviation,
}

/// Closed-form geometry of a surface grid.
pub fn analyze(grid: &SurfaceGrid) -> GeometryReport {
    let forms = closed_form_second_form(grid);
    let h = mean_curvature(&forms);
    let (k_ext, k) = gauss_curvature(&forms);
    let minimality = minimality_residual(grid);
    let flatness = flatness_residual(grid);
    let mut dev = PrintedFormDeviation { expanded_h: 0.0, printed_k: 0.0, printed_k_ext: 0.0, law_with_frame_product: 0.0 };
    for ((i, j), &p) in grid.frame_product.indexed() {
        let q = 1.0 - p * p;
        let upd = |m: &mut f64, a: f64, b: f64| *m = m.max((a - b).abs());
        upd(&mut dev.expanded_h, h.at(i, j), minimality.at(i, j) / (2.0 * q.powf(1.5)));
        upd(&mut dev.printed_k, k.at(i, j), flatness.at(i, j) / (q * q));
        upd(&mut dev.printed_k_ext, k_ext.at(i, j), -flatness.at(i, j) / q - 1.0);
        if grid.node(i, j).a == 0.0 && grid.node(i, j).b == 0.0 {
            upd(&mut dev.law_with_frame_product, h.at(i, j), -p / q.sqrt());
        }
    }
    GeometryReport {
        s: grid.s.clone(),
        t: grid.t.clone(),
        frame_product: grid.frame_product.clone(),
        umbilicity: umbilicity_defect(&forms),
        normals: closed_form_normal(grid),
        forms,
        h,
        k,
        k_ext,
        minimality,
        flatness,
        printed_deviation: dev,
    }
}
