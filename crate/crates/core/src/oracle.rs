//! Finite-difference fundamental forms, independent of every closed form.
//!
//! Derivatives are second-order central differences on the native sample
//! lattice. The normal is obtained by Gram–Schmidt of the ambient basis
//! against `span{X, X_s, X_t}` (S³) or `span{e_w, X_s, X_t}` (ℝ³ embedded as
//! pure quaternions), and only its sign is ever taken from a closed form.

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::forms::{FormCoeffs, FundForms};
use crate::grid::Grid;
use crate::quat::Quat;
use crate::surface::{closed_form_normal, SurfaceGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ambient {
    SphereS3,
    /// ℝ³ identified with the pure quaternions.
    EuclideanR3,
}

/// A surface known on a uniform lattice of native nodes.
pub trait PatchSampler {
    fn ambient(&self) -> Ambient;
    fn native_shape(&self) -> (usize, usize);
    fn steps(&self) -> (f64, f64);
    fn point(&self, i: usize, j: usize) -> Quat;
}

impl PatchSampler for SurfaceGrid {
    fn ambient(&self) -> Ambient {
        Ambient::SphereS3
    }

    fn native_shape(&self) -> (usize, usize) {
        (self.alpha.len(), self.beta.len())
    }

    fn steps(&self) -> (f64, f64) {
        (self.alpha.step(), self.beta.step())
    }

    fn point(&self, i: usize, j: usize) -> Quat {
        self.alpha.samples[i].position() * self.beta.samples[j].position()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleForms {
    pub ambient: Ambient,
    /// Positions of the evaluated nodes within the requested row/column lists.
    pub rows_at: Vec<usize>,
    pub cols_at: Vec<usize>,
    pub forms: FundForms,
    pub h: Grid<f64>,
    pub k_ext: Grid<f64>,
    pub normals: Grid<Quat>,
    pub h_s: f64,
    pub h_t: f64,
    /// Largest `|⟨N, u⟩|` over the orthonormalized spanning vectors `u`.
    pub gram_schmidt_residual: f64,
    /// Largest `|⟨X_ss − ⟨X_ss, X⟩X, X⟩|` (S³ only).
    pub projection_residual: f64,
}

fn orthonormalize(vs: &[Quat]) -> Vec<Quat> {
    let mut out: Vec<Quat> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut w = *v;
        for _ in 0..2 {
            for u in &out {
                w -= *u * u.dot(w);
            }
        }
        out.push(w.normalize());
    }
    out
}

/// Unit vector orthogonal to `span`, from the basis vector with the largest
/// residual after projection.
fn complement(span: &[Quat]) -> Quat {
    let mut best = Quat::ZERO;
    for k in 0..4 {
        let mut w = Quat::basis(k);
        for _ in 0..2 {
            for u in span {
                w -= *u * u.dot(w);
            }
        }
        if w.norm() > best.norm() {
            best = w;
        }
    }
    best.normalize()
}

/// Fixed sign convention: largest-magnitude component positive.
fn canonical_sign(n: Quat) -> Quat {
    let a = n.to_array();
    let k = (0..4).max_by(|&x, &y| a[x].abs().total_cmp(&a[y].abs())).unwrap();
    if a[k] < 0.0 {
        -n
    } else {
        n
    }
}

/// Fundamental forms at the requested native nodes with stencil half-width
/// `width` native steps. Nodes lacking a full stencil are skipped.
///
/// `align` gives, for each requested node, a normal whose sign is adopted.
pub fn fd_fundamental_forms<S: PatchSampler + ?Sized>(
    surf: &S,
    rows: &[usize],
    cols: &[usize],
    width: usize,
    align: Option<&Grid<Quat>>,
) -> Result<OracleForms> {
    let (nr, nc) = surf.native_shape();
    let w = width.max(1);
    let keep = |idx: &[usize], n: usize| -> Vec<usize> {
        (0..idx.len()).filter(|&k| idx[k] >= w && idx[k] + w < n).collect()
    };
    let rows_at = keep(rows, nr);
    let cols_at = keep(cols, nc);
    if rows_at.is_empty() || cols_at.is_empty() {
        return Err(GeomError::TooFewSamples { needed: 2 * w + 1, got: rows.len().min(cols.len()) });
    }
    let (hs0, ht0) = surf.steps();
    let (hs, ht) = (hs0 * w as f64, ht0 * w as f64);
    let ambient = surf.ambient();

    let mut gs_res = 0.0f64;
    let mut proj_res = 0.0f64;
    let mut coeffs = Vec::with_capacity(rows_at.len() * cols_at.len());
    let mut normals = Vec::with_capacity(coeffs.capacity());
    for &a in &rows_at {
        for &b in &cols_at {
            let (i, j) = (rows[a], cols[b]);
            let x = surf.point(i, j);
            let (xp, xm) = (surf.point(i + w, j), surf.point(i - w, j));
            let (yp, ym) = (surf.point(i, j + w), surf.point(i, j - w));
            let xs = (xp - xm) / (2.0 * hs);
            let xt = (yp - ym) / (2.0 * ht);
            let xss = (xp - x * 2.0 + xm) / (hs * hs);
            let xtt = (yp - x * 2.0 + ym) / (ht * ht);
            let xst = (surf.point(i + w, j + w) - surf.point(i + w, j - w) - surf.point(i - w, j + w)
                + surf.point(i - w, j - w))
                / (4.0 * hs * ht);
            let c = FormCoeffs { g11: xs.dot(xs), g12: xs.dot(xt), g22: xt.dot(xt), h11: 0.0, h12: 0.0, h22: 0.0 };
            if c.det_first() < 1e-16 {
                return Err(GeomError::DegenerateTangents { i, j });
            }
            let anchor = match ambient {
                Ambient::SphereS3 => x,
                Ambient::EuclideanR3 => Quat::ONE,
            };
            let span = orthonormalize(&[anchor, xs, xt]);
            let mut n = complement(&span);
            gs_res = span.iter().fold(gs_res, |m, u| m.max(u.dot(n).abs()));
            n = match align {
                Some(g) if g.at(a, b).dot(n) < 0.0 => -n,
                Some(_) => n,
                None => canonical_sign(n),
            };
            if ambient == Ambient::SphereS3 {
                let tangential = xss - x * xss.dot(x);
                proj_res = proj_res.max(tangential.dot(x).abs());
            }
            coeffs.push(FormCoeffs { h11: xss.dot(n), h12: xst.dot(n), h22: xtt.dot(n), ..c });
            normals.push(n);
        }
    }
    let (r, c) = (rows_at.len(), cols_at.len());
    let forms = FundForms::from_fn(r, c, |i, j| coeffs[i * c + j]);
    Ok(OracleForms {
        ambient,
        h: Grid::from_fn(r, c, |i, j| coeffs[i * c + j].mean_curvature()),
        k_ext: Grid::from_fn(r, c, |i, j| coeffs[i * c + j].extrinsic_curvature()),
        normals: Grid::from_fn(r, c, |i, j| normals[i * c + j]),
        forms,
        rows_at,
        cols_at,
        h_s: hs,
        h_t: ht,
        gram_schmidt_residual: gs_res,
        projection_residual: proj_res,
    })
}

/// Oracle on the nodes of a surface grid, sign-aligned to the closed-form normal.
pub fn surface_oracle(grid: &SurfaceGrid, width: usize) -> Result<OracleForms> {
    let align = closed_form_normal(grid);
    fd_fundamental_forms(grid, &grid.rows_idx, &grid.cols_idx, width, Some(&align))
}

/// Largest closed-form vs oracle discrepancies over the oracle's nodes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct OracleComparison {
    pub nodes: usize,
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    pub h: f64,
    /// `max |K_closed − (K_ext,oracle + 1)|`.
    pub k: f64,
    pub normal: f64,
}

impl OracleComparison {
    pub fn max_coefficient(&self) -> f64 {
        [self.g11, self.g12, self.g22, self.h11, self.h12, self.h22].into_iter().fold(0.0, f64::max)
    }
}

/// Compares the closed-form report of `grid` with an oracle evaluated on it.
pub fn compare_with_closed_form(grid: &SurfaceGrid, oracle: &OracleForms) -> OracleComparison {
    let closed = crate::surface::analyze(grid);
    let mut c = OracleComparison { nodes: oracle.h.len(), ..Default::default() };
    let upd = |m: &mut f64, a: f64, b: f64| *m = m.max((a - b).abs());
    for (oi, &gi) in oracle.rows_at.iter().enumerate() {
        for (oj, &gj) in oracle.cols_at.iter().enumerate() {
            let (a, b) = (closed.forms.at(gi, gj), oracle.forms.at(oi, oj));
            upd(&mut c.g11, a.g11, b.g11);
            upd(&mut c.g12, a.g12, b.g12);
            upd(&mut c.g22, a.g22, b.g22);
            upd(&mut c.h11, a.h11, b.h11);
            upd(&mut c.h12, a.h12, b.h12);
            upd(&mut c.h22, a.h22, b.h22);
            upd(&mut c.h, closed.h.at(gi, gj), oracle.h.at(oi, oj));
            upd(&mut c.k, closed.k.at(gi, gj), oracle.k_ext.at(oi, oj) + 1.0);
            c.normal = c.normal.max((closed.normals.at(gi, gj) - oracle.normals.at(oi, oj)).max_abs());
        }
    }
    c
}

/// Observed convergence order from errors at two stencil widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Richardson {
    pub coarse_step: f64,
    pub fine_step: f64,
    pub coarse_error: f64,
    pub fine_error: f64,
    /// `None` when the fine error sits at the rounding floor.
    pub order: Option<f64>,
}

impl Richardson {
    pub fn is_rounding_limited(&self) -> bool {
        self.order.is_none()
    }

    /// Order at least `min`, or rounding-limited.
    pub fn meets(&self, min: f64) -> bool {
        self.order.is_none_or(|p| p >= min)
    }
}

/// Rounding floor of a second difference at step `h`, in units of `ε / h²`,
/// with headroom for the amplification through H and K.
pub const ROUNDING_GAIN: f64 = 100.0;

pub fn rounding_floor(h: f64) -> f64 {
    ROUNDING_GAIN * f64::EPSILON / (h * h)
}

/// Order is `None` when the fine error is at the rounding floor, where no
/// truncation is left to measure.
pub fn richardson_check(coarse_step: f64, coarse_error: f64, fine_step: f64, fine_error: f64) -> Richardson {
    let order = if fine_error <= rounding_floor(fine_step) {
        None
    } else {
        Some((coarse_error / fine_error).ln() / (coarse_step / fine_step).ln())
    };
    Richardson { coarse_step, fine_step, coarse_error, fine_error, order }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    G11,
    G12,
    G22,
    H11,
    H12,
    H22,
    MeanCurvature,
    ExtrinsicCurvature,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::G11,
        Quantity::G12,
        Quantity::G22,
        Quantity::H11,
        Quantity::H12,
        Quantity::H22,
        Quantity::MeanCurvature,
        Quantity::ExtrinsicCurvature,
    ];

    pub fn of(self, c: &FormCoeffs) -> f64 {
        match self {
            Quantity::G11 => c.g11,
            Quantity::G12 => c.g12,
            Quantity::G22 => c.g22,
            Quantity::H11 => c.h11,
            Quantity::H12 => c.h12,
            Quantity::H22 => c.h22,
            Quantity::MeanCurvature => c.mean_curvature(),
            Quantity::ExtrinsicCurvature => c.extrinsic_curvature(),
        }
    }
}

/// Richardson order of `q` on a surface grid, comparing oracles at stencil
/// widths `2h` and `h` against the closed forms on the nodes both can reach.
pub fn surface_richardson(grid: &SurfaceGrid, q: Quantity) -> Result<Richardson> {
    let align = closed_form_normal(grid);
    let coarse = fd_fundamental_forms(grid, &grid.rows_idx, &grid.cols_idx, 2, Some(&align))?;
    let fine = fd_fundamental_forms(grid, &grid.rows_idx, &grid.cols_idx, 1, Some(&align))?;
    let closed = crate::surface::closed_form_second_form(grid);
    let err = |o: &OracleForms| -> f64 {
        let mut m = 0.0f64;
        for (oi, &gi) in o.rows_at.iter().enumerate() {
            if !coarse.rows_at.contains(&gi) {
                continue;
            }
            for (oj, &gj) in o.cols_at.iter().enumerate() {
                if coarse.cols_at.contains(&gj) {
                    m = m.max((q.of(&o.forms.at(oi, oj)) - q.of(&closed.at(gi, gj))).abs());
                }
            }
        }
        m
    };
    Ok(richardson_check(coarse.h_s, err(&coarse), fine.h_s, err(&fine)))
}
