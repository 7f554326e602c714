//! Fundamental-form coefficients and the curvature quantities derived from them.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::grid::Grid;

/// First form `(E, F, G) = (g11, g12, g22)` and second form
/// `(e, f, g) = (h11, h12, h22)` at one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormCoeffs {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
}

impl FormCoeffs {
    pub fn det_first(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    /// `H = (eG − 2fF + gE) / (2(EG − F²))`.
    pub fn mean_curvature(&self) -> f64 {
        (self.h11 * self.g22 - 2.0 * self.h12 * self.g12 + self.h22 * self.g11) / (2.0 * self.det_first())
    }

    /// `K_ext = (eg − f²) / (EG − F²)`.
    pub fn extrinsic_curvature(&self) -> f64 {
        (self.h11 * self.h22 - self.h12 * self.h12) / self.det_first()
    }

    /// Weingarten matrix `I⁻¹ II`.
    pub fn shape_operator(&self) -> Matrix2<f64> {
        let first = Matrix2::new(self.g11, self.g12, self.g12, self.g22);
        let second = Matrix2::new(self.h11, self.h12, self.h12, self.h22);
        let d = self.det_first();
        let inv = Matrix2::new(first[(1, 1)], -first[(0, 1)], -first[(1, 0)], first[(0, 0)]) / d;
        inv * second
    }

    /// Principal curvatures `λ₁ ≥ λ₂`, the roots of `λ² − 2Hλ + K_ext`.
    pub fn principal_curvatures(&self) -> (f64, f64) {
        let h = self.mean_curvature();
        let disc = (h * h - self.extrinsic_curvature()).max(0.0).sqrt();
        (h + disc, h - disc)
    }

    /// `|λ₁ − λ₂|`, zero exactly at umbilic points.
    pub fn umbilicity_defect(&self) -> f64 {
        let (a, b) = self.principal_curvatures();
        a - b
    }
}

/// Coefficient grids over a surface patch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FundForms {
    pub g11: Grid<f64>,
    pub g12: Grid<f64>,
    pub g22: Grid<f64>,
    pub h11: Grid<f64>,
    pub h12: Grid<f64>,
    pub h22: Grid<f64>,
}

impl FundForms {
    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> FormCoeffs) -> Self {
        let all = Grid::from_fn(rows, cols, f);
        Self {
            g11: all.map(|c| c.g11),
            g12: all.map(|c| c.g12),
            g22: all.map(|c| c.g22),
            h11: all.map(|c| c.h11),
            h12: all.map(|c| c.h12),
            h22: all.map(|c| c.h22),
        }
    }

    pub fn rows(&self) -> usize {
        self.g11.rows()
    }

    pub fn cols(&self) -> usize {
        self.g11.cols()
    }

    pub fn at(&self, i: usize, j: usize) -> FormCoeffs {
        FormCoeffs {
            g11: self.g11.at(i, j),
            g12: self.g12.at(i, j),
            g22: self.g22.at(i, j),
            h11: self.h11.at(i, j),
            h12: self.h12.at(i, j),
            h22: self.h22.at(i, j),
        }
    }

    fn derive(&self, f: impl Fn(&FormCoeffs) -> f64) -> Grid<f64> {
        Grid::from_fn(self.rows(), self.cols(), |i, j| f(&self.at(i, j)))
    }
}

pub fn mean_curvature(forms: &FundForms) -> Grid<f64> {
    forms.derive(FormCoeffs::mean_curvature)
}

/// `(K_ext, K)` for a surface in S³, where `K = K_ext + 1`.
pub fn gauss_curvature(forms: &FundForms) -> (Grid<f64>, Grid<f64>) {
    let ext = forms.derive(FormCoeffs::extrinsic_curvature);
    let k = ext.map(|v| v + 1.0);
    (ext, k)
}

pub fn umbilicity_defect(forms: &FundForms) -> Grid<f64> {
    forms.derive(FormCoeffs::umbilicity_defect)
}

/// Principal curvature grids `(λ₁, λ₂)`.
pub fn shape_operator(forms: &FundForms) -> (Grid<f64>, Grid<f64>) {
    let both = Grid::from_fn(forms.rows(), forms.cols(), |i, j| forms.at(i, j).principal_curvatures());
    (both.map(|p| p.0), both.map(|p| p.1))
}
