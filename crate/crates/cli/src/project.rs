//! Stereographic projection `S³ \ {p} → ℝ³` and quad-mesh export.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use quatsurf::Quat;

/// Minimum distance between a projected point and the pole.
pub const POLE_CLEARANCE: f64 = 1e-3;
pub const CONFORMALITY_TOL: f64 = 1e-3;

/// A pole `±e_k`, `k ∈ 1..=4`, with `e₁ = 1, e₂ = i, e₃ = j, e₄ = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pole {
    pub axis: usize,
    pub negative: bool,
}

impl Pole {
    /// Auto-pole candidates in preference order.
    pub const CANDIDATES: [Pole; 8] = [
        Pole { axis: 1, negative: true },
        Pole { axis: 1, negative: false },
        Pole { axis: 2, negative: true },
        Pole { axis: 2, negative: false },
        Pole { axis: 3, negative: true },
        Pole { axis: 3, negative: false },
        Pole { axis: 4, negative: true },
        Pole { axis: 4, negative: false },
    ];

    pub fn parse(s: &str) -> Option<Self> {
        let (negative, rest) = match s.as_bytes().first()? {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let axis: usize = rest.strip_prefix('e')?.parse().ok()?;
        (1..=4).contains(&axis).then_some(Pole { axis, negative })
    }

    pub fn quat(self) -> Quat {
        let q = Quat::basis(self.axis - 1);
        if self.negative {
            -q
        } else {
            q
        }
    }

    /// Coordinates of `v` along the three remaining axes, in increasing order.
    fn complement(self, v: Quat) -> [f64; 3] {
        let a = v.to_array();
        let mut out = [0.0; 3];
        let mut k = 0;
        for (idx, x) in a.iter().enumerate() {
            if idx != self.axis - 1 {
                out[k] = *x;
                k += 1;
            }
        }
        out
    }
}

impl fmt::Display for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e{}", if self.negative { "-" } else { "+" }, self.axis)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleCollision {
    pub pole: Pole,
    /// `(row, col, distance)` of every offending node.
    pub nodes: Vec<(usize, usize, f64)>,
}

impl fmt::Display for PoleCollision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} node(s) within {POLE_CLEARANCE} of pole {}", self.nodes.len(), self.pole)?;
        if let Some((i, j, d)) = self.nodes.first() {
            write!(f, "; first at ({i}, {j}), distance {d:e}")?;
        }
        Ok(())
    }
}

/// `y = (x − ⟨x,p⟩p) / (1 − ⟨x,p⟩)`, written in the coordinates orthogonal to `p`.
pub fn stereographic(x: Quat, pole: Pole) -> [f64; 3] {
    let p = pole.quat();
    let c = x.dot(p);
    pole.complement((x - p * c) / (1.0 - c))
}

/// Pushforward of the tangent `v` at `x`.
pub fn stereographic_differential(x: Quat, v: Quat, pole: Pole) -> [f64; 3] {
    let p = pole.quat();
    let (c, dc) = (x.dot(p), v.dot(p));
    let d = 1.0 - c;
    pole.complement((v - p * dc) / d + (x - p * c) * (dc / (d * d)))
}

fn distance(a: Quat, b: Quat) -> f64 {
    (a - b).norm()
}

/// Projects every point of `pts` (row-major `rows × cols`), or reports the
/// nodes closer than [`POLE_CLEARANCE`] to the pole.
pub fn stereographic_project(pts: &[Quat], cols: usize, pole: Pole) -> Result<Vec<[f64; 3]>, PoleCollision> {
    let p = pole.quat();
    let nodes: Vec<(usize, usize, f64)> = pts
        .iter()
        .enumerate()
        .map(|(k, x)| (k / cols.max(1), k % cols.max(1), distance(*x, p)))
        .filter(|n| n.2 < POLE_CLEARANCE)
        .collect();
    if !nodes.is_empty() {
        return Err(PoleCollision { pole, nodes });
    }
    Ok(pts.iter().map(|x| stereographic(*x, pole)).collect())
}

/// Candidate pole with the largest minimum distance to `pts`; earlier
/// candidates win ties.
pub fn auto_pole(pts: &[Quat]) -> Pole {
    let min_dist = |pole: Pole| pts.iter().map(|x| distance(*x, pole.quat())).fold(f64::INFINITY, f64::min);
    let mut best = Pole::CANDIDATES[0];
    let mut best_d = min_dist(best);
    for pole in &Pole::CANDIDATES[1..] {
        let d = min_dist(*pole);
        if d > best_d {
            best = *pole;
            best_d = d;
        }
    }
    best
}

fn angle3(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let na = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let nb = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0).acos()
}

/// Largest change of the angle between two tangents under projection.
pub fn conformality_defect(samples: &[(Quat, Quat, Quat)], pole: Pole) -> f64 {
    samples
        .iter()
        .map(|&(x, u, v)| {
            let before = (u.dot(v) / (u.norm() * v.norm())).clamp(-1.0, 1.0).acos();
            let after = angle3(stereographic_differential(x, u, pole), stereographic_differential(x, v, pole));
            (before - after).abs()
        })
        .fold(0.0, f64::max)
}

/// Quad mesh on a `rows × cols` vertex grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadMesh {
    pub vertices: Vec<[f64; 3]>,
    pub rows: usize,
    pub cols: usize,
}

impl QuadMesh {
    pub fn faces(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        let c = self.cols;
        (0..self.rows.saturating_sub(1))
            .flat_map(move |i| (0..c.saturating_sub(1)).map(move |j| [i * c + j, (i + 1) * c + j, (i + 1) * c + j + 1, i * c + j + 1]))
    }

    /// Faces whose diagonals span a parallelogram of area below `eps`.
    pub fn degenerate_faces(&self, eps: f64) -> usize {
        let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        self.faces()
            .filter(|f| {
                let d1 = sub(self.vertices[f[2]], self.vertices[f[0]]);
                let d2 = sub(self.vertices[f[3]], self.vertices[f[1]]);
                let cr = [d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2], d1[0] * d2[1] - d1[1] * d2[0]];
                (cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]).sqrt() / 2.0 < eps
            })
            .count()
    }

    pub fn write_obj(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "# quatsurf quad mesh, {} x {} vertices", self.rows, self.cols)?;
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
        }
        for f in self.faces() {
            writeln!(w, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
        }
        Ok(())
    }
}
