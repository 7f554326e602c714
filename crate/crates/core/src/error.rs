use thiserror::Error;

/// Errors raised by the geometry library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("quaternion norm {0:e} is too small to invert")]
    ZeroQuaternion(f64),

    #[error("quaternion norm {norm} is not within tolerance of 1")]
    NotUnit { norm: f64 },

    #[error("quaternion has real part {w:e}; expected a pure imaginary unit")]
    NotPure { w: f64 },

    #[error("pure quaternions are not orthogonal (inner product {dot:e})")]
    NotOrthogonal { dot: f64 },

    #[error("curvature {kappa:e} at s = {s} is below the framing threshold")]
    VanishingCurvature { s: f64, kappa: f64 },

    #[error("radii do not satisfy R1^2 + R2^2 = 1 (got {sum})")]
    BadRadii { sum: f64 },

    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),

    #[error("seed frame is not orthonormal and positively oriented (defect {defect:e})")]
    BadSeedFrame { defect: f64 },

    #[error("at least {needed} samples required, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("curve has no normal/binormal (great circle); only T is defined")]
    MissingFrame,

    #[error("trace in the pure sphere is degenerate: {0}")]
    DegenerateTrace(String),

    #[error("regularity violated at {} node(s); first at {:?}", .nodes.len(), .nodes.first())]
    RegularityViolation { nodes: Vec<RegularityNode> },

    #[error("tangent vectors are degenerate at node ({i}, {j})")]
    DegenerateTangents { i: usize, j: usize },

    #[error("first fundamental forms of corresponded surfaces disagree by {deviation:e}")]
    GaugeMismatch { deviation: f64 },

    #[error("grids have mismatched shapes: {0}")]
    ShapeMismatch(String),

    #[error("table error: {0}")]
    Table(String),
}

/// A grid node where |⟨T_α, T̂_β⟩| exceeds 1 − δ.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RegularityNode {
    pub i: usize,
    pub j: usize,
    pub s: f64,
    pub t: f64,
    pub frame_product: f64,
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
