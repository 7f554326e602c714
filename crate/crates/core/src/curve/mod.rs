//! Curve descriptions and arc-length integrators in S³ and ℝ³.

mod invariants;
mod r3;
mod s3;
mod spec;

pub use invariants::{fd_curve_invariants, FdInvariants, InvariantEstimates};
pub use r3::{integrate_frenet_r3, FrenetSampleR3, SampledCurveR3, SeedFrameR3};
pub use s3::{
    clifford_factor_curve, integrate_frenet_s3, integrate_frenet_s3_seeded, FrenetSample, IntegrationStats,
    SampledCurve,
};
pub use spec::{
    frame_det, CurveSpec, CurveSpecR3, Family, HelixSign, Profile, SeedFrame, Table, DEFAULT_STEP, KAPPA_EPS,
};
