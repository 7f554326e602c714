//! Quaternionic Frenet frames, translation surfaces in S³ and ℝ³, and
//! numerical probes of their curvature.

pub mod correspondence;
pub mod curve;
pub mod error;
pub mod forms;
pub mod frame;
pub mod grid;
pub mod oracle;
pub mod quat;
pub mod surface;
pub mod surface_r3;
pub mod theorems;

pub use error::{GeomError, Result};
pub use grid::Grid;
pub use quat::{PureUnit, Quat, UnitQuat};
