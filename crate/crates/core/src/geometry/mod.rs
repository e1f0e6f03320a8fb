//! Doubly warped products over an interval with round sphere fibers.

pub mod boundary;
pub mod metric;
pub mod profile;
pub mod sphere;

pub use boundary::{validate_ideal_boundary, BoundaryData, BoundaryReport, ConditionResult};
pub use metric::{CurvatureMinimum, CurvatureSpectrum, DoublyWarpedMetric, EndResiduals};
pub use profile::{Cosine, Jet, Profile, Sine};
pub use sphere::sphere_constant;
