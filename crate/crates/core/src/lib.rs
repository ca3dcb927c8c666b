//! Complete homogeneous symmetric polynomials of real and complex degree,
//! their B-spline integral representation, and positivity tests built on it.

pub mod analysis;
pub mod bspline;
pub mod chs;
pub mod error;
pub mod numerics;
pub mod poly;
pub mod sampling;
pub mod schur;
pub mod semigroup;
pub mod suites;

pub use analysis::{ChsCombination, CombinationKind, Interval, MuClass, MuCase, PositivityVerdict, VerdictStatus};
pub use bspline::{BSplineForm, KnotVector, SampledFunction};
pub use chs::{ChsResult, EvalPath, PointTuple};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::{ComplexDegree, Integral, QuadratureSpec};
pub use sampling::Region;
pub use schur::Partition;
pub use semigroup::{GeneratorSet, LengthDistribution};
