//! Analysis toolkit for trace-monomial Boolean functions over F_{2^n}:
//! exact field arithmetic, bit-packed truth tables with Walsh and Moebius
//! transforms, linear kernels of quadratic derivatives, certified
//! big-integer evaluation of nonlinearity lower bounds, and exhaustive
//! verification suites for the distribution and counting claims behind
//! those bounds.

pub mod boolfun;
pub mod bounds;
pub mod exact;
pub mod field;
mod linalg;
pub mod quadratic;
pub mod verify;

pub use boolfun::{AnfTable, BoolFunError, TruthTable, WalshSpectrum};
pub use bounds::{BoundFamily, BoundResult, BoundsError, CarletSums};
pub use field::{FieldContext, FieldElement, FieldError};
pub use quadratic::{
    ClassedDimHistogram, DimHistogram, DirectionClass, KernelReport, PqrCounts, QuadraticError,
};
pub use verify::{CaseStatus, SuiteId, VerificationReport, VerifyOptions};
