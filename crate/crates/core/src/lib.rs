//! Curvature of almost Hermitian vector spaces at a point.
//!
//! An [`space::HermitianSpace`] carries a diagonal metric of signature
//! `(2s, 2(m-s))` and a compatible complex structure `J`. Algebraic curvature
//! tensors on it ([`tensor::CurvatureTensor`]) give sectional, holomorphic
//! and totally real biholomorphic sectional curvatures. The remaining modules
//! expand those quantities along one-parameter families, decide pointwise
//! constancy, and check the classical constancy theorems end to end.

#![allow(clippy::needless_range_loop)]

pub mod constancy;
pub mod document;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod par;
pub mod polarization;
pub mod random;
pub mod scalar;
pub mod space;
pub mod tensor;

pub use error::{CurvatureError, Result};
pub use par::Exec;
pub use scalar::{Field, Rational, Scalar};
pub use space::{ComplexVector, HermitianSpace, RealVector, Sign, Vector};
pub use tensor::CurvatureTensor;
