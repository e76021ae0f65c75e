//! Arithmetic in GF(p^e), GF(q)-coordinates of extension fields, linearized
//! polynomials, and dense matrices with rank and RREF.
//!
//! Fields are built from hardcoded Conway polynomials, so element indices
//! are stable across runs: index `i` is the polynomial whose base-`p`
//! coefficient digits spell `i`.

mod conway;
mod extension;
mod field;
mod linearized;
mod matrix;

pub use extension::Extension;
pub use field::{prime_power, Elem, Field, MAX_FIELD_ORDER, SUPPORTED_CODE_ALPHABETS};
pub use linearized::linearized_eval;
pub use matrix::{mat_rank, mat_rref, Matrix};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("element index {index} out of range for a field of order {order}")]
    InvalidElement { index: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("GF({p}^{e}) is not supported (no modulus table entry, or larger than 1024 elements)")]
    Unsupported { p: u32, e: u32 },
    #[error("field size {0} is not a supported code alphabet (expected one of 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedAlphabet(u32),
    #[error("modulus for GF({p}^{e}) is not primitive")]
    NotPrimitive { p: u32, e: u32 },
    #[error("operands live in incompatible fields")]
    IncompatibleField,
    #[error("basis elements are linearly dependent over the base field")]
    DependentBasis,
    #[error("linearized polynomial has no coefficients")]
    EmptyPolynomial,
    #[error("shape mismatch: expected {expected:?}, got {len} entries")]
    ShapeMismatch { expected: (usize, usize), len: usize },
}
