use num_complex::Complex64;
use thiserror::Error;

use crate::specfun::SpecfunError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("special function evaluation failed: {0}")]
    Eval(#[from] SpecfunError),
    #[error("F(k) is singular at k = {0}")]
    Pole(Complex64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("potential has not decayed at the grid edge: |V({x})| = {value:e}")]
    Decay { x: f64, value: f64 },
    #[error("step {step} is too coarse for k = {k}")]
    StepTooCoarse { step: f64, k: Complex64 },
    #[error("solution overflowed near x = {0}")]
    Overflow(f64),
    #[error("plane-wave extraction residual {0:e} exceeds tolerance")]
    Extraction(f64),
    #[error("malformed potential table: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: format!("must be finite, got {v}"),
        })
    }
}
