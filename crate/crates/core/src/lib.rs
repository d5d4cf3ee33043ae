//! Discrete spectra of complex PT-symmetric scattering potentials.
//!
//! Eigenvalues are located as zeros of F(k) = 1/t(k) in the closed upper
//! half k-plane and classified as negative real bound states, complex
//! conjugate pairs, or real positive spectral singularities.
//!
//! Units: lengths in Å, energies in eV, with 2μ/ħ² = 1 so that E = k².

pub mod diagnostics;
pub mod error;
pub mod models;
pub mod numerov;
pub mod oracle;
pub mod rootfind;
pub mod specfun;
pub mod sweep;
pub mod tables;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use num_complex::Complex64;
