//! Fourier analysis of Boolean functions on `{-1,1}^n`, with a focus on
//! linear threshold functions: spectra, Khintchine constants, degree-1
//! weight searches, and Tomaszewski-type tail bounds.

pub mod bks;
pub mod enumeration;
pub mod error;
pub mod exact;
pub mod hypercube;
pub mod gaussian;
pub mod khintchine;
pub mod ltf;
pub mod rademacher;
pub mod tomaszewski;
pub mod verify;

pub use error::{Error, Result};
pub use hypercube::{FourierSpectrum, HypercubeFunction, Level, RealTable, TruthTable};
pub use ltf::{Ltf, WeightVector};
