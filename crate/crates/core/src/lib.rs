//! Walsh spectra, nonlinearity and differential uniformity of quadratic
//! vectorial functions on GF(2^m) x GF(2^m), with cross-checks through the
//! linearized (A, B) systems that describe each component's linear space.
pub mod bitlinalg;
pub mod error;
pub mod families;
pub mod gf2m;
pub mod lincurves;
pub mod vbf;
pub mod verifier;

pub use error::{Error, Result};
pub use families::{build_function, build_function_with, Family, FamilyParams};
pub use gf2m::{FieldElement, FieldSpec};
pub use vbf::{ComponentSelector, SpectrumReport, TableLimits, VectorialFunction};
