//! Exact computations for persistence K-theory.
//!
//! - [`novikov`]: Novikov polynomials `Λ_P` and the double-exponent ring.
//! - [`stepfn`]: step functions with the convolution product.
//! - [`fcomplex`]: filtered chain complexes over `F_p` and their constructions.
//! - [`barcode`]: normal forms, invariants and metrics of graded barcodes.
//! - [`ktheory`]: K-classes, the pairing `κ`, acyclicity and witnesses.
//! - [`cli`]: the `pkt` command-line front end.

pub mod error;
pub mod exponent;
pub mod field;
pub mod novikov;
pub mod stepfn;
pub mod fcomplex;
pub mod barcode;
pub mod ktheory;
pub mod cli;

pub use error::{Error, Result};
pub use exponent::{Distance, Endpoint, Exponent, Rational};
pub use fcomplex::{FilteredChainMap, FilteredComplex, Generator, Violation};
pub use field::FieldSpec;
pub use novikov::{DoubleExpPoly, NovikovPoly};
pub use stepfn::StepFn;
pub use barcode::{GradedBarcode, MorseData};
