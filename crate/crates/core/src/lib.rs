//! Resonances of the d'Alembertian on three-dimensional anti-de Sitter space,
//! computed through the identification of the quadric with SL(2,R).

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod differential_ops;
pub mod error;
pub mod geometry;
pub mod principal_series;
pub mod quadrature;
pub mod residue_reps;
pub mod resolvent;
pub mod scan;
pub mod verify;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use geometry::{AmbientVector, GroupElement};
pub use principal_series::SpectralParameter;
pub use residue_reps::{ResidueRepDescriptor, SubquotientLabel};
pub use resolvent::{ContourSpec, QuadratureConfig, Resolvent, Resonance};
pub use scan::{ScanGrid, ScanRow};
pub use verify::{Suite, VerifyReport};
