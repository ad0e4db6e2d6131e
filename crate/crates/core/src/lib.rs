//! Hankel tensors: evaluation, associated Hankel matrices, closed-form PSD and
//! SOS criteria for truncated and quasi-truncated classes, verifiable
//! certificates, and Vandermonde / moment decompositions.

pub mod certificates;
pub mod classes;
pub mod decompositions;
mod error;
pub mod hankel_matrix;
pub mod symtensor;

pub use certificates::{
    binary_psd_oracle, refute_psd, verify_decomposition, RefutationResult, RefuteOptions, StructuredDecomposition,
};
pub use classes::{ClassificationVerdict, Tri, Witness, WitnessKind};
pub use error::{HankelError, Result};
pub use hankel_matrix::{build_matrix, is_psd_matrix, is_strong_hankel, AssociatedHankelMatrix};
pub use symtensor::{GeneratingVector, HankelTensor, SparseForm};
