//! Exact computations with Lie-Rinehart algebras over finite-dimensional
//! commutative algebras over `ℚ`: Chevalley-Eilenberg-Rinehart cohomology,
//! Gerstenhaber brackets and their generators, twilled sums and their
//! bigraded complexes, and Lie-Rinehart bialgebras.
//!
//! All arithmetic is exact. Structures are stored on basis tuples and
//! evaluated on general elements by canonical Leibniz expansion.

pub mod basis;
pub mod bialg;
pub mod calgebra;
pub mod error;
pub mod exactla;
pub mod gerst;
pub mod instances;
pub mod lrcore;
pub mod report;
pub mod twilled;

pub use basis::BasisSet;
pub use calgebra::{alg_mul, alg_validate, der_bracket, derivation_validate, AElem, CommAlg, Derivation};
pub use error::{Error, Result};
pub use exactla::{mat_kernel_basis, mat_rank, mat_solve, Rat, RatMatrix};
pub use lrcore::{
    ce_differential, cohomology_dims, lr_anchor_apply, lr_bracket, lr_validate, module_validate, AltForm, FreeElem,
    LElem, LRModule, LieRinehart,
};
pub use report::{ValidationReport, Violation};
