//! Symmetry-restricted classical capacities of quantum states.
//!
//! The crate decomposes a unitary representation of a finite group into its
//! isotypic blocks `(q, d_L, d_R)` and uses the block data to
//!
//! * decide when a system admits superdense coding under symmetric encoders
//!   (non-Abelian *and* reducible representations),
//! * evaluate the capacity of symmetric states (`log Σ_q d_R`), the maximum
//!   capacity (`log d_S`) and the lower bounds for arbitrary states,
//! * build explicit one-shot codebooks, decoders and small Monte Carlo
//!   random-coding experiments.
//!
//! All logarithms are base 2.
//!
//! ```
//! use asymcap::prelude::*;
//!
//! let rep = catalog::representation("q8/u_tensor_I").unwrap();
//! let dec = decompose(&rep, 1e-7, 42).unwrap();
//! let class = classify(&dec);
//! assert!(class.superdense_possible);
//! assert_eq!(capacity_symmetric(&dec), 1.0);
//! assert_eq!(capacity_max(&dec), 2.0);
//! ```

pub mod capacity;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod linalg;
pub mod oneshot;
pub mod repcore;
pub mod states;

pub use error::{Error, GroupViolation, Result};

pub mod prelude {
    pub use crate::capacity::{
        capacity_max, capacity_report, capacity_symmetric, classify, holevo_quantity, lower_bound_covariant,
        lower_bound_general, optimal_covariant_state, optimal_state, CapacityReport, Classification,
    };
    pub use crate::decompose::{
        algebra_dimension, commutant_basis, decompose, decompose_with, is_abelian_rep, is_irreducible,
        DecomposeOptions, Decomposition, IsotypicBlock,
    };
    pub use crate::error::{Error, Result};
    pub use crate::oneshot::{
        bell_codebook, monte_carlo_rate_test, pgm_decoder, projective_decoder, random_covariant_unitary,
        random_symmetric_unitary, simulate_error, symmetric_codebook, Codebook, EncoderKind, Povm,
    };
    pub use crate::repcore::{
        catalog, product_representation, validate_group, validate_representation, FiniteGroup, Representation,
    };
    pub use crate::states::{
        block_probabilities, entropy, is_symmetric, kl, reduced_left_state, shannon, symmetric_form, twirl,
        DensityMatrix,
    };
}
