//! Finite groups, unitary representations and their tensor powers.

pub mod catalog;
pub mod group;
pub mod io;
pub mod representation;

pub use group::{generator_words, validate_group, FiniteGroup};
pub use representation::{
    product_representation, product_representation_with_caps, validate_representation, ProductCaps,
    Representation, DEFAULT_REP_TOL,
};
