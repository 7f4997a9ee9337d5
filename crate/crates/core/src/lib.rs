//! Exact-arithmetic calculus on finite poset pairs: order complexes and
//! their homology, the conditions (P1)/(P2) controlling when homotopy
//! limits agree with total cofibres, chain-level hocolim/holim/Γ for
//! poset diagrams of chain complexes, derived inverse limits lim^p, and
//! the spectral sequence of the filtered holim complex.
//!
//! All arithmetic is exact: arbitrary-precision integers for homology
//! and lattice computations, exact rationals or prime fields for
//! spectral sequence pages. No floating point anywhere.

pub mod conditions;
pub mod diagram;
pub mod error;
pub mod field;
pub mod homology;
pub mod json;
pub mod lattice;
pub mod limits;
pub mod matrix;
pub mod nerve;
pub mod normal_form;
pub mod poset;
pub mod random;
pub mod spectral;
pub mod subquotient;
pub mod total;

pub use error::Error;
pub use matrix::IntegerMatrix;
pub use poset::{Poset, PosetPair};
pub use subquotient::SubquotientGroup;
