//! Executable double-categorical constructions over finite data.
//!
//! * [`fincat`]: finite categories, functors, transformations, commas, colimits.
//! * [`prof`]: profunctors, coend composition, cells, companions and conjoints.
//! * [`kanext`]: copresheaves, presheaves, tensors and pointwise left Kan extensions.
//! * [`sifted`]: categories of elements, span categories, cosiftedness.
//! * [`fpmonad`]: the free finite-product completion, truncated by sequence length.
//! * [`algebra`]: chosen finite products and colax structure cells.

pub mod algebra;
pub mod fincat;
pub mod fpmonad;
pub mod kanext;
pub mod prof;
pub mod sifted;

pub use fincat::{FinCat, FinFunctor, Mor, NatTransf, Obj};
pub use prof::{ProCell, Profunctor};
