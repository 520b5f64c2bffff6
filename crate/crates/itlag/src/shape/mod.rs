//! Finite index posets, nerves and the simplex category.

pub mod delta;
pub mod nerve;
pub mod poset;
pub mod shapes;

pub use delta::DeltaMorphism;
pub use nerve::{nerve, SemiSimplicialSet};
pub use poset::{Poset, PosetMap};
pub use shapes::{build_shape, j_functor, Shape};
