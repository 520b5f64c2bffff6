//! Exact rational workbench for iterated Lagrangian correspondences.

pub mod cobordism;
pub mod error;
pub mod grid;
pub mod homlin;
pub mod lag;
pub mod linalg;
pub mod random;
pub mod rational;
pub mod shape;
pub mod spine;
pub mod span_nondeg;
pub mod suites;
pub mod twisted;

pub use error::{Error, Result};
pub use rational::Q;
