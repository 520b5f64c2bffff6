//! Exact homological algebra over ℚ.

pub mod complex;
pub mod diagram;
pub mod forms;
pub mod map;
pub mod ops;

pub use complex::RationalComplex;
pub use diagram::{holim, is_limit_cone, strict_limit, Diagram, Holim, StrictLimit};
pub use forms::BilinearForm;
pub use map::{ChainHomotopy, ChainMap};
pub use ops::{cone, fiber, hpb, tensor, Hpb};
