//! Simplicial models of oriented cobordisms, cut into pieces, with cochains, fundamental
//! classes, the integration map `ι` and Poincaré–Lefschetz duality.

pub mod integration;
pub mod presentation;
pub mod simplicial;

pub use integration::{
    check_iota, check_iota_all, epsilon, iota_adjoint, orcut, orcut_between, orientation_check, stokes_check,
    LefschetzVerdict, StokesReport,
};
pub use presentation::{CobordismPresentation, Index};
pub use simplicial::{
    cochain_algebra, cochains, cup_pairing, fundamental_functional, restriction, trivial_cochains, FlatLocalSystem,
    OrientedSimplicialComplex,
};
