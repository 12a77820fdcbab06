//! Numerical toolkit for s-spaces: structured frame families over a manifold
//! through which (0,2) tensor fields become equivariant matrix-valued maps.
//!
//! The crate is organised bottom-up: [`numerics`] and [`geometry`] supply the
//! linear algebra and embedded-manifold layer, [`groups`] the matrix Lie groups,
//! [`sspace`] the tensor/matrix correspondence, [`morphisms`], [`connections`]
//! and [`naturality`] the constructions built on it, and [`catalog`] a set of
//! concrete instances with machine-checkable claims.

pub mod catalog;
pub mod connections;
pub mod error;
pub mod geometry;
pub mod groups;
pub mod morphisms;
pub mod naturality;
pub mod numerics;
pub mod report;
pub mod rng;
pub mod sspace;

pub use connections::{ConnectionFunction, SSpaceConnection};
pub use error::{Error, Result};
pub use geometry::{Manifold, ManifoldRef, SmoothMap, Tangent, Tensor02Field};
pub use groups::{AlgebraElement, Factor, GroupElement, LieGroup};
pub use morphisms::SSpaceMorphism;
pub use naturality::{Atlas, NaturalityReport};
pub use numerics::{DiffConfig, Mat, Vector};
pub use report::CheckReport;
pub use rng::Rng;
pub use sspace::{BaseChange, MatrixMap, SSpace};
