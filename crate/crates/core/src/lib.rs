//! Shape gradient flows for the first Laplacian eigenvalue.
//!
//! Star-shaped domains and convex bodies, P1 finite elements with
//! Dirichlet or Robin conditions, implicit Euler (minimizing movement)
//! steps in several shape metrics, and numerical checks of the
//! associated inequalities.

pub mod catalog;
pub mod eigen;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod geometry;
pub mod mesh;
pub mod negbeta;
pub mod optimize;
pub mod sparse;
pub mod variation;
pub mod verify;

pub use error::{Error, Result};
