//! Numerical laboratory for conformally compact static Einstein 3-manifolds.
//!
//! Boundary expansions, minimal graphs meeting the conformal boundary
//! orthogonally, renormalized area and the static normal flow.

pub mod autodiff;
pub mod cli;
pub mod error;
pub mod field;
pub mod flow;
pub mod geometry;
pub mod io;
pub mod models;
pub mod quadrature;
pub mod renarea;
pub mod rigidity;
pub mod series;
pub mod spectral;
pub mod surface;

pub use error::{Error, Result};
pub use geometry::{ChartPoint, Geometry3, Which};
pub use models::{boundary_data, horowitz_myers, hyperbolic3, hyperbolic3_anchored, MetricModel};
