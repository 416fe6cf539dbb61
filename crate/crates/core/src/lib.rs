//! Quasi-monogenic pure cubic fields of a fixed discriminant D = -3n^2,
//! computed from rational points on the Mordell curves Y^2 = 4X^3 + D and
//! Y^2 = 4X^3 - 27D.
//!
//! The crate is organised bottom-up:
//! - [`exactmath`]: factorisation, cube-free classes, exact roots;
//! - [`forms`]: binary cubic forms, covariants, cubic rings, index forms;
//! - [`mordell`]: curve arithmetic and the 3-isogenies between the two curves;
//! - [`cocycle`]: points to fields and to F3 exponent vectors;
//! - [`engine`]: F3 matrices, field enumeration and counting bounds;
//! - [`fieldkit`]: integral bases and monogenity certificates;
//! - [`ingest`]: generator files and table fixtures;
//! - [`pipeline`]: end-to-end analysis and table audits.

pub mod cocycle;
pub mod engine;
pub mod error;
pub mod exactmath;
pub mod fieldkit;
pub mod forms;
pub mod ingest;
pub mod mordell;
pub mod pipeline;

pub use error::{Error, Result};
