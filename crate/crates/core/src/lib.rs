//! Degree-3 spanning trees of Euclidean point sets.
//!
//! The main entry point is [`tree3::degree3_tree`], which turns a Euclidean
//! minimum spanning tree into a spanning tree of maximum degree 3 whose weight
//! is at most [`constants::R_STAR`] times the MST weight. The guarantee rests
//! on a handful of numeric artifacts that this crate recomputes and checks:
//!
//! * [`coeff`] evaluates weighted distance-sum bounds at fixed multiplier
//!   vectors to obtain the per-block path coefficients;
//! * [`lp`] rebuilds the linear system over sorted star distances and proves it
//!   infeasible with an exact rational certificate;
//! * [`lower_bound`] builds the simplex-layer family of instances that no
//!   degree-3 tree can approximate better than about 1.447.
//!
//! [`oracles`] holds the exponential-time exact solvers used both inside the
//! path construction and as ground truth in tests.

pub mod coeff;
pub mod constants;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod lower_bound;
pub mod lp;
pub mod mst;
pub mod oracles;
pub mod starpath;
pub mod tree3;

pub use error::{Error, Result};
pub use geometry::{distance, star_weight, Point, PointSet, StarInstance};
pub use mst::{mst, WeightedTree};
