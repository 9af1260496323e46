//! Star-metric spaces.
//!
//! A t-definer `⋆` is a commutative, associative, monotone, continuous
//! operator on `[0, ∞)` with identity `0`. A ⋆-metric replaces the usual
//! triangle inequality with `d(x, y) ≤ d(x, z) ⋆ d(z, y)`.
//!
//! The crate provides:
//!
//! - [`tdefiner`]: the operator type, the four built-ins, residuums
//!   (closed form and bisection), pointwise comparison and sampled axiom
//!   checks.
//! - [`metric`]: residuum-induced metrics on `[0, ∞)`, the signed-line
//!   extensions, finite products and the ⋆-metric axiom checker.
//! - [`topology`]: open balls, interior witnesses, Hausdorff separation
//!   radii, finite normal separation, product ball inclusion and ball
//!   membership grids.
//! - [`index`]: a vantage-point tree whose pruning bounds come from the
//!   residuation property, plus the brute-force oracle.

pub mod error;
pub mod index;
pub mod metric;
pub mod point;
pub mod report;
pub mod tdefiner;
pub mod topology;

pub use error::{Error, Result};
pub use index::{brute_force, brute_force_range, Neighbor, SearchResult, VpTree};
pub use metric::{Domain, StarMetricSpace};
pub use point::{Point, PointSet};
pub use report::{LawCheck, LawReport, Witness};
pub use tdefiner::{Ordering, TDefiner, ToleranceConfig};
pub use topology::{Ball, MembershipGrid, Window};
