//! R-hulloids: complements of unions of open radius-R balls.
//!
//! The crate has two computational pillars and a gallery built on top of
//! them:
//!
//! * [`hulloid2d`] — exact planar hulloids of point triples via the three
//!   circles through vertex pairs, plus a property checker that certifies
//!   a planar set against the triple criterion;
//! * [`grid`] — a brute-force occupancy-lattice oracle (exact distance
//!   transform, offsets, double-erosion hulloids, Hausdorff distance,
//!   connectivity, membership tests) in dimensions 2 to 4;
//! * [`examples`] — named constructions (regular simplex vertex sets,
//!   disconnected hulloids, a non-closed limit sequence, a membership-gap
//!   set) each with a certification routine that replays its defining
//!   properties through the oracle.
//!
//! Supporting modules: [`geom`] (points, balls, circumspheres, lenses),
//! [`shape`] (declarative shapes for rasterization), [`gridio`] (binary
//! grid dumps), [`report`] (named checks with tolerances).

pub mod error;
pub mod examples;
pub mod geom;
pub mod grid;
pub mod gridio;
pub mod hulloid2d;
pub mod report;
pub mod shape;

pub use error::{Error, Result};
pub use examples::{BuiltExample, CertifyOptions, ExampleSpec, SimplexConfig};
pub use geom::{Ball, Lens, Point, PointSet, TriangleClass};
pub use grid::{Grid, HulloidResult, OffsetMode, Window};
pub use hulloid2d::{CurvilinearTriangle, QrViolation, TripleHulloid};
pub use report::{Check, VerificationReport};
pub use shape::ShapeExpr;
