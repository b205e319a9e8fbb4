//! Space-time medusas of colored moving points, measured by the extended and
//! image persistent homology of the time function.
//!
//! The pipeline is: trajectories ([`builder::TrajectorySet`]) are sliced per
//! frame into Delaunay/alpha complexes ([`geometry`]), stitched into a filtered
//! complex of cells ([`complex::Medusa`]), reduced over GF(2)
//! ([`persistence`]) and summarized ([`summary`]). The [`oracle`] module holds
//! slow, independent verifiers used by tests and the `oracle` CLI verb.

pub mod builder;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod frames;
pub mod geometry;
pub mod oracle;
pub mod persistence;
pub mod pipeline;
pub mod rng;
pub mod summary;
pub mod synth;
pub mod time;

pub use builder::{build_inclusion, build_medusa, BuildDiagnostics, ComplexKind, TargetSpec, TrajectorySet};
pub use complex::{Cell, CellId, CellKind, ColorScope, InclusionMap, Medusa};
pub use error::{Error, Result};
pub use frames::{parse_frames, write_frames};
pub use persistence::{
    extended_persistence, image_persistence, Dot, PersistenceDiagram, Subdiagram,
};
pub use pipeline::{analyze, AnalysisConfig, InclusionSpec};
pub use summary::{hole_type, summarize, HoleType, SummaryTable};
pub use time::{Rational, TimeGrid};
