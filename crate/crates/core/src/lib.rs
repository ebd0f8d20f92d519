//! Two-outcome Bell inequalities: local polytopes, exact bounds and facet
//! tests, homogenization to full-correlation form, symmetry equivalence, and
//! quantum violation on qubits.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod inequality;
pub mod limits;
pub mod linalg;
pub mod polytope;
pub mod quantum;
pub mod rational;
pub mod tightness;
pub mod transforms;

pub use error::{Error, Result};
pub use inequality::{canonical_form, equivalent, BellInequality, Catalog, LocalBounds, Relabeling};
pub use limits::Limits;
pub use polytope::{enumerate_vertices, DeterministicStrategy, PolytopeKind, Scenario, Vertex};
pub use rational::Rational;
pub use tightness::{check_tightness_preservation, is_tight, SaturationReport, Side};
pub use transforms::{dehomogenize, homogenize, Homogenized};
