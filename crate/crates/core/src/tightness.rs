//! Facet tests for Bell inequalities.
//!
//! A homogeneous inequality `sum a_t x_t <= b` is checked against the
//! full-correlation polytope: its bound is a facet iff the saturating vertices
//! contain as many linearly independent vectors as the polytope's span. Any
//! other inequality is checked against the all-correlation polytope, where
//! the saturating vertices, each prefixed with a `1`, must reach rank equal to
//! the ambient dimension `d` (affine hull of dimension `d - 1`).
//!
//! All arithmetic is exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::BellInequality;
use crate::limits::Limits;
use crate::linalg;
use crate::polytope::{enumerate_vertices, PolytopeKind, Vertex};
use crate::rational::{self, Rational};
use crate::transforms::homogenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Side::Lower),
            "upper" => Ok(Side::Upper),
            other => Err(Error::Config(format!("unknown side `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationReport {
    pub bound_side: Side,
    #[serde(with = "rational::serde_string")]
    pub bound: Rational,
    pub polytope: PolytopeKind,
    pub ambient_dimension: usize,
    pub vertex_count: usize,
    pub saturating_count: usize,
    /// Vertices strictly beyond the bound; nonzero means the bound is invalid.
    pub violating_count: usize,
    pub rank: usize,
    pub required_rank: usize,
    /// The vertices span less than the ambient space; `required_rank` then
    /// refers to the span.
    pub span_deficient: bool,
    pub is_tight: bool,
    pub saturating_vertices: Vec<Vertex>,
}

impl SaturationReport {
    /// `saturating_count / vertex_count`.
    pub fn saturating_fraction(&self) -> Rational {
        rational::frac(self.saturating_count as i64, self.vertex_count as i64)
    }
}

/// Polytope an inequality is naturally a face candidate of.
pub fn polytope_kind(ineq: &BellInequality) -> PolytopeKind {
    if ineq.is_homogeneous() {
        PolytopeKind::Full
    } else {
        PolytopeKind::All
    }
}

fn bound_on(ineq: &BellInequality, side: Side) -> Result<Rational> {
    match side {
        Side::Lower => ineq.lower().cloned().ok_or(Error::MissingBound("lower")),
        Side::Upper => ineq.upper().cloned().ok_or(Error::MissingBound("upper")),
    }
}

struct Classified {
    all: Vec<Vertex>,
    saturating: Vec<Vertex>,
    violating: usize,
}

fn classify(ineq: &BellInequality, side: Side, bound: &Rational, limits: &Limits) -> Result<Classified> {
    let all = enumerate_vertices(ineq.scenario(), polytope_kind(ineq), limits)?;
    let mut saturating = Vec::new();
    let mut violating = 0;
    for v in &all {
        let value = ineq.evaluate_unchecked(&v.witness);
        if &value == bound {
            saturating.push(v.clone());
        } else if match side {
            Side::Lower => &value < bound,
            Side::Upper => &value > bound,
        } {
            violating += 1;
        }
    }
    Ok(Classified {
        all,
        saturating,
        violating,
    })
}

/// Vertices of the matching polytope attaining the bound on `side` exactly.
pub fn saturating_vertices(ineq: &BellInequality, side: Side, limits: &Limits) -> Result<Vec<Vertex>> {
    let bound = bound_on(ineq, side)?;
    Ok(classify(ineq, side, &bound, limits)?.saturating)
}

/// Rank of the vectors `(1, v)`.
pub fn augmented_rank(vectors: &[Vertex]) -> Result<usize> {
    if vectors.is_empty() {
        return Err(Error::Precondition("augmented_rank needs at least one vector".into()));
    }
    let dim = vectors[0].dimension();
    if let Some(bad) = vectors.iter().find(|v| v.dimension() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dimension(),
        });
    }
    let rows: Vec<Vec<i8>> = vectors.iter().map(Vertex::augmented).collect();
    linalg::small_rank(&rows)
}

fn linear_rank(vectors: &[Vertex]) -> Result<usize> {
    let rows: Vec<Vec<i8>> = vectors.iter().map(|v| v.coords.clone()).collect();
    linalg::small_rank(&rows)
}

pub fn is_tight(ineq: &BellInequality, side: Side, limits: &Limits) -> Result<SaturationReport> {
    let bound = bound_on(ineq, side)?;
    let kind = polytope_kind(ineq);
    let Classified {
        all,
        saturating,
        violating,
    } = classify(ineq, side, &bound, limits)?;
    let ambient = ineq.scenario().dimension(kind);
    let (rank, required) = match kind {
        PolytopeKind::Full => {
            let rank = if saturating.is_empty() { 0 } else { linear_rank(&saturating)? };
            (rank, linear_rank(&all)?)
        }
        PolytopeKind::All => {
            let rank = if saturating.is_empty() { 0 } else { augmented_rank(&saturating)? };
            (rank, augmented_rank(&all)? - 1)
        }
    };
    let is_tight = violating == 0
        && !saturating.is_empty()
        && saturating.len() < all.len()
        && rank == required;
    Ok(SaturationReport {
        bound_side: side,
        bound,
        polytope: kind,
        ambient_dimension: ambient,
        vertex_count: all.len(),
        saturating_count: saturating.len(),
        violating_count: violating,
        rank,
        required_rank: required,
        span_deficient: required != ambient,
        is_tight,
        saturating_vertices: saturating,
    })
}

/// Homogenizes a CH-type inequality that is a facet on its lower side and
/// reports whether the result is again a facet on its lower side.
pub fn check_tightness_preservation(ineq: &BellInequality, limits: &Limits) -> Result<bool> {
    if ineq.is_homogeneous() {
        return Err(Error::Precondition(format!("`{}` is not CH-type", ineq.name)));
    }
    if !is_tight(ineq, Side::Lower, limits)?.is_tight {
        return Err(Error::Precondition(format!(
            "`{}` is not tight on its lower side",
            ineq.name
        )));
    }
    let h = homogenize(ineq, limits)?;
    Ok(is_tight(&h.inequality, Side::Lower, limits)?.is_tight)
}
