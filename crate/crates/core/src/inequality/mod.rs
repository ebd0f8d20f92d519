//! Bell inequalities as exact-rational coefficient tensors over setting
//! tuples, their evaluation on deterministic strategies and their local
//! bounds.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::polytope::{strategies, DeterministicStrategy, Scenario, SettingTuple};
use crate::rational::{self, Rational};

pub mod catalog;
pub mod symmetry;

pub use catalog::{parse_catalog, serialize_catalog, Catalog};
pub use symmetry::{canonical_form, equivalent, CanonicalForm, Relabeling};

/// A linear expression in the (partial) correlations of a scenario together
/// with optional local bounds `lower <= I <= upper`.
///
/// The all-zero tuple carries the constant term. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellInequality {
    pub name: String,
    scenario: Scenario,
    terms: BTreeMap<SettingTuple, Rational>,
    lower: Option<Rational>,
    upper: Option<Rational>,
}

impl BellInequality {
    pub fn new(
        name: impl Into<String>,
        scenario: Scenario,
        terms: impl IntoIterator<Item = (SettingTuple, Rational)>,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (tuple, coeff) in terms {
            scenario.check_tuple(&tuple)?;
            let slot = map.entry(tuple).or_insert_with(Rational::zero);
            *slot += coeff;
        }
        map.retain(|_, c| !c.is_zero());
        if let (Some(l), Some(u)) = (&lower, &upper) {
            if l > u {
                return Err(Error::Precondition(format!(
                    "lower bound {} exceeds upper bound {}",
                    rational::format(l),
                    rational::format(u)
                )));
            }
        }
        Ok(BellInequality {
            name: name.into(),
            scenario,
            terms: map,
            lower,
            upper,
        })
    }

    /// Convenience constructor from integer coefficients without bounds.
    pub fn from_integer_terms(
        name: impl Into<String>,
        scenario: Scenario,
        terms: &[(&[usize], i64)],
    ) -> Result<Self> {
        Self::new(
            name,
            scenario,
            terms.iter().map(|(t, c)| (t.to_vec(), rational::int(*c))),
            None,
            None,
        )
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn terms(&self) -> &BTreeMap<SettingTuple, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, tuple: &[usize]) -> Rational {
        self.terms.get(tuple).cloned().unwrap_or_else(Rational::zero)
    }

    /// The coefficient of the all-unmeasured tuple.
    pub fn constant(&self) -> Rational {
        self.coefficient(&vec![0; self.scenario.parties()])
    }

    pub fn lower(&self) -> Option<&Rational> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&Rational> {
        self.upper.as_ref()
    }

    pub fn with_bounds(mut self, lower: Option<Rational>, upper: Option<Rational>) -> Result<Self> {
        if let (Some(l), Some(u)) = (&lower, &upper) {
            if l > u {
                return Err(Error::Precondition("lower bound exceeds upper bound".into()));
            }
        }
        self.lower = lower;
        self.upper = upper;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// True iff every nonzero term involves every party (CHSH-type).
    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().all(|t| t.iter().all(|&s| s != 0))
    }

    /// Sum of absolute coefficients; bounds the expression's value for any
    /// assignment of ±1-valued observables, classical or quantum.
    pub fn algebraic_max(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn evaluate(&self, strategy: &DeterministicStrategy) -> Result<Rational> {
        strategy.ensure_conforms(&self.scenario)?;
        Ok(self.evaluate_unchecked(strategy))
    }

    pub(crate) fn evaluate_unchecked(&self, strategy: &DeterministicStrategy) -> Rational {
        let mut sum = Rational::zero();
        for (tuple, coeff) in &self.terms {
            if strategy.product(tuple) == 1 {
                sum += coeff;
            } else {
                sum -= coeff;
            }
        }
        sum
    }

    /// Exact minimum and maximum over all deterministic strategies. Ties keep
    /// the lowest strategy index.
    pub fn local_bounds(&self, limits: &Limits) -> Result<LocalBounds> {
        limits.check_total_settings(self.scenario.total_settings())?;
        let mut iter = strategies(&self.scenario);
        let first = iter.next().expect("scenario has at least one strategy");
        let v = self.evaluate_unchecked(&first);
        let mut bounds = LocalBounds {
            min: v.clone(),
            max: v,
            min_witness: first.clone(),
            max_witness: first,
        };
        for s in iter {
            let v = self.evaluate_unchecked(&s);
            if v < bounds.min {
                bounds.min = v.clone();
                bounds.min_witness = s.clone();
            }
            if v > bounds.max {
                bounds.max = v;
                bounds.max_witness = s;
            }
        }
        Ok(bounds)
    }

    /// Multiplies every coefficient and bound by `factor` (> 0).
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::Precondition("scale factor must be positive".into()));
        }
        Self::new(
            self.name.clone(),
            self.scenario.clone(),
            self.terms.iter().map(|(t, c)| (t.clone(), c * factor)),
            self.lower.as_ref().map(|l| l * factor),
            self.upper.as_ref().map(|u| u * factor),
        )
    }

    /// Rescales by the least common multiple of all denominators (terms and
    /// bounds) so every coefficient is an integer. Returns the factor used.
    pub fn to_integer_coefficients(&self) -> (Self, Rational) {
        let den = rational::common_denominator(
            self.terms
                .values()
                .chain(self.lower.iter())
                .chain(self.upper.iter()),
        );
        let factor = Rational::from_integer(den);
        let scaled = self.scaled(&factor).expect("positive factor");
        (scaled, factor)
    }
}

/// Exact local-realistic range of an inequality with witnessing strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalBounds {
    #[serde(with = "rational::serde_string")]
    pub min: Rational,
    #[serde(with = "rational::serde_string")]
    pub max: Rational,
    pub min_witness: DeterministicStrategy,
    pub max_witness: DeterministicStrategy,
}
