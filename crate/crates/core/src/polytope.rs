//! Deterministic local strategies and the two correlation polytopes they
//! generate.
//!
//! A *full-correlation* vertex lists the product of all parties' outcomes for
//! every setting tuple `(t_1, .., t_n)` with `1 <= t_p <= settings[p]`. An
//! *all-correlation* vertex additionally lists the marginal and partial
//! correlations, i.e. the product over every nonempty subset of parties.
//!
//! Setting tuples use index `0` for "party not measured" throughout the
//! crate, so a coordinate of either polytope is identified by a tuple: full
//! tuples have no zero entry, all-correlation tuples are every tuple except
//! the all-zero one.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// One setting index per party; `0` means the party is not measured.
pub type SettingTuple = Vec<usize>;

/// Party count and per-party setting count of a two-outcome Bell scenario.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Scenario {
    settings: Vec<usize>,
}

impl Scenario {
    pub fn new(settings: Vec<usize>) -> Result<Self> {
        if settings.is_empty() {
            return Err(Error::InvalidScenario("at least one party is required".into()));
        }
        if let Some(p) = settings.iter().position(|&m| m == 0) {
            return Err(Error::InvalidScenario(format!(
                "party {p} has no measurement settings"
            )));
        }
        Ok(Scenario { settings })
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn settings_of(&self, party: usize) -> usize {
        self.settings[party]
    }

    pub fn total_settings(&self) -> usize {
        self.settings.iter().sum()
    }

    /// Ambient dimension of the full-correlation polytope: `prod m_p`.
    pub fn full_dimension(&self) -> usize {
        self.settings.iter().product()
    }

    /// Ambient dimension of the all-correlation polytope: `prod (m_p + 1) - 1`.
    pub fn all_dimension(&self) -> usize {
        self.settings.iter().map(|m| m + 1).product::<usize>() - 1
    }

    /// Same parties, one extra setting each.
    pub fn extended(&self) -> Scenario {
        Scenario {
            settings: self.settings.iter().map(|m| m + 1).collect(),
        }
    }

    /// Whether `tuple` is a legal setting tuple (zeros allowed).
    pub fn check_tuple(&self, tuple: &[usize]) -> Result<()> {
        if tuple.len() != self.parties() {
            return Err(Error::DimensionMismatch {
                expected: self.parties(),
                found: tuple.len(),
            });
        }
        for (p, (&t, &m)) in tuple.iter().zip(&self.settings).enumerate() {
            if t > m {
                return Err(Error::InvalidScenario(format!(
                    "setting index {t} out of range for party {p} with {m} settings"
                )));
            }
        }
        Ok(())
    }

    /// Coordinate labels of the requested polytope, in canonical order.
    pub fn coordinate_tuples(&self, kind: PolytopeKind) -> Vec<SettingTuple> {
        match kind {
            PolytopeKind::Full => product_tuples(&self.settings, 1),
            PolytopeKind::All => {
                let mut tuples = product_tuples(&self.settings, 0);
                tuples.retain(|t| t.iter().any(|&s| s != 0));
                tuples.sort_by(|a, b| all_correlation_key(a).cmp(&all_correlation_key(b)));
                tuples
            }
        }
    }

    pub fn dimension(&self, kind: PolytopeKind) -> usize {
        match kind {
            PolytopeKind::Full => self.full_dimension(),
            PolytopeKind::All => self.all_dimension(),
        }
    }
}

impl TryFrom<Vec<usize>> for Scenario {
    type Error = Error;

    fn try_from(settings: Vec<usize>) -> Result<Self> {
        Scenario::new(settings)
    }
}

impl From<Scenario> for Vec<usize> {
    fn from(s: Scenario) -> Self {
        s.settings
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.settings.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

/// All tuples with entries `lo..=settings[p]`, lexicographic.
fn product_tuples(settings: &[usize], lo: usize) -> Vec<SettingTuple> {
    let mut out: Vec<SettingTuple> = vec![Vec::with_capacity(settings.len())];
    for &m in settings {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=m).map(move |s| {
                    let mut t = prefix.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    out
}

/// Subset size, then the measured parties, then their settings.
fn all_correlation_key(tuple: &[usize]) -> (usize, Vec<usize>, Vec<usize>) {
    let parties: Vec<usize> = (0..tuple.len()).filter(|&p| tuple[p] != 0).collect();
    let settings = parties.iter().map(|&p| tuple[p]).collect();
    (parties.len(), parties, settings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeKind {
    /// Full-correlation (CHSH-type) polytope.
    Full,
    /// All-correlation (CH-type) polytope.
    All,
}

impl std::str::FromStr for PolytopeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(PolytopeKind::Full),
            "all" => Ok(PolytopeKind::All),
            other => Err(Error::Config(format!("unknown polytope kind `{other}`"))),
        }
    }
}

/// A ±1 outcome for every (party, setting) pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    values: Vec<Vec<i8>>,
}

impl DeterministicStrategy {
    pub fn new(values: Vec<Vec<i8>>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| v.is_empty()) {
            return Err(Error::Precondition(
                "strategy must assign at least one setting per party".into(),
            ));
        }
        if values.iter().flatten().any(|&v| v != 1 && v != -1) {
            return Err(Error::Precondition("strategy values must be +1 or -1".into()));
        }
        Ok(DeterministicStrategy { values })
    }

    /// Every outcome `+1`.
    pub fn all_plus(scenario: &Scenario) -> Self {
        DeterministicStrategy {
            values: scenario.settings().iter().map(|&m| vec![1; m]).collect(),
        }
    }

    /// Decodes a strategy index. Flattened position `k` (party-major,
    /// settings ascending) is stored in bit `total - 1 - k`, a set bit meaning
    /// `-1`; increasing indices therefore enumerate strategies in
    /// lexicographic order with `+1 < -1`.
    pub fn from_index(scenario: &Scenario, index: u64) -> Self {
        let total = scenario.total_settings();
        let mut k = 0;
        let values = scenario
            .settings()
            .iter()
            .map(|&m| {
                (0..m)
                    .map(|_| {
                        let bit = (index >> (total - 1 - k)) & 1;
                        k += 1;
                        if bit == 1 {
                            -1
                        } else {
                            1
                        }
                    })
                    .collect()
            })
            .collect();
        DeterministicStrategy { values }
    }

    pub fn to_index(&self) -> u64 {
        self.values
            .iter()
            .flatten()
            .fold(0u64, |acc, &v| (acc << 1) | u64::from(v == -1))
    }

    pub fn values(&self) -> &[Vec<i8>] {
        &self.values
    }

    /// Outcome of `party` at `setting` (1-based).
    pub fn value(&self, party: usize, setting: usize) -> i8 {
        self.values[party][setting - 1]
    }

    pub fn set(&mut self, party: usize, setting: usize, value: i8) {
        assert!(value == 1 || value == -1);
        self.values[party][setting - 1] = value;
    }

    /// Product of the outcomes selected by `tuple`; unmeasured parties
    /// contribute `1`.
    pub fn product(&self, tuple: &[usize]) -> i8 {
        tuple
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0)
            .map(|(p, &s)| self.values[p][s - 1])
            .product()
    }

    pub fn conforms_to(&self, scenario: &Scenario) -> bool {
        self.values.len() == scenario.parties()
            && self
                .values
                .iter()
                .zip(scenario.settings())
                .all(|(v, &m)| v.len() == m)
    }

    pub(crate) fn ensure_conforms(&self, scenario: &Scenario) -> Result<()> {
        if self.conforms_to(scenario) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "strategy shape does not match scenario {scenario}"
            )))
        }
    }

    /// Inserts a new setting at position 1 of every party with outcome
    /// `new_values[p]`; old setting `s` becomes `s + 1`.
    pub fn extend_front(&self, new_values: &[i8]) -> Self {
        assert_eq!(new_values.len(), self.values.len());
        let values = self
            .values
            .iter()
            .zip(new_values)
            .map(|(v, &n)| {
                let mut out = Vec::with_capacity(v.len() + 1);
                out.push(n);
                out.extend_from_slice(v);
                out
            })
            .collect();
        DeterministicStrategy { values }
    }
}

/// A polytope vertex: the ±1 coordinate vector of a deterministic strategy.
#[derive(Debug, Clone, Serialize)]
pub struct Vertex {
    pub coords: Vec<i8>,
    pub kind: PolytopeKind,
    /// Coordinate position -> setting tuple it represents.
    #[serde(skip)]
    pub index_map: Arc<Vec<SettingTuple>>,
    /// Lowest-index strategy mapping onto this vertex.
    pub witness: DeterministicStrategy,
}

impl PartialEq for Vertex {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.coords == other.coords
    }
}

impl Eq for Vertex {}

impl Vertex {
    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    /// The vertex with a leading `1` coordinate prepended.
    pub fn augmented(&self) -> Vec<i8> {
        std::iter::once(1).chain(self.coords.iter().copied()).collect()
    }
}

fn vertex_with_map(
    strategy: &DeterministicStrategy,
    kind: PolytopeKind,
    index_map: &Arc<Vec<SettingTuple>>,
) -> Vertex {
    Vertex {
        coords: index_map.iter().map(|t| strategy.product(t)).collect(),
        kind,
        index_map: Arc::clone(index_map),
        witness: strategy.clone(),
    }
}

pub fn strategy_to_vertex(
    scenario: &Scenario,
    strategy: &DeterministicStrategy,
    kind: PolytopeKind,
) -> Result<Vertex> {
    strategy.ensure_conforms(scenario)?;
    let map = Arc::new(scenario.coordinate_tuples(kind));
    Ok(vertex_with_map(strategy, kind, &map))
}

/// Iterator over all `2^total` strategies of a scenario, in index order.
pub fn strategies(scenario: &Scenario) -> impl Iterator<Item = DeterministicStrategy> + '_ {
    let count = 1u64 << scenario.total_settings();
    (0..count).map(move |i| DeterministicStrategy::from_index(scenario, i))
}

/// Distinct vertices of the requested polytope, sorted by coordinates, each
/// carrying its lowest-index witnessing strategy.
pub fn enumerate_vertices(
    scenario: &Scenario,
    kind: PolytopeKind,
    limits: &Limits,
) -> Result<Vec<Vertex>> {
    limits.check_total_settings(scenario.total_settings())?;
    let map = Arc::new(scenario.coordinate_tuples(kind));
    let mut seen: HashMap<Vec<i8>, DeterministicStrategy> = HashMap::new();
    for strategy in strategies(scenario) {
        let coords: Vec<i8> = map.iter().map(|t| strategy.product(t)).collect();
        seen.entry(coords).or_insert(strategy);
    }
    let mut vertices: Vec<Vertex> = seen
        .into_iter()
        .map(|(coords, witness)| Vertex {
            coords,
            kind,
            index_map: Arc::clone(&map),
            witness,
        })
        .collect();
    vertices.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(vertices)
}
