//! Equivalence of Bell expressions under relabelings.
//!
//! The group acting here is generated by
//! - permutations of parties with equal setting counts,
//! - permutations of the settings of each party,
//! - outcome flips of individual (party, setting) pairs,
//! - multiplication by a positive rational.
//!
//! Constant shifts are *not* part of the group: `I` and `I + c` are different
//! expressions. Bounds are ignored; they follow from the terms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::BellInequality;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::polytope::{Scenario, SettingTuple};
use crate::rational::{self, Rational};

/// A group element mapping one inequality onto another.
///
/// Old party `p` becomes party `parties[p]`; its old setting `s` becomes
/// setting `settings[p][s - 1]` and has its outcome negated when
/// `flips[p][s - 1]` is set. All coefficients are finally multiplied by
/// `scale`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relabeling {
    pub parties: Vec<usize>,
    pub settings: Vec<Vec<usize>>,
    pub flips: Vec<Vec<bool>>,
    #[serde(with = "rational::serde_string")]
    pub scale: Rational,
}

impl Relabeling {
    pub fn identity(scenario: &Scenario) -> Self {
        Relabeling {
            parties: (0..scenario.parties()).collect(),
            settings: scenario.settings().iter().map(|&m| (1..=m).collect()).collect(),
            flips: scenario.settings().iter().map(|&m| vec![false; m]).collect(),
            scale: rational::int(1),
        }
    }

    /// Maps a setting tuple, returning the new tuple and the sign picked up
    /// from outcome flips.
    pub fn map_tuple(&self, tuple: &[usize]) -> (SettingTuple, i8) {
        let mut out = vec![0; tuple.len()];
        let mut sign = 1;
        for (p, &s) in tuple.iter().enumerate() {
            if s != 0 {
                out[self.parties[p]] = self.settings[p][s - 1];
                if self.flips[p][s - 1] {
                    sign = -sign;
                }
            }
        }
        (out, sign)
    }

    pub fn apply(&self, ineq: &BellInequality) -> Result<BellInequality> {
        let scenario = ineq.scenario();
        if self.parties.len() != scenario.parties() {
            return Err(Error::DimensionMismatch {
                expected: scenario.parties(),
                found: self.parties.len(),
            });
        }
        let mut new_settings = vec![0; scenario.parties()];
        for (p, &q) in self.parties.iter().enumerate() {
            new_settings[q] = scenario.settings_of(p);
        }
        let terms = ineq.terms().iter().map(|(t, c)| {
            let (nt, sign) = self.map_tuple(t);
            (nt, c * &self.scale * rational::int(i64::from(sign)))
        });
        BellInequality::new(
            ineq.name.clone(),
            Scenario::new(new_settings)?,
            terms,
            None,
            None,
        )
    }
}

/// Lexicographically minimal representative of an inequality's orbit, as a
/// dense primitive-integer coefficient vector over all setting tuples of the
/// sorted scenario (tuples in lexicographic order, zeros included).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub settings: Vec<usize>,
    pub coefficients: Vec<i128>,
}

/// Coefficients scaled by a positive rational to coprime integers.
fn primitive_terms(ineq: &BellInequality) -> Result<(Vec<(SettingTuple, i128)>, Rational)> {
    let den = rational::common_denominator(ineq.terms().values());
    let nums: Vec<BigInt> = ineq
        .terms()
        .values()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let g = nums.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    let g = if g.is_zero() { BigInt::from(1) } else { g };
    let scale = Rational::new(den, g.clone());
    let terms = ineq
        .terms()
        .keys()
        .zip(nums)
        .map(|(t, n)| {
            (&n / &g)
                .to_i128()
                .map(|v| (t.clone(), v))
                .ok_or_else(|| Error::Unsupported("coefficient too large for canonicalization".into()))
        })
        .collect::<Result<_>>()?;
    debug_assert!(scale.is_positive());
    Ok((terms, scale))
}

/// Setting permutation plus flips for one party, precomputed as a lookup
/// `old setting (0..=m) -> (new setting, negate)`.
struct LocalOp {
    perm: Vec<usize>,
    flips: Vec<bool>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n);
            out.push(p);
        }
    }
    out.sort();
    out
}

fn local_ops(m: usize) -> Vec<LocalOp> {
    let perms = permutations(m);
    let mut ops = Vec::with_capacity(perms.len() << m);
    for perm in &perms {
        for mask in 0u32..(1 << m) {
            ops.push(LocalOp {
                perm: perm.clone(),
                flips: (0..m).map(|s| mask >> s & 1 == 1).collect(),
            });
        }
    }
    ops
}

/// Party permutations `old -> new` with `target[new] == settings[old]`.
fn party_maps(settings: &[usize], target: &[usize]) -> Vec<Vec<usize>> {
    permutations(settings.len())
        .into_iter()
        .map(|p| p.into_iter().map(|x| x - 1).collect::<Vec<_>>())
        .filter(|map| (0..settings.len()).all(|old| target[map[old]] == settings[old]))
        .collect()
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn orbit_size(settings: &[usize], party_maps: usize) -> u128 {
    settings.iter().fold(party_maps as u128, |acc, &m| {
        acc.saturating_mul(factorial(m)).saturating_mul(1u128 << m.min(100))
    })
}

/// Mixed-radix index of a tuple over `settings[p] + 1` values per slot.
fn dense_index(tuple: &[usize], settings: &[usize]) -> usize {
    tuple
        .iter()
        .zip(settings)
        .fold(0, |acc, (&t, &m)| acc * (m + 1) + t)
}

/// Walks every group element taking `source` (old scenario `settings`) into
/// scenario `target`, calling `visit` with the transformed dense vector. Stops
/// early when `visit` returns `true`.
fn walk_orbit(
    terms: &[(SettingTuple, i128)],
    settings: &[usize],
    target: &[usize],
    limits: &Limits,
    mut visit: impl FnMut(&[i128], &[usize], &[&LocalOp]) -> bool,
) -> Result<()> {
    let maps = party_maps(settings, target);
    limits.check_orbit(orbit_size(settings, maps.len()))?;
    let ops: Vec<Vec<LocalOp>> = settings.iter().map(|&m| local_ops(m)).collect();
    let len: usize = target.iter().map(|m| m + 1).product();
    let mut dense = vec![0i128; len];
    let parties = settings.len();
    let mut mapped = vec![0usize; parties];

    let mut chosen: Vec<&LocalOp> = Vec::with_capacity(parties);
    let mut written: Vec<usize> = Vec::with_capacity(terms.len());

    for map in &maps {
        let mut odometer = vec![0usize; parties];
        loop {
            chosen.clear();
            chosen.extend((0..parties).map(|p| &ops[p][odometer[p]]));
            for &i in &written {
                dense[i] = 0;
            }
            written.clear();
            for (tuple, coeff) in terms {
                let mut negate = false;
                for (p, &s) in tuple.iter().enumerate() {
                    if s == 0 {
                        mapped[map[p]] = 0;
                    } else {
                        mapped[map[p]] = chosen[p].perm[s - 1];
                        negate ^= chosen[p].flips[s - 1];
                    }
                }
                let i = dense_index(&mapped, target);
                dense[i] = if negate { -coeff } else { *coeff };
                written.push(i);
            }
            if visit(&dense, map, &chosen) {
                return Ok(());
            }
            // advance
            let mut p = 0;
            loop {
                if p == parties {
                    break;
                }
                odometer[p] += 1;
                if odometer[p] < ops[p].len() {
                    break;
                }
                odometer[p] = 0;
                p += 1;
            }
            if p == parties {
                break;
            }
        }
    }
    Ok(())
}

pub fn canonical_form(ineq: &BellInequality, limits: &Limits) -> Result<CanonicalForm> {
    let (terms, _) = primitive_terms(ineq)?;
    let settings = ineq.scenario().settings().to_vec();
    let mut target = settings.clone();
    target.sort_unstable();
    let mut best: Option<Vec<i128>> = None;
    walk_orbit(&terms, &settings, &target, limits, |dense, _, _| {
        if best.as_deref().is_none_or(|b| dense < b) {
            best = Some(dense.to_vec());
        }
        false
    })?;
    Ok(CanonicalForm {
        settings: target,
        coefficients: best.expect("orbit contains the identity"),
    })
}

/// Returns a relabeling taking `a` onto `b` if one exists. Scenarios with
/// different multisets of setting counts are simply not equivalent.
pub fn equivalent(
    a: &BellInequality,
    b: &BellInequality,
    limits: &Limits,
) -> Result<Option<Relabeling>> {
    let mut sa = a.scenario().settings().to_vec();
    let mut sb = b.scenario().settings().to_vec();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb || a.terms().len() != b.terms().len() {
        return Ok(None);
    }
    let (ta, scale_a) = primitive_terms(a)?;
    let (tb, scale_b) = primitive_terms(b)?;
    let target = b.scenario().settings().to_vec();
    let len: usize = target.iter().map(|m| m + 1).product();
    let mut goal = vec![0i128; len];
    for (t, c) in &tb {
        goal[dense_index(t, &target)] = *c;
    }
    let mut found = None;
    walk_orbit(
        &ta,
        a.scenario().settings(),
        &target,
        limits,
        |dense, map, chosen| {
            if dense == goal.as_slice() {
                found = Some(Relabeling {
                    parties: map.to_vec(),
                    settings: chosen.iter().map(|op| op.perm.clone()).collect(),
                    flips: chosen.iter().map(|op| op.flips.clone()).collect(),
                    scale: &scale_a / &scale_b,
                });
                true
            } else {
                false
            }
        },
    )?;
    Ok(found)
}
