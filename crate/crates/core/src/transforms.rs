//! Homogenization of CH-type inequalities and its inverse.
//!
//! Given `L <= I <= U`, homogenization adds one setting per party (stored as
//! setting `1`, old settings shift up by one) and completes every term with
//! the new setting of each party it does not involve. The constant becomes the
//! coefficient of the all-new-settings tuple after subtracting the midpoint
//! `(L + U) / 2`, giving a homogeneous inequality with range
//! `[-(U - L) / 2, (U - L) / 2]`. For the usual `0 <= I <= M` form the shift is
//! exactly `M / 2`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::BellInequality;
use crate::limits::Limits;
use crate::polytope::Scenario;
use crate::rational::{self, Rational};

/// Index of the setting added by homogenization.
pub const NEW_SETTING: usize = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub source: String,
    /// Local minimum `L` of the source inequality.
    #[serde(with = "rational::serde_string")]
    pub source_min: Rational,
    /// Local maximum `U` of the source inequality.
    #[serde(with = "rational::serde_string")]
    pub source_max: Rational,
    /// `M = U - L`, the maximum of the source once shifted to `0 <= I - L`.
    #[serde(with = "rational::serde_string")]
    pub range: Rational,
    /// Amount subtracted from the constant: `(L + U) / 2`.
    #[serde(with = "rational::serde_string")]
    pub shift: Rational,
    pub new_setting: usize,
    /// `setting_map[p][s - 1]` is the new index of old setting `s` of party `p`.
    pub setting_map: Vec<Vec<usize>>,
    /// Display label per stored setting index: the added setting is shown as
    /// `0`, old setting `s` as `s`.
    pub display_labels: Vec<Vec<usize>>,
    /// Set when the output was rescaled to integer coefficients.
    #[serde(with = "rational::serde_opt_string")]
    pub integer_scale: Option<Rational>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Homogenized {
    pub inequality: BellInequality,
    pub provenance: Provenance,
}

impl Homogenized {
    /// Rescales the output to integer coefficients, recording the factor.
    pub fn normalized_to_integers(mut self) -> Self {
        let (scaled, factor) = self.inequality.to_integer_coefficients();
        self.inequality = scaled;
        self.provenance.integer_scale = Some(factor);
        self
    }
}

fn homogenized_name(name: &str) -> String {
    match name.strip_prefix('I') {
        Some(rest) if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) => {
            format!("H{rest}")
        }
        _ => format!("H({name})"),
    }
}

pub fn homogenize(ineq: &BellInequality, limits: &Limits) -> Result<Homogenized> {
    let bounds = ineq.local_bounds(limits)?;
    let range = &bounds.max - &bounds.min;
    let shift = (&bounds.max + &bounds.min) / rational::int(2);
    let half = &range / rational::int(2);

    let scenario = ineq.scenario();
    let parties = scenario.parties();
    let lift = |t: &Vec<usize>| -> Vec<usize> {
        t.iter()
            .map(|&s| if s == 0 { NEW_SETTING } else { s + 1 })
            .collect()
    };
    let terms = ineq
        .terms()
        .iter()
        .map(|(t, c)| (lift(t), c.clone()))
        .chain([(vec![NEW_SETTING; parties], -shift.clone())]);
    let inequality = BellInequality::new(
        homogenized_name(&ineq.name),
        scenario.extended(),
        terms,
        Some(-half.clone()),
        Some(half),
    )?;
    debug_assert!(inequality.is_homogeneous());

    let setting_map = scenario
        .settings()
        .iter()
        .map(|&m| (1..=m).map(|s| s + 1).collect())
        .collect();
    let display_labels = scenario
        .settings()
        .iter()
        .map(|&m| (0..=m).collect())
        .collect();
    Ok(Homogenized {
        inequality,
        provenance: Provenance {
            source: ineq.name.clone(),
            source_min: bounds.min,
            source_max: bounds.max,
            range,
            shift,
            new_setting: NEW_SETTING,
            setting_map,
            display_labels,
            integer_scale: None,
        },
    })
}

/// Fixes setting `1` of every party to the constant outcome `signs[p]`.
pub fn dehomogenize(ineq: &BellInequality, signs: &[i8]) -> Result<BellInequality> {
    let designated = vec![NEW_SETTING; ineq.scenario().parties()];
    dehomogenize_with(ineq, signs, &designated)
}

/// Fixes setting `designated[p]` of every party `p` to the constant outcome
/// `signs[p]`; the remaining settings are renumbered downwards. Bounds are
/// carried over unchanged.
pub fn dehomogenize_with(
    ineq: &BellInequality,
    signs: &[i8],
    designated: &[usize],
) -> Result<BellInequality> {
    let scenario = ineq.scenario();
    let parties = scenario.parties();
    if !ineq.is_homogeneous() {
        return Err(Error::Precondition(format!(
            "`{}` is not homogeneous",
            ineq.name
        )));
    }
    if signs.len() != parties || designated.len() != parties {
        return Err(Error::Precondition(format!(
            "expected one sign and one designated setting per party ({parties})"
        )));
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::Precondition("signs must be +1 or -1".into()));
    }
    for (p, &d) in designated.iter().enumerate() {
        let m = scenario.settings_of(p);
        if d == 0 || d > m {
            return Err(Error::Precondition(format!(
                "designated setting {d} out of range for party {p}"
            )));
        }
        if m < 2 {
            return Err(Error::Precondition(format!(
                "party {p} has a single setting; nothing would remain"
            )));
        }
    }
    let reduced = Scenario::new(scenario.settings().iter().map(|m| m - 1).collect())?;
    let terms = ineq.terms().iter().map(|(t, c)| {
        let mut coeff = c.clone();
        let tuple = t
            .iter()
            .enumerate()
            .map(|(p, &s)| {
                use std::cmp::Ordering::*;
                match s.cmp(&designated[p]) {
                    Equal => {
                        if signs[p] == -1 {
                            coeff = -coeff.clone();
                        }
                        0
                    }
                    Less => s,
                    Greater => s - 1,
                }
            })
            .collect();
        (tuple, coeff)
    });
    let sign_label: String = signs
        .iter()
        .map(|&s| if s == 1 { '+' } else { '-' })
        .collect();
    BellInequality::new(
        format!("D[{sign_label}]({})", ineq.name),
        reduced,
        terms,
        ineq.lower().cloned(),
        ineq.upper().cloned(),
    )
}

/// `I - shift`, i.e. `I` with its constant lowered by `shift` and bounds moved
/// accordingly. Used to state the homogenize/dehomogenize round trip.
pub fn shifted(ineq: &BellInequality, shift: &Rational) -> Result<BellInequality> {
    let parties = ineq.scenario().parties();
    let mut terms = ineq.terms().clone();
    let constant = terms.entry(vec![0; parties]).or_insert_with(Rational::zero);
    *constant -= shift;
    BellInequality::new(
        ineq.name.clone(),
        ineq.scenario().clone(),
        terms,
        ineq.lower().map(|l| l - shift),
        ineq.upper().map(|u| u - shift),
    )
}
