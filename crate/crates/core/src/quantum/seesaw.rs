//! Seesaw (alternating) maximization of a Bell expression over pure states
//! and dichotomic qubit observables.
//!
//! With the state and all other observables fixed, the expectation is affine
//! in one Bloch vector, so each observable update is the normalized linear
//! coefficient. With the observables fixed, the best state is a top
//! eigenvector of the Bell operator, found by shifted power iteration started
//! from the current state. Both half-steps never decrease the value.

use num_complex::Complex64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bell::{matrices, Expression};
use super::observable::{Mat2, Observable, Observables, PAULI};
use super::state::{canonicalize, inner, norm, PureState, ThreeQubitState};
use crate::error::{Error, Result};
use crate::inequality::BellInequality;
use crate::limits::Limits;
use crate::rational::{self, Rational};

pub const DEFAULT_SEED: u64 = 0x00be_11f0_49e5;

#[derive(Debug, Clone, Serialize)]
pub struct SeesawConfig {
    /// Random restarts per optimization direction.
    pub restarts: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    /// Stop once a sweep improves the value by less than this.
    pub tolerance: f64,
    /// Residual `|B x - <B> x|` accepted by the eigenvector step.
    pub power_tolerance: f64,
    pub max_power_iterations: usize,
    pub limits: Limits,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        SeesawConfig {
            restarts: 50,
            seed: DEFAULT_SEED,
            max_sweeps: 1000,
            tolerance: 1e-10,
            power_tolerance: 1e-12,
            max_power_iterations: 20_000,
            limits: Limits::default(),
        }
    }
}

impl SeesawConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Config("at least one restart is required".into()));
        }
        if self.max_sweeps == 0 || self.max_power_iterations == 0 {
            return Err(Error::Config("iteration limits must be positive".into()));
        }
        if !(self.tolerance > 0.0 && self.power_tolerance > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of one seesaw run.
#[derive(Debug, Clone)]
pub struct SeesawRun {
    /// Value of `sign * I` reached.
    pub value: f64,
    pub state: PureState,
    pub observables: Observables,
    pub sweeps: usize,
    pub converged: bool,
    /// `sign * I` after every half-step, starting with the initial point.
    pub trace: Vec<f64>,
}

struct Workspace<'a> {
    expr: &'a Expression,
    settings: Vec<usize>,
    obs: Observables,
    mats: Vec<Vec<Mat2>>,
    psi: Vec<Complex64>,
}

impl Workspace<'_> {
    fn value(&self) -> f64 {
        self.expr.value(&self.mats, &self.psi)
    }

    fn observable_step(&mut self) {
        for p in 0..self.settings.len() {
            for s in 1..=self.settings[p] {
                let chi = self.expr.partial_apply(&self.mats, &self.psi, p, s);
                let mut g = [0.0; 3];
                for (k, gk) in g.iter_mut().enumerate() {
                    let mut sigma_chi = chi.clone();
                    super::state::apply_local_in_place(&mut sigma_chi, p, &PAULI[k + 1]);
                    *gk = inner(&self.psi, &sigma_chi).re;
                }
                if let Ok(o) = Observable::along(g) {
                    if super::observable::norm3(&g) > 1e-14 {
                        self.obs.per_party[p][s - 1] = o;
                        self.mats[p][s - 1] = o.matrix();
                    }
                }
            }
        }
    }

    /// Power iteration on `B + shift`, which is positive semidefinite.
    fn state_step(&mut self, tol: f64, max_iter: usize) {
        let shift = self.expr.abs_sum();
        for _ in 0..max_iter {
            let b = self.expr.apply(&self.mats, &self.psi);
            let rayleigh = inner(&self.psi, &b).re;
            let residual = b
                .iter()
                .zip(&self.psi)
                .map(|(bi, xi)| (bi - xi * rayleigh).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if residual < tol {
                break;
            }
            let next: Vec<Complex64> = b
                .iter()
                .zip(&self.psi)
                .map(|(bi, xi)| bi + xi * shift)
                .collect();
            let n = norm(&next);
            if !(n > 0.0) {
                break;
            }
            self.psi = next.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Runs the seesaw on `sign * I` from the given starting point.
pub fn seesaw_run(
    ineq: &BellInequality,
    sign: f64,
    start_state: PureState,
    start_observables: Observables,
    config: &SeesawConfig,
) -> Result<SeesawRun> {
    config.validate()?;
    let expr = Expression::compile(ineq, sign)?;
    if start_state.qubits() != expr.parties {
        return Err(Error::DimensionMismatch {
            expected: expr.parties,
            found: start_state.qubits(),
        });
    }
    start_observables.ensure_matches(ineq.scenario())?;
    let mut ws = Workspace {
        expr: &expr,
        settings: ineq.scenario().settings().to_vec(),
        mats: matrices(&start_observables),
        obs: start_observables,
        psi: start_state.into_amplitudes(),
    };
    let mut value = ws.value();
    let mut trace = vec![value];
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < config.max_sweeps {
        sweeps += 1;
        ws.observable_step();
        trace.push(ws.value());
        ws.state_step(config.power_tolerance, config.max_power_iterations);
        let next = ws.value();
        trace.push(next);
        let delta = next - value;
        value = next;
        if delta.abs() < config.tolerance {
            converged = true;
            break;
        }
    }
    Ok(SeesawRun {
        value,
        state: PureState::new(ws.psi)?,
        observables: ws.obs,
        sweeps,
        converged,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Pushing the expression above its upper local bound.
    Upper,
    /// Pushing it below its lower local bound.
    Lower,
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationResult {
    pub quantum_value: f64,
    #[serde(with = "rational::serde_string")]
    pub classical_center: Rational,
    #[serde(with = "rational::serde_string")]
    pub classical_halfwidth: Rational,
    pub violation_factor: f64,
    pub direction: Direction,
    /// Canonical three-qubit form of the optimal state; absent for two
    /// parties.
    pub best_state: Option<ThreeQubitState>,
    /// Whether `best_state` reproduces the optimizer's state up to local
    /// unitaries within numerical tolerance.
    pub canonical_form_ok: bool,
    /// Optimal state as found, `[re, im]` per basis amplitude.
    pub raw_state: Vec<[f64; 2]>,
    /// Observables matching `best_state` when `canonical_form_ok`, otherwise
    /// matching `raw_state`.
    pub best_observables: Observables,
    pub restarts_used: usize,
    pub sweeps: usize,
    pub converged: bool,
}

impl ViolationResult {
    /// The state the observables refer to.
    pub fn reported_state(&self) -> PureState {
        match (&self.best_state, self.canonical_form_ok) {
            (Some(s), true) => s.to_pure(),
            _ => PureState::new(
                self.raw_state
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect(),
            )
            .expect("optimizer state is normalized"),
        }
    }
}

/// Local range `(center, halfwidth)` from the stated bounds, or by brute
/// force when either is missing.
fn classical_interval(ineq: &BellInequality, limits: &Limits) -> Result<(Rational, Rational)> {
    let (lo, hi) = match (ineq.lower(), ineq.upper()) {
        (Some(l), Some(u)) => (l.clone(), u.clone()),
        _ => {
            let b = ineq.local_bounds(limits)?;
            (b.min, b.max)
        }
    };
    let two = rational::int(2);
    let half = (&hi - &lo) / &two;
    if half.is_zero() {
        return Err(Error::Precondition(format!(
            "`{}` has an empty local range; violation factor undefined",
            ineq.name
        )));
    }
    Ok(((&hi + &lo) / &two, half))
}

/// Best violation factor `|<I> - center| / halfwidth` over `config.restarts`
/// random starts in each direction.
pub fn seesaw_maximize(ineq: &BellInequality, config: &SeesawConfig) -> Result<ViolationResult> {
    config.validate()?;
    let (center, half) = classical_interval(ineq, &config.limits)?;
    let center_f = rational::to_f64(&center);
    let half_f = rational::to_f64(&half);
    let parties = ineq.scenario().parties();
    // Compile once to surface unsupported scenarios before spawning work.
    Expression::compile(ineq, 1.0)?;

    let runs: Vec<Result<(f64, Direction, SeesawRun)>> = (0..2 * config.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(k as u64);
            let (sign, direction) = if k % 2 == 0 {
                (1.0, Direction::Upper)
            } else {
                (-1.0, Direction::Lower)
            };
            let obs = Observables::random(ineq.scenario(), &mut rng);
            let psi = PureState::random(parties, &mut rng);
            let run = seesaw_run(ineq, sign, psi, obs, config)?;
            let factor = (run.value - sign * center_f) / half_f;
            Ok((factor, direction, run))
        })
        .collect();

    let mut best: Option<(f64, Direction, SeesawRun)> = None;
    for r in runs {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.0 > b.0) {
            best = Some(r);
        }
    }
    let (_, direction, run) = best.expect("at least one run");
    let quantum_value = match direction {
        Direction::Upper => run.value,
        Direction::Lower => -run.value,
    };

    let raw_state = run
        .state
        .amplitudes()
        .iter()
        .map(|a| [a.re, a.im])
        .collect();
    let (best_state, canonical_form_ok, best_observables) = if parties == 3 {
        let canon = canonicalize(&run.state)?;
        if canon.well_conditioned {
            let obs = Observables::new(
                run.observables
                    .per_party
                    .iter()
                    .zip(&canon.unitaries)
                    .map(|(v, u)| v.iter().map(|o| o.conjugated(u)).collect())
                    .collect(),
            );
            (Some(canon.state), true, obs)
        } else {
            (Some(canon.state), false, run.observables.clone())
        }
    } else {
        (None, false, run.observables.clone())
    };

    Ok(ViolationResult {
        quantum_value,
        violation_factor: (quantum_value - center_f).abs() / half_f,
        classical_center: center,
        classical_halfwidth: half,
        direction,
        best_state,
        canonical_form_ok,
        raw_state,
        best_observables,
        restarts_used: config.restarts,
        sweeps: run.sweeps,
        converged: run.converged,
    })
}
