//! Quantum expectation values of Bell expressions.

use num_complex::Complex64;

use super::observable::{Mat2, Observables};
use super::state::{apply_local_in_place, inner, PureState};
use crate::error::{Error, Result};
use crate::inequality::BellInequality;
use crate::rational;

/// A Bell expression with `f64` coefficients, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Expression {
    pub parties: usize,
    pub terms: Vec<(Vec<usize>, f64)>,
}

impl Expression {
    pub fn compile(ineq: &BellInequality, sign: f64) -> Result<Self> {
        let parties = ineq.scenario().parties();
        if !(2..=3).contains(&parties) {
            return Err(Error::Unsupported(format!(
                "quantum evaluation supports 2 or 3 parties, got {parties}"
            )));
        }
        Ok(Expression {
            parties,
            terms: ineq
                .terms()
                .iter()
                .map(|(t, c)| (t.clone(), sign * rational::to_f64(c)))
                .collect(),
        })
    }

    pub fn abs_sum(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.abs()).sum()
    }

    /// `B v` where `B = sum_t c_t (x)_p O_p(t_p)`.
    pub fn apply(&self, matrices: &[Vec<Mat2>], v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        let mut work = vec![Complex64::new(0.0, 0.0); v.len()];
        for (tuple, c) in &self.terms {
            work.copy_from_slice(v);
            for (p, &s) in tuple.iter().enumerate() {
                if s != 0 {
                    apply_local_in_place(&mut work, p, &matrices[p][s - 1]);
                }
            }
            for (o, w) in out.iter_mut().zip(&work) {
                *o += w * *c;
            }
        }
        out
    }

    /// `sum_{t: t_party = setting} c_t ((x)_{q != party} O_q(t_q)) v`; the
    /// expectation is affine in the observable of `(party, setting)` with
    /// this vector as its linear part.
    pub fn partial_apply(
        &self,
        matrices: &[Vec<Mat2>],
        v: &[Complex64],
        party: usize,
        setting: usize,
    ) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        let mut work = vec![Complex64::new(0.0, 0.0); v.len()];
        for (tuple, c) in self.terms.iter().filter(|(t, _)| t[party] == setting) {
            work.copy_from_slice(v);
            for (p, &s) in tuple.iter().enumerate() {
                if s != 0 && p != party {
                    apply_local_in_place(&mut work, p, &matrices[p][s - 1]);
                }
            }
            for (o, w) in out.iter_mut().zip(&work) {
                *o += w * *c;
            }
        }
        out
    }

    pub fn value(&self, matrices: &[Vec<Mat2>], v: &[Complex64]) -> f64 {
        inner(v, &self.apply(matrices, v)).re
    }
}

pub(crate) fn matrices(obs: &Observables) -> Vec<Vec<Mat2>> {
    obs.per_party
        .iter()
        .map(|v| v.iter().map(|o| o.matrix()).collect())
        .collect()
}

/// `<psi| sum_t c_t (x)_p O_p(t_p) |psi>`, unmeasured parties contributing
/// the identity.
pub fn bell_expectation(ineq: &BellInequality, state: &PureState, obs: &Observables) -> Result<f64> {
    let expr = Expression::compile(ineq, 1.0)?;
    if state.qubits() != expr.parties {
        return Err(Error::DimensionMismatch {
            expected: expr.parties,
            found: state.qubits(),
        });
    }
    obs.ensure_matches(ineq.scenario())?;
    Ok(expr.value(&matrices(obs), state.amplitudes()))
}

/// Dense Bell operator, row-major `2^n x 2^n`.
pub fn bell_operator(ineq: &BellInequality, obs: &Observables) -> Result<Vec<Vec<Complex64>>> {
    let expr = Expression::compile(ineq, 1.0)?;
    obs.ensure_matches(ineq.scenario())?;
    let mats = matrices(obs);
    let dim = 1usize << expr.parties;
    let mut columns = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[j] = Complex64::new(1.0, 0.0);
        columns.push(expr.apply(&mats, &e));
    }
    Ok((0..dim)
        .map(|i| (0..dim).map(|j| columns[j][i]).collect())
        .collect())
}
