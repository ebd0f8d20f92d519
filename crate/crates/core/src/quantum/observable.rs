//! Dichotomic qubit observables `n . sigma`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Scenario;

/// Dense 2x2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const IDENTITY: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];

/// `sigma_0 = 1, sigma_1 = X, sigma_2 = Y, sigma_3 = Z`.
pub const PAULI: [Mat2; 4] = [
    IDENTITY,
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
    [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
];

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub(crate) fn adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// Haar-random 2x2 unitary (QR of a complex Gaussian matrix).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let mut g = || c(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (a0, a1, b0, b1) = (g(), g(), g(), g());
    let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
    let (a0, a1) = (a0 / n, a1 / n);
    let proj = a0.conj() * b0 + a1.conj() * b1;
    let (b0, b1) = (b0 - proj * a0, b1 - proj * a1);
    let m = (b0.norm_sqr() + b1.norm_sqr()).sqrt();
    [[a0, b0 / m], [a1, b1 / m]]
}

/// The ±1-valued qubit observable `n . sigma` for a unit Bloch vector `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub bloch: [f64; 3],
}

impl Observable {
    pub fn new(bloch: [f64; 3]) -> Result<Self> {
        let n = norm3(&bloch);
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("Bloch vector norm {n} is not 1")));
        }
        Ok(Observable { bloch })
    }

    /// Normalizes a nonzero vector.
    pub fn along(v: [f64; 3]) -> Result<Self> {
        let n = norm3(&v);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Precondition("zero Bloch vector".into()));
        }
        Ok(Observable {
            bloch: [v[0] / n, v[1] / n, v[2] / n],
        })
    }

    pub fn x() -> Self {
        Observable { bloch: [1.0, 0.0, 0.0] }
    }

    pub fn y() -> Self {
        Observable { bloch: [0.0, 1.0, 0.0] }
    }

    pub fn z() -> Self {
        Observable { bloch: [0.0, 0.0, 1.0] }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            if let Ok(o) = Self::along(v) {
                return o;
            }
        }
    }

    pub fn matrix(&self) -> Mat2 {
        let [x, y, z] = self.bloch;
        [[c(z, 0.0), c(x, -y)], [c(x, y), c(-z, 0.0)]]
    }

    /// The observable `U O U^dagger`, for a unitary `U`.
    pub fn conjugated(&self, u: &Mat2) -> Self {
        let m = mat_mul(&mat_mul(u, &self.matrix()), &adjoint(u));
        // n_k = Tr(M sigma_k) / 2
        let tr = |p: &Mat2| {
            let prod = mat_mul(&m, p);
            0.5 * (prod[0][0] + prod[1][1]).re
        };
        let v = [tr(&PAULI[1]), tr(&PAULI[2]), tr(&PAULI[3])];
        Observable::along(v).expect("unitary conjugation preserves the norm")
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// One observable per (party, setting); `per_party[p][s - 1]` is setting `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub per_party: Vec<Vec<Observable>>,
}

impl Observables {
    pub fn new(per_party: Vec<Vec<Observable>>) -> Self {
        Observables { per_party }
    }

    /// The same observable for every setting.
    pub fn uniform(scenario: &Scenario, obs: Observable) -> Self {
        Observables {
            per_party: scenario.settings().iter().map(|&m| vec![obs; m]).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Self {
        Observables {
            per_party: scenario
                .settings()
                .iter()
                .map(|&m| (0..m).map(|_| Observable::random(rng)).collect())
                .collect(),
        }
    }

    pub fn get(&self, party: usize, setting: usize) -> &Observable {
        &self.per_party[party][setting - 1]
    }

    pub(crate) fn ensure_matches(&self, scenario: &Scenario) -> Result<()> {
        let ok = self.per_party.len() == scenario.parties()
            && self
                .per_party
                .iter()
                .zip(scenario.settings())
                .all(|(v, &m)| v.len() == m);
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "observables do not cover every setting of scenario {scenario}"
            )))
        }
    }
}
