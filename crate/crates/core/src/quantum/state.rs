//! Pure qubit states and the five-parameter canonical form of three-qubit
//! states.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::observable::{Mat2, IDENTITY};
use crate::error::{Error, Result};

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// Normalized state vector of `n` qubits. Qubit `0` is the most significant
/// bit of the basis index, so `|abc>` has index `4a + 2b + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    qubits: usize,
}

impl PureState {
    /// Normalizes `amplitudes`; the length must be a power of two.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Precondition(format!(
                "state length {len} is not a power of two"
            )));
        }
        let norm = norm(&amplitudes);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Precondition("state vector has zero norm".into()));
        }
        Ok(PureState {
            qubits: len.trailing_zeros() as usize,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Draws from the unitarily invariant measure (normalized complex
    /// Gaussian vector).
    pub fn random<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> Self {
        loop {
            let amps: Vec<Complex64> = (0..1usize << qubits)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(s) = Self::new(amps) {
                return s;
            }
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `<psi| O_0 (x) O_1 (x) ... |psi>` for per-qubit operators.
    pub fn expectation(&self, ops: &[&Mat2]) -> Complex64 {
        let applied = apply_product(&self.amplitudes, ops);
        inner(&self.amplitudes, &applied)
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `<a|b>`.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Applies `op` to qubit `qubit` of an `n`-qubit vector in place.
pub(crate) fn apply_local_in_place(v: &mut [Complex64], qubit: usize, op: &Mat2) {
    let n = v.len().trailing_zeros() as usize;
    let stride = 1usize << (n - 1 - qubit);
    for base in 0..v.len() {
        if base & stride != 0 {
            continue;
        }
        let (x0, x1) = (v[base], v[base | stride]);
        v[base] = op[0][0] * x0 + op[0][1] * x1;
        v[base | stride] = op[1][0] * x0 + op[1][1] * x1;
    }
}

/// `(O_0 (x) O_1 (x) ...) v`.
pub(crate) fn apply_product(v: &[Complex64], ops: &[&Mat2]) -> Vec<Complex64> {
    let mut out = v.to_vec();
    for (q, op) in ops.iter().enumerate() {
        if **op != IDENTITY {
            apply_local_in_place(&mut out, q, op);
        }
    }
    out
}

/// Three-qubit state in canonical form
/// `e^{i phi} l0 |000> + l1 |011> + l2 |101> + l3 |110> + l4 |111>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeQubitState {
    pub lambda: [f64; 5],
    pub phi: f64,
}

/// Basis indices carrying `lambda[0..5]`.
pub const CANONICAL_BASIS: [usize; 5] = [0b000, 0b011, 0b101, 0b110, 0b111];

impl ThreeQubitState {
    pub fn new(lambda: [f64; 5], phi: f64) -> Result<Self> {
        if lambda.iter().any(|&l| !(l >= 0.0)) {
            return Err(Error::Precondition("lambda coefficients must be non-negative".into()));
        }
        let sum: f64 = lambda.iter().map(|l| l * l).sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "squared lambdas sum to {sum}, expected 1"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::Precondition("phase must be finite".into()));
        }
        Ok(ThreeQubitState {
            lambda,
            phi: phi.rem_euclid(TAU),
        })
    }

    /// `(|000> + |111>) / sqrt 2`.
    pub fn ghz() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ThreeQubitState {
            lambda: [h, 0.0, 0.0, 0.0, h],
            phi: 0.0,
        }
    }

    /// `|000>`.
    pub fn product_zero() -> Self {
        ThreeQubitState {
            lambda: [1.0, 0.0, 0.0, 0.0, 0.0],
            phi: 0.0,
        }
    }

    /// Lambdas uniform on the positive orthant of the 4-sphere, phase uniform.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut lambda = [0.0; 5];
            for l in &mut lambda {
                *l = rng.sample::<f64, _>(StandardNormal).abs();
            }
            let n = lambda.iter().map(|l| l * l).sum::<f64>().sqrt();
            if n > 1e-6 {
                lambda.iter_mut().for_each(|l| *l /= n);
                return ThreeQubitState {
                    lambda,
                    phi: rng.random_range(0.0..TAU),
                };
            }
        }
    }

    pub fn to_pure(&self) -> PureState {
        let mut amps = vec![C0; 8];
        amps[0] = Complex64::from_polar(self.lambda[0], self.phi);
        for (i, &b) in CANONICAL_BASIS.iter().enumerate().skip(1) {
            amps[b] = Complex64::new(self.lambda[i], 0.0);
        }
        PureState::new(amps).expect("normalized by construction")
    }
}

/// Local unitaries taking a state to canonical form together with the
/// resulting parameters.
#[derive(Debug, Clone)]
pub struct Canonicalized {
    pub state: ThreeQubitState,
    /// `U_p` per qubit; canonical state = `e^{i g} (U_0 (x) U_1 (x) U_2) psi`.
    pub unitaries: [Mat2; 3],
    /// Norm of the amplitudes on `|001>, |010>, |100>` dropped by the form.
    pub residual: f64,
    /// Whether the residual is small enough for the reported form to
    /// reproduce the input state.
    pub well_conditioned: bool,
}

const CANONICAL_TOLERANCE: f64 = 1e-10;

/// Product state `a (x) b (x) c` maximizing `|<abc|psi>|`, by alternating
/// maximization from several starts.
fn max_overlap_product(psi: &[Complex64]) -> [[Complex64; 2]; 3] {
    let basis = |bit: usize| {
        if bit == 0 {
            [Complex64::new(1.0, 0.0), C0]
        } else {
            [C0, Complex64::new(1.0, 0.0)]
        }
    };
    let mut starts: Vec<[[Complex64; 2]; 3]> = (0..8)
        .map(|i| [basis(i >> 2 & 1), basis(i >> 1 & 1), basis(i & 1)])
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c41d7);
    for _ in 0..8 {
        let mut s = [[C0; 2]; 3];
        for v in &mut s {
            let w = PureState::random(1, &mut rng);
            v.copy_from_slice(w.amplitudes());
        }
        starts.push(s);
    }

    let overlap = |f: &[[Complex64; 2]; 3]| -> Complex64 {
        let mut acc = C0;
        for (i, amp) in psi.iter().enumerate() {
            acc += (f[0][i >> 2 & 1] * f[1][i >> 1 & 1] * f[2][i & 1]).conj() * amp;
        }
        acc
    };

    let mut best = starts[0];
    let mut best_val = -1.0;
    for mut f in starts {
        for _ in 0..20_000 {
            // Largest component of a local update orthogonal to the current
            // factor; zero exactly at a stationary point.
            let mut step: f64 = 0.0;
            for q in 0..3 {
                // v_x = sum over the other two factors of conj(..) psi
                let mut v = [C0; 2];
                for (i, amp) in psi.iter().enumerate() {
                    let bits = [i >> 2 & 1, i >> 1 & 1, i & 1];
                    let mut w = *amp;
                    for r in 0..3 {
                        if r != q {
                            w *= f[r][bits[r]].conj();
                        }
                    }
                    v[bits[q]] += w;
                }
                let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                if n > 0.0 {
                    let along = f[q][0].conj() * v[0] + f[q][1].conj() * v[1];
                    let perp = ((v[0] - along * f[q][0]).norm_sqr() + (v[1] - along * f[q][1]).norm_sqr()).sqrt();
                    step = step.max(perp);
                    f[q] = [v[0] / n, v[1] / n];
                }
            }
            if step < 1e-15 {
                break;
            }
        }
        let val = overlap(&f).norm();
        if val > best_val + 1e-14 {
            best_val = val;
            best = f;
        }
    }
    best
}

/// Brings a three-qubit state to canonical form by local unitaries.
pub fn canonicalize(psi: &PureState) -> Result<Canonicalized> {
    if psi.qubits() != 3 {
        return Err(Error::Unsupported(format!(
            "canonical form needs 3 qubits, got {}",
            psi.qubits()
        )));
    }
    let product = max_overlap_product(psi.amplitudes());
    let mut unitaries: [Mat2; 3] = [[[C0; 2]; 2]; 3];
    for (u, a) in unitaries.iter_mut().zip(&product) {
        // rows: <a| and <a_perp| with a_perp = (-conj a1, conj a0)
        *u = [
            [a[0].conj(), a[1].conj()],
            [-a[1], a[0]],
        ];
    }
    let rotated = apply_product(psi.amplitudes(), &[&unitaries[0], &unitaries[1], &unitaries[2]]);

    let arg = |i: usize| rotated[i].arg();
    let theta = [
        arg(0b011) - arg(0b111),
        arg(0b101) - arg(0b111),
        arg(0b110) - arg(0b111),
    ];
    let gamma = -arg(0b111) - theta.iter().sum::<f64>();
    for (u, &t) in unitaries.iter_mut().zip(&theta) {
        let ph = Complex64::from_polar(1.0, t);
        u[1][0] *= ph;
        u[1][1] *= ph;
    }
    let global = Complex64::from_polar(1.0, gamma);
    let mut amps = apply_product(psi.amplitudes(), &[&unitaries[0], &unitaries[1], &unitaries[2]]);
    amps.iter_mut().for_each(|a| *a *= global);

    let residual = [0b001, 0b010, 0b100]
        .iter()
        .map(|&i| amps[i].norm_sqr())
        .sum::<f64>()
        .sqrt();
    let mut lambda = [0.0; 5];
    for (l, &b) in lambda.iter_mut().zip(&CANONICAL_BASIS) {
        *l = amps[b].norm();
    }
    let n = lambda.iter().map(|l| l * l).sum::<f64>().sqrt();
    lambda.iter_mut().for_each(|l| *l /= n);
    let phi = if lambda[0] > 0.0 { amps[0].arg() } else { 0.0 };
    Ok(Canonicalized {
        state: ThreeQubitState {
            lambda,
            phi: phi.rem_euclid(TAU),
        },
        unitaries,
        residual,
        well_conditioned: residual < CANONICAL_TOLERANCE,
    })
}

/// Fidelity `|<a|b>|^2` of two states of equal size.
pub fn fidelity(a: &PureState, b: &PureState) -> f64 {
    inner(a.amplitudes(), b.amplitudes()).norm_sqr()
}
