//! Three-qubit correlation tensors in local frames and the quadratic
//! sufficient condition for satisfying `I10`:
//!
//! `T_012^2 + T_201^2 + T_120^2 + T_111^2 + T_222^2 <= 1`,
//!
//! where index `0` is the identity and `1`, `2` are the first two axes of each
//! party's frame.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::observable::PAULI;
use super::state::{PureState, ThreeQubitState};
use crate::error::{Error, Result};

/// Right-handed orthonormal frame; `axes[k]` is the direction used for local
/// index `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triad {
    pub axes: [[f64; 3]; 3],
}

const FRAME_TOLERANCE: f64 = 1e-10;

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl Triad {
    pub fn new(axes: [[f64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot(&axes[i], &axes[j]) - expected).abs() > FRAME_TOLERANCE {
                    return Err(Error::Precondition("triad is not orthonormal".into()));
                }
            }
        }
        let z = cross(&axes[0], &axes[1]);
        if dot(&z, &axes[2]) < 0.0 {
            return Err(Error::Precondition("triad is not right-handed".into()));
        }
        Ok(Triad { axes })
    }

    pub fn standard() -> Self {
        Triad {
            axes: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Uniformly random rotation of the standard frame.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut g = || -> [f64; 3] {
                [
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                ]
            };
            let (a, b) = (g(), g());
            let na = dot(&a, &a).sqrt();
            if na < 1e-8 {
                continue;
            }
            let x = a.map(|v| v / na);
            let p = dot(&x, &b);
            let y = [b[0] - p * x[0], b[1] - p * x[1], b[2] - p * x[2]];
            let ny = dot(&y, &y).sqrt();
            if ny < 1e-8 {
                continue;
            }
            let y = y.map(|v| v / ny);
            let z = cross(&x, &y);
            return Triad { axes: [x, y, z] };
        }
    }

    /// Rotates axes `i`, `j` (the pair other than `k`) by angle `t` about
    /// axis `k`.
    fn rotated(&self, k: usize, t: f64) -> Self {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let (c, s) = (t.cos(), t.sin());
        let mut axes = self.axes;
        for d in 0..3 {
            axes[i][d] = c * self.axes[i][d] + s * self.axes[j][d];
            axes[j][d] = -s * self.axes[i][d] + c * self.axes[j][d];
        }
        Triad { axes }
    }

    /// Row `index` of the 4x4 frame matrix: `e_0` for index 0, `(0, axis)`
    /// otherwise.
    fn row(&self, index: usize) -> [f64; 4] {
        if index == 0 {
            [1.0, 0.0, 0.0, 0.0]
        } else {
            let a = self.axes[index - 1];
            [0.0, a[0], a[1], a[2]]
        }
    }
}

/// `T_ijk = <psi| sigma_i (x) sigma_j (x) sigma_k |psi>`, `sigma_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTensor {
    pub components: [[[f64; 4]; 4]; 4],
}

impl CorrelationTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.components[i][j][k]
    }

    /// Tensor in the standard frames.
    pub fn of_state(psi: &PureState) -> Result<Self> {
        if psi.qubits() != 3 {
            return Err(Error::Unsupported("correlation tensor needs 3 qubits".into()));
        }
        let mut components = [[[0.0; 4]; 4]; 4];
        for (i, plane) in components.iter_mut().enumerate() {
            for (j, row) in plane.iter_mut().enumerate() {
                for (k, value) in row.iter_mut().enumerate() {
                    *value = psi.expectation(&[&PAULI[i], &PAULI[j], &PAULI[k]]).re;
                }
            }
        }
        Ok(CorrelationTensor { components })
    }

    /// Single component in rotated frames.
    fn rotated_component(&self, triads: &[Triad; 3], idx: [usize; 3]) -> f64 {
        let (ra, rb, rc) = (triads[0].row(idx[0]), triads[1].row(idx[1]), triads[2].row(idx[2]));
        let mut acc = 0.0;
        for (i, &a) in ra.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rb.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let t = &self.components[i][j];
                acc += a * b * (rc[0] * t[0] + rc[1] * t[1] + rc[2] * t[2] + rc[3] * t[3]);
            }
        }
        acc
    }

    /// The whole tensor in rotated frames.
    pub fn rotated(&self, triads: &[Triad; 3]) -> Self {
        let mut components = [[[0.0; 4]; 4]; 4];
        for (i, plane) in components.iter_mut().enumerate() {
            for (j, row) in plane.iter_mut().enumerate() {
                for (k, value) in row.iter_mut().enumerate() {
                    *value = self.rotated_component(triads, [i, j, k]);
                }
            }
        }
        CorrelationTensor { components }
    }

    fn zb_sum(&self, triads: &[Triad; 3]) -> f64 {
        ZB_INDICES
            .iter()
            .map(|&idx| self.rotated_component(triads, idx).powi(2))
            .sum()
    }
}

/// Components entering the condition.
pub const ZB_INDICES: [[usize; 3]; 5] = [[0, 1, 2], [2, 0, 1], [1, 2, 0], [1, 1, 1], [2, 2, 2]];

fn validated(triads: &[Triad; 3]) -> Result<()> {
    for t in triads {
        Triad::new(t.axes)?;
    }
    Ok(())
}

pub fn correlation_tensor(state: &ThreeQubitState, triads: &[Triad; 3]) -> Result<CorrelationTensor> {
    validated(triads)?;
    Ok(CorrelationTensor::of_state(&state.to_pure())?.rotated(triads))
}

pub fn zb_condition(state: &ThreeQubitState, triads: &[Triad; 3]) -> Result<f64> {
    validated(triads)?;
    Ok(CorrelationTensor::of_state(&state.to_pure())?.zb_sum(triads))
}

#[derive(Debug, Clone, Serialize)]
pub struct ZbConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    pub tolerance: f64,
}

impl Default for ZbConfig {
    fn default() -> Self {
        ZbConfig {
            starts: 4,
            seed: 0x2b_c0de,
            max_sweeps: 500,
            tolerance: 1e-13,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZbMaximum {
    pub value: f64,
    pub triads: [Triad; 3],
}

/// Local maximization of the condition's left-hand side over the three
/// frames.
///
/// Rotating one party's frame about one of its own axes by `t` changes the
/// sum as `a + b cos 2t + c sin 2t`, so each such move is solved exactly
/// from three samples. Sweeps cycle over all parties and axes from the
/// standard frames and `starts - 1` random ones.
pub fn zb_condition_max(state: &ThreeQubitState, config: &ZbConfig) -> Result<ZbMaximum> {
    let tensor = CorrelationTensor::of_state(&state.to_pure())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<ZbMaximum> = None;
    for start in 0..config.starts.max(1) {
        let mut triads = if start == 0 {
            [Triad::standard(); 3]
        } else {
            [Triad::random(&mut rng), Triad::random(&mut rng), Triad::random(&mut rng)]
        };
        let mut value = tensor.zb_sum(&triads);
        for _ in 0..config.max_sweeps {
            let before = value;
            for party in 0..3 {
                for axis in 0..3 {
                    let at = |t: f64| {
                        let mut trial = triads;
                        trial[party] = triads[party].rotated(axis, t);
                        tensor.zb_sum(&trial)
                    };
                    let f0 = value;
                    let f90 = at(std::f64::consts::FRAC_PI_2);
                    let f45 = at(std::f64::consts::FRAC_PI_4);
                    let a = 0.5 * (f0 + f90);
                    let b = 0.5 * (f0 - f90);
                    let c = f45 - a;
                    let t = 0.5 * c.atan2(b);
                    let candidate = triads[party].rotated(axis, t);
                    let mut trial = triads;
                    trial[party] = candidate;
                    let v = tensor.zb_sum(&trial);
                    if v > value {
                        triads = trial;
                        value = v;
                    }
                }
            }
            if value - before < config.tolerance {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(ZbMaximum { value, triads });
        }
    }
    Ok(best.expect("at least one start"))
}

#[derive(Debug, Clone, Serialize)]
pub struct ZbScan {
    pub samples: usize,
    pub seed: u64,
    pub max_value: f64,
    /// Sample index attaining `max_value`.
    pub argmax: usize,
    pub worst_state: ThreeQubitState,
    pub worst_triads: [Triad; 3],
}

/// `zb_condition_max` over `samples` random canonical states. Sample `k`
/// draws its state from stream `k` of a generator seeded with `seed`.
pub fn zb_scan(samples: usize, seed: u64, config: &ZbConfig) -> Result<ZbScan> {
    if samples == 0 {
        return Err(Error::Config("at least one sample is required".into()));
    }
    let results: Vec<Result<(ThreeQubitState, ZbMaximum)>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let state = ThreeQubitState::random(&mut rng);
            let m = zb_condition_max(&state, config)?;
            Ok((state, m))
        })
        .collect();
    let mut best: Option<(usize, ThreeQubitState, ZbMaximum)> = None;
    for (k, r) in results.into_iter().enumerate() {
        let (state, m) = r?;
        if best.as_ref().is_none_or(|b| m.value > b.2.value) {
            best = Some((k, state, m));
        }
    }
    let (argmax, worst_state, m) = best.expect("at least one sample");
    Ok(ZbScan {
        samples,
        seed,
        max_value: m.value,
        argmax,
        worst_state,
        worst_triads: m.triads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_standard_frames() {
        let t = correlation_tensor(&ThreeQubitState::ghz(), &[Triad::standard(); 3]).unwrap();
        assert!((t.get(1, 1, 1) - 1.0).abs() < 1e-14);
        for idx in [[1, 2, 2], [2, 1, 2], [2, 2, 1]] {
            assert!((t.get(idx[0], idx[1], idx[2]) + 1.0).abs() < 1e-14);
        }
        assert!(t.get(2, 2, 2).abs() < 1e-14);
        assert!(t.get(0, 1, 2).abs() < 1e-14);
        assert!((t.get(0, 0, 0) - 1.0).abs() < 1e-14);
        let zb = zb_condition(&ThreeQubitState::ghz(), &[Triad::standard(); 3]).unwrap();
        assert!((zb - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_state() {
        let s = ThreeQubitState::product_zero();
        let t = correlation_tensor(&s, &[Triad::standard(); 3]).unwrap();
        for idx in [[3, 3, 3], [0, 0, 3], [0, 3, 0], [3, 0, 0]] {
            assert!((t.get(idx[0], idx[1], idx[2]) - 1.0).abs() < 1e-14);
        }
        assert!(zb_condition(&s, &[Triad::standard(); 3]).unwrap().abs() < 1e-14);
    }

    #[test]
    fn invalid_triads() {
        let skew = Triad {
            axes: [[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
        };
        let left = Triad {
            axes: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]],
        };
        let s = ThreeQubitState::ghz();
        assert!(zb_condition(&s, &[skew, Triad::standard(), Triad::standard()]).is_err());
        assert!(correlation_tensor(&s, &[Triad::standard(), left, Triad::standard()]).is_err());
    }

    #[test]
    fn rotated_frames_keep_identity_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = ThreeQubitState::random(&mut rng);
        let triads = [Triad::random(&mut rng), Triad::random(&mut rng), Triad::random(&mut rng)];
        for t in &triads {
            Triad::new(t.axes).unwrap();
        }
        let t = correlation_tensor(&s, &triads).unwrap();
        assert!((t.get(0, 0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximization_never_below_standard_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let s = ThreeQubitState::random(&mut rng);
            let base = zb_condition(&s, &[Triad::standard(); 3]).unwrap();
            let m = zb_condition_max(&s, &ZbConfig::default()).unwrap();
            assert!(m.value >= base - 1e-12);
            let check = zb_condition(&s, &m.triads).unwrap();
            assert!((check - m.value).abs() < 1e-9);
        }
    }
}
