mod common;

use bellforge::fixtures;
use bellforge::quantum::{
    bell_expectation, bell_operator, correlation_tensor, seesaw_maximize, seesaw_run, zb_condition, Direction,
    Observable, Observables, PureState, SeesawConfig, ThreeQubitState, Triad,
};
use bellforge::rational::to_f64;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn blochs(obs: &Observables) -> Vec<Vec<[f64; 3]>> {
    obs.per_party.iter().map(|v| v.iter().map(|o| o.bloch).collect()).collect()
}

#[test]
fn expectation_matches_dense_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for ineq in [fixtures::i10(), fixtures::h10(), fixtures::chsh()] {
        let n = ineq.scenario().parties();
        for _ in 0..10 {
            let psi = PureState::random(n, &mut rng);
            let obs = Observables::random(ineq.scenario(), &mut rng);
            let dense = common::dense_operator(&ineq, &blochs(&obs));
            let oracle = common::expectation(&dense, psi.amplitudes());
            let value = bell_expectation(&ineq, &psi, &obs).unwrap();
            assert!((value - oracle).abs() < 1e-12, "{value} vs {oracle}");
            let op = bell_operator(&ineq, &obs).unwrap();
            for (i, row) in op.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    assert!((x - dense[(i, j)]).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn h10_on_ghz_with_sigma_z() {
    // Every H10 term is a three-party correlator and <zzz> = 0 on GHZ.
    let h10 = fixtures::h10();
    let psi = ThreeQubitState::ghz().to_pure();
    let obs = Observables::uniform(h10.scenario(), Observable::z());
    let dense = common::dense_operator(&h10, &blochs(&obs));
    let oracle = common::expectation(&dense, psi.amplitudes());
    let value = bell_expectation(&h10, &psi, &obs).unwrap();
    assert!((value - oracle).abs() < 1e-12);
    assert!(value.abs() < 1e-12);
}

#[test]
fn tsirelson_from_eigenvalue_oracle() {
    let chsh = fixtures::chsh();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let obs = vec![vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]], vec![[h, 0.0, h], [-h, 0.0, h]]];
    let top = common::max_eigenvalue_real(&common::dense_operator(&chsh, &obs));
    let r = seesaw_maximize(&chsh, &SeesawConfig { restarts: 4, ..SeesawConfig::default() }).unwrap();
    assert!((top - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    assert!((r.quantum_value.abs() - top).abs() < 1e-6);
}

#[test]
fn seesaw_half_steps_never_decrease() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for ineq in [fixtures::i10(), fixtures::h10()] {
        for sign in [1.0, -1.0] {
            let psi = PureState::random(3, &mut rng);
            let obs = Observables::random(ineq.scenario(), &mut rng);
            let run = seesaw_run(&ineq, sign, psi, obs, &SeesawConfig::default()).unwrap();
            for w in run.trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-12, "{} -> {}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn optimized_results_are_consistent() {
    let config = SeesawConfig { restarts: 8, ..SeesawConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for ineq in [fixtures::i10(), fixtures::h10()] {
        let r = seesaw_maximize(&ineq, &config).unwrap();
        let algebraic = to_f64(&ineq.algebraic_max());
        assert!(r.quantum_value.abs() <= algebraic + 1e-9);
        assert!(r.violation_factor >= 0.0);
        let s = r.best_state.as_ref().expect("three parties");
        let norm: f64 = s.lambda.iter().map(|l| l * l).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        for o in r.best_observables.per_party.iter().flatten() {
            let n: f64 = o.bloch.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
        let psi = r.reported_state();
        if r.converged {
            let q = bell_expectation(&ineq, &psi, &r.best_observables).unwrap();
            assert!((q - r.quantum_value).abs() < 1e-9, "{q} vs {}", r.quantum_value);
        }
        // No single observable can be improved at the optimum.
        let sign = match r.direction {
            Direction::Upper => 1.0,
            Direction::Lower => -1.0,
        };
        for p in 0..3 {
            for k in 0..ineq.scenario().settings_of(p) {
                for _ in 0..20 {
                    let mut obs = r.best_observables.clone();
                    obs.per_party[p][k] = Observable::random(&mut rng);
                    let q = bell_expectation(&ineq, &psi, &obs).unwrap();
                    assert!(sign * q <= sign * r.quantum_value + 1e-9);
                }
            }
        }
    }
}

#[test]
fn seesaw_is_deterministic_for_a_seed() {
    let config = SeesawConfig { restarts: 4, seed: 99, ..SeesawConfig::default() };
    let a = seesaw_maximize(&fixtures::h10(), &config).unwrap();
    let b = seesaw_maximize(&fixtures::h10(), &config).unwrap();
    assert_eq!(a.quantum_value.to_bits(), b.quantum_value.to_bits());
    assert_eq!(a.raw_state, b.raw_state);
}

fn tensor_oracle(psi: &[Complex64], i: usize, j: usize, k: usize) -> f64 {
    let op = common::pauli(i).kronecker(&common::pauli(j)).kronecker(&common::pauli(k));
    common::expectation(&op, psi)
}

#[test]
fn correlation_tensor_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let s = ThreeQubitState::random(&mut rng);
        let psi = s.to_pure();
        let t = correlation_tensor(&s, &[Triad::standard(); 3]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let o = tensor_oracle(psi.amplitudes(), i, j, k);
                    assert!((t.get(i, j, k) - o).abs() < 1e-12);
                }
            }
        }
        let triads = [Triad::random(&mut rng), Triad::random(&mut rng), Triad::random(&mut rng)];
        let rt = correlation_tensor(&s, &triads).unwrap();
        assert!((rt.get(0, 0, 0) - 1.0).abs() < 1e-12);
        assert!(rt.components.iter().flatten().flatten().all(|x| x.abs() <= 1.0 + 1e-9));
        // Rotated components are expectations of rotated Pauli operators.
        let a = triads[0].axes[0];
        let b = triads[1].axes[1];
        let op = common::bloch_matrix(a)
            .kronecker(&common::bloch_matrix(b))
            .kronecker(&common::pauli(0));
        assert!((rt.get(1, 2, 0) - common::expectation(&op, psi.amplitudes())).abs() < 1e-12);
    }
}

#[test]
fn zb_examples() {
    let std = [Triad::standard(); 3];
    assert!((zb_condition(&ThreeQubitState::ghz(), &std).unwrap() - 1.0).abs() < 1e-12);
    assert!(zb_condition(&ThreeQubitState::product_zero(), &std).unwrap().abs() < 1e-12);
    let t = correlation_tensor(&ThreeQubitState::product_zero(), &std).unwrap();
    for idx in [[3, 3, 3], [0, 0, 3], [0, 3, 0], [3, 0, 0]] {
        assert!((t.get(idx[0], idx[1], idx[2]) - 1.0).abs() < 1e-12);
    }
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if [i, j, k].iter().any(|&x| x == 1 || x == 2) {
                    assert!(t.get(i, j, k).abs() < 1e-12);
                }
            }
        }
    }
}
