//! Randomized invariants across the simulator layers.

use densecode_core::nmrsim::{
    compile, protocol_program, temporal_average, ProgramOptions, PulseSequence, SpinSystem,
};
use densecode_core::noise::{ensemble_average, ErrorParams};
use densecode_core::protocol::{transmit, GateSet};
use densecode_core::qcore::{random, tensor, DensityMatrix, Mat4, PureState, Unitary2, DENSITY_TOL, PSD_FLOOR};
use densecode_core::tomo::{element_modulus_table, reconstruct, simulate_readouts};
use densecode_core::{BellVariant, Complex, Message};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn is_valid(rho: &DensityMatrix) -> bool {
    let m = rho.matrix();
    (m.trace().re - 1.0).abs() < DENSITY_TOL
        && m.trace().im.abs() < DENSITY_TOL
        && m.hermiticity_defect() < DENSITY_TOL
        && rho.eigenvalues()[0] >= PSD_FLOOR
}

fn variant() -> impl Strategy<Value = BellVariant> {
    (0usize..4).prop_map(|i| BellVariant::ALL[i])
}

fn message() -> impl Strategy<Value = Message> {
    (0usize..4).prop_map(|i| Message::ALL[i])
}

/// Unnormalized complex amplitudes with at least one sizeable entry.
fn raw_amplitudes() -> impl Strategy<Value = [f64; 8]> {
    prop::array::uniform8(-1.0f64..1.0).prop_filter("non-zero", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn unitaries_preserve_norm(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random::pure_state(&mut r);
        let u = random::unitary4(&mut r);
        prop_assert!((s.apply(&u).norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_preserves_trace_and_validity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random::density(&mut r);
        let out = rho.evolve(&random::unitary4(&mut r));
        prop_assert!(is_valid(&out));
    }

    #[test]
    fn normalized_raw_amplitudes_are_states(raw in raw_amplitudes(), seed in any::<u64>()) {
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        let amp: [Complex; 4] = std::array::from_fn(|k| Complex::new(raw[2 * k] / norm, raw[2 * k + 1] / norm));
        let s = PureState::new(amp).unwrap();
        let u = random::unitary4(&mut rng(seed));
        prop_assert!((s.apply(&u).norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(is_valid(&s.density().evolve(&u)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tensor_factorizes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random::unitary2(&mut r), random::unitary2(&mut r));
        let id = Unitary2::identity();
        let product = tensor(&a, &id) * tensor(&id, &b);
        prop_assert!(product.matrix().max_abs_diff(tensor(&a, &b).matrix()) < 1e-12);
    }

    #[test]
    fn pure_and_mixed_evolution_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random::pure_state(&mut r);
        let u = random::unitary4(&mut r);
        let via_state = s.apply(&u).probabilities();
        let via_density = s.density().evolve(&u).probabilities();
        for k in 0..4 {
            prop_assert!((via_state[k] - via_density[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn tomography_round_trip(seed in any::<u64>(), purity in 0.0f64..=1.0) {
        let mut r = rng(seed);
        for rho in [random::density(&mut r), random::mixed_with_pure(&mut r, purity)] {
            let back = reconstruct(&simulate_readouts(&rho)).unwrap();
            prop_assert!(back.max_abs_diff(&rho) < 1e-8);
        }
    }

    #[test]
    fn reconstruction_of_perturbed_records_is_valid(seed in any::<u64>(), kick in -0.3f64..0.3) {
        let rho = random::mixed_with_pure(&mut rng(seed), 1.0);
        let mut records = simulate_readouts(&rho);
        for (i, rec) in records.iter_mut().enumerate() {
            for (j, v) in rec.observed.iter_mut().enumerate() {
                *v += kick * (((i * 16 + j) % 5) as f64 - 2.0) / 2.0;
            }
        }
        prop_assert!(is_valid(&reconstruct(&records).unwrap()));
    }

    #[test]
    fn moduli_ignore_global_phase(seed in any::<u64>(), phase in -10.0f64..10.0) {
        let s = random::pure_state(&mut rng(seed));
        let a = element_modulus_table(&s.density());
        let b = element_modulus_table(&s.scale_phase(phase).density());
        for j in 0..4 {
            for k in 0..4 {
                prop_assert!((a.get(j, k) - b.get(j, k)).abs() < 1e-12);
                prop_assert!((a.get(j, k) - a.get(k, j)).abs() < 1e-12);
            }
            prop_assert!(a.get(j, j) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn messages_survive_transmission(m in message(), v in variant()) {
        prop_assert_eq!(transmit(m, v).unwrap(), m);
        let (hi, lo) = m.bits();
        prop_assert_eq!(Message::from_bits(hi, lo), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pulse_protocol_matches_circuit(m in message(), v in variant(), j_hz in 20.0f64..800.0, refocus in any::<bool>()) {
        let sys = SpinSystem { j_hz, ..SpinSystem::default() };
        let want = GateSet::standard().run(m, v).unwrap().index();
        let u = compile(&protocol_program(m, v, &sys, ProgramOptions { refocus }), &sys);
        prop_assert!(PureState::basis(0).apply(&u).probabilities()[want] > 1.0 - 1e-9);
    }

    #[test]
    fn averaging_equalizes_excited_populations(eps in 0.0f64..1e-3) {
        let sys = SpinSystem::default();
        let avg = temporal_average(&sys, eps, &PulseSequence::new()).unwrap();
        let p = avg.probabilities();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!((p[1] - p[2]).abs() < 1e-15 && (p[2] - p[3]).abs() < 1e-15);
        prop_assert!(p[0] >= p[1]);
    }

    #[test]
    fn noisy_ensemble_output_is_valid(
        rf_spread in 0.0f64..0.5,
        calib_offset in -0.3f64..0.3,
        offset_spread_hz in 0.0f64..200.0,
        t2 in 1e-3f64..10.0,
        n in 1usize..12,
        seed in any::<u64>(),
        m in message(),
        v in variant(),
    ) {
        let sys = SpinSystem::default();
        let p = ErrorParams { rf_spread, calib_offset, offset_spread_hz, t2_a_s: t2, t2_b_s: t2 / 3.0, ensemble_size: n };
        let prog = protocol_program(m, v, &sys, ProgramOptions { refocus: true });
        let rho = ensemble_average(&prog, &sys, &p, &DensityMatrix::basis(0), seed).unwrap();
        prop_assert!(is_valid(&rho));
    }

    #[test]
    fn zero_noise_is_plain_conjugation(seed in any::<u64>(), n in 1usize..6, m in message(), v in variant()) {
        let sys = SpinSystem::default();
        let prog = protocol_program(m, v, &sys, ProgramOptions::default());
        let rho0 = random::density(&mut rng(seed));
        let p = ErrorParams { ensemble_size: n, ..ErrorParams::none() };
        let got = ensemble_average(&prog, &sys, &p, &rho0, seed).unwrap();
        let want = rho0.evolve(&compile(&prog, &sys));
        prop_assert!(got.max_abs_diff(&want) < 1e-12);
    }
}

#[test]
fn thousand_seeded_densities_are_valid() {
    let all = random::densities(1, 1000);
    assert!(all.iter().all(is_valid));
    let m: Mat4 = *all[0].matrix();
    assert!(m.is_finite());
}
