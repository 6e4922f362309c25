//! Thermal equilibrium and pseudo-pure preparation by temporal averaging.

use super::{cnot_sequence, compile, PulseSequence, Spin, SpinSystem};
use crate::error::{Error, Result};
use crate::qcore::{c, DensityMatrix, Mat4};

/// High-temperature equilibrium state
/// `I/4 + ε·(r·σz_a/2 + σz_b/2)` with `r` the polarization ratio.
pub fn thermal_state(sys: &SpinSystem, epsilon: f64) -> Result<DensityMatrix> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon });
    }
    let r = sys.polarization_ratio;
    let diag = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
        .map(|(zb, za)| 0.25 + epsilon * (r * za + zb) / 2.0);
    if diag.iter().any(|&p| p < 0.0) {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon });
    }
    let trace: f64 = diag.iter().sum();
    DensityMatrix::new(Mat4::diagonal(diag.map(|p| c(p / trace, 0.0))))
}

/// Prefix programs for the three averaged experiments: identity, and the
/// two cyclic permutations of the `|01⟩, |10⟩, |11⟩` populations, each built
/// from two CNOTs.
pub fn permutation_sequences(sys: &SpinSystem) -> [PulseSequence; 3] {
    let ba = cnot_sequence(Spin::B, sys, false);
    let ab = cnot_sequence(Spin::A, sys, false);
    [
        PulseSequence::new(),
        // |01⟩ → |11⟩ → |10⟩ → |01⟩
        ba.clone().then(&ab),
        // |01⟩ → |10⟩ → |11⟩ → |01⟩
        ab.then(&ba),
    ]
}

/// Average of `channel` applied to the thermal state after each permutation prefix.
pub fn temporal_average_with<F>(sys: &SpinSystem, epsilon: f64, mut channel: F) -> Result<DensityMatrix>
where
    F: FnMut(&DensityMatrix) -> DensityMatrix,
{
    let rho0 = thermal_state(sys, epsilon)?;
    let mut acc = Mat4::zero();
    for prefix in permutation_sequences(sys).iter() {
        let prepared = rho0.evolve(&compile(prefix, sys));
        acc = acc + *channel(&prepared).matrix();
    }
    Ok(DensityMatrix::from_matrix_unchecked(acc.scale_real(1.0 / 3.0)))
}

/// Run `circuit` in three experiments with permuted initial populations and
/// average the outputs.
pub fn temporal_average(sys: &SpinSystem, epsilon: f64, circuit: &PulseSequence) -> Result<DensityMatrix> {
    let u = compile(circuit, sys);
    temporal_average_with(sys, epsilon, |rho| rho.evolve(&u))
}

/// Weight `β` of `|00⟩⟨00|` in the averaged initial state `(1−β)·I/4 + β·|00⟩⟨00|`.
pub fn pseudo_pure_weight(sys: &SpinSystem, epsilon: f64) -> Result<f64> {
    let avg = temporal_average(sys, epsilon, &PulseSequence::new())?;
    Ok(avg.get(0, 0).re - avg.get(3, 3).re)
}

/// Rescale the deviation of a pseudo-pure density matrix:
/// `I/4 + (ρ − I/4)/β`.
pub fn effective_pure_state(rho: &DensityMatrix, weight: f64) -> Result<DensityMatrix> {
    if !(weight.is_finite() && weight > 0.0) {
        return Err(Error::InvalidParameter { name: "weight", value: weight });
    }
    let quarter = Mat4::identity().scale_real(0.25);
    let dev = (*rho.matrix() - quarter).scale_real(1.0 / weight);
    DensityMatrix::new(quarter + dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::BellVariant;
    use crate::nmrsim::{protocol_program, ProgramOptions};
    use crate::protocol::Message;

    fn sys() -> SpinSystem {
        SpinSystem::default()
    }

    #[test]
    fn thermal_examples() {
        let t = thermal_state(&sys(), 0.0).unwrap();
        assert_eq!(t, DensityMatrix::maximally_mixed());
        let p = thermal_state(&sys(), 1e-4).unwrap().probabilities();
        assert!(p[0] > p[1] && p[0] > p[2] && p[1] > p[3] && p[2] > p[3]);
        assert!(thermal_state(&sys(), 0.2).is_err());
        assert!(thermal_state(&sys(), -1e-5).is_err());
    }

    #[test]
    fn permutations_cycle_populations() {
        let s = sys();
        let prefixes = permutation_sequences(&s);
        let diag = Mat4::diagonal([c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0)]);
        let rho = DensityMatrix::new(diag).unwrap();
        let p1 = rho.evolve(&compile(&prefixes[1], &s)).probabilities();
        let p2 = rho.evolve(&compile(&prefixes[2], &s)).probabilities();
        // P1 sends |01⟩ → |11⟩, |11⟩ → |10⟩, |10⟩ → |01⟩.
        let want1 = [0.1, 0.3, 0.4, 0.2];
        let want2 = [0.1, 0.4, 0.2, 0.3];
        for k in 0..4 {
            assert!((p1[k] - want1[k]).abs() < 1e-12, "{p1:?}");
            assert!((p2[k] - want2[k]).abs() < 1e-12, "{p2:?}");
        }
    }

    #[test]
    fn averaged_initial_state_is_pseudo_pure() {
        let s = sys();
        let eps = 1e-4;
        let avg = temporal_average(&s, eps, &PulseSequence::new()).unwrap();
        let beta = pseudo_pure_weight(&s, eps).unwrap();
        let r = s.polarization_ratio;
        // Hand sum of the three permuted diagonals.
        assert!((beta - 2.0 * eps * (r + 1.0) / 3.0).abs() < 1e-15);
        let alpha = 1.0 - beta;
        let mut dev = *avg.matrix() - Mat4::identity().scale_real(alpha / 4.0);
        dev.0[0][0] -= c(beta, 0.0);
        assert!(dev.max_norm() < 1e-10);
    }

    #[test]
    fn protocol_output_deviation_is_table_state() {
        let s = sys();
        let eps = 1e-5;
        let prog = protocol_program(Message::new(1).unwrap(), BellVariant::MinusPhi, &s, ProgramOptions::default());
        let out = temporal_average(&s, eps, &prog).unwrap();
        let beta = pseudo_pure_weight(&s, eps).unwrap();
        let eff = effective_pure_state(&out, beta).unwrap();
        assert!(eff.max_abs_diff(&DensityMatrix::basis(2)) < 1e-9);
    }

    #[test]
    fn zero_polarization_stays_mixed() {
        let s = sys();
        let prog = protocol_program(Message::new(4).unwrap(), BellVariant::PlusPsi, &s, ProgramOptions::default());
        let out = temporal_average(&s, 0.0, &prog).unwrap();
        assert!(out.max_abs_diff(&DensityMatrix::maximally_mixed()) < 1e-15);
    }

    #[test]
    fn effective_state_rejects_bad_weight() {
        let rho = DensityMatrix::maximally_mixed();
        assert!(effective_pure_state(&rho, 0.0).is_err());
        assert!(effective_pure_state(&rho, f64::NAN).is_err());
    }
}
