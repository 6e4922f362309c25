//! Ensemble error model for pulse programs.
//!
//! Each ensemble member sees one RF amplitude scale `1 + calib_offset + δ`
//! and one static-field offset, both fixed for the whole program. The offset
//! is drawn in Hz for spin a and scaled by `1/polarization_ratio` for spin b,
//! since a field error shifts both resonances in proportion to `γ`.
//! Z rotations are phase-frame updates and stay exact. Transverse decay is
//! applied to the averaged state as `e^{−t/T2}` per spin whose coherence an
//! element carries, with `t` the total delay time of the program.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::nmrsim::{offset_evolution, rf_unitary, Axis, PulseEvent, PulseSequence, SpinSystem};
use crate::qcore::{DensityMatrix, Mat4, Unitary4};

/// Gaussian draws are rejected outside `±TRUNCATION·σ`.
pub const TRUNCATION: f64 = 3.0;

/// Strengths of the modelled error sources.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorParams {
    /// Fractional std-dev of RF amplitude across the sample.
    pub rf_spread: f64,
    /// Fractional systematic error of every RF rotation angle.
    pub calib_offset: f64,
    /// Std-dev of the spin-a resonance offset from field inhomogeneity, Hz.
    pub offset_spread_hz: f64,
    /// Transverse decay time of spin a, seconds; infinite disables decay.
    pub t2_a_s: f64,
    pub t2_b_s: f64,
    pub ensemble_size: usize,
}

impl Default for ErrorParams {
    fn default() -> Self {
        Self::none()
    }
}

impl ErrorParams {
    /// No errors: the ensemble reduces to plain unitary evolution.
    pub const fn none() -> Self {
        ErrorParams {
            rf_spread: 0.0,
            calib_offset: 0.0,
            offset_spread_hz: 0.0,
            t2_a_s: f64::INFINITY,
            t2_b_s: f64::INFINITY,
            ensemble_size: 1,
        }
    }

    /// Demonstration parameter set whose four decoded-state reconstructions
    /// show a largest element error of about ten percent. Found with the
    /// grid search in `crates/densecode/examples/calibrate.rs`.
    pub const fn calibrated_demo() -> Self {
        ErrorParams {
            rf_spread: 0.04,
            calib_offset: 0.02,
            offset_spread_hz: 20.0,
            t2_a_s: 1.0,
            t2_b_s: 0.3,
            ensemble_size: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let non_negative = [
            ("rf_spread", self.rf_spread),
            ("offset_spread_hz", self.offset_spread_hz),
        ];
        for (name, value) in non_negative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if !self.calib_offset.is_finite() {
            return Err(Error::InvalidParameter { name: "calib_offset", value: self.calib_offset });
        }
        for (name, value) in [("t2_a_s", self.t2_a_s), ("t2_b_s", self.t2_b_s)] {
            if value.is_nan() || value <= 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if self.ensemble_size == 0 {
            return Err(Error::InvalidParameter { name: "ensemble_size", value: 0.0 });
        }
        Ok(())
    }
}

/// Error realization seen by one ensemble member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemberSample {
    /// Multiplier applied to every X/Y rotation angle.
    pub rf_scale: f64,
    pub offset_a_hz: f64,
    pub offset_b_hz: f64,
}

impl MemberSample {
    pub fn ideal() -> Self {
        MemberSample { rf_scale: 1.0, offset_a_hz: 0.0, offset_b_hz: 0.0 }
    }

    pub fn draw(p: &ErrorParams, sys: &SpinSystem, sample_seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
        let delta = p.rf_spread * truncated_normal(&mut rng);
        let field = truncated_normal(&mut rng);
        let offset_a_hz = p.offset_spread_hz * field;
        MemberSample {
            rf_scale: 1.0 + p.calib_offset + delta,
            offset_a_hz,
            offset_b_hz: offset_a_hz / sys.polarization_ratio,
        }
    }
}

fn truncated_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let x: f64 = StandardNormal.sample(rng);
        if x.abs() <= TRUNCATION {
            return x;
        }
    }
}

/// Seeds of the ensemble members, fixed up front so members can be
/// evaluated in any order.
pub fn member_seeds(seed: u64, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.next_u64()).collect()
}

/// Compile `seq` under one member's error realization.
pub fn compile_with_sample(seq: &PulseSequence, sys: &SpinSystem, sample: &MemberSample) -> Unitary4 {
    seq.events().iter().fold(Unitary4::identity(), |acc, e| {
        let step = match *e {
            PulseEvent::Rf { spin, axis: Axis::Z, angle, phase } => {
                rf_unitary(spin, Axis::Z, angle * phase.value())
            }
            PulseEvent::Rf { spin, axis, angle, phase } => {
                rf_unitary(spin, axis, angle * phase.value() * sample.rf_scale)
            }
            PulseEvent::Delay { duration } => {
                offset_evolution(sys, duration, sample.offset_a_hz, sample.offset_b_hz)
            }
        };
        step * acc
    })
}

/// Compile `seq` with errors drawn from `sample_seed`.
pub fn noisy_compile(seq: &PulseSequence, sys: &SpinSystem, p: &ErrorParams, sample_seed: u64) -> Unitary4 {
    compile_with_sample(seq, sys, &MemberSample::draw(p, sys, sample_seed))
}

/// Multiply each element by `e^{−t/T2}` for every spin whose state differs
/// between row and column.
pub fn t2_damping(rho: &Mat4, t: f64, t2_a_s: f64, t2_b_s: f64) -> Mat4 {
    let da = libm::exp(-t / t2_a_s);
    let db = libm::exp(-t / t2_b_s);
    let mut out = *rho;
    for j in 0..4 {
        for k in 0..4 {
            let mut f = 1.0;
            if (j ^ k) & 1 != 0 {
                f *= da;
            }
            if (j ^ k) & 2 != 0 {
                f *= db;
            }
            out.0[j][k] *= f;
        }
    }
    out
}

/// Average `U_k ρ0 U_k†` over the ensemble, then apply transverse decay.
pub fn ensemble_average(
    seq: &PulseSequence,
    sys: &SpinSystem,
    p: &ErrorParams,
    rho0: &DensityMatrix,
    seed: u64,
) -> Result<DensityMatrix> {
    p.validate()?;
    let unitaries = ensemble_unitaries(seq, sys, p, seed);
    Ok(apply_ensemble(&unitaries, rho0, seq.total_delay(), p))
}

/// One compiled unitary per member, in member order.
pub fn ensemble_unitaries(seq: &PulseSequence, sys: &SpinSystem, p: &ErrorParams, seed: u64) -> Vec<Unitary4> {
    member_seeds(seed, p.ensemble_size)
        .into_iter()
        .map(|s| noisy_compile(seq, sys, p, s))
        .collect()
}

/// Mixture of `U ρ0 U†` over precompiled members, followed by decay over `t_total`.
pub fn apply_ensemble(
    unitaries: &[Unitary4],
    rho0: &DensityMatrix,
    t_total: f64,
    p: &ErrorParams,
) -> DensityMatrix {
    let n = unitaries.len().max(1) as f64;
    let sum = unitaries
        .iter()
        .fold(Mat4::zero(), |acc, u| acc + *rho0.evolve(u).matrix());
    let mean = sum.scale_real(1.0 / n);
    DensityMatrix::from_matrix_unchecked(t2_damping(&mean, t_total, p.t2_a_s, p.t2_b_s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::BellVariant;
    use crate::nmrsim::{compile, Spin};
    use crate::qcore::PSD_FLOOR;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn sys() -> SpinSystem {
        SpinSystem::default()
    }

    #[test]
    fn zero_noise_matches_compile() {
        let s = sys();
        let seq = crate::nmrsim::cnot_pulse_sequence(&s).then(&crate::nmrsim::pseudo_hadamard_b());
        let u = noisy_compile(&seq, &s, &ErrorParams::none(), 42);
        assert!(u.matrix().max_abs_diff(compile(&seq, &s).matrix()) < 1e-15);
    }

    #[test]
    fn calibration_offset_scales_angle() {
        let s = sys();
        let p = ErrorParams { calib_offset: 0.05, ..ErrorParams::none() };
        let seq = PulseSequence::new().rf(Spin::B, Axis::X, PI);
        let u = noisy_compile(&seq, &s, &p, 7);
        let want = rf_unitary(Spin::B, Axis::X, PI * 1.05);
        assert!(u.matrix().max_abs_diff(want.matrix()) < 1e-15);
    }

    #[test]
    fn z_rotations_are_exact() {
        let s = sys();
        let p = ErrorParams { calib_offset: 0.3, rf_spread: 0.2, ..ErrorParams::none() };
        let seq = PulseSequence::new().rf(Spin::A, Axis::Z, PI);
        assert_eq!(noisy_compile(&seq, &s, &p, 1), compile(&seq, &s));
    }

    #[test]
    fn zero_noise_ensemble_is_unitary_conjugation() {
        let s = sys();
        let seq = crate::nmrsim::bell_prep_program(BellVariant::MinusPsi, &s, Default::default());
        let rho0 = DensityMatrix::basis(0);
        let want = rho0.evolve(&compile(&seq, &s));
        for n in [1, 5, 64] {
            let p = ErrorParams { ensemble_size: n, ..ErrorParams::none() };
            let got = ensemble_average(&seq, &s, &p, &rho0, 3).unwrap();
            assert!(got.max_abs_diff(&want) < 1e-12);
        }
    }

    #[test]
    fn huge_rf_spread_dephases_transverse_signal() {
        let s = sys();
        let seq = PulseSequence::new().rf(Spin::A, Axis::X, FRAC_PI_2);
        let p = ErrorParams { rf_spread: 50.0, ensemble_size: 4000, ..ErrorParams::none() };
        let out = ensemble_average(&seq, &s, &p, &DensityMatrix::basis(0), 11).unwrap();
        let y_a = crate::tomo::product_operator(2);
        let ideal = DensityMatrix::basis(0).evolve(&compile(&seq, &s)).expectation(&y_a);
        assert!((ideal.abs() - 1.0).abs() < 1e-12);
        assert!(out.expectation(&y_a).abs() < 0.05, "{}", out.expectation(&y_a));
    }

    #[test]
    fn draws_are_truncated_and_deterministic() {
        let s = sys();
        let p = ErrorParams { rf_spread: 0.1, offset_spread_hz: 10.0, ..ErrorParams::none() };
        for seed in member_seeds(5, 2000) {
            let m = MemberSample::draw(&p, &s, seed);
            assert!((m.rf_scale - 1.0).abs() <= 0.3 + 1e-12);
            assert!(m.offset_a_hz.abs() <= 30.0 + 1e-12);
            assert!((m.offset_b_hz * s.polarization_ratio - m.offset_a_hz).abs() < 1e-12);
        }
        assert_eq!(member_seeds(9, 10), member_seeds(9, 10));
        assert_ne!(member_seeds(9, 10), member_seeds(10, 10));
    }

    #[test]
    fn damping_by_coherence() {
        let mut m = Mat4::zero();
        for j in 0..4 {
            for k in 0..4 {
                m.0[j][k] = crate::qcore::c(1.0, 0.0);
            }
        }
        let d = t2_damping(&m, 0.1, 1.0, 0.5);
        let ea = libm::exp(-0.1);
        let eb = libm::exp(-0.2);
        assert_eq!(d.get(0, 0).re, 1.0);
        assert!((d.get(0, 1).re - ea).abs() < 1e-15);
        assert!((d.get(0, 2).re - eb).abs() < 1e-15);
        assert!((d.get(0, 3).re - ea * eb).abs() < 1e-15);
        assert!((d.get(1, 2).re - ea * eb).abs() < 1e-15);
    }

    #[test]
    fn output_is_valid_density_matrix() {
        let s = sys();
        let seq = crate::nmrsim::protocol_program(
            crate::protocol::Message::new(4).unwrap(),
            BellVariant::MinusPhi,
            &s,
            Default::default(),
        );
        let p = ErrorParams { ensemble_size: 50, ..ErrorParams::calibrated_demo() };
        let out = ensemble_average(&seq, &s, &p, &DensityMatrix::basis(0), 1).unwrap();
        assert!(DensityMatrix::new(*out.matrix()).is_ok());
        assert!(out.eigenvalues()[0] > PSD_FLOOR);
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = [
            ErrorParams { rf_spread: -0.1, ..ErrorParams::none() },
            ErrorParams { offset_spread_hz: f64::NAN, ..ErrorParams::none() },
            ErrorParams { t2_a_s: 0.0, ..ErrorParams::none() },
            ErrorParams { ensemble_size: 0, ..ErrorParams::none() },
            ErrorParams { calib_offset: f64::INFINITY, ..ErrorParams::none() },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }
}
