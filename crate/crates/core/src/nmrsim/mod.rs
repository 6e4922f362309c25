//! Pulse-level realization of the network on a heteronuclear two-spin
//! system (¹H = spin a, ¹³C = spin b) in the doubly-rotating frame.
//!
//! Rotations follow `R_axis(θ) = exp(−iθσ_axis/2)`, so `X(π) = −iσx`,
//! `Y(π) = −iσy ∼ iσy` and `Z(π) = −iσz`. Pulses are instantaneous; only
//! delays accrue J-coupling evolution.

mod averaging;

pub use averaging::{
    effective_pure_state, permutation_sequences, pseudo_pure_weight, temporal_average,
    temporal_average_with, thermal_state,
};

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::gates::BellVariant;
use crate::protocol::Message;
use crate::qcore::{c, pauli, tensor, Mat2, Mat4, Sign, Unitary2, Unitary4};

/// Larmor frequency of ¹H at the reference field, MHz.
pub const DEFAULT_FREQ_A_MHZ: f64 = 500.13;
/// Larmor frequency of ¹³C at the reference field, MHz.
pub const DEFAULT_FREQ_B_MHZ: f64 = 125.77;
/// Scalar coupling used when none is configured, Hz.
pub const DEFAULT_J_HZ: f64 = 215.0;
pub const DEFAULT_T2_A_S: f64 = 1.0;
pub const DEFAULT_T2_B_S: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    /// ¹H, right basis label.
    A,
    /// ¹³C, left basis label.
    B,
}

impl Spin {
    pub fn other(self) -> Spin {
        match self {
            Spin::A => Spin::B,
            Spin::B => Spin::A,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn pauli_index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }
}

/// Two-spin sample parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinSystem {
    pub freq_a_mhz: f64,
    pub freq_b_mhz: f64,
    pub j_hz: f64,
    pub t2_a_s: f64,
    pub t2_b_s: f64,
    /// `γ_a/γ_b`, the ratio of thermal polarizations.
    pub polarization_ratio: f64,
}

impl Default for SpinSystem {
    fn default() -> Self {
        SpinSystem {
            freq_a_mhz: DEFAULT_FREQ_A_MHZ,
            freq_b_mhz: DEFAULT_FREQ_B_MHZ,
            j_hz: DEFAULT_J_HZ,
            t2_a_s: DEFAULT_T2_A_S,
            t2_b_s: DEFAULT_T2_B_S,
            polarization_ratio: DEFAULT_FREQ_A_MHZ / DEFAULT_FREQ_B_MHZ,
        }
    }
}

impl SpinSystem {
    /// Polarization ratio is taken from the frequency ratio.
    pub fn new(freq_a_mhz: f64, freq_b_mhz: f64, j_hz: f64, t2_a_s: f64, t2_b_s: f64) -> Result<Self> {
        let checks = [
            ("freq_a_mhz", freq_a_mhz),
            ("freq_b_mhz", freq_b_mhz),
            ("j_hz", j_hz),
            ("t2_a_s", t2_a_s),
            ("t2_b_s", t2_b_s),
        ];
        for (name, value) in checks {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(SpinSystem {
            freq_a_mhz,
            freq_b_mhz,
            j_hz,
            t2_a_s,
            t2_b_s,
            polarization_ratio: freq_a_mhz / freq_b_mhz,
        })
    }

    /// `1/(2J)`: the delay that produces a quarter-turn of ZZ evolution.
    pub fn half_coupling_delay(&self) -> f64 {
        1.0 / (2.0 * self.j_hz)
    }
}

/// A single event of a pulse program.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PulseEvent {
    /// Rotation of one spin; `phase` selects the `+axis` or `−axis` direction.
    Rf { spin: Spin, axis: Axis, angle: f64, phase: Sign },
    /// Free evolution under the coupling, seconds.
    Delay { duration: f64 },
}

impl PulseEvent {
    pub fn rf(spin: Spin, axis: Axis, angle: f64) -> Self {
        PulseEvent::Rf { spin, axis, angle, phase: Sign::Plus }
    }

    pub fn delay(duration: f64) -> Self {
        PulseEvent::Delay { duration }
    }

    /// Signed rotation angle of an RF event.
    pub fn signed_angle(&self) -> Option<f64> {
        match *self {
            PulseEvent::Rf { angle, phase, .. } => Some(angle * phase.value()),
            PulseEvent::Delay { .. } => None,
        }
    }

    fn is_pi_on(&self, target: Spin) -> bool {
        matches!(*self, PulseEvent::Rf { spin, axis: Axis::X, angle, .. }
            if spin == target && (angle.abs() - PI).abs() < 1e-12)
    }
}

/// Ordered list of events; the first event is applied first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseSequence {
    events: Vec<PulseEvent>,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_events(events: Vec<PulseEvent>) -> Self {
        PulseSequence { events }
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn push(&mut self, e: PulseEvent) -> &mut Self {
        self.events.push(e);
        self
    }

    pub fn rf(mut self, spin: Spin, axis: Axis, angle: f64) -> Self {
        self.events.push(PulseEvent::rf(spin, axis, angle));
        self
    }

    pub fn delay(mut self, duration: f64) -> Self {
        self.events.push(PulseEvent::delay(duration));
        self
    }

    /// Append `other` after `self`.
    pub fn then(mut self, other: &PulseSequence) -> Self {
        self.events.extend_from_slice(&other.events);
        self
    }

    pub fn total_delay(&self) -> f64 {
        self.events
            .iter()
            .map(|e| match *e {
                PulseEvent::Delay { duration } => duration,
                PulseEvent::Rf { .. } => 0.0,
            })
            .sum()
    }

    /// Give successive `X(π)` pulses on each spin opposite phases (+, −, +, …).
    pub fn with_alternating_pi_phases(mut self) -> Self {
        for spin in [Spin::A, Spin::B] {
            let mut next = Sign::Plus;
            for e in self.events.iter_mut() {
                if e.is_pi_on(spin) {
                    if let PulseEvent::Rf { angle, phase, .. } = e {
                        *angle = angle.abs();
                        *phase = next;
                    }
                    next = next * Sign::Minus;
                }
            }
        }
        self
    }
}

/// `exp(−iθσ/2)` on one spin.
pub fn rotation(axis: Axis, angle: f64) -> Unitary2 {
    let (s, co) = libm::sincos(angle / 2.0);
    let id: Mat2 = pauli(0);
    let sigma = pauli(axis.pauli_index());
    Unitary2::from_matrix_unchecked(id.scale(c(co, 0.0)) + sigma.scale(c(0.0, -s)))
}

/// Single-spin rotation lifted to the two-spin space.
pub fn rf_unitary(spin: Spin, axis: Axis, angle: f64) -> Unitary4 {
    let r = rotation(axis, angle);
    match spin {
        Spin::A => Unitary4::on_a(&r),
        Spin::B => Unitary4::on_b(&r),
    }
}

/// `exp(−i·2πJt·(σz_b/2)⊗(σz_a/2))`, chemical shifts absent.
pub fn j_evolution(sys: &SpinSystem, t: f64) -> Unitary4 {
    let phi = 2.0 * PI * sys.j_hz * t / 4.0;
    let minus = unit_phase(-phi);
    let plus = unit_phase(phi);
    Unitary4::from_matrix_unchecked(Mat4::diagonal([minus, plus, plus, minus]))
}

/// Free evolution with resonance offsets (Hz) on each spin as well as the coupling.
pub fn offset_evolution(sys: &SpinSystem, t: f64, offset_a_hz: f64, offset_b_hz: f64) -> Unitary4 {
    let za = 2.0 * PI * offset_a_hz * t;
    let zb = 2.0 * PI * offset_b_hz * t;
    let shifts = tensor(&rotation(Axis::Z, zb), &rotation(Axis::Z, za));
    shifts * j_evolution(sys, t)
}

fn unit_phase(theta: f64) -> crate::Complex {
    let (s, co) = libm::sincos(theta);
    c(co, s)
}

/// Compile events in time order: the unitary of event `k+1` multiplies from the left.
pub fn compile(seq: &PulseSequence, sys: &SpinSystem) -> Unitary4 {
    seq.events.iter().fold(Unitary4::identity(), |acc, e| {
        let step = match *e {
            PulseEvent::Rf { spin, axis, angle, phase } => {
                rf_unitary(spin, axis, angle * phase.value())
            }
            PulseEvent::Delay { duration } => j_evolution(sys, duration),
        };
        step * acc
    })
}

/// NOT on one spin: `X(π)`.
pub fn not_pulse(spin: Spin) -> PulseSequence {
    PulseSequence::new().rf(spin, Axis::X, PI)
}

/// `X(π)Y(−π/2)` on spin b in operator order: `Y(−π/2)` first, then `X(π)`.
/// Compiles to `i(σz − σx)/√2`, the Hadamard conjugated by `σz` up to phase.
pub fn pseudo_hadamard_b() -> PulseSequence {
    PulseSequence::new().rf(Spin::B, Axis::Y, -FRAC_PI_2).rf(Spin::B, Axis::X, PI)
}

/// CNOT with the given control, from
/// `CN = e^{iπ/4}·Z_c(π/2)·X_t(π/2)·exp(iπ σz_c σx_t/4)`, where the `zx`
/// term is a `1/(2J)` coupling delay sandwiched by `Y_t(±π/2)`.
pub fn cnot_sequence(control: Spin, sys: &SpinSystem, refocus: bool) -> PulseSequence {
    let target = control.other();
    let delay = sys.half_coupling_delay();
    let mut seq = PulseSequence::new().rf(target, Axis::Y, FRAC_PI_2);
    if refocus {
        // Both spins flipped mid-delay: offsets cancel, ZZ is untouched.
        seq = seq
            .delay(delay / 2.0)
            .rf(Spin::A, Axis::X, PI)
            .rf(Spin::B, Axis::X, PI)
            .delay(delay / 2.0);
        seq.push(PulseEvent::Rf { spin: Spin::A, axis: Axis::X, angle: PI, phase: Sign::Minus });
        seq.push(PulseEvent::Rf { spin: Spin::B, axis: Axis::X, angle: PI, phase: Sign::Minus });
    } else {
        seq = seq.delay(delay);
    }
    seq.rf(target, Axis::Y, -FRAC_PI_2)
        .rf(target, Axis::X, FRAC_PI_2)
        .rf(control, Axis::Z, FRAC_PI_2)
}

/// `CN_ba` (control b, target a).
pub fn cnot_pulse_sequence(sys: &SpinSystem) -> PulseSequence {
    cnot_sequence(Spin::B, sys, false)
}

/// `CN_ba` with opposed-phase refocusing pulses in the coupling delay.
pub fn cnot_pulse_sequence_refocused(sys: &SpinSystem) -> PulseSequence {
    cnot_sequence(Spin::B, sys, true)
}

/// Pulse form of the encoding for `m`: nothing, `Z_a(π)`, `X_a(π)`, `Y_a(π)`.
pub fn encoding_pulse(m: Message) -> PulseSequence {
    let seq = PulseSequence::new();
    match m.index() {
        1 => seq,
        2 => seq.rf(Spin::A, Axis::Z, PI),
        3 => seq.rf(Spin::A, Axis::X, PI),
        _ => seq.rf(Spin::A, Axis::Y, PI),
    }
}

/// NOT pulses that replace `N_b` for the given Bell variant.
pub fn bell_prep_pulses(v: BellVariant) -> PulseSequence {
    let (fb, fa) = v.prep_flips();
    let mut seq = PulseSequence::new();
    if fb {
        seq = seq.then(&not_pulse(Spin::B));
    }
    if fa {
        seq = seq.then(&not_pulse(Spin::A));
    }
    seq
}

/// Options for assembling the protocol program.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProgramOptions {
    /// Refocus coupling delays and alternate the phase of successive `X(π)` pulses.
    pub refocus: bool,
}

/// Bell-pair preparation: NOT substitutions, pseudo-Hadamard on b, CNOT.
pub fn bell_prep_program(v: BellVariant, sys: &SpinSystem, opts: ProgramOptions) -> PulseSequence {
    let seq = bell_prep_pulses(v)
        .then(&pseudo_hadamard_b())
        .then(&cnot_sequence(Spin::B, sys, opts.refocus));
    if opts.refocus {
        seq.with_alternating_pi_phases()
    } else {
        seq
    }
}

/// The whole network as one pulse program.
pub fn protocol_program(
    m: Message,
    v: BellVariant,
    sys: &SpinSystem,
    opts: ProgramOptions,
) -> PulseSequence {
    let seq = bell_prep_pulses(v)
        .then(&pseudo_hadamard_b())
        .then(&cnot_sequence(Spin::B, sys, opts.refocus))
        .then(&encoding_pulse(m))
        .then(&cnot_sequence(Spin::B, sys, opts.refocus))
        .then(&pseudo_hadamard_b());
    if opts.refocus {
        seq.with_alternating_pi_phases()
    } else {
        seq
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{cnot_ab, cnot_ba, hadamard, i_pauli_y, not_gate, pauli_z};
    use crate::protocol::GateSet;
    use crate::qcore::{PureState, PURE_TOL};

    fn sys() -> SpinSystem {
        SpinSystem::default()
    }

    #[test]
    fn rf_examples() {
        let x = rf_unitary(Spin::B, Axis::X, PI);
        let want = Unitary4::on_b(&not_gate()).scale_phase(-FRAC_PI_2);
        assert!(x.matrix().max_abs_diff(want.matrix()) < PURE_TOL);
        assert!(rf_unitary(Spin::A, Axis::X, 0.0).matrix().max_abs_diff(Unitary4::identity().matrix()) < 1e-15);
        let half = rf_unitary(Spin::A, Axis::Y, FRAC_PI_2);
        let full = rf_unitary(Spin::A, Axis::Y, PI);
        assert!((half * half).matrix().max_abs_diff(full.matrix()) < PURE_TOL);
    }

    #[test]
    fn j_evolution_examples() {
        let s = sys();
        assert!(j_evolution(&s, 0.0).matrix().max_abs_diff(Unitary4::identity().matrix()) < 1e-15);
        let u = j_evolution(&s, 1.0 / (2.0 * s.j_hz));
        let m = unit_phase(-PI / 4.0);
        let p = unit_phase(PI / 4.0);
        let want = Mat4::diagonal([m, p, p, m]);
        assert!(u.matrix().max_abs_diff(&want) < PURE_TOL);
        let full = j_evolution(&s, 2.0 / s.j_hz);
        assert!(full.distance_up_to_phase(&Unitary4::identity()) < 1e-12);
    }

    #[test]
    fn pseudo_hadamard_compiles_to_conjugated_hadamard() {
        let u = compile(&pseudo_hadamard_b(), &sys());
        let zhz = pauli_z() * hadamard() * pauli_z();
        let want = Unitary4::on_b(&zhz).scale_phase(FRAC_PI_2);
        assert!(u.matrix().max_abs_diff(want.matrix()) < PURE_TOL);
        let twice = u * u;
        assert!(twice.distance_up_to_phase(&Unitary4::identity()) < PURE_TOL);
        let p = PureState::from_bits(1, 0).apply(&u).probabilities();
        assert!((p[0] - 0.5).abs() < PURE_TOL && (p[2] - 0.5).abs() < PURE_TOL);
    }

    #[test]
    fn cnot_sequences_match_ideal_up_to_phase() {
        for j in [215.0, 150.0, 30.0] {
            let s = SpinSystem { j_hz: j, ..sys() };
            let u = compile(&cnot_pulse_sequence(&s), &s);
            assert!(u.distance_up_to_phase(&cnot_ba()) < 1e-9);
            let r = compile(&cnot_pulse_sequence_refocused(&s), &s);
            assert!(r.distance_up_to_phase(&cnot_ba()) < 1e-9);
            let ab = compile(&cnot_sequence(Spin::A, &s, false), &s);
            assert!(ab.distance_up_to_phase(&cnot_ab()) < 1e-9);
            assert!((cnot_pulse_sequence(&s).total_delay() - 1.0 / (2.0 * j)).abs() < 1e-15);
        }
        let p = PureState::from_bits(1, 0).apply(&compile(&cnot_pulse_sequence(&sys()), &sys()));
        assert!((p.probabilities()[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delay_total_at_default_coupling() {
        let d = cnot_pulse_sequence(&sys()).total_delay();
        assert!((d * 1e3 - 2.326).abs() < 5e-4, "{d}");
    }

    #[test]
    fn encoding_pulses_match_encodings_up_to_phase() {
        for m in Message::ALL {
            let u = compile(&encoding_pulse(m), &sys());
            assert!(u.distance_up_to_phase(&Unitary4::on_a(&m.encoding_unitary())) < PURE_TOL);
        }
        let y = compile(&encoding_pulse(Message::new(4).unwrap()), &sys());
        let want = Unitary4::on_a(&i_pauli_y()).scale_phase(PI);
        assert!(y.matrix().max_abs_diff(want.matrix()) < PURE_TOL);
        let x = compile(&encoding_pulse(Message::new(3).unwrap()), &sys());
        let want = Unitary4::on_a(&not_gate()).scale_phase(-FRAC_PI_2);
        assert!(x.matrix().max_abs_diff(want.matrix()) < PURE_TOL);
    }

    #[test]
    fn compile_basics() {
        assert_eq!(compile(&PulseSequence::new(), &sys()), Unitary4::identity());
        assert_eq!(
            compile(&not_pulse(Spin::B), &sys()),
            rf_unitary(Spin::B, Axis::X, PI)
        );
        // Later events multiply from the left.
        let seq = PulseSequence::new().rf(Spin::A, Axis::X, FRAC_PI_2).rf(Spin::A, Axis::Y, FRAC_PI_2);
        let want = rf_unitary(Spin::A, Axis::Y, FRAC_PI_2) * rf_unitary(Spin::A, Axis::X, FRAC_PI_2);
        assert!(compile(&seq, &sys()).matrix().max_abs_diff(want.matrix()) < PURE_TOL);
    }

    #[test]
    fn pulse_protocol_populations_match_ideal() {
        let s = sys();
        let table = GateSet::standard().table1().unwrap();
        for refocus in [false, true] {
            for v in BellVariant::ALL {
                for m in Message::ALL {
                    let prog = protocol_program(m, v, &s, ProgramOptions { refocus });
                    let out = PureState::from_bits(0, 0).apply(&compile(&prog, &s));
                    let k = table.cell(m, v).index();
                    assert!(out.probabilities()[k] > 1.0 - 1e-9, "{m} {v} {refocus}");
                }
            }
        }
    }

    #[test]
    fn alternating_phases() {
        let seq = PulseSequence::new()
            .rf(Spin::B, Axis::X, PI)
            .rf(Spin::A, Axis::X, PI)
            .rf(Spin::B, Axis::X, PI)
            .rf(Spin::B, Axis::Y, PI)
            .rf(Spin::B, Axis::X, PI)
            .with_alternating_pi_phases();
        let signs: Vec<_> = seq.events().iter().filter_map(|e| e.signed_angle()).collect();
        assert_eq!(signs, [PI, PI, -PI, PI, PI]);
    }

    #[test]
    fn spin_system_validation() {
        assert!(SpinSystem::new(500.13, 125.77, 215.0, 1.0, 0.3).is_ok());
        assert!(matches!(
            SpinSystem::new(500.13, 125.77, 0.0, 1.0, 0.3),
            Err(Error::InvalidParameter { name: "j_hz", .. })
        ));
        assert!(SpinSystem::new(-1.0, 125.77, 215.0, 1.0, 0.3).is_err());
        assert!(SpinSystem::new(500.13, 125.77, 215.0, f64::NAN, 0.3).is_err());
        let ratio = SpinSystem::default().polarization_ratio;
        assert!((ratio - 3.976).abs() < 1e-3);
    }
}
