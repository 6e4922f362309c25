//! Ideal gates of the dense-coding network.

use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::protocol::Message;
use crate::qcore::{pauli, tensor, Mat2, Mat4, Unitary2, Unitary4};

/// NOT gate, `σx`.
pub fn not_gate() -> Unitary2 {
    Unitary2::from_matrix_unchecked(pauli(1))
}

/// Walsh-Hadamard gate `(1/√2)[[1, 1], [1, −1]]`.
pub fn hadamard() -> Unitary2 {
    let h = FRAC_1_SQRT_2;
    Unitary2::from_matrix_unchecked(Mat2::from_real([[h, h], [h, -h]]))
}

pub fn pauli_z() -> Unitary2 {
    Unitary2::from_matrix_unchecked(pauli(3))
}

/// `iσy = [[0, 1], [−1, 0]]`, so `iσy|0⟩ = −|1⟩` and `iσy|1⟩ = |0⟩`.
pub fn i_pauli_y() -> Unitary2 {
    Unitary2::from_matrix_unchecked(Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]]))
}

/// CNOT with spin b as control and spin a as target.
pub fn cnot_ba() -> Unitary4 {
    Unitary4::from_matrix_unchecked(Mat4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]))
}

/// CNOT with spin a as control and spin b as target.
pub fn cnot_ab() -> Unitary4 {
    Unitary4::from_matrix_unchecked(Mat4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]))
}

/// Encoding transformation for message index 1..=4: `I`, `σz`, `σx`, `iσy`.
pub fn encoding_unitary(index: u8) -> Result<Unitary2> {
    match index {
        1 => Ok(Unitary2::identity()),
        2 => Ok(pauli_z()),
        3 => Ok(not_gate()),
        4 => Ok(i_pauli_y()),
        other => Err(Error::MessageOutOfRange(other)),
    }
}

/// The four Bell states, each reached from `|00⟩` by a different substitute
/// for the leading `N_b` of the preparation circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellVariant {
    /// `(|00⟩ − |11⟩)/√2`, prepared with `N_b`.
    MinusPhi,
    /// `(|00⟩ + |11⟩)/√2`, prepared with `I`.
    PlusPhi,
    /// `(|01⟩ − |10⟩)/√2`, prepared with `N_b N_a`.
    MinusPsi,
    /// `(|01⟩ + |10⟩)/√2`, prepared with `N_a`.
    PlusPsi,
}

impl BellVariant {
    /// Column order of the correspondence table.
    pub const ALL: [BellVariant; 4] = [
        BellVariant::MinusPhi,
        BellVariant::PlusPhi,
        BellVariant::MinusPsi,
        BellVariant::PlusPsi,
    ];

    /// Which spins get a NOT before the Hadamard: `(flip_b, flip_a)`.
    pub fn prep_flips(self) -> (bool, bool) {
        match self {
            BellVariant::MinusPhi => (true, false),
            BellVariant::PlusPhi => (false, false),
            BellVariant::MinusPsi => (true, true),
            BellVariant::PlusPsi => (false, true),
        }
    }

    /// The substitute for `N_b` as a two-spin unitary.
    pub fn prep_unitary(self) -> Unitary4 {
        let (fb, fa) = self.prep_flips();
        let pick = |f: bool| if f { not_gate() } else { Unitary2::identity() };
        tensor(&pick(fb), &pick(fa))
    }

    pub fn column(self) -> usize {
        match self {
            BellVariant::MinusPhi => 0,
            BellVariant::PlusPhi => 1,
            BellVariant::MinusPsi => 2,
            BellVariant::PlusPsi => 3,
        }
    }

    /// Command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            BellVariant::MinusPhi => "minus-phi",
            BellVariant::PlusPhi => "plus-phi",
            BellVariant::MinusPsi => "minus-psi",
            BellVariant::PlusPsi => "plus-psi",
        }
    }

    pub fn ket(self) -> &'static str {
        match self {
            BellVariant::MinusPhi => "(|00>-|11>)/sqrt2",
            BellVariant::PlusPhi => "(|00>+|11>)/sqrt2",
            BellVariant::MinusPsi => "(|01>-|10>)/sqrt2",
            BellVariant::PlusPsi => "(|01>+|10>)/sqrt2",
        }
    }
}

impl fmt::Display for BellVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unknown Bell-variant name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseVariantError;

impl fmt::Display for ParseVariantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of minus-phi, plus-phi, minus-psi, plus-psi")
    }
}

impl core::error::Error for ParseVariantError {}

impl FromStr for BellVariant {
    type Err = ParseVariantError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        BellVariant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or(ParseVariantError)
    }
}

/// Gates appearing in the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateId {
    NotA,
    NotB,
    HadB,
    CnotBA,
    Encode(Message),
    BellVariantPrep(BellVariant),
}

impl GateId {
    /// The gate lifted to the two-spin space.
    pub fn unitary(self) -> Unitary4 {
        match self {
            GateId::NotA => Unitary4::on_a(&not_gate()),
            GateId::NotB => Unitary4::on_b(&not_gate()),
            GateId::HadB => Unitary4::on_b(&hadamard()),
            GateId::CnotBA => cnot_ba(),
            GateId::Encode(m) => Unitary4::on_a(&m.encoding_unitary()),
            GateId::BellVariantPrep(v) => v.prep_unitary(),
        }
    }
}
