//! The dense-coding network: prepare a Bell pair, encode on spin a, decode
//! with `CN_ba` followed by `H_b`, and read the two spins out.

use core::fmt;

use crate::error::{Error, Result};
use crate::gates::{self, BellVariant};
use crate::qcore::{PureState, Sign, Unitary2, Unitary4, DIM};

/// One of the four messages, index 1..=4 selecting `I`, `σz`, `σx`, `iσy`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message(u8);

impl Message {
    pub const ALL: [Message; 4] = [Message(1), Message(2), Message(3), Message(4)];

    pub fn new(index: u8) -> Result<Self> {
        if (1..=4).contains(&index) {
            Ok(Message(index))
        } else {
            Err(Error::MessageOutOfRange(index))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Classical bit pair carried by this message: 1 ↔ 00, 2 ↔ 01, 3 ↔ 10, 4 ↔ 11.
    pub fn bits(self) -> (u8, u8) {
        let k = self.0 - 1;
        (k >> 1, k & 1)
    }

    pub fn from_bits(hi: u8, lo: u8) -> Self {
        Message(1 + 2 * (hi & 1) + (lo & 1))
    }

    pub fn encoding_unitary(self) -> Unitary2 {
        gates::encoding_unitary(self.0).expect("message index is validated at construction")
    }

    /// Name of the encoding operator.
    pub fn operator_name(self) -> &'static str {
        match self.0 {
            1 => "I",
            2 => "sigma_z",
            3 => "sigma_x",
            _ => "i*sigma_y",
        }
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A signed computational basis vector `phase·|y x⟩` read from the decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DecodedOutput {
    /// Spin b.
    pub y: u8,
    /// Spin a.
    pub x: u8,
    pub phase: Sign,
}

impl DecodedOutput {
    pub fn index(&self) -> usize {
        crate::qcore::basis_index(self.y, self.x)
    }

    pub fn bits(&self) -> (u8, u8) {
        (self.y, self.x)
    }

    pub fn state(&self) -> PureState {
        let mut s = PureState::from_bits(self.y, self.x);
        if self.phase == Sign::Minus {
            s = s.scale_phase(core::f64::consts::PI);
        }
        s
    }
}

impl fmt::Display for DecodedOutput {
    /// Renders as `|10>` or `-|01>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.phase == Sign::Minus { "-" } else { "" };
        write!(f, "{sign}|{}{}>", self.y, self.x)
    }
}

/// The ideal gates the network is built from. Kept as data so checks can
/// be exercised against a deliberately broken gate set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateSet {
    pub not: Unitary2,
    pub hadamard: Unitary2,
    pub cnot: Unitary4,
    pub encodings: [Unitary2; 4],
}

impl Default for GateSet {
    fn default() -> Self {
        GateSet {
            not: gates::not_gate(),
            hadamard: gates::hadamard(),
            cnot: gates::cnot_ba(),
            encodings: Message::ALL.map(Message::encoding_unitary),
        }
    }
}

impl GateSet {
    pub fn standard() -> Self {
        Self::default()
    }

    fn prep(&self, v: BellVariant) -> Unitary4 {
        let (fb, fa) = v.prep_flips();
        let pick = |f: bool| if f { self.not } else { Unitary2::identity() };
        crate::qcore::tensor(&pick(fb), &pick(fa))
    }

    pub fn prepare_bell(&self, v: BellVariant) -> PureState {
        PureState::from_bits(0, 0)
            .apply(&self.prep(v))
            .apply(&Unitary4::on_b(&self.hadamard))
            .apply(&self.cnot)
    }

    pub fn encode(&self, s: &PureState, m: Message) -> PureState {
        s.apply(&Unitary4::on_a(&self.encodings[usize::from(m.index() - 1)]))
    }

    pub fn decode(&self, s: &PureState) -> PureState {
        s.apply(&self.cnot).apply(&Unitary4::on_b(&self.hadamard))
    }

    /// Whole network as one unitary, from `|00⟩` to the decoded register.
    pub fn network(&self, m: Message, v: BellVariant) -> Unitary4 {
        Unitary4::on_b(&self.hadamard)
            * self.cnot
            * Unitary4::on_a(&self.encodings[usize::from(m.index() - 1)])
            * self.cnot
            * Unitary4::on_b(&self.hadamard)
            * self.prep(v)
    }

    pub fn run(&self, m: Message, v: BellVariant) -> Result<DecodedOutput> {
        readout(&self.decode(&self.encode(&self.prepare_bell(v), m)))
    }

    pub fn table1(&self) -> Result<Table1> {
        let mut cells = [[DecodedOutput { y: 0, x: 0, phase: Sign::Plus }; 4]; 4];
        for (row, m) in Message::ALL.into_iter().enumerate() {
            for v in BellVariant::ALL {
                cells[row][v.column()] = self.run(m, v)?;
            }
        }
        Ok(Table1 { cells })
    }
}

/// Run the preparation circuit for `v` on `|00⟩`.
pub fn prepare_bell(v: BellVariant) -> PureState {
    GateSet::standard().prepare_bell(v)
}

/// Apply the encoding for `m` to spin a.
pub fn encode(s: &PureState, m: Message) -> PureState {
    GateSet::standard().encode(s, m)
}

/// `CN_ba`, then `H_b`.
pub fn decode(s: &PureState) -> PureState {
    GateSet::standard().decode(s)
}

const READOUT_TOL: f64 = 1e-9;

/// Read a decoded register that must be a signed computational basis vector.
pub fn readout(s: &PureState) -> Result<DecodedOutput> {
    let p = s.probabilities();
    let (k, &pmax) = p
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("four amplitudes");
    if pmax < 1.0 - READOUT_TOL {
        return Err(Error::NotBasisState { max_probability: pmax });
    }
    let amp = s.amplitudes()[k];
    if amp.im.abs() > READOUT_TOL {
        return Err(Error::NonRealPhase { re: amp.re, im: amp.im });
    }
    let phase = if amp.re >= 0.0 { Sign::Plus } else { Sign::Minus };
    Ok(DecodedOutput { y: (k >> 1) as u8, x: (k & 1) as u8, phase })
}

/// Most populated basis state as `(y, x)`; used where global phases make the
/// sign meaningless (pulse-level runs).
pub fn readout_populations(p: &[f64; DIM]) -> (u8, u8, f64) {
    let (k, &pmax) = p
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("four populations");
    ((k >> 1) as u8, (k & 1) as u8, pmax)
}

/// Readout bits Alice sees for each message, given the shared pair `v`.
pub fn decoding_key(v: BellVariant) -> Result<[(u8, u8); 4]> {
    let gates = GateSet::standard();
    let mut key = [(0, 0); 4];
    for (slot, m) in key.iter_mut().zip(Message::ALL) {
        *slot = gates.run(m, v)?.bits();
    }
    Ok(key)
}

/// Recover the message from readout bits. The sign is ignored.
pub fn message_for_output(v: BellVariant, bits: (u8, u8)) -> Result<Option<Message>> {
    Ok(decoding_key(v)?
        .iter()
        .position(|&k| k == bits)
        .map(|i| Message::ALL[i]))
}

/// Send `m` over a pair prepared as `v` and decode it again.
pub fn transmit(m: Message, v: BellVariant) -> Result<Message> {
    let out = GateSet::standard().run(m, v)?;
    message_for_output(v, out.bits())?.ok_or(Error::UnknownOutput { y: out.y, x: out.x })
}

/// Start state × encoding → decoded output; rows are messages 1..=4,
/// columns follow [`BellVariant::ALL`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Table1 {
    pub cells: [[DecodedOutput; 4]; 4],
}

impl Table1 {
    pub fn cell(&self, m: Message, v: BellVariant) -> DecodedOutput {
        self.cells[usize::from(m.index() - 1)][v.column()]
    }

    /// `(y, x)` bits of every cell in column `v`, in message order.
    pub fn column_bits(&self, v: BellVariant) -> [(u8, u8); 4] {
        core::array::from_fn(|r| self.cells[r][v.column()].bits())
    }
}

/// Evaluate the network for all 16 (message, variant) pairs.
pub fn table1() -> Result<Table1> {
    GateSet::standard().table1()
}
