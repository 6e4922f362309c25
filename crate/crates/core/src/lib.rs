//! Simulation of two-spin quantum dense coding as run on an NMR spectrometer.
//!
//! The crate is layered bottom-up:
//!
//! * [`qcore`]: states, density matrices and unitaries on the 4-dimensional
//!   two-spin space (spin b is the left basis label, spin a the right).
//! * [`gates`]: the ideal gate set (NOT, Walsh-Hadamard, CNOT, encodings).
//! * [`protocol`]: Bell-pair preparation, encoding, decoding and readout, and
//!   the full start-state × encoding correspondence table.
//! * [`nmrsim`]: RF rotations, J-coupling evolution, pulse programs for every
//!   gate, thermal states and pseudo-pure preparation by temporal averaging.
//! * [`tomo`]: readout simulation and least-squares state reconstruction.
//! * [`noise`]: ensemble model for RF inhomogeneity, miscalibration,
//!   static-field offsets and transverse decay.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;

pub mod error;
pub mod experiment;
pub mod gates;
pub mod nmrsim;
pub mod noise;
pub mod protocol;
pub mod qcore;
pub mod tomo;

pub use error::{Error, Result};
pub use gates::{BellVariant, GateId};
pub use protocol::{DecodedOutput, Message, Table1};
pub use qcore::{Complex, DensityMatrix, PureState, Sign, Unitary, Unitary2, Unitary4};
