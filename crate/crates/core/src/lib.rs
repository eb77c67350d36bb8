//! Discrete holonomies generated by sequences of incomplete projective
//! measurements on spin coherent states.
//!
//! A closed sequence of rank-two filtering measurements, each projecting onto
//! the pair `{|+j; n⟩, |-j; n⟩}` of coherent states along a direction `n`,
//! transports a qubit encoded in `{|j⟩, |-j⟩}` by the unitary part of the
//! product of frame overlap matrices. This crate computes those holonomies,
//! compiles single-qubit gates into measurement sequences, builds the
//! auxiliary-state two-qubit phase gate, simulates the filtering process
//! shot by shot, and checks how the bit-flip and Shor codes sit on top of
//! the scheme.
//!
//! Module map:
//!
//! - [`spin`]: half-integer spins, angular momentum matrices, rotations,
//!   coherent states and the symmetric (Dicke) embedding.
//! - [`overlap`]: closed-form overlap matrices, polar decomposition and a
//!   brute-force inner-product oracle.
//! - [`holonomy`]: measurement paths, holonomies, survival probabilities and
//!   dense-measurement (Zeno) sweeps.
//! - [`synthesis`]: phase relation, root solving and gate compilation.
//! - [`two_qubit`]: auxiliary-state overlaps, accumulated phase, entangling
//!   action and concurrence.
//! - [`sim`]: seeded Monte Carlo of the filtering sequence.
//! - [`qec`]: rotated bit-flip syndromes and Shor-code logical overlaps.
//! - [`cli`]: command implementations behind the `holonomy` binary.

pub mod angle;
pub mod cli;
pub mod error;
pub mod holonomy;
pub mod overlap;
pub mod qec;
pub mod sim;
pub mod spin;
pub mod synthesis;
pub mod two_qubit;

pub use error::{Error, Result};
pub use holonomy::{HolonomyResult, MeasurementPath};
pub use overlap::{OverlapMatrix, RsCoefficients};
pub use spin::{CMatrix, CVector, Direction, Mat2, SpinJ, StateVector, Vec2, C64};
