//! Symbolic verification engine for the local geometry of a relative
//! Hilbert scheme over a one-parameter smoothing of a plane node.
//!
//! The engine builds the model rings exactly (arbitrary-precision rational
//! coefficients, canonical monomial forms), transcribes every claimed
//! identity, and checks each one by direct computation, emitting structured
//! records: verified, corrected (the computed value disagrees with a printed
//! closed form, both are reported), failed, or skipped.

pub mod charts;
pub mod elim;
pub mod fibres;
pub mod groebner;
pub mod report;
pub mod ring;
pub mod scroll;
pub mod symfun;
pub mod vdm;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
