//! Dwell-time stability certificates for discrete-time switched linear
//! systems.
//!
//! The pipeline: [`certificate::certify`] screens a subsystem family, finds
//! a shared contraction power, measures commutator defects, and checks a
//! closed-form product bound at some decay rate. [`word`] carries the
//! algebraic identity behind that bound — any admissible product rewrites
//! into a contractive leading term plus counted commutator corrections —
//! and [`sim`] validates certificates against exhaustive word enumeration
//! and seeded random trajectories.

pub mod builtin;
pub mod certificate;
pub mod matrix;
pub mod sim;
pub mod word;

pub use certificate::{
    certify, Certificate, CertificateDetail, CertifyOptions, ExponentMode, LambdaMode,
    SubsystemFamily, Verdict,
};
pub use matrix::{NormValue, SquareMatrix};
pub use sim::{GuesBoundReport, McConfig, McSummary, SwitchingSignal, TrajectoryRecord};
pub use word::{BlockWord, Decomposition, Run};
