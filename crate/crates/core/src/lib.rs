//! Exact simulation of nondistortion quantum interrogation: counter-propagating
//! probe photons in a Mach-Zehnder interferometer whose lower arm may hold a
//! polarization-selective absorbing atom.
//!
//! The pipeline is [`JointState::tensor`] → beam splitter →
//! [`JointState::interact_atom`] → beam splitter →
//! [`measurement::enumerate_outcomes`]; [`protocol`] wires it together for the
//! preset probe schemes.

pub mod atom;
pub mod error;
pub mod fock;
pub mod measurement;
pub mod optics;
pub mod protocol;

pub use atom::{AtomLevel, AtomSuperposition, JointState, LinearJointState, ScatteredBranch};
pub use error::{NqiError, Result};
pub use fock::{
    Amplitude, Direction, FockState, LinearModeId, LinearModeMap, LinearPhotonState,
    LinearPolarization, ModeId, ModeLabel, OccupationState, Path, PhotonState, Polarization,
    AMPLITUDE_TOLERANCE, DEFAULT_MAX_OCCUPANCY, NUM_MODES, PURGE_THRESHOLD,
};
pub use measurement::{
    category_totals, classify, classify_outcomes, enumerate_outcomes, fidelity, Category, Click,
    DetectionPattern, DetectorConfig, Outcome, OutcomeRecord, PolarizationBasis, PolarizationLabel,
    PostAtom,
};
pub use protocol::{
    compare_nqi_success, evolve, monte_carlo, run_repeated, run_single_shot, ExperimentConfig,
    MonteCarloReport, NqiComparison, RoundReport, RoundSummary, Scheme,
};
