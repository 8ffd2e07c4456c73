use thiserror::Error;

pub type Result<T, E = NqiError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NqiError {
    /// A mode would hold more photons than the state allows.
    #[error("occupation of mode slot {slot} would reach {count}, above the cap of {max}")]
    Capacity { slot: usize, count: u32, max: u8 },

    #[error("mode-pair transform needs two distinct modes, got slot {slot} twice")]
    SameMode { slot: usize },

    #[error("matrix is not unitary (max |U'U - I| entry = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("{what} is not normalized (squared norm {norm_sqr})")]
    Unnormalized { what: &'static str, norm_sqr: f64 },

    #[error("outcome `{pattern}` cannot be classified: {reason}")]
    Unclassifiable { pattern: String, reason: String },

    #[error("repeatable outcome `{pattern}` changed the atom (fidelity {fidelity})")]
    PerturbedRepeat { pattern: String, fidelity: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
