//! Inputs shared by the benchmarks.

pub use nqi_core;

use nqi_core::{Amplitude, ModeId, ModeLabel, PhotonState};

/// Equal superposition over every two-photon occupation of the 8 modes.
pub fn two_photon_spread() -> PhotonState {
    let mut state = PhotonState::empty();
    for (i, &a) in ModeId::ALL.iter().enumerate() {
        for &b in &ModeId::ALL[i..] {
            let pair = PhotonState::vacuum()
                .create_photon(a)
                .and_then(|s| s.create_photon(b))
                .expect("two photons fit");
            state = &state + &pair;
        }
    }
    let norm = state.squared_norm().sqrt();
    state.scale(Amplitude::new(1.0 / norm, 0.0))
}
