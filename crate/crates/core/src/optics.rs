//! The interferometer's optical elements: the direction-dependent 50-50 beam
//! splitter and the circular/linear polarization change of basis.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::fock::{
    slot_index, Amplitude, Direction, LinearModeId, LinearModeMap, LinearPhotonState,
    LinearPolarization, ModeId, Path, PhotonState, Polarization,
};

/// Sign of the `i` picked up on reflection, per propagation direction.
///
/// [`STANDARD`](Self::STANDARD): right-movers reflect with `+i`, left-movers
/// with `-i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BeamSplitterConvention {
    pub reflection_phase_sign_right: i8,
    pub reflection_phase_sign_left: i8,
}

impl BeamSplitterConvention {
    pub const STANDARD: Self = Self {
        reflection_phase_sign_right: 1,
        reflection_phase_sign_left: -1,
    };

    pub fn reflection_phase(&self, direction: Direction) -> Amplitude {
        let sign = match direction {
            Direction::Right => self.reflection_phase_sign_right,
            Direction::Left => self.reflection_phase_sign_left,
        };
        Amplitude::new(0.0, f64::from(sign))
    }

    /// 2x2 block on the (lower, upper) mode pair of one direction and
    /// polarization: `a_l -> (a_u + s i a_l)/sqrt2`, `a_u -> (a_l + s i a_u)/sqrt2`.
    pub fn pair_matrix(&self, direction: Direction) -> [[Amplitude; 2]; 2] {
        let reflect = self.reflection_phase(direction) * FRAC_1_SQRT_2;
        let transmit = Amplitude::new(FRAC_1_SQRT_2, 0.0);
        [[reflect, transmit], [transmit, reflect]]
    }

    /// The splitter acting on all four (direction, polarization) mode pairs.
    /// Works for either polarization basis since it never touches polarization.
    pub fn mode_map(&self) -> LinearModeMap {
        let mut map = LinearModeMap::identity();
        for direction in Direction::ALL {
            let u = self.pair_matrix(direction);
            for pol in 0..2 {
                let lower = slot_index(direction, Path::Lower, pol);
                let upper = slot_index(direction, Path::Upper, pol);
                map.set_pair(lower, upper, &u);
            }
        }
        map
    }
}

impl Default for BeamSplitterConvention {
    fn default() -> Self {
        Self::STANDARD
    }
}

pub fn beam_splitter_map() -> LinearModeMap {
    BeamSplitterConvention::STANDARD.mode_map()
}

/// One pass through a 50-50 beam splitter for every photon in `state`.
pub fn beam_splitter(state: &PhotonState) -> Result<PhotonState> {
    state.transform(&beam_splitter_map())
}

/// Circular-to-linear change of basis restricted to the ports selected by
/// `rotate_port`; other ports keep their circular slots.
///
/// In slot terms `a_+ -> -(a_x + i a_y)/sqrt2` and `a_- -> (a_x - i a_y)/sqrt2`,
/// where slot 0 of a port is `+`/`x` and slot 1 is `-`/`y`.
pub fn circular_to_linear_map(
    mut rotate_port: impl FnMut(Direction, Path) -> bool,
) -> LinearModeMap {
    let h = FRAC_1_SQRT_2;
    let to_linear = [
        // columns: image of a_+ is (-h, -i h), image of a_- is (h, -i h)
        [Amplitude::new(-h, 0.0), Amplitude::new(h, 0.0)],
        [Amplitude::new(0.0, -h), Amplitude::new(0.0, -h)],
    ];
    let mut map = LinearModeMap::identity();
    for direction in Direction::ALL {
        for path in Path::ALL {
            if rotate_port(direction, path) {
                map.set_pair(
                    slot_index(direction, path, 0),
                    slot_index(direction, path, 1),
                    &to_linear,
                );
            }
        }
    }
    map
}

/// `a_x = (a_- - a_+)/sqrt2`, `a_y = i (a_- + a_+)/sqrt2` on every port.
pub fn linear_to_circular_map() -> LinearModeMap {
    circular_to_linear_map(|_, _| true).adjoint()
}

pub fn rotate_to_linear(state: &PhotonState) -> Result<LinearPhotonState> {
    state.transform(&circular_to_linear_map(|_, _| true))
}

pub fn rotate_to_circular(state: &LinearPhotonState) -> Result<PhotonState> {
    state.transform(&linear_to_circular_map())
}

/// Circular-basis amplitudes of a single linearly polarized photon.
pub fn linear_photon(
    direction: Direction,
    path: Path,
    polarization: LinearPolarization,
) -> Result<PhotonState> {
    let mode = LinearModeId::new(direction, path, polarization);
    rotate_to_circular(&LinearPhotonState::single_photon(mode))
}

/// Mode pairs the splitter mixes, as (lower, upper).
pub fn splitter_pairs() -> impl Iterator<Item = (ModeId, ModeId)> {
    Direction::ALL.into_iter().flat_map(|direction| {
        Polarization::ALL.into_iter().map(move |pol| {
            (
                ModeId::new(direction, Path::Lower, pol),
                ModeId::new(direction, Path::Upper, pol),
            )
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ModeLabel, OccupationState};

    fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    fn mode(direction: Direction, path: Path, pol: Polarization) -> ModeId {
        ModeId::new(direction, path, pol)
    }

    fn one(m: ModeId) -> OccupationState {
        OccupationState::of_modes(&[m])
    }

    const H: f64 = FRAC_1_SQRT_2;

    #[test]
    fn right_mover_lower_input() {
        let rlp = mode(Direction::Right, Path::Lower, Polarization::Plus);
        let rup = mode(Direction::Right, Path::Upper, Polarization::Plus);
        let out = beam_splitter(&PhotonState::single_photon(rlp)).unwrap();
        assert_eq!(out.len(), 2);
        assert!((out.amplitude(&one(rup)) - c(H, 0.0)).norm() < 1e-15);
        assert!((out.amplitude(&one(rlp)) - c(0.0, H)).norm() < 1e-15);
    }

    #[test]
    fn left_mover_upper_input() {
        let lum = mode(Direction::Left, Path::Upper, Polarization::Minus);
        let llm = mode(Direction::Left, Path::Lower, Polarization::Minus);
        let out = beam_splitter(&PhotonState::single_photon(lum)).unwrap();
        assert!((out.amplitude(&one(llm)) - c(H, 0.0)).norm() < 1e-15);
        assert!((out.amplitude(&one(lum)) - c(0.0, -H)).norm() < 1e-15);
    }

    #[test]
    fn balanced_interferometer_routes_lower_to_upper() {
        let rlp = mode(Direction::Right, Path::Lower, Polarization::Plus);
        let rup = mode(Direction::Right, Path::Upper, Polarization::Plus);
        let twice =
            beam_splitter(&beam_splitter(&PhotonState::single_photon(rlp)).unwrap()).unwrap();
        assert_eq!(twice.len(), 1);
        assert!((twice.amplitude(&one(rup)) - c(0.0, 1.0)).norm() < 1e-15);

        for m in ModeId::ALL.into_iter().filter(|m| m.path == Path::Lower) {
            let out =
                beam_splitter(&beam_splitter(&PhotonState::single_photon(m)).unwrap()).unwrap();
            let upper = ModeId::new(m.direction, Path::Upper, m.polarization);
            assert!(
                (out.amplitude(&one(upper)).norm_sqr() - 1.0).abs() < 1e-14,
                "{m}"
            );
        }
    }

    #[test]
    fn splitter_map_is_unitary() {
        assert!(beam_splitter_map().unitarity_deviation() < 1e-15);
        assert!(circular_to_linear_map(|_, _| true).unitarity_deviation() < 1e-15);
        assert!(circular_to_linear_map(|d, _| d == Direction::Left).unitarity_deviation() < 1e-15);
    }

    #[test]
    fn linear_photons_in_circular_basis() {
        let rup = mode(Direction::Right, Path::Upper, Polarization::Plus);
        let rum = mode(Direction::Right, Path::Upper, Polarization::Minus);
        let x = linear_photon(Direction::Right, Path::Upper, LinearPolarization::X).unwrap();
        assert!((x.amplitude(&one(rum)) - c(H, 0.0)).norm() < 1e-15);
        assert!((x.amplitude(&one(rup)) - c(-H, 0.0)).norm() < 1e-15);
        let y = linear_photon(Direction::Right, Path::Upper, LinearPolarization::Y).unwrap();
        assert!((y.amplitude(&one(rum)) - c(0.0, H)).norm() < 1e-15);
        assert!((y.amplitude(&one(rup)) - c(0.0, H)).norm() < 1e-15);
        assert_eq!(
            rotate_to_circular(&LinearPhotonState::vacuum()).unwrap(),
            PhotonState::vacuum()
        );
    }

    #[test]
    fn circular_photon_splits_evenly() {
        let rup = mode(Direction::Right, Path::Upper, Polarization::Plus);
        let lin = rotate_to_linear(&PhotonState::single_photon(rup)).unwrap();
        for pol in [LinearPolarization::X, LinearPolarization::Y] {
            let m = LinearModeId::new(Direction::Right, Path::Upper, pol);
            assert!(
                (lin.amplitude(&OccupationState::of_modes(&[m])).norm_sqr() - 0.5).abs() < 1e-15
            );
        }
    }

    #[test]
    fn linear_photon_round_trip() {
        let x = LinearPhotonState::single_photon(LinearModeId::new(
            Direction::Right,
            Path::Upper,
            LinearPolarization::X,
        ));
        let back = rotate_to_linear(&rotate_to_circular(&x).unwrap()).unwrap();
        assert!(back.max_deviation(&x) < 1e-15);
    }

    #[test]
    fn symmetric_upper_pair_rotates_to_same_polarization_pairs() {
        use Direction::*;
        use LinearPolarization::*;
        use Polarization::*;
        let a = PhotonState::vacuum()
            .create_photon(mode(Right, Path::Upper, Plus))
            .unwrap()
            .create_photon(mode(Left, Path::Upper, Minus))
            .unwrap();
        let b = PhotonState::vacuum()
            .create_photon(mode(Right, Path::Upper, Minus))
            .unwrap()
            .create_photon(mode(Left, Path::Upper, Plus))
            .unwrap();
        let lin = rotate_to_linear(&(&a + &b)).unwrap();
        let pair = |p| {
            OccupationState::of_modes(&[
                LinearModeId::new(Right, Path::Upper, p),
                LinearModeId::new(Left, Path::Upper, p),
            ])
        };
        let expected =
            LinearPhotonState::from_terms([(pair(X), c(-1.0, 0.0)), (pair(Y), c(-1.0, 0.0))])
                .unwrap();
        assert!(lin.max_deviation(&expected) < 1e-14, "{lin}");
    }

    #[test]
    fn splitter_pairs_cover_all_modes() {
        let mut seen: Vec<ModeId> = splitter_pairs().flat_map(|(l, u)| [l, u]).collect();
        seen.sort();
        assert_eq!(seen, ModeId::ALL.to_vec());
    }
}
