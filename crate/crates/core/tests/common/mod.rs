#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nqi_core::{
    Amplitude, AtomSuperposition, FockState, JointState, LinearModeMap, ModeId, ModeLabel,
    OccupationState, PhotonState, NUM_MODES,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Amplitude {
    Amplitude::new(re, im)
}

pub const H: f64 = FRAC_1_SQRT_2;

/// Every occupation with at most two photons: vacuum, 8 singles, 36 pairs.
pub fn basis_up_to_two() -> Vec<OccupationState> {
    let mut basis = vec![OccupationState::vacuum()];
    for i in 0..NUM_MODES {
        let mut counts = [0u8; NUM_MODES];
        counts[i] = 1;
        basis.push(OccupationState::from_counts(counts));
    }
    for i in 0..NUM_MODES {
        for j in i..NUM_MODES {
            let mut counts = [0u8; NUM_MODES];
            counts[i] += 1;
            counts[j] += 1;
            basis.push(OccupationState::from_counts(counts));
        }
    }
    basis
}

fn permanent(matrix: &[Vec<Amplitude>]) -> Amplitude {
    let n = matrix.len();
    if n == 0 {
        return c(1.0, 0.0);
    }
    // Laplace expansion along the first row; n <= 2 here.
    (0..n)
        .map(|col| {
            let minor: Vec<Vec<Amplitude>> = matrix[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != col)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            matrix[0][col] * permanent(&minor)
        })
        .sum()
}

fn factorials(occ: &OccupationState) -> f64 {
    occ.counts()
        .iter()
        .map(|&n| (1..=u32::from(n)).map(f64::from).product::<f64>())
        .product()
}

/// Dense Fock-space matrix of a passive linear map on the <=2-photon space,
/// built from permanents of the single-particle matrix:
/// `<m|U|n> = perm(U[m, n]) / sqrt(prod m! prod n!)`.
pub fn dense_fock_matrix(map: &LinearModeMap) -> Vec<Vec<Amplitude>> {
    let basis = basis_up_to_two();
    let single = |dst: usize, src: usize| map.coefficient(src, dst);
    let mut out = vec![vec![c(0.0, 0.0); basis.len()]; basis.len()];
    for (row, m) in basis.iter().enumerate() {
        let rows: Vec<usize> = m.photon_slots().collect();
        for (col, n) in basis.iter().enumerate() {
            let cols: Vec<usize> = n.photon_slots().collect();
            if rows.len() != cols.len() {
                continue;
            }
            let sub: Vec<Vec<Amplitude>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&s| single(r, s)).collect())
                .collect();
            out[row][col] = permanent(&sub) / (factorials(m) * factorials(n)).sqrt();
        }
    }
    out
}

pub fn to_dense<M: ModeLabel>(state: &FockState<M>) -> Vec<Amplitude> {
    basis_up_to_two()
        .iter()
        .map(|occ| state.amplitude(occ))
        .collect()
}

pub fn mat_vec(matrix: &[Vec<Amplitude>], v: &[Amplitude]) -> Vec<Amplitude> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn max_dense_deviation(a: &[Amplitude], b: &[Amplitude]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn random_amplitude(rng: &mut ChaCha8Rng) -> Amplitude {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random normalized state with support on the <=2-photon space.
pub fn random_state<M: ModeLabel>(rng: &mut ChaCha8Rng) -> FockState<M> {
    let basis = basis_up_to_two();
    let terms = rng.random_range(1..=6);
    let picked: Vec<(OccupationState, Amplitude)> = (0..terms)
        .map(|_| {
            (
                basis[rng.random_range(0..basis.len())],
                random_amplitude(rng),
            )
        })
        .collect();
    let state = FockState::<M>::from_terms(picked).unwrap();
    let norm = state.squared_norm().sqrt();
    if norm < 1e-6 {
        return FockState::vacuum();
    }
    state.scale(c(1.0 / norm, 0.0))
}

/// Random normalized state with exactly `photons` photons.
pub fn random_state_with_photons(rng: &mut ChaCha8Rng, photons: u32) -> PhotonState {
    let basis: Vec<_> = basis_up_to_two()
        .into_iter()
        .filter(|o| o.total() == photons)
        .collect();
    let terms = rng.random_range(1..=6);
    let picked: Vec<_> = (0..terms)
        .map(|_| {
            (
                basis[rng.random_range(0..basis.len())],
                random_amplitude(rng),
            )
        })
        .collect();
    let state = PhotonState::from_terms(picked).unwrap();
    let norm = state.squared_norm().sqrt();
    state.scale(c(1.0 / norm, 0.0))
}

pub fn random_atom(rng: &mut ChaCha8Rng) -> AtomSuperposition {
    let theta = rng.random_range(0.05..PI - 0.05);
    let phi = rng.random_range(0.0..2.0 * PI);
    AtomSuperposition::from_bloch(theta, phi)
        .scaled_phase(Amplitude::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
}

/// Random 2x2 unitary.
pub fn random_pair_unitary(rng: &mut ChaCha8Rng) -> [[Amplitude; 2]; 2] {
    let theta = rng.random_range(0.0..PI / 2.0);
    let (p1, p2, g) = (
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..2.0 * PI),
    );
    let a = Amplitude::from_polar(theta.cos(), p1);
    let b = Amplitude::from_polar(theta.sin(), p2);
    let phase = Amplitude::from_polar(1.0, g);
    [
        [phase * a, -phase * b.conj()],
        [phase * b, phase * a.conj()],
    ]
}

pub fn adjoint2(u: &[[Amplitude; 2]; 2]) -> [[Amplitude; 2]; 2] {
    [
        [u[0][0].conj(), u[1][0].conj()],
        [u[0][1].conj(), u[1][1].conj()],
    ]
}

/// Random normalized joint state, coherent sector only.
pub fn random_joint(rng: &mut ChaCha8Rng) -> JointState {
    let plus: PhotonState = random_state(rng);
    let minus: PhotonState = random_state(rng);
    let (wp, wm) = (rng.random_range(0.0..1.0f64), rng.random_range(0.0..1.0f64));
    let n = (wp * wp + wm * wm).sqrt().max(1e-3);
    JointState::from_components(
        plus.scale(c(wp / n, 0.0)),
        minus.scale(c(wm / n, 0.0)),
        Vec::new(),
    )
}

pub fn random_mode(rng: &mut ChaCha8Rng) -> ModeId {
    ModeId::ALL[rng.random_range(0..NUM_MODES)]
}

/// Non-vanishing (alpha, beta) points used for the headline checks.
pub fn nonvanishing_grid() -> Vec<AtomSuperposition> {
    vec![
        AtomSuperposition::equal_weight(),
        AtomSuperposition::new(c(0.6, 0.0), c(0.8, 0.0)).unwrap(),
        AtomSuperposition::new(c(0.8, 0.0), c(0.0, 0.6)).unwrap(),
        AtomSuperposition::new(c(0.0, 0.3), c(0.91f64.sqrt(), 0.0)).unwrap(),
        AtomSuperposition::from_bloch(1.1, 2.3),
    ]
}

/// Grid including the degenerate basis state alpha = 1.
pub fn full_grid() -> Vec<AtomSuperposition> {
    let mut grid = vec![AtomSuperposition::new(c(1.0, 0.0), c(0.0, 0.0)).unwrap()];
    grid.extend(nonvanishing_grid());
    grid
}

/// One coherent term: photons, scalar coefficient, and whether the atom factor
/// is `(alpha, beta)` (`false`) or `(alpha, -beta)` (`true`). `Only` restricts
/// the atom factor to one level.
#[derive(Clone, Copy)]
pub enum AtomFactor {
    Same,
    Flipped,
    OnlyPlus,
    OnlyMinus,
}

pub fn expected_joint<M: ModeLabel>(
    atom: &AtomSuperposition,
    terms: &[(&[M], Amplitude, AtomFactor)],
) -> JointState<M> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (modes, coeff, factor) in terms {
        let occ = OccupationState::of_modes(modes);
        let (p, m) = match factor {
            AtomFactor::Same => (atom.alpha(), atom.beta()),
            AtomFactor::Flipped => (atom.alpha(), -atom.beta()),
            AtomFactor::OnlyPlus => (atom.alpha(), c(0.0, 0.0)),
            AtomFactor::OnlyMinus => (c(0.0, 0.0), atom.beta()),
        };
        plus.push((occ, coeff * p));
        minus.push((occ, coeff * m));
    }
    JointState::from_components(
        FockState::from_terms(plus).unwrap(),
        FockState::from_terms(minus).unwrap(),
        Vec::new(),
    )
}
