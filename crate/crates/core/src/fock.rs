//! Sparse few-photon Fock states over the eight optical modes of the
//! interferometer.
//!
//! A mode is labelled by propagation direction, arm, and polarization. The
//! same eight-slot layout is shared by the circular (`+`/`-`) and linear
//! (`x`/`y`) polarization bases; which one a state lives in is carried in its
//! type through the [`ModeLabel`] parameter.
//!
//! States are stored in the *normalized* occupation basis: the key `n` stands
//! for `prod_i (a_i^dag)^{n_i} / sqrt(n_i!) |0>`, so the squared norm of a state
//! is the plain sum of `|amplitude|^2` over its terms.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::error::{NqiError, Result};

pub type Amplitude = Complex64;

pub const NUM_MODES: usize = 8;

/// Equality tolerance for amplitudes and probabilities.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-10;

/// Amplitudes with smaller magnitude are dropped from sparse storage.
pub const PURGE_THRESHOLD: f64 = 1e-14;

/// Default per-mode photon cap. Probes carry at most two photons.
pub const DEFAULT_MAX_OCCUPANCY: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    Upper,
    Lower,
}

/// Circular polarization; the basis the atom couples to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinearPolarization {
    X,
    Y,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::Right, Direction::Left];

    fn slot(self) -> usize {
        match self {
            Direction::Right => 0,
            Direction::Left => 1,
        }
    }
}

impl Path {
    pub const ALL: [Path; 2] = [Path::Upper, Path::Lower];

    fn slot(self) -> usize {
        match self {
            Path::Upper => 0,
            Path::Lower => 1,
        }
    }
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::Plus, Polarization::Minus];
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Right => "R",
            Direction::Left => "L",
        })
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Path::Upper => "u",
            Path::Lower => "l",
        })
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::Plus => "+",
            Polarization::Minus => "-",
        })
    }
}

impl fmt::Display for LinearPolarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinearPolarization::X => "x",
            LinearPolarization::Y => "y",
        })
    }
}

/// Index of a (direction, path, polarization-slot) triple in canonical order.
pub(crate) fn slot_index(direction: Direction, path: Path, polarization_slot: usize) -> usize {
    direction.slot() * 4 + path.slot() * 2 + polarization_slot
}

/// A label for the eight mode slots in one polarization basis.
///
/// `ALL[i].index() == i`, and `ALL` is sorted: direction, then path, then
/// polarization.
pub trait ModeLabel: Copy + Eq + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const ALL: [Self; NUM_MODES];

    fn index(self) -> usize;
    fn direction(self) -> Direction;
    fn path(self) -> Path;

    fn from_index(index: usize) -> Self {
        Self::ALL[index]
    }
}

/// An optical mode in the circular polarization basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId {
    pub direction: Direction,
    pub path: Path,
    pub polarization: Polarization,
}

impl ModeId {
    pub const fn new(direction: Direction, path: Path, polarization: Polarization) -> Self {
        Self {
            direction,
            path,
            polarization,
        }
    }
}

impl ModeLabel for ModeId {
    const ALL: [Self; NUM_MODES] = {
        use Direction::*;
        use Path::*;
        use Polarization::*;
        [
            ModeId::new(Right, Upper, Plus),
            ModeId::new(Right, Upper, Minus),
            ModeId::new(Right, Lower, Plus),
            ModeId::new(Right, Lower, Minus),
            ModeId::new(Left, Upper, Plus),
            ModeId::new(Left, Upper, Minus),
            ModeId::new(Left, Lower, Plus),
            ModeId::new(Left, Lower, Minus),
        ]
    };

    fn index(self) -> usize {
        let pol = match self.polarization {
            Polarization::Plus => 0,
            Polarization::Minus => 1,
        };
        slot_index(self.direction, self.path, pol)
    }

    fn direction(self) -> Direction {
        self.direction
    }

    fn path(self) -> Path {
        self.path
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.direction, self.path, self.polarization)
    }
}

/// An optical mode in the linear polarization basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearModeId {
    pub direction: Direction,
    pub path: Path,
    pub polarization: LinearPolarization,
}

impl LinearModeId {
    pub const fn new(direction: Direction, path: Path, polarization: LinearPolarization) -> Self {
        Self {
            direction,
            path,
            polarization,
        }
    }
}

impl ModeLabel for LinearModeId {
    const ALL: [Self; NUM_MODES] = {
        use Direction::*;
        use LinearPolarization::*;
        use Path::*;
        [
            LinearModeId::new(Right, Upper, X),
            LinearModeId::new(Right, Upper, Y),
            LinearModeId::new(Right, Lower, X),
            LinearModeId::new(Right, Lower, Y),
            LinearModeId::new(Left, Upper, X),
            LinearModeId::new(Left, Upper, Y),
            LinearModeId::new(Left, Lower, X),
            LinearModeId::new(Left, Lower, Y),
        ]
    };

    fn index(self) -> usize {
        let pol = match self.polarization {
            LinearPolarization::X => 0,
            LinearPolarization::Y => 1,
        };
        slot_index(self.direction, self.path, pol)
    }

    fn direction(self) -> Direction {
        self.direction
    }

    fn path(self) -> Path {
        self.path
    }
}

impl fmt::Display for LinearModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.direction, self.path, self.polarization)
    }
}

/// Photon counts per mode slot, in canonical slot order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationState([u8; NUM_MODES]);

impl OccupationState {
    pub const fn vacuum() -> Self {
        Self([0; NUM_MODES])
    }

    pub const fn from_counts(counts: [u8; NUM_MODES]) -> Self {
        Self(counts)
    }

    pub fn of_modes<M: ModeLabel>(modes: &[M]) -> Self {
        let mut counts = [0u8; NUM_MODES];
        for mode in modes {
            counts[mode.index()] += 1;
        }
        Self(counts)
    }

    pub fn counts(&self) -> &[u8; NUM_MODES] {
        &self.0
    }

    pub fn get(&self, slot: usize) -> u8 {
        self.0[slot]
    }

    pub fn count<M: ModeLabel>(&self, mode: M) -> u8 {
        self.0[mode.index()]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&n| u32::from(n)).sum()
    }

    /// One slot index per photon, ascending, repeated by multiplicity.
    pub fn photon_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(slot, &n)| std::iter::repeat_n(slot, n as usize))
    }

    /// Copy with one photon removed from `slot`, or `None` if it is empty.
    pub fn without_photon(&self, slot: usize) -> Option<Self> {
        let mut counts = self.0;
        counts[slot] = counts[slot].checked_sub(1)?;
        Some(Self(counts))
    }

    /// `prod_i n_i!`
    fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n)).product()
    }

    pub fn describe<M: ModeLabel>(&self) -> String {
        if self.total() == 0 {
            return "vac".to_string();
        }
        self.photon_slots()
            .map(|slot| M::from_index(slot).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn factorial(n: u8) -> f64 {
    (1..=u32::from(n)).map(f64::from).product()
}

/// Image of every creation operator under a passive linear-optical map.
///
/// `a_src^dag -> sum_dst coefficient(src, dst) b_dst^dag`. Read as a matrix on
/// single-photon amplitudes, entry `(dst, src)` is `coefficient(src, dst)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModeMap {
    columns: [[Amplitude; NUM_MODES]; NUM_MODES],
}

impl LinearModeMap {
    pub fn identity() -> Self {
        Self::from_fn(|src, dst| {
            if src == dst {
                Amplitude::new(1.0, 0.0)
            } else {
                Amplitude::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(mut coefficient: impl FnMut(usize, usize) -> Amplitude) -> Self {
        let mut columns = [[Amplitude::new(0.0, 0.0); NUM_MODES]; NUM_MODES];
        for (src, column) in columns.iter_mut().enumerate() {
            for (dst, entry) in column.iter_mut().enumerate() {
                *entry = coefficient(src, dst);
            }
        }
        Self { columns }
    }

    pub fn coefficient(&self, src: usize, dst: usize) -> Amplitude {
        self.columns[src][dst]
    }

    /// Overwrite the action on slots `a` and `b` with the 2x2 block `u`:
    /// `a -> u00 a + u10 b`, `b -> u01 a + u11 b`.
    pub fn set_pair(&mut self, a: usize, b: usize, u: &[[Amplitude; 2]; 2]) {
        for dst in 0..NUM_MODES {
            self.columns[a][dst] = Amplitude::new(0.0, 0.0);
            self.columns[b][dst] = Amplitude::new(0.0, 0.0);
        }
        self.columns[a][a] = u[0][0];
        self.columns[a][b] = u[1][0];
        self.columns[b][a] = u[0][1];
        self.columns[b][b] = u[1][1];
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|src, dst| self.columns[dst][src].conj())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LinearModeMap) -> Self {
        Self::from_fn(|src, dst| {
            (0..NUM_MODES)
                .map(|k| self.columns[src][k] * next.columns[k][dst])
                .sum()
        })
    }

    /// Largest entry of `|U^dag U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for s1 in 0..NUM_MODES {
            for s2 in 0..NUM_MODES {
                let gram: Amplitude = (0..NUM_MODES)
                    .map(|d| self.columns[s1][d].conj() * self.columns[s2][d])
                    .sum();
                let expected = if s1 == s2 { 1.0 } else { 0.0 };
                worst = worst.max((gram - expected).norm());
            }
        }
        worst
    }
}

fn pair_unitarity_deviation(u: &[[Amplitude; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let gram = u[0][i].conj() * u[0][j] + u[1][i].conj() * u[1][j];
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram - expected).norm());
        }
    }
    worst
}

pub(crate) type Terms = BTreeMap<OccupationState, Amplitude>;

fn purge(terms: &mut Terms) {
    terms.retain(|_, amp| amp.norm() >= PURGE_THRESHOLD);
}

fn check_capacity(terms: &Terms, max_occupancy: u8) -> Result<()> {
    for occ in terms.keys() {
        if let Some((slot, &count)) = occ.0.iter().enumerate().find(|(_, &n)| n > max_occupancy) {
            return Err(NqiError::Capacity {
                slot,
                count: u32::from(count),
                max: max_occupancy,
            });
        }
    }
    Ok(())
}

/// Push every term through `map` and re-expand in the normalized occupation
/// basis of the target slots.
pub(crate) fn transform_terms(
    terms: &Terms,
    map: &LinearModeMap,
    max_occupancy: u8,
) -> Result<Terms> {
    let images: Vec<Vec<(usize, Amplitude)>> = (0..NUM_MODES)
        .map(|src| {
            (0..NUM_MODES)
                .map(|dst| (dst, map.coefficient(src, dst)))
                .filter(|(_, c)| *c != Amplitude::new(0.0, 0.0))
                .collect()
        })
        .collect();

    let mut out = Terms::new();
    for (occ, &amp) in terms {
        // Raw monomial coefficients: key m stands for prod (b^dag)^{m} |0>.
        let mut monomials: BTreeMap<[u16; NUM_MODES], Amplitude> = BTreeMap::new();
        monomials.insert([0; NUM_MODES], amp / occ.factorial_product().sqrt());
        for src in occ.photon_slots() {
            let mut next = BTreeMap::new();
            for (mono, coeff) in &monomials {
                for &(dst, k) in &images[src] {
                    let mut grown = *mono;
                    grown[dst] += 1;
                    *next.entry(grown).or_insert(Amplitude::new(0.0, 0.0)) += coeff * k;
                }
            }
            monomials = next;
        }
        for (mono, coeff) in monomials {
            let mut counts = [0u8; NUM_MODES];
            for (slot, &n) in mono.iter().enumerate() {
                counts[slot] = u8::try_from(n).map_err(|_| NqiError::Capacity {
                    slot,
                    count: u32::from(n),
                    max: max_occupancy,
                })?;
            }
            let target = OccupationState(counts);
            *out.entry(target).or_insert(Amplitude::new(0.0, 0.0)) +=
                coeff * target.factorial_product().sqrt();
        }
    }
    purge(&mut out);
    check_capacity(&out, max_occupancy)?;
    Ok(out)
}

/// A superposition of occupation states with complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState<M: ModeLabel = ModeId> {
    terms: Terms,
    max_occupancy: u8,
    label: PhantomData<M>,
}

/// Photonic state in the circular polarization basis.
pub type PhotonState = FockState<ModeId>;

/// Photonic state in the linear polarization basis.
pub type LinearPhotonState = FockState<LinearModeId>;

impl<M: ModeLabel> Default for FockState<M> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<M: ModeLabel> FockState<M> {
    /// The zero vector.
    pub fn empty() -> Self {
        Self {
            terms: Terms::new(),
            max_occupancy: DEFAULT_MAX_OCCUPANCY,
            label: PhantomData,
        }
    }

    pub fn vacuum() -> Self {
        let mut state = Self::empty();
        state
            .terms
            .insert(OccupationState::vacuum(), Amplitude::new(1.0, 0.0));
        state
    }

    pub fn single_photon(mode: M) -> Self {
        let mut state = Self::empty();
        state
            .terms
            .insert(OccupationState::of_modes(&[mode]), Amplitude::new(1.0, 0.0));
        state
    }

    /// Sums duplicate keys and drops negligible amplitudes.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (OccupationState, Amplitude)>,
    ) -> Result<Self> {
        let mut state = Self::empty();
        for (occ, amp) in terms {
            if !amp.is_finite() {
                return Err(NqiError::InvalidConfig(format!(
                    "non-finite amplitude {amp}"
                )));
            }
            *state.terms.entry(occ).or_insert(Amplitude::new(0.0, 0.0)) += amp;
        }
        purge(&mut state.terms);
        check_capacity(&state.terms, state.max_occupancy)?;
        Ok(state)
    }

    pub(crate) fn from_terms_unchecked(terms: Terms, max_occupancy: u8) -> Self {
        Self {
            terms,
            max_occupancy,
            label: PhantomData,
        }
    }

    pub fn with_max_occupancy(mut self, max_occupancy: u8) -> Result<Self> {
        check_capacity(&self.terms, max_occupancy)?;
        self.max_occupancy = max_occupancy;
        Ok(self)
    }

    pub fn max_occupancy(&self) -> u8 {
        self.max_occupancy
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationState, &Amplitude)> {
        self.terms.iter()
    }

    pub(crate) fn raw_terms(&self) -> &Terms {
        &self.terms
    }

    pub fn amplitude(&self, occ: &OccupationState) -> Amplitude {
        self.terms.get(occ).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total photon number if every term agrees on it.
    pub fn photon_number(&self) -> Option<u32> {
        let mut totals = self.terms.keys().map(OccupationState::total);
        let first = totals.next()?;
        totals.all(|n| n == first).then_some(first)
    }

    /// `a_mode^dag` applied to the state, with the `sqrt(n + 1)` factor.
    pub fn create_photon(&self, mode: M) -> Result<Self> {
        let slot = mode.index();
        let mut terms = Terms::new();
        for (occ, &amp) in &self.terms {
            let n = occ.get(slot);
            if n >= self.max_occupancy {
                return Err(NqiError::Capacity {
                    slot,
                    count: u32::from(n) + 1,
                    max: self.max_occupancy,
                });
            }
            let mut counts = occ.0;
            counts[slot] = n + 1;
            terms.insert(OccupationState(counts), amp * f64::from(n + 1).sqrt());
        }
        Ok(Self::from_terms_unchecked(terms, self.max_occupancy))
    }

    pub fn scale(&self, factor: Amplitude) -> Self {
        let mut terms: Terms = self
            .terms
            .iter()
            .map(|(occ, &amp)| (*occ, amp * factor))
            .collect();
        purge(&mut terms);
        Self::from_terms_unchecked(terms, self.max_occupancy)
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Amplitude {
        self.terms
            .iter()
            .filter_map(|(occ, amp)| other.terms.get(occ).map(|b| amp.conj() * b))
            .sum()
    }

    pub fn squared_norm(&self) -> f64 {
        self.terms.values().map(Amplitude::norm_sqr).sum()
    }

    /// Apply a linear mode map, relabelling the result into basis `N`.
    pub fn transform<N: ModeLabel>(&self, map: &LinearModeMap) -> Result<FockState<N>> {
        let terms = transform_terms(&self.terms, map, self.max_occupancy)?;
        Ok(FockState::from_terms_unchecked(terms, self.max_occupancy))
    }

    /// Passive two-mode transform: `a_A^dag -> u00 a_A^dag + u10 a_B^dag`,
    /// `a_B^dag -> u01 a_A^dag + u11 a_B^dag`. Other modes are untouched.
    pub fn apply_mode_pair_unitary(
        &self,
        mode_a: M,
        mode_b: M,
        u: &[[Amplitude; 2]; 2],
    ) -> Result<Self> {
        if mode_a == mode_b {
            return Err(NqiError::SameMode {
                slot: mode_a.index(),
            });
        }
        let deviation = pair_unitarity_deviation(u);
        if deviation > AMPLITUDE_TOLERANCE {
            return Err(NqiError::NotUnitary { deviation });
        }
        let mut map = LinearModeMap::identity();
        map.set_pair(mode_a.index(), mode_b.index(), u);
        self.transform(&map)
    }

    /// Largest per-term amplitude difference.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|occ| (self.amplitude(occ) - other.amplitude(occ)).norm())
            .fold(0.0, f64::max)
    }

    /// Largest per-term difference after removing the best global phase.
    pub fn max_deviation_up_to_phase(&self, other: &Self) -> f64 {
        let overlap = other.inner_product(self);
        if overlap.norm() == 0.0 {
            return self.max_deviation(other);
        }
        let phase = overlap / overlap.norm();
        self.max_deviation(&other.scale(phase))
    }
}

impl<M: ModeLabel> Add for &FockState<M> {
    type Output = FockState<M>;

    fn add(self, rhs: Self) -> FockState<M> {
        let mut terms = self.terms.clone();
        for (occ, amp) in &rhs.terms {
            *terms.entry(*occ).or_insert(Amplitude::new(0.0, 0.0)) += amp;
        }
        purge(&mut terms);
        FockState::from_terms_unchecked(terms, self.max_occupancy.max(rhs.max_occupancy))
    }
}

impl<M: ModeLabel> Sub for &FockState<M> {
    type Output = FockState<M>;

    fn sub(self, rhs: Self) -> FockState<M> {
        self + &rhs.scale(Amplitude::new(-1.0, 0.0))
    }
}

impl<M: ModeLabel> fmt::Display for FockState<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (occ, amp)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i)|{}>", amp.re, amp.im, occ.describe::<M>())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    const RLP: ModeId = ModeId::new(Direction::Right, Path::Lower, Polarization::Plus);
    const LLM: ModeId = ModeId::new(Direction::Left, Path::Lower, Polarization::Minus);
    const RUP: ModeId = ModeId::new(Direction::Right, Path::Upper, Polarization::Plus);

    #[test]
    fn canonical_mode_order() {
        for (i, mode) in ModeId::ALL.iter().enumerate() {
            assert_eq!(mode.index(), i);
        }
        let mut sorted = ModeId::ALL;
        sorted.sort();
        assert_eq!(sorted, ModeId::ALL);
        for (i, mode) in LinearModeId::ALL.iter().enumerate() {
            assert_eq!(mode.index(), i);
        }
    }

    #[test]
    fn create_on_vacuum_gives_single_photon() {
        let state = PhotonState::vacuum().create_photon(RLP).unwrap();
        assert_eq!(state.len(), 1);
        assert_eq!(
            state.amplitude(&OccupationState::of_modes(&[RLP])),
            c(1.0, 0.0)
        );
    }

    #[test]
    fn double_creation_carries_sqrt_two() {
        let state = PhotonState::vacuum()
            .create_photon(RLP)
            .unwrap()
            .create_photon(RLP)
            .unwrap();
        let amp = state.amplitude(&OccupationState::of_modes(&[RLP, RLP]));
        assert!((amp - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((state.squared_norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn independent_probe_construction() {
        let state = PhotonState::vacuum()
            .create_photon(RLP)
            .unwrap()
            .create_photon(LLM)
            .unwrap();
        assert_eq!(state.len(), 1);
        assert_eq!(
            state.amplitude(&OccupationState::of_modes(&[RLP, LLM])),
            c(1.0, 0.0)
        );
        assert!((state.inner_product(&state) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn capacity_is_enforced() {
        let mut state = PhotonState::vacuum();
        for _ in 0..DEFAULT_MAX_OCCUPANCY {
            state = state.create_photon(RUP).unwrap();
        }
        let err = state.create_photon(RUP).unwrap_err();
        assert!(matches!(
            err,
            NqiError::Capacity {
                slot: 0,
                count: 5,
                max: 4
            }
        ));
        let tight = PhotonState::single_photon(RUP)
            .with_max_occupancy(1)
            .unwrap();
        assert!(tight.create_photon(RUP).is_err());
    }

    #[test]
    fn create_leaves_input_untouched() {
        let state = PhotonState::single_photon(RUP);
        let before = state.clone();
        let _ = state.create_photon(RLP).unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn pair_unitary_identity_swap_and_splitter() {
        let single = PhotonState::single_photon(RUP);
        let identity = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert_eq!(
            single.apply_mode_pair_unitary(RUP, RLP, &identity).unwrap(),
            single
        );

        let swap = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        assert_eq!(
            single.apply_mode_pair_unitary(RUP, RLP, &swap).unwrap(),
            PhotonState::single_photon(RLP)
        );

        let h = FRAC_1_SQRT_2;
        let splitter = [[c(h, 0.0), c(0.0, h)], [c(0.0, h), c(h, 0.0)]];
        let out = single.apply_mode_pair_unitary(RUP, RLP, &splitter).unwrap();
        assert!((out.amplitude(&OccupationState::of_modes(&[RUP])) - c(h, 0.0)).norm() < 1e-15);
        assert!((out.amplitude(&OccupationState::of_modes(&[RLP])) - c(0.0, h)).norm() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        // |1,1> through a balanced splitter never leaves one photon per port.
        let h = FRAC_1_SQRT_2;
        let splitter = [[c(h, 0.0), c(0.0, h)], [c(0.0, h), c(h, 0.0)]];
        let pair = PhotonState::vacuum()
            .create_photon(RUP)
            .unwrap()
            .create_photon(RLP)
            .unwrap();
        let out = pair.apply_mode_pair_unitary(RUP, RLP, &splitter).unwrap();
        assert_eq!(
            out.amplitude(&OccupationState::of_modes(&[RUP, RLP])),
            c(0.0, 0.0)
        );
        assert!(
            (out.amplitude(&OccupationState::of_modes(&[RUP, RUP]))
                .norm_sqr()
                - 0.5)
                .abs()
                < 1e-14
        );
        assert!((out.squared_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pair_unitary_rejects_bad_input() {
        let single = PhotonState::single_photon(RUP);
        let skew = [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(
            single.apply_mode_pair_unitary(RUP, RLP, &skew),
            Err(NqiError::NotUnitary { .. })
        ));
        let identity = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert_eq!(
            single.apply_mode_pair_unitary(RUP, RUP, &identity),
            Err(NqiError::SameMode { slot: 0 })
        );
    }

    #[test]
    fn inner_products_and_norms() {
        let vac = PhotonState::vacuum();
        assert_eq!(vac.inner_product(&vac), c(1.0, 0.0));
        assert_eq!(vac.squared_norm(), 1.0);
        let a = PhotonState::single_photon(RUP);
        let b = PhotonState::single_photon(RLP);
        assert_eq!(a.inner_product(&b), c(0.0, 0.0));

        let two_terms = &a + &b;
        assert!((two_terms.squared_norm() - 2.0).abs() < 1e-15);

        let ia = a.scale(c(0.0, 1.0));
        // conjugate-linear in the first slot
        assert_eq!(ia.inner_product(&a), c(0.0, -1.0));
        assert_eq!(a.inner_product(&ia), c(0.0, 1.0));
    }

    #[test]
    fn purge_drops_tiny_amplitudes() {
        let state = PhotonState::from_terms([
            (OccupationState::of_modes(&[RUP]), c(1.0, 0.0)),
            (OccupationState::of_modes(&[RLP]), c(1e-16, 0.0)),
        ])
        .unwrap();
        assert_eq!(state.len(), 1);
        assert!((&state - &state).is_empty());
    }

    #[test]
    fn map_composition_and_adjoint() {
        let h = FRAC_1_SQRT_2;
        let mut map = LinearModeMap::identity();
        map.set_pair(0, 3, &[[c(h, 0.0), c(0.0, h)], [c(0.0, h), c(h, 0.0)]]);
        assert!(map.unitarity_deviation() < 1e-15);
        let round_trip = map.then(&map.adjoint());
        for s in 0..NUM_MODES {
            for d in 0..NUM_MODES {
                let expected = if s == d { 1.0 } else { 0.0 };
                assert!((round_trip.coefficient(s, d) - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn display_lists_terms() {
        let state = PhotonState::single_photon(RUP);
        assert_eq!(state.to_string(), "(1.000000+0.000000i)|R/u/+>");
        assert_eq!(
            PhotonState::vacuum().to_string(),
            "(1.000000+0.000000i)|vac>"
        );
    }
}
