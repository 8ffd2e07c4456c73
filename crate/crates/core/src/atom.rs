//! The three-level atom and its joint state with the probe photons.
//!
//! The atom starts in `alpha |m+> + beta |m->`. A `+` (`-`) circularly
//! polarized photon in the atom's arm is absorbed with unit efficiency when the
//! atom is in `m+` (`m-`); the excited level decays to `|g>` instantly, so
//! absorption lands directly in a terminal scattered branch.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{NqiError, Result};
use crate::fock::{
    Amplitude, FockState, LinearModeId, ModeId, ModeLabel, OccupationState, Path, PhotonState,
    Polarization, Terms, AMPLITUDE_TOLERANCE,
};
use crate::optics;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomLevel {
    MPlus,
    MMinus,
    Ground,
}

impl AtomLevel {
    /// Polarization absorbed from this level, if any.
    pub fn absorbs(self) -> Option<Polarization> {
        match self {
            AtomLevel::MPlus => Some(Polarization::Plus),
            AtomLevel::MMinus => Some(Polarization::Minus),
            AtomLevel::Ground => None,
        }
    }
}

/// `alpha |m+> + beta |m->`, normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomSuperposition {
    alpha: Amplitude,
    beta: Amplitude,
}

impl AtomSuperposition {
    pub fn new(alpha: Amplitude, beta: Amplitude) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > AMPLITUDE_TOLERANCE {
            return Err(NqiError::Unnormalized {
                what: "atomic superposition",
                norm_sqr,
            });
        }
        Ok(Self { alpha, beta })
    }

    /// Rescale an arbitrary nonzero pair onto the unit sphere.
    pub fn normalized(alpha: Amplitude, beta: Amplitude) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(NqiError::Unnormalized {
                what: "atomic superposition",
                norm_sqr: norm * norm,
            });
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    /// `(cos(theta/2), e^{i phi} sin(theta/2))`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        Self {
            alpha: Amplitude::new((theta / 2.0).cos(), 0.0),
            beta: Amplitude::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn equal_weight() -> Self {
        Self {
            alpha: Amplitude::new(FRAC_1_SQRT_2, 0.0),
            beta: Amplitude::new(FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn basis(level: AtomLevel) -> Result<Self> {
        let one = Amplitude::new(1.0, 0.0);
        let zero = Amplitude::new(0.0, 0.0);
        match level {
            AtomLevel::MPlus => Ok(Self {
                alpha: one,
                beta: zero,
            }),
            AtomLevel::MMinus => Ok(Self {
                alpha: zero,
                beta: one,
            }),
            AtomLevel::Ground => Err(NqiError::InvalidConfig(
                "ground level is not a metastable superposition".into(),
            )),
        }
    }

    pub fn alpha(&self) -> Amplitude {
        self.alpha
    }

    pub fn beta(&self) -> Amplitude {
        self.beta
    }

    pub fn amplitude(&self, level: AtomLevel) -> Amplitude {
        match level {
            AtomLevel::MPlus => self.alpha,
            AtomLevel::MMinus => self.beta,
            AtomLevel::Ground => Amplitude::new(0.0, 0.0),
        }
    }

    /// `alpha |m+> - beta |m->`.
    pub fn phase_flipped(&self) -> Self {
        Self {
            alpha: self.alpha,
            beta: -self.beta,
        }
    }

    /// Same ray with the global phase chosen so `alpha` is real and >= 0
    /// (or `beta` when `alpha` vanishes).
    pub fn with_canonical_phase(&self) -> Self {
        let pivot = if self.alpha.norm() > AMPLITUDE_TOLERANCE {
            self.alpha
        } else {
            self.beta
        };
        let phase = pivot.conj() / pivot.norm();
        Self {
            alpha: self.alpha * phase,
            beta: self.beta * phase,
        }
    }

    pub fn scaled_phase(&self, phase: Amplitude) -> Self {
        Self {
            alpha: self.alpha * phase,
            beta: self.beta * phase,
        }
    }
}

impl fmt::Display for AtomSuperposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:.6}{:+.6}i, {:.6}{:+.6}i)",
            self.alpha.re, self.alpha.im, self.beta.re, self.beta.im
        )
    }
}

/// A term in which the atom absorbed one probe photon and fell to `|g>`.
/// Terminal: no further optics act on it.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteredBranch {
    pub surviving_photons: OccupationState,
    pub amplitude: Amplitude,
    pub absorbed_mode: ModeId,
}

impl ScatteredBranch {
    pub fn absorbed_polarization(&self) -> Polarization {
        self.absorbed_mode.polarization
    }

    pub fn probability(&self) -> f64 {
        self.amplitude.norm_sqr()
    }
}

/// `|phi_+>|m+> + |phi_->|m->` plus the terminal scattered sector.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState<M: ModeLabel = ModeId> {
    plus: FockState<M>,
    minus: FockState<M>,
    scattered: Vec<ScatteredBranch>,
}

/// Joint state with the photons expressed in the linear basis.
pub type LinearJointState = JointState<LinearModeId>;

impl JointState<ModeId> {
    /// `|probe> (alpha |m+> + beta |m->)`.
    pub fn tensor(probe: &PhotonState, atom: &AtomSuperposition) -> Result<Self> {
        let norm_sqr = probe.squared_norm();
        if (norm_sqr - 1.0).abs() > AMPLITUDE_TOLERANCE {
            return Err(NqiError::Unnormalized {
                what: "probe state",
                norm_sqr,
            });
        }
        Ok(Self {
            plus: probe.scale(atom.alpha),
            minus: probe.scale(atom.beta),
            scattered: Vec::new(),
        })
    }

    /// Unit-efficiency absorption by an atom sitting in `atom_arm`.
    ///
    /// A coherent term with the atom in `m_s` loses one photon from each
    /// atom-arm mode of polarization `s` (either direction) to a scattered
    /// branch. With matching photons in both directions the amplitude splits
    /// as `1/sqrt(k)` over the `k` candidate absorptions.
    pub fn interact_atom(&self, atom_present: bool, atom_arm: Path) -> Self {
        if !atom_present {
            return self.clone();
        }
        let mut scattered = self.scattered.clone();
        let mut plus = Terms::new();
        let mut minus = Terms::new();
        for (level, component, survivor) in [
            (AtomLevel::MPlus, &self.plus, &mut plus),
            (AtomLevel::MMinus, &self.minus, &mut minus),
        ] {
            let pol = level.absorbs().expect("metastable level");
            for (occ, &amp) in component.terms() {
                let absorbers: Vec<ModeId> = ModeId::ALL
                    .into_iter()
                    .filter(|m| m.path == atom_arm && m.polarization == pol && occ.count(*m) > 0)
                    .collect();
                if absorbers.is_empty() {
                    survivor.insert(*occ, amp);
                    continue;
                }
                let share = amp / (absorbers.len() as f64).sqrt();
                for mode in absorbers {
                    scattered.push(ScatteredBranch {
                        surviving_photons: occ.without_photon(mode.index()).expect("occupied"),
                        amplitude: share,
                        absorbed_mode: mode,
                    });
                }
            }
        }
        Self {
            plus: FockState::from_terms_unchecked(plus, self.plus.max_occupancy()),
            minus: FockState::from_terms_unchecked(minus, self.minus.max_occupancy()),
            scattered,
        }
    }

    pub fn beam_splitter(&self) -> Result<Self> {
        self.apply_optics(optics::beam_splitter)
    }

    pub fn rotate_to_linear(&self) -> Result<LinearJointState> {
        self.apply_optics(optics::rotate_to_linear)
    }
}

impl<M: ModeLabel> JointState<M> {
    /// Build from explicit atomic components; no normalization check.
    pub fn from_components(
        plus: FockState<M>,
        minus: FockState<M>,
        scattered: Vec<ScatteredBranch>,
    ) -> Self {
        Self {
            plus,
            minus,
            scattered,
        }
    }

    pub fn component(&self, level: AtomLevel) -> Option<&FockState<M>> {
        match level {
            AtomLevel::MPlus => Some(&self.plus),
            AtomLevel::MMinus => Some(&self.minus),
            AtomLevel::Ground => None,
        }
    }

    pub fn scattered(&self) -> &[ScatteredBranch] {
        &self.scattered
    }

    /// Amplitude on `|occ>|level>` for a metastable level.
    pub fn amplitude(&self, occ: &OccupationState, level: AtomLevel) -> Amplitude {
        self.component(level)
            .map(|c| c.amplitude(occ))
            .unwrap_or_default()
    }

    /// Every coherent `(occupation, level, amplitude)` term.
    pub fn coherent_terms(
        &self,
    ) -> impl Iterator<Item = (OccupationState, AtomLevel, Amplitude)> + '_ {
        let plus = self.plus.terms().map(|(o, a)| (*o, AtomLevel::MPlus, *a));
        let minus = self.minus.terms().map(|(o, a)| (*o, AtomLevel::MMinus, *a));
        plus.chain(minus)
    }

    pub fn coherent_probability(&self) -> f64 {
        self.plus.squared_norm() + self.minus.squared_norm()
    }

    pub fn scattered_probability(&self) -> f64 {
        self.scattered
            .iter()
            .map(ScatteredBranch::probability)
            .sum()
    }

    pub fn total_probability(&self) -> f64 {
        self.coherent_probability() + self.scattered_probability()
    }

    /// Lift a photonic map over the atom factor. Only the coherent sector is
    /// touched; scattered branches are carried over as they are.
    pub fn apply_optics<N: ModeLabel>(
        &self,
        element: impl Fn(&FockState<M>) -> Result<FockState<N>>,
    ) -> Result<JointState<N>> {
        Ok(JointState {
            plus: element(&self.plus)?,
            minus: element(&self.minus)?,
            scattered: self.scattered.clone(),
        })
    }

    /// `<self|other>` over the coherent sector.
    pub fn coherent_inner_product(&self, other: &Self) -> Amplitude {
        self.plus.inner_product(&other.plus) + self.minus.inner_product(&other.minus)
    }

    /// Largest coherent-amplitude difference after removing the best global
    /// phase.
    pub fn max_coherent_deviation_up_to_phase(&self, other: &Self) -> f64 {
        let overlap = other.coherent_inner_product(self);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Amplitude::new(1.0, 0.0)
        };
        self.plus
            .max_deviation(&other.plus.scale(phase))
            .max(self.minus.max_deviation(&other.minus.scale(phase)))
    }
}
