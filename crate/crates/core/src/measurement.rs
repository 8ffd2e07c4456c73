//! Polarization-resolving photon detection at the four output ports.
//!
//! Detection is an ideal projective measurement in the occupation basis of
//! whichever polarization basis each port is set to. Outcomes are grouped by
//! click pattern; the atom's conditional state is read off the two metastable
//! components of the joint state.

use std::collections::BTreeMap;
use std::fmt;

use crate::atom::{AtomLevel, AtomSuperposition, JointState};
use crate::error::{NqiError, Result};
use crate::fock::{
    transform_terms, Direction, ModeId, ModeLabel, OccupationState, Path, Polarization, Terms,
    AMPLITUDE_TOLERANCE,
};
use crate::optics::circular_to_linear_map;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolarizationBasis {
    Circular,
    Linear,
}

/// Polarization basis of each of the four detectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DetectorConfig {
    ports: [PolarizationBasis; 4],
}

fn port_index(direction: Direction, path: Path) -> usize {
    let d = match direction {
        Direction::Right => 0,
        Direction::Left => 1,
    };
    let p = match path {
        Path::Upper => 0,
        Path::Lower => 1,
    };
    d * 2 + p
}

impl DetectorConfig {
    pub const CIRCULAR: Self = Self::uniform(PolarizationBasis::Circular);
    pub const LINEAR: Self = Self::uniform(PolarizationBasis::Linear);

    pub const fn uniform(basis: PolarizationBasis) -> Self {
        Self { ports: [basis; 4] }
    }

    /// Mixed-basis extension: override a single port.
    pub fn with_port(mut self, direction: Direction, path: Path, basis: PolarizationBasis) -> Self {
        self.ports[port_index(direction, path)] = basis;
        self
    }

    pub fn basis(&self, direction: Direction, path: Path) -> PolarizationBasis {
        self.ports[port_index(direction, path)]
    }

    pub fn uniform_basis(&self) -> Option<PolarizationBasis> {
        let first = self.ports[0];
        self.ports.iter().all(|&b| b == first).then_some(first)
    }
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self::CIRCULAR
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolarizationLabel {
    Plus,
    Minus,
    X,
    Y,
}

impl fmt::Display for PolarizationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolarizationLabel::Plus => "+",
            PolarizationLabel::Minus => "-",
            PolarizationLabel::X => "x",
            PolarizationLabel::Y => "y",
        })
    }
}

/// One detected photon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Click {
    pub direction: Direction,
    pub path: Path,
    pub polarization: PolarizationLabel,
}

impl Click {
    pub const fn new(direction: Direction, path: Path, polarization: PolarizationLabel) -> Self {
        Self {
            direction,
            path,
            polarization,
        }
    }
}

impl fmt::Display for Click {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.direction, self.path, self.polarization)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DetectionPattern {
    /// Clicks in canonical port order, one per photon.
    Clicks(Vec<Click>),
    Absorbed,
}

impl DetectionPattern {
    pub fn clicks(&self) -> &[Click] {
        match self {
            DetectionPattern::Clicks(clicks) => clicks,
            DetectionPattern::Absorbed => &[],
        }
    }

    pub fn is_absorbed(&self) -> bool {
        matches!(self, DetectionPattern::Absorbed)
    }

    pub fn has_lower_click(&self) -> bool {
        self.clicks().iter().any(|c| c.path == Path::Lower)
    }

    /// Ports that fired, with multiplicity, ignoring polarization.
    pub fn ports(&self) -> Vec<(Direction, Path)> {
        self.clicks()
            .iter()
            .map(|c| (c.direction, c.path))
            .collect()
    }

    fn from_occupation(occ: &OccupationState, config: &DetectorConfig) -> Self {
        let clicks = occ
            .photon_slots()
            .map(|slot| {
                let mode = ModeId::from_index(slot);
                let label = match (config.basis(mode.direction, mode.path), mode.polarization) {
                    (PolarizationBasis::Circular, Polarization::Plus) => PolarizationLabel::Plus,
                    (PolarizationBasis::Circular, Polarization::Minus) => PolarizationLabel::Minus,
                    (PolarizationBasis::Linear, Polarization::Plus) => PolarizationLabel::X,
                    (PolarizationBasis::Linear, Polarization::Minus) => PolarizationLabel::Y,
                };
                Click::new(mode.direction, mode.path, label)
            })
            .collect();
        DetectionPattern::Clicks(clicks)
    }
}

impl fmt::Display for DetectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetectionPattern::Absorbed => f.write_str("absorbed"),
            DetectionPattern::Clicks(clicks) if clicks.is_empty() => f.write_str("none"),
            DetectionPattern::Clicks(clicks) => {
                for (i, click) in clicks.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{click}")?;
                }
                Ok(())
            }
        }
    }
}

/// State of the atom after the detectors fire.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PostAtom {
    Superposition(AtomSuperposition),
    Ground,
}

impl PostAtom {
    pub fn superposition(&self) -> Option<&AtomSuperposition> {
        match self {
            PostAtom::Superposition(s) => Some(s),
            PostAtom::Ground => None,
        }
    }
}

impl fmt::Display for PostAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PostAtom::Superposition(s) => write!(f, "{s}"),
            PostAtom::Ground => f.write_str("ground"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    /// Nothing seen; atom untouched, so the run can be repeated.
    NotDetectedRepeatable,
    /// Atom detected and its superposition preserved.
    NqiSuccess,
    /// Atom detected, left in `alpha |m+> - beta |m->`.
    PhaseFlipDetection,
    /// Atom detected, collapsed to `|m+>` or `|m->`.
    CollapseDetection,
    Absorbed,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::NotDetectedRepeatable,
        Category::NqiSuccess,
        Category::PhaseFlipDetection,
        Category::CollapseDetection,
        Category::Absorbed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::NotDetectedRepeatable => "NotDetectedRepeatable",
            Category::NqiSuccess => "NQISuccess",
            Category::PhaseFlipDetection => "PhaseFlipDetection",
            Category::CollapseDetection => "CollapseDetection",
            Category::Absorbed => "Absorbed",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Category {
    type Err = NqiError;

    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| NqiError::InvalidConfig(format!("unknown category `{s}`")))
    }
}

/// An unclassified measurement outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub pattern: DetectionPattern,
    pub probability: f64,
    pub post_atom: PostAtom,
}

/// An outcome with its category and its fidelity to the initial atom.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRecord {
    pub pattern: DetectionPattern,
    pub probability: f64,
    pub post_atom: PostAtom,
    pub category: Category,
    /// `None` for the absorbed outcome.
    pub fidelity: Option<f64>,
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &AtomSuperposition, b: &AtomSuperposition) -> f64 {
    (a.alpha().conj() * b.alpha() + a.beta().conj() * b.beta()).norm_sqr()
}

/// Every detection pattern with nonzero probability, plus one lumped
/// `Absorbed` outcome carrying the scattered mass.
pub fn enumerate_outcomes(state: &JointState, config: &DetectorConfig) -> Result<Vec<Outcome>> {
    let total = state.total_probability();
    if (total - 1.0).abs() > AMPLITUDE_TOLERANCE {
        return Err(NqiError::Unnormalized {
            what: "joint state",
            norm_sqr: total,
        });
    }

    let rotation = circular_to_linear_map(|d, p| config.basis(d, p) == PolarizationBasis::Linear);
    let mut components = Vec::with_capacity(2);
    for level in [AtomLevel::MPlus, AtomLevel::MMinus] {
        let component = state.component(level).expect("metastable level");
        let rotated = transform_terms(component.raw_terms(), &rotation, component.max_occupancy())?;
        components.push(rotated);
    }
    let (plus, minus): (&Terms, &Terms) = (&components[0], &components[1]);

    let mut patterns: BTreeMap<OccupationState, ()> = BTreeMap::new();
    for occ in plus.keys().chain(minus.keys()) {
        patterns.insert(*occ, ());
    }

    let mut outcomes = Vec::with_capacity(patterns.len() + 1);
    for occ in patterns.keys() {
        let a = plus.get(occ).copied().unwrap_or_default();
        let b = minus.get(occ).copied().unwrap_or_default();
        let probability = a.norm_sqr() + b.norm_sqr();
        if probability == 0.0 {
            continue;
        }
        outcomes.push(Outcome {
            pattern: DetectionPattern::from_occupation(occ, config),
            probability,
            post_atom: PostAtom::Superposition(AtomSuperposition::normalized(a, b)?),
        });
    }

    let absorbed = state.scattered_probability();
    if absorbed > 0.0 {
        outcomes.push(Outcome {
            pattern: DetectionPattern::Absorbed,
            probability: absorbed,
            post_atom: PostAtom::Ground,
        });
    }
    Ok(outcomes)
}

fn unclassifiable(pattern: &DetectionPattern, reason: impl Into<String>) -> NqiError {
    NqiError::Unclassifiable {
        pattern: pattern.to_string(),
        reason: reason.into(),
    }
}

/// Sort an outcome into the interrogation taxonomy.
///
/// All-upper clicks that leave the atom untouched are indistinguishable from
/// an empty interferometer and count as repeatable. An atom-revealing pattern
/// (any lower-port click, or an upper-port polarization change that flipped
/// the atom) is a success when the atom is untouched, a phase flip when it is
/// left in `alpha |m+> - beta |m->`, and a collapse when it ends in a basis
/// level. Anything else is a pipeline defect.
pub fn classify(
    pattern: &DetectionPattern,
    post_atom: &PostAtom,
    initial: &AtomSuperposition,
) -> Result<Category> {
    let post = match (pattern, post_atom) {
        (DetectionPattern::Absorbed, PostAtom::Ground) => return Ok(Category::Absorbed),
        (DetectionPattern::Absorbed, PostAtom::Superposition(_)) => {
            return Err(unclassifiable(
                pattern,
                "absorbed outcome with a metastable atom",
            ))
        }
        (DetectionPattern::Clicks(_), PostAtom::Ground) => {
            return Err(unclassifiable(
                pattern,
                "photon clicks with a ground-state atom",
            ))
        }
        (DetectionPattern::Clicks(_), PostAtom::Superposition(post)) => post,
    };

    let is_one = |f: f64| f >= 1.0 - AMPLITUDE_TOLERANCE;
    let preserved = is_one(fidelity(initial, post));
    let flipped = is_one(fidelity(&initial.phase_flipped(), post));

    if !pattern.has_lower_click() {
        return if preserved {
            Ok(Category::NotDetectedRepeatable)
        } else if flipped {
            Ok(Category::PhaseFlipDetection)
        } else {
            Err(unclassifiable(
                pattern,
                format!("upper-port outcome left the atom in {post}"),
            ))
        };
    }

    let collapsed = is_one(post.alpha().norm_sqr()) || is_one(post.beta().norm_sqr());
    if preserved {
        Ok(Category::NqiSuccess)
    } else if flipped {
        Ok(Category::PhaseFlipDetection)
    } else if collapsed {
        Ok(Category::CollapseDetection)
    } else {
        Err(unclassifiable(pattern, format!("atom left in {post}")))
    }
}

pub fn classify_outcomes(
    outcomes: Vec<Outcome>,
    initial: &AtomSuperposition,
) -> Result<Vec<OutcomeRecord>> {
    outcomes
        .into_iter()
        .map(|o| {
            let category = classify(&o.pattern, &o.post_atom, initial)?;
            let fidelity = o
                .post_atom
                .superposition()
                .map(|post| fidelity(initial, post));
            Ok(OutcomeRecord {
                pattern: o.pattern,
                probability: o.probability,
                post_atom: o.post_atom,
                category,
                fidelity,
            })
        })
        .collect()
}

/// Probability mass per category, with every category present.
pub fn category_totals(records: &[OutcomeRecord]) -> BTreeMap<Category, f64> {
    let mut totals: BTreeMap<Category, f64> = Category::ALL.into_iter().map(|c| (c, 0.0)).collect();
    for record in records {
        *totals.entry(record.category).or_default() += record.probability;
    }
    totals
}
