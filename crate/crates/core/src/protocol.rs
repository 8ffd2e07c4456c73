//! Probe schemes, end-to-end runs, repeated interrogation, and sampling.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::atom::{AtomSuperposition, JointState};
use crate::error::{NqiError, Result};
use crate::fock::{
    Amplitude, Direction, LinearPolarization, ModeId, Path, PhotonState, Polarization,
    AMPLITUDE_TOLERANCE,
};
use crate::measurement::{
    category_totals, classify_outcomes, enumerate_outcomes, fidelity, Category, DetectionPattern,
    DetectorConfig, OutcomeRecord,
};
use crate::optics;

/// Trials drawn from one RNG stream. Fixed so counts do not depend on how
/// batches are spread over workers.
const MC_BATCH: u64 = 8_192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    /// Independent `+` (right-going) and `-` (left-going) photons, circular detectors.
    IndependentCircular,
    /// Polarization-entangled pair, circular detectors.
    EprCircular,
    /// Polarization-entangled pair, linear detectors.
    EprLinear,
    /// One right-going `x` photon, linear detectors.
    SinglePhotonLinear,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::IndependentCircular,
        Scheme::EprCircular,
        Scheme::EprLinear,
        Scheme::SinglePhotonLinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::IndependentCircular => "independent-circular",
            Scheme::EprCircular => "epr-circular",
            Scheme::EprLinear => "epr-linear",
            Scheme::SinglePhotonLinear => "single-photon-linear",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scheme::IndependentCircular => {
                "two independent counter-propagating photons, circular-basis detectors"
            }
            Scheme::EprCircular => "polarization-entangled photon pair, circular-basis detectors",
            Scheme::EprLinear => "polarization-entangled photon pair, linear-basis detectors",
            Scheme::SinglePhotonLinear => {
                "single right-going x-polarized photon, linear-basis detectors"
            }
        }
    }

    /// The probe ket, written with creation operators on labelled modes.
    pub fn probe_formula(self) -> &'static str {
        match self {
            Scheme::IndependentCircular => "a+(R/l/+) a+(L/l/-) |0>",
            Scheme::EprCircular | Scheme::EprLinear => {
                "[a+(R/l/+) a+(L/l/-) + a+(R/l/-) a+(L/l/+)] |0> / sqrt2"
            }
            Scheme::SinglePhotonLinear => "a+(R/l/x) |0> = [a+(R/l/-) - a+(R/l/+)] |0> / sqrt2",
        }
    }

    pub fn photon_count(self) -> u32 {
        match self {
            Scheme::SinglePhotonLinear => 1,
            _ => 2,
        }
    }

    pub fn detector_config(self) -> DetectorConfig {
        match self {
            Scheme::IndependentCircular | Scheme::EprCircular => DetectorConfig::CIRCULAR,
            Scheme::EprLinear | Scheme::SinglePhotonLinear => DetectorConfig::LINEAR,
        }
    }

    /// Normalized probe in the circular basis, entering through the lower ports.
    pub fn build_probe(self) -> PhotonState {
        use Direction::{Left, Right};
        use Polarization::{Minus, Plus};
        let lower = |d, p| ModeId::new(d, Path::Lower, p);
        let pair = |a, b| -> PhotonState {
            PhotonState::vacuum()
                .create_photon(a)
                .and_then(|s| s.create_photon(b))
                .expect("two photons fit under the default cap")
        };
        match self {
            Scheme::IndependentCircular => pair(lower(Right, Plus), lower(Left, Minus)),
            Scheme::EprCircular | Scheme::EprLinear => {
                let first = pair(lower(Right, Plus), lower(Left, Minus));
                let second = pair(lower(Right, Minus), lower(Left, Plus));
                (&first + &second).scale(Amplitude::new(FRAC_1_SQRT_2, 0.0))
            }
            Scheme::SinglePhotonLinear => {
                optics::linear_photon(Right, Path::Lower, LinearPolarization::X)
                    .expect("single photon fits under the default cap")
            }
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = NqiError;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.name() == s)
            .ok_or_else(|| NqiError::InvalidConfig(format!("unknown scheme `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub atom: AtomSuperposition,
    pub atom_present: bool,
    pub atom_arm: Path,
    pub max_rounds: u32,
    pub mc_trials: u64,
    pub rng_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::EprLinear,
            atom: AtomSuperposition::equal_weight(),
            atom_present: true,
            atom_arm: Path::Lower,
            max_rounds: 1,
            mc_trials: 0,
            rng_seed: 42,
        }
    }
}

impl ExperimentConfig {
    pub fn new(scheme: Scheme, atom: AtomSuperposition) -> Self {
        Self {
            scheme,
            atom,
            ..Self::default()
        }
    }

    pub fn without_atom(mut self) -> Self {
        self.atom_present = false;
        self
    }
}

/// Splitter, atom, splitter. The result is in the circular basis, before
/// detection.
pub fn evolve(config: &ExperimentConfig) -> Result<JointState> {
    JointState::tensor(&config.scheme.build_probe(), &config.atom)?
        .beam_splitter()?
        .interact_atom(config.atom_present, config.atom_arm)
        .beam_splitter()
}

/// Exact outcome distribution of one run, classified against the initial atom.
pub fn run_single_shot(config: &ExperimentConfig) -> Result<Vec<OutcomeRecord>> {
    let final_state = evolve(config)?;
    let outcomes = enumerate_outcomes(&final_state, &config.scheme.detector_config())?;
    classify_outcomes(outcomes, &config.atom)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundSummary {
    pub round: u32,
    /// Probability that this round is run at all.
    pub entering_mass: f64,
    /// Outcomes of this round, weighted by `entering_mass`.
    pub outcomes: Vec<OutcomeRecord>,
    /// Mass per category after this round. `NotDetectedRepeatable` holds the
    /// mass still waiting for another round.
    pub cumulative: BTreeMap<Category, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundReport {
    pub rounds: Vec<RoundSummary>,
}

impl RoundReport {
    pub fn last(&self) -> &RoundSummary {
        self.rounds.last().expect("at least one round")
    }

    pub fn cumulative(&self, category: Category) -> f64 {
        self.last().cumulative[&category]
    }
}

/// Repeat the run while nothing is seen, with a fresh probe each round.
///
/// Only the repeatable mass moves on, and only after checking that the atom it
/// carries is still the initial superposition.
pub fn run_repeated(config: &ExperimentConfig) -> Result<RoundReport> {
    if config.max_rounds == 0 {
        return Err(NqiError::InvalidConfig(
            "max_rounds must be at least 1".into(),
        ));
    }
    let mut round_config = config.clone();
    let mut mass = 1.0;
    let mut cumulative = category_totals(&[]);
    let mut rounds = Vec::with_capacity(config.max_rounds as usize);

    for round in 1..=config.max_rounds {
        let records = run_single_shot(&round_config)?;
        let mut repeat_mass = 0.0;
        let mut next_atom = None;
        for record in &records {
            if record.category == Category::NotDetectedRepeatable {
                let post = record
                    .post_atom
                    .superposition()
                    .expect("repeatable outcome keeps the atom");
                let f = fidelity(&config.atom, post);
                if f < 1.0 - AMPLITUDE_TOLERANCE {
                    return Err(NqiError::PerturbedRepeat {
                        pattern: record.pattern.to_string(),
                        fidelity: f,
                    });
                }
                repeat_mass += record.probability;
                next_atom.get_or_insert(*post);
            } else {
                *cumulative
                    .get_mut(&record.category)
                    .expect("all categories present") += mass * record.probability;
            }
        }
        let entering_mass = mass;
        mass *= repeat_mass;
        cumulative.insert(Category::NotDetectedRepeatable, mass);

        let outcomes = records
            .into_iter()
            .map(|mut r| {
                r.probability *= entering_mass;
                r
            })
            .collect();
        rounds.push(RoundSummary {
            round,
            entering_mass,
            outcomes,
            cumulative: cumulative.clone(),
        });

        if let Some(atom) = next_atom {
            round_config.atom = atom;
        }
    }
    Ok(RoundReport { rounds })
}

/// Seeded samples from the exact single-shot distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub seed: u64,
    /// Per outcome of [`run_single_shot`], in the same order.
    pub outcome_counts: Vec<(DetectionPattern, Category, u64)>,
    pub category_counts: BTreeMap<Category, u64>,
}

impl MonteCarloReport {
    pub fn frequency(&self, category: Category) -> f64 {
        self.category_counts[&category] as f64 / self.trials as f64
    }

    pub fn frequencies(&self) -> BTreeMap<Category, f64> {
        self.category_counts
            .keys()
            .map(|&c| (c, self.frequency(c)))
            .collect()
    }
}

/// Draw `config.mc_trials` outcomes using up to `workers` threads.
///
/// Trials are cut into fixed batches; batch `k` uses stream `k` of a ChaCha8
/// generator seeded with `config.rng_seed`, so counts depend only on the seed.
pub fn monte_carlo(config: &ExperimentConfig, workers: usize) -> Result<MonteCarloReport> {
    if config.mc_trials == 0 {
        return Err(NqiError::InvalidConfig(
            "mc_trials must be at least 1".into(),
        ));
    }
    let records = run_single_shot(config)?;
    let weights: Vec<f64> = records.iter().map(|r| r.probability).collect();
    let sampler =
        WeightedIndex::new(&weights).map_err(|e| NqiError::InvalidConfig(e.to_string()))?;

    let trials = config.mc_trials;
    let seed = config.rng_seed;
    let batches = trials.div_ceil(MC_BATCH);
    let draw_batch = |batch: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch);
        let size = MC_BATCH.min(trials - batch * MC_BATCH);
        let mut counts = vec![0u64; records.len()];
        for _ in 0..size {
            counts[sampler.sample(&mut rng)] += 1;
        }
        counts
    };
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| NqiError::InvalidConfig(e.to_string()))?;
    let counts = pool.install(|| {
        (0..batches)
            .into_par_iter()
            .map(draw_batch)
            .reduce(|| vec![0u64; records.len()], merge)
    });

    let mut category_counts: BTreeMap<Category, u64> =
        Category::ALL.into_iter().map(|c| (c, 0)).collect();
    for (record, &n) in records.iter().zip(&counts) {
        *category_counts
            .get_mut(&record.category)
            .expect("all categories present") += n;
    }
    let outcome_counts = records
        .into_iter()
        .zip(counts)
        .map(|(r, n)| (r.pattern, r.category, n))
        .collect();
    Ok(MonteCarloReport {
        trials,
        seed,
        outcome_counts,
        category_counts,
    })
}

/// Per-run success of the entangled-pair scheme against the single-photon
/// scheme for the same atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NqiComparison {
    pub two_photon: f64,
    pub single_photon: f64,
}

impl NqiComparison {
    pub fn ratio(&self) -> f64 {
        self.two_photon / self.single_photon
    }
}

pub fn compare_nqi_success(atom: &AtomSuperposition) -> Result<NqiComparison> {
    let success = |scheme| -> Result<f64> {
        let records = run_single_shot(&ExperimentConfig::new(scheme, *atom))?;
        Ok(category_totals(&records)[&Category::NqiSuccess])
    };
    Ok(NqiComparison {
        two_photon: success(Scheme::EprLinear)?,
        single_photon: success(Scheme::SinglePhotonLinear)?,
    })
}
