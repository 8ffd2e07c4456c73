use std::collections::BTreeMap;
use std::io::Write;

use nqi_core::{
    monte_carlo, run_repeated, Amplitude, Category, ExperimentConfig, OutcomeRecord, Path,
    PostAtom, Scheme, PURGE_THRESHOLD,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Round to 12 significant digits, snapping numerical noise to zero.
fn sig12(x: f64) -> f64 {
    if x.abs() < PURGE_THRESHOLD {
        0.0
    } else {
        format!("{x:.11e}").parse().expect("formatted float parses")
    }
}

fn pair(a: Amplitude) -> [f64; 2] {
    [sig12(a.re), sig12(a.im)]
}

fn arm_name(path: Path) -> &'static str {
    match path {
        Path::Lower => "lower",
        Path::Upper => "upper",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub scheme: String,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub atom_present: bool,
    pub atom_arm: String,
    pub rounds: u32,
    pub mc_trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PostAtomRow {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRow {
    pub pattern: String,
    pub probability: f64,
    /// Global phase chosen so alpha is real and non-negative. `None` when the
    /// atom was left in its ground state.
    pub post_atom: Option<PostAtomRow>,
    pub category: String,
    pub fidelity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryRow {
    pub category: String,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McCategoryRow {
    pub category: String,
    pub count: u64,
    pub frequency: f64,
    pub exact: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McRun {
    pub trials: u64,
    pub seed: u64,
    pub categories: Vec<McCategoryRow>,
}

/// Empty when no Monte Carlo trials were requested.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub run: Option<McRun>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub config: ConfigEcho,
    /// First-round outcomes.
    pub outcomes: Vec<OutcomeRow>,
    /// Category masses after the last round.
    pub cumulative: Vec<CategoryRow>,
    pub mc: McReport,
}

impl JsonReport {
    pub fn build(config: &ExperimentConfig, workers: usize) -> Result<Self, CliError> {
        let rounds = run_repeated(config)?;
        let first = &rounds.rounds[0].outcomes;
        let outcomes = first
            .iter()
            .filter(|r| r.probability >= PURGE_THRESHOLD)
            .map(outcome_row)
            .collect();
        let cumulative = category_rows(&rounds.last().cumulative);

        let mc = if config.mc_trials > 0 {
            let exact = nqi_core::category_totals(first);
            let sampled = monte_carlo(config, workers)?;
            let categories = Category::ALL
                .into_iter()
                .map(|c| McCategoryRow {
                    category: c.name().to_string(),
                    count: sampled.category_counts[&c],
                    frequency: sig12(sampled.frequency(c)),
                    exact: sig12(exact[&c]),
                })
                .collect();
            McReport {
                run: Some(McRun {
                    trials: sampled.trials,
                    seed: sampled.seed,
                    categories,
                }),
            }
        } else {
            McReport::default()
        };

        Ok(Self {
            config: ConfigEcho {
                scheme: config.scheme.name().to_string(),
                alpha: pair(config.atom.alpha()),
                beta: pair(config.atom.beta()),
                atom_present: config.atom_present,
                atom_arm: arm_name(config.atom_arm).to_string(),
                rounds: config.max_rounds,
                mc_trials: config.mc_trials,
                seed: config.rng_seed,
            },
            outcomes,
            cumulative,
            mc,
        })
    }

    /// Single-shot category masses, summed from the outcome rows.
    pub fn single_shot_totals(&self) -> Vec<CategoryRow> {
        Category::ALL
            .into_iter()
            .map(|c| CategoryRow {
                category: c.name().to_string(),
                probability: sig12(
                    self.outcomes
                        .iter()
                        .filter(|o| o.category == c.name())
                        .map(|o| o.probability)
                        .sum(),
                ),
            })
            .collect()
    }
}

fn outcome_row(record: &OutcomeRecord) -> OutcomeRow {
    OutcomeRow {
        pattern: record.pattern.to_string(),
        probability: sig12(record.probability),
        post_atom: match record.post_atom {
            PostAtom::Superposition(s) => {
                let s = s.with_canonical_phase();
                Some(PostAtomRow {
                    alpha: pair(s.alpha()),
                    beta: pair(s.beta()),
                })
            }
            PostAtom::Ground => None,
        },
        category: record.category.name().to_string(),
        fidelity: record.fidelity.map(sig12),
    }
}

fn category_rows(totals: &BTreeMap<Category, f64>) -> Vec<CategoryRow> {
    Category::ALL
        .into_iter()
        .map(|c| CategoryRow {
            category: c.name().to_string(),
            probability: sig12(totals[&c]),
        })
        .collect()
}

pub(crate) fn write_catalog(out: &mut dyn Write) -> Result<(), CliError> {
    for scheme in Scheme::ALL {
        writeln!(out, "{:<22} {}", scheme.name(), scheme.description())?;
        writeln!(out, "{:<22} probe: {}", "", scheme.probe_formula())?;
    }
    Ok(())
}

fn fixed6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn complex6(c: [f64; 2]) -> String {
    let im = fixed6(c[1]);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", fixed6(c[0]))
}

fn atom_text(alpha: [f64; 2], beta: [f64; 2]) -> String {
    format!("({}, {})", complex6(alpha), complex6(beta))
}

fn write_categories(
    out: &mut dyn Write,
    title: &str,
    rows: &[CategoryRow],
) -> Result<(), CliError> {
    writeln!(out, "{title}")?;
    writeln!(out, "  {:<22} {:>11}", "category", "probability")?;
    for row in rows {
        writeln!(
            out,
            "  {:<22} {:>11}",
            row.category,
            fixed6(row.probability)
        )?;
    }
    Ok(())
}

pub(crate) fn write_text(report: &JsonReport, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = &report.config;
    let scheme: Scheme = cfg
        .scheme
        .parse()
        .map_err(|e: nqi_core::NqiError| CliError::Invalid(e.to_string()))?;
    writeln!(out, "scheme     {} ({})", cfg.scheme, scheme.description())?;
    writeln!(out, "probe      {}", scheme.probe_formula())?;
    writeln!(out, "atom       {}", atom_text(cfg.alpha, cfg.beta))?;
    if cfg.atom_present {
        writeln!(out, "placement  {} arm", cfg.atom_arm)?;
    } else {
        writeln!(out, "placement  absent")?;
    }
    writeln!(out, "rounds     {}", cfg.rounds)?;
    writeln!(out)?;

    writeln!(out, "outcomes")?;
    writeln!(
        out,
        "  {:<14} {:>11}  {:<42} {:<22} {:>8}",
        "pattern", "probability", "post atom (alpha, beta)", "category", "fidelity"
    )?;
    for row in &report.outcomes {
        let post = row
            .post_atom
            .as_ref()
            .map_or_else(|| "ground".to_string(), |p| atom_text(p.alpha, p.beta));
        let fidelity = row.fidelity.map_or_else(|| "-".to_string(), fixed6);
        writeln!(
            out,
            "  {:<14} {:>11}  {:<42} {:<22} {:>8}",
            row.pattern,
            fixed6(row.probability),
            post,
            row.category,
            fidelity
        )?;
    }
    writeln!(out)?;
    write_categories(out, "categories", &report.single_shot_totals())?;

    if cfg.rounds > 1 {
        writeln!(out)?;
        write_categories(
            out,
            &format!("cumulative after {} rounds", cfg.rounds),
            &report.cumulative,
        )?;
    }

    if let Some(mc) = &report.mc.run {
        writeln!(out)?;
        writeln!(out, "monte carlo ({} trials, seed {})", mc.trials, mc.seed)?;
        writeln!(
            out,
            "  {:<22} {:>10} {:>10} {:>10}",
            "category", "count", "frequency", "exact"
        )?;
        for row in &mc.categories {
            writeln!(
                out,
                "  {:<22} {:>10} {:>10} {:>10}",
                row.category,
                row.count,
                fixed6(row.frequency),
                fixed6(row.exact)
            )?;
        }
    }
    Ok(())
}

pub(crate) fn write_json(report: &JsonReport, out: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, report)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    pattern: &'a str,
    probability: f64,
    post_alpha_re: Option<f64>,
    post_alpha_im: Option<f64>,
    post_beta_re: Option<f64>,
    post_beta_im: Option<f64>,
    category: &'a str,
    fidelity: Option<f64>,
}

pub(crate) fn write_csv(report: &JsonReport, out: &mut dyn Write) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    for row in &report.outcomes {
        let post = row.post_atom.as_ref();
        writer.serialize(CsvRow {
            pattern: &row.pattern,
            probability: row.probability,
            post_alpha_re: post.map(|p| p.alpha[0]),
            post_alpha_im: post.map(|p| p.alpha[1]),
            post_beta_re: post.map(|p| p.beta[0]),
            post_beta_im: post.map(|p| p.beta[1]),
            category: &row.category,
            fidelity: row.fidelity,
        })?;
    }
    writer.flush()?;
    Ok(())
}
