//! Option resolution: command-line flags override config-file keys, and
//! every run logs the fully resolved configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use paracoh::classify::{Solver, SolverConfig};
use paracoh::coherence::CoherenceConfig;

/// Flags shared by every subcommand; all optional here, each command
/// requires what it needs after the config file is merged in.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Key-value config file; flags take precedence over its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Paragraph corpus (JSON Lines) or tagged corpus for build-tagger.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    /// WordNet database directory.
    #[arg(long, global = true)]
    pub wordnet: Option<PathBuf>,
    /// Trained tagger model file.
    #[arg(long, global = true)]
    pub tagger_model: Option<PathBuf>,
    /// Tag set file (one tag per line); defaults to the built-in 44 tags.
    #[arg(long, global = true)]
    pub tag_set: Option<PathBuf>,
    /// Function word list (one word per line); defaults to the built-in list.
    #[arg(long, global = true)]
    pub function_words: Option<PathBuf>,
    /// Feature matrix file (CSV).
    #[arg(long, global = true)]
    pub features: Option<PathBuf>,
    /// Linear model file.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Output path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Classifier: "logistic" or "linear-svm".
    #[arg(long, global = true)]
    pub solver: Option<String>,
    /// Regularization strength C (positive).
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Training epochs (also tagger iterations for build-tagger).
    #[arg(long, global = true)]
    pub epochs: Option<usize>,
    /// Cross-validation folds.
    #[arg(long, global = true)]
    pub folds: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Penalty exponent of the coherence metric.
    #[arg(long, global = true)]
    pub penalty_exponent: Option<f64>,
    /// Similarity threshold below which a matched pair is discarded.
    #[arg(long, global = true)]
    pub match_threshold: Option<f64>,
    /// Worker threads for extraction (0 = available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Baseline method: zipf, posngram or intertextual.
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// N-gram order for the posngram baseline (1..=3).
    #[arg(long, global = true)]
    pub ngram_order: Option<usize>,
}

/// All options after merging flags over the config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub wordnet: Option<PathBuf>,
    pub tagger_model: Option<PathBuf>,
    pub tag_set: Option<PathBuf>,
    pub function_words: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub solver: Solver,
    pub c: f64,
    pub epochs: usize,
    pub folds: usize,
    pub seed: u64,
    pub penalty_exponent: f64,
    pub match_threshold: f64,
    pub jobs: usize,
    pub method: Option<String>,
    pub ngram_order: usize,
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once(char::is_whitespace) else {
            bail!(
                "config file {} line {}: expected \"key value\"",
                path.display(),
                idx + 1
            );
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    /// Merges flag values over config-file entries and fills defaults.
    pub fn resolve(args: &CommonArgs) -> Result<RunConfig> {
        let file = match &args.config {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };
        let lookup =
            |keys: &[&str]| -> Option<String> { keys.iter().find_map(|k| file.get(*k).cloned()) };
        let path_of = |flag: &Option<PathBuf>, keys: &[&str]| -> Option<PathBuf> {
            flag.clone().or_else(|| lookup(keys).map(PathBuf::from))
        };
        macro_rules! numeric {
            ($flag:expr, $key:literal, $default:expr, $ty:ty) => {
                match &$flag {
                    Some(v) => *v,
                    None => match lookup(&[$key]) {
                        Some(raw) => raw
                            .parse::<$ty>()
                            .with_context(|| format!("config key {}: bad value {raw:?}", $key))?,
                        None => $default,
                    },
                }
            };
        }
        let solver_name = args
            .solver
            .clone()
            .or_else(|| lookup(&["solver"]))
            .unwrap_or_else(|| "logistic".to_string());
        let config = RunConfig {
            corpus: path_of(&args.corpus, &["corpus"]),
            wordnet: path_of(&args.wordnet, &["wordnet"]),
            tagger_model: path_of(&args.tagger_model, &["tagger_model"]),
            tag_set: path_of(&args.tag_set, &["tag_set", "tag_set_path"]),
            function_words: path_of(&args.function_words, &["function_words"]),
            features: path_of(&args.features, &["features"]),
            model: path_of(&args.model, &["model"]),
            out: path_of(&args.out, &["out"]),
            solver: Solver::parse(&solver_name).map_err(|e| anyhow::anyhow!("{e}"))?,
            c: numeric!(args.c, "c", 1.0, f64),
            epochs: numeric!(args.epochs, "epochs", 50, usize),
            folds: numeric!(args.folds, "folds", 10, usize),
            seed: numeric!(args.seed, "seed", 42, u64),
            penalty_exponent: numeric!(args.penalty_exponent, "penalty_exponent", 3.0, f64),
            match_threshold: numeric!(args.match_threshold, "match_threshold", 0.0, f64),
            jobs: numeric!(args.jobs, "jobs", 0, usize),
            method: args.method.clone().or_else(|| lookup(&["method"])),
            ngram_order: numeric!(args.ngram_order, "ngram_order", 2, usize),
        };
        Ok(config)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            solver: self.solver,
            c: self.c,
            epochs: self.epochs,
            seed: self.seed,
        }
    }

    pub fn coherence_config(&self) -> CoherenceConfig {
        CoherenceConfig {
            penalty_exponent: self.penalty_exponent,
            match_threshold: self.match_threshold,
        }
    }

    /// The fully resolved configuration, one "key value" line each.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut put = |key: &str, value: String| {
            let _ = writeln!(out, "{key} {value}");
        };
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "-".to_string())
        };
        put("corpus", path(&self.corpus));
        put("wordnet", path(&self.wordnet));
        put("tagger_model", path(&self.tagger_model));
        put("tag_set", path(&self.tag_set));
        put("function_words", path(&self.function_words));
        put("features", path(&self.features));
        put("model", path(&self.model));
        put("out", path(&self.out));
        put("solver", self.solver.as_str().to_string());
        put("c", self.c.to_string());
        put("epochs", self.epochs.to_string());
        put("folds", self.folds.to_string());
        put("seed", self.seed.to_string());
        put("penalty_exponent", self.penalty_exponent.to_string());
        put("match_threshold", self.match_threshold.to_string());
        put("jobs", self.jobs.to_string());
        put(
            "method",
            self.method.clone().unwrap_or_else(|| "-".to_string()),
        );
        put("ngram_order", self.ngram_order.to_string());
        out
    }
}
