//! Subcommand implementations.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use paracoh::baselines;
use paracoh::classify::{
    self, cross_validate, feature_set_id, rank_pos_pairs, EvalReport, PairRanking,
};
use paracoh::coherence::extract_features;
use paracoh::corpus::{self, Corpus, FeatureMatrix, FeatureRow, Label};
use paracoh::nlp::{self, process_paragraph, TaggedCorpus, TaggerModel};
use paracoh::pipeline;
use paracoh::tagset::TagSet;
use paracoh::wordnet::{load_wordnet, SynsetGraph};

use crate::config::RunConfig;

/// A usage or resource problem: exit status 2 instead of 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(message.into()))
}

fn require(path: &Option<PathBuf>, what: &str) -> Result<PathBuf> {
    path.clone()
        .ok_or_else(|| usage(format!("missing required option --{what}")))
}

fn require_file(path: &Option<PathBuf>, what: &str) -> Result<PathBuf> {
    let path = require(path, what)?;
    if !path.is_file() {
        return Err(usage(format!("{what} file not found: {}", path.display())));
    }
    Ok(path)
}

fn require_dir(path: &Option<PathBuf>, what: &str) -> Result<PathBuf> {
    let path = require(path, what)?;
    if !path.is_dir() {
        return Err(usage(format!(
            "{what} directory not found: {}",
            path.display()
        )));
    }
    Ok(path)
}

/// Writes through a temporary sibling and renames, so failures leave no
/// partial output file.
fn write_atomic(path: &Path, write: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
    let tmp = path.with_extension("tmp");
    match write(&tmp) {
        Ok(()) => {
            fs::rename(&tmp, path)
                .with_context(|| format!("cannot move output into place at {}", path.display()))?;
            Ok(())
        }
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}

fn load_tag_set(config: &RunConfig) -> Result<TagSet> {
    match &config.tag_set {
        Some(path) => {
            if !path.is_file() {
                return Err(usage(format!("tag-set file not found: {}", path.display())));
            }
            TagSet::from_file(path).map_err(|e| anyhow!(e))
        }
        None => Ok(TagSet::default_44()),
    }
}

fn load_function_words(config: &RunConfig) -> Result<HashSet<String>> {
    match &config.function_words {
        Some(path) => {
            if !path.is_file() {
                return Err(usage(format!(
                    "function-words file not found: {}",
                    path.display()
                )));
            }
            baselines::load_function_words(path).map_err(|e| anyhow!(e))
        }
        None => Ok(baselines::default_function_words().clone()),
    }
}

struct Resources {
    tagger: TaggerModel,
    graph: SynsetGraph,
    tag_set: TagSet,
}

fn load_resources(config: &RunConfig) -> Result<Resources> {
    let wordnet_dir = require_dir(&config.wordnet, "wordnet")?;
    let tagger_path = require_file(&config.tagger_model, "tagger-model")?;
    let graph = load_wordnet(&wordnet_dir).map_err(|e| anyhow!(e))?;
    let tagger = nlp::load_tagger(&tagger_path).map_err(|e| anyhow!(e))?;
    let tag_set = load_tag_set(config)?;
    Ok(Resources {
        tagger,
        graph,
        tag_set,
    })
}

fn load_labeled_corpus(config: &RunConfig) -> Result<Corpus> {
    let path = require_file(&config.corpus, "corpus")?;
    corpus::load_corpus(&path).map_err(|e| anyhow!(e))
}

pub fn cmd_build_tagger(config: &RunConfig) -> Result<()> {
    let corpus_path = require_file(&config.corpus, "corpus")?;
    let out = require(&config.out, "out")?;
    let tag_set = load_tag_set(config)?;
    let tagged = TaggedCorpus::from_file(&corpus_path).map_err(|e| anyhow!(e))?;
    let model =
        nlp::train_tagger(&tagged, &tag_set, config.epochs, config.seed).map_err(|e| anyhow!(e))?;
    write_atomic(&out, |tmp| {
        nlp::save_tagger(&model, tmp).map_err(|e| anyhow!(e))
    })?;
    println!(
        "trained tagger on {} sentences; training-set accuracy {:.4}",
        model.metadata().sentence_count,
        model.metadata().train_accuracy
    );
    Ok(())
}

pub fn cmd_extract(config: &RunConfig) -> Result<()> {
    let out = require(&config.out, "out")?;
    let resources = load_resources(config)?;
    let corpus = load_labeled_corpus(config)?;
    let coherence = config.coherence_config();
    let tag_set = &resources.tag_set;
    let rows: Result<Vec<FeatureRow>> = pipeline::with_jobs(config.jobs, || {
        corpus
            .entries
            .par_iter()
            .map(|p| {
                let started = Instant::now();
                let processed = process_paragraph(p, &resources.tagger, &resources.graph)
                    .map_err(|e| anyhow!("paragraph {:?}: {e}", p.id))?;
                let vector = extract_features(&processed, tag_set, &resources.graph, &coherence)
                    .map_err(|e| anyhow!("paragraph {:?}: {e}", p.id))?;
                eprintln!(
                    "extract {} ({} sentences) in {:.1} ms",
                    p.id,
                    processed.sentence_count(),
                    started.elapsed().as_secs_f64() * 1e3
                );
                Ok(FeatureRow {
                    id: p.id.clone(),
                    label: p.label,
                    values: vector.values,
                })
            })
            .collect()
    });
    let matrix = FeatureMatrix {
        feature_names: tag_set.canonical_pairs().iter().map(|p| p.name()).collect(),
        rows: rows?,
    };
    write_atomic(&out, |tmp| {
        corpus::write_feature_matrix(&matrix, tmp).map_err(|e| anyhow!(e))
    })?;
    eprintln!(
        "wrote {} rows x {} features to {}",
        matrix.rows.len(),
        matrix.feature_names.len(),
        out.display()
    );
    Ok(())
}

pub fn cmd_train(config: &RunConfig) -> Result<()> {
    let features = require_file(&config.features, "features")?;
    let out = require(&config.out, "out")?;
    let matrix = corpus::load_feature_matrix(&features).map_err(|e| anyhow!(e))?;
    let model = classify::train(&matrix, &config.solver_config()).map_err(|e| anyhow!(e))?;
    write_atomic(&out, |tmp| {
        classify::save_model(&model, tmp).map_err(|e| anyhow!(e))
    })?;
    println!(
        "trained {} model on {} rows x {} features",
        model.solver.as_str(),
        matrix.rows.len(),
        matrix.feature_names.len()
    );
    Ok(())
}

fn render_report(
    config: &RunConfig,
    report: &EvalReport,
    ranking: Option<&[PairRanking]>,
) -> String {
    let mut text = String::new();
    text.push_str("# resolved configuration\n");
    for line in config.render().lines() {
        let _ = writeln!(text, "config {line}");
    }
    text.push_str("# evaluation\n");
    text.push_str(&report.to_text());
    if let Some(ranking) = ranking {
        text.push_str("# single-feature ranking: rank name accuracy eer\n");
        for (i, entry) in ranking.iter().enumerate() {
            let _ = writeln!(
                text,
                "rank\t{}\t{}\t{:.6}\t{:.6}",
                i + 1,
                entry.name,
                entry.accuracy,
                entry.eer
            );
        }
    }
    text
}

pub fn cmd_evaluate(config: &RunConfig) -> Result<()> {
    let features = require_file(&config.features, "features")?;
    let out = require(&config.out, "out")?;
    let matrix = corpus::load_feature_matrix(&features).map_err(|e| anyhow!(e))?;
    let solver = config.solver_config();
    let report =
        cross_validate(&matrix, config.folds, &solver, config.seed).map_err(|e| anyhow!(e))?;
    let ranking =
        rank_pos_pairs(&matrix, config.folds, &solver, config.seed).map_err(|e| anyhow!(e))?;
    let text = render_report(config, &report, Some(&ranking));
    write_atomic(&out, |tmp| Ok(fs::write(tmp, &text)?))?;
    println!("ACC {:.4} EER {:.4}", report.accuracy, report.eer);
    Ok(())
}

pub fn cmd_rank_pairs(config: &RunConfig) -> Result<()> {
    let features = require_file(&config.features, "features")?;
    let out = require(&config.out, "out")?;
    let matrix = corpus::load_feature_matrix(&features).map_err(|e| anyhow!(e))?;
    let ranking = rank_pos_pairs(&matrix, config.folds, &config.solver_config(), config.seed)
        .map_err(|e| anyhow!(e))?;
    let mut text = String::from("# rank name accuracy eer\n");
    for (i, entry) in ranking.iter().enumerate() {
        let _ = writeln!(
            text,
            "rank\t{}\t{}\t{:.6}\t{:.6}",
            i + 1,
            entry.name,
            entry.accuracy,
            entry.eer
        );
    }
    write_atomic(&out, |tmp| Ok(fs::write(tmp, &text)?))?;
    if let Some(best) = ranking.first() {
        println!(
            "top pair {} ACC {:.4} EER {:.4}",
            best.name, best.accuracy, best.eer
        );
    }
    Ok(())
}

pub fn cmd_detect(config: &RunConfig) -> Result<()> {
    let model_path = require_file(&config.model, "model")?;
    let resources = load_resources(config)?;
    let corpus = load_labeled_corpus(config)?;
    let model = classify::load_model(&model_path).map_err(|e| anyhow!(e))?;
    let expected: Vec<String> = resources
        .tag_set
        .canonical_pairs()
        .iter()
        .map(|p| p.name())
        .collect();
    if model.feature_names != expected {
        return Err(usage(format!(
            "model features do not match the extraction tag set: \
             model feature-set id {} ({} features), tag set {} yields feature-set id {} ({} features)",
            model.feature_set_id(),
            model.feature_names.len(),
            resources.tag_set.id(),
            feature_set_id(&expected),
            expected.len()
        )));
    }
    let coherence = config.coherence_config();
    let mut lines = String::new();
    let mut human = 0usize;
    let mut machine = 0usize;
    for p in &corpus.entries {
        let processed = process_paragraph(p, &resources.tagger, &resources.graph)
            .map_err(|e| anyhow!("paragraph {:?}: {e}", p.id))?;
        let vector = extract_features(&processed, &resources.tag_set, &resources.graph, &coherence)
            .map_err(|e| anyhow!("paragraph {:?}: {e}", p.id))?;
        let score = classify::predict_score(&model, &vector.values).map_err(|e| anyhow!(e))?;
        let verdict = if score > 0.0 {
            machine += 1;
            Label::Machine
        } else {
            human += 1;
            Label::Human
        };
        let _ = writeln!(lines, "{}\t{:.9e}\t{}", p.id, score, verdict);
    }
    let _ = writeln!(
        lines,
        "# paragraphs {} human {} machine {}",
        corpus.len(),
        human,
        machine
    );
    print!("{lines}");
    if let Some(out) = &config.out {
        write_atomic(out, |tmp| Ok(fs::write(tmp, &lines)?))?;
    }
    Ok(())
}

pub fn cmd_baseline(config: &RunConfig) -> Result<()> {
    let method = config.method.clone().ok_or_else(|| {
        usage("missing required option --method (zipf, posngram or intertextual)")
    })?;
    let out = require(&config.out, "out")?;
    let resources = load_resources(config)?;
    let corpus = load_labeled_corpus(config)?;
    let processed =
        pipeline::process_corpus(&corpus, &resources.tagger, &resources.graph, config.jobs)
            .map_err(|e| anyhow!(e))?;
    let report = match method.as_str() {
        "zipf" => {
            let matrix = pipeline::zipf_matrix(&processed).map_err(|e| anyhow!(e))?;
            eprintln!(
                "zipf matrix: {} rows x {} features",
                matrix.rows.len(),
                matrix.feature_names.len()
            );
            cross_validate(&matrix, config.folds, &config.solver_config(), config.seed)
                .map_err(|e| anyhow!(e))?
        }
        "posngram" => {
            let function_words = load_function_words(config)?;
            let matrix = pipeline::ngram_matrix(&processed, config.ngram_order, &function_words)
                .map_err(|e| anyhow!(e))?;
            eprintln!(
                "posngram matrix: {} rows x {} features",
                matrix.rows.len(),
                matrix.feature_names.len()
            );
            cross_validate(&matrix, config.folds, &config.solver_config(), config.seed)
                .map_err(|e| anyhow!(e))?
        }
        "intertextual" => pipeline::intertextual_loo(&processed).map_err(|e| anyhow!(e))?,
        other => {
            return Err(usage(format!(
                "unknown baseline method {other:?}; usage: --method zipf|posngram|intertextual"
            )))
        }
    };
    let text = render_report(config, &report, None);
    write_atomic(&out, |tmp| Ok(fs::write(tmp, &text)?))?;
    println!(
        "{} ACC {:.4} EER {:.4}",
        method, report.accuracy, report.eer
    );
    Ok(())
}

pub fn run(command: &str, config: &RunConfig) -> Result<()> {
    eprintln!("resolved configuration for {command}:");
    for line in config.render().lines() {
        eprintln!("  {line}");
    }
    match command {
        "build-tagger" => cmd_build_tagger(config),
        "extract" => cmd_extract(config),
        "train" => cmd_train(config),
        "evaluate" => cmd_evaluate(config),
        "rank-pairs" => cmd_rank_pairs(config),
        "detect" => cmd_detect(config),
        "baseline" => cmd_baseline(config),
        other => bail!("unknown command {other}"),
    }
}
