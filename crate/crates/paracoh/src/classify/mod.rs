//! Linear classification of coherence feature vectors.
//!
//! Two solvers behind one interface: L2-regularized logistic regression and
//! a linear SVM (hinge loss), both fitted by seeded epoch-based stochastic
//! gradient descent over standardized features. Scores are signed distances
//! with the convention positive => machine-translated.

mod eval;

pub use eval::{
    cross_validate, equal_error_rate, rank_pos_pairs, stratified_folds, EvalReport, FoldMetrics,
    PairRanking,
};

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{FeatureMatrix, Label};
use crate::util::{format_exact, list_id};

/// Floor for stored standard deviations so constant features stay scalable.
pub const SCALE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Logistic,
    LinearSvm,
}

impl Solver {
    pub fn as_str(&self) -> &'static str {
        match self {
            Solver::Logistic => "logistic",
            Solver::LinearSvm => "linear-svm",
        }
    }

    pub fn parse(s: &str) -> Result<Solver, ClassifyError> {
        match s {
            "logistic" => Ok(Solver::Logistic),
            "linear-svm" => Ok(Solver::LinearSvm),
            other => Err(ClassifyError::BadConfig(format!(
                "unknown solver {other:?} (expected \"logistic\" or \"linear-svm\")"
            ))),
        }
    }
}

/// Solver hyperparameters; `seed` controls example shuffling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub solver: Solver,
    pub c: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            solver: Solver::Logistic,
            c: 1.0,
            epochs: 50,
            seed: 42,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<(), ClassifyError> {
        if self.c <= 0.0 || !self.c.is_finite() {
            return Err(ClassifyError::BadConfig(format!(
                "regularization strength C must be positive, got {}",
                self.c
            )));
        }
        if self.epochs == 0 {
            return Err(ClassifyError::BadConfig("epochs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error("training data contains a single class only")]
    SingleClass,
    #[error("row {id:?} is unlabeled; training requires labels")]
    UnlabeledRow { id: String },
    #[error("need at least {needed} rows per class, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("vector length {got} does not match the model's {expected} features")]
    LengthMismatch { expected: usize, got: usize },
    #[error("scores and labels differ in length or are empty")]
    BadScoreInput,
    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("model file {path}, line {line}: {message}")]
    BadModelFile {
        path: String,
        line: usize,
        message: String,
    },
}

/// A trained linear model with its feature standardization.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub feature_names: Vec<String>,
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Per-feature (mean, standard deviation) fitted on the training rows;
    /// deviations are stored as `max(sd, SCALE_EPSILON)`.
    pub scaling: Vec<(f64, f64)>,
    pub solver: Solver,
    pub c: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl LinearModel {
    /// Stable identifier of the feature list this model was trained on.
    pub fn feature_set_id(&self) -> String {
        feature_set_id(&self.feature_names)
    }
}

/// Stable identifier of an ordered feature-name list.
pub fn feature_set_id(names: &[String]) -> String {
    list_id(names)
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn label_sign(label: Label) -> f64 {
    match label {
        Label::Machine => 1.0,
        Label::Human => -1.0,
    }
}

fn check_labeled(matrix: &FeatureMatrix) -> Result<Vec<Label>, ClassifyError> {
    let mut labels = Vec::with_capacity(matrix.rows.len());
    for row in &matrix.rows {
        match row.label {
            Some(label) => labels.push(label),
            None => return Err(ClassifyError::UnlabeledRow { id: row.id.clone() }),
        }
    }
    Ok(labels)
}

/// Fits standardization on the rows, then minimizes the L2-regularized
/// logistic or hinge objective by seeded SGD. Deterministic per seed.
pub fn train(matrix: &FeatureMatrix, config: &SolverConfig) -> Result<LinearModel, ClassifyError> {
    config.validate()?;
    let labels = check_labeled(matrix)?;
    if matrix.rows.len() < 2 {
        return Err(ClassifyError::TooFewRows {
            needed: 1,
            got: matrix.rows.len(),
        });
    }
    if labels.iter().all(|l| *l == labels[0]) {
        return Err(ClassifyError::SingleClass);
    }
    let n = matrix.rows.len();
    let dim = matrix.feature_names.len();

    // Standardization over the training rows.
    let mut scaling = vec![(0.0f64, 0.0f64); dim];
    for row in &matrix.rows {
        for (j, v) in row.values.iter().enumerate() {
            scaling[j].0 += v;
        }
    }
    for s in &mut scaling {
        s.0 /= n as f64;
    }
    for row in &matrix.rows {
        for (j, v) in row.values.iter().enumerate() {
            let d = v - scaling[j].0;
            scaling[j].1 += d * d;
        }
    }
    for s in &mut scaling {
        s.1 = (s.1 / n as f64).sqrt().max(SCALE_EPSILON);
    }

    let standardized: Vec<Vec<f64>> = matrix
        .rows
        .iter()
        .map(|row| {
            row.values
                .iter()
                .enumerate()
                .map(|(j, v)| (v - scaling[j].0) / scaling[j].1)
                .collect()
        })
        .collect();

    let alpha = 1.0 / (config.c * n as f64);
    let eta0 = 1.0;
    let mut weights = vec![0.0f64; dim];
    let mut bias = 0.0f64;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut t = 0u64;
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = eta0 / (1.0 + eta0 * alpha * t as f64);
            let z = &standardized[i];
            let y = label_sign(labels[i]);
            let f: f64 = weights.iter().zip(z).map(|(w, x)| w * x).sum::<f64>() + bias;
            let g = match config.solver {
                Solver::Logistic => -y * sigmoid(-y * f),
                Solver::LinearSvm => {
                    if y * f < 1.0 {
                        -y
                    } else {
                        0.0
                    }
                }
            };
            for (w, x) in weights.iter_mut().zip(z) {
                *w -= eta * (alpha * *w + g * x);
            }
            bias -= eta * g;
        }
    }
    Ok(LinearModel {
        feature_names: matrix.feature_names.clone(),
        weights,
        bias,
        scaling,
        solver: config.solver,
        c: config.c,
        epochs: config.epochs,
        seed: config.seed,
    })
}

/// Signed decision value for one raw feature vector; positive means
/// machine-translated.
pub fn predict_score(model: &LinearModel, values: &[f64]) -> Result<f64, ClassifyError> {
    if values.len() != model.weights.len() {
        return Err(ClassifyError::LengthMismatch {
            expected: model.weights.len(),
            got: values.len(),
        });
    }
    let mut score = model.bias;
    for ((v, (mean, sd)), w) in values.iter().zip(&model.scaling).zip(&model.weights) {
        score += w * ((v - mean) / sd);
    }
    Ok(score)
}

/// Label at the zero-threshold decision boundary.
pub fn predict_label(model: &LinearModel, values: &[f64]) -> Result<Label, ClassifyError> {
    Ok(if predict_score(model, values)? > 0.0 {
        Label::Machine
    } else {
        Label::Human
    })
}

/// Writes the model as tab-separated text that reloads bit-exactly.
pub fn save_model(model: &LinearModel, path: impl AsRef<Path>) -> Result<(), ClassifyError> {
    let path = path.as_ref();
    let io_err = |e: std::io::Error| ClassifyError::Io {
        path: path.display().to_string(),
        source: e,
    };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    writeln!(out, "solver\t{}", model.solver.as_str()).map_err(io_err)?;
    writeln!(out, "c\t{}", format_exact(model.c)).map_err(io_err)?;
    writeln!(out, "epochs\t{}", model.epochs).map_err(io_err)?;
    writeln!(out, "seed\t{}", model.seed).map_err(io_err)?;
    writeln!(out, "bias\t{}", format_exact(model.bias)).map_err(io_err)?;
    for (i, name) in model.feature_names.iter().enumerate() {
        let (mean, sd) = model.scaling[i];
        writeln!(
            out,
            "feature\t{name}\t{}\t{}\t{}",
            format_exact(mean),
            format_exact(sd),
            format_exact(model.weights[i])
        )
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Loads a model written by [`save_model`].
pub fn load_model(path: impl AsRef<Path>) -> Result<LinearModel, ClassifyError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| ClassifyError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let bad = |line: usize, message: &str| ClassifyError::BadModelFile {
        path: path.display().to_string(),
        line,
        message: message.to_string(),
    };
    let mut solver = None;
    let mut c = None;
    let mut epochs = None;
    let mut seed = None;
    let mut bias = None;
    let mut feature_names = Vec::new();
    let mut scaling = Vec::new();
    let mut weights = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            ["solver", v] => {
                solver = Some(Solver::parse(v).map_err(|e| bad(lineno, &e.to_string()))?)
            }
            ["c", v] => c = Some(v.parse().map_err(|_| bad(lineno, "c is not a number"))?),
            ["epochs", v] => {
                epochs = Some(
                    v.parse()
                        .map_err(|_| bad(lineno, "epochs is not a number"))?,
                )
            }
            ["seed", v] => seed = Some(v.parse().map_err(|_| bad(lineno, "seed is not a number"))?),
            ["bias", v] => bias = Some(v.parse().map_err(|_| bad(lineno, "bias is not a number"))?),
            ["feature", name, mean, sd, weight] => {
                feature_names.push(name.to_string());
                let mean: f64 = mean
                    .parse()
                    .map_err(|_| bad(lineno, "mean is not a number"))?;
                let sd: f64 = sd.parse().map_err(|_| bad(lineno, "sd is not a number"))?;
                let w: f64 = weight
                    .parse()
                    .map_err(|_| bad(lineno, "weight is not a number"))?;
                scaling.push((mean, sd));
                weights.push(w);
            }
            _ => return Err(bad(lineno, "unrecognized record")),
        }
    }
    Ok(LinearModel {
        feature_names,
        weights,
        bias: bias.ok_or_else(|| bad(0, "missing bias"))?,
        scaling,
        solver: solver.ok_or_else(|| bad(0, "missing solver"))?,
        c: c.ok_or_else(|| bad(0, "missing c"))?,
        epochs: epochs.ok_or_else(|| bad(0, "missing epochs"))?,
        seed: seed.ok_or_else(|| bad(0, "missing seed"))?,
    })
}
