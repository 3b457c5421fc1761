//! Evaluation protocol: equal error rate, stratified k-fold cross-validation
//! and per-feature ranking.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{predict_score, train, ClassifyError, SolverConfig};
use crate::corpus::{FeatureMatrix, FeatureRow, Label};
use crate::util::format_exact;

/// Accuracy and equal error rate of one cross-validation fold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldMetrics {
    pub accuracy: f64,
    pub eer: f64,
}

/// Aggregated cross-validation results. The headline `eer` is computed on
/// the pooled test scores; the per-fold values are also kept so the mean
/// fold EER can be reported alongside it.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    pub eer: f64,
    pub per_fold: Vec<FoldMetrics>,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    pub folds: usize,
    pub seed: u64,
}

impl EvalReport {
    pub fn mean_fold_accuracy(&self) -> f64 {
        self.per_fold.iter().map(|f| f.accuracy).sum::<f64>() / self.per_fold.len().max(1) as f64
    }

    pub fn mean_fold_eer(&self) -> f64 {
        self.per_fold.iter().map(|f| f.eer).sum::<f64>() / self.per_fold.len().max(1) as f64
    }

    /// Deterministic tab-separated rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("folds\t{}\n", self.folds));
        out.push_str(&format!("seed\t{}\n", self.seed));
        out.push_str(&format!("accuracy\t{}\n", format_exact(self.accuracy)));
        out.push_str(&format!("eer_pooled\t{}\n", format_exact(self.eer)));
        if !self.per_fold.is_empty() {
            out.push_str(&format!(
                "accuracy_fold_mean\t{}\n",
                format_exact(self.mean_fold_accuracy())
            ));
            out.push_str(&format!(
                "eer_fold_mean\t{}\n",
                format_exact(self.mean_fold_eer())
            ));
        }
        out.push_str(&format!(
            "confusion\ttp={} fp={} tn={} fn={}\n",
            self.tp, self.fp, self.tn, self.fn_
        ));
        for (i, fold) in self.per_fold.iter().enumerate() {
            out.push_str(&format!(
                "fold\t{}\t{}\t{}\n",
                i + 1,
                format_exact(fold.accuracy),
                format_exact(fold.eer)
            ));
        }
        out
    }
}

/// One feature column's standalone cross-validation result.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRanking {
    pub name: String,
    pub accuracy: f64,
    pub eer: f64,
}

/// Equal error rate of a score/label set.
///
/// Thresholds are placed below, between and above the distinct scores
/// (midpoints); the false-positive rate (human scored as machine) and the
/// false-negative rate (machine scored as human) cross somewhere along that
/// sweep, with linear interpolation when no threshold hits the crossing
/// exactly.
pub fn equal_error_rate(scores: &[f64], labels: &[Label]) -> Result<f64, ClassifyError> {
    if scores.is_empty() || scores.len() != labels.len() {
        return Err(ClassifyError::BadScoreInput);
    }
    let humans = labels.iter().filter(|l| **l == Label::Human).count();
    let machines = labels.len() - humans;
    if humans == 0 || machines == 0 {
        return Err(ClassifyError::SingleClass);
    }
    let mut sorted: Vec<(f64, Label)> =
        scores.iter().copied().zip(labels.iter().copied()).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Cumulative class counts at each distinct score.
    let mut human_le: Vec<usize> = Vec::new();
    let mut machine_le: Vec<usize> = Vec::new();
    let mut h = 0usize;
    let mut m = 0usize;
    let mut i = 0usize;
    while i < sorted.len() {
        let score = sorted[i].0;
        while i < sorted.len() && sorted[i].0 == score {
            match sorted[i].1 {
                Label::Human => h += 1,
                Label::Machine => m += 1,
            }
            i += 1;
        }
        human_le.push(h);
        machine_le.push(m);
    }

    // Threshold j sits after the j-th distinct score (j = 0 is below all).
    let fpr = |j: usize| -> f64 {
        let le = if j == 0 { 0 } else { human_le[j - 1] };
        (humans - le) as f64 / humans as f64
    };
    let fnr = |j: usize| -> f64 {
        let le = if j == 0 { 0 } else { machine_le[j - 1] };
        le as f64 / machines as f64
    };
    let steps = human_le.len() + 1;
    let mut prev = (fpr(0), fnr(0));
    if prev.0 == prev.1 {
        return Ok(prev.0);
    }
    for j in 1..steps {
        let cur = (fpr(j), fnr(j));
        let d_prev = prev.0 - prev.1;
        let d_cur = cur.0 - cur.1;
        if d_cur == 0.0 {
            return Ok(cur.0);
        }
        if d_prev > 0.0 && d_cur < 0.0 {
            let lambda = d_prev / (d_prev - d_cur);
            return Ok(prev.0 + lambda * (cur.0 - prev.0));
        }
        prev = cur;
    }
    // FPR starts at 1 and falls to 0 while FNR rises from 0 to 1, so the
    // sweep always crosses; this point is unreachable for valid input.
    unreachable!("the error-rate curves always cross")
}

/// Stratified fold assignment: returns `fold[i]` for every row. Shuffling is
/// seeded, and per-fold class counts differ by at most one.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; labels.len()];
    for class in [Label::Human, Label::Machine] {
        let mut indices: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == class)
            .map(|(i, _)| i)
            .collect();
        indices.shuffle(&mut rng);
        for (pos, row) in indices.into_iter().enumerate() {
            assignment[row] = pos % k;
        }
    }
    assignment
}

fn submatrix(matrix: &FeatureMatrix, keep: impl Fn(usize) -> bool) -> FeatureMatrix {
    FeatureMatrix {
        feature_names: matrix.feature_names.clone(),
        rows: matrix
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, r)| r.clone())
            .collect(),
    }
}

/// Stratified k-fold cross-validation. Scaling is refit on each training
/// fold; the report pools every test prediction. Deterministic per seed.
pub fn cross_validate(
    matrix: &FeatureMatrix,
    k: usize,
    config: &SolverConfig,
    seed: u64,
) -> Result<EvalReport, ClassifyError> {
    if k < 2 {
        return Err(ClassifyError::BadConfig(format!(
            "cross-validation needs at least 2 folds, got {k}"
        )));
    }
    let labels = super::check_labeled(matrix)?;
    let humans = labels.iter().filter(|l| **l == Label::Human).count();
    let machines = labels.len() - humans;
    if humans == 0 || machines == 0 {
        return Err(ClassifyError::SingleClass);
    }
    if humans < k || machines < k {
        return Err(ClassifyError::TooFewRows {
            needed: k,
            got: humans.min(machines),
        });
    }
    let folds = stratified_folds(&labels, k, seed);
    let mut scores = vec![0.0f64; matrix.rows.len()];
    let mut per_fold = Vec::with_capacity(k);
    for fold in 0..k {
        let train_matrix = submatrix(matrix, |i| folds[i] != fold);
        let fold_config = SolverConfig {
            seed: config.seed.wrapping_add(fold as u64),
            ..*config
        };
        let model = train(&train_matrix, &fold_config)?;
        let mut fold_scores = Vec::new();
        let mut fold_labels = Vec::new();
        for (i, row) in matrix.rows.iter().enumerate() {
            if folds[i] == fold {
                let score = predict_score(&model, &row.values)?;
                scores[i] = score;
                fold_scores.push(score);
                fold_labels.push(labels[i]);
            }
        }
        let correct = fold_scores
            .iter()
            .zip(&fold_labels)
            .filter(|(s, l)| (**s > 0.0) == (**l == Label::Machine))
            .count();
        per_fold.push(FoldMetrics {
            accuracy: correct as f64 / fold_scores.len() as f64,
            eer: equal_error_rate(&fold_scores, &fold_labels)?,
        });
    }
    let mut tp = 0;
    let mut fp = 0;
    let mut tn = 0;
    let mut fn_ = 0;
    for (score, label) in scores.iter().zip(&labels) {
        let predicted_machine = *score > 0.0;
        match (predicted_machine, label) {
            (true, Label::Machine) => tp += 1,
            (true, Label::Human) => fp += 1,
            (false, Label::Human) => tn += 1,
            (false, Label::Machine) => fn_ += 1,
        }
    }
    Ok(EvalReport {
        accuracy: (tp + tn) as f64 / matrix.rows.len() as f64,
        eer: equal_error_rate(&scores, &labels)?,
        per_fold,
        tp,
        fp,
        tn,
        fn_,
        folds: k,
        seed,
    })
}

/// Cross-validates every feature column on its own and ranks the columns by
/// accuracy (ties: lower EER, then name). Columns are independent, so they
/// are evaluated in parallel with a deterministic merge.
pub fn rank_pos_pairs(
    matrix: &FeatureMatrix,
    k: usize,
    config: &SolverConfig,
    seed: u64,
) -> Result<Vec<PairRanking>, ClassifyError> {
    let results: Result<Vec<PairRanking>, ClassifyError> = (0..matrix.feature_names.len())
        .into_par_iter()
        .map(|col| {
            let single = FeatureMatrix {
                feature_names: vec![matrix.feature_names[col].clone()],
                rows: matrix
                    .rows
                    .iter()
                    .map(|row| FeatureRow {
                        id: row.id.clone(),
                        label: row.label,
                        values: vec![row.values[col]],
                    })
                    .collect(),
            };
            let report = cross_validate(&single, k, config, seed)?;
            Ok(PairRanking {
                name: matrix.feature_names[col].clone(),
                accuracy: report.accuracy,
                eer: report.eer,
            })
        })
        .collect();
    let mut results = results?;
    results.sort_by(|a, b| {
        b.accuracy
            .total_cmp(&a.accuracy)
            .then(a.eer.total_cmp(&b.eer))
            .then(a.name.cmp(&b.name))
    });
    Ok(results)
}
