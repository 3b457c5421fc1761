//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured numbers (run with `--nocapture` to see them).

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs;
use std::path::PathBuf;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use paracoh::baselines::default_function_words;
use paracoh::baselines::{
    intertextual_distance, pos_ngram_features, zipf_fit, FrequencySpectrum, NgramVocab,
};
use paracoh::classify::{cross_validate, equal_error_rate, rank_pos_pairs, SolverConfig};
use paracoh::coherence::{
    assign_hungarian, extract_features, filter_by_pos, match_words, penalty, pos_mat, pos_mat_raw,
    CoherenceConfig, Side,
};
use paracoh::corpus::{Corpus, FeatureMatrix, FeatureRow, Label, LabeledParagraph};
use paracoh::nlp::{train_tagger, Sentence, TaggedCorpus, Token};
use paracoh::pipeline::{coherence_matrix, process_corpus, zipf_matrix};
use paracoh::tagset::{PosPair, TagSet};
use paracoh::wordnet::{load_wordnet, path_similarity, Similarity, SynsetGraph};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn miniwn() -> SynsetGraph {
    load_wordnet(fixture("miniwn")).unwrap()
}

fn tok(surface: &str, pos: &str, lemma: &str) -> Token {
    Token::new(surface, pos, lemma)
}

fn sentence(tokens: Vec<Token>) -> Sentence {
    let raw = tokens
        .iter()
        .map(|t| t.surface.clone())
        .collect::<Vec<_>>()
        .join(" ");
    Sentence { tokens, raw }
}

// =====================================================================
// Criterion 1: worked-example regression.
// =====================================================================

#[test]
fn acceptance_01_worked_example_regression() {
    let graph = miniwn();
    let ts = TagSet::default_44();

    // "With instant feedback, the computer grades exercises."
    let s_h2 = sentence(vec![
        tok("With", "IN", "with"),
        tok("instant", "JJ", "instant"),
        tok("feedback", "NN", "feedback"),
        tok(",", "COMMA", ","),
        tok("the", "DT", "the"),
        tok("computer", "NN", "computer"),
        tok("grades", "VBZ", "grade"),
        tok("exercises", "NNS", "exercise"),
        tok(".", ".", "."),
    ]);
    // A later sentence whose only plural noun is again "exercises".
    let s_h4 = sentence(vec![
        tok("The", "DT", "the"),
        tok("computer", "NN", "computer"),
        tok("grades", "VBZ", "grade"),
        tok("these", "DT", "these"),
        tok("exercises", "NNS", "exercise"),
        tok("immediately", "RB", "immediately"),
        tok(".", ".", "."),
    ]);
    let nns = PosPair::new("NNS", "NNS", &ts).unwrap();
    let left = filter_by_pos(&s_h2, &nns, Side::Left);
    let right = filter_by_pos(&s_h4, &nns, Side::Right);
    let matched = match_words(&left, &right, &graph, 0.0);
    assert_eq!(pos_mat_raw(&matched), 1.0, "single identical plural noun");
    assert_eq!(penalty(&matched, 3.0).unwrap(), 0.0);
    assert_eq!(pos_mat(&matched, 3.0), 1.0);

    // "The third idea that we have is instant feedback."
    let s_h1 = sentence(vec![
        tok("The", "DT", "the"),
        tok("third", "JJ", "third"),
        tok("idea", "NN", "idea"),
        tok("that", "WDT", "that"),
        tok("we", "PRP", "we"),
        tok("have", "VBP", "have"),
        tok("is", "VBZ", "be"),
        tok("instant", "JJ", "instant"),
        tok("feedback", "NN", "feedback"),
        tok(".", ".", "."),
    ]);
    let jj = PosPair::new("JJ", "JJ", &ts).unwrap();
    let left = filter_by_pos(&s_h1, &jj, Side::Left);
    let right = filter_by_pos(&s_h2, &jj, Side::Right);
    assert_eq!(left.len(), 2, "third and instant");
    assert_eq!(right.len(), 1, "instant");
    let matched = match_words(&left, &right, &graph, 0.0);
    assert_eq!(matched.n, 1);
    assert_eq!(matched.unmatched_left, 1);
    assert_eq!(matched.unmatched_right, 0);
    // As the penalty formula is written (exponent 3).
    assert_eq!(pos_mat(&matched, 3.0), 0.9375);
    // As the worked arithmetic evaluates (exponent 2).
    assert_eq!(pos_mat(&matched, 2.0), 0.875);

    println!(
        "[PASS] criterion 1: plural-noun pair scores 1 exactly; adjective pair scores \
         0.9375 (exponent 3) and 0.875 (exponent 2) exactly"
    );
}

// =====================================================================
// Criterion 2: Hungarian assignment equals brute force.
// =====================================================================

fn brute_force_max(matrix: &[Vec<f64>]) -> f64 {
    fn rec(m: &[Vec<f64>], row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
        if row == m.len() {
            if acc > *best {
                *best = acc;
            }
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                rec(m, row + 1, used, acc + m[row][c], best);
                used[c] = false;
            }
        }
    }
    let rows = matrix.len();
    let cols = matrix[0].len();
    let mut best = f64::NEG_INFINITY;
    if rows <= cols {
        rec(matrix, 0, &mut vec![false; cols], 0.0, &mut best);
    } else {
        let t: Vec<Vec<f64>> = (0..cols)
            .map(|c| (0..rows).map(|r| matrix[r][c]).collect())
            .collect();
        rec(&t, 0, &mut vec![false; rows], 0.0, &mut best);
    }
    best
}

#[test]
fn acceptance_02_hungarian_matches_exhaustive_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let trials = 1200;
    for trial in 0..trials {
        let rows = rng.random_range(1..=6);
        let cols = rng.random_range(1..=6);
        // Dyadic similarity grid keeps all arithmetic exact, so "equal"
        // really means equal.
        let matrix: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        if rng.random_bool(0.1) {
                            -1.0e6 // undefined-similarity sentinel
                        } else {
                            rng.random_range(0..=256) as f64 / 256.0
                        }
                    })
                    .collect()
            })
            .collect();
        let assignment = assign_hungarian(&matrix, true).unwrap();
        assert_eq!(assignment.len(), rows.min(cols), "trial {trial}");
        let total: f64 = assignment.iter().map(|&(r, c)| matrix[r][c]).sum();
        let best = brute_force_max(&matrix);
        assert_eq!(total, best, "trial {trial}: {matrix:?}");
    }
    println!("[PASS] criterion 2: {trials} random matrices up to 6x6 match the exhaustive maximum exactly");
}

// =====================================================================
// Criterion 3: path similarity equals 1/(1+d) with d from an
// independent parse and breadth-first search of the fixture.
// =====================================================================

#[derive(Default)]
struct OracleCategory {
    index: HashMap<String, Vec<u64>>,
    exceptions: HashMap<String, Vec<String>>,
    neighbors: HashMap<u64, Vec<u64>>,
    roots: Vec<u64>,
    synsets: HashSet<u64>,
}

/// Minimal independent reading of one fixture category.
fn oracle_parse(dir: &std::path::Path, name: &str, type_chars: &[char]) -> OracleCategory {
    let mut cat = OracleCategory::default();
    let data = fs::read_to_string(dir.join(format!("data.{name}"))).unwrap();
    let mut hypernyms: HashMap<u64, Vec<u64>> = HashMap::new();
    for line in data.lines() {
        if line.starts_with(' ') || line.is_empty() {
            continue;
        }
        let head = line.split('|').next().unwrap();
        let fields: Vec<&str> = head.split_whitespace().collect();
        let offset: u64 = fields[0].parse().unwrap();
        assert!(type_chars.contains(&fields[2].chars().next().unwrap()));
        let w_cnt = usize::from_str_radix(fields[3], 16).unwrap();
        let mut at = 4 + 2 * w_cnt;
        let p_cnt: usize = fields[at].parse().unwrap();
        at += 1;
        for _ in 0..p_cnt {
            let symbol = fields[at];
            let target: u64 = fields[at + 1].parse().unwrap();
            if symbol == "@" || symbol == "@i" {
                hypernyms.entry(offset).or_default().push(target);
            }
            at += 4;
        }
        cat.synsets.insert(offset);
    }
    for (&from, targets) in &hypernyms {
        for &to in targets {
            cat.neighbors.entry(from).or_default().push(to);
            cat.neighbors.entry(to).or_default().push(from);
        }
    }
    for &synset in &cat.synsets {
        if !hypernyms.contains_key(&synset) {
            cat.roots.push(synset);
        }
    }
    let index = fs::read_to_string(dir.join(format!("index.{name}"))).unwrap();
    for line in index.lines() {
        if line.starts_with(' ') || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let lemma = fields[0].to_string();
        let synset_cnt: usize = fields[2].parse().unwrap();
        let p_cnt: usize = fields[3].parse().unwrap();
        let offsets: Vec<u64> = fields[4 + p_cnt + 2..4 + p_cnt + 2 + synset_cnt]
            .iter()
            .map(|f| f.parse().unwrap())
            .collect();
        cat.index.insert(lemma, offsets);
    }
    let exc = fs::read_to_string(dir.join(format!("{name}.exc"))).unwrap();
    for line in exc.lines() {
        if line.starts_with(' ') || line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let form = fields.next().unwrap().to_string();
        cat.exceptions
            .insert(form, fields.map(str::to_string).collect());
    }
    cat
}

impl OracleCategory {
    fn detach(&self, lower: &str, rules: &[(&str, &str)]) -> Vec<String> {
        let mut out = Vec::new();
        for (suffix, repl) in rules {
            if lower.len() > suffix.len() {
                if let Some(stem) = lower.strip_suffix(suffix) {
                    out.push(format!("{stem}{repl}"));
                }
            }
        }
        out
    }

    fn lookup(&self, lemma: &str, rules: &[(&str, &str)]) -> Vec<u64> {
        let lower = lemma.to_lowercase();
        let mut found: Vec<u64> = Vec::new();
        let add = |form: &str, found: &mut Vec<u64>| {
            if let Some(offsets) = self.index.get(form) {
                for &o in offsets {
                    if !found.contains(&o) {
                        found.push(o);
                    }
                }
            }
        };
        add(&lower, &mut found);
        if let Some(bases) = self.exceptions.get(&lower) {
            for base in bases {
                add(base, &mut found);
            }
        }
        for candidate in self.detach(&lower, rules) {
            add(&candidate, &mut found);
        }
        found
    }

    /// Multi-source BFS; `use_root` adds a virtual node above the roots.
    fn bfs(&self, from: &[u64], to: &[u64], use_root: bool) -> Option<u32> {
        const ROOT: u64 = u64::MAX;
        let targets: HashSet<u64> = to.iter().copied().collect();
        let mut seen: HashSet<u64> = HashSet::new();
        let mut queue: VecDeque<(u64, u32)> = VecDeque::new();
        for &s in from {
            if seen.insert(s) {
                queue.push_back((s, 0));
            }
        }
        while let Some((node, d)) = queue.pop_front() {
            if targets.contains(&node) {
                return Some(d);
            }
            let mut nexts: Vec<u64> = Vec::new();
            if node == ROOT {
                nexts.extend(self.roots.iter().copied());
            } else {
                if let Some(n) = self.neighbors.get(&node) {
                    nexts.extend(n.iter().copied());
                }
                if use_root && self.roots.contains(&node) {
                    nexts.push(ROOT);
                }
            }
            for next in nexts {
                if seen.insert(next) {
                    queue.push_back((next, d + 1));
                }
            }
        }
        None
    }
}

#[test]
fn acceptance_03_path_similarity_matches_bfs_oracle() {
    let dir = fixture("miniwn");
    let graph = load_wordnet(&dir).unwrap();
    let noun_rules: &[(&str, &str)] = &[
        ("s", ""),
        ("ses", "s"),
        ("xes", "x"),
        ("zes", "z"),
        ("ches", "ch"),
        ("shes", "sh"),
        ("men", "man"),
        ("ies", "y"),
    ];
    let verb_rules: &[(&str, &str)] = &[
        ("s", ""),
        ("ies", "y"),
        ("es", "e"),
        ("es", ""),
        ("ed", "e"),
        ("ed", ""),
        ("ing", "e"),
        ("ing", ""),
    ];
    let noun = oracle_parse(&dir, "noun", &['n']);
    let verb = oracle_parse(&dir, "verb", &['v']);

    // Every lemma of the fixture with a representative tag per category.
    let mut entries: Vec<(String, &'static str)> = Vec::new();
    for lemma in noun.index.keys() {
        entries.push((lemma.clone(), "NN"));
    }
    for lemma in verb.index.keys() {
        entries.push((lemma.clone(), "VB"));
    }
    entries.sort();

    let expected = |la: &str, ta: &str, lb: &str, tb: &str| -> Similarity {
        if la == lb {
            return Similarity::Defined(1.0);
        }
        let mut best: Option<f64> = None;
        let verb_wanted = ta == "VB" || tb == "VB";
        let noun_wanted = ta == "NN" || tb == "NN";
        if noun_wanted {
            let sa = noun.lookup(la, noun_rules);
            let sb = noun.lookup(lb, noun_rules);
            if !sa.is_empty() && !sb.is_empty() {
                if let Some(d) = noun.bfs(&sa, &sb, true) {
                    let sim = 1.0 / (1.0 + d as f64);
                    best = Some(best.map_or(sim, |b: f64| b.max(sim)));
                }
            }
        }
        if verb_wanted {
            let sa = verb.lookup(la, verb_rules);
            let sb = verb.lookup(lb, verb_rules);
            if !sa.is_empty() && !sb.is_empty() {
                if let Some(d) = verb.bfs(&sa, &sb, true) {
                    let sim = 1.0 / (1.0 + d as f64);
                    best = Some(best.map_or(sim, |b: f64| b.max(sim)));
                }
            }
        }
        best.map_or(Similarity::Undefined, Similarity::Defined)
    };

    let mut checked = 0usize;
    for (la, ta) in &entries {
        for (lb, tb) in &entries {
            let got = path_similarity(la, ta, lb, tb, &graph);
            let want = expected(la, ta, lb, tb);
            assert_eq!(got, want, "{la}/{ta} vs {lb}/{tb}");
            if la == lb {
                assert_eq!(got, Similarity::Defined(1.0));
            }
            checked += 1;
        }
    }
    println!("[PASS] criterion 3: {checked} fixture lemma pairs equal 1/(1+d) from the independent BFS oracle");
}

// =====================================================================
// Criterion 4: metric bounds and operand-swap symmetry.
// =====================================================================

#[test]
fn acceptance_04_metric_bounds_and_symmetry() {
    let graph = miniwn();
    let ts = TagSet::default_44();
    let lemmas = [
        "exercise", "task", "job", "computer", "machine", "student", "teacher", "person", "grade",
        "rate", "judge", "sleep", "rest", "the", "instant", "qwzrt", "blorp",
    ];
    let tags = ["NN", "NNS", "VB", "VBZ", "VBG", "JJ", "RB", "DT", "IN"];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let trials = 10_000;
    let make_tokens = |rng: &mut ChaCha8Rng| -> Vec<Token> {
        let len = rng.random_range(0..=6);
        (0..len)
            .map(|_| {
                let lemma = *lemmas.choose(rng).unwrap();
                let tag = *tags.choose(rng).unwrap();
                Token::new(lemma, tag, lemma)
            })
            .collect()
    };
    for trial in 0..trials {
        let a = make_tokens(&mut rng);
        let b = make_tokens(&mut rng);
        let exponent = [1.0, 2.0, 3.0, 4.0][trial % 4];
        let ab = match_words(&a, &b, &graph, 0.0);
        let ba = match_words(&b, &a, &graph, 0.0);
        let v_ab = pos_mat(&ab, exponent);
        let v_ba = pos_mat(&ba, exponent);
        assert!(
            v_ab.to_bits() == v_ba.to_bits(),
            "trial {trial}: swap changed pos_mat"
        );
        assert!((0.0..=1.0).contains(&v_ab), "trial {trial}: pos_mat {v_ab}");
        assert!((0.0..=1.0).contains(&pos_mat_raw(&ab)), "trial {trial}");
        if !(ab.left_kept.is_empty() && ab.right_kept.is_empty()) {
            let p = penalty(&ab, exponent).unwrap();
            assert!((0.0..=0.5).contains(&p), "trial {trial}: penalty {p}");
        }
    }
    // ParaCoh bounds over randomized paragraphs.
    let cfg = CoherenceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..200 {
        let m = rng.random_range(1..=5);
        let sentences: Vec<Sentence> = (0..m)
            .map(|_| {
                let mut tokens = make_tokens(&mut rng);
                if tokens.is_empty() {
                    tokens.push(Token::new("the", "DT", "the"));
                }
                sentence(tokens)
            })
            .collect();
        let p = paracoh::nlp::ProcessedParagraph {
            id: "r".into(),
            sentences,
            label: None,
        };
        let vector = extract_features(&p, &ts, &graph, &cfg).unwrap();
        assert!(vector.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }
    println!("[PASS] criterion 4: {trials} random sentence pairs stay in bounds with exact swap symmetry");
}

// =====================================================================
// Criterion 5: feature dimensionality.
// =====================================================================

#[test]
fn acceptance_05_feature_dimensionality() {
    let ts = TagSet::default_44();
    assert_eq!(ts.len(), 44);
    assert_eq!(ts.pair_count(), 990);

    let graph = load_wordnet(fixture("toywn")).unwrap();
    let corpus = TaggedCorpus::from_file(fixture("tagged_corpus.tsv")).unwrap();
    let tagger = train_tagger(&corpus, &ts, 5, 1).unwrap();
    let multi = LabeledParagraph {
        id: "multi".into(),
        text: "The computer grades the exercises. The teacher grades the exercises quickly.".into(),
        label: Some(Label::Human),
        language: None,
    };
    let single = LabeledParagraph {
        id: "single".into(),
        text: "The computer grades the exercises.".into(),
        label: None,
        language: None,
    };
    let processed = process_corpus(
        &Corpus {
            entries: vec![multi, single],
        },
        &tagger,
        &graph,
        1,
    )
    .unwrap();
    let matrix = coherence_matrix(&processed, &ts, &graph, &CoherenceConfig::default(), 1).unwrap();
    assert_eq!(matrix.feature_names.len(), 990);
    for row in &matrix.rows {
        assert_eq!(row.values.len(), 990);
    }
    assert!(matrix.rows[0].values.iter().any(|v| *v > 0.0));
    assert!(
        matrix.rows[1].values.iter().all(|v| *v == 0.0),
        "single-sentence paragraph must be the zero vector"
    );
    println!("[PASS] criterion 5: default tag set yields exactly 990 features; single-sentence vector is all zero");
}

// =====================================================================
// Criterion 6: protocol determinism and stratification.
// =====================================================================

#[test]
fn acceptance_06_protocol_determinism_and_stratification() {
    // 2000-row synthetic matrix, unbalanced 1100/900.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let rows: Vec<FeatureRow> = (0..2000)
        .map(|i| {
            let label = if i < 1100 {
                Label::Human
            } else {
                Label::Machine
            };
            let center = match label {
                Label::Human => 0.7,
                Label::Machine => 0.4,
            };
            FeatureRow {
                id: format!("r{i}"),
                label: Some(label),
                values: vec![
                    center + rng.random::<f64>() * 0.3,
                    rng.random::<f64>(),
                    rng.random::<f64>(),
                ],
            }
        })
        .collect();
    let matrix = FeatureMatrix {
        feature_names: vec!["signal".into(), "noise_a".into(), "noise_b".into()],
        rows,
    };
    let solver = SolverConfig::default();

    let report_a = cross_validate(&matrix, 10, &solver, 99).unwrap();
    let report_b = cross_validate(&matrix, 10, &solver, 99).unwrap();
    assert_eq!(
        report_a.to_text().into_bytes(),
        report_b.to_text().into_bytes()
    );

    let rank_a = rank_pos_pairs(&matrix, 10, &solver, 99).unwrap();
    let rank_b = rank_pos_pairs(&matrix, 10, &solver, 99).unwrap();
    let render = |r: &[paracoh::classify::PairRanking]| -> Vec<u8> {
        r.iter()
            .map(|e| format!("{}\t{:.17e}\t{:.17e}\n", e.name, e.accuracy, e.eer))
            .collect::<String>()
            .into_bytes()
    };
    assert_eq!(render(&rank_a), render(&rank_b));

    // Stratification: per-fold class counts within +-1.
    let labels: Vec<Label> = matrix.rows.iter().map(|r| r.label.unwrap()).collect();
    let folds = paracoh::classify::stratified_folds(&labels, 10, 99);
    let mut seen = vec![false; matrix.rows.len()];
    for class in [Label::Human, Label::Machine] {
        let mut counts = vec![0usize; 10];
        for (i, fold) in folds.iter().enumerate() {
            assert!(*fold < 10);
            if labels[i] == class {
                counts[*fold] += 1;
                assert!(!seen[i], "row in two folds");
                seen[i] = true;
            }
        }
        let min = counts.iter().min().unwrap();
        let max = counts.iter().max().unwrap();
        assert!(max - min <= 1, "{class:?}: {counts:?}");
    }
    assert!(seen.iter().all(|s| *s), "every row in exactly one fold");
    println!("[PASS] criterion 6: repeated runs byte-identical; 2000-row stratification within +-1 per fold");
}

// =====================================================================
// Criterion 7: synthetic separation against the zipf baseline.
// =====================================================================

mod synth {
    use super::*;

    pub const OBJECTS: &[&[(&str, &str)]] = &[
        &[
            ("exercise", "exercises"),
            ("task", "tasks"),
            ("assignment", "assignments"),
            ("drill", "drills"),
        ],
        &[
            ("book", "books"),
            ("article", "articles"),
            ("essay", "essays"),
            ("report", "reports"),
        ],
        &[
            ("concept", "concepts"),
            ("notion", "notions"),
            ("thought", "thoughts"),
            ("plan", "plans"),
        ],
        &[
            ("class", "classes"),
            ("lesson", "lessons"),
            ("lecture", "lectures"),
            ("seminar", "seminars"),
        ],
    ];
    pub const DEVICES: &[&str] = &["computer", "machine", "processor", "tablet"];
    pub const PERSONS: &[&str] = &[
        "student",
        "learner",
        "pupil",
        "teacher",
        "instructor",
        "tutor",
    ];
    /// (base, third person, gerund)
    pub const VERBS: &[&[(&str, &str, &str)]] = &[
        &[
            ("grade", "grades", "grading"),
            ("evaluate", "evaluates", "evaluating"),
            ("rate", "rates", "rating"),
            ("assess", "assesses", "assessing"),
        ],
        &[
            ("make", "makes", "making"),
            ("produce", "produces", "producing"),
            ("generate", "generates", "generating"),
            ("build", "builds", "building"),
        ],
        &[
            ("say", "says", "saying"),
            ("state", "states", "stating"),
            ("tell", "tells", "telling"),
            ("explain", "explains", "explaining"),
        ],
        &[
            ("give", "gives", "giving"),
            ("provide", "provides", "providing"),
            ("offer", "offers", "offering"),
            ("deliver", "delivers", "delivering"),
        ],
        &[
            ("study", "studies", "studying"),
            ("practice", "practices", "practicing"),
            ("review", "reviews", "reviewing"),
        ],
    ];
    pub const ADJS: &[&str] = &[
        "simple", "easy", "new", "fresh", "good", "quick", "fast", "instant",
    ];
    pub const ADVS: &[&str] = &["quickly", "well", "often", "immediately"];
    pub const COURSES: &[&str] = &["lesson", "class", "lecture", "seminar"];
    pub const FILLERS: &[&str] = &[
        "Students like instant feedback.",
        "It's a good idea.",
        "We have a new plan.",
        "There is a new lesson today.",
        "Two students read three essays.",
        "The essays were graded immediately.",
        "Not every answer is fresh.",
        "The feedback was immediate.",
        "The best scores come from practice.",
    ];

    /// A content slot and its chosen cluster member index.
    #[derive(Clone, Copy)]
    pub enum Slot {
        ObjPlural,
        Device,
        Person,
        VerbThird,
        VerbBase,
        VerbGerund,
    }

    pub struct Topic {
        pub obj_cluster: usize,
        pub obj: usize,
        pub device: usize,
        pub person: usize,
        pub verb_cluster: usize,
        pub verb: usize,
        pub adj: &'static str,
        pub adj2: &'static str,
        pub adv: &'static str,
        pub course: &'static str,
    }

    impl Topic {
        pub fn word(&self, slot: Slot, member: usize) -> String {
            match slot {
                Slot::ObjPlural => OBJECTS[self.obj_cluster][member].1.to_string(),
                Slot::Device => DEVICES[member].to_string(),
                Slot::Person => PERSONS[member].to_string(),
                Slot::VerbThird => VERBS[self.verb_cluster][member].1.to_string(),
                Slot::VerbBase => VERBS[self.verb_cluster][member].0.to_string(),
                Slot::VerbGerund => {
                    let g = VERBS[self.verb_cluster][member].2;
                    let mut c = g.chars();
                    c.next().unwrap().to_uppercase().collect::<String>() + c.as_str()
                }
            }
        }

        pub fn member(&self, slot: Slot) -> usize {
            match slot {
                Slot::ObjPlural => self.obj,
                Slot::Device => self.device,
                Slot::Person => self.person,
                Slot::VerbThird | Slot::VerbBase | Slot::VerbGerund => self.verb,
            }
        }

        pub fn cluster_len(&self, slot: Slot) -> usize {
            match slot {
                Slot::ObjPlural => OBJECTS[self.obj_cluster].len(),
                Slot::Device => DEVICES.len(),
                Slot::Person => PERSONS.len(),
                Slot::VerbThird | Slot::VerbBase | Slot::VerbGerund => {
                    VERBS[self.verb_cluster].len()
                }
            }
        }
    }

    /// Renders one frame; `pick` chooses the cluster member for each
    /// content-slot occurrence (the human text always keeps the topic
    /// member, the machine text sometimes swaps to a sibling).
    pub fn render_frame(
        frame: usize,
        topic: &Topic,
        mut pick: impl FnMut(&Topic, Slot) -> usize,
    ) -> String {
        let mut slot = |s: Slot| topic.word(s, pick(topic, s));
        match frame {
            0 => format!(
                "The {} {} the {}.",
                slot(Slot::Device),
                slot(Slot::VerbThird),
                slot(Slot::ObjPlural)
            ),
            1 => format!(
                "The {} {} the {} {}.",
                slot(Slot::Person),
                slot(Slot::VerbThird),
                slot(Slot::ObjPlural),
                topic.adv
            ),
            2 => format!(
                "The {} and the {} {} the {}.",
                slot(Slot::Person),
                slot(Slot::Device),
                slot(Slot::VerbBase),
                slot(Slot::ObjPlural)
            ),
            3 => format!(
                "{} the {} is a {} {}.",
                slot(Slot::VerbGerund),
                slot(Slot::ObjPlural),
                topic.adj,
                topic.course
            ),
            4 => format!(
                "With the {}, the {} {} the {}.",
                slot(Slot::Device),
                slot(Slot::Person),
                slot(Slot::VerbThird),
                slot(Slot::ObjPlural)
            ),
            5 => format!(
                "The {} are {} and {}.",
                slot(Slot::ObjPlural),
                topic.adj,
                topic.adj2
            ),
            _ => format!(
                "A {} likes the {}.",
                slot(Slot::Person),
                slot(Slot::ObjPlural)
            ),
        }
    }

    /// Builds the parallel corpus: `pairs` human paragraphs and their
    /// sibling-substituted machine counterparts.
    pub fn generate(pairs: usize, swap_probability: f64, seed: u64) -> Corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut entries = Vec::with_capacity(2 * pairs);
        for i in 0..pairs {
            let topic = Topic {
                obj_cluster: rng.random_range(0..OBJECTS.len()),
                obj: rng.random_range(0..4),
                device: rng.random_range(0..DEVICES.len()),
                person: rng.random_range(0..PERSONS.len()),
                verb_cluster: rng.random_range(0..VERBS.len()),
                verb: 0,
                adj: ADJS.choose(&mut rng).unwrap(),
                adj2: ADJS.choose(&mut rng).unwrap(),
                adv: ADVS.choose(&mut rng).unwrap(),
                course: COURSES.choose(&mut rng).unwrap(),
            };
            let topic = Topic {
                verb: rng.random_range(0..VERBS[topic.verb_cluster].len()),
                ..topic
            };
            let n_frames = rng.random_range(4..=7);
            let frames: Vec<usize> = (0..n_frames).map(|_| rng.random_range(0..7)).collect();
            let fillers: Vec<&str> = (0..rng.random_range(1..=2))
                .map(|_| *FILLERS.choose(&mut rng).unwrap())
                .collect();

            let human: Vec<String> = frames
                .iter()
                .map(|&f| render_frame(f, &topic, |t, s| t.member(s)))
                .chain(fillers.iter().map(|f| f.to_string()))
                .collect();
            // The machine rendering swaps each content occurrence to a
            // random cluster sibling with the given probability.
            let machine: Vec<String> = frames
                .iter()
                .map(|&f| {
                    render_frame(f, &topic, |t, s| {
                        if rng.random_bool(swap_probability) {
                            let len = t.cluster_len(s);
                            let mut m = rng.random_range(0..len);
                            if m == t.member(s) {
                                m = (m + 1) % len;
                            }
                            m
                        } else {
                            t.member(s)
                        }
                    })
                })
                .chain(fillers.iter().map(|f| f.to_string()))
                .collect();

            entries.push(LabeledParagraph {
                id: format!("h{i}"),
                text: human.join(" "),
                label: Some(Label::Human),
                language: Some("en".into()),
            });
            entries.push(LabeledParagraph {
                id: format!("m{i}"),
                text: machine.join(" "),
                label: Some(Label::Machine),
                language: Some("en".into()),
            });
        }
        Corpus { entries }
    }
}

#[test]
fn acceptance_07_synthetic_separation_beats_zipf_baseline() {
    let ts = TagSet::default_44();
    let graph = load_wordnet(fixture("toywn")).unwrap();
    let tagged = TaggedCorpus::from_file(fixture("tagged_corpus.tsv")).unwrap();
    let tagger = train_tagger(&tagged, &ts, 5, 1).unwrap();

    let corpus = synth::generate(200, 0.5, 7);
    assert_eq!(corpus.len(), 400);
    let processed = process_corpus(&corpus, &tagger, &graph, 0).unwrap();

    let solver = SolverConfig::default();
    let coherence =
        coherence_matrix(&processed, &ts, &graph, &CoherenceConfig::default(), 0).unwrap();
    let report_coh = cross_validate(&coherence, 10, &solver, 7).unwrap();

    let zipf = zipf_matrix(&processed).unwrap();
    let report_zipf = cross_validate(&zipf, 10, &solver, 7).unwrap();

    assert!(
        report_coh.accuracy > 0.65,
        "coherence accuracy {} must exceed 0.65",
        report_coh.accuracy
    );
    assert!(
        report_coh.accuracy > report_zipf.accuracy,
        "coherence accuracy {} must exceed the zipf baseline {}",
        report_coh.accuracy,
        report_zipf.accuracy
    );
    println!(
        "[PASS] criterion 7: coherence accuracy {:.3} (EER {:.3}) beats zipf accuracy {:.3} (EER {:.3}) on 400 synthetic paragraphs",
        report_coh.accuracy, report_coh.eer, report_zipf.accuracy, report_zipf.eer
    );
}

// =====================================================================
// Criterion 8: equal error rate against a brute-force sweep oracle.
// =====================================================================

/// Naive threshold sweep: every midpoint plus infinities, rates counted
/// directly, crossing interpolated linearly.
fn eer_oracle(scores: &[f64], labels: &[Label]) -> f64 {
    let humans = labels.iter().filter(|l| **l == Label::Human).count() as f64;
    let machines = labels.len() as f64 - humans;
    let mut distinct: Vec<f64> = scores.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mut thresholds = vec![f64::NEG_INFINITY];
    for w in distinct.windows(2) {
        thresholds.push((w[0] + w[1]) / 2.0);
    }
    thresholds.push(f64::INFINITY);
    let rates = |t: f64| -> (f64, f64) {
        let fp = scores
            .iter()
            .zip(labels)
            .filter(|(s, l)| **l == Label::Human && **s > t)
            .count() as f64;
        let fnn = scores
            .iter()
            .zip(labels)
            .filter(|(s, l)| **l == Label::Machine && **s <= t)
            .count() as f64;
        (fp / humans, fnn / machines)
    };
    let mut prev = rates(thresholds[0]);
    if prev.0 == prev.1 {
        return prev.0;
    }
    for &t in &thresholds[1..] {
        let cur = rates(t);
        if cur.0 == cur.1 {
            return cur.0;
        }
        if prev.0 - prev.1 > 0.0 && cur.0 - cur.1 < 0.0 {
            let d0 = prev.0 - prev.1;
            let d1 = cur.0 - cur.1;
            return prev.0 + d0 / (d0 - d1) * (cur.0 - prev.0);
        }
        prev = cur;
    }
    unreachable!("curves always cross");
}

#[test]
fn acceptance_08_equal_error_rate_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let trials = 1200;
    for trial in 0..trials {
        let n = rng.random_range(2..=60);
        let mut scores = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        loop {
            scores.clear();
            labels.clear();
            for _ in 0..n {
                // Mix a coarse grid (many ties) with continuous scores.
                let s = if rng.random_bool(0.5) {
                    rng.random_range(-6..=6) as f64 / 3.0
                } else {
                    rng.random::<f64>() * 4.0 - 2.0
                };
                scores.push(s);
                labels.push(if rng.random_bool(0.5) {
                    Label::Machine
                } else {
                    Label::Human
                });
            }
            let h = labels.iter().filter(|l| **l == Label::Human).count();
            if h > 0 && h < n {
                break;
            }
        }
        let got = equal_error_rate(&scores, &labels).unwrap();
        let want = eer_oracle(&scores, &labels);
        assert!(
            (got - want).abs() <= 1e-9,
            "trial {trial}: {got} vs oracle {want}"
        );
    }
    // Pinned edge cases.
    let separated = equal_error_rate(
        &[-2.0, -1.5, 1.0, 2.0],
        &[Label::Human, Label::Human, Label::Machine, Label::Machine],
    )
    .unwrap();
    assert_eq!(separated, 0.0);
    let constant = equal_error_rate(
        &[0.3, 0.3, 0.3, 0.3],
        &[Label::Human, Label::Machine, Label::Human, Label::Machine],
    )
    .unwrap();
    assert_eq!(constant, 0.5);
    println!("[PASS] criterion 8: {trials} random score sets match the sweep oracle within 1e-9; edge cases exact");
}

// =====================================================================
// Criterion 9: baseline sanity.
// =====================================================================

#[test]
fn acceptance_09_baseline_sanity() {
    // Inter-textual distance: identity and disjointness.
    let a = FrequencySpectrum::from_counts(
        [("alpha".to_string(), 5u64), ("beta".to_string(), 2)].into_iter(),
    );
    let b = FrequencySpectrum::from_counts(
        [("gamma".to_string(), 3u64), ("delta".to_string(), 4)].into_iter(),
    );
    assert_eq!(intertextual_distance(&a, &a).unwrap(), 0.0);
    assert_eq!(intertextual_distance(&a, &b).unwrap(), 1.0);

    // Zipf slope on an exact 1/rank spectrum.
    let counts: Vec<(String, u64)> = (1..=8u64).map(|r| (format!("w{r}"), 27720 / r)).collect();
    let fit = zipf_fit(&FrequencySpectrum::from_counts(counts.into_iter())).unwrap();
    assert!(
        (fit.slope + 1.0).abs() <= 1e-9,
        "slope {} must be -1 within 1e-9",
        fit.slope
    );

    // N-gram vectors are probability vectors.
    let ts = TagSet::default_44();
    let graph = load_wordnet(fixture("toywn")).unwrap();
    let tagged = TaggedCorpus::from_file(fixture("tagged_corpus.tsv")).unwrap();
    let tagger = train_tagger(&tagged, &ts, 5, 1).unwrap();
    let corpus = synth::generate(20, 0.5, 99);
    let processed = process_corpus(&corpus, &tagger, &graph, 1).unwrap();
    let fw = default_function_words();
    for n in 1..=3usize {
        let vocab = NgramVocab::fit(&processed, n, fw).unwrap();
        for p in &processed {
            let v = pos_ngram_features(p, &vocab, fw).unwrap();
            let sum: f64 = v.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-12, "order {n}: sum {sum}");
            assert!(v.iter().all(|x| *x >= 0.0));
        }
    }
    println!("[PASS] criterion 9: distance identity/disjointness, zipf slope -1 within 1e-9, n-gram vectors sum to 1 within 1e-12");
}
