//! Behavior of the synset graph on the shipped fixtures.

use std::fs;
use std::path::PathBuf;

use paracoh::wordnet::{load_wordnet, path_similarity, Category, Similarity, WordnetError};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn sim(a: &str, pa: &str, b: &str, pb: &str) -> Similarity {
    let graph = load_wordnet(fixture("miniwn")).unwrap();
    path_similarity(a, pa, b, pb, &graph)
}

#[test]
fn mini_fixture_counts() {
    let graph = load_wordnet(fixture("miniwn")).unwrap();
    assert_eq!(graph.synset_count(Category::Noun), 9);
    assert_eq!(graph.synset_count(Category::Verb), 3);
    assert_eq!(graph.synset_count(Category::Adjective), 0);
    assert_eq!(graph.synset_count(Category::Adverb), 0);
    assert_eq!(graph.hypernym_edge_count(Category::Noun), 8);
    assert_eq!(graph.hypernym_edge_count(Category::Verb), 1);
}

#[test]
fn loading_twice_gives_identical_structure() {
    let a = load_wordnet(fixture("miniwn")).unwrap();
    let b = load_wordnet(fixture("miniwn")).unwrap();
    for cat in [
        Category::Noun,
        Category::Verb,
        Category::Adjective,
        Category::Adverb,
    ] {
        assert_eq!(a.synset_count(cat), b.synset_count(cat));
        assert_eq!(a.hypernym_edge_count(cat), b.hypernym_edge_count(cat));
        assert_eq!(a.lemmas(cat), b.lemmas(cat));
        for lemma in a.lemmas(cat) {
            assert_eq!(
                a.synsets_of(lemma, cat),
                b.synsets_of(lemma, cat),
                "{lemma}"
            );
        }
    }
}

#[test]
fn synset_lookup_applies_morphology_and_case() {
    let graph = load_wordnet(fixture("miniwn")).unwrap();
    let direct = graph.synsets_of("exercise", Category::Noun);
    assert_eq!(direct.len(), 1);
    assert_eq!(graph.synsets_of("exercises", Category::Noun), direct);
    assert_eq!(graph.synsets_of("Exercise", Category::Noun), direct);
    assert!(graph.synsets_of("qwzrt", Category::Noun).is_empty());
    // "job" names two synsets (a sense inside "activity" and one in "task").
    assert_eq!(graph.synsets_of("job", Category::Noun).len(), 2);
}

#[test]
fn sibling_nouns_score_one_third() {
    assert_eq!(
        sim("exercise", "NN", "task", "NN"),
        Similarity::Defined(1.0 / 3.0)
    );
    assert_eq!(
        sim("student", "NNS", "teacher", "NN"),
        Similarity::Defined(1.0 / 3.0)
    );
}

#[test]
fn same_synset_lemmas_score_one() {
    // "task" and "job" share a synset: distance 0.
    assert_eq!(sim("task", "NN", "job", "NN"), Similarity::Defined(1.0));
}

#[test]
fn multiple_senses_take_the_best_path() {
    // "job" also names the "activity" synset, one step from "exercise".
    assert_eq!(sim("job", "NN", "exercise", "NN"), Similarity::Defined(0.5));
}

#[test]
fn verb_forest_connects_through_the_virtual_root() {
    // grade -> judge -> (root) -> sleep: three steps.
    assert_eq!(sim("grade", "VB", "sleep", "VB"), Similarity::Defined(0.25));
    assert_eq!(sim("grade", "VBZ", "judge", "VB"), Similarity::Defined(0.5));
}

#[test]
fn longer_noun_paths_score_lower() {
    // exercise - activity - entity - machine - computer: four steps.
    assert_eq!(
        sim("exercise", "NN", "computer", "NN"),
        Similarity::Defined(0.2)
    );
    // Deeper separation means strictly smaller similarity.
    let near = sim("exercise", "NN", "activity", "NN").value().unwrap();
    let far = sim("exercise", "NN", "computer", "NN").value().unwrap();
    assert!(near > far);
}

#[test]
fn cross_category_tags_search_both_categories() {
    // VBG maps to verbs, NN to nouns; both lemmas exist only as nouns, so
    // the noun hierarchy decides.
    assert_eq!(
        sim("exercise", "VBG", "task", "NN"),
        Similarity::Defined(1.0 / 3.0)
    );
    // Neither side shares a category with the other: undefined.
    assert_eq!(sim("judge", "VB", "exercise", "NN"), Similarity::Undefined);
}

#[test]
fn inflected_forms_reach_their_lemma_synsets() {
    assert_eq!(
        sim("exercises", "NNS", "tasks", "NNS"),
        Similarity::Defined(1.0 / 3.0)
    );
    assert_eq!(
        sim("graded", "VBD", "judge", "VB"),
        Similarity::Defined(0.5)
    );
}

#[test]
fn empty_directory_lists_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_wordnet(dir.path()).unwrap_err();
    match err {
        WordnetError::MissingFiles { files, .. } => {
            for name in ["index.noun", "data.verb", "adj.exc", "index.adv"] {
                assert!(files.contains(name), "{files}");
            }
        }
        other => panic!("expected MissingFiles, got {other}"),
    }
}

#[test]
fn corrupt_record_reports_file_and_offset() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixture("miniwn")).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    // Append a malformed record to data.noun.
    let data_noun = dir.path().join("data.noun");
    let mut text = fs::read_to_string(&data_noun).unwrap();
    let offset = text.len();
    text.push_str("99999999 00 n zz broken | bad record\n");
    fs::write(&data_noun, text).unwrap();
    let err = load_wordnet(dir.path()).unwrap_err();
    match err {
        WordnetError::Parse {
            file, offset: at, ..
        } => {
            assert!(file.ends_with("data.noun"), "{file}");
            assert_eq!(at, offset);
        }
        other => panic!("expected Parse, got {other}"),
    }
}

#[test]
fn dangling_hypernym_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixture("miniwn")).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let data_verb = dir.path().join("data.verb");
    let text = fs::read_to_string(&data_verb).unwrap();
    // Point the "grade" synset's hypernym at a nonexistent offset.
    let broken = text.replace("@ 00000076 v 0000", "@ 00009999 v 0000");
    assert_ne!(text, broken);
    fs::write(&data_verb, broken).unwrap();
    let err = load_wordnet(dir.path()).unwrap_err();
    assert!(err.to_string().contains("data.verb"), "{err}");
}

#[test]
fn toy_fixture_loads_with_all_categories() {
    let graph = load_wordnet(fixture("toywn")).unwrap();
    assert_eq!(graph.synset_count(Category::Noun), 43);
    assert_eq!(graph.synset_count(Category::Verb), 24);
    assert_eq!(graph.synset_count(Category::Adjective), 6);
    assert_eq!(graph.synset_count(Category::Adverb), 4);
    // Same-synset adjectives relate; different-synset adjectives do not.
    let graph2 = graph;
    assert_eq!(
        path_similarity("quick", "JJ", "fast", "JJ", &graph2),
        Similarity::Defined(1.0)
    );
    assert_eq!(
        path_similarity("quick", "JJ", "good", "JJ", &graph2),
        Similarity::Undefined
    );
    // Verb siblings under "judge".
    assert_eq!(
        path_similarity("grade", "VBZ", "evaluate", "VBZ", &graph2),
        Similarity::Defined(1.0 / 3.0)
    );
    // A noun/verb homograph finds the verb route.
    assert_eq!(
        path_similarity("rate", "VB", "assess", "VB", &graph2),
        Similarity::Defined(1.0 / 3.0)
    );
}
