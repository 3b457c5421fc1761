//! WordNet-backed synset graph and lemma-pair path similarity.
//!
//! The graph is loaded from a directory in the standard WordNet 3.0 layout
//! (`index.noun`, `data.noun`, `noun.exc`, ... for the four categories).
//! Similarity between two lemmas is `1 / (1 + d)` where `d` is the shortest
//! undirected hypernym-path length between their closest synsets. A virtual
//! root joins the top-level synsets of the noun and verb hierarchies so that
//! any two nouns, or any two verbs, are connected; adjectives and adverbs
//! carry no hierarchy, so only synset identity (distance 0) relates them.
//! Identical lemmas always score 1.0, in or out of the graph.

mod parse;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::path::Path;
use std::sync::RwLock;

pub use parse::WordnetError;

/// WordNet lexical categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

pub const CATEGORIES: [Category; 4] = [
    Category::Noun,
    Category::Verb,
    Category::Adjective,
    Category::Adverb,
];

impl Category {
    /// Maps a part-of-speech tag to its category: `NN*` nouns, `VB*` verbs,
    /// `JJ*` adjectives, `RB*` adverbs, anything else none.
    pub fn from_tag(tag: &str) -> Option<Category> {
        if tag.starts_with("NN") {
            Some(Category::Noun)
        } else if tag.starts_with("VB") {
            Some(Category::Verb)
        } else if tag.starts_with("JJ") {
            Some(Category::Adjective)
        } else if tag.starts_with("RB") {
            Some(Category::Adverb)
        } else {
            None
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Category::Noun => "noun",
            Category::Verb => "verb",
            Category::Adjective => "adj",
            Category::Adverb => "adv",
        }
    }

    fn index(&self) -> usize {
        *self as usize
    }

    /// Synset type characters accepted in this category's data file.
    fn type_chars(&self) -> &'static [char] {
        match self {
            Category::Noun => &['n'],
            Category::Verb => &['v'],
            Category::Adjective => &['a', 's'],
            Category::Adverb => &['r'],
        }
    }

    /// Nouns and verbs form hierarchies; a virtual root keeps each connected.
    fn has_virtual_root(&self) -> bool {
        matches!(self, Category::Noun | Category::Verb)
    }
}

/// Path similarity of a lemma pair: a value in (0, 1], or undefined when the
/// lemmas differ and share no connected category.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Similarity {
    Defined(f64),
    Undefined,
}

impl Similarity {
    pub fn value(&self) -> Option<f64> {
        match self {
            Similarity::Defined(v) => Some(*v),
            Similarity::Undefined => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Similarity::Defined(_))
    }
}

/// One synset record.
#[derive(Debug, Clone, PartialEq)]
pub struct Synset {
    pub offset: u64,
    pub words: Vec<String>,
    pub hypernyms: Vec<u64>,
}

#[derive(Debug, Default)]
pub(crate) struct CategoryData {
    pub(crate) synsets: HashMap<u64, Synset>,
    /// Undirected hypernym adjacency.
    pub(crate) adjacency: HashMap<u64, Vec<u64>>,
    /// Synsets with no hypernym, in offset order.
    pub(crate) roots: Vec<u64>,
    pub(crate) lemma_index: HashMap<String, Vec<u64>>,
    pub(crate) exceptions: HashMap<String, Vec<String>>,
    pub(crate) hyponyms: HashMap<u64, Vec<u64>>,
    pub(crate) edge_count: usize,
}

/// In-memory synset graph for the four categories, immutable after load.
pub struct SynsetGraph {
    categories: [CategoryData; 4],
    // Memoized lemma-pair similarities; invisible to callers.
    cache: RwLock<HashMap<(String, String, u8), Similarity>>,
}

impl std::fmt::Debug for SynsetGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = f.debug_struct("SynsetGraph");
        for cat in CATEGORIES {
            s.field(cat.name(), &self.synset_count(cat));
        }
        s.finish()
    }
}

/// Node id used for the per-category virtual root during search.
const VIRTUAL_ROOT: u64 = u64::MAX;

impl SynsetGraph {
    pub(crate) fn from_categories(categories: [CategoryData; 4]) -> SynsetGraph {
        SynsetGraph {
            categories,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Builds an empty graph (every category blank). Useful for tests that
    /// only exercise the identical-lemma rule.
    pub fn empty() -> SynsetGraph {
        SynsetGraph::from_categories(Default::default())
    }

    fn data(&self, category: Category) -> &CategoryData {
        &self.categories[category.index()]
    }

    pub fn synset_count(&self, category: Category) -> usize {
        self.data(category).synsets.len()
    }

    /// Number of directed hypernym edges in the category.
    pub fn hypernym_edge_count(&self, category: Category) -> usize {
        self.data(category).edge_count
    }

    pub fn synset(&self, category: Category, offset: u64) -> Option<&Synset> {
        self.data(category).synsets.get(&offset)
    }

    /// Lemmas of the category's index, sorted.
    pub fn lemmas(&self, category: Category) -> Vec<&str> {
        let mut lemmas: Vec<&str> = self
            .data(category)
            .lemma_index
            .keys()
            .map(String::as_str)
            .collect();
        lemmas.sort_unstable();
        lemmas
    }

    pub fn hyponyms_of(&self, category: Category, offset: u64) -> &[u64] {
        self.data(category)
            .hyponyms
            .get(&offset)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Irregular-form entry, if any: maps e.g. `"is"` to `["be"]`.
    pub fn exception(&self, category: Category, form: &str) -> Option<&[String]> {
        self.data(category).exceptions.get(form).map(Vec::as_slice)
    }

    /// True if the exact form is a lemma of the category's index.
    pub fn is_lemma(&self, category: Category, form: &str) -> bool {
        self.data(category).lemma_index.contains_key(form)
    }

    /// Synset offsets of a lemma after exception-list and detachment-rule
    /// normalization; empty when the lemma is unknown. Case-insensitive.
    pub fn synsets_of(&self, lemma: &str, category: Category) -> Vec<u64> {
        let data = self.data(category);
        let lower = lemma.to_lowercase();
        let mut found: BTreeSet<u64> = BTreeSet::new();
        let add = |form: &str, found: &mut BTreeSet<u64>| {
            if let Some(offsets) = data.lemma_index.get(form) {
                found.extend(offsets.iter().copied());
            }
        };
        add(&lower, &mut found);
        if let Some(bases) = data.exceptions.get(&lower) {
            for base in bases {
                add(base, &mut found);
            }
        }
        for candidate in detachment_candidates(&lower, category) {
            add(&candidate, &mut found);
        }
        found.into_iter().collect()
    }

    /// Single-lemma normalization: exception list first, then the form
    /// itself, then detachment rules validated against the index.
    pub fn morphy(&self, form: &str, category: Category) -> Option<String> {
        let data = self.data(category);
        let lower = form.to_lowercase();
        if let Some(bases) = data.exceptions.get(&lower) {
            return bases.first().cloned();
        }
        if data.lemma_index.contains_key(&lower) {
            return Some(lower);
        }
        detachment_candidates(&lower, category)
            .into_iter()
            .find(|c| data.lemma_index.contains_key(c))
    }

    /// Shortest undirected hypernym-path length between the closest synsets
    /// of the two sets, through the category's virtual root when it has one.
    fn shortest_distance(&self, category: Category, from: &[u64], to: &[u64]) -> Option<u32> {
        let data = self.data(category);
        let targets: HashSet<u64> = to.iter().copied().collect();
        let mut visited: HashSet<u64> = HashSet::new();
        let mut queue: VecDeque<(u64, u32)> = VecDeque::new();
        for &s in from {
            if visited.insert(s) {
                queue.push_back((s, 0));
            }
        }
        let use_root = category.has_virtual_root();
        let is_root: HashSet<u64> = if use_root {
            data.roots.iter().copied().collect()
        } else {
            HashSet::new()
        };
        while let Some((node, dist)) = queue.pop_front() {
            if targets.contains(&node) {
                return Some(dist);
            }
            let push = |next: u64, visited: &mut HashSet<u64>, queue: &mut VecDeque<(u64, u32)>| {
                if visited.insert(next) {
                    queue.push_back((next, dist + 1));
                }
            };
            if node == VIRTUAL_ROOT {
                for &r in &data.roots {
                    push(r, &mut visited, &mut queue);
                }
                continue;
            }
            if let Some(neighbors) = data.adjacency.get(&node) {
                for &n in neighbors {
                    push(n, &mut visited, &mut queue);
                }
            }
            if use_root && is_root.contains(&node) {
                push(VIRTUAL_ROOT, &mut visited, &mut queue);
            }
        }
        None
    }
}

/// Loads the four-category database from `dir`.
pub fn load_wordnet(dir: impl AsRef<Path>) -> Result<SynsetGraph, WordnetError> {
    parse::load(dir.as_ref())
}

/// Path similarity between two lemmas given their part-of-speech tags.
///
/// Equal lemmas score exactly 1.0. Otherwise every category named by either
/// tag in which both lemmas have synsets is searched, and the best
/// `1 / (1 + d)` over those categories is returned; `Undefined` when no
/// category connects them.
pub fn path_similarity(
    lemma_a: &str,
    pos_a: &str,
    lemma_b: &str,
    pos_b: &str,
    graph: &SynsetGraph,
) -> Similarity {
    let a = lemma_a.to_lowercase();
    let b = lemma_b.to_lowercase();
    if a == b {
        return Similarity::Defined(1.0);
    }
    let mut mask: u8 = 0;
    for tag in [pos_a, pos_b] {
        if let Some(cat) = Category::from_tag(tag) {
            mask |= 1 << cat.index();
        }
    }
    if mask == 0 {
        return Similarity::Undefined;
    }
    let key = if a <= b {
        (a.clone(), b.clone(), mask)
    } else {
        (b.clone(), a.clone(), mask)
    };
    if let Some(hit) = graph.cache.read().expect("cache lock").get(&key) {
        return *hit;
    }
    let mut best: Option<f64> = None;
    for cat in CATEGORIES {
        if mask & (1 << cat.index()) == 0 {
            continue;
        }
        let sa = graph.synsets_of(&a, cat);
        if sa.is_empty() {
            continue;
        }
        let sb = graph.synsets_of(&b, cat);
        if sb.is_empty() {
            continue;
        }
        if let Some(d) = graph.shortest_distance(cat, &sa, &sb) {
            let sim = 1.0 / (1.0 + d as f64);
            if best.is_none_or(|cur| sim > cur) {
                best = Some(sim);
            }
        }
    }
    let result = best.map_or(Similarity::Undefined, Similarity::Defined);
    graph.cache.write().expect("cache lock").insert(key, result);
    result
}

/// Morphy suffix-detachment rules per category, applied in order.
fn detachment_rules(category: Category) -> &'static [(&'static str, &'static str)] {
    match category {
        Category::Noun => &[
            ("s", ""),
            ("ses", "s"),
            ("xes", "x"),
            ("zes", "z"),
            ("ches", "ch"),
            ("shes", "sh"),
            ("men", "man"),
            ("ies", "y"),
        ],
        Category::Verb => &[
            ("s", ""),
            ("ies", "y"),
            ("es", "e"),
            ("es", ""),
            ("ed", "e"),
            ("ed", ""),
            ("ing", "e"),
            ("ing", ""),
        ],
        Category::Adjective => &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
        Category::Adverb => &[],
    }
}

fn detachment_candidates(lower: &str, category: Category) -> Vec<String> {
    let mut candidates = Vec::new();
    for (suffix, replacement) in detachment_rules(category) {
        if lower.len() > suffix.len() {
            if let Some(stem) = lower.strip_suffix(suffix) {
                let mut candidate = stem.to_string();
                candidate.push_str(replacement);
                if !candidate.is_empty() && !candidates.contains(&candidate) {
                    candidates.push(candidate);
                }
            }
        }
    }
    candidates
}
