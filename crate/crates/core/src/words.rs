//! Generator words from the identity vertex, occurrence counts and the
//! regular bound `ψ` (minimum over word sets of the busiest generator's
//! load).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CosetGraph;
use crate::layers::bfs_distances;

/// Default node budget for [`regular_bound_exact`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// How [`bfs_word_set`] chooses among equally short words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordMode {
    /// First parent discovered by a BFS that scans generators in index order.
    FirstFound,
    /// Greedy: extend through the incoming generator used least so far.
    LoadBalanced,
}

/// One generator word per non-identity vertex of a Cayley graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSet {
    degree: usize,
    words: BTreeMap<usize, Vec<usize>>,
    shortest: bool,
}

impl WordSet {
    /// Checks every word against `graph`: it must end on its key vertex, and
    /// when `shortest` is set its length must equal the BFS distance.
    pub fn new(
        graph: &CosetGraph,
        words: BTreeMap<usize, Vec<usize>>,
        shortest: bool,
    ) -> Result<Self> {
        let set = WordSet {
            degree: graph.degree(),
            words,
            shortest,
        };
        set.check(graph)?;
        Ok(set)
    }

    pub fn check(&self, graph: &CosetGraph) -> Result<()> {
        if self.degree != graph.degree() {
            return Err(Error::Structural(format!(
                "word set has degree {} but the graph has degree {}",
                self.degree,
                graph.degree()
            )));
        }
        let dist = bfs_distances(graph, 0);
        if self.words.len() + 1 != graph.order() || self.words.contains_key(&0) {
            return Err(Error::Structural(format!(
                "expected one word for each of the {} non-identity vertices",
                graph.order() - 1
            )));
        }
        for (&v, word) in &self.words {
            if let Some(&j) = word.iter().find(|&&j| j >= self.degree) {
                return Err(Error::Structural(format!(
                    "word for vertex {v} uses generator {j} >= {}",
                    self.degree
                )));
            }
            if v >= graph.order() || graph.walk(0, word) != v {
                return Err(Error::Structural(format!(
                    "word {word:?} does not lead from the identity to vertex {v}"
                )));
            }
            if self.shortest && Some(word.len()) != dist[v] {
                return Err(Error::Structural(format!(
                    "word {word:?} for vertex {v} is not a shortest path"
                )));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_shortest(&self) -> bool {
        self.shortest
    }

    pub fn words(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.words
    }

    pub fn word(&self, vertex: usize) -> Option<&[usize]> {
        self.words.get(&vertex).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Flattens the set into a word list ordered by target vertex.
    pub fn to_word_list(&self) -> WordList {
        WordList {
            degree: self.degree,
            targets: self.words.keys().copied().collect(),
            words: self.words.values().cloned().collect(),
        }
    }
}

/// Words over `degree` letters (generators or factors) with the vertex each
/// word reaches from the base vertex. This is what schedules are built for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordList {
    pub degree: usize,
    pub words: Vec<Vec<usize>>,
    pub targets: Vec<usize>,
}

impl WordList {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn total_letters(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    /// Occurrences of each letter across all words.
    pub fn loads(&self) -> Result<Vec<usize>> {
        count_letters(self.words.iter().map(Vec::as_slice), self.degree)
    }
}

fn count_letters<'a>(
    words: impl Iterator<Item = &'a [usize]>,
    degree: usize,
) -> Result<Vec<usize>> {
    let mut counts = vec![0; degree];
    for word in words {
        for &j in word {
            *counts.get_mut(j).ok_or_else(|| {
                Error::Structural(format!(
                    "generator index {j} out of range for degree {degree}"
                ))
            })? += 1;
        }
    }
    Ok(counts)
}

/// Shortest words for every non-identity vertex of a Cayley graph.
pub fn bfs_word_set(graph: &CosetGraph, mode: WordMode) -> Result<WordSet> {
    if !graph.is_cayley() {
        return Err(Error::Unsupported(
            "generator words need a trivial subgroup; use a spanning factorization for coset graphs"
                .into(),
        ));
    }
    let n = graph.order();
    let d = graph.degree();
    let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
    words[0] = Some(Vec::new());

    match mode {
        WordMode::FirstFound => {
            let mut queue = std::collections::VecDeque::from([0]);
            while let Some(u) = queue.pop_front() {
                for j in 0..d {
                    let w = graph.target(u, j);
                    if words[w].is_none() {
                        let mut word = words[u].clone().expect("queued vertices have words");
                        word.push(j);
                        words[w] = Some(word);
                        queue.push_back(w);
                    }
                }
            }
        }
        WordMode::LoadBalanced => {
            let dist = bfs_distances(graph, 0);
            let mut by_layer: Vec<Vec<usize>> = Vec::new();
            for (v, dv) in dist.iter().enumerate() {
                let dv = dv.ok_or(Error::NotConnected { vertex: v })?;
                if by_layer.len() <= dv {
                    by_layer.resize(dv + 1, Vec::new());
                }
                by_layer[dv].push(v);
            }
            // incoming[v] = (parent, generator) pairs one layer closer to the identity
            let mut incoming: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
            for u in 0..n {
                for j in 0..d {
                    let w = graph.target(u, j);
                    if dist[w] == dist[u].map(|k| k + 1) {
                        incoming[w].push((u, j));
                    }
                }
            }
            let mut counts = vec![0usize; d];
            for layer in by_layer.iter().skip(1) {
                for &v in layer {
                    let &(parent, j) = incoming[v]
                        .iter()
                        .min_by_key(|&&(_, j)| (counts[j], j))
                        .expect("every non-identity vertex has a parent");
                    let mut word = words[parent].clone().expect("previous layer is assigned");
                    word.push(j);
                    for &x in &word {
                        counts[x] += 1;
                    }
                    words[v] = Some(word);
                }
            }
        }
    }

    let map = words
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(v, w)| w.map(|w| (v, w)).ok_or(Error::NotConnected { vertex: v }))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(WordSet {
        degree: d,
        words: map,
        shortest: true,
    })
}

/// Per-generator occurrence counts.
pub fn generator_occurrences(words: &WordSet, degree: usize) -> Result<Vec<usize>> {
    count_letters(words.words.values().map(Vec::as_slice), degree)
}

/// The busiest generator's load for this particular word set, an upper
/// bound on `ψ` when the words are shortest.
pub fn regular_bound_for(words: &WordSet, degree: usize) -> Result<usize> {
    Ok(generator_occurrences(words, degree)?
        .into_iter()
        .max()
        .unwrap_or(0))
}

/// Result of the exhaustive search over shortest word sets.
#[derive(Clone, Debug)]
pub struct RegularBound {
    pub value: usize,
    /// False when the node budget ran out before the search finished.
    pub exact: bool,
    pub witness: WordSet,
    pub nodes: u64,
}

/// Every shortest word from the identity to each vertex, sorted.
pub fn all_shortest_words(graph: &CosetGraph, limit: u64) -> Result<Vec<Vec<Vec<usize>>>> {
    let n = graph.order();
    let dist = bfs_distances(graph, 0);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| dist[v]);
    let mut options: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    options[0].push(Vec::new());
    let mut produced = 0u64;
    for &u in &order {
        let du = dist[u].ok_or(Error::NotConnected { vertex: u })?;
        for j in 0..graph.degree() {
            let w = graph.target(u, j);
            if dist[w] != Some(du + 1) {
                continue;
            }
            let extended: Vec<Vec<usize>> = options[u]
                .iter()
                .map(|p| {
                    let mut word = p.clone();
                    word.push(j);
                    word
                })
                .collect();
            produced += extended.len() as u64;
            if produced > limit {
                return Err(Error::Scope(format!(
                    "more than {limit} shortest words; raise the budget"
                )));
            }
            options[w].extend(extended);
        }
    }
    for list in &mut options {
        list.sort();
    }
    Ok(options)
}

/// Exact `ψ` over all shortest word sets, by depth-first search with the
/// load-balanced word set as the starting incumbent.
pub fn regular_bound_exact(graph: &CosetGraph, budget: u64) -> Result<RegularBound> {
    let d = graph.degree();
    let start = bfs_word_set(graph, WordMode::LoadBalanced)?;
    let start_value = regular_bound_for(&start, d)?;
    let options = match all_shortest_words(graph, budget) {
        Ok(options) => options,
        Err(Error::Scope(_)) => {
            return Ok(RegularBound {
                value: start_value,
                exact: false,
                witness: start,
                nodes: budget,
            })
        }
        Err(e) => return Err(e),
    };

    // Forced vertices first, then the most constrained.
    let mut vertices: Vec<usize> = (1..graph.order()).collect();
    vertices.sort_by_key(|&v| (options[v].len(), v));

    let letter_counts = |w: &[usize]| {
        let mut c = vec![0usize; d];
        for &j in w {
            c[j] += 1;
        }
        c
    };
    let option_counts: Vec<Vec<Vec<usize>>> = vertices
        .iter()
        .map(|&v| options[v].iter().map(|w| letter_counts(w)).collect())
        .collect();
    // suffix_min[i][j]: least possible uses of generator j by vertices[i..]
    let mut suffix_min = vec![vec![0usize; d]; vertices.len() + 1];
    for i in (0..vertices.len()).rev() {
        for j in 0..d {
            let least = option_counts[i].iter().map(|c| c[j]).min().unwrap_or(0);
            suffix_min[i][j] = suffix_min[i + 1][j] + least;
        }
    }
    let total: usize = suffix_min[0].iter().sum();
    let floor = total.div_ceil(d.max(1));

    struct Search<'a> {
        option_counts: &'a [Vec<Vec<usize>>],
        suffix_min: &'a [Vec<usize>],
        counts: Vec<usize>,
        choice: Vec<usize>,
        best: usize,
        best_choice: Option<Vec<usize>>,
        nodes: u64,
        budget: u64,
        floor: usize,
    }

    impl Search<'_> {
        /// Returns false once the budget is exhausted.
        fn descend(&mut self, i: usize) -> bool {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            if i == self.option_counts.len() {
                let value = self.counts.iter().copied().max().unwrap_or(0);
                if value < self.best {
                    self.best = value;
                    self.best_choice = Some(self.choice.clone());
                }
                return true;
            }
            for k in 0..self.option_counts[i].len() {
                if self.best <= self.floor {
                    return true;
                }
                let add = &self.option_counts[i][k];
                let viable = (0..self.counts.len())
                    .all(|j| self.counts[j] + add[j] + self.suffix_min[i + 1][j] < self.best);
                if !viable {
                    continue;
                }
                for (c, a) in self.counts.iter_mut().zip(add) {
                    *c += a;
                }
                self.choice.push(k);
                let alive = self.descend(i + 1);
                self.choice.pop();
                for (c, a) in self.counts.iter_mut().zip(add) {
                    *c -= a;
                }
                if !alive {
                    return false;
                }
            }
            true
        }
    }

    let mut search = Search {
        option_counts: &option_counts,
        suffix_min: &suffix_min,
        counts: vec![0; d],
        choice: Vec::new(),
        best: start_value,
        best_choice: None,
        nodes: 0,
        budget,
        floor,
    };
    let finished = start_value <= floor || search.descend(0);

    let witness = match search.best_choice {
        Some(choice) => {
            let words = vertices
                .iter()
                .zip(choice)
                .map(|(&v, k)| (v, options[v][k].clone()))
                .collect();
            WordSet {
                degree: d,
                words,
                shortest: true,
            }
        }
        None => start,
    };
    Ok(RegularBound {
        value: search.best,
        exact: finished,
        witness,
        nodes: search.nodes,
    })
}
