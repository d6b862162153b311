//! 1-factorizations of regular digraphs and spanning factorizations.
//!
//! A 1-factor is a set of arcs forming a bijection on the vertices. A
//! `d`-regular digraph splits into `d` of them by peeling perfect matchings
//! off the bipartite double cover (tails on the left, heads on the right).
//! A spanning factorization adds a word list `ω_0 = ∅, ω_1, …, ω_{n-1}` over
//! the factors such that, from every vertex `v`, the endpoints `vω_i` are
//! pairwise distinct.

use std::ops::ControlFlow;
use std::ops::ControlFlow::Continue;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{as_digraph, check_strongly_connected, Adjacency, CosetGraph, Digraph};
use crate::layers::bfs_distances;
use crate::words::{WordList, WordSet};

/// Default node budget for [`search_spanning_factorization`].
pub const DEFAULT_FACTOR_BUDGET: u64 = 10_000_000;

/// Word-length slack tried by the search after short word lists fail.
pub const MAX_SEARCH_SLACK: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFactorization {
    vertex_count: usize,
    /// Factor index of every arc of the underlying digraph.
    factor_of: Vec<usize>,
    /// `successors[f][v]`: head of the arc of factor `f` leaving `v`.
    successors: Vec<Vec<usize>>,
    /// `arcs[f][v]`: index of that arc in the underlying digraph.
    arcs: Vec<Vec<usize>>,
}

impl OneFactorization {
    /// Assembles a factorization from a per-arc factor assignment, checking
    /// that every factor is a bijection.
    pub fn from_assignment(graph: &Digraph, factor_of: Vec<usize>, factors: usize) -> Result<Self> {
        let n = graph.order();
        if factor_of.len() != graph.arc_count() {
            return Err(Error::Structural(format!(
                "{} factor labels for {} arcs",
                factor_of.len(),
                graph.arc_count()
            )));
        }
        let mut successors = vec![vec![usize::MAX; n]; factors];
        let mut arcs = vec![vec![usize::MAX; n]; factors];
        let mut hit = vec![vec![false; n]; factors];
        for (a, (&f, &(s, t))) in factor_of.iter().zip(graph.arcs()).enumerate() {
            if f >= factors {
                return Err(Error::Structural(format!(
                    "arc {a} has factor {f} >= {factors}"
                )));
            }
            if successors[f][s] != usize::MAX || hit[f][t] {
                return Err(Error::Structural(format!(
                    "factor {f} is not a bijection around arc {a} = ({s}, {t})"
                )));
            }
            successors[f][s] = t;
            arcs[f][s] = a;
            hit[f][t] = true;
        }
        if let Some(f) = successors.iter().position(|row| row.contains(&usize::MAX)) {
            return Err(Error::Structural(format!(
                "factor {f} does not cover every vertex"
            )));
        }
        Ok(OneFactorization {
            vertex_count: n,
            factor_of,
            successors,
            arcs,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn factor_count(&self) -> usize {
        self.successors.len()
    }

    pub fn factor_of(&self, arc: usize) -> usize {
        self.factor_of[arc]
    }

    pub fn successor(&self, factor: usize, v: usize) -> usize {
        self.successors[factor][v]
    }

    /// Successor arrays, one per factor.
    pub fn successor_maps(&self) -> &[Vec<usize>] {
        &self.successors
    }

    pub fn arc(&self, factor: usize, v: usize) -> usize {
        self.arcs[factor][v]
    }

    /// Endpoint of the path `vω`.
    pub fn walk(&self, v: usize, word: &[usize]) -> usize {
        word.iter().fold(v, |u, &f| self.successors[f][u])
    }
}

/// Splits a `d`-regular digraph into `d` 1-factors by extracting `d`
/// perfect matchings from the double cover with augmenting paths. Vertices
/// and arcs are scanned in index order, so the output is deterministic.
pub fn one_factorize(graph: &Digraph) -> Result<OneFactorization> {
    let d = graph.regular_degree()?;
    let n = graph.order();
    let heads: Vec<usize> = graph.arcs().iter().map(|&(_, t)| t).collect();
    let tails: Vec<usize> = graph.arcs().iter().map(|&(s, _)| s).collect();
    let mut used = vec![false; graph.arc_count()];
    let mut factor_of = vec![usize::MAX; graph.arc_count()];

    fn augment(
        u: usize,
        graph: &Digraph,
        heads: &[usize],
        tails: &[usize],
        used: &[bool],
        visited: &mut [bool],
        matched: &mut [Option<usize>],
    ) -> bool {
        for &a in graph.out_arcs(u) {
            let v = heads[a];
            if used[a] || visited[v] {
                continue;
            }
            visited[v] = true;
            let free = match matched[v] {
                None => true,
                Some(b) => augment(tails[b], graph, heads, tails, used, visited, matched),
            };
            if free {
                matched[v] = Some(a);
                return true;
            }
        }
        false
    }

    for round in 0..d {
        let mut matched: Vec<Option<usize>> = vec![None; n];
        for u in 0..n {
            let mut visited = vec![false; n];
            if !augment(u, graph, &heads, &tails, &used, &mut visited, &mut matched) {
                return Err(Error::Internal(format!(
                    "no perfect matching in round {round}; regular bipartite graphs always have one"
                )));
            }
        }
        for a in matched.into_iter().flatten() {
            used[a] = true;
            factor_of[a] = round;
        }
    }
    OneFactorization::from_assignment(graph, factor_of, d)
}

/// A 1-factorization with a word list whose endpoints are distinct from
/// every base vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningFactorization {
    pub factorization: OneFactorization,
    /// `words[0]` is the empty word.
    pub words: Vec<Vec<usize>>,
}

impl SpanningFactorization {
    /// Non-empty words with their endpoints from vertex 0, for scheduling.
    pub fn word_list(&self) -> WordList {
        let nonempty: Vec<&Vec<usize>> = self.words.iter().filter(|w| !w.is_empty()).collect();
        WordList {
            degree: self.factorization.factor_count(),
            targets: nonempty
                .iter()
                .map(|w| self.factorization.walk(0, w))
                .collect(),
            words: nonempty.into_iter().cloned().collect(),
        }
    }

    pub fn total_length(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    /// Whether the total word length equals the distance sum `Σ k·n_k`
    /// from vertex 0, i.e. every word is a geodesic.
    pub fn is_short_for(&self, distance_sum: usize) -> bool {
        self.total_length() == distance_sum
    }
}

/// Why a word list fails to span, or that it does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanningVerdict {
    Spanning,
    /// `vω_i = vω_j` for `i ≠ j`.
    Collision {
        vertex: usize,
        first: usize,
        second: usize,
    },
    /// Fewer than `n` words cannot reach every vertex.
    TooFewWords {
        words: usize,
        vertices: usize,
    },
    FirstWordNotEmpty,
    BadLetter {
        word: usize,
        letter: usize,
    },
}

impl SpanningVerdict {
    pub fn is_spanning(&self) -> bool {
        matches!(self, SpanningVerdict::Spanning)
    }
}

/// Walks every word from every vertex and reports the first collision.
pub fn verify_spanning(factorization: &OneFactorization, words: &[Vec<usize>]) -> SpanningVerdict {
    let n = factorization.vertex_count();
    let d = factorization.factor_count();
    for (i, w) in words.iter().enumerate() {
        if let Some(&f) = w.iter().find(|&&f| f >= d) {
            return SpanningVerdict::BadLetter { word: i, letter: f };
        }
    }
    if words.first().is_some_and(|w| !w.is_empty()) {
        return SpanningVerdict::FirstWordNotEmpty;
    }
    let mut owner = vec![usize::MAX; n];
    for v in 0..n {
        owner.fill(usize::MAX);
        for (i, w) in words.iter().enumerate() {
            let end = factorization.walk(v, w);
            if owner[end] != usize::MAX {
                return SpanningVerdict::Collision {
                    vertex: v,
                    first: owner[end],
                    second: i,
                };
            }
            owner[end] = i;
        }
    }
    if words.len() < n {
        return SpanningVerdict::TooFewWords {
            words: words.len(),
            vertices: n,
        };
    }
    SpanningVerdict::Spanning
}

/// Factors are the generator classes and the words are `W` itself; the
/// spanning property holds because `vω_i = v·g_i` in a Cayley graph.
pub fn spanning_factorization_from_cayley(
    graph: &CosetGraph,
    words: &WordSet,
) -> Result<(Digraph, SpanningFactorization)> {
    if !graph.is_cayley() {
        return Err(Error::Unsupported(
            "generator classes are only 1-factors for Cayley graphs".into(),
        ));
    }
    words.check(graph)?;
    let digraph = as_digraph(graph);
    let d = graph.degree();
    let factor_of = (0..digraph.arc_count()).map(|a| a % d).collect();
    let factorization = OneFactorization::from_assignment(&digraph, factor_of, d)?;
    let list = std::iter::once(Vec::new())
        .chain(words.words().values().cloned())
        .collect::<Vec<_>>();
    let verdict = verify_spanning(&factorization, &list);
    if !verdict.is_spanning() {
        return Err(Error::Internal(format!(
            "Cayley word set failed the spanning check: {verdict:?}"
        )));
    }
    Ok((
        digraph,
        SpanningFactorization {
            factorization,
            words: list,
        },
    ))
}

/// Outcome of the spanning-factorization explorer. A failed search proves
/// nothing about existence.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found {
        factorization: SpanningFactorization,
        short: bool,
        nodes: u64,
    },
    Unknown {
        nodes: u64,
        /// Most vertices ever covered by a partial word list.
        best_depth: usize,
        /// True when every factorization and slack level was tried.
        exhausted: bool,
    },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&SpanningFactorization> {
        match self {
            SearchOutcome::Found { factorization, .. } => Some(factorization),
            SearchOutcome::Unknown { .. } => None,
        }
    }
}

struct Explorer<'a> {
    graph: &'a Digraph,
    n: usize,
    d: usize,
    dist0: Vec<usize>,
    order: Vec<usize>,
    budget: u64,
    nodes: u64,
    best_depth: usize,
    out_of_budget: bool,
}

impl Explorer<'_> {
    fn tick(&mut self) -> ControlFlow<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.out_of_budget = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }

    /// Enumerates unordered 1-factorizations: factor `k` always contains the
    /// lowest-index arc not yet used by factors `0..k`.
    fn factorizations(
        &mut self,
        used: &mut Vec<bool>,
        factor_of: &mut Vec<usize>,
        k: usize,
        visit: &mut dyn FnMut(&mut Self, &OneFactorization) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k == self.d {
            let f = OneFactorization::from_assignment(self.graph, factor_of.clone(), self.d)
                .expect("enumerated matchings form bijections");
            return visit(self, &f);
        }
        let first = used
            .iter()
            .position(|&u| !u)
            .expect("arcs remain while k < d");
        let mut taken = vec![false; self.n];
        let mut chosen = Vec::with_capacity(self.n);
        self.matchings(used, factor_of, k, first, 0, &mut taken, &mut chosen, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn matchings(
        &mut self,
        used: &mut Vec<bool>,
        factor_of: &mut Vec<usize>,
        k: usize,
        first: usize,
        u: usize,
        taken: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&mut Self, &OneFactorization) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if u == self.n {
            for &a in chosen.iter() {
                used[a] = true;
                factor_of[a] = k;
            }
            let flow = self.factorizations(used, factor_of, k + 1, visit);
            for &a in chosen.iter() {
                used[a] = false;
                factor_of[a] = usize::MAX;
            }
            return flow;
        }
        let candidates: Vec<usize> = if self.graph.arcs()[first].0 == u {
            vec![first]
        } else {
            self.graph.out_arcs(u).to_vec()
        };
        for a in candidates {
            let v = self.graph.arcs()[a].1;
            if used[a] || taken[v] {
                continue;
            }
            self.tick()?;
            taken[v] = true;
            chosen.push(a);
            let flow = self.matchings(used, factor_of, k, first, u + 1, taken, chosen, visit);
            chosen.pop();
            taken[v] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// Looks for a word list over `f` in which the word for vertex `u`
    /// (as seen from base 0) has length at most `dist0[u] + slack`.
    fn words_for(
        &mut self,
        f: &OneFactorization,
        slack: usize,
    ) -> ControlFlow<(), Option<Vec<Vec<usize>>>> {
        let n = self.n;
        let max_len = self.dist0.iter().copied().max().unwrap_or(0) + slack;
        // candidates[u]: (word, endpoints from every base), shortest first
        let mut candidates: Vec<Vec<(Vec<usize>, Vec<usize>)>> = vec![Vec::new(); n];
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        let mut by_length: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_len + 1];
        while let Some(word) = stack.pop() {
            if !word.is_empty() {
                by_length[word.len()].push(word.clone());
            }
            if word.len() < max_len {
                for letter in (0..self.d).rev() {
                    let mut next = word.clone();
                    next.push(letter);
                    stack.push(next);
                }
            }
        }
        for words in by_length {
            for word in words {
                let u = f.walk(0, &word);
                if u == 0 || word.len() < self.dist0[u] || word.len() > self.dist0[u] + slack {
                    continue;
                }
                let ends: Vec<usize> = (0..n).map(|v| f.walk(v, &word)).collect();
                if ends.iter().enumerate().any(|(v, &e)| e == v) {
                    continue;
                }
                candidates[u].push((word, ends));
            }
        }
        if self.order.iter().skip(1).any(|&u| candidates[u].is_empty()) {
            return ControlFlow::Continue(None);
        }

        let mut covered = vec![vec![false; n]; n];
        for (v, row) in covered.iter_mut().enumerate() {
            row[v] = true;
        }
        let mut picked = vec![usize::MAX; n];
        let found = self.assign(1, &candidates, &mut covered, &mut picked)?;
        Continue(found.then(|| {
            std::iter::once(Vec::new())
                .chain(
                    self.order
                        .iter()
                        .skip(1)
                        .map(|&u| candidates[u][picked[u]].0.clone()),
                )
                .collect()
        }))
    }

    fn assign(
        &mut self,
        depth: usize,
        candidates: &[Vec<(Vec<usize>, Vec<usize>)>],
        covered: &mut [Vec<bool>],
        picked: &mut [usize],
    ) -> ControlFlow<(), bool> {
        self.best_depth = self.best_depth.max(depth - 1);
        if depth == self.n {
            return Continue(true);
        }
        let u = self.order[depth];
        for (i, (_, ends)) in candidates[u].iter().enumerate() {
            self.tick()?;
            if ends.iter().enumerate().any(|(v, &e)| covered[v][e]) {
                continue;
            }
            for (v, &e) in ends.iter().enumerate() {
                covered[v][e] = true;
            }
            picked[u] = i;
            let done = self.assign(depth + 1, candidates, covered, picked)?;
            if done {
                return Continue(true);
            }
            for (v, &e) in ends.iter().enumerate() {
                covered[v][e] = false;
            }
        }
        Continue(false)
    }
}

/// Backtracking search for a spanning factorization of a regular digraph.
///
/// Every 1-factorization (enumerated as matching decompositions of the
/// double cover) is tried with word lists of geodesic length first; longer
/// words are admitted only after all factorizations fail at the current
/// slack. Candidate words are checked against every base vertex at once.
pub fn search_spanning_factorization(graph: &Digraph, budget: u64) -> Result<SearchOutcome> {
    let d = graph.regular_degree()?;
    check_strongly_connected(graph)?;
    let n = graph.order();
    let dist0: Vec<usize> = bfs_distances(graph, 0)
        .into_iter()
        .map(|x| x.expect("strongly connected"))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| (dist0[u], u));
    let distance_sum: usize = dist0.iter().sum();

    let mut explorer = Explorer {
        graph,
        n,
        d,
        dist0,
        order,
        budget,
        nodes: 0,
        best_depth: 0,
        out_of_budget: false,
    };
    if budget == 0 {
        return Ok(SearchOutcome::Unknown {
            nodes: 0,
            best_depth: 0,
            exhausted: false,
        });
    }

    for slack in 0..=MAX_SEARCH_SLACK {
        let mut result: Option<SpanningFactorization> = None;
        let mut used = vec![false; graph.arc_count()];
        let mut factor_of = vec![usize::MAX; graph.arc_count()];
        let mut visit = |ex: &mut Explorer<'_>, f: &OneFactorization| -> ControlFlow<()> {
            if let Some(words) = ex.words_for(f, slack)? {
                result = Some(SpanningFactorization {
                    factorization: f.clone(),
                    words,
                });
                return ControlFlow::Break(());
            }
            Continue(())
        };
        let _ = explorer.factorizations(&mut used, &mut factor_of, 0, &mut visit);
        if let Some(found) = result {
            let verdict = verify_spanning(&found.factorization, &found.words);
            if !verdict.is_spanning() {
                return Err(Error::Internal(format!("search produced {verdict:?}")));
            }
            return Ok(SearchOutcome::Found {
                short: found.is_short_for(distance_sum),
                factorization: found,
                nodes: explorer.nodes,
            });
        }
        if explorer.out_of_budget {
            break;
        }
    }
    Ok(SearchOutcome::Unknown {
        nodes: explorer.nodes.min(budget),
        best_depth: explorer.best_depth,
        exhausted: !explorer.out_of_budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::build_cayley_coset_graph;
    use crate::words::{bfs_word_set, WordMode};

    fn check_factor_invariants(g: &Digraph, f: &OneFactorization) {
        let n = f.vertex_count();
        for k in 0..f.factor_count() {
            let mut heads: Vec<usize> = (0..n).map(|v| f.successor(k, v)).collect();
            heads.sort();
            assert_eq!(heads, (0..n).collect::<Vec<_>>());
        }
        let mut claimed = vec![0; g.arc_count()];
        for k in 0..f.factor_count() {
            for v in 0..n {
                let a = f.arc(k, v);
                assert_eq!(g.arcs()[a], (v, f.successor(k, v)));
                claimed[a] += 1;
            }
        }
        assert!(claimed.iter().all(|&c| c == 1));
    }

    #[test]
    fn cycle_is_its_own_factor() {
        let g = fixtures::directed_cycle(4);
        let f = one_factorize(&g).unwrap();
        assert_eq!(f.factor_count(), 1);
        assert_eq!(f.successor_maps()[0], vec![1, 2, 3, 0]);
    }

    #[test]
    fn triangle_splits_into_two_rotations() {
        let g = fixtures::bidirected_triangle();
        let f = one_factorize(&g).unwrap();
        check_factor_invariants(&g, &f);
        let mut maps = f.successor_maps().to_vec();
        maps.sort();
        assert_eq!(maps, vec![vec![1, 2, 0], vec![2, 0, 1]]);
    }

    #[test]
    fn petersen_factors_partition_the_arcs() {
        let g = fixtures::petersen_digraph();
        let f = one_factorize(&g).unwrap();
        assert_eq!(f.factor_count(), 3);
        check_factor_invariants(&g, &f);
    }

    #[test]
    fn irregular_input_is_rejected() {
        let g = Digraph::new(3, vec![(0, 1), (0, 2), (1, 0), (2, 0)]).unwrap();
        assert!(matches!(one_factorize(&g), Err(Error::NotRegular { .. })));
    }

    #[test]
    fn cayley_construction_is_spanning_and_short() {
        let q3 = build_cayley_coset_graph(&fixtures::q3_spec()).unwrap();
        let w = bfs_word_set(&q3, WordMode::FirstFound).unwrap();
        let (g, sf) = spanning_factorization_from_cayley(&q3, &w).unwrap();
        assert_eq!(sf.factorization.factor_count(), 3);
        assert_eq!(sf.words.len(), 8);
        assert!(verify_spanning(&sf.factorization, &sf.words).is_spanning());
        assert!(sf.is_short_for(12));
        check_factor_invariants(&g, &sf.factorization);

        let c4 = build_cayley_coset_graph(&fixtures::c4_spec()).unwrap();
        let w = bfs_word_set(&c4, WordMode::FirstFound).unwrap();
        let (_, sf) = spanning_factorization_from_cayley(&c4, &w).unwrap();
        let lengths: Vec<usize> = sf.words.iter().map(Vec::len).collect();
        assert_eq!(lengths, vec![0, 1, 2, 3]);

        let z7 = build_cayley_coset_graph(&fixtures::z7_spec()).unwrap();
        let w = bfs_word_set(&z7, WordMode::LoadBalanced).unwrap();
        let (_, sf) = spanning_factorization_from_cayley(&z7, &w).unwrap();
        assert_eq!(sf.word_list().loads().unwrap(), vec![3, 3, 3]);
    }

    #[test]
    fn verification_failures() {
        let g = fixtures::directed_cycle(4);
        let f = one_factorize(&g).unwrap();
        let dup = vec![vec![], vec![0], vec![0, 0], vec![0, 0]];
        assert!(matches!(
            verify_spanning(&f, &dup),
            SpanningVerdict::Collision {
                first: 2,
                second: 3,
                ..
            }
        ));
        let short = vec![vec![], vec![0]];
        assert_eq!(
            verify_spanning(&f, &short),
            SpanningVerdict::TooFewWords {
                words: 2,
                vertices: 4
            }
        );
        assert_eq!(
            verify_spanning(&f, &[vec![0], vec![]]),
            SpanningVerdict::FirstWordNotEmpty
        );
        assert!(matches!(
            verify_spanning(&f, &[vec![], vec![1]]),
            SpanningVerdict::BadLetter { word: 1, letter: 1 }
        ));
    }

    #[test]
    fn walking_a_word_composes_factor_maps() {
        let g = fixtures::petersen_digraph();
        let f = one_factorize(&g).unwrap();
        let word = [0, 2, 1, 1, 0];
        for v in 0..10 {
            let mut u = v;
            for &k in &word {
                u = f.successor_maps()[k][u];
            }
            assert_eq!(f.walk(v, &word), u);
        }
    }

    #[test]
    fn search_finds_short_factorization_of_the_cube() {
        let q3 = build_cayley_coset_graph(&fixtures::q3_spec()).unwrap();
        let g = as_digraph(&q3);
        match search_spanning_factorization(&g, DEFAULT_FACTOR_BUDGET).unwrap() {
            SearchOutcome::Found {
                factorization,
                short,
                ..
            } => {
                assert!(short);
                assert!(
                    verify_spanning(&factorization.factorization, &factorization.words)
                        .is_spanning()
                );
                check_factor_invariants(&g, &factorization.factorization);
            }
            other => panic!("expected a factorization, got {other:?}"),
        }
    }

    #[test]
    fn search_finds_petersen_factorization() {
        let g = fixtures::petersen_digraph();
        let outcome = search_spanning_factorization(&g, DEFAULT_FACTOR_BUDGET).unwrap();
        let sf = outcome
            .found()
            .expect("Petersen factorization within budget");
        assert_eq!(sf.words.len(), 10);
        assert!(verify_spanning(&sf.factorization, &sf.words).is_spanning());
        assert!(matches!(outcome, SearchOutcome::Found { short: true, .. }));
    }

    #[test]
    fn starved_search_reports_unknown() {
        let g = fixtures::petersen_digraph();
        for budget in [0, 1] {
            assert!(matches!(
                search_spanning_factorization(&g, budget).unwrap(),
                SearchOutcome::Unknown {
                    exhausted: false,
                    ..
                }
            ));
        }
    }
}
