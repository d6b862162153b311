//! Helpers shared by the integration suites. Nothing here calls the code
//! under test to compute an expected value.

#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use cayley_transpose::factor::OneFactorization;
use cayley_transpose::fixtures;
use cayley_transpose::graph::{build_cayley_coset_graph, CosetGraph, Digraph};
use cayley_transpose::schedule::Schedule;
use cayley_transpose::words::{all_shortest_words, WordList, WordSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// The four Cayley graphs used by the randomized route suites.
pub fn cayley_corpus() -> Vec<(&'static str, CosetGraph)> {
    [
        ("c4", fixtures::c4_spec()),
        ("q3", fixtures::q3_spec()),
        ("z5-12", fixtures::z5_spec()),
        ("z7-124", fixtures::z7_spec()),
    ]
    .into_iter()
    .map(|(name, spec)| (name, build_cayley_coset_graph(&spec).unwrap()))
    .collect()
}

/// All-pairs distances by BFS over `CosetGraph::target`, written without
/// the library's layer code.
pub fn oracle_distances(graph: &CosetGraph) -> Vec<Vec<usize>> {
    let n = graph.order();
    (0..n)
        .map(|s| {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for j in 0..graph.degree() {
                    let w = graph.target(u, j);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            assert!(
                dist.iter().all(|&d| d != usize::MAX),
                "oracle: graph not strongly connected"
            );
            dist
        })
        .collect()
}

/// `⌈Σ_v dist(0, v) / d⌉` from the oracle.
pub fn oracle_theta(graph: &CosetGraph) -> usize {
    let total: usize = oracle_distances(graph)[0].iter().sum();
    total.div_ceil(graph.degree())
}

/// A uniformly random shortest word for every non-base vertex.
pub fn random_word_set<R: Rng>(graph: &CosetGraph, rng: &mut R) -> WordSet {
    let options = all_shortest_words(graph, 1_000_000).unwrap();
    let words: BTreeMap<usize, Vec<usize>> = (1..graph.order())
        .map(|v| (v, options[v].choose(rng).unwrap().clone()))
        .collect();
    WordSet::new(graph, words, true).unwrap()
}

/// A random valid schedule: words in random order, each letter at the
/// first free slot of its factor after a random gap.
pub fn random_schedule<R: Rng>(words: &WordList, rng: &mut R) -> Schedule {
    let mut order: Vec<usize> = (0..words.words.len()).collect();
    order.shuffle(rng);
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); words.degree];
    let mut times = vec![Vec::new(); words.words.len()];
    for w in order {
        let mut last = 0;
        for &letter in &words.words[w] {
            let mut t = last + 1 + rng.gen_range(0..3);
            while used[letter].contains(&t) {
                t += 1;
            }
            used[letter].push(t);
            times[w].push(t);
            last = t;
        }
    }
    Schedule { times }
}

/// Direct check of the two schedule invariants.
pub fn schedule_is_valid(words: &WordList, schedule: &Schedule) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    words
        .words
        .iter()
        .zip(&schedule.times)
        .all(|(word, times)| {
            word.len() == times.len()
                && times.windows(2).all(|p| p[0] < p[1])
                && word
                    .iter()
                    .zip(times)
                    .all(|(&f, &t)| t >= 1 && seen.insert((f, t)))
        })
}

/// A `d`-regular digraph on `n` vertices: the union of `d` random
/// permutations, arcs shuffled.
pub fn random_regular_digraph<R: Rng>(n: usize, d: usize, rng: &mut R) -> Digraph {
    let mut arcs = Vec::with_capacity(n * d);
    for _ in 0..d {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        arcs.extend(perm.into_iter().enumerate());
    }
    arcs.shuffle(rng);
    Digraph::new(n, arcs).unwrap()
}

/// Every factor is a bijection and the factors partition the arcs.
pub fn factorization_is_valid(graph: &Digraph, f: &OneFactorization) -> Result<(), String> {
    let n = graph
        .arcs()
        .iter()
        .map(|&(s, t)| s.max(t) + 1)
        .max()
        .unwrap_or(0);
    let mut arc_used = vec![false; graph.arcs().len()];
    for k in 0..f.factor_count() {
        let mut hit = vec![false; f.vertex_count()];
        for v in 0..f.vertex_count() {
            let w = f.successor(k, v);
            if std::mem::replace(&mut hit[w], true) {
                return Err(format!("factor {k} hits {w} twice"));
            }
            let a = f.arc(k, v);
            if graph.arcs()[a] != (v, w) {
                return Err(format!(
                    "factor {k} uses arc {a} = {:?} for ({v}, {w})",
                    graph.arcs()[a]
                ));
            }
            if std::mem::replace(&mut arc_used[a], true) {
                return Err(format!("arc {a} is in two factors"));
            }
            if f.factor_of(a) != k {
                return Err(format!(
                    "arc {a} labelled {} but listed in {k}",
                    f.factor_of(a)
                ));
            }
        }
    }
    if n > f.vertex_count() || arc_used.contains(&false) {
        return Err("factors do not cover every arc".into());
    }
    Ok(())
}
