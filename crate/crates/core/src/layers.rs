//! Distance layers, balls and the average-diameter lower bound on transpose
//! time.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, CosetGraph, Digraph};

/// A graph that knows its degree and whether it is vertex symmetric by
/// construction.
pub trait Network: Adjacency + Sync {
    fn degree(&self) -> Result<usize>;

    /// Coset graphs are vertex symmetric; their distance profile must not
    /// depend on the base vertex.
    fn vertex_symmetric(&self) -> bool;
}

impl Network for CosetGraph {
    fn degree(&self) -> Result<usize> {
        Ok(CosetGraph::degree(self))
    }

    fn vertex_symmetric(&self) -> bool {
        true
    }
}

impl Network for Digraph {
    fn degree(&self) -> Result<usize> {
        self.regular_degree()
    }

    fn vertex_symmetric(&self) -> bool {
        false
    }
}

/// Distances from `source`, `None` where unreachable.
pub fn bfs_distances<G: Adjacency + ?Sized>(graph: &G, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.order()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued vertices have a distance");
        for &w in graph.successors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn layer_counts(dist: &[Option<usize>]) -> Result<Vec<usize>> {
    let mut counts = Vec::new();
    for (v, d) in dist.iter().enumerate() {
        let d = d.ok_or(Error::NotConnected { vertex: v })?;
        if counts.len() <= d {
            counts.resize(d + 1, 0);
        }
        counts[d] += 1;
    }
    Ok(counts)
}

/// Distance distribution of a strongly connected regular graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerProfile {
    #[serde(rename = "P")]
    pub vertex_count: usize,
    #[serde(rename = "d")]
    pub degree: usize,
    #[serde(rename = "D")]
    pub diameter: usize,
    /// `n[k]`: vertices at distance exactly `k` from the base vertex.
    #[serde(rename = "n")]
    pub counts: Vec<usize>,
    /// `N[k]`: ordered vertex pairs at distance `k`, over all sources.
    #[serde(rename = "N")]
    pub pair_counts: Vec<usize>,
    pub theta: usize,
}

impl LayerProfile {
    /// `Σ k·n[k]`, the total distance from the base vertex.
    pub fn distance_sum(&self) -> usize {
        self.counts.iter().enumerate().map(|(k, &n)| k * n).sum()
    }

    /// `Σ k·N[k]`.
    pub fn pair_distance_sum(&self) -> usize {
        self.pair_counts
            .iter()
            .enumerate()
            .map(|(k, &n)| k * n)
            .sum()
    }

    /// `⌈Σ k·N[k] / (P·d)⌉`, the all-pairs form of the average-diameter bound.
    pub fn pair_bound(&self) -> usize {
        ceil_div(self.pair_distance_sum(), self.vertex_count * self.degree)
    }
}

pub(crate) fn ceil_div(a: usize, b: usize) -> usize {
    if b == 0 {
        0
    } else {
        a.div_ceil(b)
    }
}

/// Layer counts from `base`, exact pair counts from every source, and the
/// bound `θ`. For vertex-symmetric inputs the per-source counts are also
/// checked to agree with those from `base`.
pub fn layer_profile<G: Network>(graph: &G, base: usize) -> Result<LayerProfile> {
    let n = graph.order();
    if base >= n {
        return Err(Error::Structural(format!(
            "base vertex {base} outside 0..{n}"
        )));
    }
    let degree = graph.degree()?;
    let counts = layer_counts(&bfs_distances(graph, base))?;

    let per_source: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|s| layer_counts(&bfs_distances(graph, s)))
        .collect::<Result<_>>()?;

    let mut pair_counts = Vec::new();
    for (s, c) in per_source.iter().enumerate() {
        if graph.vertex_symmetric() && *c != counts {
            return Err(Error::Internal(format!(
                "distance profile from vertex {s} ({c:?}) differs from base {base} ({counts:?})"
            )));
        }
        if pair_counts.len() < c.len() {
            pair_counts.resize(c.len(), 0);
        }
        for (k, &x) in c.iter().enumerate() {
            pair_counts[k] += x;
        }
    }

    let mut profile = LayerProfile {
        vertex_count: n,
        degree,
        diameter: counts.len() - 1,
        counts,
        pair_counts,
        theta: 0,
    };
    profile.theta = average_diameter_bound(&profile);
    Ok(profile)
}

/// `θ = ⌈Σ k·n[k] / d⌉`.
pub fn average_diameter_bound(profile: &LayerProfile) -> usize {
    ceil_div(profile.distance_sum(), profile.degree)
}

/// Vertices within distance `radius` of `v`, ascending.
pub fn ball<G: Adjacency + ?Sized>(graph: &G, v: usize, radius: usize) -> Vec<usize> {
    bfs_distances(graph, v)
        .iter()
        .enumerate()
        .filter_map(|(u, d)| d.filter(|&d| d <= radius).map(|_| u))
        .collect()
}

/// Vertices at distance exactly `radius` from `v`, ascending.
pub fn layer<G: Adjacency + ?Sized>(graph: &G, v: usize, radius: usize) -> Vec<usize> {
    bfs_distances(graph, v)
        .iter()
        .enumerate()
        .filter_map(|(u, d)| (*d == Some(radius)).then_some(u))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::build_cayley_coset_graph;
    use crate::group::GroupSpec;

    fn cayley(spec: GroupSpec) -> CosetGraph {
        build_cayley_coset_graph(&spec).unwrap()
    }

    /// Floyd–Warshall all-pairs distances, independent of the BFS code.
    fn floyd_warshall<G: Adjacency>(g: &G) -> Vec<Vec<usize>> {
        let n = g.order();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (u, row) in d.iter_mut().enumerate() {
            row[u] = 0;
            for &w in g.successors(u) {
                if w != u {
                    row[w] = 1;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    #[test]
    fn directed_cycle_profile() {
        let p = layer_profile(&cayley(fixtures::c4_spec()), 0).unwrap();
        assert_eq!(p.counts, vec![1, 1, 1, 1]);
        assert_eq!(p.diameter, 3);
        assert_eq!(p.theta, 6);
        assert_eq!(p.pair_counts, vec![4, 4, 4, 4]);
    }

    #[test]
    fn cube_profile() {
        let p = layer_profile(&cayley(fixtures::q3_spec()), 0).unwrap();
        assert_eq!(p.counts, vec![1, 3, 3, 1]);
        assert_eq!(p.diameter, 3);
        assert_eq!(average_diameter_bound(&p), 4);
    }

    #[test]
    fn petersen_profile_matches_floyd_warshall() {
        let g = cayley(fixtures::petersen_spec());
        let p = layer_profile(&g, 0).unwrap();
        assert_eq!(p.counts, vec![1, 3, 6]);
        assert_eq!(p.theta, 5);
        let fw = floyd_warshall(&g);
        let sum: usize = fw.iter().flatten().sum();
        assert_eq!(sum, p.pair_distance_sum());
        assert_eq!(p.pair_bound(), p.theta);

        let raw = layer_profile(&fixtures::petersen_digraph(), 3).unwrap();
        assert_eq!(raw.counts, p.counts);
        assert_eq!(raw.pair_counts, p.pair_counts);
    }

    #[test]
    fn theta_on_small_circulants() {
        assert_eq!(
            layer_profile(&cayley(fixtures::z7_spec()), 0)
                .unwrap()
                .theta,
            3
        );
        assert_eq!(
            layer_profile(&cayley(fixtures::k4_spec()), 0)
                .unwrap()
                .theta,
            1
        );
        assert_eq!(
            layer_profile(&cayley(fixtures::z5_spec()), 0)
                .unwrap()
                .theta,
            3
        );
    }

    #[test]
    fn balls_and_layers() {
        let q3 = cayley(fixtures::q3_spec());
        assert_eq!(ball(&q3, 0, 1).len(), 4);
        assert_eq!(layer(&q3, 0, 0), vec![0]);
        let petersen = cayley(fixtures::petersen_spec());
        assert_eq!(layer(&petersen, 0, 2).len(), 6);
        for r in 1..=3 {
            let inner = ball(&q3, 5, r - 1);
            let outer = ball(&q3, 5, r);
            assert!(inner.iter().all(|v| outer.contains(v)));
            let mut shell = layer(&q3, 5, r);
            shell.extend(&inner);
            shell.sort();
            assert_eq!(shell, outer);
        }
    }

    #[test]
    fn disconnected_digraph_errors() {
        let d = Digraph::new(4, vec![(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        assert!(matches!(
            layer_profile(&d, 0),
            Err(Error::NotConnected { .. })
        ));
    }

    #[test]
    fn profile_identities_hold_on_corpus() {
        for spec in [
            fixtures::c4_spec(),
            fixtures::q3_spec(),
            fixtures::z5_spec(),
            fixtures::z7_spec(),
            fixtures::k4_spec(),
            fixtures::petersen_spec(),
        ] {
            let g = cayley(spec);
            let p = layer_profile(&g, 0).unwrap();
            assert_eq!(p.counts.iter().sum::<usize>(), p.vertex_count);
            for (k, &n) in p.counts.iter().enumerate() {
                assert_eq!(p.pair_counts[k], p.vertex_count * n);
            }
            assert_eq!(p.pair_bound(), p.theta);
            assert!(p.theta >= 1);
            for base in 0..g.order() {
                assert_eq!(layer_profile(&g, base).unwrap().counts, p.counts);
            }
        }
    }
}
