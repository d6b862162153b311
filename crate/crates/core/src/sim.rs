//! Expanding schedules into timed all-pairs paths and replaying the
//! transpose slot by slot.
//!
//! The replay does not trust the paths: it moves each packet itself, so a
//! path that is not a walk, skips a slot ordering or ends at the wrong vertex
//! is caught here rather than assumed away.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{verify_spanning, SpanningFactorization, SpanningVerdict};
use crate::graph::CosetGraph;
use crate::schedule::Schedule;
use crate::words::WordSet;

/// A link resource: the arc leaving `tail` with the given generator or
/// factor label. Parallel arcs with different labels are distinct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub tail: usize,
    pub label: usize,
}

/// A labeled, out-regular graph: every vertex has exactly one out-arc per
/// label.
pub trait LabeledGraph {
    fn vertex_count(&self) -> usize;
    fn label_count(&self) -> usize;
    fn head(&self, edge: Edge) -> Option<usize>;
}

impl LabeledGraph for CosetGraph {
    fn vertex_count(&self) -> usize {
        self.order()
    }

    fn label_count(&self) -> usize {
        self.degree()
    }

    fn head(&self, edge: Edge) -> Option<usize> {
        (edge.tail < self.order() && edge.label < self.degree())
            .then(|| self.target(edge.tail, edge.label))
    }
}

impl LabeledGraph for crate::factor::OneFactorization {
    fn vertex_count(&self) -> usize {
        crate::factor::OneFactorization::vertex_count(self)
    }

    fn label_count(&self) -> usize {
        self.factor_count()
    }

    fn head(&self, edge: Edge) -> Option<usize> {
        (edge.tail < crate::factor::OneFactorization::vertex_count(self)
            && edge.label < self.factor_count())
        .then(|| self.successor(edge.label, edge.tail))
    }
}

/// The route of the packet from `source` to `destination`, one arc per
/// step with the slot it is crossed in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TimedPath {
    pub source: usize,
    pub destination: usize,
    pub steps: Vec<(Edge, usize)>,
}

fn expand<G: LabeledGraph>(graph: &G, words: &[Vec<usize>], schedule: &Schedule) -> Vec<TimedPath> {
    let n = graph.vertex_count();
    let mut paths = Vec::with_capacity(n * words.len());
    for source in 0..n {
        for (word, times) in words.iter().zip(&schedule.times) {
            let mut at = source;
            let mut steps = Vec::with_capacity(word.len());
            for (&label, &t) in word.iter().zip(times) {
                let edge = Edge { tail: at, label };
                steps.push((edge, t));
                at = graph.head(edge).expect("validated word letters");
            }
            paths.push(TimedPath {
                source,
                destination: at,
                steps,
            });
        }
    }
    paths
}

/// Translates every word `w(g)` to the path `h·w(g)` from each vertex `h`,
/// reusing the word's slots. Only Cayley graphs (trivial subgroup) qualify.
pub fn expand_cayley_paths(
    graph: &CosetGraph,
    words: &WordSet,
    schedule: &Schedule,
) -> Result<Vec<TimedPath>> {
    if !graph.is_cayley() {
        return Err(Error::Unsupported(
            "translated word paths need a trivial subgroup; use a spanning factorization instead"
                .into(),
        ));
    }
    words.check(graph)?;
    let list = words.to_word_list();
    schedule.validate(&list)?;
    if list.len() + 1 != graph.order() {
        return Err(Error::Contract(format!(
            "{} words for {} vertices",
            list.len(),
            graph.order()
        )));
    }
    Ok(expand(graph, &list.words, schedule))
}

/// Paths `v·ω_i` for every vertex `v` and every non-empty word `ω_i`.
pub fn expand_factor_paths(
    factorization: &SpanningFactorization,
    schedule: &Schedule,
) -> Result<Vec<TimedPath>> {
    let verdict = verify_spanning(&factorization.factorization, &factorization.words);
    if verdict != SpanningVerdict::Spanning {
        return Err(Error::Contract(format!(
            "not a spanning factorization: {verdict:?}"
        )));
    }
    let list = factorization.word_list();
    schedule.validate(&list)?;
    Ok(expand(&factorization.factorization, &list.words, schedule))
}

/// One packet crossing one arc in one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub edge: Edge,
    pub head: usize,
    pub packet: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub time: usize,
    pub edge: Edge,
    pub first: (usize, usize),
    pub second: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Malformed {
    pub path: usize,
    pub reason: String,
}

/// Outcome of a replay.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransposeTrace {
    /// Last slot used.
    pub horizon: usize,
    /// `occupancy[t - 1]`: moves made in slot `t`, in edge order.
    pub occupancy: Vec<Vec<Move>>,
    pub conflicts: Vec<Conflict>,
    /// Ordered pairs `(i, j)`, `i ≠ j`, with no packet delivered.
    pub undelivered: Vec<(usize, usize)>,
    /// Pairs delivered by more than one path.
    pub duplicated: Vec<(usize, usize)>,
    pub malformed: Vec<Malformed>,
    pub delivered: usize,
}

impl TransposeTrace {
    pub fn is_valid(&self) -> bool {
        self.conflicts.is_empty()
            && self.undelivered.is_empty()
            && self.duplicated.is_empty()
            && self.malformed.is_empty()
    }

    /// Rows `time,src,dst,gen,packet_src,packet_dst` with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,src,dst,gen,packet_src,packet_dst\n");
        for (i, slot) in self.occupancy.iter().enumerate() {
            for m in slot {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    i + 1,
                    m.edge.tail,
                    m.head,
                    m.edge.label,
                    m.packet.0,
                    m.packet.1
                );
            }
        }
        out
    }
}

/// Replays `paths` on `graph`, one slot at a time.
///
/// A packet starts at its source and, in the slot of each step, must sit at
/// that step's tail; it then moves to the head. Two packets on one edge in
/// one slot are a conflict. Problems are recorded, never raised.
pub fn run_transpose<G: LabeledGraph>(graph: &G, paths: &[TimedPath]) -> TransposeTrace {
    let n = graph.vertex_count();
    let mut trace = TransposeTrace::default();
    let mut at: Vec<usize> = paths.iter().map(|p| p.source).collect();
    let mut last: Vec<usize> = vec![0; paths.len()];
    let mut broken: Vec<bool> = vec![false; paths.len()];

    let mut events: Vec<(usize, usize, usize)> = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        if p.source >= n || p.destination >= n {
            broken[i] = true;
            trace.malformed.push(Malformed {
                path: i,
                reason: format!("endpoint outside 0..{n}"),
            });
            continue;
        }
        for (k, &(_, t)) in p.steps.iter().enumerate() {
            events.push((t, i, k));
        }
    }
    events.sort_unstable();

    let mut slot: BTreeMap<Edge, (usize, usize)> = BTreeMap::new();
    let mut current = None;
    let flush = |time: Option<usize>,
                 slot: &mut BTreeMap<Edge, (usize, usize)>,
                 trace: &mut TransposeTrace| {
        if let Some(t) = time {
            if trace.occupancy.len() < t {
                trace.occupancy.resize(t, Vec::new());
            }
            trace.occupancy[t - 1] = std::mem::take(slot)
                .into_iter()
                .map(|(edge, packet)| Move {
                    edge,
                    head: graph.head(edge).expect("recorded edges exist"),
                    packet,
                })
                .collect();
        }
    };

    for (t, i, k) in events {
        if broken[i] {
            continue;
        }
        if current != Some(t) {
            flush(current, &mut slot, &mut trace);
            current = Some(t);
        }
        let path = &paths[i];
        let packet = (path.source, path.destination);
        let (edge, _) = path.steps[k];
        let fail = if t == 0 || t <= last[i] {
            Some(format!(
                "step {k} at slot {t} does not follow slot {}",
                last[i]
            ))
        } else if edge.tail != at[i] {
            Some(format!(
                "step {k} leaves {} but the packet is at {}",
                edge.tail, at[i]
            ))
        } else if graph.head(edge).is_none() {
            Some(format!("step {k} uses missing edge {edge:?}"))
        } else {
            None
        };
        if let Some(reason) = fail {
            broken[i] = true;
            trace.malformed.push(Malformed { path: i, reason });
            continue;
        }
        if let Some(&first) = slot.get(&edge) {
            trace.conflicts.push(Conflict {
                time: t,
                edge,
                first,
                second: packet,
            });
        } else {
            slot.insert(edge, packet);
        }
        at[i] = graph.head(edge).expect("checked above");
        last[i] = t;
        trace.horizon = trace.horizon.max(t);
    }
    flush(current, &mut slot, &mut trace);

    let mut seen = BTreeSet::new();
    for (i, p) in paths.iter().enumerate() {
        if broken[i] {
            continue;
        }
        if at[i] != p.destination {
            trace.malformed.push(Malformed {
                path: i,
                reason: format!("ends at {} instead of {}", at[i], p.destination),
            });
            continue;
        }
        if p.source == p.destination {
            continue;
        }
        if seen.insert((p.source, p.destination)) {
            trace.delivered += 1;
        } else {
            trace.duplicated.push((p.source, p.destination));
        }
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if !seen.contains(&(i, j)) {
                trace.undelivered.push((i, j));
            }
        }
    }
    trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{
        search_spanning_factorization, spanning_factorization_from_cayley, SearchOutcome,
    };
    use crate::fixtures;
    use crate::graph::build_cayley_coset_graph;
    use crate::layers::layer_profile;
    use crate::schedule::{best_layer_two_words, exact_min_schedule, greedy_schedule};
    use crate::words::{bfs_word_set, WordMode};

    fn cayley(spec: crate::group::GroupSpec) -> CosetGraph {
        build_cayley_coset_graph(&spec).unwrap()
    }

    #[test]
    fn cycle_transpose_takes_six_slots() {
        let g = cayley(fixtures::c4_spec());
        let w = bfs_word_set(&g, WordMode::FirstFound).unwrap();
        let s = greedy_schedule(&w.to_word_list());
        let paths = expand_cayley_paths(&g, &w, &s).unwrap();
        assert_eq!(paths.len(), 12);
        let trace = run_transpose(&g, &paths);
        assert!(trace.is_valid(), "{trace:?}");
        assert_eq!(trace.delivered, 12);
        assert_eq!(trace.horizon, 6);
        assert_eq!(trace.horizon, layer_profile(&g, 0).unwrap().theta);
    }

    #[test]
    fn cube_paths_are_short_and_conflict_free() {
        let g = cayley(fixtures::q3_spec());
        let w = bfs_word_set(&g, WordMode::LoadBalanced).unwrap();
        let list = w.to_word_list();
        let s = exact_min_schedule(&list, 10, 1_000_000)
            .unwrap()
            .schedule()
            .unwrap()
            .clone();
        let paths = expand_cayley_paths(&g, &w, &s).unwrap();
        assert_eq!(paths.len(), 56);
        assert!(paths.iter().all(|p| p.steps.len() <= 3));
        let trace = run_transpose(&g, &paths);
        assert!(trace.is_valid());
        assert_eq!(trace.horizon, 4);
    }

    #[test]
    fn circulant_diameter_two_schedule_replays() {
        let g = cayley(fixtures::z7_spec());
        let w = best_layer_two_words(&g).unwrap();
        let list = w.to_word_list();
        let s = exact_min_schedule(&list, 3, 1_000_000)
            .unwrap()
            .schedule()
            .unwrap()
            .clone();
        let paths = expand_cayley_paths(&g, &w, &s).unwrap();
        assert_eq!(paths.len(), 42);
        let trace = run_transpose(&g, &paths);
        assert!(trace.is_valid());
        assert_eq!((trace.delivered, trace.horizon), (42, 3));
    }

    #[test]
    fn factor_route_on_cube_and_petersen() {
        let q3 = cayley(fixtures::q3_spec());
        let w = bfs_word_set(&q3, WordMode::LoadBalanced).unwrap();
        let (_, sf) = spanning_factorization_from_cayley(&q3, &w).unwrap();
        let s = greedy_schedule(&sf.word_list());
        let paths = expand_factor_paths(&sf, &s).unwrap();
        assert_eq!(paths.len(), 56);
        assert!(run_transpose(&sf.factorization, &paths).is_valid());

        let outcome =
            search_spanning_factorization(&fixtures::petersen_digraph(), 1_000_000).unwrap();
        let SearchOutcome::Found { factorization, .. } = outcome else {
            panic!("search failed");
        };
        let s = greedy_schedule(&factorization.word_list());
        let paths = expand_factor_paths(&factorization, &s).unwrap();
        assert_eq!(paths.len(), 90);
        let trace = run_transpose(&factorization.factorization, &paths);
        assert!(trace.is_valid());
        assert!(trace.horizon >= 5);
    }

    #[test]
    fn shared_edge_in_one_slot_is_a_conflict() {
        let g = cayley(fixtures::c4_spec());
        let e = Edge { tail: 0, label: 0 };
        let paths = vec![
            TimedPath {
                source: 0,
                destination: 1,
                steps: vec![(e, 1)],
            },
            TimedPath {
                source: 0,
                destination: 1,
                steps: vec![(e, 1)],
            },
        ];
        let trace = run_transpose(&g, &paths);
        assert_eq!(trace.conflicts.len(), 1);
        assert_eq!(trace.conflicts[0].time, 1);
        assert_eq!(trace.duplicated, vec![(0, 1)]);
        assert!(!trace.is_valid());
    }

    #[test]
    fn broken_paths_are_reported() {
        let g = cayley(fixtures::c4_spec());
        let paths = vec![
            // not incident
            TimedPath {
                source: 0,
                destination: 2,
                steps: vec![
                    (Edge { tail: 0, label: 0 }, 1),
                    (Edge { tail: 3, label: 0 }, 2),
                ],
            },
            // times do not increase
            TimedPath {
                source: 1,
                destination: 3,
                steps: vec![
                    (Edge { tail: 1, label: 0 }, 2),
                    (Edge { tail: 2, label: 0 }, 2),
                ],
            },
            // wrong endpoint
            TimedPath {
                source: 2,
                destination: 0,
                steps: vec![(Edge { tail: 2, label: 0 }, 1)],
            },
        ];
        let trace = run_transpose(&g, &paths);
        assert_eq!(trace.malformed.len(), 3);
        assert_eq!(trace.undelivered.len(), 12);
    }

    #[test]
    fn coset_graphs_are_refused_on_the_translation_route() {
        let g = cayley(fixtures::petersen_spec());
        let options = crate::words::all_shortest_words(&g, 10_000).unwrap();
        let words = (1..g.order()).map(|v| (v, options[v][0].clone())).collect();
        let w = WordSet::new(&g, words, true).unwrap();
        let s = greedy_schedule(&w.to_word_list());
        assert!(matches!(
            expand_cayley_paths(&g, &w, &s),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn invalid_schedule_is_refused_before_expansion() {
        let g = cayley(fixtures::c4_spec());
        let w = bfs_word_set(&g, WordMode::FirstFound).unwrap();
        let bad = Schedule {
            times: vec![vec![1], vec![1, 2], vec![1, 2, 3]],
        };
        assert!(matches!(
            expand_cayley_paths(&g, &w, &bad),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn trace_csv_has_one_row_per_move() {
        let g = cayley(fixtures::c4_spec());
        let w = bfs_word_set(&g, WordMode::FirstFound).unwrap();
        let s = greedy_schedule(&w.to_word_list());
        let trace = run_transpose(&g, &expand_cayley_paths(&g, &w, &s).unwrap());
        let csv = trace.to_csv();
        // 4 bases × (1 + 2 + 3) letters
        assert_eq!(csv.lines().count(), 1 + 24);
        assert!(csv.starts_with("time,src,dst,gen,packet_src,packet_dst\n"));
    }
}
