//! On-disk formats: graph spec files, word sets, spanning factorizations
//! and schedules. Every writer here has a matching reader that accepts its
//! output unchanged.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::factor::{verify_spanning, OneFactorization, SpanningFactorization, SpanningVerdict};
use crate::fixtures::GraphSource;
use crate::graph::{Adjacency, CosetGraph, Digraph};
use crate::group::{GroupKind, GroupSpec};
use crate::schedule::Schedule;
use crate::words::{WordList, WordSet};

fn json_error(path: &str, e: &serde_json::Error) -> Error {
    Error::parse(format!("{path}:{}:{}", e.line(), e.column()), e.to_string())
}

/// Parses a graph spec document: either
/// `{"group": kind, "generators": [...], "subgroup": [...]}` or
/// `{"digraph": {"n": n, "arcs": [[src, dst], ...]}}`.
pub fn parse_graph_spec(text: &str, path: &str) -> Result<GraphSource> {
    let value: Value = serde_json::from_str(text).map_err(|e| json_error(path, &e))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse(path, "expected a JSON object"))?;
    match (obj.get("group"), obj.get("digraph")) {
        (Some(_), Some(_)) => Err(Error::parse(
            path,
            "give either \"group\" or \"digraph\", not both",
        )),
        (None, None) => Err(Error::parse(path, "missing \"group\" or \"digraph\"")),
        (Some(kind), None) => {
            let kind = GroupKind::from_json(kind, &format!("{path}/group"))?;
            let list = |key: &str, required: bool| -> Result<Vec<_>> {
                let items = match obj.get(key) {
                    Some(Value::Array(items)) => items.as_slice(),
                    None if !required => &[],
                    _ => return Err(Error::parse(format!("{path}/{key}"), "expected an array")),
                };
                items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| kind.parse_element(v, &format!("{path}/{key}/{i}")))
                    .collect()
            };
            let generators = list("generators", true)?;
            let subgroup = list("subgroup", false)?;
            Ok(GraphSource::Group(GroupSpec::new(
                kind, generators, subgroup,
            )?))
        }
        (None, Some(d)) => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Raw {
                n: usize,
                arcs: Vec<(usize, usize)>,
            }
            let raw: Raw = serde_json::from_value(d.clone())
                .map_err(|e| Error::parse(format!("{path}/digraph"), e.to_string()))?;
            Ok(GraphSource::Digraph(Digraph::new(raw.n, raw.arcs)?))
        }
    }
}

/// Inverse of [`parse_graph_spec`].
pub fn graph_spec_to_json(source: &GraphSource) -> Value {
    match source {
        GraphSource::Group(spec) => json!({
            "group": spec.kind.to_json(),
            "generators": spec.generators.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "subgroup": spec.subgroup.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        }),
        GraphSource::Digraph(g) => json!({ "digraph": { "n": g.order(), "arcs": g.arcs() } }),
    }
}

/// `{"degree": d, "words": {"<vertex>": [generator, ...]}}`; other keys
/// are ignored on read.
pub fn word_set_to_json(words: &WordSet) -> Value {
    let map: BTreeMap<String, &Vec<usize>> = words
        .words()
        .iter()
        .map(|(v, w)| (v.to_string(), w))
        .collect();
    json!({ "degree": words.degree(), "words": map })
}

pub fn parse_word_set(graph: &CosetGraph, text: &str, path: &str) -> Result<WordSet> {
    #[derive(Deserialize)]
    struct Raw {
        degree: usize,
        words: BTreeMap<String, Vec<usize>>,
    }
    let raw: Raw = serde_json::from_str(text).map_err(|e| json_error(path, &e))?;
    if raw.degree != graph.degree() {
        return Err(Error::parse(
            path,
            format!(
                "word set has degree {}, graph has {}",
                raw.degree,
                graph.degree()
            ),
        ));
    }
    let words = raw
        .words
        .into_iter()
        .map(|(k, w)| {
            k.parse::<usize>()
                .map(|v| (v, w))
                .map_err(|_| Error::parse(format!("{path}/words"), format!("bad vertex key {k:?}")))
        })
        .collect::<Result<_>>()?;
    WordSet::new(graph, words, false)
}

#[derive(Serialize, Deserialize)]
struct FactorizationFile {
    n: usize,
    /// `successors[f][v]`.
    successors: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    words: Option<Vec<Vec<usize>>>,
}

/// `{"n": n, "successors": [[...], ...], "words": [[...], ...]}`.
pub fn factorization_to_json(
    factorization: &OneFactorization,
    words: Option<&[Vec<usize>]>,
) -> Value {
    serde_json::to_value(FactorizationFile {
        n: factorization.vertex_count(),
        successors: factorization.successor_maps().to_vec(),
        words: words.map(<[_]>::to_vec),
    })
    .expect("plain data serializes")
}

/// The digraph made of every factor's arcs, factor by factor.
pub fn factor_digraph(factorization: &OneFactorization) -> Digraph {
    let arcs = factorization
        .successor_maps()
        .iter()
        .flat_map(|succ| succ.iter().copied().enumerate())
        .collect();
    Digraph::new(factorization.vertex_count(), arcs).expect("successors are in range")
}

/// Reads a factorization file, rebuilding and re-checking every factor.
pub fn parse_one_factorization(
    text: &str,
    path: &str,
) -> Result<(OneFactorization, Option<Vec<Vec<usize>>>)> {
    let raw: FactorizationFile = serde_json::from_str(text).map_err(|e| json_error(path, &e))?;
    let d = raw.successors.len();
    let mut arcs = Vec::with_capacity(raw.n * d);
    let mut factor_of = Vec::with_capacity(raw.n * d);
    for (f, succ) in raw.successors.iter().enumerate() {
        if succ.len() != raw.n {
            return Err(Error::parse(
                format!("{path}/successors/{f}"),
                format!("expected {} entries", raw.n),
            ));
        }
        for (v, &w) in succ.iter().enumerate() {
            arcs.push((v, w));
            factor_of.push(f);
        }
    }
    let graph = Digraph::new(raw.n, arcs)?;
    let factorization = OneFactorization::from_assignment(&graph, factor_of, d)?;
    Ok((factorization, raw.words))
}

/// Reads a factorization file that must carry a spanning word list.
pub fn parse_spanning_factorization(text: &str, path: &str) -> Result<SpanningFactorization> {
    let (factorization, words) = parse_one_factorization(text, path)?;
    let words = words.ok_or_else(|| Error::parse(path, "missing \"words\""))?;
    match verify_spanning(&factorization, &words) {
        SpanningVerdict::Spanning => Ok(SpanningFactorization {
            factorization,
            words,
        }),
        other => Err(Error::Contract(format!("{path}: not spanning: {other:?}"))),
    }
}

/// Whether two digraphs have the same arcs with multiplicity.
pub fn same_arcs(a: &Digraph, b: &Digraph) -> bool {
    let sorted = |g: &Digraph| {
        let mut arcs = g.arcs().to_vec();
        arcs.sort_unstable();
        arcs
    };
    a.order() == b.order() && sorted(a) == sorted(b)
}

#[derive(Serialize, Deserialize)]
struct ScheduleRow {
    word_target: usize,
    position: usize,
    factor: usize,
    time: usize,
}

/// Rows `word_target,position,factor,time`, positions 0-based.
pub fn schedule_to_csv(words: &WordList, schedule: &Schedule) -> Result<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    for ((word, times), &target) in words.words.iter().zip(&schedule.times).zip(&words.targets) {
        for (position, (&factor, &time)) in word.iter().zip(times).enumerate() {
            out.serialize(ScheduleRow {
                word_target: target,
                position,
                factor,
                time,
            })
            .map_err(|e| Error::Internal(e.to_string()))?;
        }
    }
    let bytes = out
        .into_inner()
        .map_err(|e| Error::Internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

/// Reads a schedule for `words`, matching rows by target vertex and
/// position and checking the factor column against the word.
pub fn parse_schedule_csv(words: &WordList, text: &str, path: &str) -> Result<Schedule> {
    let index: BTreeMap<usize, usize> = words
        .targets
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, i))
        .collect();
    let mut times: Vec<Vec<Option<usize>>> =
        words.words.iter().map(|w| vec![None; w.len()]).collect();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for (line, row) in reader.deserialize::<ScheduleRow>().enumerate() {
        let at = format!("{path}:{}", line + 2);
        let row = row.map_err(|e| Error::parse(&at, e.to_string()))?;
        let &w = index
            .get(&row.word_target)
            .ok_or_else(|| Error::parse(&at, format!("no word for target {}", row.word_target)))?;
        let slot = times[w].get_mut(row.position).ok_or_else(|| {
            Error::parse(&at, format!("position {} past the word end", row.position))
        })?;
        if words.words[w][row.position] != row.factor {
            return Err(Error::parse(
                &at,
                format!(
                    "factor {} does not match the word letter {}",
                    row.factor, words.words[w][row.position]
                ),
            ));
        }
        if slot.replace(row.time).is_some() {
            return Err(Error::parse(&at, "duplicate row"));
        }
    }
    let times = times
        .into_iter()
        .enumerate()
        .map(|(w, t)| {
            t.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
                Error::parse(
                    path,
                    format!(
                        "word for target {} is not fully scheduled",
                        words.targets[w]
                    ),
                )
            })
        })
        .collect::<Result<_>>()?;
    Ok(Schedule { times })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::one_factorize;
    use crate::fixtures;
    use crate::graph::build_cayley_coset_graph;
    use crate::schedule::greedy_schedule;
    use crate::words::{bfs_word_set, WordMode};

    #[test]
    fn group_specs_round_trip() {
        for name in fixtures::BUILTIN_NAMES {
            let source = fixtures::builtin(name).unwrap();
            let text = graph_spec_to_json(&source).to_string();
            let back = parse_graph_spec(&text, "mem").unwrap();
            match (&source, &back) {
                (GraphSource::Group(a), GraphSource::Group(b)) => assert_eq!(a, b),
                (GraphSource::Digraph(a), GraphSource::Digraph(b)) => {
                    assert_eq!(a.arcs(), b.arcs())
                }
                _ => panic!("{name} changed form"),
            }
        }
    }

    #[test]
    fn hand_written_spec_with_cycle_strings() {
        let text = r#"{"group": {"permutation": 5},
                       "generators": ["(13)(24)", "(13)(25)", "(14)(25)"],
                       "subgroup": []}"#;
        let GraphSource::Group(spec) = parse_graph_spec(text, "p.json").unwrap() else {
            panic!("expected a group spec");
        };
        assert_eq!(spec.generators, fixtures::petersen_spec().generators);
    }

    #[test]
    fn malformed_specs_carry_location() {
        let err = parse_graph_spec("{\n  \"group\": ", "bad.json").unwrap_err();
        assert!(matches!(&err, Error::Parse { path, .. } if path.starts_with("bad.json:2:")));
        assert!(parse_graph_spec("{}", "x").is_err());
        assert!(parse_graph_spec(
            r#"{"group": {"cyclic": 4}, "generators": [1], "digraph": {"n": 1, "arcs": []}}"#,
            "x"
        )
        .is_err());
        let err =
            parse_graph_spec(r#"{"group": {"cyclic": 4}, "generators": ["a"]}"#, "x").unwrap_err();
        assert!(matches!(&err, Error::Parse { path, .. } if path == "x/generators/0"));
    }

    #[test]
    fn word_sets_round_trip() {
        let g = build_cayley_coset_graph(&fixtures::q3_spec()).unwrap();
        let w = bfs_word_set(&g, WordMode::LoadBalanced).unwrap();
        let text = word_set_to_json(&w).to_string();
        assert_eq!(parse_word_set(&g, &text, "w").unwrap().words(), w.words());
        let z7 = build_cayley_coset_graph(&fixtures::z7_spec()).unwrap();
        assert!(parse_word_set(&z7, &text, "w").is_err());
    }

    #[test]
    fn factorizations_round_trip() {
        let g = fixtures::petersen_digraph();
        let f = one_factorize(&g).unwrap();
        let text = factorization_to_json(&f, None).to_string();
        let (back, words) = parse_one_factorization(&text, "f").unwrap();
        assert_eq!(back.successor_maps(), f.successor_maps());
        assert!(words.is_none());
        assert!(same_arcs(&factor_digraph(&back), &g));
        assert!(parse_spanning_factorization(&text, "f").is_err());

        let broken = text.replacen("[", "[[0,0,0,0,0,0,0,0,0,0],", 2);
        assert!(parse_one_factorization(&broken, "f").is_err());
    }

    #[test]
    fn schedules_round_trip() {
        let g = build_cayley_coset_graph(&fixtures::c4_spec()).unwrap();
        let list = bfs_word_set(&g, WordMode::FirstFound)
            .unwrap()
            .to_word_list();
        let s = greedy_schedule(&list);
        let text = schedule_to_csv(&list, &s).unwrap();
        assert!(text.starts_with("word_target,position,factor,time\n"));
        assert_eq!(text.lines().count(), 7);
        assert_eq!(parse_schedule_csv(&list, &text, "s").unwrap(), s);

        let missing: String = text.lines().take(6).map(|l| format!("{l}\n")).collect();
        assert!(parse_schedule_csv(&list, &missing, "s").is_err());
        let wrong = text.replace("3,2,0,3", "3,2,1,3");
        assert!(parse_schedule_csv(&list, &wrong, "s").is_err());
    }
}
