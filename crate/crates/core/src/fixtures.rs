//! Built-in graphs used by the examples, tests and the `--builtin` flag.

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::group::{enumerate_group, Element, GroupKind, GroupSpec, Permutation, Subgroup};

/// Either a group description or an explicit digraph.
#[derive(Clone, Debug)]
pub enum GraphSource {
    Group(GroupSpec),
    Digraph(Digraph),
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "c4",
    "q3",
    "z7-124",
    "z5-12",
    "k4",
    "petersen",
    "petersen-digraph",
    "triangle",
];

pub fn builtin(name: &str) -> Result<GraphSource> {
    Ok(match name {
        "c4" => GraphSource::Group(c4_spec()),
        "q3" => GraphSource::Group(q3_spec()),
        "z7-124" => GraphSource::Group(z7_spec()),
        "z5-12" => GraphSource::Group(z5_spec()),
        "k4" => GraphSource::Group(k4_spec()),
        "petersen" => GraphSource::Group(petersen_spec()),
        "petersen-digraph" => GraphSource::Digraph(petersen_digraph()),
        "triangle" => GraphSource::Digraph(bidirected_triangle()),
        other => {
            return Err(Error::Unsupported(format!(
                "unknown builtin {other:?}; expected one of {}",
                BUILTIN_NAMES.join(", ")
            )))
        }
    })
}

fn cyclic(modulus: u64, gens: &[u64]) -> GroupSpec {
    GroupSpec::cyclic(modulus, gens).expect("valid builtin")
}

/// Directed 4-cycle, `Cay(Z_4, {1})`.
pub fn c4_spec() -> GroupSpec {
    cyclic(4, &[1])
}

/// Circulant `Cay(Z_7, {1, 2, 4})`, diameter 2.
pub fn z7_spec() -> GroupSpec {
    cyclic(7, &[1, 2, 4])
}

/// Circulant `Cay(Z_5, {1, 2})`, diameter 2.
pub fn z5_spec() -> GroupSpec {
    cyclic(5, &[1, 2])
}

/// Complete digraph on four vertices, `Cay(Z_4, {1, 2, 3})`.
pub fn k4_spec() -> GroupSpec {
    cyclic(4, &[1, 2, 3])
}

/// The 3-cube, `Cay(Z_2^3, {e1, e2, e3})`.
pub fn q3_spec() -> GroupSpec {
    let kind = GroupKind::Product(vec![GroupKind::Cyclic { modulus: 2 }; 3]);
    let unit = |i: usize| {
        Element::Tuple(
            (0..3)
                .map(|k| Element::residue(u64::from(k == i), 2))
                .collect(),
        )
    };
    GroupSpec::new(kind, (0..3).map(unit).collect(), Vec::new()).expect("valid builtin")
}

/// A permutation of five points from 1-based cycle notation.
pub fn perm5(cycles: &str) -> Element {
    Element::Perm(Permutation::from_cycles(cycles, 5).expect("valid builtin cycle"))
}

fn s5_elements() -> Vec<Element> {
    let spec = GroupSpec::new(
        GroupKind::Permutation { degree: 5 },
        vec![perm5("(1 2)"), perm5("(1 2 3 4 5)")],
        Vec::new(),
    )
    .expect("valid builtin");
    enumerate_group(&spec, 1000)
        .expect("S5 has 120 elements")
        .elements()
        .to_vec()
}

/// The twelve permutations of S5 that map the set `{1, 2}` to itself.
pub fn petersen_stabilizer_elements() -> Vec<Element> {
    s5_elements()
        .into_iter()
        .filter(|e| match e {
            Element::Perm(p) => {
                let (a, b) = (p.apply(0), p.apply(1));
                a.max(b) == 1
            }
            _ => false,
        })
        .collect()
}

pub fn petersen_stabilizer() -> Subgroup {
    Subgroup::new(
        &GroupKind::Permutation { degree: 5 },
        &petersen_stabilizer_elements(),
    )
    .expect("set stabilizer is a subgroup")
}

/// The Petersen graph as the coset graph of S5 over the stabilizer of
/// `{1, 2}`, generated by `(13)(24)`, `(13)(25)` and `(14)(25)`.
pub fn petersen_spec() -> GroupSpec {
    GroupSpec::new(
        GroupKind::Permutation { degree: 5 },
        vec![perm5("(13)(24)"), perm5("(13)(25)"), perm5("(14)(25)")],
        petersen_stabilizer_elements(),
    )
    .expect("valid builtin")
}

/// `x = (34)(125)` and `δ₁ = (13)(24)`.
pub fn petersen_x_and_delta() -> (Element, Element) {
    (perm5("(34)(125)"), perm5("(13)(24)"))
}

/// Petersen graph as a bidirected digraph: vertices are the 2-subsets of
/// `{0..4}` in lexicographic order, adjacent when disjoint.
pub fn petersen_digraph() -> Digraph {
    let subsets: Vec<(usize, usize)> = (0..5)
        .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
        .collect();
    let mut edges = Vec::new();
    for (i, &(a, b)) in subsets.iter().enumerate() {
        for (j, &(c, e)) in subsets.iter().enumerate().skip(i + 1) {
            if a != c && a != e && b != c && b != e {
                edges.push((i, j));
            }
        }
    }
    Digraph::bidirected(10, &edges).expect("valid builtin")
}

/// Triangle with both orientations of every edge.
pub fn bidirected_triangle() -> Digraph {
    Digraph::bidirected(3, &[(0, 1), (1, 2), (0, 2)]).expect("valid builtin")
}

/// Directed cycle on `n` vertices as a raw digraph.
pub fn directed_cycle(n: usize) -> Digraph {
    Digraph::new(n, (0..n).map(|v| (v, (v + 1) % n)).collect()).expect("valid cycle")
}
