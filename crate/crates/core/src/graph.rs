//! Directed Cayley coset graphs and plain regular digraphs.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::{
    compose, coset_canonicalize, enumerate_group, Element, GroupSpec, Subgroup,
    DEFAULT_ENUMERATION_CAP,
};

/// Out-neighbour access shared by [`CosetGraph`] and [`Digraph`].
///
/// Successors are listed in generator-index order for coset graphs and in
/// arc order for digraphs; BFS-based code relies on that order for
/// deterministic tie-breaking.
pub trait Adjacency {
    fn order(&self) -> usize;
    fn successors(&self, v: usize) -> &[usize];
}

/// The graph `G = (group, generators, subgroup)`: vertices are left cosets
/// `gH`, with an arc `gH -> g·δ_j·H` for every generator index `j`.
///
/// Vertices are stored as canonical (minimal) coset representatives in
/// ascending order, so vertex 0 is always the coset `H` itself.
#[derive(Clone, Debug)]
pub struct CosetGraph {
    spec: GroupSpec,
    subgroup: Subgroup,
    vertices: Vec<Element>,
    index: HashMap<Element, usize>,
    targets: Vec<Vec<usize>>,
}

impl CosetGraph {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    /// Number of generators, counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.spec.generators.len()
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn generators(&self) -> &[Element] {
        &self.spec.generators
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// True when the subgroup is trivial, i.e. this is a plain Cayley graph
    /// and arcs carry well-defined generator labels.
    pub fn is_cayley(&self) -> bool {
        self.subgroup.is_trivial()
    }

    pub fn representative(&self, v: usize) -> &Element {
        &self.vertices[v]
    }

    pub fn vertex_of(&self, element: &Element) -> Option<usize> {
        let rep = coset_canonicalize(element, &self.subgroup).ok()?;
        self.index.get(&rep).copied()
    }

    /// Head of the arc leaving `v` under generator index `generator`.
    pub fn target(&self, v: usize, generator: usize) -> usize {
        self.targets[v][generator]
    }

    /// Follows a word of generator indices from `v`.
    pub fn walk(&self, v: usize, word: &[usize]) -> usize {
        word.iter().fold(v, |u, &j| self.targets[u][j])
    }
}

impl Adjacency for CosetGraph {
    fn order(&self) -> usize {
        self.vertices.len()
    }

    fn successors(&self, v: usize) -> &[usize] {
        &self.targets[v]
    }
}

/// A directed multigraph given by its arc list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    out_arcs: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        let mut out_arcs = vec![Vec::new(); n];
        for (i, &(s, t)) in arcs.iter().enumerate() {
            if s >= n || t >= n {
                return Err(Error::Structural(format!(
                    "arc {i} = ({s}, {t}) has an endpoint outside 0..{n}"
                )));
            }
            out[s].push(t);
            out_arcs[s].push(i);
        }
        Ok(Digraph {
            n,
            arcs,
            out,
            out_arcs,
        })
    }

    /// Bidirected version of an undirected edge list: each edge `{u, v}`
    /// becomes the arcs `(u, v)` and `(v, u)`.
    pub fn bidirected(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let arcs = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
        Digraph::new(n, arcs)
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Arc indices leaving `v`, in arc order.
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(_, t) in &self.arcs {
            deg[t] += 1;
        }
        deg
    }

    /// The common in- and out-degree, or the first vertex where regularity
    /// fails.
    pub fn regular_degree(&self) -> Result<usize> {
        if self.n == 0 {
            return Err(Error::Structural("digraph has no vertices".into()));
        }
        let expected = self.out[0].len();
        let ins = self.in_degrees();
        for (v, (out, &in_degree)) in self.out.iter().zip(&ins).enumerate() {
            if out.len() != expected || in_degree != expected {
                return Err(Error::NotRegular {
                    vertex: v,
                    out_degree: out.len(),
                    in_degree,
                    expected,
                });
            }
        }
        Ok(expected)
    }
}

impl Adjacency for Digraph {
    fn order(&self) -> usize {
        self.n
    }

    fn successors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }
}

fn reachable(n: usize, from: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for w in next(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Forward and backward reachability from vertex 0.
pub fn check_strongly_connected<G: Adjacency + ?Sized>(graph: &G) -> Result<()> {
    let n = graph.order();
    if n == 0 {
        return Ok(());
    }
    let forward = reachable(n, 0, |u| graph.successors(u).to_vec());
    if let Some(v) = forward.iter().position(|&s| !s) {
        return Err(Error::NotConnected { vertex: v });
    }
    let mut reverse = vec![Vec::new(); n];
    for u in 0..n {
        for &w in graph.successors(u) {
            reverse[w].push(u);
        }
    }
    let backward = reachable(n, 0, |u| reverse[u].clone());
    if let Some(v) = backward.iter().position(|&s| !s) {
        return Err(Error::NotConnected { vertex: v });
    }
    Ok(())
}

/// Whether `{δh}` and `{hδ}` coincide as sets, which is exactly when arcs
/// between cosets do not depend on the chosen representative.
pub fn validate_coset_condition(generators: &[Element], subgroup: &Subgroup) -> Result<bool> {
    let mut left = HashSet::new();
    let mut right = HashSet::new();
    for d in generators {
        for h in subgroup.elements() {
            left.insert(compose(d, h)?);
            right.insert(compose(h, d)?);
        }
    }
    Ok(left == right)
}

/// Builds and validates the coset graph with the default enumeration cap.
pub fn build_cayley_coset_graph(spec: &GroupSpec) -> Result<CosetGraph> {
    build_cayley_coset_graph_with_cap(spec, DEFAULT_ENUMERATION_CAP)
}

pub fn build_cayley_coset_graph_with_cap(spec: &GroupSpec, cap: usize) -> Result<CosetGraph> {
    spec.validate()?;
    let subgroup = Subgroup::new(&spec.kind, &spec.subgroup)?;
    if !validate_coset_condition(&spec.generators, &subgroup)? {
        return Err(Error::IllDefinedEdges);
    }
    let table = enumerate_group(spec, cap)?;

    let mut vertices: Vec<Element> = table
        .elements()
        .iter()
        .map(|g| coset_canonicalize(g, &subgroup))
        .collect::<Result<HashSet<_>>>()?
        .into_iter()
        .collect();
    vertices.sort();
    let index: HashMap<Element, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();

    let mut targets = Vec::with_capacity(vertices.len());
    for rep in &vertices {
        let row = spec
            .generators
            .iter()
            .map(|d| {
                let image = coset_canonicalize(&compose(rep, d)?, &subgroup)?;
                index.get(&image).copied().ok_or_else(|| {
                    Error::Internal(format!("coset of {image} missing from the vertex table"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        targets.push(row);
    }

    let graph = CosetGraph {
        spec: spec.clone(),
        subgroup,
        vertices,
        index,
        targets,
    };
    let d = graph.degree();
    let mut in_deg = vec![0; graph.order()];
    for row in &graph.targets {
        for &t in row {
            in_deg[t] += 1;
        }
    }
    if let Some(v) = in_deg.iter().position(|&k| k != d) {
        return Err(Error::NotRegular {
            vertex: v,
            out_degree: d,
            in_degree: in_deg[v],
            expected: d,
        });
    }
    check_strongly_connected(&graph)?;
    Ok(graph)
}

/// Forgets generator labels. Arc `v * d + j` is the arc leaving `v` under
/// generator `j`.
pub fn as_digraph(graph: &CosetGraph) -> Digraph {
    let arcs = (0..graph.order())
        .flat_map(|v| graph.targets[v].iter().map(move |&t| (v, t)))
        .collect();
    Digraph::new(graph.order(), arcs).expect("coset graph arcs are in range")
}

/// Plain-text arc dump: one `src dst gen` line per arc, 0-based.
pub fn arc_dump(graph: &CosetGraph) -> String {
    let mut out = String::new();
    for v in 0..graph.order() {
        for (j, &t) in graph.targets[v].iter().enumerate() {
            writeln!(out, "{v} {t} {j}").expect("writing to a String");
        }
    }
    out
}

/// Parses an arc dump back into `(src, dst, gen)` triples. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_arc_dump(text: &str) -> Result<Vec<(usize, usize, usize)>> {
    let mut triples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::parse(format!("line {}", lineno + 1), format!("{e}")))?;
        match fields[..] {
            [s, t, g] => triples.push((s, t, g)),
            _ => {
                return Err(Error::parse(
                    format!("line {}", lineno + 1),
                    "expected three fields: src dst gen",
                ))
            }
        }
    }
    Ok(triples)
}

/// Outcome of the conjugation check behind the Petersen coset example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationReport {
    /// `δ⁻¹ · x · δ`.
    pub conjugate: Element,
    pub conjugate_in_subgroup: bool,
    /// `xδH = δH`.
    pub shifted_cosets_agree: bool,
    /// `xH ≠ H`.
    pub cosets_distinct: bool,
}

impl ConjugationReport {
    /// Two different arcs leaving the same vertex could both claim the
    /// label δ.
    pub fn label_is_ambiguous(&self) -> bool {
        self.conjugate_in_subgroup && self.shifted_cosets_agree && self.cosets_distinct
    }
}

pub fn conjugation_check(
    x: &Element,
    delta: &Element,
    subgroup: &Subgroup,
) -> Result<ConjugationReport> {
    let conjugate = compose(&compose(&delta.inverse(), x)?, delta)?;
    let identity_rep = coset_canonicalize(&subgroup.elements()[0], subgroup)?;
    Ok(ConjugationReport {
        conjugate_in_subgroup: subgroup.contains(&conjugate),
        shifted_cosets_agree: coset_canonicalize(&compose(x, delta)?, subgroup)?
            == coset_canonicalize(delta, subgroup)?,
        cosets_distinct: coset_canonicalize(x, subgroup)? != identity_rep,
        conjugate,
    })
}

/// Reproduces the Petersen ambiguity with `x = (34)(125)`, `δ₁ = (13)(24)`
/// and `B` the stabilizer of `{1, 2}`: the conjugate must be `(12)(345)`,
/// lie in `B`, and `xδ₁B = δ₁B` while `xB ≠ B`.
pub fn petersen_conjugation_check() -> bool {
    let (x, delta) = crate::fixtures::petersen_x_and_delta();
    let expected = crate::fixtures::perm5("(12)(345)");
    let b = crate::fixtures::petersen_stabilizer();
    match conjugation_check(&x, &delta, &b) {
        Ok(report) => report.conjugate == expected && report.label_is_ambiguous(),
        Err(_) => false,
    }
}
