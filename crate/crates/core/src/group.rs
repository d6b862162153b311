//! Concrete finite groups: cyclic groups, permutation groups and direct
//! products of those, enumerated explicitly.
//!
//! Composition reads left to right: `compose(a, b)` is "a, then b". For
//! permutations that means `compose(a, b)(x) = b(a(x))`, so a word
//! `d1 d2 d3` applied to a vertex walks the edges in the order written.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};

/// Default upper bound on the number of group elements enumerated.
pub const DEFAULT_ENUMERATION_CAP: usize = 100_000;

/// A bijection on `{0, .., degree - 1}` stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::Structural(format!(
                    "{images:?} is not a permutation of 0..{}",
                    images.len()
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Parses cycle notation with 1-based points, e.g. `"(1 3)(2 4)"`,
    /// `"(13)(24)"` or `"(1,2,5)"`. Inside a cycle without separators every
    /// character is one point, which only makes sense for degree below 10.
    pub fn from_cycles(text: &str, degree: usize) -> Result<Self> {
        let bad = |msg: String| Error::Structural(format!("cycle string {text:?}: {msg}"));
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        let mut rest = text.trim();
        if rest == "e" || rest == "id" {
            rest = "";
        }
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| bad("expected '('".into()))?;
            let close = open.find(')').ok_or_else(|| bad("unclosed cycle".into()))?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();

            let tokens: Vec<&str> = if body.contains([' ', ',']) {
                body.split([' ', ',']).filter(|t| !t.is_empty()).collect()
            } else {
                body.char_indices()
                    .map(|(i, c)| &body[i..i + c.len_utf8()])
                    .collect()
            };
            let mut points = Vec::with_capacity(tokens.len());
            for token in tokens {
                let p: usize = token
                    .parse()
                    .map_err(|_| bad(format!("bad point {token:?}")))?;
                if p == 0 || p > degree {
                    return Err(bad(format!("point {p} outside 1..={degree}")));
                }
                if moved[p - 1] {
                    return Err(bad(format!("point {p} appears twice")));
                }
                moved[p - 1] = true;
                points.push(p - 1);
            }
            for (i, &p) in points.iter().enumerate() {
                images[p] = points[(i + 1) % points.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::Structural(format!(
                "cannot compose permutations of degree {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut wrote = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.images[x];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A group element. Residues carry their modulus so that elements compose
/// without reference to the group they came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Residue { value: u64, modulus: u64 },
    Perm(Permutation),
    Tuple(Vec<Element>),
}

impl Element {
    pub fn residue(value: u64, modulus: u64) -> Self {
        Element::Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Residue { value, .. } => *value == 0,
            Element::Perm(p) => p.is_identity(),
            Element::Tuple(parts) => parts.iter().all(Element::is_identity),
        }
    }

    pub fn inverse(&self) -> Element {
        match self {
            Element::Residue { value, modulus } => Element::residue(modulus - value, *modulus),
            Element::Perm(p) => Element::Perm(p.inverse()),
            Element::Tuple(parts) => Element::Tuple(parts.iter().map(Element::inverse).collect()),
        }
    }

    /// JSON form used by the emitters: residues as numbers, permutations as
    /// 0-based image arrays, products as arrays of components.
    pub fn to_json(&self) -> Value {
        match self {
            Element::Residue { value, .. } => Value::from(*value),
            Element::Perm(p) => Value::from(p.images().to_vec()),
            Element::Tuple(parts) => Value::Array(parts.iter().map(Element::to_json).collect()),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Residue { value, .. } => write!(f, "{value}"),
            Element::Perm(p) => write!(f, "{p}"),
            Element::Tuple(parts) => {
                write!(f, "(")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{part}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// "a, then b".
pub fn compose(a: &Element, b: &Element) -> Result<Element> {
    match (a, b) {
        (
            Element::Residue {
                value: x,
                modulus: m,
            },
            Element::Residue {
                value: y,
                modulus: n,
            },
        ) if m == n => Ok(Element::residue((x + y) % m, *m)),
        (Element::Perm(p), Element::Perm(q)) => p.then(q).map(Element::Perm),
        (Element::Tuple(xs), Element::Tuple(ys)) if xs.len() == ys.len() => xs
            .iter()
            .zip(ys)
            .map(|(x, y)| compose(x, y))
            .collect::<Result<Vec<_>>>()
            .map(Element::Tuple),
        _ => Err(Error::Structural(format!(
            "cannot compose elements {a} and {b} from different groups"
        ))),
    }
}

/// The shape of a group, without generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic { modulus: u64 },
    Permutation { degree: usize },
    Product(Vec<GroupKind>),
}

impl GroupKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupKind::Cyclic { modulus } if *modulus < 2 => Err(Error::Structural(format!(
                "cyclic modulus must be at least 2, got {modulus}"
            ))),
            GroupKind::Permutation { degree: 0 } => Err(Error::Structural(
                "permutation degree must be at least 1".into(),
            )),
            GroupKind::Product(parts) if parts.is_empty() => Err(Error::Structural(
                "product group needs at least one factor".into(),
            )),
            GroupKind::Product(parts) => parts.iter().try_for_each(GroupKind::validate),
            _ => Ok(()),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupKind::Cyclic { modulus } => Element::residue(0, *modulus),
            GroupKind::Permutation { degree } => Element::Perm(Permutation::identity(*degree)),
            GroupKind::Product(parts) => {
                Element::Tuple(parts.iter().map(GroupKind::identity).collect())
            }
        }
    }

    /// Whether `element` has the shape of a member of this group.
    pub fn contains(&self, element: &Element) -> bool {
        match (self, element) {
            (GroupKind::Cyclic { modulus }, Element::Residue { value, modulus: m }) => {
                m == modulus && value < modulus
            }
            (GroupKind::Permutation { degree }, Element::Perm(p)) => p.degree() == *degree,
            (GroupKind::Product(kinds), Element::Tuple(parts)) => {
                kinds.len() == parts.len() && kinds.iter().zip(parts).all(|(k, e)| k.contains(e))
            }
            _ => false,
        }
    }

    /// Parses the JSON kind descriptor: `{"cyclic": m}`, `{"permutation": n}`
    /// or `{"product": [kind, ...]}`.
    pub fn from_json(value: &Value, path: &str) -> Result<Self> {
        let obj = value.as_object().filter(|o| o.len() == 1).ok_or_else(|| {
            Error::parse(
                path,
                "expected an object with one of cyclic/permutation/product",
            )
        })?;
        let (key, inner) = obj.iter().next().expect("one entry");
        let kind = match key.as_str() {
            "cyclic" => GroupKind::Cyclic {
                modulus: inner.as_u64().ok_or_else(|| {
                    Error::parse(format!("{path}.cyclic"), "expected an integer modulus")
                })?,
            },
            "permutation" => {
                let degree = inner
                    .as_u64()
                    .or_else(|| inner.get("degree").and_then(Value::as_u64))
                    .ok_or_else(|| {
                        Error::parse(format!("{path}.permutation"), "expected an integer degree")
                    })?;
                GroupKind::Permutation {
                    degree: degree as usize,
                }
            }
            "product" => {
                let parts = inner.as_array().ok_or_else(|| {
                    Error::parse(
                        format!("{path}.product"),
                        "expected an array of group kinds",
                    )
                })?;
                GroupKind::Product(
                    parts
                        .iter()
                        .enumerate()
                        .map(|(i, p)| GroupKind::from_json(p, &format!("{path}.product[{i}]")))
                        .collect::<Result<_>>()?,
                )
            }
            other => {
                return Err(Error::parse(path, format!("unknown group kind {other:?}")));
            }
        };
        kind.validate()
            .map_err(|e| Error::parse(path, e.to_string()))?;
        Ok(kind)
    }

    pub fn to_json(&self) -> Value {
        match self {
            GroupKind::Cyclic { modulus } => serde_json::json!({ "cyclic": modulus }),
            GroupKind::Permutation { degree } => serde_json::json!({ "permutation": degree }),
            GroupKind::Product(parts) => {
                serde_json::json!({ "product": parts.iter().map(GroupKind::to_json).collect::<Vec<_>>() })
            }
        }
    }

    /// Parses one element descriptor: residues as integers, permutations as
    /// 0-based image arrays or 1-based cycle strings, product elements as
    /// arrays with one descriptor per factor.
    pub fn parse_element(&self, value: &Value, path: &str) -> Result<Element> {
        match self {
            GroupKind::Cyclic { modulus } => {
                let v = value
                    .as_i64()
                    .ok_or_else(|| Error::parse(path, "expected an integer residue"))?;
                Ok(Element::residue(
                    v.rem_euclid(*modulus as i64) as u64,
                    *modulus,
                ))
            }
            GroupKind::Permutation { degree } => {
                let perm = match value {
                    Value::String(s) => Permutation::from_cycles(s, *degree),
                    Value::Array(items) => {
                        let images = items
                            .iter()
                            .map(|v| v.as_u64().map(|x| x as usize))
                            .collect::<Option<Vec<_>>>()
                            .ok_or_else(|| {
                                Error::parse(path, "expected an array of point indices")
                            })?;
                        if images.len() != *degree {
                            return Err(Error::parse(
                                path,
                                format!(
                                    "image array has length {}, expected {degree}",
                                    images.len()
                                ),
                            ));
                        }
                        Permutation::new(images)
                    }
                    _ => {
                        return Err(Error::parse(
                            path,
                            "expected an image array or cycle string",
                        ))
                    }
                }
                .map_err(|e| Error::parse(path, e.to_string()))?;
                Ok(Element::Perm(perm))
            }
            GroupKind::Product(kinds) => {
                let items = value
                    .as_array()
                    .filter(|a| a.len() == kinds.len())
                    .ok_or_else(|| {
                        Error::parse(
                            path,
                            format!("expected an array of {} components", kinds.len()),
                        )
                    })?;
                kinds
                    .iter()
                    .zip(items)
                    .enumerate()
                    .map(|(i, (k, v))| k.parse_element(v, &format!("{path}[{i}]")))
                    .collect::<Result<Vec<_>>>()
                    .map(Element::Tuple)
            }
        }
    }
}

/// Declarative description of a coset graph `(group, generators, subgroup)`.
/// The subgroup is listed element by element; an empty list means the
/// trivial subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub generators: Vec<Element>,
    pub subgroup: Vec<Element>,
}

impl GroupSpec {
    pub fn new(kind: GroupKind, generators: Vec<Element>, subgroup: Vec<Element>) -> Result<Self> {
        let spec = GroupSpec {
            kind,
            generators,
            subgroup,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate()?;
        if self.generators.is_empty() {
            return Err(Error::Structural("generator list is empty".into()));
        }
        for (what, list) in [
            ("generator", &self.generators),
            ("subgroup element", &self.subgroup),
        ] {
            if let Some(bad) = list.iter().find(|e| !self.kind.contains(e)) {
                return Err(Error::Structural(format!(
                    "{what} {bad} does not belong to the group"
                )));
            }
        }
        Ok(())
    }

    /// Cyclic group `Z_m` with the given residues as generators.
    pub fn cyclic(modulus: u64, generators: &[u64]) -> Result<Self> {
        let kind = GroupKind::Cyclic { modulus };
        kind.validate()?;
        GroupSpec::new(
            kind,
            generators
                .iter()
                .map(|&g| Element::residue(g, modulus))
                .collect(),
            Vec::new(),
        )
    }

    pub fn has_trivial_subgroup(&self) -> bool {
        self.subgroup.iter().all(Element::is_identity)
    }
}

/// Every element of a finite group, identity first, in discovery order.
#[derive(Clone, Debug)]
pub struct ElementTable {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

impl ElementTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn index_of(&self, element: &Element) -> Option<usize> {
        self.index.get(element).copied()
    }

    pub fn identity_index(&self) -> usize {
        0
    }
}

/// Breadth-first closure of the identity under right multiplication by the
/// generators followed by the subgroup elements, scanned in input order.
pub fn enumerate_group(spec: &GroupSpec, cap: usize) -> Result<ElementTable> {
    spec.validate()?;
    let identity = spec.kind.identity();
    let gens: Vec<&Element> = spec.generators.iter().chain(&spec.subgroup).collect();

    let mut elements = vec![identity.clone()];
    let mut index = HashMap::from([(identity, 0)]);
    let mut queue = VecDeque::from([0]);
    if cap == 0 {
        return Err(Error::Capacity { cap });
    }
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let next = compose(&elements[i], g)?;
            if index.contains_key(&next) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::Capacity { cap });
            }
            index.insert(next.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(next);
        }
    }
    Ok(ElementTable { elements, index })
}

/// A subgroup validated to contain the identity and be closed under
/// composition and inverses.
#[derive(Clone, Debug)]
pub struct Subgroup {
    elements: Vec<Element>,
}

impl Subgroup {
    pub fn trivial(kind: &GroupKind) -> Self {
        Subgroup {
            elements: vec![kind.identity()],
        }
    }

    /// Validates `elements` as a subgroup. An empty list is the trivial
    /// subgroup; duplicates are dropped.
    pub fn new(kind: &GroupKind, elements: &[Element]) -> Result<Self> {
        if elements.is_empty() {
            return Ok(Subgroup::trivial(kind));
        }
        if let Some(bad) = elements.iter().find(|e| !kind.contains(e)) {
            return Err(Error::InvalidSubgroup(format!(
                "{bad} is not a group element"
            )));
        }
        let set: HashSet<&Element> = elements.iter().collect();
        if !set.contains(&kind.identity()) {
            return Err(Error::InvalidSubgroup("identity is missing".into()));
        }
        for a in &set {
            if !set.contains(&a.inverse()) {
                return Err(Error::InvalidSubgroup(format!("inverse of {a} is missing")));
            }
            for b in &set {
                let ab = compose(a, b)?;
                if !set.contains(&ab) {
                    return Err(Error::InvalidSubgroup(format!(
                        "not closed: {a} then {b} gives {ab}"
                    )));
                }
            }
        }
        let mut elements: Vec<Element> = set.into_iter().cloned().collect();
        elements.sort();
        Ok(Subgroup { elements })
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, element: &Element) -> bool {
        self.elements.binary_search(element).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Smallest element of the left coset `gH` in the derived total order
/// (numeric for residues, lexicographic on image arrays and tuples).
pub fn coset_canonicalize(g: &Element, subgroup: &Subgroup) -> Result<Element> {
    let mut best: Option<Element> = None;
    for h in subgroup.elements() {
        let gh = compose(g, h)?;
        if best.as_ref().is_none_or(|b| gh < *b) {
            best = Some(gh);
        }
    }
    Ok(best.expect("subgroup contains the identity"))
}
