//! Defining graphs of right-angled Coxeter groups.
//!
//! A [`DefiningGraph`] fixes the generating set (in ShortLex order) and the
//! commutation relation. The graph families used by the experiments are built
//! by [`build_gamma`] and [`build_omega`]; arbitrary graphs come from the text
//! format handled by [`parse_graph`] / [`serialize_graph`].

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

/// Hard limit on the generator count; letters are stored as one byte.
pub const MAX_GENERATORS: usize = 256;

const HEADER: &str = "racg-graph v1";

/// A generator, identified by its position in the graph's generator order.
///
/// The derived `Ord` is the ShortLex letter order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Gen(pub u8);

impl Gen {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Fixed-width bit set over all possible generators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenSet([u64; MAX_GENERATORS / 64]);

impl GenSet {
    #[inline]
    pub fn contains(&self, g: Gen) -> bool {
        let i = g.index();
        self.0[i >> 6] & (1u64 << (i & 63)) != 0
    }

    #[inline]
    pub fn insert(&mut self, g: Gen) {
        let i = g.index();
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: &GenSet) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }

    /// Members in ascending generator order.
    pub fn iter(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..MAX_GENERATORS)
            .map(|i| Gen(i as u8))
            .filter(move |&g| self.contains(g))
    }
}

/// Content fingerprint of a graph; normal forms carry it so that elements of
/// different groups are never mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphId(pub u64);

/// Which construction produced a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    /// `Γ_m`, `m ≥ 1`.
    GammaM(u32),
    /// `Ω_m`, the disjoint union of `Γ_2, …, Γ_m`, `m ≥ 2`.
    OmegaM(u32),
    Custom,
}

impl FamilyTag {
    pub fn m(self) -> Option<u32> {
        match self {
            FamilyTag::GammaM(m) | FamilyTag::OmegaM(m) => Some(m),
            FamilyTag::Custom => None,
        }
    }

    pub fn validate(self) -> Result<(), GraphError> {
        match self {
            FamilyTag::GammaM(0) => Err(GraphError::InvalidParameter(
                "gamma family requires m >= 1".into(),
            )),
            FamilyTag::OmegaM(m) if m < 2 => Err(GraphError::InvalidParameter(
                "omega family requires m >= 2".into(),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::GammaM(m) => write!(f, "gamma:{m}"),
            FamilyTag::OmegaM(m) => write!(f, "omega:{m}"),
            FamilyTag::Custom => f.write_str("custom"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("self-loop on generator `{0}`")]
    SelfLoop(String),
    #[error("too many generators ({0}, limit {MAX_GENERATORS})")]
    TooManyGenerators(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A finite simplicial graph presenting a right-angled Coxeter group.
///
/// Immutable after construction. Equality compares generator order and
/// adjacency; the family tag is provenance only.
#[derive(Clone, Debug)]
pub struct DefiningGraph {
    names: Vec<String>,
    lookup: HashMap<String, Gen>,
    adjacency: Vec<GenSet>,
    edge_count: usize,
    triangle_free: bool,
    family: FamilyTag,
    id: GraphId,
}

impl PartialEq for DefiningGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.adjacency == other.adjacency
    }
}

impl Eq for DefiningGraph {}

impl DefiningGraph {
    /// Builds a graph from generator names (in ShortLex order) and edges given
    /// as index pairs.
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        family: FamilyTag,
    ) -> Result<Self, GraphError> {
        family.validate()?;
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_GENERATORS {
            return Err(GraphError::TooManyGenerators(names.len()));
        }
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(GraphError::InvalidParameter(format!(
                    "generator name `{name}` must be non-empty without whitespace"
                )));
            }
            if lookup.insert(name.clone(), Gen(i as u8)).is_some() {
                return Err(GraphError::DuplicateGenerator(name.clone()));
            }
        }
        let mut adjacency = vec![GenSet::default(); names.len()];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= names.len() || v >= names.len() {
                return Err(GraphError::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range"
                )));
            }
            if u == v {
                return Err(GraphError::SelfLoop(names[u].clone()));
            }
            let (gu, gv) = (Gen(u as u8), Gen(v as u8));
            if !adjacency[u].contains(gv) {
                edge_count += 1;
            }
            adjacency[u].insert(gv);
            adjacency[v].insert(gu);
        }
        let mut graph = DefiningGraph {
            names,
            lookup,
            adjacency,
            edge_count,
            triangle_free: false,
            family,
            id: GraphId(0),
        };
        graph.triangle_free = graph.is_triangle_free();
        graph.id = graph.fingerprint();
        Ok(graph)
    }

    fn fingerprint(&self) -> GraphId {
        let mut h = DefaultHasher::new();
        self.names.hash(&mut h);
        self.adjacency.hash(&mut h);
        GraphId(h.finish())
    }

    pub fn id(&self) -> GraphId {
        self.id
    }

    pub fn family(&self) -> FamilyTag {
        self.family
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Cached result of [`DefiningGraph::is_triangle_free`].
    pub fn triangle_free(&self) -> bool {
        self.triangle_free
    }

    pub fn generators(&self) -> impl ExactSizeIterator<Item = Gen> + '_ {
        (0..self.names.len()).map(|i| Gen(i as u8))
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gen(&self, name: &str) -> Result<Gen, GraphError> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownGenerator(name.to_string()))
    }

    /// True iff `s != t` and `{s, t}` is an edge. Hot path of every word
    /// computation.
    #[inline]
    pub fn commute(&self, s: Gen, t: Gen) -> bool {
        self.adjacency[s.index()].contains(t)
    }

    /// Name-based form of [`DefiningGraph::commute`].
    pub fn commutes(&self, s: &str, t: &str) -> Result<bool, GraphError> {
        Ok(self.commute(self.gen(s)?, self.gen(t)?))
    }

    pub fn link_set(&self, s: Gen) -> &GenSet {
        &self.adjacency[s.index()]
    }

    /// Generators adjacent to `s`, in generator order.
    pub fn link(&self, s: &str) -> Result<Vec<Gen>, GraphError> {
        Ok(self.link_set(self.gen(s)?).iter().collect())
    }

    pub fn link_names(&self, s: &str) -> Result<Vec<&str>, GraphError> {
        Ok(self.link(s)?.into_iter().map(|g| self.name(g)).collect())
    }

    /// Exhaustive check that no three generators are pairwise adjacent.
    pub fn is_triangle_free(&self) -> bool {
        self.edges()
            .all(|(u, v)| !self.adjacency[u.index()].intersects(&self.adjacency[v.index()]))
    }

    /// Edges as `(lower, higher)` pairs sorted by `(lower, higher)`.
    pub fn edges(&self) -> impl Iterator<Item = (Gen, Gen)> + '_ {
        self.generators().flat_map(move |u| {
            self.adjacency[u.index()]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Full subgraph on the given generators, keeping this graph's order.
    pub fn induced(&self, keep: &[&str]) -> Result<DefiningGraph, GraphError> {
        let mut kept: Vec<Gen> = keep.iter().map(|n| self.gen(n)).collect::<Result<_, _>>()?;
        kept.sort();
        kept.dedup();
        let position: HashMap<Gen, usize> = kept.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter_map(|(u, v)| Some((*position.get(&u)?, *position.get(&v)?)))
            .collect();
        DefiningGraph::new(
            kept.iter().map(|&g| self.name(g).to_string()),
            edges,
            FamilyTag::Custom,
        )
    }
}

fn gamma_edges(m: usize) -> Vec<(usize, usize)> {
    let a = |i: usize| 2 * i;
    let b = |i: usize| 2 * i + 1;
    let mut edges = Vec::with_capacity(4 * m);
    for i in 1..=m {
        edges.push((a(i), a(0)));
        edges.push((a(i), b(0)));
    }
    edges.push((b(1), a(0)));
    edges.push((b(1), b(0)));
    for j in 2..=m {
        edges.push((b(j), a(j - 1)));
        edges.push((b(j), b(j - 1)));
    }
    edges
}

fn gamma_names(m: usize) -> Vec<String> {
    (0..=m)
        .flat_map(|i| [format!("a_{i}"), format!("b_{i}")])
        .collect()
}

/// The graph `Γ_m` on `a_0..a_m, b_0..b_m`.
///
/// Edges: `a_i – a_0`, `a_i – b_0` for `1 ≤ i ≤ m`; `b_1 – a_0`, `b_1 – b_0`;
/// `b_j – a_{j-1}`, `b_j – b_{j-1}` for `2 ≤ j ≤ m`. Generator order is
/// `a_0 < b_0 < a_1 < b_1 < …`.
pub fn build_gamma(m: u32) -> Result<DefiningGraph, GraphError> {
    if m == 0 {
        return Err(GraphError::InvalidParameter(
            "gamma family requires m >= 1".into(),
        ));
    }
    let m = m as usize;
    let count = 2 * m + 2;
    if count > MAX_GENERATORS {
        return Err(GraphError::InvalidParameter(format!(
            "gamma:{m} needs {count} generators (limit {MAX_GENERATORS})"
        )));
    }
    DefiningGraph::new(gamma_names(m), gamma_edges(m), FamilyTag::GammaM(m as u32))
}

/// `Ω_m`: disjoint union of `Γ_2, …, Γ_m`, generators renamed `G{i}.{name}`.
pub fn build_omega(m: u32) -> Result<DefiningGraph, GraphError> {
    if m < 2 {
        return Err(GraphError::InvalidParameter(
            "omega family requires m >= 2".into(),
        ));
    }
    let total: usize = (2..=m as usize).map(|i| 2 * i + 2).sum();
    if total > MAX_GENERATORS {
        return Err(GraphError::InvalidParameter(format!(
            "omega:{m} needs {total} generators (limit {MAX_GENERATORS})"
        )));
    }
    let mut names = Vec::with_capacity(total);
    let mut edges = Vec::new();
    for i in 2..=m as usize {
        let offset = names.len();
        names.extend(gamma_names(i).into_iter().map(|n| format!("G{i}.{n}")));
        edges.extend(
            gamma_edges(i)
                .into_iter()
                .map(|(u, v)| (u + offset, v + offset)),
        );
    }
    DefiningGraph::new(names, edges, FamilyTag::OmegaM(m))
}

/// Writes the `racg-graph v1` text form: header, `gen` lines in order, then
/// `edge` lines sorted by (lower index, higher index).
pub fn serialize_graph(g: &DefiningGraph) -> String {
    let mut out = String::with_capacity(16 * (g.len() + g.edge_count()) + HEADER.len());
    out.push_str(HEADER);
    out.push('\n');
    for name in g.names() {
        out.push_str("gen ");
        out.push_str(name);
        out.push('\n');
    }
    for (u, v) in g.edges() {
        out.push_str("edge ");
        out.push_str(g.name(u));
        out.push(' ');
        out.push_str(g.name(v));
        out.push('\n');
    }
    out
}

/// Parses the `racg-graph v1` text form. Errors carry 1-based line numbers.
pub fn parse_graph(text: &str) -> Result<DefiningGraph, GraphError> {
    let err = |line: usize, msg: String| GraphError::Parse { line, msg };
    let mut saw_header = false;
    let mut saw_edge = false;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen_edges = std::collections::HashSet::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != HEADER {
                return Err(err(line_no, format!("expected header `{HEADER}`")));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["gen", name] => {
                if saw_edge {
                    return Err(err(line_no, "`gen` after `edge` lines".into()));
                }
                if index.contains_key(*name) {
                    return Err(err(line_no, format!("duplicate generator `{name}`")));
                }
                if names.len() == MAX_GENERATORS {
                    return Err(err(
                        line_no,
                        format!("more than {MAX_GENERATORS} generators"),
                    ));
                }
                index.insert(name.to_string(), names.len());
                names.push(name.to_string());
            }
            ["edge", u, v] => {
                saw_edge = true;
                let lookup = |name: &str| {
                    index
                        .get(name)
                        .copied()
                        .ok_or_else(|| err(line_no, format!("edge to unknown generator `{name}`")))
                };
                let (iu, iv) = (lookup(u)?, lookup(v)?);
                if iu == iv {
                    return Err(err(line_no, format!("self-loop on `{u}`")));
                }
                if !seen_edges.insert((iu.min(iv), iu.max(iv))) {
                    return Err(err(line_no, format!("duplicate edge `{u} {v}`")));
                }
                edges.push((iu, iv));
            }
            _ => return Err(err(line_no, format!("malformed line `{line}`"))),
        }
    }
    if !saw_header {
        return Err(err(1, format!("missing header `{HEADER}`")));
    }
    DefiningGraph::new(names, edges, FamilyTag::Custom)
}
