use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ast::{is_value_token, DataValue, Letter};
use crate::error::{Error, Result};

/// A finite sequence of `(letter, data value)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DataWord(pub Vec<(Letter, DataValue)>);

impl DataWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, a: Letter, d: DataValue) {
        self.0.push((a, d));
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (Letter, DataValue)> {
        self.0.iter()
    }

    pub fn letters(&self) -> Vec<&Letter> {
        self.0.iter().map(|(a, _)| a).collect()
    }

    pub fn values(&self) -> BTreeSet<&DataValue> {
        self.0.iter().map(|(_, d)| d).collect()
    }

    pub fn concat(&self, other: &DataWord) -> DataWord {
        DataWord(self.0.iter().chain(&other.0).cloned().collect())
    }
}

impl FromIterator<(Letter, DataValue)> for DataWord {
    fn from_iter<I: IntoIterator<Item = (Letter, DataValue)>>(iter: I) -> Self {
        DataWord(iter.into_iter().collect())
    }
}

/// Node identifier of a data graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_value_token(&name) {
            Ok(NodeId(name))
        } else {
            Err(Error::invalid(format!("`{name}` is not a valid node id")))
        }
    }

    /// Panics if `name` is not a valid node id.
    pub fn lit(name: &str) -> Self {
        Self::new(name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: NodeId,
    pub letter: Letter,
    pub value: DataValue,
    pub dst: NodeId,
}

impl Edge {
    pub fn new(src: &str, letter: &str, value: &str, dst: &str) -> Edge {
        Edge { src: NodeId::lit(src), letter: Letter::lit(letter), value: DataValue::lit(value), dst: NodeId::lit(dst) }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.src, self.letter, self.value, self.dst)
    }
}

/// A finite graph whose edges carry `(letter, data value)` labels. Edges
/// form a set. Source and sink are optional designated nodes used by the
/// reduction gadgets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DataGraph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeSet<Edge>,
    pub source: Option<NodeId>,
    pub sink: Option<NodeId>,
}

impl DataGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, n: NodeId) -> bool {
        self.nodes.insert(n)
    }

    /// Inserts the edge and both endpoints. Returns false for a duplicate.
    pub fn add_edge(&mut self, e: Edge) -> bool {
        self.nodes.insert(e.src.clone());
        self.nodes.insert(e.dst.clone());
        self.edges.insert(e)
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn contains(&self, n: &NodeId) -> bool {
        self.nodes.contains(n)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn values(&self) -> BTreeSet<&DataValue> {
        self.edges.iter().map(|e| &e.value).collect()
    }

    pub fn letters(&self) -> BTreeSet<&Letter> {
        self.edges.iter().map(|e| &e.letter).collect()
    }

    pub fn out_edges(&self) -> BTreeMap<&NodeId, Vec<&Edge>> {
        let mut out: BTreeMap<&NodeId, Vec<&Edge>> = BTreeMap::new();
        for e in &self.edges {
            out.entry(&e.src).or_default().push(e);
        }
        out
    }

    pub fn node(&self, name: &str) -> Result<NodeId> {
        let n = NodeId::new(name)?;
        if self.contains(&n) {
            Ok(n)
        } else {
            Err(Error::UnknownNode(name.to_owned()))
        }
    }
}

/// Result of a path query: node pairs, ordered lexicographically.
pub type PairSet = BTreeSet<(NodeId, NodeId)>;

/// One "u v" line per pair, in sorted order.
pub fn print_pairs(pairs: &PairSet) -> String {
    let mut out = String::new();
    for (u, v) in pairs {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
