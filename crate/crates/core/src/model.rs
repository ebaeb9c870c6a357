//! Graph representation of a single system state snapshot.
//!
//! A [`SystemGraph`] is an undirected graph whose nodes are system components
//! (hosts, containers, services, network gear) and whose edges express
//! connectivity. Every element carries a non-negative weight, and every node
//! carries a list of typed attributes: plain numbers with bounds, vectors
//! (typically embedded log windows), categorical labels, taxonomy types, and
//! distribution-backed numbers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_weight() -> f64 {
    1.0
}

/// One snapshot of a system state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemGraph {
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

/// A system component with its observed attributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    #[serde(default)]
    pub attributes: Vec<Attribute>,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

/// Undirected connectivity between two components. At most one edge per pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

/// A named, weighted attribute value attached to a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
    #[serde(flatten)]
    pub value: AttributeValue,
}

/// The attribute kinds the similarity layer knows how to compare.
///
/// `Numerical` carries the value range the comparison is scaled by; the value
/// itself may excurse outside `[min, max]` (similarity clamps).
/// `Distribution` ties a value to the historical distribution of its metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum AttributeValue {
    Numerical { value: f64, min: f64, max: f64 },
    Vector { value: Vec<f64> },
    Categorical { value: String },
    Taxonomy { value: String },
    Distribution { value: f64, mu: f64, sigma: f64 },
}

impl AttributeValue {
    pub fn kind(&self) -> &'static str {
        match self {
            AttributeValue::Numerical { .. } => "numerical",
            AttributeValue::Vector { .. } => "vector",
            AttributeValue::Categorical { .. } => "categorical",
            AttributeValue::Taxonomy { .. } => "taxonomy",
            AttributeValue::Distribution { .. } => "distribution",
        }
    }
}

impl Node {
    pub fn new(id: impl Into<String>) -> Self {
        Node {
            id: id.into(),
            attributes: Vec::new(),
            weight: 1.0,
        }
    }

    pub fn with_attribute(
        mut self,
        name: impl Into<String>,
        value: AttributeValue,
        weight: f64,
    ) -> Self {
        self.attributes.push(Attribute {
            name: name.into(),
            weight,
            value,
        });
        self
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    /// Label of the first taxonomy-type attribute, when any.
    pub fn taxonomy_label(&self) -> Option<&str> {
        self.attributes.iter().find_map(|a| match &a.value {
            AttributeValue::Taxonomy { value } => Some(value.as_str()),
            _ => None,
        })
    }
}

impl SystemGraph {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>) -> Self {
        SystemGraph {
            metadata: BTreeMap::new(),
            nodes,
            edges,
        }
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_graph(self)
    }

    /// Validation that fails with a readable report instead of a list.
    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            return Ok(());
        }
        let report = violations
            .iter()
            .map(|v| format!("  - {v}"))
            .collect::<Vec<_>>()
            .join("\n");
        Err(Error::InvalidGraph(report))
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json_pretty()? + "\n")?;
        Ok(())
    }
}

/// A single invariant violation found by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyGraph,
    DuplicateNodeId { id: String },
    DuplicateAttributeName { node: String, name: String },
    NegativeNodeWeight { node: String },
    NegativeAttributeWeight { node: String, name: String },
    BadNumericalBounds { node: String, name: String },
    EmptyVector { node: String, name: String },
    NonFiniteValue { node: String, name: String },
    NonPositiveSigma { node: String, name: String },
    DanglingEdge { from: String, to: String, missing: String },
    SelfLoop { id: String },
    DuplicateEdge { a: String, b: String },
    NegativeEdgeWeight { from: String, to: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyGraph => write!(f, "graph has no nodes"),
            Violation::DuplicateNodeId { id } => write!(f, "duplicate node id {id:?}"),
            Violation::DuplicateAttributeName { node, name } => {
                write!(f, "node {node:?} repeats attribute name {name:?}")
            }
            Violation::NegativeNodeWeight { node } => {
                write!(f, "node {node:?} has a negative weight")
            }
            Violation::NegativeAttributeWeight { node, name } => {
                write!(f, "attribute {name:?} of node {node:?} has a negative weight")
            }
            Violation::BadNumericalBounds { node, name } => {
                write!(f, "attribute {name:?} of node {node:?} needs min < max")
            }
            Violation::EmptyVector { node, name } => {
                write!(f, "vector attribute {name:?} of node {node:?} is empty")
            }
            Violation::NonFiniteValue { node, name } => {
                write!(f, "attribute {name:?} of node {node:?} holds a non-finite number")
            }
            Violation::NonPositiveSigma { node, name } => {
                write!(f, "attribute {name:?} of node {node:?} needs sigma > 0")
            }
            Violation::DanglingEdge { from, to, missing } => {
                write!(f, "edge {from:?} -- {to:?} references missing node {missing:?}")
            }
            Violation::SelfLoop { id } => write!(f, "self loop on node {id:?}"),
            Violation::DuplicateEdge { a, b } => {
                write!(f, "more than one edge between {a:?} and {b:?}")
            }
            Violation::NegativeEdgeWeight { from, to } => {
                write!(f, "edge {from:?} -- {to:?} has a negative weight")
            }
        }
    }
}

/// Checks every structural invariant and reports all violations in a
/// deterministic order (nodes first, then edges, both in input order).
pub fn validate_graph(graph: &SystemGraph) -> Vec<Violation> {
    let mut out = Vec::new();

    if graph.nodes.is_empty() {
        out.push(Violation::EmptyGraph);
    }

    let mut seen_ids = BTreeSet::new();
    for node in &graph.nodes {
        if !seen_ids.insert(node.id.as_str()) {
            out.push(Violation::DuplicateNodeId {
                id: node.id.clone(),
            });
        }
        if node.weight < 0.0 || !node.weight.is_finite() {
            out.push(Violation::NegativeNodeWeight {
                node: node.id.clone(),
            });
        }
        let mut seen_attrs = BTreeSet::new();
        for attr in &node.attributes {
            if !seen_attrs.insert(attr.name.as_str()) {
                out.push(Violation::DuplicateAttributeName {
                    node: node.id.clone(),
                    name: attr.name.clone(),
                });
            }
            if attr.weight < 0.0 || !attr.weight.is_finite() {
                out.push(Violation::NegativeAttributeWeight {
                    node: node.id.clone(),
                    name: attr.name.clone(),
                });
            }
            match &attr.value {
                AttributeValue::Numerical { value, min, max } => {
                    if !(min < max) {
                        out.push(Violation::BadNumericalBounds {
                            node: node.id.clone(),
                            name: attr.name.clone(),
                        });
                    }
                    if !value.is_finite() || !min.is_finite() || !max.is_finite() {
                        out.push(Violation::NonFiniteValue {
                            node: node.id.clone(),
                            name: attr.name.clone(),
                        });
                    }
                }
                AttributeValue::Vector { value } => {
                    if value.is_empty() {
                        out.push(Violation::EmptyVector {
                            node: node.id.clone(),
                            name: attr.name.clone(),
                        });
                    }
                    if value.iter().any(|c| !c.is_finite()) {
                        out.push(Violation::NonFiniteValue {
                            node: node.id.clone(),
                            name: attr.name.clone(),
                        });
                    }
                }
                AttributeValue::Distribution { value, mu, sigma } => {
                    if !(sigma > &0.0) {
                        out.push(Violation::NonPositiveSigma {
                            node: node.id.clone(),
                            name: attr.name.clone(),
                        });
                    }
                    if !value.is_finite() || !mu.is_finite() || !sigma.is_finite() {
                        out.push(Violation::NonFiniteValue {
                            node: node.id.clone(),
                            name: attr.name.clone(),
                        });
                    }
                }
                AttributeValue::Categorical { .. } | AttributeValue::Taxonomy { .. } => {}
            }
        }
    }

    let ids: BTreeSet<&str> = graph.nodes.iter().map(|n| n.id.as_str()).collect();
    let mut seen_pairs = BTreeSet::new();
    for edge in &graph.edges {
        for endpoint in [&edge.from, &edge.to] {
            if !ids.contains(endpoint.as_str()) {
                out.push(Violation::DanglingEdge {
                    from: edge.from.clone(),
                    to: edge.to.clone(),
                    missing: endpoint.clone(),
                });
            }
        }
        if edge.from == edge.to {
            out.push(Violation::SelfLoop {
                id: edge.from.clone(),
            });
        }
        let key = if edge.from <= edge.to {
            (edge.from.clone(), edge.to.clone())
        } else {
            (edge.to.clone(), edge.from.clone())
        };
        if !seen_pairs.insert(key.clone()) {
            out.push(Violation::DuplicateEdge { a: key.0, b: key.1 });
        }
        if edge.weight < 0.0 || !edge.weight.is_finite() {
            out.push(Violation::NegativeEdgeWeight {
                from: edge.from.clone(),
                to: edge.to.clone(),
            });
        }
    }

    out
}
