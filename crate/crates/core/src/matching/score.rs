//! Shared scoring engine for the matching strategies.
//!
//! Internally the search always assigns nodes of the smaller graph to nodes
//! of the larger one, so a matching is a `Vec<usize>` of distinct large-side
//! indices. The public pair orientation `(g1, g2)` is restored at the edges
//! of the module.

use std::collections::{HashMap, HashSet};

use crate::attrsim::SimilarityConfig;
use crate::error::{Error, Result};
use crate::matching::{node_similarity, NodeMatching};
use crate::model::SystemGraph;
use crate::taxonomy::Taxonomy;

pub(crate) struct Scorer<'a> {
    /// When false, "small" is g2 and pairs get flipped on the way out.
    g1_is_small: bool,
    small_ids: Vec<&'a str>,
    large_ids: Vec<&'a str>,
    /// k x n node similarities and pair weights, row-major.
    sim: Vec<f64>,
    pairw: Vec<f64>,
    large_weights: Vec<f64>,
    pub(crate) small_types: Vec<Option<&'a str>>,
    pub(crate) large_types: Vec<Option<&'a str>>,
    edges_small: Vec<(usize, usize, f64)>,
    edges_large: Vec<(usize, usize, f64)>,
    edge_weight_small: f64,
    edge_weight_large: f64,
    adj_small: HashSet<(usize, usize)>,
    adj_large: HashSet<(usize, usize)>,
    alpha: f64,
    pub(crate) k: usize,
    pub(crate) n: usize,
}

fn index_edges(
    g: &SystemGraph,
    index: &HashMap<&str, usize>,
) -> (Vec<(usize, usize, f64)>, f64, HashSet<(usize, usize)>) {
    let mut edges = Vec::with_capacity(g.edges.len());
    let mut total = 0.0;
    let mut adjacency = HashSet::new();
    for e in &g.edges {
        let u = index[e.from.as_str()];
        let v = index[e.to.as_str()];
        let key = (u.min(v), u.max(v));
        edges.push((key.0, key.1, e.weight));
        total += e.weight;
        adjacency.insert(key);
    }
    (edges, total, adjacency)
}

impl<'a> Scorer<'a> {
    pub(crate) fn new(
        g1: &'a SystemGraph,
        g2: &'a SystemGraph,
        t: &Taxonomy,
        cfg: &SimilarityConfig,
        alpha: f64,
    ) -> Result<Self> {
        let g1_is_small = g1.nodes.len() <= g2.nodes.len();
        let (small, large) = if g1_is_small { (g1, g2) } else { (g2, g1) };

        let small_index: HashMap<&str, usize> = small
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.as_str(), i))
            .collect();
        let large_index: HashMap<&str, usize> = large
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.as_str(), i))
            .collect();
        if small_index.len() != small.nodes.len() || large_index.len() != large.nodes.len() {
            return Err(Error::InvalidMatching(
                "graphs with duplicate node ids cannot be matched".into(),
            ));
        }

        let k = small.nodes.len();
        let n = large.nodes.len();
        let mut sim = vec![0.0; k * n];
        let mut pairw = vec![0.0; k * n];
        for (i, ns) in small.nodes.iter().enumerate() {
            for (j, nl) in large.nodes.iter().enumerate() {
                // Keep node order stable under argument swap so the score
                // is exactly symmetric.
                let s = if g1_is_small {
                    node_similarity(ns, nl, t, cfg)?
                } else {
                    node_similarity(nl, ns, t, cfg)?
                };
                sim[i * n + j] = s;
                pairw[i * n + j] = 0.5 * (ns.weight + nl.weight);
            }
        }

        let (edges_small, edge_weight_small, adj_small) = index_edges(small, &small_index);
        let (edges_large, edge_weight_large, adj_large) = index_edges(large, &large_index);

        Ok(Scorer {
            g1_is_small,
            small_ids: small.nodes.iter().map(|n| n.id.as_str()).collect(),
            large_ids: large.nodes.iter().map(|n| n.id.as_str()).collect(),
            sim,
            pairw,
            large_weights: large.nodes.iter().map(|n| n.weight).collect(),
            small_types: small.nodes.iter().map(|n| n.taxonomy_label()).collect(),
            large_types: large.nodes.iter().map(|n| n.taxonomy_label()).collect(),
            edges_small,
            edges_large,
            edge_weight_small,
            edge_weight_large,
            adj_small,
            adj_large,
            alpha,
            k,
            n,
        })
    }

    #[inline]
    pub(crate) fn node_sim(&self, i: usize, j: usize) -> f64 {
        self.sim[i * self.n + j]
    }

    /// Full score of an assignment (small index -> large index).
    pub(crate) fn score(&self, assignment: &[usize]) -> f64 {
        debug_assert_eq!(assignment.len(), self.k);

        let mut matched_large = vec![false; self.n];
        let mut numerator = 0.0;
        let mut denominator = 0.0;
        for (i, &j) in assignment.iter().enumerate() {
            matched_large[j] = true;
            let w = self.pairw[i * self.n + j];
            numerator += w * self.sim[i * self.n + j];
            denominator += w;
        }
        for (j, matched) in matched_large.iter().enumerate() {
            if !matched {
                denominator += self.large_weights[j];
            }
        }
        // All-zero node weights carry no evidence either way; treat the node
        // term as vacuously satisfied, mirroring the edgeless edge term.
        let node_term = if denominator == 0.0 {
            1.0
        } else {
            numerator / denominator
        };

        let small_to_large = if self.edges_small.is_empty() {
            1.0
        } else {
            let mut preserved = 0.0;
            for &(u, v, w) in &self.edges_small {
                let (a, b) = (assignment[u], assignment[v]);
                if self.adj_large.contains(&(a.min(b), a.max(b))) {
                    preserved += w;
                }
            }
            preserved / self.edge_weight_small
        };

        let large_to_small = if self.edges_large.is_empty() {
            1.0
        } else {
            let mut inverse = vec![usize::MAX; self.n];
            for (i, &j) in assignment.iter().enumerate() {
                inverse[j] = i;
            }
            let mut preserved = 0.0;
            for &(u, v, w) in &self.edges_large {
                let (a, b) = (inverse[u], inverse[v]);
                if a != usize::MAX
                    && b != usize::MAX
                    && self.adj_small.contains(&(a.min(b), a.max(b)))
                {
                    preserved += w;
                }
            }
            preserved / self.edge_weight_large
        };

        let edge_term = 0.5 * (small_to_large + large_to_small);
        self.alpha * node_term + (1.0 - self.alpha) * edge_term
    }

    /// Translates a public matching into the internal orientation.
    pub(crate) fn assignment_from_matching(&self, matching: &NodeMatching) -> Result<Vec<usize>> {
        let small_index: HashMap<&str, usize> = self
            .small_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (*id, i))
            .collect();
        let large_index: HashMap<&str, usize> = self
            .large_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (*id, i))
            .collect();
        let mut assignment = vec![usize::MAX; self.k];
        for (a, b) in &matching.pairs {
            let (s, l) = if self.g1_is_small { (a, b) } else { (b, a) };
            let i = *small_index
                .get(s.as_str())
                .ok_or_else(|| Error::InvalidMatching(format!("unknown node {s:?}")))?;
            let j = *large_index
                .get(l.as_str())
                .ok_or_else(|| Error::InvalidMatching(format!("unknown node {l:?}")))?;
            assignment[i] = j;
        }
        if assignment.iter().any(|j| *j == usize::MAX) {
            return Err(Error::InvalidMatching(
                "matching does not cover the smaller graph".into(),
            ));
        }
        Ok(assignment)
    }

    /// Pairs in `(g1, g2)` orientation, sorted by the g1 node id.
    pub(crate) fn matching_from_assignment(&self, assignment: &[usize]) -> NodeMatching {
        let mut pairs: Vec<(String, String)> = assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                let s = self.small_ids[i].to_string();
                let l = self.large_ids[j].to_string();
                if self.g1_is_small {
                    (s, l)
                } else {
                    (l, s)
                }
            })
            .collect();
        pairs.sort();
        NodeMatching { pairs }
    }
}
