//! Maximum-similarity node matching between two state graphs.
//!
//! The score of a fixed matching blends a weighted-average node term with a
//! preserved-edge term. Maximization is delegated to interchangeable
//! strategies behind [`MatchStrategy`]: a seeded hill climber for everyday
//! use and an exhaustive search that doubles as its oracle on small graphs.

mod brute_force;
mod hill_climb;
mod score;

pub use brute_force::BruteForce;
pub use hill_climb::HillClimb;
pub(crate) use score::Scorer;

use serde::{Deserialize, Serialize};

use crate::attrsim::{sim_attribute, SimilarityConfig};
use crate::error::{Error, Result};
use crate::model::{AttributeValue, Node, SystemGraph};
use crate::taxonomy::Taxonomy;

/// An injective assignment of nodes of one graph to nodes of the other.
/// Pairs are `(id in g1, id in g2)`; every node of the smaller graph is
/// matched, surplus nodes of the larger graph stay unmatched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeMatching {
    pub pairs: Vec<(String, String)>,
}

impl NodeMatching {
    /// Identity matching for comparing a graph against itself.
    pub fn identity(g: &SystemGraph) -> Self {
        NodeMatching {
            pairs: g.nodes.iter().map(|n| (n.id.clone(), n.id.clone())).collect(),
        }
    }

    pub fn validate(&self, g1: &SystemGraph, g2: &SystemGraph) -> Result<()> {
        let expected = g1.nodes.len().min(g2.nodes.len());
        if self.pairs.len() != expected {
            return Err(Error::InvalidMatching(format!(
                "expected {expected} pairs, got {}",
                self.pairs.len()
            )));
        }
        let mut left = std::collections::BTreeSet::new();
        let mut right = std::collections::BTreeSet::new();
        for (a, b) in &self.pairs {
            if g1.node(a).is_none() {
                return Err(Error::InvalidMatching(format!("{a:?} is not a node of g1")));
            }
            if g2.node(b).is_none() {
                return Err(Error::InvalidMatching(format!("{b:?} is not a node of g2")));
            }
            if !left.insert(a.as_str()) {
                return Err(Error::InvalidMatching(format!("{a:?} matched twice in g1")));
            }
            if !right.insert(b.as_str()) {
                return Err(Error::InvalidMatching(format!("{b:?} matched twice in g2")));
            }
        }
        Ok(())
    }
}

/// Knobs of the matching search. `alpha` blends the node term against the
/// edge term; `seed` makes the heuristic reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchConfig {
    pub alpha: f64,
    pub restarts: usize,
    pub max_plateau_steps: usize,
    pub seed: u64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            alpha: 0.8,
            restarts: 8,
            max_plateau_steps: 50,
            seed: 0,
        }
    }
}

impl MatchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be in [0, 1], got {}",
                self.alpha
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be positive".into()));
        }
        if self.max_plateau_steps == 0 {
            return Err(Error::InvalidParameter(
                "max_plateau_steps must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Weighted average of attribute similarities over the union of attribute
/// names. A name present on both sides contributes the mean of the two
/// attribute weights; a name present on one side only contributes that
/// side's weight with similarity 0, so missing data lowers the score.
///
/// Attribute pairs that cannot be compared (mismatched bounds, mismatched
/// distributions, differing vector dimensions, an undefined cosine angle)
/// count as similarity 0 instead of failing the whole node; the one
/// exception is two zero vectors, which are equal values and score 1.
pub fn node_similarity(
    n1: &Node,
    n2: &Node,
    t: &Taxonomy,
    cfg: &SimilarityConfig,
) -> Result<f64> {
    let mut names = std::collections::BTreeSet::new();
    for a in &n1.attributes {
        names.insert(a.name.as_str());
    }
    for a in &n2.attributes {
        names.insert(a.name.as_str());
    }

    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for name in names {
        match (n1.attribute(name), n2.attribute(name)) {
            (Some(a1), Some(a2)) => {
                let w = 0.5 * (a1.weight + a2.weight);
                numerator += w * pair_similarity(&a1.value, &a2.value, t, cfg);
                denominator += w;
            }
            (Some(a1), None) => denominator += a1.weight,
            (None, Some(a2)) => denominator += a2.weight,
            (None, None) => unreachable!("name came from one of the nodes"),
        }
    }

    if denominator == 0.0 {
        return Err(Error::UnweightedNode(n1.id.clone(), n2.id.clone()));
    }
    Ok(numerator / denominator)
}

fn pair_similarity(
    a1: &AttributeValue,
    a2: &AttributeValue,
    t: &Taxonomy,
    cfg: &SimilarityConfig,
) -> f64 {
    match sim_attribute(a1, a2, t, cfg) {
        Ok(s) => s,
        Err(Error::ZeroVector) => {
            let zero = |v: &AttributeValue| match v {
                AttributeValue::Vector { value } => value.iter().all(|c| *c == 0.0),
                _ => false,
            };
            if zero(a1) && zero(a2) {
                1.0
            } else {
                0.0
            }
        }
        Err(_) => 0.0,
    }
}

/// Scores a fixed matching:
/// `alpha * N + (1 - alpha) * E` where `N` is the pair-weighted node
/// similarity over matched pairs, penalized by the weight of unmatched
/// nodes, and `E` is the mean of the two directed preserved-edge-weight
/// fractions (1 for a direction without edges).
pub fn graph_similarity(
    g1: &SystemGraph,
    g2: &SystemGraph,
    matching: &NodeMatching,
    t: &Taxonomy,
    cfg: &SimilarityConfig,
    mc: &MatchConfig,
) -> Result<f64> {
    mc.validate()?;
    matching.validate(g1, g2)?;
    let scorer = Scorer::new(g1, g2, t, cfg, mc.alpha)?;
    let assignment = scorer.assignment_from_matching(matching)?;
    Ok(scorer.score(&assignment))
}

/// A matching maximization algorithm, selectable by name at runtime.
pub trait MatchStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn best_matching(
        &self,
        g1: &SystemGraph,
        g2: &SystemGraph,
        t: &Taxonomy,
        cfg: &SimilarityConfig,
        mc: &MatchConfig,
    ) -> Result<(NodeMatching, f64)>;
}

/// Every registered strategy, default first.
pub fn strategies() -> Vec<Box<dyn MatchStrategy>> {
    vec![Box::new(HillClimb), Box::new(BruteForce)]
}

pub fn strategy_names() -> Vec<&'static str> {
    strategies().iter().map(|s| s.name()).collect()
}

pub fn strategy_by_name(name: &str) -> Result<Box<dyn MatchStrategy>> {
    strategies()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::UnknownStrategy(name.to_string(), strategy_names().join(", ")))
}

/// Seeded local search; the default strategy.
pub fn best_matching_hill_climb(
    g1: &SystemGraph,
    g2: &SystemGraph,
    t: &Taxonomy,
    cfg: &SimilarityConfig,
    mc: &MatchConfig,
) -> Result<(NodeMatching, f64)> {
    HillClimb.best_matching(g1, g2, t, cfg, mc)
}

/// Exhaustive search over all injective matchings; the test oracle.
pub fn best_matching_brute_force(
    g1: &SystemGraph,
    g2: &SystemGraph,
    t: &Taxonomy,
    cfg: &SimilarityConfig,
    mc: &MatchConfig,
) -> Result<(NodeMatching, f64)> {
    BruteForce.best_matching(g1, g2, t, cfg, mc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttributeValue, Edge, Node};
    use crate::taxonomy::equipment_taxonomy;

    fn numeric(value: f64) -> AttributeValue {
        AttributeValue::Numerical {
            value,
            min: 0.0,
            max: 10.0,
        }
    }

    fn node_with_cpu(id: &str, cpu: f64) -> Node {
        Node::new(id).with_attribute("cpu", numeric(cpu), 1.0)
    }

    #[test]
    fn identical_nodes_score_one() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let n = Node::new("a")
            .with_attribute("cpu", numeric(3.0), 0.7)
            .with_attribute(
                "role",
                AttributeValue::Categorical {
                    value: "db".into(),
                },
                0.2,
            );
        assert_eq!(node_similarity(&n, &n, &t, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn single_attribute_follows_the_formula() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let a = node_with_cpu("a", 2.0);
        let b = node_with_cpu("b", 7.0);
        assert_eq!(node_similarity(&a, &b, &t, &cfg).unwrap(), 0.5);
    }

    #[test]
    fn one_sided_attribute_is_penalized() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let a = node_with_cpu("a", 5.0).with_attribute("disk", numeric(1.0), 1.0);
        let b = node_with_cpu("b", 5.0);
        // (1*1 + 1*0) / 2
        assert_eq!(node_similarity(&a, &b, &t, &cfg).unwrap(), 0.5);
    }

    #[test]
    fn all_zero_weights_error() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let a = Node::new("a").with_attribute("cpu", numeric(1.0), 0.0);
        let b = Node::new("b").with_attribute("cpu", numeric(1.0), 0.0);
        assert!(matches!(
            node_similarity(&a, &b, &t, &cfg),
            Err(Error::UnweightedNode(..))
        ));
    }

    #[test]
    fn zero_vectors_compare_as_equal_and_beat_mixed_pairs() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let zero = |id: &str| {
            Node::new(id).with_attribute(
                "log_event",
                AttributeValue::Vector {
                    value: vec![0.0, 0.0],
                },
                1.0,
            )
        };
        let live = Node::new("live").with_attribute(
            "log_event",
            AttributeValue::Vector {
                value: vec![0.3, 0.4],
            },
            1.0,
        );
        assert_eq!(node_similarity(&zero("a"), &zero("b"), &t, &cfg).unwrap(), 1.0);
        assert_eq!(node_similarity(&zero("a"), &live, &t, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn incomparable_bounds_count_as_dissimilar_at_node_level() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let a = Node::new("a").with_attribute("cpu", numeric(5.0), 1.0);
        let b = Node::new("b").with_attribute(
            "cpu",
            AttributeValue::Numerical {
                value: 5.0,
                min: 0.0,
                max: 100.0,
            },
            1.0,
        );
        assert_eq!(node_similarity(&a, &b, &t, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn identity_matching_scores_one() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let g = SystemGraph::new(
            vec![node_with_cpu("a", 1.0), node_with_cpu("b", 9.0)],
            vec![Edge {
                from: "a".into(),
                to: "b".into(),
                weight: 2.0,
            }],
        );
        let m = NodeMatching::identity(&g);
        assert_eq!(graph_similarity(&g, &g, &m, &t, &cfg, &mc).unwrap(), 1.0);
    }

    #[test]
    fn single_node_blend_arithmetic() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let g1 = SystemGraph::new(vec![node_with_cpu("x", 2.0)], vec![]);
        let g2 = SystemGraph::new(vec![node_with_cpu("y", 7.0)], vec![]);
        let m = NodeMatching {
            pairs: vec![("x".into(), "y".into())],
        };
        // 0.8 * 0.5 + 0.2 * 1.0
        let s = graph_similarity(&g1, &g2, &m, &t, &cfg, &mc).unwrap();
        assert!((s - 0.6).abs() < 1e-12);
    }

    #[test]
    fn dropped_edge_halves_the_edge_term() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let nodes = vec![node_with_cpu("a", 1.0), node_with_cpu("b", 9.0)];
        let g1 = SystemGraph::new(
            nodes.clone(),
            vec![Edge {
                from: "a".into(),
                to: "b".into(),
                weight: 1.0,
            }],
        );
        let g2 = SystemGraph::new(nodes, vec![]);
        let m = NodeMatching::identity(&g1);
        // nodes identical, edge term = mean(0, 1) = 0.5 -> 0.8 + 0.2 * 0.5
        let s = graph_similarity(&g1, &g2, &m, &t, &cfg, &mc).unwrap();
        assert!((s - 0.9).abs() < 1e-12);
    }

    #[test]
    fn invalid_matchings_are_rejected() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let g1 = SystemGraph::new(vec![node_with_cpu("a", 1.0), node_with_cpu("b", 2.0)], vec![]);
        let g2 = SystemGraph::new(vec![node_with_cpu("x", 1.0), node_with_cpu("y", 2.0)], vec![]);
        for pairs in [
            vec![("a".to_string(), "x".to_string())],
            vec![("a".to_string(), "x".to_string()), ("a".to_string(), "y".to_string())],
            vec![("a".to_string(), "x".to_string()), ("b".to_string(), "x".to_string())],
            vec![("a".to_string(), "z".to_string()), ("b".to_string(), "y".to_string())],
        ] {
            let m = NodeMatching { pairs };
            assert!(graph_similarity(&g1, &g2, &m, &t, &cfg, &mc).is_err());
        }
    }

    #[test]
    fn registry_resolves_both_strategies() {
        assert_eq!(strategy_names(), vec!["hill-climb", "brute-force"]);
        assert!(strategy_by_name("hill-climb").is_ok());
        assert!(strategy_by_name("brute-force").is_ok());
        assert!(matches!(
            strategy_by_name("annealing"),
            Err(Error::UnknownStrategy(..))
        ));
    }

    #[test]
    fn perturbing_an_attribute_never_helps_under_a_fixed_matching() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let g1 = SystemGraph::new(
            vec![node_with_cpu("a", 5.0), node_with_cpu("b", 2.0)],
            vec![Edge {
                from: "a".into(),
                to: "b".into(),
                weight: 1.0,
            }],
        );
        let m = NodeMatching::identity(&g1);
        let mut prev = f64::INFINITY;
        for step in 0..=10 {
            let mut g2 = g1.clone();
            if let AttributeValue::Numerical { value, .. } = &mut g2.nodes[0].attributes[0].value {
                *value = 5.0 + 0.5 * step as f64;
            }
            let s = graph_similarity(&g1, &g2, &m, &t, &cfg, &mc).unwrap();
            assert!(s <= prev + 1e-12);
            prev = s;
        }
    }
}
