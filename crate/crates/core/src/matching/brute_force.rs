//! Exhaustive matching search. Exact but factorial; guarded to small graphs
//! and used as the oracle for the heuristic strategies.

use crate::attrsim::SimilarityConfig;
use crate::error::{Error, Result};
use crate::matching::{MatchConfig, MatchStrategy, NodeMatching, Scorer};
use crate::model::SystemGraph;
use crate::taxonomy::Taxonomy;

/// Largest smaller-graph size the exhaustive search accepts.
pub const BRUTE_FORCE_NODE_LIMIT: usize = 8;

pub struct BruteForce;

impl MatchStrategy for BruteForce {
    fn name(&self) -> &'static str {
        "brute-force"
    }

    fn best_matching(
        &self,
        g1: &SystemGraph,
        g2: &SystemGraph,
        t: &Taxonomy,
        cfg: &SimilarityConfig,
        mc: &MatchConfig,
    ) -> Result<(NodeMatching, f64)> {
        mc.validate()?;
        g1.ensure_valid()?;
        g2.ensure_valid()?;
        let smaller = g1.nodes.len().min(g2.nodes.len());
        if smaller > BRUTE_FORCE_NODE_LIMIT {
            return Err(Error::OracleLimit(smaller, BRUTE_FORCE_NODE_LIMIT));
        }

        let scorer = Scorer::new(g1, g2, t, cfg, mc.alpha)?;
        let mut search = Search {
            scorer: &scorer,
            assignment: vec![usize::MAX; scorer.k],
            used: vec![false; scorer.n],
            best: None,
        };
        search.recurse(0);
        let (matching, score) = search.best.expect("at least one assignment exists");
        Ok((matching, score))
    }
}

struct Search<'a, 'g> {
    scorer: &'a Scorer<'g>,
    assignment: Vec<usize>,
    used: Vec<bool>,
    best: Option<(NodeMatching, f64)>,
}

impl Search<'_, '_> {
    fn recurse(&mut self, depth: usize) {
        if depth == self.scorer.k {
            let score = self.scorer.score(&self.assignment);
            let candidate = || self.scorer.matching_from_assignment(&self.assignment);
            match &self.best {
                None => self.best = Some((candidate(), score)),
                Some((best_matching, best_score)) => {
                    // Ties go to the lexicographically smallest pair list.
                    if score > *best_score
                        || (score == *best_score && candidate().pairs < best_matching.pairs)
                    {
                        self.best = Some((candidate(), score));
                    }
                }
            }
            return;
        }
        for j in 0..self.scorer.n {
            if !self.used[j] {
                self.used[j] = true;
                self.assignment[depth] = j;
                self.recurse(depth + 1);
                self.used[j] = false;
            }
        }
        self.assignment[depth] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttributeValue, Node};
    use crate::taxonomy::equipment_taxonomy;

    fn cpu_node(id: &str, cpu: f64) -> Node {
        Node::new(id).with_attribute(
            "cpu",
            AttributeValue::Numerical {
                value: cpu,
                min: 0.0,
                max: 10.0,
            },
            1.0,
        )
    }

    #[test]
    fn self_match_is_exactly_one() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let g = SystemGraph::new(vec![cpu_node("a", 1.0), cpu_node("b", 2.0)], vec![]);
        let (_, score) = BruteForce.best_matching(&g, &g, &t, &cfg, &mc).unwrap();
        assert_eq!(score, 1.0);
    }

    #[test]
    fn single_nodes_get_the_unique_matching() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let g1 = SystemGraph::new(vec![cpu_node("only", 3.0)], vec![]);
        let g2 = SystemGraph::new(vec![cpu_node("peer", 4.0)], vec![]);
        let (matching, _) = BruteForce.best_matching(&g1, &g2, &t, &cfg, &mc).unwrap();
        assert_eq!(matching.pairs, vec![("only".to_string(), "peer".to_string())]);
    }

    #[test]
    fn size_guard_errors_beyond_the_limit() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let nodes: Vec<Node> = (0..9).map(|i| cpu_node(&format!("n{i}"), i as f64)).collect();
        let g = SystemGraph::new(nodes, vec![]);
        assert!(matches!(
            BruteForce.best_matching(&g, &g, &t, &cfg, &mc),
            Err(Error::OracleLimit(9, BRUTE_FORCE_NODE_LIMIT))
        ));
    }

    #[test]
    fn prefers_the_lexicographic_matching_on_ties() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        // Two indistinguishable nodes on each side: every matching scores 1.
        let g1 = SystemGraph::new(vec![cpu_node("a", 5.0), cpu_node("b", 5.0)], vec![]);
        let g2 = SystemGraph::new(vec![cpu_node("x", 5.0), cpu_node("y", 5.0)], vec![]);
        let (matching, score) = BruteForce.best_matching(&g1, &g2, &t, &cfg, &mc).unwrap();
        assert_eq!(score, 1.0);
        assert_eq!(
            matching.pairs,
            vec![
                ("a".to_string(), "x".to_string()),
                ("b".to_string(), "y".to_string())
            ]
        );
    }
}
