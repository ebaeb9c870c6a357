//! Seeded steepest-ascent search over injective node assignments.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::attrsim::SimilarityConfig;
use crate::error::Result;
use crate::matching::{MatchConfig, MatchStrategy, NodeMatching, Scorer};
use crate::model::SystemGraph;
use crate::taxonomy::Taxonomy;

pub struct HillClimb;

impl MatchStrategy for HillClimb {
    fn name(&self) -> &'static str {
        "hill-climb"
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
        let scorer = Scorer::new(g1, g2, t, cfg, mc.alpha)?;

        let mut best: Option<(Vec<usize>, f64)> = None;
        for restart in 0..mc.restarts {
            // Independent stream per restart: results do not depend on the
            // order restarts are evaluated in.
            let mut rng = ChaCha8Rng::seed_from_u64(mix(mc.seed, restart as u64));
            let start = match restart {
                0 => greedy_init(&scorer, None),
                r if r % 2 == 1 => random_init(&scorer, &mut rng),
                _ => greedy_init(&scorer, Some(&mut rng)),
            };
            let (assignment, score) = ascend(&scorer, start, mc.max_plateau_steps);
            if best.as_ref().map_or(true, |(_, b)| score > *b) {
                best = Some((assignment, score));
            }
        }

        let (assignment, score) = best.expect("restarts >= 1");
        Ok((scorer.matching_from_assignment(&assignment), score))
    }
}

fn mix(seed: u64, stream: u64) -> u64 {
    // splitmix64 over the combined value
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Candidate pairs sorted by (type label match, node similarity) descending,
/// assigned greedily. Passing an rng jitters the similarity key to vary the
/// starting point across restarts.
fn greedy_init(scorer: &Scorer<'_>, mut rng: Option<&mut ChaCha8Rng>) -> Vec<usize> {
    let mut candidates: Vec<(bool, f64, usize, usize)> = Vec::with_capacity(scorer.k * scorer.n);
    for i in 0..scorer.k {
        for j in 0..scorer.n {
            let type_match = match (scorer.small_types[i], scorer.large_types[j]) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            };
            let jitter = rng.as_deref_mut().map_or(0.0, |r| r.gen_range(0.0..0.1));
            candidates.push((type_match, scorer.node_sim(i, j) + jitter, i, j));
        }
    }
    candidates.sort_by(|a, b| {
        b.0.cmp(&a.0)
            .then(b.1.partial_cmp(&a.1).expect("finite similarity"))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });

    let mut assignment = vec![usize::MAX; scorer.k];
    let mut used = vec![false; scorer.n];
    let mut assigned = 0;
    for (_, _, i, j) in candidates {
        if assignment[i] == usize::MAX && !used[j] {
            assignment[i] = j;
            used[j] = true;
            assigned += 1;
            if assigned == scorer.k {
                break;
            }
        }
    }
    assignment
}

fn random_init(scorer: &Scorer<'_>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..scorer.n).collect();
    indices.shuffle(rng);
    indices.truncate(scorer.k);
    indices
}

/// Steepest ascent over the 2-swap neighborhood: exchange the partners of
/// two matched pairs, or move one pair onto an unmatched large-side node.
/// Equal-score (plateau) moves are taken up to the configured budget.
fn ascend(scorer: &Scorer<'_>, mut assignment: Vec<usize>, max_plateau: usize) -> (Vec<usize>, f64) {
    let mut current = scorer.score(&assignment);
    let mut plateau_steps = 0;

    loop {
        let mut best_move: Option<(usize, usize, f64)> = None; // (i, new j or swap partner tag)
        let mut best_is_swap = false;

        // partner exchanges
        for i1 in 0..assignment.len() {
            for i2 in (i1 + 1)..assignment.len() {
                let (j1, j2) = (assignment[i1], assignment[i2]);
                assignment[i1] = j2;
                assignment[i2] = j1;
                let s = scorer.score(&assignment);
                assignment[i1] = j1;
                assignment[i2] = j2;
                if best_move.as_ref().map_or(true, |(_, _, b)| s > *b) {
                    best_move = Some((i1, i2, s));
                    best_is_swap = true;
                }
            }
        }

        // reassignments to unmatched large nodes
        let mut used = vec![false; scorer.n];
        for &j in &assignment {
            used[j] = true;
        }
        for i in 0..assignment.len() {
            let old = assignment[i];
            for (j, taken) in used.iter().enumerate() {
                if *taken {
                    continue;
                }
                assignment[i] = j;
                let s = scorer.score(&assignment);
                assignment[i] = old;
                if best_move.as_ref().map_or(true, |(_, _, b)| s > *b) {
                    best_move = Some((i, j, s));
                    best_is_swap = false;
                }
            }
        }

        let Some((a, b, s)) = best_move else { break };
        if s > current {
            plateau_steps = 0;
        } else if s == current && plateau_steps < max_plateau {
            plateau_steps += 1;
        } else {
            break;
        }
        if best_is_swap {
            assignment.swap(a, b);
        } else {
            assignment[a] = b;
        }
        current = s;
    }

    (assignment, current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttributeValue, Edge, Node};
    use crate::taxonomy::equipment_taxonomy;

    fn typed_node(id: &str, label: &str, cpu: f64) -> Node {
        Node::new(id)
            .with_attribute(
                "type",
                AttributeValue::Taxonomy {
                    value: label.into(),
                },
                1.0,
            )
            .with_attribute(
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
    fn self_match_is_perfect() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let g = SystemGraph::new(
            vec![
                typed_node("m", "Master", 3.0),
                typed_node("s1", "Slave", 5.0),
                typed_node("s2", "Slave", 7.0),
            ],
            vec![
                Edge {
                    from: "m".into(),
                    to: "s1".into(),
                    weight: 1.0,
                },
                Edge {
                    from: "m".into(),
                    to: "s2".into(),
                    weight: 1.0,
                },
            ],
        );
        let (matching, score) = HillClimb.best_matching(&g, &g, &t, &cfg, &mc).unwrap();
        assert_eq!(score, 1.0);
        assert_eq!(matching.pairs.len(), 3);
    }

    #[test]
    fn matches_types_across_listing_order() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig::default();
        let g1 = SystemGraph::new(
            vec![typed_node("a", "Master", 5.0), typed_node("b", "Slave", 5.0)],
            vec![],
        );
        let g2 = SystemGraph::new(
            vec![typed_node("x", "Slave", 5.0), typed_node("y", "Master", 5.0)],
            vec![],
        );
        let (matching, _) = HillClimb.best_matching(&g1, &g2, &t, &cfg, &mc).unwrap();
        assert_eq!(
            matching.pairs,
            vec![
                ("a".to_string(), "y".to_string()),
                ("b".to_string(), "x".to_string())
            ]
        );
    }

    #[test]
    fn deterministic_for_a_seed() {
        let t = equipment_taxonomy();
        let cfg = SimilarityConfig::default();
        let mc = MatchConfig {
            seed: 11,
            ..MatchConfig::default()
        };
        let g1 = SystemGraph::new(
            vec![
                typed_node("a", "Master", 1.0),
                typed_node("b", "Slave", 4.0),
                typed_node("c", "Slave", 8.0),
            ],
            vec![Edge {
                from: "a".into(),
                to: "b".into(),
                weight: 1.0,
            }],
        );
        let g2 = SystemGraph::new(
            vec![
                typed_node("p", "Slave", 4.2),
                typed_node("q", "Master", 0.8),
                typed_node("r", "Switch", 8.5),
                typed_node("s", "Slave", 7.9),
            ],
            vec![Edge {
                from: "q".into(),
                to: "p".into(),
                weight: 1.0,
            }],
        );
        let first = HillClimb.best_matching(&g1, &g2, &t, &cfg, &mc).unwrap();
        let second = HillClimb.best_matching(&g1, &g2, &t, &cfg, &mc).unwrap();
        assert_eq!(first, second);
    }
}
