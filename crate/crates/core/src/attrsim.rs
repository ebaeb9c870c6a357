//! Per-attribute similarity functions. Every function returns a value in
//! [0, 1], is exactly symmetric in its two attributes, and yields 1 for a
//! same-variant pair of equal values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::AttributeValue;
use crate::normal::standard_normal_cdf;
use crate::taxonomy::Taxonomy;

/// Distance used when comparing vector attributes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorMetric {
    Cosine,
    InverseEuclidean,
    Minkowski { p: f64 },
}

impl Default for VectorMetric {
    fn default() -> Self {
        VectorMetric::Cosine
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SimilarityConfig {
    pub vector_metric: VectorMetric,
}

/// `1 - |a1 - a2| / |max - min|`, clamped into [0, 1] so values observed
/// outside the declared range stay comparable. Both sides must carry the
/// same bounds; bounds belong to the metric, not the snapshot.
pub fn sim_numerical(a1: f64, a2: f64, bounds1: (f64, f64), bounds2: (f64, f64)) -> Result<f64> {
    if bounds1 != bounds2 {
        return Err(Error::IncomparableNumerical(
            bounds1.0, bounds1.1, bounds2.0, bounds2.1,
        ));
    }
    let (min, max) = bounds1;
    if !(min < max) {
        return Err(Error::InvalidBounds(min, max));
    }
    Ok((1.0 - (a1 - a2).abs() / (max - min)).clamp(0.0, 1.0))
}

pub fn sim_vector(v1: &[f64], v2: &[f64], cfg: &SimilarityConfig) -> Result<f64> {
    if v1.len() != v2.len() {
        return Err(Error::DimensionMismatch(v1.len(), v2.len()));
    }
    match cfg.vector_metric {
        VectorMetric::Cosine => {
            let n1: f64 = v1.iter().map(|c| c * c).sum();
            let n2: f64 = v2.iter().map(|c| c * c).sum();
            if n1 == 0.0 || n2 == 0.0 {
                return Err(Error::ZeroVector);
            }
            let dot: f64 = v1.iter().zip(v2).map(|(a, b)| a * b).sum();
            // Negative angles count as fully dissimilar.
            Ok((dot / (n1 * n2).sqrt()).clamp(0.0, 1.0))
        }
        VectorMetric::InverseEuclidean => {
            let d: f64 = v1
                .iter()
                .zip(v2)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            Ok(1.0 / (1.0 + d))
        }
        VectorMetric::Minkowski { p } => {
            if !(p >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "minkowski exponent must be >= 1, got {p}"
                )));
            }
            let d: f64 = v1
                .iter()
                .zip(v2)
                .map(|(a, b)| (a - b).abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p);
            Ok(1.0 / (1.0 + d))
        }
    }
}

/// Exact, case-sensitive label equality.
pub fn sim_categorical(c1: &str, c2: &str) -> f64 {
    if c1 == c2 {
        1.0
    } else {
        0.0
    }
}

/// Depth-ratio similarity over the concept tree:
/// `2 * depth(lca) / (depth(c1) + depth(c2))`.
pub fn sim_taxonomy(t: &Taxonomy, c1: &str, c2: &str) -> Result<f64> {
    let lca = t.lowest_common_ancestor(c1, c2)?;
    let d_lca = t.depth(lca)? as f64;
    let d1 = t.depth(c1)? as f64;
    let d2 = t.depth(c2)? as f64;
    Ok(2.0 * d_lca / (d1 + d2))
}

/// `1 - |Phi(z1) - Phi(z2)]` over the metric's historical normal
/// distribution. Both attributes must reference the same distribution.
pub fn sim_distribution(a1: f64, a2: f64, dist1: (f64, f64), dist2: (f64, f64)) -> Result<f64> {
    if dist1 != dist2 {
        return Err(Error::IncomparableDistributions(
            dist1.0, dist1.1, dist2.0, dist2.1,
        ));
    }
    let (mu, sigma) = dist1;
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "distribution sigma must be positive, got {sigma}"
        )));
    }
    let p1 = standard_normal_cdf((a1 - mu) / sigma);
    let p2 = standard_normal_cdf((a2 - mu) / sigma);
    Ok(1.0 - (p1 - p2).abs())
}

/// Dispatch on matching variants; attributes of different kinds are
/// maximally dissimilar (0) rather than an error, since graphs captured on
/// different systems may disagree about an attribute's kind.
pub fn sim_attribute(
    a1: &AttributeValue,
    a2: &AttributeValue,
    t: &Taxonomy,
    cfg: &SimilarityConfig,
) -> Result<f64> {
    use AttributeValue::*;
    match (a1, a2) {
        (
            Numerical {
                value: v1,
                min: min1,
                max: max1,
            },
            Numerical {
                value: v2,
                min: min2,
                max: max2,
            },
        ) => sim_numerical(*v1, *v2, (*min1, *max1), (*min2, *max2)),
        (Vector { value: v1 }, Vector { value: v2 }) => sim_vector(v1, v2, cfg),
        (Categorical { value: c1 }, Categorical { value: c2 }) => Ok(sim_categorical(c1, c2)),
        (Taxonomy { value: c1 }, Taxonomy { value: c2 }) => sim_taxonomy(t, c1, c2),
        (
            Distribution {
                value: v1,
                mu: mu1,
                sigma: s1,
            },
            Distribution {
                value: v2,
                mu: mu2,
                sigma: s2,
            },
        ) => sim_distribution(*v1, *v2, (*mu1, *s1), (*mu2, *s2)),
        _ => Ok(0.0),
    }
}
