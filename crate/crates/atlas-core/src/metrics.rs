//! Similarity and distance functions over proof vectors.
//!
//! All three metrics require both vectors to come from the same axiom
//! system. Cosine and Jaccard report similarity in `[0, 1]`; Euclidean
//! reports distance. Where clustering needs a distance from a similarity,
//! it is `1 − similarity` ([`Metric::distance`]).

use std::fmt;
use std::str::FromStr;

use crate::corpus::{ProofVector, Theorem};
use crate::error::{Error, Result};

/// The three comparison metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Cosine,
    Euclidean,
    Jaccard,
}

impl Metric {
    /// The metric's native value: similarity for cosine and jaccard,
    /// distance for euclidean.
    pub fn value(&self, u: &ProofVector, v: &ProofVector) -> Result<f64> {
        match self {
            Metric::Cosine => cosine_similarity(u, v),
            Metric::Euclidean => euclidean_distance(u, v),
            Metric::Jaccard => jaccard_index(u, v),
        }
    }

    /// The metric as a distance: `1 − similarity` for cosine and jaccard,
    /// the distance itself for euclidean.
    pub fn distance(&self, u: &ProofVector, v: &ProofVector) -> Result<f64> {
        match self {
            Metric::Cosine => Ok(1.0 - cosine_similarity(u, v)?),
            Metric::Euclidean => euclidean_distance(u, v),
            Metric::Jaccard => Ok(1.0 - jaccard_index(u, v)?),
        }
    }

    /// True when the native value is a distance (zero diagonal) rather
    /// than a similarity (unit diagonal).
    pub fn is_distance(&self) -> bool {
        matches!(self, Metric::Euclidean)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Cosine => "cosine",
            Metric::Euclidean => "euclidean",
            Metric::Jaccard => "jaccard",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Metric> {
        match s {
            "cosine" => Ok(Metric::Cosine),
            "euclidean" => Ok(Metric::Euclidean),
            "jaccard" => Ok(Metric::Jaccard),
            other => Err(Error::Parse(format!(
                "unknown metric '{other}' (expected 'cosine', 'euclidean', or 'jaccard')"
            ))),
        }
    }
}

fn check_comparable(u: &ProofVector, v: &ProofVector) -> Result<()> {
    if u.system() != v.system() {
        return Err(Error::SystemMismatch {
            left: u.system().to_string(),
            right: v.system().to_string(),
        });
    }
    if u.dimension() != v.dimension() {
        return Err(Error::DimensionMismatch {
            system: u.system().to_string(),
            expected: u.dimension(),
            actual: v.dimension(),
        });
    }
    Ok(())
}

fn dot(u: &ProofVector, v: &ProofVector) -> f64 {
    u.values()
        .iter()
        .zip(v.values())
        .map(|(&a, &b)| a * b)
        .sum()
}

/// Cosine similarity `dot(u,v) / (‖u‖·‖v‖)`, in `[0, 1]` for `[0, 1]`
/// entries. Undefined (an error) when either vector has empty support.
pub fn cosine_similarity(u: &ProofVector, v: &ProofVector) -> Result<f64> {
    check_comparable(u, v)?;
    if u.is_zero() {
        return Err(Error::ZeroVector(u.system().to_string()));
    }
    if v.is_zero() {
        return Err(Error::ZeroVector(v.system().to_string()));
    }
    // One sqrt over the product keeps cosine(u,u) == 1 exact for binary
    // vectors: the radicand is then a perfect square.
    let denom = (dot(u, u) * dot(v, v)).sqrt();
    Ok((dot(u, v) / denom).min(1.0))
}

/// Euclidean distance `√Σ(uᵢ−vᵢ)²`.
pub fn euclidean_distance(u: &ProofVector, v: &ProofVector) -> Result<f64> {
    check_comparable(u, v)?;
    let sum: f64 = u
        .values()
        .iter()
        .zip(v.values())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    Ok(sum.sqrt())
}

/// Jaccard index on supports: `|A∩B| / |A∪B|` where A, B are the sets of
/// coordinates with entry > 0. Two empty supports agree completely (1.0).
pub fn jaccard_index(u: &ProofVector, v: &ProofVector) -> Result<f64> {
    check_comparable(u, v)?;
    let mut intersection = 0usize;
    let mut union = 0usize;
    for (&a, &b) in u.values().iter().zip(v.values()) {
        let a = a > 0.0;
        let b = b > 0.0;
        if a && b {
            intersection += 1;
        }
        if a || b {
            union += 1;
        }
    }
    if union == 0 {
        Ok(1.0)
    } else {
        Ok(intersection as f64 / union as f64)
    }
}

/// Pairwise metric values over an ordered set of theorems.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    labels: Vec<String>,
    values: Vec<Vec<f64>>,
    metric: Metric,
    source_dimension: usize,
}

impl SimilarityMatrix {
    /// Theorem ids, in input order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Square matrix; `values()[i][j]` is the metric applied to theorems
    /// i and j.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Dimension of the vectors the matrix was computed from (used to
    /// normalize euclidean values for display).
    pub fn source_dimension(&self) -> usize {
        self.source_dimension
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Compute the pairwise matrix for theorems that share one system.
///
/// The diagonal is exact (1 for cosine/jaccard, 0 for euclidean) and the
/// matrix is symmetric bitwise: each off-diagonal value is computed once
/// and mirrored.
pub fn similarity_matrix(theorems: &[&Theorem], metric: Metric) -> Result<SimilarityMatrix> {
    let first = theorems.first().ok_or(Error::EmptySlice)?;
    for t in theorems {
        if t.system() != first.system() {
            return Err(Error::MixedSystems {
                expected: first.system().to_string(),
                found: t.system().to_string(),
            });
        }
        if metric == Metric::Cosine && t.vector.is_zero() {
            return Err(Error::ZeroVector(t.id.clone()));
        }
    }

    let n = theorems.len();
    let diagonal = if metric.is_distance() { 0.0 } else { 1.0 };
    let mut values = vec![vec![diagonal; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = metric.value(&theorems[i].vector, &theorems[j].vector)?;
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    Ok(SimilarityMatrix {
        labels: theorems.iter().map(|t| t.id.clone()).collect(),
        values,
        metric,
        source_dimension: first.vector.dimension(),
    })
}
