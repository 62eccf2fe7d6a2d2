//! Clustering into logical families, nearest-neighbor queries, outlier
//! scores, and support-set algebra.
//!
//! Clustering is standard agglomerative: start from singletons, repeatedly
//! merge the two clusters at minimum linkage distance, record that distance
//! as the merge height. Distances come from [`Metric::distance`] (cosine and
//! jaccard similarities become `1 − s`). Equal-distance ties merge the pair
//! whose pair of cluster representatives — each cluster is represented by
//! its lexicographically smallest member id — is smallest, so results are
//! fully deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::corpus::{Corpus, ProofVector, Theorem, VectorKind};
use crate::error::{Error, Result};
use crate::metrics::Metric;

/// Linkage rule for cluster-to-cluster distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Linkage {
    /// Minimum pairwise distance.
    Single,
    /// Maximum pairwise distance.
    Complete,
    /// Mean pairwise distance (UPGMA).
    #[default]
    Average,
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
        })
    }
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Linkage> {
        match s {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            other => Err(Error::Parse(format!(
                "unknown linkage '{other}' (expected 'single', 'complete', or 'average')"
            ))),
        }
    }
}

/// A node in a dendrogram: an input theorem or an earlier merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRef {
    /// Index into [`Dendrogram::leaves`].
    Leaf(usize),
    /// Index into [`Dendrogram::merges`].
    Internal(usize),
}

/// One agglomeration step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: NodeRef,
    pub right: NodeRef,
    /// Linkage distance at which the two clusters joined.
    pub height: f64,
}

/// The full merge history of one clustering run.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    leaves: Vec<String>,
    merges: Vec<Merge>,
    linkage: Linkage,
    metric: Metric,
}

impl Dendrogram {
    /// Theorem ids in input order.
    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    /// Merges in execution order; exactly `leaves().len() − 1` entries,
    /// with non-decreasing heights.
    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn linkage(&self) -> Linkage {
        self.linkage
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }
}

/// Disjoint theorem families obtained by cutting a dendrogram.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyPartition {
    threshold: f64,
    families: Vec<Vec<String>>,
}

impl FamilyPartition {
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Families as sorted id lists, ordered by first member.
    pub fn families(&self) -> &[Vec<String>] {
        &self.families
    }
}

fn check_single_system(theorems: &[&Theorem]) -> Result<()> {
    if let Some(first) = theorems.first() {
        for t in theorems {
            if t.system() != first.system() {
                return Err(Error::MixedSystems {
                    expected: first.system().to_string(),
                    found: t.system().to_string(),
                });
            }
        }
    }
    Ok(())
}

// Linkage distance between member sets, read directly off the base matrix.
// The pair order is a function of the member sets alone — outer loop over the
// cluster holding the smallest index, members ascending — so the average's
// summation order (and thus the exact result) is reproducible bit-for-bit by
// any implementation that does the same, regardless of its bookkeeping.
fn linkage_distance(base: &[Vec<f64>], a: &[usize], b: &[usize], linkage: Linkage) -> f64 {
    let (a, b) = if a[0] <= b[0] { (a, b) } else { (b, a) };
    let pairs = a.iter().flat_map(|&i| b.iter().map(move |&j| base[i][j]));
    match linkage {
        Linkage::Single => pairs.fold(f64::INFINITY, f64::min),
        Linkage::Complete => pairs.fold(0.0, f64::max),
        Linkage::Average => pairs.sum::<f64>() / (a.len() * b.len()) as f64,
    }
}

struct Cluster {
    members: Vec<usize>,
    rep: String,
    node: NodeRef,
}

/// Agglomerative clustering of same-system theorems.
pub fn cluster(theorems: &[&Theorem], metric: Metric, linkage: Linkage) -> Result<Dendrogram> {
    let n = theorems.len();
    if n < 2 {
        return Err(Error::TooFewItems(format!(
            "clustering needs at least 2 theorems, got {n}"
        )));
    }
    check_single_system(theorems)?;

    let mut base = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = metric.distance(&theorems[i].vector, &theorems[j].vector)?;
            base[i][j] = d;
            base[j][i] = d;
        }
    }

    let mut active: Vec<Cluster> = theorems
        .iter()
        .enumerate()
        .map(|(i, t)| Cluster {
            members: vec![i],
            rep: t.id.clone(),
            node: NodeRef::Leaf(i),
        })
        .collect();

    let mut merges = Vec::with_capacity(n - 1);
    while active.len() > 1 {
        let mut best: Option<(f64, (&str, &str), usize, usize)> = None;
        for a in 0..active.len() {
            for b in (a + 1)..active.len() {
                let d = linkage_distance(&base, &active[a].members, &active[b].members, linkage);
                let ra = active[a].rep.as_str();
                let rb = active[b].rep.as_str();
                let key = if ra <= rb { (ra, rb) } else { (rb, ra) };
                let better = match best {
                    None => true,
                    Some((bd, bk, _, _)) => d < bd || (d == bd && key < bk),
                };
                if better {
                    best = Some((d, key, a, b));
                }
            }
        }
        let (height, _, a, b) = best.expect("at least one pair");

        let (left_ix, right_ix) = if active[a].rep <= active[b].rep {
            (a, b)
        } else {
            (b, a)
        };
        merges.push(Merge {
            left: active[left_ix].node,
            right: active[right_ix].node,
            height,
        });

        // b > a always; remove the higher index first
        let second = active.swap_remove(b);
        let first = active.swap_remove(a);
        let mut members = first.members;
        members.extend(second.members);
        members.sort_unstable();
        let rep = if first.rep <= second.rep {
            first.rep
        } else {
            second.rep
        };
        active.push(Cluster {
            members,
            rep,
            node: NodeRef::Internal(merges.len() - 1),
        });
    }

    Ok(Dendrogram {
        leaves: theorems.iter().map(|t| t.id.clone()).collect(),
        merges,
        linkage,
        metric,
    })
}

/// Families formed by the merges at height ≤ `threshold`.
pub fn cut(dendrogram: &Dendrogram, threshold: f64) -> FamilyPartition {
    let n = dendrogram.leaves.len();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    // one representative leaf per internal node, filled as merges are walked
    let mut internal_leaf = Vec::with_capacity(dendrogram.merges.len());
    for merge in &dendrogram.merges {
        let leaf_of = |node: NodeRef, internal_leaf: &[usize]| match node {
            NodeRef::Leaf(i) => i,
            NodeRef::Internal(m) => internal_leaf[m],
        };
        let l = leaf_of(merge.left, &internal_leaf);
        let r = leaf_of(merge.right, &internal_leaf);
        internal_leaf.push(l);
        if merge.height <= threshold {
            let (rl, rr) = (find(&mut parent, l), find(&mut parent, r));
            parent[rl] = rr;
        }
    }

    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups
            .entry(root)
            .or_default()
            .push(dendrogram.leaves[i].clone());
    }
    let mut families: Vec<Vec<String>> = groups
        .into_values()
        .map(|mut ids| {
            ids.sort();
            ids
        })
        .collect();
    families.sort();

    FamilyPartition {
        threshold,
        families,
    }
}

/// The up-to-`k` theorems of the query's system ranked closest to `query`:
/// by similarity descending for cosine/jaccard, by distance ascending for
/// euclidean, ties broken by id ascending.
pub fn nearest(
    corpus: &Corpus,
    query: &ProofVector,
    metric: Metric,
    k: usize,
) -> Result<Vec<(String, f64)>> {
    nearest_excluding(corpus, query, metric, k, None)
}

/// [`nearest`], optionally skipping one theorem id (so a stored theorem can
/// be queried against the rest of the corpus).
pub fn nearest_excluding(
    corpus: &Corpus,
    query: &ProofVector,
    metric: Metric,
    k: usize,
    exclude: Option<&str>,
) -> Result<Vec<(String, f64)>> {
    let system = corpus
        .registry()
        .get(query.system())
        .ok_or_else(|| Error::UnknownSystem(query.system().to_string()))?;
    if query.dimension() != system.dimension() {
        return Err(Error::DimensionMismatch {
            system: system.id.clone(),
            expected: system.dimension(),
            actual: query.dimension(),
        });
    }

    let mut scored = Vec::new();
    for t in corpus.theorems_in(query.system()) {
        if exclude == Some(t.id.as_str()) {
            continue;
        }
        scored.push((t.id.clone(), metric.value(query, &t.vector)?));
    }
    scored.sort_by(|a, b| {
        let by_score = if metric.is_distance() {
            a.1.total_cmp(&b.1)
        } else {
            b.1.total_cmp(&a.1)
        };
        by_score.then_with(|| a.0.cmp(&b.0))
    });
    scored.truncate(k);
    Ok(scored)
}

fn support_combine(theorems: &[&Theorem], all: bool) -> Result<ProofVector> {
    let first = theorems.first().ok_or(Error::EmptyList)?;
    check_single_system(theorems)?;
    let dim = first.vector.dimension();
    let mut bits = vec![all; dim];
    for t in theorems {
        for (bit, &v) in bits.iter_mut().zip(t.vector.values()) {
            if all {
                *bit = *bit && v > 0.0;
            } else {
                *bit = *bit || v > 0.0;
            }
        }
    }
    ProofVector::new(
        first.system(),
        VectorKind::Binary,
        bits.into_iter()
            .map(|b| if b { 1.0 } else { 0.0 })
            .collect(),
    )
}

/// Coordinates used by *every* input: entrywise AND of supports.
///
/// This is the intersection of recorded dependencies — a lower bound from
/// the data, not a claim that the shared axioms are logically minimal.
pub fn common_core(theorems: &[&Theorem]) -> Result<ProofVector> {
    support_combine(theorems, true)
}

/// Coordinates used by *any* input: entrywise OR of supports.
pub fn footprint(theorems: &[&Theorem]) -> Result<ProofVector> {
    support_combine(theorems, false)
}

/// Isolation score per theorem: `1 −` mean similarity to its `k` nearest
/// neighbors (cosine/jaccard), or mean distance to its `k` nearest
/// (euclidean). Sorted most-isolated first, ties by id ascending.
pub fn outlier_scores(
    theorems: &[&Theorem],
    metric: Metric,
    k: usize,
) -> Result<Vec<(String, f64)>> {
    let n = theorems.len();
    if n < 2 {
        return Err(Error::TooFewItems(format!(
            "outlier scoring needs at least 2 theorems, got {n}"
        )));
    }
    if k == 0 || k > n - 1 {
        return Err(Error::TooFewItems(format!(
            "neighbor count k must be between 1 and {}, got {k}",
            n - 1
        )));
    }
    check_single_system(theorems)?;

    let mut scores = Vec::with_capacity(n);
    for (i, t) in theorems.iter().enumerate() {
        let mut values = Vec::with_capacity(n - 1);
        for (j, other) in theorems.iter().enumerate() {
            if i != j {
                values.push(metric.value(&t.vector, &other.vector)?);
            }
        }
        // nearest = highest similarity, or lowest distance
        if metric.is_distance() {
            values.sort_by(f64::total_cmp);
        } else {
            values.sort_by(|a, b| b.total_cmp(a));
        }
        let mean = values[..k].iter().sum::<f64>() / k as f64;
        let score = if metric.is_distance() {
            mean
        } else {
            1.0 - mean
        };
        scores.push((t.id.clone(), score));
    }
    scores.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(scores)
}
