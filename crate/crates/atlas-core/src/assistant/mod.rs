//! Statement-to-suggestion pipeline: classify the axiom system, predict a
//! proof vector, explain it, and attach similar theorems.
//!
//! The pipeline runs in one of three modes. `remote` delegates
//! classification, prediction, and explanation to an HTTP language-model
//! backend and validates its reply. `offline` uses a deterministic local
//! predictor built on token overlap against a keyword lexicon and the
//! corpus itself. `auto` tries remote when an endpoint is configured and
//! silently falls back to offline otherwise — auto never surfaces backend
//! errors.

mod backend;
mod lexicon;

pub use lexicon::Lexicon;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::analysis::nearest;
use crate::corpus::{Corpus, ProofVector, VectorKind};
use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::registry::AxiomSystem;

/// Environment variable naming the backend endpoint URL.
pub const ENV_ENDPOINT: &str = "ATLAS_LLM_ENDPOINT";
/// Environment variable holding the bearer credential.
pub const ENV_API_KEY: &str = "ATLAS_LLM_API_KEY";
/// Environment variable naming the model.
pub const ENV_MODEL: &str = "ATLAS_LLM_MODEL";

/// Which engine produced a suggestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Remote,
    Offline,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Remote => "remote",
            BackendKind::Offline => "offline",
        })
    }
}

/// How suggest picks its engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Remote,
    Offline,
    /// Remote when an endpoint and key are configured, offline otherwise;
    /// remote failures fall back to offline instead of erroring.
    #[default]
    Auto,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Remote => "remote",
            Mode::Offline => "offline",
            Mode::Auto => "auto",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "remote" => Ok(Mode::Remote),
            "offline" => Ok(Mode::Offline),
            "auto" => Ok(Mode::Auto),
            other => Err(Error::Parse(format!(
                "unknown mode '{other}' (expected 'remote', 'offline', or 'auto')"
            ))),
        }
    }
}

/// Remote backend settings plus the mode switch.
#[derive(Debug, Clone)]
pub struct BackendConfig {
    pub endpoint: Option<String>,
    pub api_key: Option<String>,
    pub model: Option<String>,
    pub timeout: Duration,
    pub mode: Mode,
}

impl BackendConfig {
    /// Offline-only configuration; never touches the network.
    pub fn offline() -> BackendConfig {
        BackendConfig {
            endpoint: None,
            api_key: None,
            model: None,
            timeout: Duration::from_secs(30),
            mode: Mode::Offline,
        }
    }

    /// Read endpoint, key, and model from the `ATLAS_LLM_*` environment
    /// variables; unset or empty variables stay `None`.
    pub fn from_env(mode: Mode) -> BackendConfig {
        let read = |name: &str| std::env::var(name).ok().filter(|v| !v.is_empty());
        BackendConfig {
            endpoint: read(ENV_ENDPOINT),
            api_key: read(ENV_API_KEY),
            model: read(ENV_MODEL),
            timeout: Duration::from_secs(30),
            mode,
        }
    }
}

/// The pipeline's answer for one statement.
#[derive(Debug, Clone, PartialEq)]
pub struct Suggestion {
    /// Best-matching axiom system.
    pub system_id: String,
    /// Predicted proof vector over that system.
    pub vector: ProofVector,
    /// Short explanation of what drives the prediction.
    pub explanation: String,
    /// Up to three most cosine-similar corpus theorems on that system.
    pub similar: Vec<(String, f64)>,
    /// Engine that produced the prediction.
    pub backend: BackendKind,
    /// Confidence in `[0, 1]`; artifact-defined, not calibrated.
    pub confidence: f64,
}

/// A predicted vector with the predictor's confidence.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorPrediction {
    pub vector: ProofVector,
    pub confidence: f64,
}

/// Lowercase alphanumeric word tokens of a text.
pub fn tokenize(text: &str) -> BTreeSet<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

// Jaccard over token sets; no tokens on either side means no signal (0),
// unlike the vector-support metric where two empty supports agree.
fn token_jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

fn theorem_tokens(statement: &str, name: &str) -> BTreeSet<String> {
    let mut tokens = tokenize(statement);
    tokens.extend(tokenize(name));
    tokens
}

/// Rank every registered system against a statement, scores in `[0, 1]`.
///
/// Offline scoring: half the score is lexicon-keyword coverage of the
/// statement's tokens, half is the best token-overlap with any corpus
/// theorem of the system. Statements matching nothing rank all systems
/// uniformly. Ties break by system id.
pub fn classify_system(statement: &str, corpus: &Corpus) -> Result<Vec<(String, f64)>> {
    classify_system_with(statement, corpus, &Lexicon::builtin())
}

/// [`classify_system`] against a caller-supplied lexicon.
pub fn classify_system_with(
    statement: &str,
    corpus: &Corpus,
    lexicon: &Lexicon,
) -> Result<Vec<(String, f64)>> {
    if statement.trim().is_empty() {
        return Err(Error::EmptyStatement);
    }
    let query = tokenize(statement);

    let mut scores: Vec<(String, f64)> = corpus
        .registry()
        .systems()
        .iter()
        .map(|system| {
            let lexicon_score = match (lexicon.keywords(&system.id), query.len()) {
                (Some(words), n) if n > 0 => {
                    query.iter().filter(|t| words.contains(*t)).count() as f64 / n as f64
                }
                _ => 0.0,
            };
            let corpus_score = corpus
                .theorems_in(&system.id)
                .iter()
                .map(|t| token_jaccard(&query, &theorem_tokens(&t.statement, &t.name)))
                .fold(0.0, f64::max);
            (system.id.clone(), 0.5 * lexicon_score + 0.5 * corpus_score)
        })
        .collect();

    if !scores.is_empty() && scores.iter().all(|(_, s)| *s == 0.0) {
        let uniform = 1.0 / scores.len() as f64;
        for (_, s) in &mut scores {
            *s = uniform;
        }
    }
    scores.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(scores)
}

/// Deterministic offline vector prediction for a resolved system.
///
/// If some corpus theorem's statement+name tokens overlap the query at
/// Jaccard ≥ 0.5, its vector is returned with that overlap as confidence.
/// Otherwise the system's per-coordinate majority vote (mean ≥ 0.5, ties
/// to 1) is returned with confidence 0.25.
pub fn predict_vector_offline(
    statement: &str,
    system: &AxiomSystem,
    corpus: &Corpus,
) -> Result<VectorPrediction> {
    let theorems = corpus.theorems_in(&system.id);
    if theorems.is_empty() {
        return Err(Error::NoCorpusForSystem(system.id.clone()));
    }
    let query = tokenize(statement);

    let mut best: Option<(f64, &crate::corpus::Theorem)> = None;
    for t in &theorems {
        let overlap = token_jaccard(&query, &theorem_tokens(&t.statement, &t.name));
        let better = match best {
            None => true,
            Some((b, bt)) => overlap > b || (overlap == b && t.id < bt.id),
        };
        if better {
            best = Some((overlap, t));
        }
    }
    let (overlap, matched) = best.expect("non-empty theorem slice");
    if overlap >= 0.5 {
        return Ok(VectorPrediction {
            vector: matched.vector.clone(),
            confidence: overlap,
        });
    }

    let mut sums = vec![0.0; system.dimension()];
    for t in &theorems {
        for (sum, &v) in sums.iter_mut().zip(t.vector.values()) {
            *sum += v;
        }
    }
    let n = theorems.len() as f64;
    let bits: Vec<f64> = sums
        .iter()
        .map(|s| if s / n >= 0.5 { 1.0 } else { 0.0 })
        .collect();
    let vector = ProofVector::new(&system.id, VectorKind::Binary, bits)?;
    Ok(VectorPrediction {
        vector,
        confidence: 0.25,
    })
}

fn join_natural(items: &[&str]) -> String {
    match items {
        [] => String::new(),
        [one] => (*one).to_string(),
        [a, b] => format!("{a} and {b}"),
        _ => {
            let (last, init) = items.split_last().expect("three or more items");
            format!("{}, and {last}", init.join(", "))
        }
    }
}

// Template explanation from the predicted support's axiom groups, falling
// back to axiom keys for systems without group labels.
fn offline_explanation(vector: &ProofVector, system: &AxiomSystem) -> String {
    let support = vector.support();
    if support.is_empty() {
        return "The prediction uses no axioms.".to_string();
    }
    let axioms: Vec<_> = support.iter().filter_map(|&i| system.axiom_at(i)).collect();
    if !axioms.is_empty() && axioms.iter().all(|a| a.group.is_some()) {
        let mut groups: Vec<&str> = Vec::new();
        for axiom in &axioms {
            let group = axiom.group.as_deref().expect("checked above");
            if !groups.contains(&group) {
                groups.push(group);
            }
        }
        format!("Uses {} axioms.", join_natural(&groups))
    } else {
        let keys: Vec<&str> = axioms.iter().map(|a| a.key.as_str()).collect();
        format!("Uses axioms {}.", join_natural(&keys))
    }
}

// Top-3 cosine neighbors on the predicted system; a prediction with empty
// support (or a corpus that breaks cosine) yields no neighbors rather than
// an error.
fn similar_theorems(corpus: &Corpus, vector: &ProofVector) -> Vec<(String, f64)> {
    if vector.is_zero() {
        return Vec::new();
    }
    nearest(corpus, vector, Metric::Cosine, 3).unwrap_or_default()
}

fn suggest_offline(statement: &str, corpus: &Corpus, lexicon: &Lexicon) -> Result<Suggestion> {
    let ranking = classify_system_with(statement, corpus, lexicon)?;
    let system_id = ranking
        .iter()
        .map(|(id, _)| id)
        .find(|id| !corpus.theorems_in(id).is_empty())
        .cloned()
        .ok_or_else(|| {
            let top = ranking
                .first()
                .map(|(id, _)| id.clone())
                .unwrap_or_default();
            Error::NoCorpusForSystem(top)
        })?;
    let system = corpus
        .registry()
        .get(&system_id)
        .expect("classified system is registered");

    let prediction = predict_vector_offline(statement, system, corpus)?;
    let explanation = offline_explanation(&prediction.vector, system);
    let similar = similar_theorems(corpus, &prediction.vector);

    Ok(Suggestion {
        system_id,
        vector: prediction.vector,
        explanation,
        similar,
        backend: BackendKind::Offline,
        confidence: prediction.confidence,
    })
}

fn suggest_remote(statement: &str, corpus: &Corpus, config: &BackendConfig) -> Result<Suggestion> {
    let reply = backend::request_suggestion(statement, corpus.registry(), config)?;
    let similar = similar_theorems(corpus, &reply.vector);
    Ok(Suggestion {
        system_id: reply.system_id,
        vector: reply.vector,
        explanation: reply.explanation,
        similar,
        // the backend reports no calibrated signal; a fixed neutral value
        confidence: 0.5,
        backend: BackendKind::Remote,
    })
}

/// Run the full pipeline for one statement with the shipped lexicon.
pub fn suggest(statement: &str, corpus: &Corpus, config: &BackendConfig) -> Result<Suggestion> {
    suggest_with(statement, corpus, config, &Lexicon::builtin())
}

/// [`suggest`] with a caller-supplied lexicon (offline and auto-fallback
/// paths only; the remote backend does not use the lexicon).
pub fn suggest_with(
    statement: &str,
    corpus: &Corpus,
    config: &BackendConfig,
    lexicon: &Lexicon,
) -> Result<Suggestion> {
    if statement.trim().is_empty() {
        return Err(Error::EmptyStatement);
    }
    match config.mode {
        Mode::Offline => suggest_offline(statement, corpus, lexicon),
        Mode::Remote => suggest_remote(statement, corpus, config),
        Mode::Auto => {
            if config.endpoint.is_some() && config.api_key.is_some() {
                match suggest_remote(statement, corpus, config) {
                    Ok(suggestion) => Ok(suggestion),
                    Err(_) => suggest_offline(statement, corpus, lexicon),
                }
            } else {
                suggest_offline(statement, corpus, lexicon)
            }
        }
    }
}
