//! Remote language-model backend: prompt construction, the HTTP call, and
//! strict reply validation.
//!
//! The backend is provider-agnostic: one POST to the configured endpoint
//! with a JSON body `{"model": …, "prompt": …}` and a bearer token. The
//! model must answer in a fixed three-line format:
//!
//! ```text
//! system: <system id>
//! vector: <v1>,<v2>,…
//! explanation: <one to three sentences>
//! ```
//!
//! Replies are validated against the registry: an unknown system id, a
//! vector of the wrong length, or non-numeric entries trigger one retry
//! before the error is surfaced. Finite entries outside `[0, 1]` are not
//! errors — they are clipped into range.

use crate::corpus::{ProofVector, VectorKind};
use crate::error::{Error, Result};
use crate::registry::Registry;

use super::BackendConfig;

/// A validated backend answer.
#[derive(Debug, Clone, PartialEq)]
pub(super) struct BackendReply {
    pub system_id: String,
    pub vector: ProofVector,
    pub explanation: String,
}

/// The instruction block sent to the model, listing every registered
/// system so the reply can name one.
pub(super) fn build_prompt(statement: &str, registry: &Registry) -> String {
    let mut prompt = String::from(
        "You map mathematical theorem statements onto indexed axiom systems.\n\
         Pick the single best-matching system below and estimate, per axiom,\n\
         how strongly a standard proof depends on it (0 = unused, 1 = essential).\n\n\
         Axiom systems:\n",
    );
    for system in registry.systems() {
        let keys: Vec<&str> = system.axioms().iter().map(|a| a.key.as_str()).collect();
        prompt.push_str(&format!(
            "- {} ({} axioms, in order: {})\n",
            system.id,
            system.dimension(),
            keys.join(", ")
        ));
    }
    prompt.push_str(&format!(
        "\nStatement: {statement}\n\n\
         Reply with exactly three lines and nothing else:\n\
         system: <system id>\n\
         vector: <comma-separated numbers in [0,1], one per axiom, in axiom order>\n\
         explanation: <one to three sentences naming the axiom groups that drive the prediction>\n"
    ));
    prompt
}

/// Parse and validate one reply against the registry.
pub(super) fn parse_reply(text: &str, registry: &Registry) -> Result<BackendReply> {
    let mut lines = text.trim().lines();

    let system_line = lines
        .next()
        .ok_or_else(|| Error::MalformedBackendReply("reply is empty".into()))?;
    let system_id = system_line
        .strip_prefix("system:")
        .ok_or_else(|| {
            Error::MalformedBackendReply(format!(
                "first line must start with 'system:', got '{system_line}'"
            ))
        })?
        .trim();

    let vector_line = lines
        .next()
        .ok_or_else(|| Error::MalformedBackendReply("reply has no vector line".into()))?;
    let vector_body = vector_line.strip_prefix("vector:").ok_or_else(|| {
        Error::MalformedBackendReply(format!(
            "second line must start with 'vector:', got '{vector_line}'"
        ))
    })?;

    let explanation_line = lines
        .next()
        .ok_or_else(|| Error::MalformedBackendReply("reply has no explanation line".into()))?;
    let mut explanation = explanation_line
        .strip_prefix("explanation:")
        .ok_or_else(|| {
            Error::MalformedBackendReply(format!(
                "third line must start with 'explanation:', got '{explanation_line}'"
            ))
        })?
        .trim()
        .to_string();
    for extra in lines {
        explanation.push('\n');
        explanation.push_str(extra.trim_end());
    }

    let system = registry
        .get(system_id)
        .ok_or_else(|| Error::UnknownSystemInReply(system_id.to_string()))?;

    let mut values = Vec::new();
    for field in vector_body.split(',') {
        let value: f64 = field.trim().parse().map_err(|_| {
            Error::MalformedBackendReply(format!("vector entry '{}' is not a number", field.trim()))
        })?;
        if !value.is_finite() {
            return Err(Error::MalformedBackendReply(format!(
                "vector entry '{}' is not finite",
                field.trim()
            )));
        }
        values.push(value.clamp(0.0, 1.0));
    }
    if values.len() != system.dimension() {
        return Err(Error::MalformedBackendReply(format!(
            "vector has {} entries but system '{}' has dimension {}",
            values.len(),
            system.id,
            system.dimension()
        )));
    }

    let kind = if values.iter().all(|&v| v == 0.0 || v == 1.0) {
        VectorKind::Binary
    } else {
        VectorKind::Weighted
    };
    let vector = ProofVector::new(&system.id, kind, values).expect("entries clipped to [0, 1]");

    Ok(BackendReply {
        system_id: system.id.clone(),
        vector,
        explanation,
    })
}

// Some providers wrap the completion in JSON; accept `{"text": …}`,
// `{"content": …}`, a bare JSON string, or the raw body.
fn unwrap_body(body: String) -> String {
    if let Ok(value) = serde_json::from_str::<serde_json::Value>(&body) {
        for key in ["text", "content"] {
            if let Some(text) = value.get(key).and_then(|v| v.as_str()) {
                return text.to_string();
            }
        }
        if let Some(text) = value.as_str() {
            return text.to_string();
        }
    }
    body
}

fn post(
    client: &reqwest::blocking::Client,
    endpoint: &str,
    api_key: &str,
    model: Option<&str>,
    prompt: &str,
) -> Result<String> {
    let mut body = serde_json::json!({ "prompt": prompt });
    if let Some(model) = model {
        body["model"] = model.into();
    }
    let response = client
        .post(endpoint)
        .bearer_auth(api_key)
        .json(&body)
        .send()
        .map_err(|e| Error::BackendUnavailable(e.to_string()))?;
    let status = response.status();
    if !status.is_success() {
        return Err(Error::BackendUnavailable(format!(
            "endpoint returned HTTP {status}"
        )));
    }
    let text = response
        .text()
        .map_err(|e| Error::BackendUnavailable(e.to_string()))?;
    Ok(unwrap_body(text))
}

/// Ask the backend for a prediction; retry once if the reply fails
/// validation, then surface the second failure.
pub(super) fn request_suggestion(
    statement: &str,
    registry: &Registry,
    config: &BackendConfig,
) -> Result<BackendReply> {
    let endpoint = config
        .endpoint
        .as_deref()
        .ok_or_else(|| Error::BackendUnavailable("no endpoint configured".into()))?;
    let api_key = config
        .api_key
        .as_deref()
        .ok_or_else(|| Error::BackendUnavailable("no API key configured".into()))?;

    let client = reqwest::blocking::Client::builder()
        .timeout(config.timeout)
        .build()
        .map_err(|e| Error::BackendUnavailable(e.to_string()))?;
    let prompt = build_prompt(statement, registry);

    let mut last_error = None;
    for _attempt in 0..2 {
        let body = post(&client, endpoint, api_key, config.model.as_deref(), &prompt)?;
        match parse_reply(&body, registry) {
            Ok(reply) => return Ok(reply),
            Err(e) => last_error = Some(e),
        }
    }
    Err(last_error.expect("two parse attempts"))
}
