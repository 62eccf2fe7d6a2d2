//! Keyword lexicon backing offline system classification.
//!
//! The lexicon is an editable JSON document mapping system ids to keyword
//! lists:
//!
//! ```json
//! { "version": 1, "systems": { "peano": ["prime", "induction"] } }
//! ```
//!
//! Words are matched case-insensitively against statement tokens. A default
//! lexicon covering the built-in systems ships embedded in the library.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::error::{Error, Result};

/// System-keyed keyword sets, lowercased on load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    systems: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Deserialize)]
struct LexiconDoc {
    version: u32,
    systems: BTreeMap<String, Vec<String>>,
}

impl Lexicon {
    /// The shipped lexicon for the built-in systems.
    pub fn builtin() -> Lexicon {
        Lexicon::from_json(include_str!("../../data/lexicon.json"))
            .expect("embedded lexicon document")
    }

    /// Parse a lexicon document.
    pub fn from_json(text: &str) -> Result<Lexicon> {
        let doc: LexiconDoc = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("lexicon document: {e}")))?;
        if doc.version != 1 {
            return Err(Error::Parse(format!(
                "lexicon document: unsupported version {}",
                doc.version
            )));
        }
        let systems = doc
            .systems
            .into_iter()
            .map(|(id, words)| {
                let set = words.into_iter().map(|w| w.to_lowercase()).collect();
                (id, set)
            })
            .collect();
        Ok(Lexicon { systems })
    }

    /// Keywords for one system; empty when the system has no entry.
    pub fn keywords(&self, system_id: &str) -> Option<&BTreeSet<String>> {
        self.systems.get(system_id)
    }
}
