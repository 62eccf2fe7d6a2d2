//! Theorem records, proof vectors, and the persistent corpus store.
//!
//! A proof vector assigns each axiom of one system a value in `[0, 1]`:
//! binary vectors mark dependence, weighted vectors grade how central an
//! axiom is to the proof. Corpora are persistent values — [`Corpus::add_theorem`]
//! returns a new corpus and never mutates existing records.
//!
//! Corpus files are UTF-8 JSON:
//!
//! ```json
//! {
//!   "version": 1,
//!   "theorems": [
//!     {
//!       "id": "add_comm",
//!       "name": "a + b = b + a",
//!       "statement": "For all natural numbers a and b, a + b = b + a.",
//!       "system": "peano",
//!       "kind": "binary",
//!       "vector": [1, 1, 0, 0, 1]
//!     }
//!   ]
//! }
//! ```
//!
//! Vector order follows the system's axiom order; binary vectors are written
//! with integer entries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::{builtin_registry, CompositeSystem, Registry};

/// How a proof vector's entries are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    /// Entries are 0 or 1: the proof does or does not use the axiom.
    Binary,
    /// Entries range over `[0, 1]`: graded dependence.
    Weighted,
}

impl fmt::Display for VectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VectorKind::Binary => "binary",
            VectorKind::Weighted => "weighted",
        })
    }
}

impl FromStr for VectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<VectorKind> {
        match s {
            "binary" => Ok(VectorKind::Binary),
            "weighted" => Ok(VectorKind::Weighted),
            other => Err(Error::Parse(format!(
                "unknown vector kind '{other}' (expected 'binary' or 'weighted')"
            ))),
        }
    }
}

/// A proof's dependence profile over one axiom system.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofVector {
    system: String,
    kind: VectorKind,
    values: Vec<f64>,
}

impl ProofVector {
    /// Validate and build a vector of the given kind.
    ///
    /// Binary entries must be exactly 0 or 1; weighted entries must be
    /// finite and within `[0, 1]`.
    pub fn new(
        system: impl Into<String>,
        kind: VectorKind,
        values: Vec<f64>,
    ) -> Result<ProofVector> {
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::OutOfRangeWeight {
                    index,
                    value,
                    reason: "entries must be finite",
                });
            }
            let ok = match kind {
                VectorKind::Binary => value == 0.0 || value == 1.0,
                VectorKind::Weighted => (0.0..=1.0).contains(&value),
            };
            if !ok {
                return Err(Error::OutOfRangeWeight {
                    index,
                    value,
                    reason: match kind {
                        VectorKind::Binary => "binary entries must be 0 or 1",
                        VectorKind::Weighted => "weighted entries must lie in [0, 1]",
                    },
                });
            }
        }
        Ok(ProofVector {
            system: system.into(),
            kind,
            values,
        })
    }

    /// A binary vector from 0/1 bits.
    pub fn binary(system: impl Into<String>, bits: &[u8]) -> Result<ProofVector> {
        ProofVector::new(
            system,
            VectorKind::Binary,
            bits.iter().map(|&b| f64::from(b)).collect(),
        )
    }

    /// A weighted vector from `[0, 1]` entries.
    pub fn weighted(system: impl Into<String>, weights: Vec<f64>) -> Result<ProofVector> {
        ProofVector::new(system, VectorKind::Weighted, weights)
    }

    /// Id of the axiom system this vector is indexed by.
    pub fn system(&self) -> &str {
        &self.system
    }

    pub fn kind(&self) -> VectorKind {
        self.kind
    }

    /// Entries in axiom order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of entries.
    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    /// Indices of the axioms the proof touches (entries > 0).
    pub fn support(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// True when no axiom is touched.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// A theorem record: statement plus proof vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem {
    /// Stable identifier referenced by the CLI and exports.
    pub id: String,
    /// Display name.
    pub name: String,
    /// Natural-language statement.
    pub statement: String,
    /// Proof vector over the theorem's axiom system.
    pub vector: ProofVector,
}

impl Theorem {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        statement: impl Into<String>,
        vector: ProofVector,
    ) -> Theorem {
        Theorem {
            id: id.into(),
            name: name.into(),
            statement: statement.into(),
            vector,
        }
    }

    /// Id of the axiom system the proof vector is indexed by.
    pub fn system(&self) -> &str {
        self.vector.system()
    }
}

/// An immutable collection of theorems validated against a registry.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    registry: Registry,
    theorems: Vec<Theorem>,
}

impl Corpus {
    /// An empty corpus over the given systems.
    pub fn new(registry: Registry) -> Corpus {
        Corpus {
            registry,
            theorems: Vec::new(),
        }
    }

    /// Build a corpus by adding `theorems` in order, validating each.
    pub fn with_theorems(registry: Registry, theorems: Vec<Theorem>) -> Result<Corpus> {
        let mut corpus = Corpus::new(registry);
        for theorem in theorems {
            corpus.push_validated(theorem)?;
        }
        Ok(corpus)
    }

    /// A new corpus with `theorem` appended; `self` is untouched.
    pub fn add_theorem(&self, theorem: Theorem) -> Result<Corpus> {
        let mut next = self.clone();
        next.push_validated(theorem)?;
        Ok(next)
    }

    fn push_validated(&mut self, theorem: Theorem) -> Result<()> {
        if self.get(&theorem.id).is_some() {
            return Err(Error::DuplicateId(theorem.id));
        }
        let system = self
            .registry
            .get(theorem.system())
            .ok_or_else(|| Error::UnknownSystem(theorem.system().to_string()))?;
        if theorem.vector.dimension() != system.dimension() {
            return Err(Error::DimensionMismatch {
                system: system.id.clone(),
                expected: system.dimension(),
                actual: theorem.vector.dimension(),
            });
        }
        self.theorems.push(theorem);
        Ok(())
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    /// All theorems in insertion order.
    pub fn theorems(&self) -> &[Theorem] {
        &self.theorems
    }

    pub fn get(&self, id: &str) -> Option<&Theorem> {
        self.theorems.iter().find(|t| t.id == id)
    }

    /// Theorems of one system, in insertion order.
    pub fn theorems_in(&self, system_id: &str) -> Vec<&Theorem> {
        self.theorems
            .iter()
            .filter(|t| t.system() == system_id)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.theorems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theorems.is_empty()
    }
}

/// The nine-theorem seed corpus shipped with the library: three theorems
/// each over hilbert, peano, and zfc.
pub fn seed_corpus() -> Corpus {
    let seeds: [(&str, &str, &str, &str, &[u8]); 9] = [
        (
            "pythagorean",
            "Pythagorean Theorem",
            "In a right triangle, the square of the hypotenuse equals the sum of the squares of the other two sides.",
            "hilbert",
            &[1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1],
        ),
        (
            "triangle_angle_sum",
            "Sum of Angles in Triangle",
            "The sum of the interior angles of a triangle is 180 degrees.",
            "hilbert",
            &[1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1],
        ),
        (
            "euler_line",
            "Euler Line",
            "The orthocenter, centroid, and circumcenter of a triangle are collinear.",
            "hilbert",
            &[1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1],
        ),
        (
            "add_zero_identity",
            "a + 0 = a",
            "For every natural number a, a + 0 = a.",
            "peano",
            &[1, 0, 0, 0, 1],
        ),
        (
            "add_comm",
            "a + b = b + a",
            "For all natural numbers a and b, a + b = b + a.",
            "peano",
            &[1, 1, 0, 0, 1],
        ),
        (
            "infinitude_of_primes",
            "Infinitely Many Primes",
            "There are infinitely many primes.",
            "peano",
            &[1, 1, 0, 0, 1],
        ),
        (
            "singleton_exists",
            "Singleton Set Exists",
            "For any set x, the singleton {x} exists.",
            "zfc",
            &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        ),
        (
            "union_exists",
            "Union of Two Sets Exists",
            "For any two sets, their union exists.",
            "zfc",
            &[1, 0, 1, 1, 0, 0, 0, 0, 0, 0],
        ),
        (
            "power_set_exists",
            "Power Set Exists",
            "The power set of any set exists.",
            "zfc",
            &[1, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        ),
    ];

    let theorems = seeds
        .iter()
        .map(|&(id, name, statement, system, bits)| {
            Theorem::new(
                id,
                name,
                statement,
                ProofVector::binary(system, bits).expect("seed vector"),
            )
        })
        .collect();
    Corpus::with_theorems(builtin_registry(), theorems).expect("seed corpus")
}

/// Concatenate two vectors into a composite coordinate space.
///
/// The composite's parts must be exactly `[u.system, v.system]` in that
/// order, with matching dimensions. The result is binary only when both
/// inputs are binary.
pub fn concat_vectors(
    u: &ProofVector,
    v: &ProofVector,
    composite: &CompositeSystem,
) -> Result<ProofVector> {
    let parts = composite.parts();
    if parts.len() != 2 || parts[0] != u.system() || parts[1] != v.system() {
        return Err(Error::CompositionMismatch(format!(
            "composite '{}' does not concatenate '{}' then '{}'",
            composite.id(),
            u.system(),
            v.system()
        )));
    }
    let u_dim = composite
        .offset_of(&parts[1])
        .expect("second part has an offset");
    let v_dim = composite.dimension() - u_dim;
    if u.dimension() != u_dim {
        return Err(Error::DimensionMismatch {
            system: parts[0].clone(),
            expected: u_dim,
            actual: u.dimension(),
        });
    }
    if v.dimension() != v_dim {
        return Err(Error::DimensionMismatch {
            system: parts[1].clone(),
            expected: v_dim,
            actual: v.dimension(),
        });
    }
    let kind = if u.kind() == VectorKind::Binary && v.kind() == VectorKind::Binary {
        VectorKind::Binary
    } else {
        VectorKind::Weighted
    };
    let mut values = Vec::with_capacity(composite.dimension());
    values.extend_from_slice(u.values());
    values.extend_from_slice(v.values());
    ProofVector::new(composite.id(), kind, values)
}

#[derive(Serialize, Deserialize)]
struct CorpusDoc {
    version: u32,
    theorems: Vec<TheoremDoc>,
}

#[derive(Serialize, Deserialize)]
struct TheoremDoc {
    id: String,
    name: String,
    statement: String,
    system: String,
    kind: String,
    vector: Vec<serde_json::Number>,
}

/// Parse a corpus document and validate every record against `registry`.
pub fn import_corpus(document_text: &str, registry: &Registry) -> Result<Corpus> {
    let doc: CorpusDoc = serde_json::from_str(document_text)
        .map_err(|e| Error::Parse(format!("corpus document: {e}")))?;
    if doc.version != 1 {
        return Err(Error::Parse(format!(
            "corpus document: unsupported version {}",
            doc.version
        )));
    }
    let mut theorems = Vec::with_capacity(doc.theorems.len());
    for record in doc.theorems {
        if record.id.is_empty() {
            return Err(Error::InvalidRecord("theorem record with empty id".into()));
        }
        let kind = VectorKind::from_str(&record.kind).map_err(|_| {
            Error::InvalidRecord(format!(
                "theorem '{}': unknown kind '{}'",
                record.id, record.kind
            ))
        })?;
        let values = record
            .vector
            .iter()
            .map(|n| n.as_f64().expect("JSON numbers are finite"))
            .collect();
        let vector = ProofVector::new(record.system, kind, values)?;
        theorems.push(Theorem::new(
            record.id,
            record.name,
            record.statement,
            vector,
        ));
    }
    Corpus::with_theorems(registry.clone(), theorems)
}

/// Serialize a corpus to the document format (pretty JSON).
///
/// Binary vectors are written with integer entries; `import_corpus` of the
/// result reproduces the corpus field-for-field.
pub fn export_corpus(corpus: &Corpus) -> String {
    let doc = CorpusDoc {
        version: 1,
        theorems: corpus
            .theorems()
            .iter()
            .map(|t| TheoremDoc {
                id: t.id.clone(),
                name: t.name.clone(),
                statement: t.statement.clone(),
                system: t.system().to_string(),
                kind: t.vector.kind().to_string(),
                vector: t
                    .vector
                    .values()
                    .iter()
                    .map(|&v| match t.vector.kind() {
                        VectorKind::Binary => serde_json::Number::from(v as u64),
                        VectorKind::Weighted => {
                            serde_json::Number::from_f64(v).expect("weights are finite")
                        }
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("corpus document serialization")
}
