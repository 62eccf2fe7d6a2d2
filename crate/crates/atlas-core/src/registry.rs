//! Axiom systems as ordered, indexed coordinate bases.
//!
//! A system's axiom order *is* its coordinate order: changing the order of a
//! published system would silently corrupt every stored vector, so systems
//! are immutable after load and any extension ships as a new system id.
//!
//! Definition files are UTF-8 JSON:
//!
//! ```json
//! {
//!   "id": "group",
//!   "name": "Group Theory Axioms",
//!   "axioms": [
//!     { "key": "G1", "name": "Closure", "group": "...", "description": "..." }
//!   ]
//! }
//! ```
//!
//! The array order is the coordinate order; `group` and `description` are
//! optional. The five built-in systems (`hilbert`, `peano`, `zfc`,
//! `vector_space`, `group`) ship embedded in the library and can be dumped
//! back out with [`dump_system`]. The two systems whose sizes are fixed only
//! by convention (`vector_space` at 8 axioms, `group` at 4) document their
//! canonical orderings in the shipped definition files.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One axiom: a named coordinate of its system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    /// 0-based position in the owning system.
    pub index: usize,
    /// Short stable identifier, unique within the system (e.g. "I1").
    pub key: String,
    /// Human-readable title.
    pub name: String,
    /// Optional category label (e.g. "incidence", "order").
    pub group: Option<String>,
    /// Optional free-text description.
    pub description: Option<String>,
}

/// An ordered, indexed basis of axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSystem {
    /// Stable lowercase identifier (e.g. "peano").
    pub id: String,
    /// Display name.
    pub name: String,
    axioms: Vec<Axiom>,
}

impl AxiomSystem {
    /// Number of axioms, i.e. the vector dimension.
    pub fn dimension(&self) -> usize {
        self.axioms.len()
    }

    /// All axioms in coordinate order.
    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    /// Axiom at coordinate `index`.
    pub fn axiom_at(&self, index: usize) -> Option<&Axiom> {
        self.axioms.get(index)
    }

    /// Axiom with the given key.
    pub fn axiom_by_key(&self, key: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.key == key)
    }
}

// File-format documents. Kept separate from the domain types so the schema
// stays fixed: no index field (array order is the index), optional group and
// description.
#[derive(Serialize, Deserialize)]
struct SystemDoc {
    id: String,
    name: String,
    axioms: Vec<AxiomDoc>,
}

#[derive(Serialize, Deserialize)]
struct AxiomDoc {
    key: String,
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<String>,
}

/// Parse an axiom-system definition document into an indexed system.
pub fn load_system(definition_text: &str) -> Result<AxiomSystem> {
    let doc: SystemDoc = serde_json::from_str(definition_text)
        .map_err(|e| Error::Parse(format!("axiom system document: {e}")))?;
    if doc.id.is_empty() {
        return Err(Error::Parse("axiom system document: 'id' is empty".into()));
    }
    if doc.name.is_empty() {
        return Err(Error::Parse(format!(
            "axiom system '{}': 'name' is empty",
            doc.id
        )));
    }
    if doc.axioms.is_empty() {
        return Err(Error::EmptySystem(doc.id));
    }
    let mut seen = HashSet::new();
    let mut axioms = Vec::with_capacity(doc.axioms.len());
    for (index, a) in doc.axioms.into_iter().enumerate() {
        if a.key.is_empty() {
            return Err(Error::Parse(format!(
                "axiom system '{}': axiom at position {index} has an empty key",
                doc.id
            )));
        }
        if !seen.insert(a.key.clone()) {
            return Err(Error::DuplicateKey {
                system: doc.id,
                key: a.key,
            });
        }
        axioms.push(Axiom {
            index,
            key: a.key,
            name: a.name,
            group: a.group,
            description: a.description,
        });
    }
    Ok(AxiomSystem {
        id: doc.id,
        name: doc.name,
        axioms,
    })
}

/// Serialize a system back to the definition file format (pretty JSON).
///
/// `load_system(dump_system(s)) == s` for every valid system.
pub fn dump_system(system: &AxiomSystem) -> String {
    let doc = SystemDoc {
        id: system.id.clone(),
        name: system.name.clone(),
        axioms: system
            .axioms
            .iter()
            .map(|a| AxiomDoc {
                key: a.key.clone(),
                name: a.name.clone(),
                group: a.group.clone(),
                description: a.description.clone(),
            })
            .collect(),
    };
    // Serialization of these plain structs cannot fail.
    serde_json::to_string_pretty(&doc).expect("system document serialization")
}

/// An immutable collection of axiom systems, indexed by id.
#[derive(Debug, Clone)]
pub struct Registry {
    systems: Vec<AxiomSystem>,
    by_id: HashMap<String, usize>,
}

impl PartialEq for Registry {
    fn eq(&self, other: &Registry) -> bool {
        self.systems == other.systems
    }
}

impl Eq for Registry {}

impl Registry {
    /// Build a registry from systems, rejecting duplicate ids.
    pub fn from_systems(systems: Vec<AxiomSystem>) -> Result<Registry> {
        let mut by_id = HashMap::with_capacity(systems.len());
        for (i, sys) in systems.iter().enumerate() {
            if by_id.insert(sys.id.clone(), i).is_some() {
                return Err(Error::DuplicateSystem(sys.id.clone()));
            }
        }
        Ok(Registry { systems, by_id })
    }

    /// A new registry with `system` appended.
    pub fn with_system(&self, system: AxiomSystem) -> Result<Registry> {
        let mut systems = self.systems.clone();
        systems.push(system);
        Registry::from_systems(systems)
    }

    /// Look up a system by id.
    pub fn get(&self, id: &str) -> Option<&AxiomSystem> {
        self.by_id.get(id).map(|&i| &self.systems[i])
    }

    /// All systems in registration order.
    pub fn systems(&self) -> &[AxiomSystem] {
        &self.systems
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }
}

const BUILTIN_DEFINITIONS: [&str; 5] = [
    include_str!("../data/hilbert.json"),
    include_str!("../data/peano.json"),
    include_str!("../data/zfc.json"),
    include_str!("../data/vector_space.json"),
    include_str!("../data/group.json"),
];

/// The five built-in systems: hilbert (12), peano (5), zfc (10),
/// vector_space (8), group (4).
pub fn builtin_registry() -> Registry {
    let systems = BUILTIN_DEFINITIONS
        .iter()
        .map(|text| load_system(text).expect("embedded system definition"))
        .collect();
    Registry::from_systems(systems).expect("embedded system ids are distinct")
}

/// The embedded definition document for a built-in system id, verbatim.
pub fn builtin_definition(id: &str) -> Option<&'static str> {
    BUILTIN_DEFINITIONS
        .iter()
        .find(|text| load_system(text).map(|s| s.id == id).unwrap_or(false))
        .copied()
}

/// Concatenation of systems into one combined coordinate space.
///
/// Part order is coordinate order: the composite's first `parts[0].dimension`
/// coordinates belong to the first part, and so on. The composite id joins
/// the part ids with `+` (e.g. "peano+zfc").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeSystem {
    id: String,
    parts: Vec<String>,
    dimension: usize,
    offsets: BTreeMap<String, usize>,
}

impl CompositeSystem {
    /// Derived identifier: part ids joined with `+`.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Part system ids in coordinate order.
    pub fn parts(&self) -> &[String] {
        &self.parts
    }

    /// Total dimension (sum of part dimensions).
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Starting coordinate of each part (prefix sums of part dimensions).
    pub fn offsets(&self) -> &BTreeMap<String, usize> {
        &self.offsets
    }

    /// Starting coordinate of one part.
    pub fn offset_of(&self, part_id: &str) -> Option<usize> {
        self.offsets.get(part_id).copied()
    }
}

/// Concatenate systems into a composite coordinate space.
pub fn compose(systems: &[&AxiomSystem]) -> Result<CompositeSystem> {
    if systems.is_empty() {
        return Err(Error::EmptyComposition);
    }
    let mut parts = Vec::with_capacity(systems.len());
    let mut offsets = BTreeMap::new();
    let mut offset = 0;
    for sys in systems {
        if offsets.insert(sys.id.clone(), offset).is_some() {
            return Err(Error::DuplicatePart(sys.id.clone()));
        }
        parts.push(sys.id.clone());
        offset += sys.dimension();
    }
    Ok(CompositeSystem {
        id: parts.join("+"),
        parts,
        dimension: offset,
        offsets,
    })
}
