//! Command-line surface over the proof-vector library: corpus management,
//! similarity queries, clustering, rendering, and the suggestion pipeline.
//!
//! Exit codes: 0 on success, 1 on a domain error (printed to stderr as a
//! single `E_CODE: message` line), 2 on a usage error.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand};

use atlas_core::analysis::{
    cluster, common_core, cut, footprint, nearest, nearest_excluding, outlier_scores,
};
use atlas_core::assistant::{suggest, BackendConfig, Mode};
use atlas_core::corpus::{export_corpus, import_corpus, seed_corpus};
use atlas_core::metrics::similarity_matrix;
use atlas_core::registry::{builtin_registry, dump_system, load_system};
use atlas_core::viz::{
    export_matrix_csv, render_dendrogram_text, render_similarity_heatmap, render_vector_heatmap,
    HeatmapOptions,
};
use atlas_core::{Corpus, Error, Linkage, Metric, ProofVector, Registry, Theorem, VectorKind};

#[derive(Parser)]
#[command(
    name = "atlas",
    version,
    about = "Theorems as proof vectors: similarity, clustering, heatmaps, suggestions"
)]
struct Cli {
    /// Corpus file used by query commands
    #[arg(
        long,
        global = true,
        default_value = "corpus.json",
        value_name = "PATH"
    )]
    corpus: PathBuf,

    /// Extra axiom-system definition file (repeatable)
    #[arg(long = "system-file", global = true, value_name = "PATH")]
    system_file: Vec<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect registered axiom systems
    Systems {
        #[command(subcommand)]
        action: SystemsAction,
    },
    /// Write the bundled seed corpus to a file
    Seed {
        /// Destination path
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Add a theorem to a corpus file
    Add {
        /// Corpus file to update in place
        corpus_file: PathBuf,
        /// New theorem id
        #[arg(long)]
        id: String,
        /// Display name
        #[arg(long)]
        name: String,
        /// Natural-language statement
        #[arg(long)]
        statement: String,
        /// Axiom system id
        #[arg(long)]
        system: String,
        /// Comma-separated vector entries, e.g. "1,0,1,1,0"
        #[arg(long)]
        vector: String,
    },
    /// Validate a corpus file and install it as the active corpus
    Import {
        /// Corpus file to validate and copy
        path: PathBuf,
    },
    /// Print the active corpus, or save it to a file
    Export {
        /// Destination path (stdout when omitted)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Similarity (or distance, for euclidean) between two stored theorems
    Sim {
        id_a: String,
        id_b: String,
        #[arg(long, default_value = "cosine")]
        metric: Metric,
    },
    /// Pairwise matrix over every theorem of one system
    Matrix {
        /// Axiom system id
        #[arg(long)]
        system: String,
        #[arg(long, default_value = "cosine")]
        metric: Metric,
        /// Write CSV to a file instead of stdout
        #[arg(long, value_name = "PATH", conflicts_with = "svg")]
        csv: Option<PathBuf>,
        /// Write an SVG heatmap instead of CSV
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Agglomerative clustering of one system's theorems
    Cluster {
        /// Axiom system id
        #[arg(long)]
        system: String,
        #[arg(long, default_value = "cosine")]
        metric: Metric,
        #[arg(long, default_value = "average")]
        linkage: Linkage,
        /// Cut the dendrogram at this height and print families
        #[arg(long, value_name = "HEIGHT")]
        cut: Option<f64>,
    },
    /// SVG heatmap of one system's proof vectors (rows: theorems, cols: axioms)
    Heatmap {
        /// Axiom system id
        #[arg(long)]
        system: String,
        /// Destination path
        #[arg(long, value_name = "PATH")]
        svg: PathBuf,
    },
    /// Theorems closest to a stored theorem or an ad-hoc vector
    Nearest {
        /// Stored theorem id (ranked against the rest of its system)
        #[arg(required_unless_present = "vector", conflicts_with = "vector")]
        id: Option<String>,
        /// Comma-separated query vector (requires --system)
        #[arg(long, requires = "system")]
        vector: Option<String>,
        /// Axiom system of the ad-hoc vector
        #[arg(long)]
        system: Option<String>,
        /// Number of neighbours
        #[arg(short, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value = "cosine")]
        metric: Metric,
    },
    /// Axioms used by every listed theorem (entrywise AND of supports)
    Core {
        #[arg(required = true)]
        ids: Vec<String>,
    },
    /// Axioms used by any listed theorem (entrywise OR of supports)
    Footprint {
        #[arg(required = true)]
        ids: Vec<String>,
    },
    /// Isolation scores for one system's theorems, most isolated first
    Outliers {
        /// Axiom system id
        #[arg(long)]
        system: String,
        /// Neighbours per score
        #[arg(short, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "cosine")]
        metric: Metric,
    },
    /// Suggest an axiom system and proof vector for a statement
    Suggest {
        statement: String,
        /// remote, offline, or auto
        #[arg(long, default_value = "auto")]
        mode: Mode,
    },
}

#[derive(Subcommand)]
enum SystemsAction {
    /// One line per registered system
    List,
    /// Axioms of one system
    Show { id: String },
    /// Canonical JSON definition of one system
    Dump { id: String },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("{}", error_line(&err));
        std::process::exit(1);
    }
}

fn error_line(err: &anyhow::Error) -> String {
    if let Some(core) = err.downcast_ref::<Error>() {
        format!("{}: {core}", core.code())
    } else if err.downcast_ref::<std::io::Error>().is_some() {
        format!("E_IO: {err:#}")
    } else {
        format!("E_CLI: {err:#}")
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let registry = load_registry(&cli.system_file)?;
    match cli.command {
        Command::Systems { action } => run_systems(action, &registry),
        Command::Seed { out } => {
            let corpus = seed_corpus();
            write_atomic(&out, &export_corpus(&corpus))?;
            println!("wrote {} ({} theorems)", out.display(), corpus.len());
            Ok(())
        }
        Command::Add {
            corpus_file,
            id,
            name,
            statement,
            system,
            vector,
        } => {
            let corpus = read_corpus(&corpus_file, &registry)?;
            let values = parse_vector_values(&vector)?;
            let proof_vector = ProofVector::new(system, infer_kind(&values), values)?;
            let corpus = corpus.add_theorem(Theorem::new(&id, name, statement, proof_vector))?;
            write_atomic(&corpus_file, &export_corpus(&corpus))?;
            println!(
                "added '{id}' to {} ({} theorems)",
                corpus_file.display(),
                corpus.len()
            );
            Ok(())
        }
        Command::Import { path } => {
            let corpus = read_corpus(&path, &registry)?;
            write_atomic(&cli.corpus, &export_corpus(&corpus))?;
            println!(
                "imported {} theorems into {}",
                corpus.len(),
                cli.corpus.display()
            );
            Ok(())
        }
        Command::Export { out } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let text = export_corpus(&corpus);
            match out {
                Some(path) => {
                    write_atomic(&path, &text)?;
                    println!("wrote {} ({} theorems)", path.display(), corpus.len());
                }
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Sim { id_a, id_b, metric } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let u = get_theorem(&corpus, &id_a)?;
            let v = get_theorem(&corpus, &id_b)?;
            println!("{:.6}", metric.value(&u.vector, &v.vector)?);
            Ok(())
        }
        Command::Matrix {
            system,
            metric,
            csv,
            svg,
        } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let theorems = system_theorems(&corpus, &registry, &system)?;
            let matrix = similarity_matrix(&theorems, metric)?;
            if let Some(path) = svg {
                let image = render_similarity_heatmap(&matrix, &HeatmapOptions::default());
                write_atomic(&path, &image)?;
                println!("wrote {}", path.display());
            } else if let Some(path) = csv {
                write_atomic(&path, &export_matrix_csv(&matrix))?;
                println!("wrote {}", path.display());
            } else {
                print!("{}", export_matrix_csv(&matrix));
            }
            Ok(())
        }
        Command::Cluster {
            system,
            metric,
            linkage,
            cut: threshold,
        } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let theorems = system_theorems(&corpus, &registry, &system)?;
            let dendrogram = cluster(&theorems, metric, linkage)?;
            match threshold {
                Some(height) => {
                    let partition = cut(&dendrogram, height);
                    for (i, family) in partition.families().iter().enumerate() {
                        println!("family {i}: {}", family.join(", "));
                    }
                }
                None => print!("{}", render_dendrogram_text(&dendrogram)),
            }
            Ok(())
        }
        Command::Heatmap { system, svg } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let theorems = system_theorems(&corpus, &registry, &system)?;
            let definition = registry.get(&system).expect("validated above");
            let image = render_vector_heatmap(&theorems, definition, &HeatmapOptions::default())?;
            write_atomic(&svg, &image)?;
            println!("wrote {}", svg.display());
            Ok(())
        }
        Command::Nearest {
            id,
            vector,
            system,
            k,
            metric,
        } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let ranked = match (id, vector) {
                (Some(id), None) => {
                    let theorem = get_theorem(&corpus, &id)?;
                    nearest_excluding(&corpus, &theorem.vector, metric, k, Some(&id))?
                }
                (None, Some(text)) => {
                    let system = system.expect("clap enforces --system with --vector");
                    let values = parse_vector_values(&text)?;
                    let query = ProofVector::new(system, infer_kind(&values), values)?;
                    nearest(&corpus, &query, metric, k)?
                }
                _ => unreachable!("clap enforces exactly one query form"),
            };
            for (id, value) in ranked {
                println!("{id} {value:.6}");
            }
            Ok(())
        }
        Command::Core { ids } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let theorems = collect_theorems(&corpus, &ids)?;
            println!("{}", vector_text(&common_core(&theorems)?));
            Ok(())
        }
        Command::Footprint { ids } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let theorems = collect_theorems(&corpus, &ids)?;
            println!("{}", vector_text(&footprint(&theorems)?));
            Ok(())
        }
        Command::Outliers { system, k, metric } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let theorems = system_theorems(&corpus, &registry, &system)?;
            for (id, score) in outlier_scores(&theorems, metric, k)? {
                println!("{id} {score:.6}");
            }
            Ok(())
        }
        Command::Suggest { statement, mode } => {
            let corpus = read_corpus(&cli.corpus, &registry)?;
            let config = BackendConfig::from_env(mode);
            let suggestion = suggest(&statement, &corpus, &config)?;
            println!("system: {}", suggestion.system_id);
            println!("vector: {}", vector_text(&suggestion.vector));
            println!("explanation: {}", suggestion.explanation);
            let similar = if suggestion.similar.is_empty() {
                "none".to_string()
            } else {
                suggestion
                    .similar
                    .iter()
                    .map(|(id, score)| format!("{id} ({score:.6})"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            println!("similar: {similar}");
            println!("backend: {}", suggestion.backend);
            println!("confidence: {:.6}", suggestion.confidence);
            Ok(())
        }
    }
}

fn run_systems(action: SystemsAction, registry: &Registry) -> anyhow::Result<()> {
    match action {
        SystemsAction::List => {
            for system in registry.systems() {
                println!(
                    "{} ({} axioms): {}",
                    system.id,
                    system.dimension(),
                    system.name
                );
            }
        }
        SystemsAction::Show { id } => {
            let system = registry
                .get(&id)
                .ok_or_else(|| Error::UnknownSystem(id.clone()))?;
            println!(
                "{}: {} ({} axioms)",
                system.id,
                system.name,
                system.dimension()
            );
            for axiom in system.axioms() {
                match &axiom.group {
                    Some(group) => {
                        println!(
                            "  {:>2}. {} [{}] {}",
                            axiom.index, axiom.key, group, axiom.name
                        )
                    }
                    None => println!("  {:>2}. {} {}", axiom.index, axiom.key, axiom.name),
                }
                if let Some(description) = &axiom.description {
                    println!("      {description}");
                }
            }
        }
        SystemsAction::Dump { id } => {
            let system = registry
                .get(&id)
                .ok_or_else(|| Error::UnknownSystem(id.clone()))?;
            print!("{}", dump_system(system));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// shared plumbing

fn load_registry(extra: &[PathBuf]) -> anyhow::Result<Registry> {
    let mut registry = builtin_registry();
    for path in extra {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading system definition {}", path.display()))?;
        registry = registry.with_system(load_system(&text)?)?;
    }
    Ok(registry)
}

fn read_corpus(path: &Path, registry: &Registry) -> anyhow::Result<Corpus> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading corpus {}", path.display()))?;
    Ok(import_corpus(&text, registry)?)
}

fn get_theorem<'a>(corpus: &'a Corpus, id: &str) -> Result<&'a Theorem, Error> {
    corpus
        .get(id)
        .ok_or_else(|| Error::UnknownTheorem(id.to_string()))
}

fn collect_theorems<'a>(corpus: &'a Corpus, ids: &[String]) -> Result<Vec<&'a Theorem>, Error> {
    ids.iter().map(|id| get_theorem(corpus, id)).collect()
}

/// All theorems of one system, after confirming the system is registered.
fn system_theorems<'a>(
    corpus: &'a Corpus,
    registry: &Registry,
    system: &str,
) -> Result<Vec<&'a Theorem>, Error> {
    if !registry.contains(system) {
        return Err(Error::UnknownSystem(system.to_string()));
    }
    Ok(corpus.theorems_in(system))
}

fn parse_vector_values(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|field| {
            let field = field.trim();
            field
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("vector entry '{field}' is not a number")))
        })
        .collect()
}

fn infer_kind(values: &[f64]) -> VectorKind {
    if values.iter().all(|&v| v == 0.0 || v == 1.0) {
        VectorKind::Binary
    } else {
        VectorKind::Weighted
    }
}

fn vector_text(vector: &ProofVector) -> String {
    let entries: Vec<String> = match vector.kind() {
        VectorKind::Binary => vector
            .values()
            .iter()
            .map(|&v| {
                if v > 0.0 {
                    "1".to_string()
                } else {
                    "0".to_string()
                }
            })
            .collect(),
        VectorKind::Weighted => vector.values().iter().map(|v| format!("{v:.6}")).collect(),
    };
    entries.join(",")
}

/// Write via a sibling temp file and rename, so readers never see a partial
/// file.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let parent = match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => dir,
        _ => Path::new("."),
    };
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let tmp = parent.join(format!(".{file_name}.tmp{}", std::process::id()));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
