//! End-to-end checks of the shipped guarantees: seed-data fidelity, the two
//! worked suggestion examples, metric values against independent oracles,
//! clustering against a naive reference, the metric-space property suite,
//! support algebra, heatmap structure, serialization round-trips, and remote
//! backend robustness. One test per guarantee; each prints a confirmation
//! line on success.

mod support;

use std::collections::BTreeSet;
use std::time::Duration;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use atlas_core::analysis::{cluster, common_core, footprint};
use atlas_core::assistant::{suggest, BackendConfig, BackendKind, Mode};
use atlas_core::corpus::{export_corpus, import_corpus, seed_corpus};
use atlas_core::metrics::{cosine_similarity, similarity_matrix};
use atlas_core::registry::{builtin_registry, dump_system, load_system};
use atlas_core::viz::{export_matrix_csv, parse_matrix_csv, render_vector_heatmap, HeatmapOptions};
use atlas_core::{Corpus, Error, Linkage, Metric, ProofVector, Theorem, VectorKind};

use support::{
    base_distances, cell_matrix, cosine_oracle, euclidean_oracle, extract_cells, jaccard_oracle,
    merges_as_leaf_sets, reference_cluster, support_set, unreachable_endpoint, StubServer, TOL,
};

// ---------------------------------------------------------------------------
// helpers

fn binary_vector(system: &str, bits: &[u8]) -> ProofVector {
    ProofVector::binary(system, bits).expect("valid binary vector")
}

fn probe(values: Vec<f64>) -> ProofVector {
    let kind = if values.iter().all(|&v| v == 0.0 || v == 1.0) {
        VectorKind::Binary
    } else {
        VectorKind::Weighted
    };
    ProofVector::new("probe", kind, values).expect("valid probe vector")
}

fn hilbert_slice(corpus: &Corpus) -> Vec<&Theorem> {
    corpus.theorems_in("hilbert")
}

fn assert_matches_reference(theorems: &[&Theorem], metric: Metric, linkage: Linkage) {
    let ids: Vec<&str> = theorems.iter().map(|t| t.id.as_str()).collect();
    let base = base_distances(theorems, metric);
    let expected = reference_cluster(&ids, &base, linkage);
    let dendrogram = cluster(theorems, metric, linkage).expect("clustering succeeds");
    let actual = merges_as_leaf_sets(&dendrogram);
    assert_eq!(
        actual, expected,
        "merge sequence diverges from the naive reference \
         (ids {ids:?}, metric {metric}, linkage {linkage})"
    );
}

const ALL_METRICS: [Metric; 3] = [Metric::Cosine, Metric::Euclidean, Metric::Jaccard];
const ALL_LINKAGES: [Linkage; 3] = [Linkage::Single, Linkage::Complete, Linkage::Average];

// ---------------------------------------------------------------------------
// criterion 1 — seed fidelity

#[test]
fn criterion_01_seed_corpus_matches_published_tables() {
    let expected: [(&str, &str, &[u8]); 9] = [
        (
            "pythagorean",
            "hilbert",
            &[1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1],
        ),
        (
            "triangle_angle_sum",
            "hilbert",
            &[1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1],
        ),
        (
            "euler_line",
            "hilbert",
            &[1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1],
        ),
        ("add_zero_identity", "peano", &[1, 0, 0, 0, 1]),
        ("add_comm", "peano", &[1, 1, 0, 0, 1]),
        ("infinitude_of_primes", "peano", &[1, 1, 0, 0, 1]),
        ("singleton_exists", "zfc", &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
        ("union_exists", "zfc", &[1, 0, 1, 1, 0, 0, 0, 0, 0, 0]),
        ("power_set_exists", "zfc", &[1, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
    ];

    let corpus = seed_corpus();
    assert_eq!(corpus.len(), 9);
    for (id, system, bits) in expected {
        let theorem = corpus
            .get(id)
            .unwrap_or_else(|| panic!("seed theorem '{id}'"));
        assert_eq!(theorem.system(), system, "system of '{id}'");
        assert_eq!(theorem.vector.kind(), VectorKind::Binary, "kind of '{id}'");
        let values: Vec<f64> = bits.iter().map(|&b| f64::from(b)).collect();
        assert_eq!(
            theorem.vector.values(),
            values.as_slice(),
            "vector of '{id}'"
        );
    }
    // dimensions come from the registered systems
    for (system, dim) in [("hilbert", 12), ("peano", 5), ("zfc", 10)] {
        let registered = corpus.registry().get(system).expect("registered system");
        assert_eq!(registered.dimension(), dim, "dimension of '{system}'");
    }

    println!("criterion 01 (seed fidelity): pass");
}

// ---------------------------------------------------------------------------
// criteria 2 and 3 — worked suggestion examples, offline, no network

#[test]
fn criterion_02_primes_suggestion_reproduced_offline() {
    let corpus = seed_corpus();
    let suggestion = suggest(
        "There are infinitely many primes.",
        &corpus,
        &BackendConfig::offline(),
    )
    .expect("offline suggestion succeeds");

    assert_eq!(suggestion.system_id, "peano");
    assert_eq!(suggestion.backend, BackendKind::Offline);
    assert_eq!(suggestion.vector.values(), &[1.0, 1.0, 0.0, 0.0, 1.0]);

    println!("criterion 02 (worked example, primes): pass");
}

#[test]
fn criterion_03_triangle_suggestion_reproduced_offline() {
    let corpus = seed_corpus();
    let suggestion = suggest(
        "The sum of the interior angles of a triangle is 180 degrees.",
        &corpus,
        &BackendConfig::offline(),
    )
    .expect("offline suggestion succeeds");

    assert_eq!(suggestion.system_id, "hilbert");
    assert_eq!(suggestion.backend, BackendKind::Offline);
    assert_eq!(
        suggestion.vector.values(),
        &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0]
    );

    println!("criterion 03 (worked example, triangle): pass");
}

// ---------------------------------------------------------------------------
// criterion 4 — derived cosine values on the geometry slice

#[test]
fn criterion_04_geometry_cosines_match_set_oracle_and_closed_forms() {
    let corpus = seed_corpus();
    let pairs = [
        ("pythagorean", "triangle_angle_sum", 10.0 / 11.0),
        ("pythagorean", "euler_line", 10.0 / 110f64.sqrt()),
        ("triangle_angle_sum", "euler_line", 9.0 / 110f64.sqrt()),
    ];

    for (a, b, closed_form) in pairs {
        let u = &corpus.get(a).expect("seed theorem").vector;
        let v = &corpus.get(b).expect("seed theorem").vector;
        let oracle = cosine_oracle(&support_set(u.values()), &support_set(v.values()));
        let actual = cosine_similarity(u, v).expect("comparable vectors");
        assert!(
            (oracle - closed_form).abs() <= TOL,
            "oracle for ({a}, {b}) disagrees with the closed form"
        );
        assert!(
            (actual - oracle).abs() <= TOL,
            "cosine({a}, {b}) = {actual}, oracle says {oracle}"
        );
        assert!(
            (actual - closed_form).abs() <= TOL,
            "cosine({a}, {b}) = {actual}, closed form says {closed_form}"
        );
    }

    println!("criterion 04 (derived cosine values): pass");
}

// ---------------------------------------------------------------------------
// criterion 5 — clustering against frozen heights and the naive reference

#[test]
fn criterion_05_clustering_matches_frozen_heights_and_naive_reference() {
    let corpus = seed_corpus();
    let slice = hilbert_slice(&corpus);
    let dendrogram =
        cluster(&slice, Metric::Cosine, Linkage::Average).expect("clustering succeeds");
    let merges = merges_as_leaf_sets(&dendrogram);
    assert_eq!(merges.len(), 2);

    // leaves are in corpus order: pythagorean, triangle_angle_sum, euler_line
    let first: BTreeSet<usize> = merges[0].left.union(&merges[0].right).copied().collect();
    assert_eq!(
        first,
        BTreeSet::from([0, 2]),
        "first merge joins pythagorean and euler_line"
    );
    assert!(
        (merges[0].height - 0.046537).abs() <= 1e-6,
        "first merge height {} off the frozen value",
        merges[0].height
    );

    let second: BTreeSet<usize> = merges[1].left.union(&merges[1].right).copied().collect();
    assert_eq!(second, BTreeSet::from([0, 1, 2]));
    assert!(
        (merges[1].height - 0.116397).abs() <= 1e-6,
        "second merge height {} off the frozen value",
        merges[1].height
    );

    // every corpus slice of size ≤ 6 agrees with the naive O(n³) reference,
    // across every metric and linkage; a six-theorem geometry corpus
    // exercises the upper end
    let extras = [
        ("median_concurrence", [1, 1, 1, 1, 1, 0, 1, 1, 1, 0, 0, 1]),
        ("incircle_exists", [1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 0, 1]),
        (
            "parallel_transitivity",
            [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 1],
        ),
    ];
    let mut extended = corpus.clone();
    for (id, bits) in extras {
        extended = extended
            .add_theorem(Theorem::new(id, id, id, binary_vector("hilbert", &bits)))
            .expect("extended corpus stays valid");
    }

    let mut slices_checked = 0usize;
    for system in ["hilbert", "peano", "zfc"] {
        let pool = extended.theorems_in(system);
        for mask in 1u32..(1 << pool.len()) {
            if mask.count_ones() < 2 {
                continue;
            }
            let subset: Vec<&Theorem> = pool
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, t)| *t)
                .collect();
            for metric in ALL_METRICS {
                for linkage in ALL_LINKAGES {
                    assert_matches_reference(&subset, metric, linkage);
                }
            }
            slices_checked += 1;
        }
    }
    assert!(slices_checked > 60, "expected a substantive slice sweep");

    println!("criterion 05 (clustering reference, {slices_checked} slices): pass");
}

// ---------------------------------------------------------------------------
// criterion 6 — randomized metric property suite

fn runner() -> TestRunner {
    TestRunner::new(Config::with_cases(1000))
}

/// Two same-dimension weighted vectors, each with non-empty support.
fn weighted_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=12)
        .prop_flat_map(|d| {
            (
                prop::collection::vec(0.0f64..=1.0, d),
                prop::collection::vec(0.0f64..=1.0, d),
                0..d,
                0..d,
            )
        })
        .prop_map(|(mut u, mut v, i, j)| {
            u[i] = u[i].max(0.5);
            v[j] = v[j].max(0.5);
            (u, v)
        })
}

fn weighted_triple() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..=12).prop_flat_map(|d| {
        (
            prop::collection::vec(0.0f64..=1.0, d),
            prop::collection::vec(0.0f64..=1.0, d),
            prop::collection::vec(0.0f64..=1.0, d),
        )
    })
}

fn binary_pair(dim: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0..=1u8, dim),
        prop::collection::vec(0..=1u8, dim),
        0..dim,
        0..dim,
    )
        .prop_map(|(u, v, i, j)| {
            let mut u: Vec<f64> = u.into_iter().map(f64::from).collect();
            let mut v: Vec<f64> = v.into_iter().map(f64::from).collect();
            u[i] = 1.0;
            v[j] = 1.0;
            (u, v)
        })
}

#[test]
fn criterion_06_metric_property_suite() {
    let started = std::time::Instant::now();

    // symmetry: bit-for-bit, every metric
    runner()
        .run(&weighted_pair(), |(u, v)| {
            let (u, v) = (probe(u), probe(v));
            for metric in ALL_METRICS {
                let forward = metric.value(&u, &v).expect("defined");
                let backward = metric.value(&v, &u).expect("defined");
                assert_eq!(forward, backward, "{metric} asymmetric");
            }
            Ok(())
        })
        .expect("symmetry holds");

    // ranges: similarities in [0,1], euclidean in [0, √d]
    runner()
        .run(&weighted_pair(), |(u, v)| {
            let d = u.len() as f64;
            let (u, v) = (probe(u), probe(v));
            for metric in [Metric::Cosine, Metric::Jaccard] {
                let s = metric.value(&u, &v).expect("defined");
                assert!((0.0..=1.0).contains(&s), "{metric} out of range: {s}");
            }
            let e = Metric::Euclidean.value(&u, &v).expect("defined");
            assert!(
                (0.0..=d.sqrt() + TOL).contains(&e),
                "euclidean out of range: {e}"
            );
            Ok(())
        })
        .expect("ranges hold");

    // self-identity: exact for binary, within tolerance for weighted
    runner()
        .run(&weighted_pair(), |(u, _)| {
            let w = probe(u.clone());
            assert!((Metric::Cosine.value(&w, &w).expect("defined") - 1.0).abs() <= TOL);
            assert_eq!(Metric::Euclidean.value(&w, &w).expect("defined"), 0.0);
            assert_eq!(Metric::Jaccard.value(&w, &w).expect("defined"), 1.0);

            let b = probe(u.into_iter().map(f64::round).collect());
            if !b.is_zero() {
                assert_eq!(Metric::Cosine.value(&b, &b).expect("defined"), 1.0);
            }
            Ok(())
        })
        .expect("self-identity holds");

    // euclidean triangle inequality
    runner()
        .run(&weighted_triple(), |(u, v, w)| {
            let (u, v, w) = (probe(u), probe(v), probe(w));
            let direct = Metric::Euclidean.value(&u, &w).expect("defined");
            let via = Metric::Euclidean.value(&u, &v).expect("defined")
                + Metric::Euclidean.value(&v, &w).expect("defined");
            assert!(direct <= via + TOL, "triangle inequality: {direct} > {via}");
            Ok(())
        })
        .expect("triangle inequality holds");

    // coordinate-permutation invariance
    let permuted = (2usize..=12).prop_flat_map(|d| {
        (
            prop::collection::vec(0.0f64..=1.0, d),
            prop::collection::vec(0.0f64..=1.0, d),
            0..d,
            0..d,
            Just((0..d).collect::<Vec<usize>>()).prop_shuffle(),
        )
    });
    runner()
        .run(&permuted, |(mut u, mut v, i, j, order)| {
            u[i] = u[i].max(0.5);
            v[j] = v[j].max(0.5);
            let apply = |src: &[f64]| -> Vec<f64> { order.iter().map(|&k| src[k]).collect() };
            let (pu, pv) = (probe(apply(&u)), probe(apply(&v)));
            let (u, v) = (probe(u), probe(v));
            for metric in ALL_METRICS {
                let plain = metric.value(&u, &v).expect("defined");
                let shuffled = metric.value(&pu, &pv).expect("defined");
                assert!(
                    (plain - shuffled).abs() <= TOL,
                    "{metric} not permutation-invariant: {plain} vs {shuffled}"
                );
            }
            Ok(())
        })
        .expect("permutation invariance holds");

    // binary-oracle equivalence: exhaustive over every vector pair at
    // dimension ≤ 8, then randomized at dimension 12
    for dim in 1..=8usize {
        for a_bits in 0u32..(1 << dim) {
            for b_bits in 0u32..(1 << dim) {
                let unpack = |bits: u32| -> Vec<f64> {
                    (0..dim)
                        .map(|k| if bits & (1 << k) != 0 { 1.0 } else { 0.0 })
                        .collect()
                };
                let (u, v) = (probe(unpack(a_bits)), probe(unpack(b_bits)));
                let (sa, sb) = (support_set(u.values()), support_set(v.values()));

                assert_eq!(
                    Metric::Jaccard.value(&u, &v).expect("defined"),
                    jaccard_oracle(&sa, &sb)
                );
                assert_eq!(
                    Metric::Euclidean.value(&u, &v).expect("defined"),
                    euclidean_oracle(&sa, &sb)
                );
                let cosine = Metric::Cosine.value(&u, &v);
                if sa.is_empty() || sb.is_empty() {
                    assert!(matches!(cosine, Err(Error::ZeroVector(_))));
                } else {
                    let got = cosine.expect("defined");
                    let want = cosine_oracle(&sa, &sb);
                    assert!((got - want).abs() <= 1e-12, "cosine {got} vs oracle {want}");
                }
            }
        }
    }
    runner()
        .run(&binary_pair(12), |(u, v)| {
            let (u, v) = (probe(u), probe(v));
            let (sa, sb) = (support_set(u.values()), support_set(v.values()));
            let cosine = Metric::Cosine.value(&u, &v).expect("non-empty supports");
            assert!((cosine - cosine_oracle(&sa, &sb)).abs() <= 1e-12);
            assert_eq!(
                Metric::Jaccard.value(&u, &v).expect("defined"),
                jaccard_oracle(&sa, &sb)
            );
            assert_eq!(
                Metric::Euclidean.value(&u, &v).expect("defined"),
                euclidean_oracle(&sa, &sb)
            );
            Ok(())
        })
        .expect("binary oracle equivalence holds");

    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "property suite took {elapsed:?}"
    );
    println!("criterion 06 (metric properties, {elapsed:?}): pass");
}

// ---------------------------------------------------------------------------
// criterion 7 — support algebra

#[test]
fn criterion_07_support_algebra() {
    let corpus = seed_corpus();
    let slice = hilbert_slice(&corpus);

    let core = common_core(&slice).expect("non-empty slice");
    assert_eq!(core.kind(), VectorKind::Binary);
    assert_eq!(
        core.values(),
        &[1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0]
    );

    let union = footprint(&slice).expect("non-empty slice");
    assert_eq!(union.values(), vec![1.0; 12].as_slice());

    // randomized: core ⊆ every support ⊆ footprint, and the two combinators
    // are exactly set intersection and union of the supports
    let corpora = (2usize..=10, 2usize..=6)
        .prop_flat_map(|(dim, n)| prop::collection::vec(prop::collection::vec(0..=1u8, dim), n));
    runner()
        .run(&corpora, |rows| {
            let theorems: Vec<Theorem> = rows
                .iter()
                .enumerate()
                .map(|(i, bits)| {
                    let id = format!("t{i:02}");
                    Theorem::new(&id, &id, &id, binary_vector("probe_system", bits))
                })
                .collect();
            let refs: Vec<&Theorem> = theorems.iter().collect();

            let supports: Vec<BTreeSet<usize>> = refs
                .iter()
                .map(|t| support_set(t.vector.values()))
                .collect();
            let intersection = supports
                .iter()
                .skip(1)
                .fold(supports[0].clone(), |acc, s| &acc & s);
            let union = supports.iter().fold(BTreeSet::new(), |acc, s| &acc | s);

            let core = support_set(common_core(&refs).expect("non-empty").values());
            let foot = support_set(footprint(&refs).expect("non-empty").values());
            assert_eq!(
                core, intersection,
                "common core is the support intersection"
            );
            assert_eq!(foot, union, "footprint is the support union");
            for s in &supports {
                assert!(core.is_subset(s), "core not contained in a member support");
                assert!(s.is_subset(&foot), "member support escapes the footprint");
            }
            Ok(())
        })
        .expect("support algebra holds");

    println!("criterion 07 (support algebra): pass");
}

// ---------------------------------------------------------------------------
// criterion 8 — heatmap structure

#[test]
fn criterion_08_heatmap_structure_and_determinism() {
    let corpus = seed_corpus();
    let slice = hilbert_slice(&corpus);
    let system = corpus.registry().get("hilbert").expect("registered");
    let options = HeatmapOptions::default();

    let svg = render_vector_heatmap(&slice, system, &options).expect("renders");
    assert_eq!(
        svg.matches("<rect").count(),
        36,
        "3×12 grid renders 36 cells"
    );
    assert_eq!(extract_cells(&svg).len(), 36);

    let parsed = cell_matrix(&svg, slice.len(), system.dimension());
    for (r, theorem) in slice.iter().enumerate() {
        for (c, &value) in theorem.vector.values().iter().enumerate() {
            assert!(
                (parsed[r][c] - value).abs() <= 1e-6,
                "cell ({r}, {c}) reconstructs {} instead of {value}",
                parsed[r][c]
            );
        }
    }

    // byte-identical across repeated runs, including freshly rebuilt inputs
    let again = render_vector_heatmap(&slice, system, &options).expect("renders");
    assert_eq!(svg, again);
    let rebuilt = seed_corpus();
    let fresh = render_vector_heatmap(
        &rebuilt.theorems_in("hilbert"),
        rebuilt.registry().get("hilbert").expect("registered"),
        &HeatmapOptions::default(),
    )
    .expect("renders");
    assert_eq!(svg, fresh);

    println!("criterion 08 (heatmap structure): pass");
}

// ---------------------------------------------------------------------------
// criterion 9 — round-trips

#[test]
fn criterion_09_round_trips() {
    // corpus export → import identity, including a weighted record
    let corpus = seed_corpus()
        .add_theorem(Theorem::new(
            "partial_dependence",
            "Partially Weighted Record",
            "A record with fractional axiom weights.",
            ProofVector::weighted("peano", vec![1.0, 0.5, 0.0, 0.25, 0.125])
                .expect("valid weights"),
        ))
        .expect("weighted record fits the corpus");
    let exported = export_corpus(&corpus);
    let imported = import_corpus(&exported, corpus.registry()).expect("imports");
    assert_eq!(imported, corpus);

    // matrix CSV export → parse within 1e-6
    let slice = hilbert_slice(&corpus);
    for metric in ALL_METRICS {
        let matrix = similarity_matrix(&slice, metric).expect("computes");
        let csv = export_matrix_csv(&matrix);
        let (labels, values) = parse_matrix_csv(&csv).expect("parses back");
        assert_eq!(labels, matrix.labels());
        for (row, original_row) in values.iter().zip(matrix.values()) {
            for (got, want) in row.iter().zip(original_row) {
                assert!(
                    (got - want).abs() <= 1e-6,
                    "{metric} CSV drifted: {got} vs {want}"
                );
            }
        }
    }

    // axiom system dump → load structural equality
    let registry = builtin_registry();
    for system in registry.systems() {
        let dumped = dump_system(system);
        let loaded = load_system(&dumped).expect("loads back");
        assert_eq!(&loaded, system, "system '{}' drifted", system.id);
    }

    println!("criterion 09 (round-trips): pass");
}

// ---------------------------------------------------------------------------
// criterion 10 — remote backend robustness

#[test]
fn criterion_10_backend_robustness() {
    let corpus = seed_corpus();

    // unreachable endpoint in auto mode: a valid offline suggestion
    let config = BackendConfig {
        endpoint: Some(unreachable_endpoint()),
        api_key: Some("test-key".to_string()),
        model: None,
        timeout: Duration::from_secs(5),
        mode: Mode::Auto,
    };
    let suggestion = suggest("There are infinitely many primes.", &corpus, &config)
        .expect("auto mode falls back");
    assert_eq!(suggestion.backend, BackendKind::Offline);
    assert_eq!(suggestion.system_id, "peano");
    assert_eq!(suggestion.vector.values(), &[1.0, 1.0, 0.0, 0.0, 1.0]);

    // malformed replies in remote mode: one retry, then the error surfaces
    let bad = "system: peano\nvector: 1,0\nexplanation: wrong length".to_string();
    let server = StubServer::serve(vec![(200, bad.clone()), (200, bad)]);
    let config = BackendConfig {
        endpoint: Some(server.endpoint().to_string()),
        api_key: Some("test-key".to_string()),
        model: None,
        timeout: Duration::from_secs(5),
        mode: Mode::Remote,
    };
    let err = suggest("There are infinitely many primes.", &corpus, &config)
        .expect_err("malformed replies error out");
    assert!(
        matches!(err, Error::MalformedBackendReply(_)),
        "unexpected error: {err:?}"
    );
    assert_eq!(server.request_count(), 2, "exactly one retry");

    println!("criterion 10 (backend robustness): pass");
}
