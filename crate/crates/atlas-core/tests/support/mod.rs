//! Shared oracles and fixtures for the integration suites.
//!
//! Everything here is deliberately independent of the library internals:
//! the metric oracles work on plain index sets, the clustering reference is
//! a from-scratch naive implementation, and the SVG reader is a regex over
//! the document text.

#![allow(dead_code)] // each test binary uses its own subset

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

use atlas_core::analysis::NodeRef;
use atlas_core::{Dendrogram, Linkage, Metric, Theorem};

pub const TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// set-based metric oracles (binary vectors only)

pub fn support_set(values: &[f64]) -> BTreeSet<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// Cosine of two binary vectors via their supports: `|A∩B| / √(|A|·|B|)`.
pub fn cosine_oracle(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> f64 {
    let shared = a.intersection(b).count() as f64;
    shared / ((a.len() * b.len()) as f64).sqrt()
}

/// Jaccard via supports, two empty supports agreeing completely.
pub fn jaccard_oracle(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Euclidean distance of two binary vectors: √|A Δ B|.
pub fn euclidean_oracle(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> f64 {
    (a.symmetric_difference(b).count() as f64).sqrt()
}

// ---------------------------------------------------------------------------
// naive O(n³) agglomerative clustering reference

/// One reference merge: the two leaf-index sets joined and the height.
/// `left` is the cluster whose lexicographically smallest member id is
/// smaller.
#[derive(Debug, Clone, PartialEq)]
pub struct RefMerge {
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
    pub height: f64,
}

fn ref_linkage(
    base: &[Vec<f64>],
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    linkage: Linkage,
) -> f64 {
    // canonical pair order, matching the documented summation convention:
    // outer loop over the cluster holding the smallest index, ascending
    let (a, b) = if a.first() <= b.first() {
        (a, b)
    } else {
        (b, a)
    };
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    let mut sum = 0.0f64;
    for &i in a {
        for &j in b {
            let d = base[i][j];
            min = min.min(d);
            max = max.max(d);
            sum += d;
        }
    }
    match linkage {
        Linkage::Single => min,
        Linkage::Complete => max,
        Linkage::Average => sum / (a.len() * b.len()) as f64,
    }
}

fn rep<'a>(ids: &[&'a str], cluster: &BTreeSet<usize>) -> &'a str {
    cluster
        .iter()
        .map(|&i| ids[i])
        .min()
        .expect("non-empty cluster")
}

/// Pairwise distance matrix of a theorem slice under one metric.
pub fn base_distances(theorems: &[&Theorem], metric: Metric) -> Vec<Vec<f64>> {
    let n = theorems.len();
    let mut base = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = metric
                .distance(&theorems[i].vector, &theorems[j].vector)
                .expect("comparable vectors");
            base[i][j] = d;
            base[j][i] = d;
        }
    }
    base
}

/// From-scratch agglomerative reference: rescans every pair each round and
/// breaks distance ties by the ordered pair of cluster representatives.
pub fn reference_cluster(ids: &[&str], base: &[Vec<f64>], linkage: Linkage) -> Vec<RefMerge> {
    let mut clusters: Vec<BTreeSet<usize>> = (0..ids.len())
        .map(|i| std::iter::once(i).collect())
        .collect();
    let mut merges = Vec::new();

    while clusters.len() > 1 {
        let mut best: Option<(f64, (&str, &str), usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let d = ref_linkage(base, &clusters[a], &clusters[b], linkage);
                let (ra, rb) = (rep(ids, &clusters[a]), rep(ids, &clusters[b]));
                let key = if ra <= rb { (ra, rb) } else { (rb, ra) };
                let take = match best {
                    None => true,
                    Some((bd, bk, _, _)) => d < bd || (d == bd && key < bk),
                };
                if take {
                    best = Some((d, key, a, b));
                }
            }
        }
        let (height, _, a, b) = best.expect("pair exists");
        let (ca, cb) = (clusters[a].clone(), clusters[b].clone());
        let (left, right) = if rep(ids, &ca) <= rep(ids, &cb) {
            (ca.clone(), cb.clone())
        } else {
            (cb.clone(), ca.clone())
        };
        merges.push(RefMerge {
            left,
            right,
            height,
        });

        clusters.remove(b); // b > a, so remove b first
        clusters.remove(a);
        clusters.push(ca.union(&cb).copied().collect());
    }
    merges
}

/// Flatten a library dendrogram into the reference shape for comparison.
pub fn merges_as_leaf_sets(dendrogram: &Dendrogram) -> Vec<RefMerge> {
    let mut node_sets: Vec<BTreeSet<usize>> = Vec::new();
    let mut out = Vec::new();
    for merge in dendrogram.merges() {
        let resolve = |node: NodeRef, node_sets: &[BTreeSet<usize>]| -> BTreeSet<usize> {
            match node {
                NodeRef::Leaf(i) => std::iter::once(i).collect(),
                NodeRef::Internal(m) => node_sets[m].clone(),
            }
        };
        let left = resolve(merge.left, &node_sets);
        let right = resolve(merge.right, &node_sets);
        node_sets.push(left.union(&right).copied().collect());
        out.push(RefMerge {
            left,
            right,
            height: merge.height,
        });
    }
    out
}

// ---------------------------------------------------------------------------
// SVG reading

/// All heatmap cells as (row, col, value, fill) read back from the SVG text.
pub fn extract_cells(svg: &str) -> Vec<(usize, usize, f64, String)> {
    let cell = regex::Regex::new(
        r#"fill="(#[0-9A-F]{6})" data-row="(\d+)" data-col="(\d+)" data-value="([0-9.]+)""#,
    )
    .expect("cell pattern");
    cell.captures_iter(svg)
        .map(|c| {
            (
                c[2].parse().expect("row index"),
                c[3].parse().expect("col index"),
                c[4].parse().expect("cell value"),
                c[1].to_string(),
            )
        })
        .collect()
}

/// Cell values as a dense rows×cols matrix.
pub fn cell_matrix(svg: &str, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    let mut matrix = vec![vec![f64::NAN; cols]; rows];
    let cells = extract_cells(svg);
    assert_eq!(cells.len(), rows * cols, "cell count");
    for (r, c, v, _) in cells {
        matrix[r][c] = v;
    }
    matrix
}

// ---------------------------------------------------------------------------
// local HTTP stub for backend tests

/// A one-thread HTTP server that answers a fixed list of (status, body)
/// responses in order, then stops accepting. Request bodies are recorded.
pub struct StubServer {
    endpoint: String,
    requests: Arc<AtomicUsize>,
    bodies: Arc<Mutex<Vec<String>>>,
    handle: Option<thread::JoinHandle<()>>,
}

impl StubServer {
    pub fn serve(responses: Vec<(u16, String)>) -> StubServer {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub server");
        let endpoint = format!("http://{}", listener.local_addr().expect("stub address"));
        let requests = Arc::new(AtomicUsize::new(0));
        let bodies = Arc::new(Mutex::new(Vec::new()));
        let counter = Arc::clone(&requests);
        let body_log = Arc::clone(&bodies);

        let handle = thread::spawn(move || {
            for (status, body) in responses {
                let Ok((mut stream, _)) = listener.accept() else {
                    return;
                };
                counter.fetch_add(1, Ordering::SeqCst);
                let request_body = read_http_request(&mut stream);
                body_log.lock().expect("body log").push(request_body);
                let reason = match status {
                    200 => "OK",
                    500 => "Internal Server Error",
                    _ => "Status",
                };
                let response = format!(
                    "HTTP/1.1 {status} {reason}\r\nContent-Type: text/plain\r\n\
                     Content-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
                let _ = stream.write_all(response.as_bytes());
            }
        });

        StubServer {
            endpoint,
            requests,
            bodies,
            handle: Some(handle),
        }
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }

    /// Bodies of the requests served so far, in arrival order.
    pub fn request_bodies(&self) -> Vec<String> {
        self.bodies.lock().expect("body log").clone()
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        // the serving thread ends once its response list is exhausted; if a
        // test made fewer requests than scripted, detach rather than hang
        if let Some(handle) = self.handle.take() {
            if handle.is_finished() {
                let _ = handle.join();
            }
        }
    }
}

fn read_http_request(stream: &mut std::net::TcpStream) -> String {
    let mut buf = Vec::new();
    let mut chunk = [0u8; 1024];
    loop {
        match stream.read(&mut chunk) {
            Ok(0) | Err(_) => return String::new(),
            Ok(n) => buf.extend_from_slice(&chunk[..n]),
        }
        if let Some(header_end) = find_subsequence(&buf, b"\r\n\r\n") {
            let headers = String::from_utf8_lossy(&buf[..header_end]);
            let content_length = headers
                .lines()
                .find_map(|line| {
                    let (name, value) = line.split_once(':')?;
                    name.eq_ignore_ascii_case("content-length")
                        .then(|| value.trim().parse::<usize>().ok())?
                })
                .unwrap_or(0);
            let body_start = header_end + 4;
            if buf.len() >= body_start + content_length {
                let body = &buf[body_start..body_start + content_length];
                return String::from_utf8_lossy(body).into_owned();
            }
        }
    }
}

fn find_subsequence(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    haystack.windows(needle.len()).position(|w| w == needle)
}

/// An endpoint that refuses connections: bind a port, then release it.
pub fn unreachable_endpoint() -> String {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind probe");
    let addr = listener.local_addr().expect("probe address");
    drop(listener);
    format!("http://{addr}")
}
