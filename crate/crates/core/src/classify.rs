//! Exhaustive enumeration of small graphs and classification of cores.
//!
//! Every edge bitmask is tried and kept iff it is its own canonical form,
//! which gives one representative per isomorphism class without any
//! orderly-generation machinery. Masks are split across rayon workers and
//! the results come back in mask order.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{is_decomposable, is_projective_with, ProjectivityOptions, ProjectivityStatus, ProjectivityVerdict};
use crate::cores::is_core;
use crate::graph::{clique, cycle, named, Graph, OddGirth};
use crate::iso::{canon, canonical_key, is_canonical};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("enumeration supports at most 8 vertices, got {0}")]
    TooLarge(usize),
    #[error("8-vertex classification must be requested explicitly")]
    NeedsExplicitN8,
    #[error("could not build a thread pool: {0}")]
    ThreadPool(String),
}

/// Largest order [`enumerate_graphs`] accepts.
pub const MAX_ENUMERATION_ORDER: usize = 8;

/// The graph whose graph6 bit string, read as a number with the first pair
/// most significant, is `key`.
pub fn graph_from_key(n: usize, key: u64) -> Graph {
    let pairs = n * n.saturating_sub(1) / 2;
    let mut rows = [0u16; 16];
    let mut bit = pairs;
    for j in 1..n {
        for i in 0..j {
            bit -= 1;
            if key >> bit & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
    }
    Graph::from_rows(n, &rows)
}

/// One canonical graph per isomorphism class on `n` vertices, ordered by
/// canonical bit string. Runs on the current rayon pool.
pub fn try_enumerate_graphs(n: usize) -> Result<Vec<Graph>, ClassifyError> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(ClassifyError::TooLarge(n));
    }
    let pairs = (n * n.saturating_sub(1) / 2) as u32;
    Ok((0..1u64 << pairs)
        .into_par_iter()
        .filter_map(|key| {
            let g = graph_from_key(n, key);
            is_canonical(&g).then_some(g)
        })
        .collect())
}

/// Panics for `n > 8`; see [`try_enumerate_graphs`].
pub fn enumerate_graphs(n: usize) -> Vec<Graph> {
    try_enumerate_graphs(n).expect("order at most 8")
}

/// Names used for recognised graphs, with their definitions.
pub fn bundled_graphs() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = (1..=7).map(|k| (format!("K{k}"), clique(k).unwrap())).collect();
    for k in [5, 7, 9] {
        out.push((format!("C{k}"), cycle(k).unwrap()));
    }
    for k in [7, 9] {
        out.push((format!("co-C{k}"), cycle(k).unwrap().complement()));
    }
    for p in [1, 2] {
        out.push((format!("C5+{p}"), named(&format!("c5p{p}")).unwrap()));
    }
    for i in 1..=6 {
        out.push((format!("G{i}"), named(&format!("g{i}")).unwrap()));
    }
    out.push(("Grotzsch".into(), named("grotzsch").unwrap()));
    out.push(("Petersen".into(), named("petersen").unwrap()));
    out
}

/// Name of the bundled graph isomorphic to `g`, if any.
pub fn known_name(g: &Graph) -> Option<String> {
    let key = canonical_key(g);
    bundled_graphs()
        .into_iter()
        .find(|(_, b)| b.order() == g.order() && b.edge_count() == g.edge_count() && canonical_key(b) == key)
        .map(|(name, _)| name)
}

/// Known list of cores on exactly `n` vertices, for `n <= 7`.
pub fn expected_cores(n: usize) -> Option<Vec<&'static str>> {
    Some(match n {
        1 => vec!["K1"],
        2 => vec!["K2"],
        3 => vec!["K3"],
        4 => vec!["K4"],
        5 => vec!["K5", "C5"],
        6 => vec!["K6", "C5+1"],
        7 => vec!["K7", "C7", "co-C7", "C5+2", "G1", "G2", "G3", "G4", "G5", "G6"],
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationRecord {
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub is_core: bool,
    pub odd_girth: OddGirth,
    pub connected: bool,
    pub projectivity: ProjectivityVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_name: Option<String>,
}

impl ClassificationRecord {
    pub fn graph(&self) -> Graph {
        Graph::from_graph6(&self.graph6).expect("records hold valid graph6")
    }
}

/// Builds the record for one graph (relabelled to canonical form).
pub fn classify_graph(g: &Graph, opts: ProjectivityOptions) -> ClassificationRecord {
    let cf = canon(g);
    let h = cf.graph();
    ClassificationRecord {
        n: h.order(),
        m: h.edge_count(),
        is_core: is_core(&h),
        odd_girth: h.odd_girth(),
        connected: h.is_connected(),
        projectivity: is_projective_with(&h, opts),
        known_name: known_name(&h),
        graph6: cf.graph6,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Worker threads; 0 uses rayon's default.
    pub jobs: usize,
    pub allow_n8: bool,
    pub projectivity: ProjectivityOptions,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            jobs: 0,
            allow_n8: false,
            projectivity: ProjectivityOptions {
                both: true,
                ..Default::default()
            },
        }
    }
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T, ClassifyError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ClassifyError::ThreadPool(e.to_string()))?;
    Ok(pool.install(work))
}

/// Records for every core on exactly `n` vertices, sorted by graph6.
pub fn classify_cores(n: usize, opts: ClassifyOptions) -> Result<Vec<ClassificationRecord>, ClassifyError> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(ClassifyError::TooLarge(n));
    }
    if n == 8 && !opts.allow_n8 {
        return Err(ClassifyError::NeedsExplicitN8);
    }
    with_pool(opts.jobs, || -> Result<_, ClassifyError> {
        let graphs = try_enumerate_graphs(n)?;
        let mut records: Vec<ClassificationRecord> = graphs
            .par_iter()
            .filter(|g| is_core(g))
            .map(|g| classify_graph(g, opts.projectivity))
            .collect();
        records.sort_by(|a, b| a.graph6.cmp(&b.graph6));
        Ok(records)
    })?
}

/// Comparison of a classification with the known list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedCheck {
    pub n: usize,
    pub expected: Vec<String>,
    pub found: Vec<String>,
    /// Cores found that match no bundled graph, as graph6.
    pub unnamed: Vec<String>,
    pub matches: bool,
}

pub fn check_against_expected(n: usize, records: &[ClassificationRecord]) -> Option<ExpectedCheck> {
    let mut expected: Vec<String> = expected_cores(n)?.into_iter().map(String::from).collect();
    expected.sort();
    let mut found: Vec<String> = records.iter().filter_map(|r| r.known_name.clone()).collect();
    found.sort();
    let unnamed: Vec<String> = records
        .iter()
        .filter(|r| r.known_name.is_none())
        .map(|r| r.graph6.clone())
        .collect();
    let matches = unnamed.is_empty() && found == expected;
    Some(ExpectedCheck {
        n,
        expected,
        found,
        unnamed,
        matches,
    })
}

/// Sorted edge counts of the records that are neither cliques nor
/// (complements of) cycles nor `C5` plus universal vertices.
pub fn sporadic_edge_histogram(records: &[ClassificationRecord]) -> Vec<usize> {
    let mut out: Vec<usize> = records
        .iter()
        .filter(|r| r.known_name.as_deref().is_some_and(|name| name.starts_with('G') && name.len() == 2))
        .map(|r| r.m)
        .collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureCase {
    pub graph6: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_name: Option<String>,
    pub status: ProjectivityStatus,
    pub decomposable: bool,
    /// Projective exactly when indecomposable.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub cases: Vec<ConjectureCase>,
    pub counterexamples: usize,
    pub inconclusive: usize,
}

/// Checks "projective iff indecomposable" on every connected
/// non-bipartite core with 3 to `n` vertices.
pub fn verify_conjecture(n: usize, jobs: usize) -> Result<ConjectureReport, ClassifyError> {
    if n > 7 {
        return Err(ClassifyError::TooLarge(n));
    }
    let opts = ClassifyOptions {
        jobs,
        projectivity: ProjectivityOptions::default(),
        ..Default::default()
    };
    let mut cases = Vec::new();
    for k in 3..=n {
        for r in classify_cores(k, opts)? {
            let g = r.graph();
            if !r.connected || g.is_bipartite() {
                continue;
            }
            let decomposable = is_decomposable(&g).is_some();
            let status = r.projectivity.status;
            let consistent = match status {
                ProjectivityStatus::Projective => !decomposable,
                ProjectivityStatus::NotProjective => decomposable,
                _ => false,
            };
            cases.push(ConjectureCase {
                graph6: r.graph6,
                known_name: r.known_name,
                status,
                decomposable,
                consistent,
            });
        }
    }
    let inconclusive = cases
        .iter()
        .filter(|c| matches!(c.status, ProjectivityStatus::Inconclusive | ProjectivityStatus::NotApplicable))
        .count();
    let counterexamples = cases.iter().filter(|c| !c.consistent).count() - inconclusive;
    Ok(ConjectureReport {
        n,
        cases,
        counterexamples,
        inconclusive,
    })
}
