//! Exhaustive generation of computational graphs up to the hash invariant.
//!
//! For `n = 2..=max_vertices`, every bit vector of length `n(n-1)/2` is read
//! as an upper-triangular adjacency matrix (bit `t` is the `t`-th pair in
//! row-major order, vector value `Σ bit_t · 2^t`, visited in increasing
//! value). Matrices with too many edges or with a vertex off every `1 -> n`
//! path are skipped. Each surviving matrix is combined with every coloring in
//! lexicographic order and kept iff its digest has not been seen before.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{pair_count, Adjacency, Color, ComputationalGraph};
use crate::hash::{graph_invariant, invariant_for, Backend, Digest};
use crate::oracle::{are_isomorphic, OracleError, ORACLE_MAX_VERTICES};

/// Largest `n` whose bit vectors fit in a `u64`.
pub const MAX_ENUMERATION_VERTICES: usize = 11;

/// Surviving matrices hashed per batch before merging into the seen-set.
const BATCH_MASKS: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("max vertices must be at least 2, got {0}")]
    TooFewVertices(usize),
    #[error("max vertices must be at most {MAX_ENUMERATION_VERTICES}, got {0}")]
    TooManyVertices(usize),
    #[error("max edges must be at least 1")]
    NoEdges,
    #[error("at least one color is required")]
    NoColors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("bit vector for {n} vertices must have {expected} entries, got {actual}")]
pub struct BitLengthMismatch {
    pub n: usize,
    pub expected: usize,
    pub actual: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumerationConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Interior palette size.
    pub colors: Color,
    /// Vertex 1 gets color `colors + 1`, vertex `n` gets `colors + 2`, and
    /// interior vertices draw from `1..=colors`.
    pub reserved_io: bool,
}

impl EnumerationConfig {
    pub fn new(
        max_vertices: usize,
        max_edges: usize,
        colors: Color,
        reserved_io: bool,
    ) -> Result<Self, ConfigError> {
        let config = EnumerationConfig {
            max_vertices,
            max_edges,
            colors,
            reserved_io,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_vertices < 2 {
            return Err(ConfigError::TooFewVertices(self.max_vertices));
        }
        if self.max_vertices > MAX_ENUMERATION_VERTICES {
            return Err(ConfigError::TooManyVertices(self.max_vertices));
        }
        if self.max_edges == 0 {
            return Err(ConfigError::NoEdges);
        }
        if self.colors == 0 {
            return Err(ConfigError::NoColors);
        }
        Ok(())
    }

    /// Declared palette of generated graphs.
    pub fn palette_size(&self) -> Color {
        if self.reserved_io {
            self.colors + 2
        } else {
            self.colors
        }
    }

    /// All colorings of an `n`-vertex graph in lexicographic order.
    pub fn colorings(&self, n: usize) -> Vec<Vec<Color>> {
        let k = self.colors;
        let (fixed_first, fixed_last) = if self.reserved_io && n >= 2 {
            (Some(k + 1), Some(k + 2))
        } else {
            (None, None)
        };
        let free = n - usize::from(fixed_first.is_some()) - usize::from(fixed_last.is_some());
        let mut out = Vec::new();
        let mut digits = vec![1 as Color; free];
        loop {
            let mut coloring = Vec::with_capacity(n);
            coloring.extend(fixed_first);
            coloring.extend_from_slice(&digits);
            coloring.extend(fixed_last);
            out.push(coloring);

            // Odometer, last position fastest.
            let mut pos = free;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if digits[pos] < k {
                    digits[pos] += 1;
                    digits[pos + 1..].fill(1);
                    break;
                }
            }
        }
    }
}

/// Row-major list of 0-indexed pairs `(i, j)`, `i < j`.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// Decodes a bit vector into 1-indexed edges.
pub fn decode_bitvector(n: usize, bits: &[bool]) -> Result<Vec<(usize, usize)>, BitLengthMismatch> {
    let expected = pair_count(n);
    if bits.len() != expected {
        return Err(BitLengthMismatch {
            n,
            expected,
            actual: bits.len(),
        });
    }
    Ok(pairs(n)
        .into_iter()
        .zip(bits)
        .filter(|(_, &bit)| bit)
        .map(|((i, j), _)| (i + 1, j + 1))
        .collect())
}

/// Whether a decoded edge set has at most `max_edges` edges and every vertex
/// lies on a directed path from vertex 1 to vertex `n`.
pub fn passes_prune(edges: &[(usize, usize)], n: usize, max_edges: usize) -> bool {
    if edges.len() > max_edges {
        return false;
    }
    if n == 0 {
        return false;
    }
    let mut forward = vec![false; n];
    let mut backward = vec![false; n];
    forward[0] = true;
    backward[n - 1] = true;
    let mut sorted = edges.to_vec();
    sorted.sort_unstable_by_key(|&(i, j)| (j, i));
    for &(i, j) in &sorted {
        if i >= 1 && j <= n && i < j && forward[i - 1] {
            forward[j - 1] = true;
        }
    }
    sorted.sort_unstable_by_key(|&(i, j)| (std::cmp::Reverse(i), j));
    for &(i, j) in &sorted {
        if i >= 1 && j <= n && i < j && backward[j - 1] {
            backward[i - 1] = true;
        }
    }
    forward.iter().zip(&backward).all(|(&f, &b)| f && b)
}

/// Mask form of [`passes_prune`].
fn mask_passes_prune(n: usize, pairs: &[(usize, usize)], mask: u64, max_edges: usize) -> bool {
    if mask.count_ones() as usize > max_edges {
        return false;
    }
    let mut succ = [0u16; MAX_ENUMERATION_VERTICES];
    let mut pred = [0u16; MAX_ENUMERATION_VERTICES];
    let mut rest = mask;
    while rest != 0 {
        let (i, j) = pairs[rest.trailing_zeros() as usize];
        succ[i] |= 1 << j;
        pred[j] |= 1 << i;
        rest &= rest - 1;
    }
    let mut forward: u16 = 1;
    for (j, &p) in pred.iter().enumerate().take(n).skip(1) {
        if p & forward != 0 {
            forward |= 1 << j;
        }
    }
    let mut backward: u16 = 1 << (n - 1);
    for i in (0..n - 1).rev() {
        if succ[i] & backward != 0 {
            backward |= 1 << i;
        }
    }
    let all = (1u32 << n) - 1;
    u32::from(forward & backward) == all
}

fn mask_adjacency(n: usize, pairs: &[(usize, usize)], mask: u64) -> Adjacency {
    let arcs = (0..pairs.len())
        .filter(move |&t| mask >> t & 1 == 1)
        .map(|t| pairs[t]);
    Adjacency::from_arcs(n, arcs)
}

/// Surviving masks for `n` in increasing numeric order.
fn surviving_masks(n: usize, max_edges: usize) -> impl Iterator<Item = u64> {
    let pairs = pairs(n);
    let end: u64 = 1 << pairs.len();
    (0..end).filter(move |&mask| mask_passes_prune(n, &pairs, mask, max_edges))
}

/// A class representative: the first graph observed with its digest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalRecord {
    pub invariant: Digest,
    pub graph: ComputationalGraph,
}

/// Streams canonical records in generation order.
///
/// Batches of matrices may be hashed in parallel; the seen-set is always
/// updated in generation order, so sequential and parallel runs yield the
/// same stream.
pub struct Enumerator {
    config: EnumerationConfig,
    backend: Backend,
    parallel: bool,
    n: usize,
    pairs: Vec<(usize, usize)>,
    colorings: Vec<Vec<Color>>,
    next_mask: u64,
    seen: HashSet<Digest>,
    pending: VecDeque<CanonicalRecord>,
    per_n: BTreeMap<usize, usize>,
}

impl Enumerator {
    pub fn new(config: EnumerationConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let mut enumerator = Enumerator {
            config,
            backend: Backend::Md5,
            parallel: false,
            n: 0,
            pairs: Vec::new(),
            colorings: Vec::new(),
            next_mask: 0,
            seen: HashSet::new(),
            pending: VecDeque::new(),
            per_n: BTreeMap::new(),
        };
        enumerator.start_size(2);
        Ok(enumerator)
    }

    pub fn backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    /// Records yielded so far, per vertex count.
    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.per_n
    }

    fn start_size(&mut self, n: usize) {
        self.n = n;
        self.next_mask = 0;
        if n <= self.config.max_vertices {
            self.pairs = pairs(n);
            self.colorings = self.config.colorings(n);
        }
    }

    fn finished(&self) -> bool {
        self.n > self.config.max_vertices
    }

    fn fill(&mut self) {
        while self.pending.is_empty() && !self.finished() {
            let n = self.n;
            let end: u64 = 1 << self.pairs.len();
            let mut batch = Vec::with_capacity(BATCH_MASKS);
            let mut mask = self.next_mask;
            while mask < end && batch.len() < BATCH_MASKS {
                if mask_passes_prune(n, &self.pairs, mask, self.config.max_edges) {
                    batch.push(mask);
                }
                mask += 1;
            }
            self.next_mask = mask;

            let hash_mask = |&mask: &u64| -> Vec<Digest> {
                let adjacency = mask_adjacency(n, &self.pairs, mask);
                self.colorings
                    .iter()
                    .map(|colors| invariant_for(self.backend, &adjacency, colors))
                    .collect()
            };
            let digests: Vec<Vec<Digest>> = if self.parallel {
                batch.par_iter().map(hash_mask).collect()
            } else {
                batch.iter().map(hash_mask).collect()
            };

            let k = self.config.palette_size();
            for (mask, row) in batch.iter().zip(digests) {
                for (colors, digest) in self.colorings.iter().zip(row) {
                    if self.seen.insert(digest.clone()) {
                        *self.per_n.entry(n).or_insert(0) += 1;
                        self.pending.push_back(CanonicalRecord {
                            invariant: digest,
                            graph: ComputationalGraph::from_mask_unchecked(n, k, *mask, colors.clone()),
                        });
                    }
                }
            }

            if self.next_mask >= end {
                self.start_size(n + 1);
            }
        }
    }
}

impl Iterator for Enumerator {
    type Item = CanonicalRecord;

    fn next(&mut self) -> Option<CanonicalRecord> {
        self.fill();
        self.pending.pop_front()
    }
}

/// Sequential enumeration with the MD5 backend.
pub fn enumerate(config: EnumerationConfig) -> Result<Enumerator, ConfigError> {
    Enumerator::new(config)
}

/// Every valid `(matrix, coloring)` in generation order, duplicates included.
pub fn all_graphs(config: EnumerationConfig) -> Result<impl Iterator<Item = ComputationalGraph>, ConfigError> {
    config.validate()?;
    let k = config.palette_size();
    Ok((2..=config.max_vertices).flat_map(move |n| {
        let colorings = config.colorings(n);
        surviving_masks(n, config.max_edges).flat_map(move |mask| {
            colorings
                .clone()
                .into_iter()
                .map(move |colors| ComputationalGraph::from_mask_unchecked(n, k, mask, colors))
        })
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnumerationReport {
    /// Distinct digests per vertex count.
    pub per_n: BTreeMap<usize, usize>,
    pub total: usize,
    /// Graphs hashed, duplicates included.
    pub graphs_examined: usize,
    /// Duplicates confirmed isomorphic to their bucket's representative.
    pub duplicates_verified: usize,
    /// Members of each bucket, canonical representative first.
    pub buckets: Option<BTreeMap<Digest, Vec<ComputationalGraph>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FalseMerge {
    pub digest: Digest,
    pub canonical: ComputationalGraph,
    pub offending: ComputationalGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("false merge: digest {} is shared by non-isomorphic graphs", .0.digest)]
    FalseMerge(Box<FalseMerge>),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Buckets graphs by digest and checks, as each graph arrives, that a graph
/// landing in an existing bucket is isomorphic to that bucket's first member.
///
/// Stops at the first false merge in stream order. Members are kept in the
/// report only when `retain` is set; otherwise memory holds one graph per
/// bucket.
pub fn check_buckets(
    graphs: impl IntoIterator<Item = ComputationalGraph>,
    backend: Backend,
    retain: bool,
) -> Result<EnumerationReport, VerifyError> {
    let mut buckets: HashMap<Digest, Vec<ComputationalGraph>> = HashMap::new();
    let mut per_n = BTreeMap::new();
    let mut examined = 0;
    for graph in graphs {
        if graph.vertex_count() > ORACLE_MAX_VERTICES {
            return Err(OracleError::TooLarge {
                n: graph.vertex_count(),
                cap: ORACLE_MAX_VERTICES,
            }
            .into());
        }
        examined += 1;
        let digest = graph_invariant(&graph, backend);
        match buckets.get_mut(&digest) {
            Some(members) => {
                let canonical = &members[0];
                if !are_isomorphic(canonical, &graph)?.is_isomorphic() {
                    return Err(VerifyError::FalseMerge(Box::new(FalseMerge {
                        canonical: canonical.clone(),
                        offending: graph,
                        digest,
                    })));
                }
                if retain {
                    members.push(graph);
                }
            }
            None => {
                *per_n.entry(graph.vertex_count()).or_insert(0) += 1;
                buckets.insert(digest, vec![graph]);
            }
        }
    }
    Ok(EnumerationReport {
        total: buckets.len(),
        per_n,
        graphs_examined: examined,
        duplicates_verified: examined - buckets.len(),
        buckets: retain.then(|| buckets.into_iter().collect()),
    })
}

/// Re-runs the enumeration keeping duplicates and confirms every hash bucket
/// holds a single isomorphism class.
pub fn verify_buckets(config: EnumerationConfig, backend: Backend) -> Result<EnumerationReport, VerifyError> {
    if config.max_vertices > ORACLE_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n: config.max_vertices,
            cap: ORACLE_MAX_VERTICES,
        }
        .into());
    }
    check_buckets(all_graphs(config)?, backend, true)
}

/// Counts canonical records without retaining them.
pub fn count(config: EnumerationConfig, backend: Backend, parallel: bool) -> Result<EnumerationReport, ConfigError> {
    let mut enumerator = Enumerator::new(config)?.backend(backend).parallel(parallel);
    let mut examined = 0;
    for _ in enumerator.by_ref() {
        examined += 1;
    }
    let per_n = enumerator.counts().clone();
    Ok(EnumerationReport {
        total: per_n.values().sum(),
        per_n,
        graphs_examined: examined,
        duplicates_verified: 0,
        buckets: None,
    })
}
