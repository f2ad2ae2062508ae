//! Computational graph data model.
//!
//! A computational graph is a vertex-colored DAG on vertices `1..=n` whose
//! edges all point from a smaller to a larger index, and in which every
//! vertex lies on a directed path from vertex 1 to vertex `n`.
//!
//! All public interfaces are 1-indexed. Storage is 0-indexed.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use thiserror::Error;

/// Color index, in `1..=k`.
pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("the palette needs at least one color")]
    NoColors,
    #[error("expected {expected} vertex colors, got {actual}")]
    ColorCountMismatch { expected: usize, actual: usize },
    #[error("edge ({from}, {to}) references a vertex outside 1..={n}")]
    VertexOutOfRange { from: usize, to: usize, n: usize },
    #[error("edge order violation: edge ({from}, {to}) does not satisfy i < j")]
    EdgeOrderViolation { from: usize, to: usize },
    #[error("color out of range: vertex {vertex} has color {color}, palette is 1..={k}")]
    ColorOutOfRange { vertex: usize, color: Color, k: Color },
    #[error("path condition violation: vertex {vertex} does not lie on a directed path from vertex 1 to vertex {n}")]
    PathConditionViolation { vertex: usize, n: usize },
    #[error("cycle detected: the edges do not form a DAG")]
    CycleDetected,
    #[error("not a permutation of 1..={n}: {reason}")]
    NotBijection { n: usize, reason: String },
    #[error("permutation of {actual} vertices applied to a graph on {expected} vertices")]
    PermutationSizeMismatch { expected: usize, actual: usize },
    #[error("not a linear extension: edge ({from}, {to}) would map to ({mapped_from}, {mapped_to})")]
    NotLinearExtension {
        from: usize,
        to: usize,
        mapped_from: usize,
        mapped_to: usize,
    },
}

/// Number of pairs `(i, j)` with `i < j` on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Row-major position of the 0-indexed pair `(i, j)`, `i < j`:
/// `(0,1), (0,2), .., (0,n-1), (1,2), ..`.
#[inline]
pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Packed upper-triangular adjacency bits in row-major pair order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct UpperTriangle {
    words: Vec<u64>,
}

impl UpperTriangle {
    fn empty(n: usize) -> Self {
        UpperTriangle {
            words: vec![0; pair_count(n).div_ceil(64)],
        }
    }

    #[inline]
    fn get(&self, bit: usize) -> bool {
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// In- and out-neighbor lists, 0-indexed, each sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    pub(crate) successors: Vec<Vec<usize>>,
    pub(crate) predecessors: Vec<Vec<usize>>,
}

impl Adjacency {
    pub(crate) fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut successors = vec![Vec::new(); n];
        let mut predecessors = vec![Vec::new(); n];
        for (i, j) in arcs {
            successors[i].push(j);
            predecessors[j].push(i);
        }
        Adjacency {
            successors,
            predecessors,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.successors.len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.successors[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.predecessors[v].len()
    }
}

/// A bijection on `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    // 0-indexed images.
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its 1-indexed images: `images[i - 1] = p(i)`.
    pub fn new(images: Vec<usize>) -> Result<Self, GraphError> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for (i, &image) in images.iter().enumerate() {
            if image == 0 || image > n {
                return Err(GraphError::NotBijection {
                    n,
                    reason: format!("p({}) = {} is out of range", i + 1, image),
                });
            }
            if std::mem::replace(&mut seen[image - 1], true) {
                return Err(GraphError::NotBijection {
                    n,
                    reason: format!("{image} appears more than once"),
                });
            }
            zero_based.push(image - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.into_iter().eq(0..images.len())
        });
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `p(vertex)`, 1-indexed.
    pub fn apply(&self, vertex: usize) -> usize {
        self.images[vertex - 1] + 1
    }

    #[inline]
    pub(crate) fn image0(&self, vertex: usize) -> usize {
        self.images[vertex]
    }

    /// 1-indexed images in vertex order.
    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&v| v + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &image) in self.images.iter().enumerate() {
            inv[image] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation {
            images: other.images.iter().map(|&v| self.images[v]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for image in self.images() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{image}")?;
            first = false;
        }
        Ok(())
    }
}

/// A validated computational graph `(n, k, E, c)`.
///
/// Immutable after construction. `k` is the declared palette size; it is
/// part of equality but never part of the hash invariant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ComputationalGraph {
    n: usize,
    k: Color,
    adjacency: UpperTriangle,
    colors: Vec<Color>,
}

impl ComputationalGraph {
    /// Validates raw 1-indexed inputs. Duplicate edges are merged.
    pub fn new(
        n: usize,
        k: Color,
        edges: &[(usize, usize)],
        colors: Vec<Color>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        if k == 0 {
            return Err(GraphError::NoColors);
        }
        let mut adjacency = UpperTriangle::empty(n);
        for &(from, to) in edges {
            if from == 0 || to == 0 || from > n || to > n {
                return Err(GraphError::VertexOutOfRange { from, to, n });
            }
            if from >= to {
                return Err(GraphError::EdgeOrderViolation { from, to });
            }
            adjacency.set(pair_index(n, from - 1, to - 1));
        }
        if colors.len() != n {
            return Err(GraphError::ColorCountMismatch {
                expected: n,
                actual: colors.len(),
            });
        }
        if let Some((v, &color)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > k)
        {
            return Err(GraphError::ColorOutOfRange {
                vertex: v + 1,
                color,
                k,
            });
        }
        let graph = ComputationalGraph {
            n,
            k,
            adjacency,
            colors,
        };
        if let Some(v) = graph.first_off_path_vertex() {
            return Err(GraphError::PathConditionViolation { vertex: v + 1, n });
        }
        Ok(graph)
    }

    /// Builds a graph from a packed edge mask (bit `t` = `t`-th row-major pair)
    /// and colors that the caller has already checked.
    pub(crate) fn from_mask_unchecked(n: usize, k: Color, mask: u64, colors: Vec<Color>) -> Self {
        debug_assert!(pair_count(n) <= 64);
        let mut adjacency = UpperTriangle::empty(n);
        if !adjacency.words.is_empty() {
            adjacency.words[0] = mask;
        }
        ComputationalGraph {
            n,
            k,
            adjacency,
            colors,
        }
    }

    /// Accepts a DAG whose edges may point in any direction, relabels it by a
    /// Kahn topological sort (smallest original index first among ready
    /// vertices), then validates.
    pub fn normalize_dag(
        n: usize,
        k: Color,
        edges: &[(usize, usize)],
        colors: Vec<Color>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        for &(from, to) in edges {
            if from == 0 || to == 0 || from > n || to > n {
                return Err(GraphError::VertexOutOfRange { from, to, n });
            }
            if from == to {
                return Err(GraphError::CycleDetected);
            }
        }
        let mut arcs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        arcs.sort_unstable();
        arcs.dedup();
        let adjacency = Adjacency::from_arcs(n, arcs.iter().copied());

        let mut pending: Vec<usize> = (0..n).map(|v| adjacency.in_degree(v)).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| pending[v] == 0).map(Reverse).collect();
        let mut rank = vec![usize::MAX; n];
        let mut placed = 0;
        while let Some(Reverse(v)) = ready.pop() {
            rank[v] = placed;
            placed += 1;
            for &w in &adjacency.successors[v] {
                pending[w] -= 1;
                if pending[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        if placed != n {
            return Err(GraphError::CycleDetected);
        }

        if colors.len() != n {
            return Err(GraphError::ColorCountMismatch {
                expected: n,
                actual: colors.len(),
            });
        }
        let mut relabeled_colors = vec![0; n];
        for (v, &c) in colors.iter().enumerate() {
            relabeled_colors[rank[v]] = c;
        }
        let relabeled_edges: Vec<(usize, usize)> = arcs
            .iter()
            .map(|&(a, b)| (rank[a] + 1, rank[b] + 1))
            .collect();
        ComputationalGraph::new(n, k, &relabeled_edges, relabeled_colors)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Declared palette size.
    pub fn palette_size(&self) -> Color {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.count()
    }

    /// Color of a 1-indexed vertex.
    pub fn color(&self, vertex: usize) -> Color {
        self.colors[vertex - 1]
    }

    /// Colors in vertex order.
    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Whether the 1-indexed arc `from -> to` is present. Always false when
    /// `from >= to`.
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        from >= 1 && to <= self.n && from < to && self.has_arc0(from - 1, to - 1)
    }

    #[inline]
    pub(crate) fn has_arc0(&self, from: usize, to: usize) -> bool {
        from < to && self.adjacency.get(pair_index(self.n, from, to))
    }

    /// Edges as 1-indexed pairs in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_arc0(i, j))
            .map(|(i, j)| (i + 1, j + 1))
    }

    pub fn adjacency(&self) -> Adjacency {
        let n = self.n;
        let arcs = (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_arc0(i, j));
        Adjacency::from_arcs(n, arcs)
    }

    /// `v` such that `v` is unreachable from vertex 1 or cannot reach vertex
    /// `n`, smallest first (0-indexed).
    fn first_off_path_vertex(&self) -> Option<usize> {
        let n = self.n;
        let mut forward = vec![false; n];
        forward[0] = true;
        for j in 1..n {
            forward[j] = (0..j).any(|i| forward[i] && self.has_arc0(i, j));
        }
        let mut backward = vec![false; n];
        backward[n - 1] = true;
        for i in (0..n - 1).rev() {
            backward[i] = (i + 1..n).any(|j| backward[j] && self.has_arc0(i, j));
        }
        (0..n).find(|&v| !(forward[v] && backward[v]))
    }

    /// Relabels vertex `i` as `p(i)`. The result has edges `(p(i), p(j))` and
    /// colors `c ∘ p⁻¹`. Fails unless `p` maps every edge forward.
    pub fn permuted(&self, p: &Permutation) -> Result<Self, GraphError> {
        if p.len() != self.n {
            return Err(GraphError::PermutationSizeMismatch {
                expected: self.n,
                actual: p.len(),
            });
        }
        let mut adjacency = UpperTriangle::empty(self.n);
        for (from, to) in self.edges() {
            let (a, b) = (p.image0(from - 1), p.image0(to - 1));
            if a >= b {
                return Err(GraphError::NotLinearExtension {
                    from,
                    to,
                    mapped_from: a + 1,
                    mapped_to: b + 1,
                });
            }
            adjacency.set(pair_index(self.n, a, b));
        }
        let mut colors = vec![0; self.n];
        for (v, &c) in self.colors.iter().enumerate() {
            colors[p.image0(v)] = c;
        }
        Ok(ComputationalGraph {
            n: self.n,
            k: self.k,
            adjacency,
            colors,
        })
    }

    /// Every permutation accepted by [`ComputationalGraph::permuted`], in
    /// lexicographic order of the image vector.
    pub fn linear_extensions(&self) -> LinearExtensions {
        LinearExtensions::new(self.adjacency())
    }

    /// Same graph with a different declared palette size.
    pub fn with_palette_size(&self, k: Color) -> Result<Self, GraphError> {
        if k == 0 {
            return Err(GraphError::NoColors);
        }
        if let Some((v, &color)) = self.colors.iter().enumerate().find(|(_, &c)| c > k) {
            return Err(GraphError::ColorOutOfRange {
                vertex: v + 1,
                color,
                k,
            });
        }
        Ok(ComputationalGraph {
            k,
            ..self.clone()
        })
    }
}

/// Linear extensions of an arbitrary forward-edge DAG on `1..=n`, which
/// need not satisfy the path condition.
pub fn linear_extensions_of(n: usize, edges: &[(usize, usize)]) -> Result<LinearExtensions, GraphError> {
    for &(from, to) in edges {
        if from == 0 || to == 0 || from > n || to > n {
            return Err(GraphError::VertexOutOfRange { from, to, n });
        }
        if from >= to {
            return Err(GraphError::EdgeOrderViolation { from, to });
        }
    }
    Ok(LinearExtensions::new(Adjacency::from_arcs(
        n,
        edges.iter().map(|&(i, j)| (i - 1, j - 1)),
    )))
}

/// Lazy lexicographic generator of linear extensions.
///
/// Vertex `v` is assigned an image strictly greater than the images of all
/// its predecessors; vertices are assigned in index order, which makes the
/// output lexicographic.
#[derive(Debug, Clone)]
pub struct LinearExtensions {
    predecessors: Vec<Vec<usize>>,
    images: Vec<usize>,
    used: Vec<bool>,
    cursor: Vec<usize>,
    depth: usize,
    done: bool,
}

impl LinearExtensions {
    fn new(adjacency: Adjacency) -> Self {
        let n = adjacency.vertex_count();
        LinearExtensions {
            predecessors: adjacency.predecessors,
            images: vec![0; n],
            used: vec![false; n],
            cursor: vec![0; n],
            depth: 0,
            done: n == 0,
        }
    }
}

impl Iterator for LinearExtensions {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let n = self.images.len();
        loop {
            let d = self.depth;
            let lower = self.predecessors[d]
                .iter()
                .map(|&p| self.images[p] + 1)
                .max()
                .unwrap_or(0);
            let mut candidate = self.cursor[d].max(lower);
            while candidate < n && self.used[candidate] {
                candidate += 1;
            }
            if candidate < n {
                self.images[d] = candidate;
                self.cursor[d] = candidate + 1;
                if d + 1 == n {
                    return Some(Permutation::from_zero_based(self.images.clone()));
                }
                self.used[candidate] = true;
                self.depth = d + 1;
                self.cursor[d + 1] = 0;
            } else {
                if d == 0 {
                    self.done = true;
                    return None;
                }
                self.depth = d - 1;
                self.used[self.images[d - 1]] = false;
            }
        }
    }
}
