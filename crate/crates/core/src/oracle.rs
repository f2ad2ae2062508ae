//! Exact isomorphism by exhaustive search over bijections.

use thiserror::Error;

use crate::graph::{ComputationalGraph, Permutation};

/// Largest vertex count the oracle accepts.
pub const ORACLE_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("isomorphism oracle is limited to {cap} vertices, got {n}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoWitness {
    /// `p` maps the first graph onto the second.
    Isomorphic(Permutation),
    NonIsomorphic,
}

impl IsoWitness {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoWitness::Isomorphic(_))
    }

    pub fn permutation(&self) -> Option<&Permutation> {
        match self {
            IsoWitness::Isomorphic(p) => Some(p),
            IsoWitness::NonIsomorphic => None,
        }
    }
}

/// Checks that `p` preserves adjacency in both directions and colors.
pub fn verify_witness(g1: &ComputationalGraph, g2: &ComputationalGraph, p: &Permutation) -> bool {
    let n = g1.vertex_count();
    if g2.vertex_count() != n || p.len() != n {
        return false;
    }
    let colors_preserved = (0..n).all(|i| g1.colors()[i] == g2.colors()[p.image0(i)]);
    colors_preserved
        && (0..n).all(|i| {
            (0..n).all(|j| i == j || g1.has_arc0(i, j) == g2.has_arc0(p.image0(i), p.image0(j)))
        })
}

/// Searches bijections in lexicographic order of their image vectors and
/// returns the first one satisfying both isomorphism conditions.
///
/// Candidates for `p(i)` are restricted to vertices with the same color,
/// in-degree and out-degree, and each partial assignment must already agree
/// on every arc among the assigned vertices.
pub fn are_isomorphic(
    g1: &ComputationalGraph,
    g2: &ComputationalGraph,
) -> Result<IsoWitness, OracleError> {
    let n = g1.vertex_count();
    if g2.vertex_count() != n {
        return Ok(IsoWitness::NonIsomorphic);
    }
    if n > ORACLE_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            cap: ORACLE_MAX_VERTICES,
        });
    }
    if g1.edge_count() != g2.edge_count() {
        return Ok(IsoWitness::NonIsomorphic);
    }

    let adj1 = g1.adjacency();
    let adj2 = g2.adjacency();
    let signature = |adj: &crate::graph::Adjacency, g: &ComputationalGraph, v: usize| {
        (g.colors()[v], adj.in_degree(v), adj.out_degree(v))
    };
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let want = signature(&adj1, g1, i);
            (0..n).filter(|&j| signature(&adj2, g2, j) == want).collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(IsoWitness::NonIsomorphic);
    }

    let mut search = Search {
        g1,
        g2,
        candidates: &candidates,
        images: vec![usize::MAX; n],
        used: vec![false; n],
    };
    Ok(match search.run(0) {
        Some(p) => IsoWitness::Isomorphic(p),
        None => IsoWitness::NonIsomorphic,
    })
}

struct Search<'a> {
    g1: &'a ComputationalGraph,
    g2: &'a ComputationalGraph,
    candidates: &'a [Vec<usize>],
    images: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self, vertex: usize, image: usize) -> bool {
        (0..vertex).all(|prev| {
            let mapped = self.images[prev];
            self.g1.has_arc0(prev, vertex) == self.g2.has_arc0(mapped, image)
                && self.g1.has_arc0(vertex, prev) == self.g2.has_arc0(image, mapped)
        })
    }

    fn run(&mut self, vertex: usize) -> Option<Permutation> {
        let n = self.images.len();
        if vertex == n {
            let p = Permutation::from_zero_based(self.images.clone());
            return verify_witness(self.g1, self.g2, &p).then_some(p);
        }
        for &image in &self.candidates[vertex] {
            if self.used[image] || !self.consistent(vertex, image) {
                continue;
            }
            self.images[vertex] = image;
            self.used[image] = true;
            let found = self.run(vertex + 1);
            self.used[image] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }
}
