//! Non-isomorphic graph pairs that the hash invariant cannot tell apart.
//!
//! Each pair has a source vertex feeding every vertex of layer A, a sink fed
//! by every vertex of layer B, and a bipartite A -> B middle in which all A
//! vertices share one degree and all B vertices share another. Refinement
//! never splits a layer, so both graphs end with identical digests.

use thiserror::Error;

use crate::graph::{Color, ComputationalGraph, GraphError};
use crate::hash::{graph_invariant, Backend, Digest};
use crate::oracle::{are_isomorphic, IsoWitness, ORACLE_MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversarialError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("construction degenerate for degree {degree} and size {size}: the two middle graphs coincide or cannot be built")]
    ConstructionDegenerate { degree: usize, size: usize },
    #[error("digests differ under {backend}; the pair is not adversarial")]
    DigestsDiffer { backend: Backend },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Evidence that the two graphs of a pair are not isomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonIsoCertificate {
    /// The exhaustive oracle found no isomorphism.
    Oracle,
    /// Sorted connected-component sizes of the two middle layers differ.
    ComponentSizes { left: Vec<usize>, right: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversarialPair {
    pub left: ComputationalGraph,
    pub right: ComputationalGraph,
    /// Shared MD5 invariant.
    pub digest: Digest,
    pub certificate: NonIsoCertificate,
}

/// Layout: source `1`, layer A `2..=m+1`, layer B `m+2..=2m+1`, sink `2m+2`.
/// `middle` holds 0-indexed `(a, b)` layer positions.
fn layered(
    size: usize,
    middle: &[(usize, usize)],
    color_a: Color,
    color_b: Color,
    color_io: Color,
) -> Result<ComputationalGraph, GraphError> {
    let n = 2 * size + 2;
    let sink = n;
    let a = |u: usize| u + 2;
    let b = |v: usize| size + 2 + v;
    let mut edges: Vec<(usize, usize)> = (0..size).map(|u| (1, a(u))).collect();
    edges.extend(middle.iter().map(|&(u, v)| (a(u), b(v))));
    edges.extend((0..size).map(|v| (b(v), sink)));

    let mut colors = vec![color_io];
    colors.extend(std::iter::repeat_n(color_a, size));
    colors.extend(std::iter::repeat_n(color_b, size));
    colors.push(color_io);
    let k = color_a.max(color_b).max(color_io);
    ComputationalGraph::new(n, k, &edges, colors)
}

/// Circulant block: A vertex `u` -> B vertices `u, u+1, .., u+degree-1`
/// modulo `block`, all shifted by `offset`.
fn circulant(offset: usize, block: usize, degree: usize) -> Vec<(usize, usize)> {
    (0..block)
        .flat_map(|u| (0..degree).map(move |s| (offset + u, offset + (u + s) % block)))
        .collect()
}

/// Sorted sizes of the connected components of the middle layers,
/// ignoring edge direction.
pub fn middle_component_sizes(graph: &ComputationalGraph) -> Vec<usize> {
    let n = graph.vertex_count();
    if n < 3 {
        return Vec::new();
    }
    // Middle vertices are 2..=n-1, 0-indexed 1..n-1.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, j) in graph.edges() {
        let (i, j) = (i - 1, j - 1);
        if i == 0 || j == n - 1 {
            continue;
        }
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
        }
    }
    let mut sizes = vec![0; n];
    for v in 1..n - 1 {
        let root = find(&mut parent, v);
        sizes[root] += 1;
    }
    let mut sizes: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    sizes.sort_unstable();
    sizes
}

fn certify(left: ComputationalGraph, right: ComputationalGraph, degree: usize, size: usize) -> Result<AdversarialPair, AdversarialError> {
    let certificate = if left.vertex_count() <= ORACLE_MAX_VERTICES {
        match are_isomorphic(&left, &right).expect("within oracle cap") {
            IsoWitness::NonIsomorphic => NonIsoCertificate::Oracle,
            IsoWitness::Isomorphic(_) => {
                return Err(AdversarialError::ConstructionDegenerate { degree, size })
            }
        }
    } else {
        let (l, r) = (middle_component_sizes(&left), middle_component_sizes(&right));
        if l == r {
            return Err(AdversarialError::ConstructionDegenerate { degree, size });
        }
        NonIsoCertificate::ComponentSizes { left: l, right: r }
    };
    let digest = graph_invariant(&left, Backend::Md5);
    if graph_invariant(&right, Backend::Md5) != digest {
        return Err(AdversarialError::DigestsDiffer {
            backend: Backend::Md5,
        });
    }
    Ok(AdversarialPair {
        left,
        right,
        digest,
        certificate,
    })
}

fn io_color(color_a: Color, color_b: Color) -> Color {
    (1..).find(|c| *c != color_a && *c != color_b).unwrap()
}

/// The 10-vertex, 16-edge counterexample: an 8-cycle middle on the left,
/// two 4-cycles on the right. Vertices 2..=5 take `color_a`, 6..=9 take
/// `color_b`, and vertices 1 and 10 take the smallest other color.
pub fn figure2_pair(color_a: Color, color_b: Color) -> Result<AdversarialPair, AdversarialError> {
    if color_a == 0 || color_b == 0 {
        return Err(AdversarialError::InvalidParameters("colors start at 1".into()));
    }
    let io = io_color(color_a, color_b);
    // Written out edge by edge rather than through `circulant`.
    let left_middle = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 0)];
    let right_middle = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)];
    let left = layered(4, &left_middle, color_a, color_b, io)?;
    let right = layered(4, &right_middle, color_a, color_b, io)?;
    certify(left, right, 2, 4)
}

/// Degree-`degree` bipartite pair with `size` vertices per layer: a single
/// circulant on the left, two circulant blocks of sizes `⌊size/2⌋` and
/// `⌈size/2⌉` on the right. Layer A is color 1, layer B color 2, source and
/// sink color 3.
pub fn bipartite_adversarial_pair(degree: usize, size: usize) -> Result<AdversarialPair, AdversarialError> {
    if degree < 2 {
        return Err(AdversarialError::InvalidParameters(format!(
            "degree must be at least 2, got {degree}"
        )));
    }
    let small = size / 2;
    if small < degree {
        return Err(AdversarialError::ConstructionDegenerate { degree, size });
    }
    let left_middle = circulant(0, size, degree);
    let mut right_middle = circulant(0, small, degree);
    right_middle.extend(circulant(small, size - small, degree));
    let left = layered(size, &left_middle, 1, 2, 3)?;
    let right = layered(size, &right_middle, 1, 2, 3)?;
    certify(left, right, degree, size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::refinement_trace;

    #[test]
    fn figure2_shape() {
        let pair = figure2_pair(1, 2).unwrap();
        for g in [&pair.left, &pair.right] {
            assert_eq!(g.vertex_count(), 10);
            assert_eq!(g.edge_count(), 16);
            assert_eq!(g.colors(), &[3, 1, 1, 1, 1, 2, 2, 2, 2, 3]);
        }
        assert!(pair.left.has_edge(5, 6));
        assert!(pair.right.has_edge(3, 6));
        assert_eq!(pair.certificate, NonIsoCertificate::Oracle);
    }

    #[test]
    fn figure2_same_colors_still_collides() {
        let pair = figure2_pair(1, 1).unwrap();
        assert_eq!(pair.left.color(1), 2);
        assert_eq!(
            graph_invariant(&pair.left, Backend::Concat),
            graph_invariant(&pair.right, Backend::Concat)
        );
    }

    #[test]
    fn layers_stay_equivalent() {
        let pair = figure2_pair(1, 2).unwrap();
        for g in [&pair.left, &pair.right] {
            for round in refinement_trace(g, Backend::Md5) {
                assert!(round[1..5].iter().all(|d| *d == round[1]));
                assert!(round[5..9].iter().all(|d| *d == round[5]));
            }
        }
    }

    #[test]
    fn degree_two_size_four_is_figure2() {
        let family = bipartite_adversarial_pair(2, 4).unwrap();
        let figure = figure2_pair(1, 2).unwrap();
        assert!(are_isomorphic(&family.left, &figure.left).unwrap().is_isomorphic());
        assert!(are_isomorphic(&family.right, &figure.right).unwrap().is_isomorphic());
    }

    #[test]
    fn degenerate_parameters() {
        assert_eq!(
            bipartite_adversarial_pair(2, 3).unwrap_err(),
            AdversarialError::ConstructionDegenerate { degree: 2, size: 3 }
        );
        assert!(matches!(
            bipartite_adversarial_pair(1, 6),
            Err(AdversarialError::InvalidParameters(_))
        ));
        assert!(matches!(
            bipartite_adversarial_pair(3, 5),
            Err(AdversarialError::ConstructionDegenerate { .. })
        ));
    }

    #[test]
    fn size_six_uses_component_certificate() {
        let pair = bipartite_adversarial_pair(2, 6).unwrap();
        assert_eq!(pair.left.vertex_count(), 14);
        assert_eq!(
            pair.certificate,
            NonIsoCertificate::ComponentSizes {
                left: vec![12],
                right: vec![6, 6]
            }
        );
        assert_eq!(graph_invariant(&pair.right, Backend::Md5), pair.digest);
    }

    #[test]
    fn odd_size_splits_unevenly() {
        let pair = bipartite_adversarial_pair(2, 5).unwrap();
        assert_eq!(pair.certificate, NonIsoCertificate::Oracle);
        assert_eq!(middle_component_sizes(&pair.right), vec![4, 6]);
    }
}
