//! Hash invariant, exhaustive enumeration, and exact isomorphism checking for
//! computational graphs: vertex-colored DAGs on `1..=n` whose edges point from
//! smaller to larger indices and whose every vertex lies on a path from
//! vertex 1 to vertex `n`.
//!
//! ```
//! use compgraph::{graph_invariant, Backend, ComputationalGraph};
//!
//! let a = ComputationalGraph::new(4, 2, &[(1, 2), (1, 3), (2, 4), (3, 4)], vec![1, 2, 1, 1]).unwrap();
//! let b = ComputationalGraph::new(4, 2, &[(1, 2), (1, 3), (2, 4), (3, 4)], vec![1, 1, 2, 1]).unwrap();
//! assert_eq!(graph_invariant(&a, Backend::Md5), graph_invariant(&b, Backend::Md5));
//! ```

pub mod adversarial;
pub mod enumerate;
pub mod graph;
pub mod hash;
pub mod io;
pub mod oracle;

pub use adversarial::{bipartite_adversarial_pair, figure2_pair, AdversarialError, AdversarialPair, NonIsoCertificate};
pub use enumerate::{
    all_graphs, check_buckets, decode_bitvector, enumerate, passes_prune, verify_buckets, CanonicalRecord,
    EnumerationConfig, EnumerationReport, Enumerator, FalseMerge, VerifyError,
};
pub use graph::{linear_extensions_of, Color, ComputationalGraph, GraphError, LinearExtensions, Permutation};
pub use hash::{graph_invariant, refine_round, refinement_trace, vertex_init_digest, Backend, Digest};
pub use oracle::{are_isomorphic, verify_witness, IsoWitness, OracleError, ORACLE_MAX_VERTICES};
