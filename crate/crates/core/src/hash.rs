//! Iterative, isomorphism-invariant hashing of computational graphs.
//!
//! Every vertex starts from a digest of `(out-degree, in-degree, color)`.
//! Each round replaces a vertex digest with a digest of its sorted
//! out-neighbor digests, its sorted in-neighbor digests, and its own digest.
//! After `n` rounds the graph digest is taken over the sorted vertex digests.
//!
//! Byte layout of every digest input (all integers little-endian `u64`):
//!
//! ```text
//! init   = out_degree ‖ in_degree ‖ color
//! round  = |succ| ‖ sorted succ digests ‖ |pred| ‖ sorted pred digests ‖ own digest
//! final  = n ‖ sorted vertex digests
//! ```
//!
//! With [`Backend::Md5`] each input is reduced to a 16-byte MD5 digest. With
//! [`Backend::Concat`] the input bytes are the digest. Concatenated digests
//! stay injective because every level is a prefix-free code, at the price of
//! sizes that grow roughly like `(degree + 1)^n`.

use std::fmt;
use std::str::FromStr;

use md5::{Digest as _, Md5};
use serde::{Deserialize, Serialize};

use crate::graph::{Adjacency, Color, ComputationalGraph};

/// Lexicographically ordered digest bytes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digest(Vec<u8>);

impl Digest {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Digest(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(text: &str) -> Result<Self, hex::FromHexError> {
        hex::decode(text).map(Digest)
    }
}

impl AsRef<[u8]> for Digest {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() <= 32 {
            write!(f, "Digest({})", self.to_hex())
        } else {
            write!(
                f,
                "Digest({}.. {} bytes)",
                hex::encode(&self.0[..16]),
                self.0.len()
            )
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Fixed 16-byte MD5 digests.
    #[default]
    Md5,
    /// Identity on the encoded bytes; collision-free, exponentially large.
    Concat,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Md5 => "md5",
            Backend::Concat => "concat",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md5" => Ok(Backend::Md5),
            "concat" => Ok(Backend::Concat),
            other => Err(format!("unknown backend {other:?} (expected md5 or concat)")),
        }
    }
}

/// Turns an encoded input into a digest.
pub(crate) trait Encoder {
    type Out: AsRef<[u8]> + Ord + Clone;

    /// Consumes the encoded input left in `bytes`.
    fn finish(&self, bytes: &mut Vec<u8>) -> Self::Out;

    fn into_digest(out: Self::Out) -> Digest;
}

pub(crate) struct Md5Encoder;

impl Encoder for Md5Encoder {
    type Out = [u8; 16];

    #[inline]
    fn finish(&self, bytes: &mut Vec<u8>) -> [u8; 16] {
        Md5::digest(bytes.as_slice()).into()
    }

    fn into_digest(out: [u8; 16]) -> Digest {
        Digest(out.to_vec())
    }
}

pub(crate) struct ConcatEncoder;

impl Encoder for ConcatEncoder {
    type Out = Vec<u8>;

    #[inline]
    fn finish(&self, bytes: &mut Vec<u8>) -> Vec<u8> {
        std::mem::take(bytes)
    }

    fn into_digest(out: Vec<u8>) -> Digest {
        Digest(out)
    }
}

#[inline]
fn put_u64(buf: &mut Vec<u8>, value: u64) {
    buf.extend_from_slice(&value.to_le_bytes());
}

fn encode_init(buf: &mut Vec<u8>, out_degree: usize, in_degree: usize, color: Color) {
    buf.clear();
    put_u64(buf, out_degree as u64);
    put_u64(buf, in_degree as u64);
    put_u64(buf, u64::from(color));
}

fn encode_sorted<T: AsRef<[u8]> + Ord>(buf: &mut Vec<u8>, items: &mut Vec<&T>) {
    items.sort_unstable();
    put_u64(buf, items.len() as u64);
    for item in items.iter() {
        buf.extend_from_slice(item.as_ref());
    }
}

fn init_digests<E: Encoder>(encoder: &E, adjacency: &Adjacency, colors: &[Color]) -> Vec<E::Out> {
    let mut buf = Vec::with_capacity(24);
    (0..adjacency.vertex_count())
        .map(|v| {
            encode_init(&mut buf, adjacency.out_degree(v), adjacency.in_degree(v), colors[v]);
            encoder.finish(&mut buf)
        })
        .collect()
}

fn refine<E: Encoder, T: AsRef<[u8]> + Ord>(
    encoder: &E,
    adjacency: &Adjacency,
    current: &[T],
) -> Vec<E::Out> {
    let mut buf = Vec::new();
    let mut gathered: Vec<&T> = Vec::new();
    (0..adjacency.vertex_count())
        .map(|v| {
            buf.clear();
            let len = |ws: &[usize]| ws.iter().map(|&w| current[w].as_ref().len()).sum::<usize>();
            buf.reserve(16 + len(&adjacency.successors[v]) + len(&adjacency.predecessors[v]) + current[v].as_ref().len());
            gathered.clear();
            gathered.extend(adjacency.successors[v].iter().map(|&w| &current[w]));
            encode_sorted(&mut buf, &mut gathered);
            gathered.clear();
            gathered.extend(adjacency.predecessors[v].iter().map(|&w| &current[w]));
            encode_sorted(&mut buf, &mut gathered);
            buf.extend_from_slice(current[v].as_ref());
            encoder.finish(&mut buf)
        })
        .collect()
}

fn finalize<E: Encoder, T: AsRef<[u8]> + Ord>(encoder: &E, current: &[T]) -> E::Out {
    let mut sorted: Vec<&T> = current.iter().collect();
    sorted.sort_unstable();
    let mut buf = Vec::with_capacity(8 + sorted.iter().map(|d| d.as_ref().len()).sum::<usize>());
    put_u64(&mut buf, current.len() as u64);
    for d in sorted {
        buf.extend_from_slice(d.as_ref());
    }
    encoder.finish(&mut buf)
}

/// Full invariant over a prepared adjacency, `n` refinement rounds.
pub(crate) fn invariant_with<E: Encoder>(
    encoder: &E,
    adjacency: &Adjacency,
    colors: &[Color],
) -> E::Out {
    let mut current = init_digests(encoder, adjacency, colors);
    for _ in 0..adjacency.vertex_count() {
        current = refine(encoder, adjacency, &current);
    }
    finalize(encoder, &current)
}

pub(crate) fn invariant_for(backend: Backend, adjacency: &Adjacency, colors: &[Color]) -> Digest {
    match backend {
        Backend::Md5 => Md5Encoder::into_digest(invariant_with(&Md5Encoder, adjacency, colors)),
        Backend::Concat => ConcatEncoder::into_digest(invariant_with(&ConcatEncoder, adjacency, colors)),
    }
}

/// Initial digest of a vertex with the given degrees and color.
pub fn vertex_init_digest(out_degree: usize, in_degree: usize, color: Color, backend: Backend) -> Digest {
    let mut buf = Vec::with_capacity(24);
    encode_init(&mut buf, out_degree, in_degree, color);
    match backend {
        Backend::Md5 => Md5Encoder::into_digest(Md5Encoder.finish(&mut buf)),
        Backend::Concat => ConcatEncoder::into_digest(ConcatEncoder.finish(&mut buf)),
    }
}

/// One refinement round. Every vertex reads only the pre-round digests.
///
/// Panics if `digests.len()` differs from the vertex count.
pub fn refine_round(graph: &ComputationalGraph, digests: &[Digest], backend: Backend) -> Vec<Digest> {
    assert_eq!(
        digests.len(),
        graph.vertex_count(),
        "refine_round needs one digest per vertex"
    );
    let adjacency = graph.adjacency();
    match backend {
        Backend::Md5 => refine(&Md5Encoder, &adjacency, digests)
            .into_iter()
            .map(Md5Encoder::into_digest)
            .collect(),
        Backend::Concat => refine(&ConcatEncoder, &adjacency, digests)
            .into_iter()
            .map(ConcatEncoder::into_digest)
            .collect(),
    }
}

/// The graph invariant: equal for isomorphic graphs.
pub fn graph_invariant(graph: &ComputationalGraph, backend: Backend) -> Digest {
    invariant_for(backend, &graph.adjacency(), graph.colors())
}

/// Per-vertex digests after initialization and after each of the `n` rounds
/// (`n + 1` lists).
pub fn refinement_trace(graph: &ComputationalGraph, backend: Backend) -> Vec<Vec<Digest>> {
    fn run<E: Encoder>(encoder: &E, adjacency: &Adjacency, colors: &[Color]) -> Vec<Vec<Digest>> {
        let mut trace = Vec::with_capacity(adjacency.vertex_count() + 1);
        trace.push(init_digests(encoder, adjacency, colors));
        for _ in 0..adjacency.vertex_count() {
            let next = refine(encoder, adjacency, trace.last().unwrap());
            trace.push(next);
        }
        trace
            .into_iter()
            .map(|round| round.into_iter().map(E::into_digest).collect())
            .collect()
    }
    let adjacency = graph.adjacency();
    match backend {
        Backend::Md5 => run(&Md5Encoder, &adjacency, graph.colors()),
        Backend::Concat => run(&ConcatEncoder, &adjacency, graph.colors()),
    }
}

/// Graph digest from a list of final per-vertex digests.
pub fn digest_of_vertex_digests(digests: &[Digest], backend: Backend) -> Digest {
    match backend {
        Backend::Md5 => Md5Encoder::into_digest(finalize(&Md5Encoder, digests)),
        Backend::Concat => ConcatEncoder::into_digest(finalize(&ConcatEncoder, digests)),
    }
}
