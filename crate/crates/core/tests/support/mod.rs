//! Brute-force helpers that share no code path with the library's
//! enumerator, oracle, or validator.

#![allow(dead_code)]

use compgraph::{Color, ComputationalGraph};

/// Path condition by explicit DFS from vertex 1 and reverse DFS from n.
pub fn path_condition_by_dfs(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut succ = vec![vec![]; n + 1];
    let mut pred = vec![vec![]; n + 1];
    for &(i, j) in edges {
        succ[i].push(j);
        pred[j].push(i);
    }
    let reach = |start: usize, next: &Vec<Vec<usize>>| {
        let mut seen = vec![false; n + 1];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &next[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let forward = reach(1, &succ);
    let backward = reach(n, &pred);
    (1..=n).all(|v| forward[v] && backward[v])
}

/// All permutations of `0..n` as image vectors.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Definition-level isomorphism: try every bijection.
pub fn naive_isomorphic(g1: &ComputationalGraph, g2: &ComputationalGraph) -> bool {
    let n = g1.vertex_count();
    if g2.vertex_count() != n || g1.edge_count() != g2.edge_count() {
        return false;
    }
    all_permutations(n).iter().any(|p| {
        (1..=n).all(|i| g1.color(i) == g2.color(p[i - 1] + 1))
            && (1..=n).all(|i| {
                (1..=n).all(|j| {
                    i == j || g1.has_edge(i, j) == g2.has_edge(p[i - 1] + 1, p[j - 1] + 1)
                })
            })
    })
}

/// Every edge subset of the complete upper-triangular graph on `n`.
pub fn all_edge_sets(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            pairs
                .iter()
                .enumerate()
                .filter(|(t, _)| mask >> t & 1 == 1)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect()
}

/// Every coloring of `n` vertices; with `reserved`, vertex 1 is `k+1`,
/// vertex n is `k+2`.
pub fn all_colorings(n: usize, k: Color, reserved: bool) -> Vec<Vec<Color>> {
    let mut out: Vec<Vec<Color>> = vec![vec![]];
    for v in 1..=n {
        let options: Vec<Color> = if reserved && v == 1 {
            vec![k + 1]
        } else if reserved && v == n {
            vec![k + 2]
        } else {
            (1..=k).collect()
        };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out
}

/// Every valid graph within the limits, duplicates included.
pub fn all_valid_graphs(max_n: usize, max_e: usize, k: Color, reserved: bool) -> Vec<ComputationalGraph> {
    let palette = if reserved { k + 2 } else { k };
    let mut out = Vec::new();
    for n in 2..=max_n {
        for edges in all_edge_sets(n) {
            if edges.len() > max_e || !path_condition_by_dfs(n, &edges) {
                continue;
            }
            for colors in all_colorings(n, k, reserved) {
                out.push(ComputationalGraph::new(n, palette, &edges, colors).unwrap());
            }
        }
    }
    out
}

/// Isomorphism classes by pairwise brute force, no hashing.
pub fn brute_force_classes(max_n: usize, max_e: usize, k: Color, reserved: bool) -> Vec<ComputationalGraph> {
    let mut reps: Vec<ComputationalGraph> = Vec::new();
    for g in all_valid_graphs(max_n, max_e, k, reserved) {
        if !reps.iter().any(|r| naive_isomorphic(r, &g)) {
            reps.push(g);
        }
    }
    reps
}
