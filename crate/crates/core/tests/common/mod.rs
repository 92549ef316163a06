#![allow(dead_code)]

use proptest::collection::vec;
use proptest::prelude::*;

use cutforge::cuts::{Cut, Universe};
use cutforge::graph::Graph;

pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::build(
        (0..n).map(|v| format!("v{v}")),
        edges.iter().enumerate().map(|(i, &(a, b))| (format!("e{i}"), format!("v{a}"), format!("v{b}"))),
    )
    .unwrap()
}

/// Multigraphs with `2..=max_n` vertices and up to `max_m` edges, loops
/// included.
pub fn graphs(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(move |n| (Just(n), vec((0..n, 0..n), 0..=max_m)))
        .prop_map(|(n, es)| build_graph(n, &es))
}

/// Connected multigraphs: a random spanning tree plus extra edges.
pub fn connected_graphs(max_n: usize, max_extra: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(move |n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
            (Just(n), parents, vec((0..n, 0..n), 0..=max_extra))
        })
        .prop_map(|(n, parents, extra)| {
            let mut es: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (i + 1, p)).collect();
            es.extend(extra);
            build_graph(n, &es)
        })
}

/// A graph with `k` membership masks over its vertices.
pub fn with_masks(g: impl Strategy<Value = Graph>, k: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Graph, Vec<Vec<bool>>)> {
    (g, k).prop_flat_map(|(g, k)| {
        let n = g.vertex_count();
        (Just(g), vec(vec(any::<bool>(), n), k))
    })
}

pub fn cut(u: &Universe, mask: &[bool]) -> Cut {
    u.cut(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).unwrap()
}

pub fn edge_subset(g: &Graph, mask: &[bool]) -> Vec<usize> {
    (0..g.edge_count()).filter(|&e| mask.get(e).copied().unwrap_or(false)).collect()
}
