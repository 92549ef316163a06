//! Finite directed multigraphs with incidence maps.
//!
//! Edges are first-class: parallel edges and loops are allowed, and every
//! edge contributes two darts (its forward and inverse orientation). Vertex
//! and edge ids live in separate namespaces. Insertion order is preserved so
//! that everything downstream is reproducible.

use std::collections::{HashMap, VecDeque};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

/// One orientation of an edge, seen from its source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dart {
    pub edge: usize,
    pub to: usize,
    pub dir: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vindex: HashMap<String, usize>,
    eindex: HashMap<String, usize>,
    darts: Vec<Vec<Dart>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// A path `v_0, e_1, v_1, ..., e_n, v_n` with oriented steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub start: usize,
    pub steps: Vec<(usize, Direction)>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { start: v, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The implied vertex sequence.
    pub fn vertices(&self, g: &Graph) -> Vec<usize> {
        let mut out = vec![self.start];
        for &(e, dir) in &self.steps {
            let edge = &g.edges[e];
            out.push(match dir {
                Direction::Forward => edge.dst,
                Direction::Inverse => edge.src,
            });
        }
        out
    }

    /// Checks the incidence condition at every step.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let mut at = self.start;
        for &(e, dir) in &self.steps {
            let Some(edge) = g.edges.get(e) else { return false };
            let (from, to) = match dir {
                Direction::Forward => (edge.src, edge.dst),
                Direction::Inverse => (edge.dst, edge.src),
            };
            if from != at {
                return false;
            }
            at = to;
        }
        true
    }

    /// No step immediately undoes the previous one.
    pub fn is_reduced(&self) -> bool {
        self.steps.windows(2).all(|w| !(w[0].0 == w[1].0 && w[0].1 != w[1].1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Blocks in order of their smallest vertex.
    pub blocks: Vec<Vec<usize>>,
    /// `block_of[v]` is the index of the block containing `v`.
    pub block_of: Vec<usize>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

impl Graph {
    /// Validates ids and endpoints and builds the graph.
    pub fn build<V, E>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut g = Graph::empty();
        for v in vertices {
            g.add_vertex(v.into())?;
        }
        for (id, src, dst) in edges {
            let s = *g.vindex.get(&src).ok_or_else(|| Error::DanglingEndpoint(src.clone()))?;
            let d = *g.vindex.get(&dst).ok_or_else(|| Error::DanglingEndpoint(dst.clone()))?;
            g.add_edge(id, s, d)?;
        }
        Ok(g)
    }

    pub fn empty() -> Graph {
        Graph {
            vertices: Vec::new(),
            edges: Vec::new(),
            vindex: HashMap::new(),
            eindex: HashMap::new(),
            darts: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, id: String) -> Result<usize> {
        if self.vindex.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        let v = self.vertices.len();
        self.vindex.insert(id.clone(), v);
        self.vertices.push(id);
        self.darts.push(Vec::new());
        Ok(v)
    }

    pub fn add_edge(&mut self, id: String, src: usize, dst: usize) -> Result<usize> {
        if self.eindex.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        for v in [src, dst] {
            if v >= self.vertices.len() {
                return Err(Error::DanglingEndpoint(format!("#{v}")));
            }
        }
        let e = self.edges.len();
        self.eindex.insert(id.clone(), e);
        self.edges.push(Edge { id, src, dst });
        // A loop gets both darts at the same vertex, so it counts twice toward valence.
        self.darts[src].push(Dart { edge: e, to: dst, dir: Direction::Forward });
        self.darts[dst].push(Dart { edge: e, to: src, dir: Direction::Inverse });
        Ok(e)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vindex.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.eindex.get(id).copied().ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Outgoing darts of `v`, forward orientations first in edge order.
    pub fn darts(&self, v: usize) -> &[Dart] {
        &self.darts[v]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.darts[v].len()
    }

    /// Connected components after deleting `removed` edges.
    pub fn components(&self, removed: &[usize]) -> Result<ComponentPartition> {
        let mut gone = vec![false; self.edges.len()];
        for &e in removed {
            *gone.get_mut(e).ok_or_else(|| Error::UnknownEdge(format!("#{e}")))? = true;
        }
        Ok(self.components_masked(&gone))
    }

    pub(crate) fn components_masked(&self, removed: &[bool]) -> ComponentPartition {
        let n = self.vertices.len();
        let mut block_of = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if block_of[root] != usize::MAX {
                continue;
            }
            let b = blocks.len();
            let mut block = vec![root];
            block_of[root] = b;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for d in &self.darts[v] {
                    if !removed[d.edge] && block_of[d.to] == usize::MAX {
                        block_of[d.to] = b;
                        block.push(d.to);
                        queue.push_back(d.to);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        ComponentPartition { blocks, block_of }
    }

    /// `X / E'`: vertices are the components of the graph keeping only the
    /// collapsed edges, edges are the edges not collapsed.
    pub fn collapse(&self, collapsed: &[usize]) -> Result<Graph> {
        Ok(self.collapse_with_map(collapsed)?.0)
    }

    /// Like [`Graph::collapse`], also returning the old-vertex to new-vertex
    /// map and, for each new edge, the old edge index.
    pub fn collapse_with_map(&self, collapsed: &[usize]) -> Result<(Graph, Vec<usize>, Vec<usize>)> {
        let mut keep = vec![true; self.edges.len()];
        for &e in collapsed {
            *keep.get_mut(e).ok_or_else(|| Error::UnknownEdge(format!("#{e}")))? = false;
        }
        // Components of the graph with the kept edges removed.
        let parts = self.components_masked(&keep);
        let mut out = Graph::empty();
        for block in &parts.blocks {
            let name = block.iter().map(|&v| self.vertices[v].as_str()).collect::<Vec<_>>().join("+");
            out.add_vertex(name)?;
        }
        let mut edge_map = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if keep[e] {
                out.add_edge(edge.id.clone(), parts.block_of[edge.src], parts.block_of[edge.dst])?;
                edge_map.push(e);
            }
        }
        Ok((out, parts.block_of, edge_map))
    }

    /// DOT rendering in vertex and edge order.
    pub fn to_dot(&self, name: &str) -> String {
        use std::fmt::Write as _;
        let mut out = format!("digraph {name} {{\n");
        for (v, id) in self.vertices.iter().enumerate() {
            writeln!(out, "  v{v} [label={id:?}];").unwrap();
        }
        for e in &self.edges {
            writeln!(out, "  v{} -> v{} [label={:?}];", e.src, e.dst, e.id).unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn is_forest(&self) -> bool {
        let parts = self.components_masked(&vec![false; self.edges.len()]);
        // A finite graph is a forest iff |E| = |V| - #components; loops and
        // parallel edges violate that count.
        self.edges.len() + parts.len() == self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        !self.vertices.is_empty() && self.edges.len() + 1 == self.vertices.len() && self.is_forest()
    }

    /// Breadth-first vertex distances from `v`, ignoring orientation.
    pub fn distances_from(&self, v: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertices.len()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for d in &self.darts[u] {
                if dist[d.to].is_none() {
                    dist[d.to] = Some(du + 1);
                    queue.push_back(d.to);
                }
            }
        }
        dist
    }

    /// The unique reduced path from `v` to `w` in a tree.
    pub fn reduced_path(&self, v: usize, w: usize) -> Result<Path> {
        if !self.is_tree() {
            return Err(Error::NotATree);
        }
        for x in [v, w] {
            if x >= self.vertices.len() {
                return Err(Error::UnknownVertex(format!("#{x}")));
            }
        }
        let mut parent: Vec<Option<(usize, usize, Direction)>> = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[v] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            if u == w {
                break;
            }
            for d in &self.darts[u] {
                if !seen[d.to] {
                    seen[d.to] = true;
                    parent[d.to] = Some((u, d.edge, d.dir));
                    queue.push_back(d.to);
                }
            }
        }
        let mut steps = Vec::new();
        let mut at = w;
        while let Some((p, e, dir)) = parent[at] {
            steps.push((e, dir));
            at = p;
        }
        steps.reverse();
        Ok(Path { start: v, steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(vs: &[&str], es: &[(&str, &str, &str)]) -> Graph {
        Graph::build(
            vs.iter().copied(),
            es.iter().map(|(i, s, d)| (i.to_string(), s.to_string(), d.to_string())),
        )
        .unwrap()
    }

    fn path3() -> Graph {
        g(&["a", "b", "c"], &[("ab", "a", "b"), ("bc", "b", "c")])
    }

    #[test]
    fn build_validates() {
        let k2 = g(&["a", "b"], &[("e", "a", "b")]);
        assert_eq!((k2.vertex_count(), k2.edge_count()), (2, 1));
        let lp = g(&["a"], &[("e", "a", "a")]);
        assert_eq!(lp.valence(0), 2);
        let err = Graph::build(["a", "b"], [("e".into(), "a".into(), "c".into())]).unwrap_err();
        assert_eq!(err.to_string(), "dangling endpoint c");
        assert!(matches!(Graph::build(["a", "a"], []), Err(Error::DuplicateId(_))));
        // vertex and edge ids may coincide
        assert!(Graph::build(["a", "b"], [("a".into(), "a".into(), "b".into())]).is_ok());
    }

    #[test]
    fn components_examples() {
        let p = path3();
        let parts = p.components(&[0]).unwrap();
        assert_eq!(parts.blocks, vec![vec![0], vec![1, 2]]);
        assert_eq!(p.components(&[]).unwrap().len(), 1);
        let c4 = g(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "1")],
        );
        let parts = c4.components(&[0, 2]).unwrap();
        assert_eq!(parts.blocks, vec![vec![0, 3], vec![1, 2]]);
        assert!(matches!(p.components(&[7]), Err(Error::UnknownEdge(_))));
    }

    #[test]
    fn collapse_examples() {
        let p = path3();
        let all = p.collapse(&[0, 1]).unwrap();
        assert_eq!((all.vertex_count(), all.edge_count()), (1, 0));
        let none = p.collapse(&[]).unwrap();
        assert_eq!((none.vertex_count(), none.edge_count()), (3, 2));
        let (q, map, _) = p.collapse_with_map(&[0]).unwrap();
        assert_eq!((q.vertex_count(), q.edge_count()), (2, 1));
        assert_eq!(map[0], map[1]);
        assert_eq!(q.edge(0).id, "bc");
        assert_eq!(q.edge(0).src, map[1]);
    }

    #[test]
    fn tree_predicates() {
        assert!(g(&["a"], &[]).is_tree());
        assert!(!g(&["a"], &[("e", "a", "a")]).is_forest());
        assert!(path3().is_tree());
        assert!(g(&["a", "b", "c"], &[("ab", "a", "b")]).is_forest());
        assert!(!g(&["a", "b", "c"], &[("ab", "a", "b")]).is_tree());
        assert!(!g(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]).is_forest());
    }

    #[test]
    fn reduced_paths() {
        let p = path3();
        assert!(p.reduced_path(1, 1).unwrap().is_empty());
        let r = p.reduced_path(0, 2).unwrap();
        assert_eq!(r.steps, vec![(0, Direction::Forward), (1, Direction::Forward)]);
        assert_eq!(r.vertices(&p), vec![0, 1, 2]);
        let back = p.reduced_path(2, 0).unwrap();
        assert_eq!(back.steps, vec![(1, Direction::Inverse), (0, Direction::Inverse)]);
        assert!(back.is_valid(&p) && back.is_reduced());
        let star = g(&["m", "a", "b"], &[("ma", "m", "a"), ("mb", "m", "b")]);
        let r = star.reduced_path(1, 2).unwrap();
        assert_eq!(r.vertices(&star), vec![1, 0, 2]);
        let lp = g(&["a"], &[("e", "a", "a")]);
        assert!(matches!(lp.reduced_path(0, 0), Err(Error::NotATree)));
    }
}
