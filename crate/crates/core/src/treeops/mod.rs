//! Trees from nested cut systems, and equivariant surgery on trees.

mod action;
mod surgery;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::cuts::{is_nested, nested_report_unchecked, Cut, Universe};
use crate::graph::Graph;
use crate::{Error, Result};

pub use action::{induce_action, induce_partial_action, ActingGroup, TreeAction};
pub use surgery::{blow_up, collapse_compressible, collapse_compressible_by, size_polynomial, Attachment, CollapseStep, Fiber, SizePolynomial};

/// A finite family of cuts with its verified properties.
#[derive(Debug, Clone)]
pub struct NestedSystem {
    universe: Universe,
    cuts: Vec<Cut>,
    names: Vec<String>,
    pub complement_stable: bool,
    pub nested_verified: bool,
    /// `v** ∩ E =_a w** ∩ E` for all `v, w`; automatic for finite `E`.
    pub finitely_separating: bool,
    pub excludes_empty: bool,
    pub excludes_full: bool,
    pub complement_free: bool,
    violations: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    ComplementStable,
    Nested,
    FinitelySeparating,
    ExcludesEmpty,
    ExcludesFull,
    ComplementFree,
}

impl NestedSystem {
    /// Computes every flag exhaustively. Duplicate cuts are dropped.
    pub fn verify(u: &Universe, cuts: Vec<Cut>) -> Result<NestedSystem> {
        let names = (0..cuts.len()).map(|i| format!("e{i}")).collect();
        Self::verify_named(u, cuts, names)
    }

    pub fn verify_named(u: &Universe, cuts: Vec<Cut>, names: Vec<String>) -> Result<NestedSystem> {
        if cuts.len() != names.len() {
            return Err(Error::LengthMismatch(cuts.len(), names.len()));
        }
        let probe = u.empty_cut();
        let mut seen = HashMap::new();
        let mut family = Vec::new();
        let mut kept_names = Vec::new();
        for (c, n) in cuts.into_iter().zip(names) {
            if !c.same_universe(&probe) {
                return Err(Error::UniverseMismatch);
            }
            if seen.insert(c.clone(), family.len()).is_none() {
                family.push(c);
                kept_names.push(n);
            }
        }
        let mut violations = vec![String::new(); 6];
        let name = |i: usize| kept_names[i].as_str();

        let missing_complement = family.iter().position(|c| !seen.contains_key(&c.complement()));
        if let Some(i) = missing_complement {
            violations[0] = format!("complement of {} missing", name(i));
        }
        let crossing = (0..family.len())
            .flat_map(|i| (i + 1..family.len()).map(move |j| (i, j)))
            .find(|&(i, j)| !is_nested(&family[i], &family[j]));
        if let Some((i, j)) = crossing {
            let r = nested_report_unchecked(u, &family[i], &family[j]);
            violations[1] = format!("{} and {} cross (corner sizes {:?})", name(i), name(j), r.sizes);
        }
        if let Some(i) = family.iter().position(Cut::is_empty) {
            violations[3] = format!("{} is empty", name(i));
        }
        if let Some(i) = family.iter().position(Cut::is_full) {
            violations[4] = format!("{} is the whole vertex set", name(i));
        }
        let pair = family.iter().position(|c| seen.contains_key(&c.complement()));
        if let Some(i) = pair {
            violations[5] = format!("{} and its complement both present", name(i));
        }
        Ok(NestedSystem {
            universe: u.clone(),
            complement_stable: missing_complement.is_none(),
            nested_verified: crossing.is_none(),
            finitely_separating: true,
            excludes_empty: violations[3].is_empty(),
            excludes_full: violations[4].is_empty(),
            complement_free: pair.is_none(),
            cuts: family,
            names: kept_names,
            violations,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn index_of(&self, c: &Cut) -> Option<usize> {
        self.cuts.iter().position(|d| d == c)
    }

    pub fn flag(&self, f: Flag) -> bool {
        match f {
            Flag::ComplementStable => self.complement_stable,
            Flag::Nested => self.nested_verified,
            Flag::FinitelySeparating => self.finitely_separating,
            Flag::ExcludesEmpty => self.excludes_empty,
            Flag::ExcludesFull => self.excludes_full,
            Flag::ComplementFree => self.complement_free,
        }
    }

    /// Errors with the first failing flag and its witness.
    pub fn require(&self, flags: &[Flag]) -> Result<()> {
        for &f in flags {
            if !self.flag(f) {
                return Err(Error::Verification(self.violations[f as usize].clone()));
            }
        }
        Ok(())
    }

    /// `{ e ∈ E | v ∈ e }`.
    pub fn containing(&self, v: usize) -> BTreeSet<usize> {
        (0..self.cuts.len()).filter(|&i| self.cuts[i].contains(v)).collect()
    }

    fn complement_index(&self, i: usize) -> Option<usize> {
        self.index_of(&self.cuts[i].complement())
    }

    /// `ι e = { d | d ⊇ e or d ⊋ e^∁ }`.
    pub fn iota(&self, e: usize) -> BTreeSet<usize> {
        let ce = self.cuts[e].complement();
        (0..self.cuts.len())
            .filter(|&d| self.cuts[e].is_subset(&self.cuts[d]) || ce.is_proper_subset(&self.cuts[d]))
            .collect()
    }

    /// `τ′e = { d | d ⊋ e or d ⊇ e^∁ }`.
    pub fn tau_prime(&self, e: usize) -> BTreeSet<usize> {
        let ce = self.cuts[e].complement();
        (0..self.cuts.len())
            .filter(|&d| self.cuts[e].is_proper_subset(&self.cuts[d]) || ce.is_subset(&self.cuts[d]))
            .collect()
    }

    /// `[e, f] = { d ∈ E | e ⊆ d ⊆ f }` for arbitrary cuts `e`, `f`.
    pub fn interval(&self, e: &Cut, f: &Cut) -> Vec<usize> {
        (0..self.cuts.len()).filter(|&d| e.is_subset(&self.cuts[d]) && self.cuts[d].is_subset(f)).collect()
    }

    /// `e ≺ f`: `[e, f[ = {e}`.
    pub fn prec(&self, e: &Cut, f: &Cut) -> bool {
        if !e.is_proper_subset(f) {
            return false;
        }
        let half_open: Vec<usize> = self.interval(e, f).into_iter().filter(|&d| &self.cuts[d] != f).collect();
        half_open.len() == 1 && &self.cuts[half_open[0]] == e
    }

    fn label_name(&self, label: &BTreeSet<usize>) -> String {
        let parts: Vec<&str> = label.iter().map(|&i| self.names[i].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TreeKind {
    T,
    U,
}

/// A tree whose edges are the cuts of a system and whose vertices are sets
/// of cuts.
#[derive(Debug, Clone)]
pub struct StructureTree {
    pub kind: TreeKind,
    pub tree: Graph,
    /// Tree edge `i` is the cut `edge_cut[i]` of the system.
    pub edge_cut: Vec<usize>,
    pub labels: Vec<BTreeSet<usize>>,
}

#[derive(Serialize)]
struct TreeJson<'a> {
    kind: TreeKind,
    vertices: Vec<VertexJson<'a>>,
    edges: Vec<EdgeJson<'a>>,
}

#[derive(Serialize)]
struct VertexJson<'a> {
    id: &'a str,
    label: Vec<&'a str>,
}

#[derive(Serialize)]
struct EdgeJson<'a> {
    id: &'a str,
    src: &'a str,
    dst: &'a str,
    members: Vec<&'a str>,
}

impl StructureTree {
    fn from_labels(sys: &NestedSystem, kind: TreeKind, ends: Vec<(BTreeSet<usize>, BTreeSet<usize>)>) -> Result<Self> {
        let mut labels: Vec<BTreeSet<usize>> = Vec::new();
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut intern = |l: BTreeSet<usize>, labels: &mut Vec<BTreeSet<usize>>| {
            *index.entry(l.clone()).or_insert_with(|| {
                labels.push(l);
                labels.len() - 1
            })
        };
        let mut edges = Vec::new();
        for (i, (a, b)) in ends.into_iter().enumerate() {
            let s = intern(a, &mut labels);
            let d = intern(b, &mut labels);
            edges.push((i, s, d));
        }
        if sys.is_empty() {
            intern(BTreeSet::new(), &mut labels);
        }
        let mut tree = Graph::empty();
        for l in &labels {
            tree.add_vertex(sys.label_name(l))?;
        }
        for &(i, s, d) in &edges {
            tree.add_edge(sys.names[i].clone(), s, d)?;
        }
        if !tree.is_tree() {
            return Err(Error::NotATree);
        }
        Ok(StructureTree { kind, tree, edge_cut: (0..sys.len()).collect(), labels })
    }

    pub fn vertex_of_label(&self, label: &BTreeSet<usize>) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// DOT with vertices in label order and edges in cut order.
    pub fn to_dot(&self) -> String {
        self.tree.to_dot("structure_tree")
    }

    pub fn to_json(&self, sys: &NestedSystem) -> serde_json::Value {
        let g = &self.tree;
        let doc = TreeJson {
            kind: self.kind,
            vertices: (0..g.vertex_count())
                .map(|v| VertexJson {
                    id: g.vertex_id(v),
                    label: self.labels[v].iter().map(|&i| sys.names[i].as_str()).collect(),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeJson {
                    id: &e.id,
                    src: g.vertex_id(e.src),
                    dst: g.vertex_id(e.dst),
                    members: sys.cuts[self.edge_cut[i]]
                        .members()
                        .map(|v| sys.universe.graph().vertex_id(v))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).unwrap()
    }
}

/// `T(E)`: edge `e` runs from `ι e` to `τ e = {e, e^∁}`.
pub fn build_t(sys: &NestedSystem) -> Result<StructureTree> {
    sys.require(&[Flag::ComplementStable, Flag::Nested, Flag::FinitelySeparating, Flag::ExcludesEmpty])?;
    let ends = (0..sys.len())
        .map(|e| (sys.iota(e), BTreeSet::from([e, sys.complement_index(e).unwrap()])))
        .collect();
    StructureTree::from_labels(sys, TreeKind::T, ends)
}

/// `U(E)`: edge `e` runs from `ι e` to `τ′e`.
pub fn build_u(sys: &NestedSystem) -> Result<StructureTree> {
    sys.require(&[Flag::Nested, Flag::FinitelySeparating, Flag::ExcludesEmpty, Flag::ExcludesFull, Flag::ComplementFree])?;
    let ends = (0..sys.len()).map(|e| (sys.iota(e), sys.tau_prime(e))).collect();
    StructureTree::from_labels(sys, TreeKind::U, ends)
}

/// The tree vertex of universe vertex `v`: the vertex labelled `ι e` for a
/// `⊆`-minimal `e` containing `v`, checked against `v** ∩ E`.
pub fn vertex_embed(sys: &NestedSystem, t: &StructureTree, v: usize) -> Result<usize> {
    if sys.is_empty() {
        return Ok(0);
    }
    let containing = sys.containing(v);
    let minimal = containing
        .iter()
        .copied()
        .find(|&e| containing.iter().all(|&d| !sys.cuts[d].is_proper_subset(&sys.cuts[e])))
        .ok_or_else(|| Error::Verification(format!("no cut contains vertex {}", sys.universe.graph().vertex_id(v))))?;
    let label = sys.iota(minimal);
    if label != containing {
        return Err(Error::Verification(format!(
            "vertex {} is in {} but the minimal cut has label {}",
            sys.universe.graph().vertex_id(v),
            sys.label_name(&containing),
            sys.label_name(&label)
        )));
    }
    t.vertex_of_label(&label).ok_or(Error::NotATree)
}

/// `e**`: the vertices of the component of `t - {e}` containing `ι e`.
pub fn edge_double_dual(t: &Graph, e: usize) -> Result<Vec<usize>> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    let parts = t.components(&[e])?;
    Ok(parts.blocks[parts.block_of[t.edge(e).src]].clone())
}

/// `EE(t) = { e** }` as cuts of `t`'s own vertex set, named by edge id.
pub fn tree_cut_system(t: &Graph) -> Result<NestedSystem> {
    let u = Universe::finite(t.clone());
    let cuts = (0..t.edge_count())
        .map(|e| u.cut(edge_double_dual(t, e)?))
        .collect::<Result<Vec<_>>>()?;
    NestedSystem::verify_named(&u, cuts, t.edges().iter().map(|e| e.id.clone()).collect())
}

/// Whether two graphs are isomorphic trees by a map sending `a`'s edge `i`
/// to `b`'s edge `edge_map[i]` with matching orientation.
pub fn same_tree_along(a: &Graph, b: &Graph, edge_map: &[usize]) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() || edge_map.len() != a.edge_count() {
        return false;
    }
    let mut vmap = vec![usize::MAX; a.vertex_count()];
    let mut used = vec![false; b.vertex_count()];
    for (i, e) in a.edges().iter().enumerate() {
        let f = b.edge(edge_map[i]);
        for (x, y) in [(e.src, f.src), (e.dst, f.dst)] {
            if vmap[x] == usize::MAX {
                if used[y] {
                    return false;
                }
                vmap[x] = y;
                used[y] = true;
            } else if vmap[x] != y {
                return false;
            }
        }
    }
    // isolated vertices only in the one-vertex tree
    a.edge_count() > 0 || a.vertex_count() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe(vs: &[&str], es: &[(&str, &str, &str)]) -> Universe {
        Universe::finite(
            Graph::build(
                vs.iter().copied(),
                es.iter().map(|(i, s, d)| (i.to_string(), s.to_string(), d.to_string())),
            )
            .unwrap(),
        )
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn verify_flags() {
        let u = universe(&["u", "v"], &[("e", "u", "v")]);
        let a = u.cut_by_ids(&["u"]).unwrap();
        let sys = NestedSystem::verify(&u, vec![a.clone(), a.complement()]).unwrap();
        assert!(sys.complement_stable && sys.nested_verified && sys.excludes_empty && sys.excludes_full);
        let bad = NestedSystem::verify(&u, vec![u.empty_cut(), u.full_cut()]).unwrap();
        assert!(!bad.excludes_empty);
        assert!(bad.require(&[Flag::ExcludesEmpty]).unwrap_err().to_string().contains("e0 is empty"));

        let c4 = universe(
            &["v1", "v2", "v3", "v4"],
            &[("a", "v1", "v2"), ("b", "v2", "v3"), ("c", "v3", "v4"), ("d", "v4", "v1")],
        );
        let x = c4.cut_by_ids(&["v1", "v2"]).unwrap();
        let y = c4.cut_by_ids(&["v2", "v3"]).unwrap();
        let sys = NestedSystem::verify(&c4, vec![x, y]).unwrap();
        assert!(!sys.nested_verified);
        assert!(sys.require(&[Flag::Nested]).unwrap_err().to_string().contains("[1, 1, 1, 1]"));
    }

    #[test]
    fn t_on_k2() {
        let u = universe(&["u", "v"], &[("e", "u", "v")]);
        let a = u.cut_by_ids(&["u"]).unwrap();
        let sys = NestedSystem::verify_named(&u, vec![a.clone(), a.complement()], vec!["A".into(), "Ac".into()]).unwrap();
        let t = build_t(&sys).unwrap();
        assert_eq!(t.tree.vertex_count(), 3);
        assert_eq!(t.labels, vec![set(&[0]), set(&[0, 1]), set(&[1])]);
        assert_eq!(t.tree.vertex_ids(), &["{A}", "{A,Ac}", "{Ac}"]);
        assert_eq!(vertex_embed(&sys, &t, 0).unwrap(), 0);
        assert_eq!(vertex_embed(&sys, &t, 1).unwrap(), 2);
        assert!(t.to_dot().contains("v0 -> v1 [label=\"A\"]"));
    }

    #[test]
    fn t_of_empty_system() {
        let u = universe(&["u"], &[]);
        let sys = NestedSystem::verify(&u, vec![]).unwrap();
        let t = build_t(&sys).unwrap();
        assert_eq!(t.tree.vertex_count(), 1);
        assert_eq!(t.tree.edge_count(), 0);
        assert_eq!(vertex_embed(&sys, &t, 0).unwrap(), 0);
    }

    #[test]
    fn u_on_chain() {
        let u = universe(&["1", "2", "3", "4"], &[]);
        let chain = vec![
            u.cut_by_ids(&["1"]).unwrap(),
            u.cut_by_ids(&["1", "2"]).unwrap(),
            u.cut_by_ids(&["1", "2", "3"]).unwrap(),
        ];
        let sys = NestedSystem::verify(&u, chain.clone()).unwrap();
        let t = build_u(&sys).unwrap();
        assert_eq!(t.labels, vec![set(&[0, 1, 2]), set(&[1, 2]), set(&[2]), set(&[])]);
        assert!(t.tree.is_tree());
        assert!(sys.prec(&chain[0], &chain[1]));
        assert!(!sys.prec(&chain[0], &chain[2]));
        assert!(!sys.prec(&chain[0], &chain[0]));
        assert_eq!(sys.interval(&chain[0], &chain[0]), vec![0]);
        assert_eq!(sys.interval(&chain[0], &chain[2]), vec![0, 1, 2]);
        let with_pair = NestedSystem::verify(&u, vec![chain[0].clone(), chain[0].complement()]).unwrap();
        assert!(build_u(&with_pair).is_err());
        let single = NestedSystem::verify(&u, vec![chain[1].clone()]).unwrap();
        assert_eq!(build_u(&single).unwrap().tree.edge_count(), 1);
    }

    #[test]
    fn double_duals() {
        let path = Graph::build(["a", "b", "c"], [("ab".into(), "a".into(), "b".into()), ("bc".into(), "b".into(), "c".into())]).unwrap();
        assert_eq!(edge_double_dual(&path, 0).unwrap(), vec![0]);
        let star = Graph::build(
            ["c", "x", "y", "z"],
            ["x", "y", "z"].map(|l| (format!("{l}c"), l.to_string(), "c".to_string())),
        )
        .unwrap();
        assert_eq!(edge_double_dual(&star, 1).unwrap(), vec![2]);
        let sys = tree_cut_system(&path).unwrap();
        let t = build_u(&sys).unwrap();
        assert!(same_tree_along(&path, &t.tree, &t.edge_cut));
    }
}
