use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::action::{ActingGroup, TreeAction};
use crate::graph::Graph;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseStep {
    /// Edge ids of the collapsed orbit.
    pub orbit: Vec<String>,
}

/// Collapses compressible edge orbits, smallest edge index first, until none
/// remain.
pub fn collapse_compressible(action: &TreeAction) -> Result<(TreeAction, Vec<CollapseStep>)> {
    collapse_compressible_by(action, |edges| edges[0])
}

/// As [`collapse_compressible`], with `pick` choosing among the currently
/// compressible edges (given in index order).
pub fn collapse_compressible_by(
    action: &TreeAction,
    pick: impl Fn(&[usize]) -> usize,
) -> Result<(TreeAction, Vec<CollapseStep>)> {
    let mut current = action.clone();
    let mut log = Vec::new();
    loop {
        let edges = current.compressible_edges()?;
        if edges.is_empty() {
            return Ok((current, log));
        }
        let e = pick(&edges);
        let orbit = current.edge_orbits().into_iter().find(|o| o.contains(&e)).unwrap();
        let next = current.collapse_edge_orbit(e)?;
        if current.is_exact() && !same_substabs(&current, &next) {
            return Err(Error::Verification(format!(
                "collapsing the orbit of {} changed the vertex substabilizers",
                current.tree.edge(e).id
            )));
        }
        log.push(CollapseStep { orbit: orbit.iter().map(|&f| current.tree.edge(f).id.clone()).collect() });
        current = next;
    }
}

/// Every vertex stabilizer of each tree lies in some vertex stabilizer of the
/// other.
fn same_substabs(a: &TreeAction, b: &TreeAction) -> bool {
    let stabs = |t: &TreeAction| -> Vec<BTreeSet<usize>> {
        (0..t.tree.vertex_count()).map(|v| t.vertex_stabilizer(v)).collect()
    };
    let (sa, sb) = (stabs(a), stabs(b));
    let covered = |x: &[BTreeSet<usize>], y: &[BTreeSet<usize>]| x.iter().all(|s| y.iter().any(|t| s.is_subset(t)));
    covered(&sa, &sb) && covered(&sb, &sa)
}

/// `|G\E| − |G\V| + Σ_n |G\E_n| tⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizePolynomial {
    pub constant: i64,
    pub terms: BTreeMap<usize, usize>,
}

impl fmt::Display for SizePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (&n, &k) in &self.terms {
            let coeff = if k == 1 { String::new() } else { k.to_string() };
            let power = if n == 1 { "t".to_string() } else { format!("t^{n}") };
            write!(f, " + {coeff}{power}")?;
        }
        Ok(())
    }
}

pub fn size_polynomial(action: &TreeAction) -> SizePolynomial {
    let edge_orbits = action.edge_orbits();
    let vertex_orbits = action.vertex_orbits();
    let mut terms = BTreeMap::new();
    for o in &edge_orbits {
        *terms.entry(action.edge_stabilizer_order(o[0])).or_insert(0) += 1;
    }
    SizePolynomial { constant: edge_orbits.len() as i64 - vertex_orbits.len() as i64, terms }
}

/// The tree blown into a vertex-orbit representative, with the action of its
/// stabilizer.
#[derive(Debug, Clone)]
pub struct Fiber {
    /// Base vertex this fiber replaces (the representative of its orbit).
    pub vertex: usize,
    pub tree: Graph,
    /// For each element of the base vertex stabilizer, its vertex and edge
    /// permutations of `tree`.
    pub vperm: HashMap<usize, Vec<usize>>,
    pub eperm: HashMap<usize, Vec<usize>>,
}

impl Fiber {
    /// A one-vertex fiber.
    pub fn point(action: &TreeAction, vertex: usize) -> Fiber {
        let tree = Graph::build([action.tree.vertex_id(vertex)], std::iter::empty()).unwrap();
        let stab = action.vertex_stabilizer(vertex);
        Fiber {
            vertex,
            tree,
            vperm: stab.iter().map(|&g| (g, vec![0])).collect(),
            eperm: stab.iter().map(|&g| (g, vec![])).collect(),
        }
    }
}

/// Which fiber vertex the end of a base edge attaches to: `(base edge, side,
/// fiber vertex)`, where side `false` is the source. Given for the edge-orbit
/// representatives; the rest follows by equivariance.
pub type Attachment = (usize, bool, usize);

/// `G`-equivariantly blows every base vertex up into its fiber tree and
/// reattaches the base edges. The base must be a finite-group action; one
/// fiber per vertex orbit (on its least vertex) and one attachment per edge
/// orbit end are required.
pub fn blow_up(base: &TreeAction, fibers: &[Fiber], attachments: &[Attachment]) -> Result<TreeAction> {
    let ActingGroup::Finite(group) = base.group() else {
        return Err(Error::Unsupported("blow-up needs a finite group".into()));
    };
    let n = group.order();
    let vorbits = base.vertex_orbits();
    let eorbits = base.edge_orbits();
    let mut fiber_of_orbit = vec![None; vorbits.len()];
    for (i, f) in fibers.iter().enumerate() {
        let o = vorbits.iter().position(|o| o.contains(&f.vertex)).unwrap();
        if o_rep(&vorbits[o]) != f.vertex {
            return Err(Error::InvalidAction(format!("fiber for {} is not on its orbit's least vertex", base.tree.vertex_id(f.vertex))));
        }
        let stab = base.vertex_stabilizer(f.vertex);
        if f.vperm.keys().copied().collect::<BTreeSet<_>>() != stab || f.eperm.keys().copied().collect::<BTreeSet<_>>() != stab {
            return Err(Error::InvalidAction(format!("fiber for {} must be acted on by its stabilizer", base.tree.vertex_id(f.vertex))));
        }
        if !f.tree.is_tree() {
            return Err(Error::NotATree);
        }
        fiber_of_orbit[o] = Some(i);
    }
    if fiber_of_orbit.iter().any(Option::is_none) {
        return Err(Error::InvalidAction("one fiber per vertex orbit required".into()));
    }

    // coset transversal: for each base vertex v, an element c_v with c_v r = v
    let mut carrier = vec![usize::MAX; base.tree.vertex_count()];
    for o in &vorbits {
        let r = o_rep(o);
        for g in 0..n {
            let v = base.vertex_image(g, r).unwrap();
            if carrier[v] == usize::MAX {
                carrier[v] = g;
            }
        }
    }
    let orbit_of = base.vertex_orbit_index();
    let fiber = |v: usize| &fibers[fiber_of_orbit[orbit_of[v]].unwrap()];

    // new vertices (v, x) and fiber edges (v, f)
    let mut tree = Graph::empty();
    let mut vid: HashMap<(usize, usize), usize> = HashMap::new();
    let mut fid: HashMap<(usize, usize), usize> = HashMap::new();
    for v in 0..base.tree.vertex_count() {
        let fb = fiber(v);
        for x in 0..fb.tree.vertex_count() {
            let id = tree.add_vertex(format!("{}:{}", base.tree.vertex_id(v), fb.tree.vertex_id(x)))?;
            vid.insert((v, x), id);
        }
    }
    let mut new_edge_kind = Vec::new();
    for v in 0..base.tree.vertex_count() {
        let fb = fiber(v);
        for (f, edge) in fb.tree.edges().iter().enumerate() {
            let id = tree.add_edge(format!("{}:{}", base.tree.vertex_id(v), edge.id), vid[&(v, edge.src)], vid[&(v, edge.dst)])?;
            fid.insert((v, f), id);
            new_edge_kind.push(None);
        }
    }

    // where an element sends fiber point (v, x): g c_v = c_{gv} h, h ∈ G_r
    let move_point = |g: usize, v: usize, x: usize| -> (usize, usize) {
        let gv = base.vertex_image(g, v).unwrap();
        let h = group.mul(group.inv(carrier[gv]), group.mul(g, carrier[v]));
        (gv, fiber(v).vperm[&h][x])
    };
    let move_fiber_edge = |g: usize, v: usize, f: usize| -> (usize, usize) {
        let gv = base.vertex_image(g, v).unwrap();
        let h = group.mul(group.inv(carrier[gv]), group.mul(g, carrier[v]));
        (gv, fiber(v).eperm[&h][f])
    };
    let mut attach_end: HashMap<(usize, bool), usize> = HashMap::new();
    for &(e, side, x) in attachments {
        attach_end.insert((e, side), x);
    }
    let mut ends: HashMap<(usize, bool), (usize, usize)> = HashMap::new();
    for o in &eorbits {
        let rep = o_rep(o);
        let stab = base.edge_stabilizer(rep);
        for side in [false, true] {
            let x_here = *attach_end.get(&(rep, side)).ok_or_else(|| {
                Error::InvalidAction(format!("no attachment for edge {}", base.tree.edge(rep).id))
            })?;
            let v = if side { base.tree.edge(rep).dst } else { base.tree.edge(rep).src };
            // x_here is a vertex of the fiber at v, in v's own coordinates
            if x_here >= fiber(v).tree.vertex_count() {
                return Err(Error::UnknownVertex(format!("attachment #{x_here}")));
            }
            for &g in &stab {
                if move_point(g, v, x_here) != (v, x_here) {
                    return Err(Error::Verification(format!(
                        "attachment of edge {} is not fixed by {}",
                        base.tree.edge(rep).id,
                        group.name(g)
                    )));
                }
            }
            for g in 0..n {
                let ge = base.edge_image(g, rep).unwrap();
                ends.entry((ge, side)).or_insert_with(|| move_point(g, v, x_here));
            }
        }
    }
    let mut base_edge_new = vec![0; base.tree.edge_count()];
    for e in 0..base.tree.edge_count() {
        let (s, d) = (ends[&(e, false)], ends[&(e, true)]);
        base_edge_new[e] = tree.add_edge(base.tree.edge(e).id.clone(), vid[&s], vid[&d])?;
        new_edge_kind.push(Some(e));
    }
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }

    let mut vmap = vec![vec![0; tree.vertex_count()]; n];
    let mut emap = vec![vec![0; tree.edge_count()]; n];
    for g in 0..n {
        for (&(v, x), &id) in &vid {
            vmap[g][id] = vid[&move_point(g, v, x)];
        }
        for (&(v, f), &id) in &fid {
            emap[g][id] = fid[&move_fiber_edge(g, v, f)];
        }
        for e in 0..base.tree.edge_count() {
            emap[g][base_edge_new[e]] = base_edge_new[base.edge_image(g, e).unwrap()];
        }
    }
    let result = TreeAction::from_element_maps(tree, group.clone(), base.generators().to_vec(), vmap, emap)?;

    // collapsing the fibers gives back the base
    let fiber_edges: Vec<usize> = fid.values().copied().collect();
    let (collapsed, _, kept) = result.tree.collapse_with_map(&fiber_edges)?;
    let edge_map: Vec<usize> = (0..base.tree.edge_count())
        .map(|e| kept.iter().position(|&k| k == base_edge_new[e]).unwrap())
        .collect();
    if !super::same_tree_along(&base.tree, &collapsed, &edge_map) {
        return Err(Error::Verification("collapsing the fibers does not recover the base".into()));
    }
    Ok(result)
}

fn o_rep(orbit: &[usize]) -> usize {
    orbit[0]
}
