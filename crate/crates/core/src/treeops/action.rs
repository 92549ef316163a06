use std::collections::{BTreeSet, HashMap};

use super::{NestedSystem, StructureTree};
use crate::cuts::translate_cut;
use crate::graph::Graph;
use crate::group::{BallView, FiniteGroup};
use crate::{Certificate, Error, Result};

/// The group acting on a tree.
#[derive(Debug, Clone)]
pub enum ActingGroup {
    /// Every element of a finite group acts by a permutation.
    Finite(FiniteGroup),
    /// Elements of a word ball act by partial maps, defined where the image
    /// is visible in the underlying Cayley ball.
    Ball { names: Vec<String>, radius: usize },
}

/// A group acting on a tree by maps commuting with `ι` and `τ`.
#[derive(Debug, Clone)]
pub struct TreeAction {
    pub tree: Graph,
    group: ActingGroup,
    gens: Vec<usize>,
    vmap: Vec<Vec<Option<usize>>>,
    emap: Vec<Vec<Option<usize>>>,
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let next = p[y];
        p[y] = r;
        y = next;
    }
    r
}

fn orbit_blocks(n: usize, maps: &[Vec<Option<usize>>]) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    for m in maps {
        for (x, y) in m.iter().enumerate() {
            if let Some(y) = *y {
                let (a, b) = (find(&mut p, x), find(&mut p, y));
                if a != b {
                    p[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut id = HashMap::new();
    for x in 0..n {
        let r = find(&mut p, x);
        let k = *id.entry(r).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[k].push(x);
    }
    blocks
}

impl TreeAction {
    /// A finite group acting through generator permutations of the tree's
    /// vertices and edges. All element permutations are derived, and the
    /// group relations and incidences are checked.
    pub fn from_generators(
        tree: Graph,
        group: FiniteGroup,
        gens: Vec<usize>,
        gen_vperm: Vec<Vec<usize>>,
        gen_eperm: Vec<Vec<usize>>,
    ) -> Result<TreeAction> {
        let n = group.order();
        let (nv, ne) = (tree.vertex_count(), tree.edge_count());
        if gen_vperm.len() != gens.len() || gen_eperm.len() != gens.len() {
            return Err(Error::InvalidAction("one permutation pair per generator expected".into()));
        }
        for (vp, ep) in gen_vperm.iter().zip(&gen_eperm) {
            if !is_perm(vp, nv) || !is_perm(ep, ne) {
                return Err(Error::InvalidAction("generator maps must be permutations".into()));
            }
        }
        let mut vmap: Vec<Option<Vec<usize>>> = vec![None; n];
        let mut emap: Vec<Option<Vec<usize>>> = vec![None; n];
        let id = group.identity();
        vmap[id] = Some((0..nv).collect());
        emap[id] = Some((0..ne).collect());
        let mut queue = std::collections::VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for (i, &s) in gens.iter().enumerate() {
                let h = group.mul(g, s);
                let vg = vmap[g].as_ref().unwrap();
                let eg = emap[g].as_ref().unwrap();
                let vh: Vec<usize> = gen_vperm[i].iter().map(|&x| vg[x]).collect();
                let eh: Vec<usize> = gen_eperm[i].iter().map(|&x| eg[x]).collect();
                match &vmap[h] {
                    None => {
                        vmap[h] = Some(vh);
                        emap[h] = Some(eh);
                        queue.push_back(h);
                    }
                    Some(old) => {
                        if *old != vh || emap[h].as_ref() != Some(&eh) {
                            return Err(Error::InvalidAction(format!(
                                "relations fail: two words for {} act differently",
                                group.name(h)
                            )));
                        }
                    }
                }
            }
        }
        if vmap.iter().any(Option::is_none) {
            return Err(Error::InvalidAction("generators do not reach every group element".into()));
        }
        let wrap = |m: Vec<Option<Vec<usize>>>| -> Vec<Vec<Option<usize>>> {
            m.into_iter().map(|p| p.unwrap().into_iter().map(Some).collect()).collect()
        };
        let action = TreeAction { tree, group: ActingGroup::Finite(group), gens, vmap: wrap(vmap), emap: wrap(emap) };
        action.check_incidences()?;
        Ok(action)
    }

    /// A finite group action given by the maps of every element.
    pub fn from_element_maps(
        tree: Graph,
        group: FiniteGroup,
        gens: Vec<usize>,
        vmap: Vec<Vec<usize>>,
        emap: Vec<Vec<usize>>,
    ) -> Result<TreeAction> {
        let wrap = |m: Vec<Vec<usize>>| -> Vec<Vec<Option<usize>>> {
            m.into_iter().map(|p| p.into_iter().map(Some).collect()).collect()
        };
        let action = TreeAction { tree, group: ActingGroup::Finite(group), gens, vmap: wrap(vmap), emap: wrap(emap) };
        action.check_incidences()?;
        action.check_homomorphism()?;
        Ok(action)
    }

    fn check_incidences(&self) -> Result<()> {
        for (g, em) in self.emap.iter().enumerate() {
            for (e, img) in em.iter().enumerate() {
                let Some(f) = *img else { continue };
                let (a, b) = (self.tree.edge(e), self.tree.edge(f));
                for (x, y) in [(a.src, b.src), (a.dst, b.dst)] {
                    if let Some(gx) = self.vmap[g][x] {
                        if gx != y {
                            return Err(Error::InvalidAction(format!(
                                "element {} does not commute with incidences at edge {}",
                                self.element_name(g),
                                a.id
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_homomorphism(&self) -> Result<()> {
        let ActingGroup::Finite(group) = &self.group else { return Ok(()) };
        for a in 0..group.order() {
            for b in 0..group.order() {
                let ab = group.mul(a, b);
                let ok_v = (0..self.tree.vertex_count())
                    .all(|x| self.vmap[b][x].and_then(|y| self.vmap[a][y]) == self.vmap[ab][x]);
                let ok_e = (0..self.tree.edge_count())
                    .all(|x| self.emap[b][x].and_then(|y| self.emap[a][y]) == self.emap[ab][x]);
                if !ok_v || !ok_e {
                    return Err(Error::InvalidAction(format!(
                        "({})({}) acts differently from {}",
                        group.name(a),
                        group.name(b),
                        group.name(ab)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &ActingGroup {
        &self.group
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.group, ActingGroup::Finite(_))
    }

    pub fn certificate(&self) -> Certificate {
        match &self.group {
            ActingGroup::Finite(_) => Certificate::Exact,
            ActingGroup::Ball { radius, .. } => Certificate::BallVerified { radius: *radius },
        }
    }

    pub fn element_count(&self) -> usize {
        self.vmap.len()
    }

    pub fn element_name(&self, g: usize) -> &str {
        match &self.group {
            ActingGroup::Finite(f) => f.name(g),
            ActingGroup::Ball { names, .. } => &names[g],
        }
    }

    /// Element indices of the generators.
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn vertex_image(&self, g: usize, v: usize) -> Option<usize> {
        self.vmap[g][v]
    }

    pub fn edge_image(&self, g: usize, e: usize) -> Option<usize> {
        self.emap[g][e]
    }

    /// Vertex orbits, each sorted, ordered by least member.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        orbit_blocks(self.tree.vertex_count(), &self.vmap)
    }

    pub fn edge_orbits(&self) -> Vec<Vec<usize>> {
        orbit_blocks(self.tree.edge_count(), &self.emap)
    }

    fn orbit_index(blocks: &[Vec<usize>], n: usize) -> Vec<usize> {
        let mut idx = vec![0; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                idx[x] = i;
            }
        }
        idx
    }

    pub fn vertex_orbit_index(&self) -> Vec<usize> {
        Self::orbit_index(&self.vertex_orbits(), self.tree.vertex_count())
    }

    pub fn edge_orbit_index(&self) -> Vec<usize> {
        Self::orbit_index(&self.edge_orbits(), self.tree.edge_count())
    }

    /// `G_v` as the elements fixing `v`.
    pub fn vertex_stabilizer(&self, v: usize) -> BTreeSet<usize> {
        (0..self.element_count()).filter(|&g| self.vmap[g][v] == Some(v)).collect()
    }

    pub fn edge_stabilizer(&self, e: usize) -> BTreeSet<usize> {
        (0..self.element_count()).filter(|&g| self.emap[g][e] == Some(e)).collect()
    }

    /// Stabilizer order of an edge, maximized over its orbit (partial actions
    /// see fewer elements near the boundary).
    pub fn edge_stabilizer_order(&self, e: usize) -> usize {
        let orbit = self.edge_orbits().into_iter().find(|o| o.contains(&e)).unwrap();
        orbit.iter().map(|&f| self.edge_stabilizer(f).len()).max().unwrap()
    }

    pub fn vertex_stabilizer_order(&self, v: usize) -> usize {
        let orbit = self.vertex_orbits().into_iter().find(|o| o.contains(&v)).unwrap();
        orbit.iter().map(|&w| self.vertex_stabilizer(w).len()).max().unwrap()
    }

    /// For a compressible edge, the pair `(v, w)` of its endpoints with
    /// `Gv ≠ Gw` and `G_v ≤ G_w`; then `G_v = G_e`, which is asserted.
    pub fn compressible_pair(&self, e: usize) -> Result<Option<(usize, usize)>> {
        let edge = self.tree.edge(e);
        let orbit = self.vertex_orbit_index();
        for (v, w) in [(edge.src, edge.dst), (edge.dst, edge.src)] {
            if orbit[v] == orbit[w] {
                continue;
            }
            let gv = self.vertex_stabilizer(v);
            if gv.is_subset(&self.vertex_stabilizer(w)) {
                if gv != self.edge_stabilizer(e) {
                    return Err(Error::Verification(format!("stabilizer of edge {} differs from its endpoint's", edge.id)));
                }
                return Ok(Some((v, w)));
            }
        }
        Ok(None)
    }

    pub fn is_compressible(&self, e: usize) -> Result<bool> {
        Ok(self.compressible_pair(e)?.is_some())
    }

    pub fn compressible_edges(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for e in 0..self.tree.edge_count() {
            if self.is_compressible(e)? {
                out.push(e);
            }
        }
        Ok(out)
    }

    /// Vertices fixed by every generator.
    pub fn global_fixed_vertices(&self) -> Vec<usize> {
        (0..self.tree.vertex_count())
            .filter(|&v| self.gens.iter().all(|&s| self.vmap[s][v] == Some(v)))
            .collect()
    }

    /// Collapses every edge in the orbit of `e`.
    pub fn collapse_edge_orbit(&self, e: usize) -> Result<TreeAction> {
        let orbit = self.edge_orbits().into_iter().find(|o| o.contains(&e)).unwrap();
        let (tree, vnew, eold) = self.tree.collapse_with_map(&orbit)?;
        let mut enew = vec![None; self.tree.edge_count()];
        for (i, &old) in eold.iter().enumerate() {
            enew[old] = Some(i);
        }
        let nv = tree.vertex_count();
        let mut vmap = Vec::with_capacity(self.element_count());
        for g in 0..self.element_count() {
            let mut m = vec![None; nv];
            for x in 0..self.tree.vertex_count() {
                if let Some(y) = self.vmap[g][x] {
                    let (a, b) = (vnew[x], vnew[y]);
                    match m[a] {
                        None => m[a] = Some(b),
                        Some(c) if c != b => {
                            return Err(Error::InvalidAction("collapse is not equivariant".into()));
                        }
                        _ => {}
                    }
                }
            }
            vmap.push(m);
        }
        let emap = (0..self.element_count())
            .map(|g| eold.iter().map(|&old| self.emap[g][old].and_then(|f| enew[f])).collect())
            .collect();
        let action = TreeAction { tree, group: self.group.clone(), gens: self.gens.clone(), vmap, emap };
        action.check_incidences()?;
        Ok(action)
    }
}

fn is_perm(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// The action on `T(E)` or `U(E)` induced by a finite group acting on the
/// universe vertices (`gen_perms[i]` is the permutation of generator `i`).
pub fn induce_action(
    sys: &NestedSystem,
    t: &StructureTree,
    group: FiniteGroup,
    gens: Vec<usize>,
    gen_perms: &[Vec<usize>],
) -> Result<TreeAction> {
    let n = sys.universe().len();
    if gen_perms.len() != gens.len() || gen_perms.iter().any(|p| !is_perm(p, n)) {
        return Err(Error::InvalidAction("one universe permutation per generator expected".into()));
    }
    let mut gen_vperm = Vec::new();
    let mut gen_eperm = Vec::new();
    for p in gen_perms {
        let image = |c: usize| -> Result<usize> {
            let img = sys.universe().cut(sys.cuts()[c].members().map(|v| p[v]))?;
            sys.index_of(&img).ok_or_else(|| Error::NotActionClosed(sys.names()[c].clone()))
        };
        let cut_map = (0..sys.len()).map(image).collect::<Result<Vec<_>>>()?;
        gen_eperm.push(t.edge_cut.iter().map(|&c| t.edge_cut.iter().position(|&d| d == cut_map[c]).unwrap()).collect());
        let vp = t
            .labels
            .iter()
            .map(|l| {
                let moved: BTreeSet<usize> = l.iter().map(|&c| cut_map[c]).collect();
                t.vertex_of_label(&moved).ok_or_else(|| Error::NotActionClosed(format!("label {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        gen_vperm.push(vp);
    }
    TreeAction::from_generators(t.tree.clone(), group, gens, gen_vperm, gen_eperm)
}

/// The partial action of the word ball of radius `w` on a tree built from
/// cuts of `ball`: `g e` is the translate of the cut, when it is visible and
/// belongs to the system; vertices move along their incident edges.
pub fn induce_partial_action(
    sys: &NestedSystem,
    t: &StructureTree,
    ball: &BallView,
    w: usize,
) -> Result<TreeAction> {
    let o = ball.oracle();
    let elements: Vec<_> = o.ball(w)?.elements().to_vec();
    let gens: Vec<usize> = (0..o.generator_count())
        .map(|i| elements.iter().position(|x| *x == o.generator(i)).unwrap())
        .collect();
    let tree = &t.tree;
    let mut vmap = Vec::new();
    let mut emap = Vec::new();
    for g in &elements {
        let cut_img: Vec<Option<usize>> = sys
            .cuts()
            .iter()
            .map(|c| translate_cut(ball, g, c).ok().and_then(|img| sys.index_of(&img)))
            .collect();
        let em: Vec<Option<usize>> = t
            .edge_cut
            .iter()
            .map(|&c| cut_img[c].and_then(|d| t.edge_cut.iter().position(|&x| x == d)))
            .collect();
        let mut vm: Vec<Option<usize>> = vec![None; tree.vertex_count()];
        for (e, img) in em.iter().enumerate() {
            let Some(f) = *img else { continue };
            for (x, y) in [(tree.edge(e).src, tree.edge(f).src), (tree.edge(e).dst, tree.edge(f).dst)] {
                match vm[x] {
                    None => vm[x] = Some(y),
                    Some(z) if z != y => {
                        return Err(Error::InvalidAction(format!(
                            "{} moves vertex {} inconsistently",
                            o.format(g),
                            tree.vertex_id(x)
                        )))
                    }
                    _ => {}
                }
            }
        }
        if tree.edge_count() == 0 {
            vm = vec![Some(0); tree.vertex_count()];
        }
        vmap.push(vm);
        emap.push(em);
    }
    let names = elements.iter().map(|x| o.format(x)).collect();
    let action = TreeAction {
        tree: tree.clone(),
        group: ActingGroup::Ball { names, radius: ball.radius() },
        gens,
        vmap,
        emap,
    };
    action.check_incidences()?;
    Ok(action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treeops::build_t;

    pub(crate) fn z2_path() -> TreeAction {
        let tree = Graph::build(
            ["a", "m", "b"],
            [("am".into(), "a".into(), "m".into()), ("bm".into(), "b".into(), "m".into())],
        )
        .unwrap();
        TreeAction::from_generators(tree, FiniteGroup::cyclic(2).unwrap(), vec![1], vec![vec![2, 1, 0]], vec![vec![1, 0]])
            .unwrap()
    }

    #[test]
    fn z2_path_stabilizers() {
        let a = z2_path();
        assert_eq!(a.vertex_orbits(), vec![vec![0, 2], vec![1]]);
        assert_eq!(a.edge_orbits(), vec![vec![0, 1]]);
        assert_eq!(a.vertex_stabilizer(1).len(), 2);
        assert_eq!(a.vertex_stabilizer(0).len(), 1);
        assert_eq!(a.compressible_pair(0).unwrap(), Some((0, 1)));
        assert_eq!(a.global_fixed_vertices(), vec![1]);
    }

    #[test]
    fn trivial_group_compresses_every_edge() {
        // distinct orbits and equal (trivial) stabilizers satisfy the condition
        let tree = Graph::build(["x", "y"], [("e".into(), "x".into(), "y".into())]).unwrap();
        let a = TreeAction::from_generators(tree, FiniteGroup::cyclic(1).unwrap(), vec![], vec![], vec![]).unwrap();
        assert_eq!(a.compressible_edges().unwrap(), vec![0]);
        let single = Graph::build(["x"], std::iter::empty()).unwrap();
        let b = TreeAction::from_generators(single, FiniteGroup::cyclic(1).unwrap(), vec![], vec![], vec![]).unwrap();
        assert!(b.compressible_edges().unwrap().is_empty());
    }

    #[test]
    fn bad_relations_are_rejected() {
        let tree = Graph::build(["x", "y", "z"], [("e".into(), "x".into(), "y".into()), ("f".into(), "z".into(), "y".into())]).unwrap();
        // a 3-cycle on vertices is not an action of Z/2
        let r = TreeAction::from_generators(tree, FiniteGroup::cyclic(2).unwrap(), vec![1], vec![vec![1, 2, 0]], vec![vec![1, 0]]);
        assert!(matches!(r, Err(Error::InvalidAction(_))));
    }

    #[test]
    fn induced_swap_on_k2() {
        let u = crate::cuts::Universe::finite(Graph::build(["u", "v"], [("e".into(), "u".into(), "v".into())]).unwrap());
        let a = u.cut_by_ids(&["u"]).unwrap();
        let sys = NestedSystem::verify(&u, vec![a.clone(), a.complement()]).unwrap();
        let t = build_t(&sys).unwrap();
        let act = induce_action(&sys, &t, FiniteGroup::cyclic(2).unwrap(), vec![1], &[vec![1, 0]]).unwrap();
        assert_eq!(act.vertex_image(1, 0), Some(2));
        assert_eq!(act.vertex_image(1, 1), Some(1));
        let only_a = NestedSystem::verify(&u, vec![a]).unwrap();
        let tu = crate::treeops::build_u(&only_a).unwrap();
        assert!(matches!(
            induce_action(&only_a, &tu, FiniteGroup::cyclic(2).unwrap(), vec![1], &[vec![1, 0]]),
            Err(Error::NotActionClosed(_))
        ));
    }
}
