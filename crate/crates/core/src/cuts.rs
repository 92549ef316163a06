//! Vertex subsets as cuts.
//!
//! A [`Cut`] is a dense bit set over the vertices of a [`Universe`], which is
//! either a plain finite graph or a Cayley ball. On balls the interesting
//! cuts have their coboundary strictly inside the ball ("interior
//! coboundary"); then every residual component meeting the sphere is taken to
//! be infinite, which is exact for the built-in group families.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::graph::Graph;
use crate::group::{BallView, Element, Letter};
use crate::{Certificate, Error, Result};

pub const DEFAULT_ATOM_CAP: usize = 20;
pub const DEFAULT_GENERATOR_CAP: usize = 12;

static NEXT_TOKEN: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone)]
struct Layers {
    dist: Vec<usize>,
    radius: usize,
}

/// The vertex set cuts are drawn from, together with its graph.
#[derive(Debug, Clone)]
pub struct Universe {
    graph: Graph,
    layers: Option<Layers>,
    token: u64,
}

impl Universe {
    pub fn finite(graph: Graph) -> Universe {
        Universe { graph, layers: None, token: NEXT_TOKEN.fetch_add(1, Ordering::Relaxed) }
    }

    pub(crate) fn ball(graph: Graph, dist: Vec<usize>, radius: usize) -> Universe {
        Universe {
            graph,
            layers: Some(Layers { dist, radius }),
            token: NEXT_TOKEN.fetch_add(1, Ordering::Relaxed),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_ball(&self) -> bool {
        self.layers.is_some()
    }

    pub fn radius(&self) -> Option<usize> {
        self.layers.as_ref().map(|l| l.radius)
    }

    pub fn distance(&self, v: usize) -> Option<usize> {
        self.layers.as_ref().map(|l| l.dist[v])
    }

    /// On a ball: whether `v` lies on the sphere. Always false otherwise.
    pub fn on_sphere(&self, v: usize) -> bool {
        self.layers.as_ref().is_some_and(|l| l.dist[v] == l.radius)
    }

    pub fn certificate(&self) -> Certificate {
        match &self.layers {
            None => Certificate::Exact,
            Some(l) => Certificate::BallVerified { radius: l.radius },
        }
    }

    pub fn empty_cut(&self) -> Cut {
        Cut { token: self.token, bits: FixedBitSet::with_capacity(self.len()) }
    }

    pub fn full_cut(&self) -> Cut {
        let mut c = self.empty_cut();
        c.bits.insert_range(..);
        c
    }

    pub fn cut<I: IntoIterator<Item = usize>>(&self, members: I) -> Result<Cut> {
        let mut c = self.empty_cut();
        for v in members {
            if v >= self.len() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
            c.bits.insert(v);
        }
        Ok(c)
    }

    pub fn cut_by_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Cut> {
        let members = ids.iter().map(|s| self.graph.vertex_index(s.as_ref())).collect::<Result<Vec<_>>>()?;
        self.cut(members)
    }

    pub fn cut_from_mask(&self, mask: &[bool]) -> Cut {
        self.cut(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).unwrap()
    }

    fn check(&self, c: &Cut) -> Result<()> {
        if c.token == self.token {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }
}

/// A set of universe vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    token: u64,
    bits: FixedBitSet,
}

impl Cut {
    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn universe_len(&self) -> usize {
        self.bits.len()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn same_universe(&self, other: &Cut) -> bool {
        self.token == other.token
    }

    pub fn complement(&self) -> Cut {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        Cut { token: self.token, bits }
    }

    pub fn intersection(&self, other: &Cut) -> Cut {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Cut { token: self.token, bits }
    }

    pub fn union(&self, other: &Cut) -> Cut {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Cut { token: self.token, bits }
    }

    pub fn difference(&self, other: &Cut) -> Cut {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Cut { token: self.token, bits }
    }

    pub fn sym_diff(&self, other: &Cut) -> Cut {
        let mut bits = self.bits.clone();
        bits.symmetric_difference_with(&other.bits);
        Cut { token: self.token, bits }
    }

    pub fn is_subset(&self, other: &Cut) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_proper_subset(&self, other: &Cut) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(&self, other: &Cut) -> bool {
        self.bits.is_disjoint(&other.bits)
    }
}

/// `δ(A)` without the interior check.
pub fn raw_coboundary(u: &Universe, a: &Cut) -> Result<Vec<usize>> {
    u.check(a)?;
    Ok(u.graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| a.contains(e.src) != a.contains(e.dst))
        .map(|(i, _)| i)
        .collect())
}

/// `δ(A)`: edges with exactly one endpoint in `A`. On a ball, every such edge
/// must avoid the sphere.
pub fn coboundary(u: &Universe, a: &Cut) -> Result<Vec<usize>> {
    let cob = raw_coboundary(u, a)?;
    if u.is_ball() {
        if let Some(&e) = cob.iter().find(|&&e| {
            let edge = u.graph.edge(e);
            u.on_sphere(edge.src) || u.on_sphere(edge.dst)
        }) {
            return Err(Error::InteriorCoboundary(u.graph.edge(e).id.clone()));
        }
    }
    Ok(cob)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlmostEquality {
    pub almost_equal: bool,
    pub sym_diff: Vec<usize>,
    pub certificate: Certificate,
}

/// `A ▽ B` together with the almost-equality verdict. On a finite universe
/// every pair is almost equal; on a ball the pair is accepted when `▽` avoids
/// the sphere.
pub fn almost_equal(u: &Universe, a: &Cut, b: &Cut) -> Result<AlmostEquality> {
    u.check(a)?;
    u.check(b)?;
    let d = a.sym_diff(b);
    let almost_equal = !d.members().any(|v| u.on_sphere(v));
    Ok(AlmostEquality { almost_equal, sym_diff: d.members().collect(), certificate: u.certificate() })
}

/// The four corners of a pair, in the order `A∩B, A∩B^∁, A^∁∩B, A^∁∩B^∁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Corner {
    AB,
    ABc,
    AcB,
    AcBc,
}

pub const CORNERS: [Corner; 4] = [Corner::AB, Corner::ABc, Corner::AcB, Corner::AcBc];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NestedReport {
    /// Corner sizes (ball traces on a ball universe).
    pub sizes: [usize; 4],
    /// Whether each corner meets the sphere, i.e. is infinite.
    pub infinite: [bool; 4],
    pub nested: bool,
    pub empty_corner: Option<Corner>,
}

pub fn corner(a: &Cut, b: &Cut, c: Corner) -> Cut {
    match c {
        Corner::AB => a.intersection(b),
        Corner::ABc => a.difference(b),
        Corner::AcB => b.difference(a),
        Corner::AcBc => a.union(b).complement(),
    }
}

/// Corner sizes and nestedness. On a ball both coboundaries must be interior;
/// then an empty trace means an empty corner.
pub fn nested_report(u: &Universe, a: &Cut, b: &Cut) -> Result<NestedReport> {
    u.check(a)?;
    u.check(b)?;
    if u.is_ball() {
        coboundary(u, a)?;
        coboundary(u, b)?;
    }
    Ok(nested_report_unchecked(u, a, b))
}

pub(crate) fn nested_report_unchecked(u: &Universe, a: &Cut, b: &Cut) -> NestedReport {
    let mut sizes = [0; 4];
    let mut infinite = [false; 4];
    for (i, &c) in CORNERS.iter().enumerate() {
        let k = corner(a, b, c);
        sizes[i] = k.len();
        infinite[i] = k.members().any(|v| u.on_sphere(v));
    }
    let empty_corner = CORNERS.iter().zip(sizes).find(|(_, s)| *s == 0).map(|(&c, _)| c);
    NestedReport { sizes, infinite, nested: empty_corner.is_some(), empty_corner }
}

pub fn is_nested(a: &Cut, b: &Cut) -> bool {
    a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a) || a.union(b).is_full()
}

/// A finite Boolean algebra of cuts, stored by its atoms.
#[derive(Debug, Clone)]
pub struct CutAlgebra {
    generators: Vec<Cut>,
    atoms: Vec<Cut>,
    atom_of: Vec<usize>,
}

/// `⟨family⟩_B` with the default caps.
pub fn boolean_closure(u: &Universe, family: &[Cut]) -> Result<CutAlgebra> {
    boolean_closure_with_caps(u, family, DEFAULT_GENERATOR_CAP, DEFAULT_ATOM_CAP)
}

pub fn boolean_closure_with_caps(
    u: &Universe,
    family: &[Cut],
    generator_cap: usize,
    atom_cap: usize,
) -> Result<CutAlgebra> {
    if family.len() > generator_cap {
        return Err(Error::GeneratorCap { count: family.len(), cap: generator_cap });
    }
    let algebra = CutAlgebra::generated_by(u, family)?;
    if algebra.atoms.len() > atom_cap {
        return Err(Error::AtomCap { atoms: algebra.atoms.len(), cap: atom_cap });
    }
    Ok(algebra)
}

impl CutAlgebra {
    /// Atoms by iterated refinement of the trivial partition.
    pub fn generated_by(u: &Universe, family: &[Cut]) -> Result<CutAlgebra> {
        for c in family {
            u.check(c)?;
        }
        let n = u.len();
        let mut atom_of = vec![0usize; n];
        let mut count = usize::from(n > 0);
        for g in family {
            // split every class by membership in g
            let mut remap = std::collections::HashMap::new();
            let mut next = 0;
            for (v, atom) in atom_of.iter_mut().enumerate() {
                let key = (*atom, g.contains(v));
                *atom = *remap.entry(key).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
            }
            count = next;
        }
        let mut atoms = vec![u.empty_cut(); count];
        for v in 0..n {
            atoms[atom_of[v]].bits.insert(v);
        }
        Ok(CutAlgebra { generators: family.to_vec(), atoms, atom_of })
    }

    pub fn generators(&self) -> &[Cut] {
        &self.generators
    }

    pub fn atoms(&self) -> &[Cut] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// `2^{#atoms}`, saturating.
    pub fn element_count(&self) -> u128 {
        1u128.checked_shl(self.atoms.len() as u32).unwrap_or(u128::MAX)
    }

    /// The union of the atoms selected by `mask`.
    pub fn element(&self, mask: u64) -> Cut {
        let mut c = Cut { token: self.atoms[0].token, bits: FixedBitSet::with_capacity(self.atom_of.len()) };
        for (i, a) in self.atoms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                c.bits.union_with(&a.bits);
            }
        }
        c
    }

    /// The atom mask of `c` if it lies in the algebra.
    pub fn mask_of(&self, c: &Cut) -> Option<u64> {
        let mut mask = 0u64;
        for (i, a) in self.atoms.iter().enumerate() {
            if a.is_subset(c) {
                mask |= 1 << i;
            } else if !a.is_disjoint(c) {
                return None;
            }
        }
        Some(mask)
    }

    pub fn contains(&self, c: &Cut) -> bool {
        self.mask_of(c).is_some()
    }

    pub fn atom_of(&self, v: usize) -> usize {
        self.atom_of[v]
    }

    /// Algebras are equal iff their atom partitions are.
    pub fn same_algebra(&self, other: &CutAlgebra) -> bool {
        let mut a = self.atoms.clone();
        let mut b = other.atoms.clone();
        a.sort();
        b.sort();
        a == b
    }
}

// ---------------------------------------------------------------------------
// Cuts on Cayley balls

/// Membership of an arbitrary group element in the infinite extension of an
/// interior-coboundary cut: elements outside the ball follow the sphere
/// vertex their geodesic passes through.
pub fn member_extended(ball: &BallView, a: &Cut, x: &Element) -> bool {
    a.contains(ball.sphere_shadow(x))
}

/// `gA` restricted to the ball. `A` must have interior coboundary, and so
/// must the translate.
pub fn translate_cut(ball: &BallView, g: &Element, a: &Cut) -> Result<Cut> {
    let u = ball.universe();
    let cob = coboundary(u, a)?;
    let o = ball.oracle();
    let too_small = || Error::RadiusTooSmall(format!("translate of cut by {}", o.format(g)));
    // g δ(A) must stay interior, otherwise the translate is not seen by the ball
    for &e in &cob {
        let edge = u.graph().edge(e);
        for v in [edge.src, edge.dst] {
            match ball.index_of(&o.multiply(g, ball.element(v))) {
                Some(w) if ball.distance(w) < ball.radius() => {}
                _ => return Err(too_small()),
            }
        }
    }
    let g_inv = o.invert(g);
    let out = u.cut(
        (0..u.len()).filter(|&v| member_extended(ball, a, &o.multiply(&g_inv, ball.element(v)))),
    )?;
    if raw_coboundary(u, &out)?.len() != cob.len() {
        return Err(too_small());
    }
    Ok(out)
}

/// `{gA}` for the supplied elements, deduplicated; each kept cut is reported
/// with the first element producing it.
pub fn orbit_cuts(ball: &BallView, a: &Cut, elements: &[Element]) -> Result<Vec<(Element, Cut)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in elements {
        let c = translate_cut(ball, g, a)?;
        if seen.insert(c.clone()) {
            out.push((g.clone(), c));
        }
    }
    Ok(out)
}

/// `A ▽ (A s^-1)` for generator `s`, evaluated at the ball vertices of
/// distance at most `R - 1`, by translating the member set of `A`.
pub fn right_translate_sym_diff(ball: &BallView, a: &Cut, gen: usize) -> Vec<usize> {
    let o = ball.oracle();
    let s_inv = o.letter(Letter::new(gen, true));
    let translated: HashSet<Element> = a.members().map(|v| o.multiply(ball.element(v), &s_inv)).collect();
    (0..ball.elements().len())
        .filter(|&v| ball.distance(v) < ball.radius())
        .filter(|&v| a.contains(v) != translated.contains(ball.element(v)))
        .collect()
}

/// `{ g | (g, s) ∈ δ(A) }` at the ball vertices of distance at most `R - 1`.
pub fn coboundary_sources(ball: &BallView, a: &Cut, gen: usize) -> Vec<usize> {
    let u = ball.universe();
    let mut out: Vec<usize> = raw_coboundary(u, a)
        .unwrap()
        .into_iter()
        .filter(|&e| ball.edge_generator(e) == gen)
        .map(|e| u.graph().edge(e).src)
        .filter(|&v| ball.distance(v) < ball.radius())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Stability {
    /// The ball is the whole finite group.
    Exact,
    /// Every generator moves `A` by a set that stays away from the boundary.
    BallVerified { radius: usize, sym_diff_sizes: Vec<usize> },
    /// `A ▽ A s^-1` keeps growing towards the boundary.
    Rejected { generator: usize, inner_radius: usize, inner: usize, outer_radius: usize, outer: usize },
}

/// Whether `A` is almost right-stable, judged generator by generator. The
/// symmetric difference is computed two ways (by translation and via the
/// coboundary) and the two must agree.
pub fn is_almost_right_stable(ball: &BallView, a: &Cut) -> Result<Stability> {
    ball.universe().check(a)?;
    if ball.is_whole_group() {
        return Ok(Stability::Exact);
    }
    let r = ball.radius();
    let mut sizes = Vec::new();
    for s in 0..ball.oracle().generator_count() {
        let by_translation = right_translate_sym_diff(ball, a, s);
        let by_coboundary = coboundary_sources(ball, a, s);
        if by_translation != by_coboundary {
            return Err(Error::Verification(format!("right-translate identity fails for generator s{}", s + 1)));
        }
        let inner_radius = r / 2;
        let inner = by_translation.iter().filter(|&&v| ball.distance(v) <= inner_radius).count();
        let outer = by_translation.len();
        if outer > inner {
            return Ok(Stability::Rejected { generator: s, inner_radius, inner, outer_radius: r - 1, outer });
        }
        sizes.push(outer);
    }
    Ok(Stability::BallVerified { radius: r, sym_diff_sizes: sizes })
}
