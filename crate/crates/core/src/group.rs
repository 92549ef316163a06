//! Groups as computation, and finite balls of their Cayley graphs.
//!
//! Built-in infinite families (`Z^d`, free groups, free products of finite
//! cyclic groups) are evaluated lazily through normal forms. Finite groups
//! are stored as multiplication tables; permutation groups are closed up to
//! a table on construction.
//!
//! Elements are encoded canonically as [`Element`]:
//! table/perm: `[index]`; `Z^d`: the coordinate vector; free groups: signed
//! letters `±(i+1)` of the reduced word; free products: flattened syllables
//! `[factor, exponent, factor, exponent, ...]` with exponents in `1..order`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cuts::Universe;
use crate::graph::Graph;
use crate::{Error, Result};

pub const DEFAULT_BALL_CAP: usize = 200_000;
const MAX_PERM_GROUP_ORDER: usize = 5040;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub Vec<i64>);

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// User-facing group description, as read from JSON or a shorthand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Zd { d: usize },
    Free { k: usize },
    FreeProduct { orders: Vec<usize> },
    Table { elements: Vec<String>, mul: Vec<Vec<usize>>, gens: Vec<String> },
    Perm { gens: Vec<Vec<usize>> },
    Cyclic { n: usize },
}

impl GroupSpec {
    /// Parses `zd:2`, `free:2`, `free_product:2,3` (or `fp:2,3`), `cyclic:6`,
    /// or inline JSON.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let text = text.trim();
        if text.starts_with('{') {
            return Ok(serde_json::from_str(text)?);
        }
        let (kind, arg) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("group shorthand {text:?}")))?;
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("number {s:?}")));
        match kind {
            "zd" => Ok(GroupSpec::Zd { d: num(arg)? }),
            "free" => Ok(GroupSpec::Free { k: num(arg)? }),
            "free_product" | "fp" => {
                Ok(GroupSpec::FreeProduct { orders: arg.split(',').map(num).collect::<Result<_>>()? })
            }
            "cyclic" => Ok(GroupSpec::Cyclic { n: num(arg)? }),
            _ => Err(Error::Parse(format!("unknown group kind {kind:?}"))),
        }
    }
}

/// A finite group by multiplication table; element 0 need not be the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table: closure, identity, inverses, and an
    /// exhaustive associativity scan. Errors carry a witness.
    pub fn from_table(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = names.len();
        if n == 0 {
            return Err(Error::MalformedGroup("empty element list".into()));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedGroup(format!("table is not {n}x{n}")));
        }
        if let Some((a, b)) =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| mul[a][b] >= n)
        {
            return Err(Error::MalformedGroup(format!("product ({a},{b}) out of range")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::MalformedGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(Error::MalformedGroup(format!(
                            "associativity fails on witness triple ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == identity && mul[b][a] == identity) {
                Some(b) => inv.push(b),
                None => {
                    return Err(Error::MalformedGroup(format!(
                        "inverse fails: element {} has no two-sided inverse (witness triple ({}, x, {}))",
                        names[a], names[a], names[identity]
                    )))
                }
            }
        }
        Ok(FiniteGroup { names, mul, identity, inv })
    }

    /// `Z/n` as a table.
    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::MalformedGroup("cyclic order must be positive".into()));
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(names, mul)
    }

    /// Closes permutation generators (images of `0..degree`) under composition.
    /// The product `g h` acts as `x -> g(h(x))`.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<FiniteGroup> {
        Ok(Self::close_permutations(gens)?.0)
    }

    /// As [`FiniteGroup::from_permutations`], also returning the element
    /// index of each generator.
    pub fn close_permutations(gens: &[Vec<usize>]) -> Result<(FiniteGroup, Vec<usize>)> {
        let degree = gens.first().map_or(0, |g| g.len());
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::MalformedGroup(format!("not a permutation of 0..{degree}: {g:?}")));
            }
        }
        let compose = |g: &[usize], h: &[usize]| h.iter().map(|&x| g[x]).collect::<Vec<_>>();
        let id: Vec<usize> = (0..degree).collect();
        let mut perms = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut i = 0;
        while i < perms.len() {
            for g in gens {
                let p = compose(&perms[i], g);
                if !index.contains_key(&p) {
                    if perms.len() >= MAX_PERM_GROUP_ORDER {
                        return Err(Error::MalformedGroup(format!(
                            "permutation group order exceeds {MAX_PERM_GROUP_ORDER}"
                        )));
                    }
                    index.insert(p.clone(), perms.len());
                    perms.push(p);
                }
            }
            i += 1;
        }
        let n = perms.len();
        let mul: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).map(|b| index[&compose(&perms[a], &perms[b])]).collect()).collect();
        let inv = (0..n).map(|a| (0..n).find(|&b| mul[a][b] == 0).unwrap()).collect();
        let names = (0..n).map(|i| format!("p{i}")).collect();
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok((FiniteGroup { names, mul, identity: 0, inv }, gen_idx))
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Zd(usize),
    Free(usize),
    FreeProduct(Vec<i64>),
    Finite { group: FiniteGroup, gens: Vec<usize>, geodesics: Vec<Vec<Letter>> },
}

/// A group with a fixed finite generating set, as total functions on
/// canonical element encodings.
#[derive(Debug, Clone)]
pub struct GroupOracle {
    kind: Kind,
    spec: GroupSpec,
}

impl GroupOracle {
    pub fn new(spec: GroupSpec) -> Result<GroupOracle> {
        let kind = match &spec {
            GroupSpec::Zd { d } if *d >= 1 => Kind::Zd(*d),
            GroupSpec::Free { k } if *k >= 1 => Kind::Free(*k),
            GroupSpec::FreeProduct { orders } if !orders.is_empty() && orders.iter().all(|&o| o >= 2) => {
                Kind::FreeProduct(orders.iter().map(|&o| o as i64).collect())
            }
            GroupSpec::Zd { .. } | GroupSpec::Free { .. } => {
                return Err(Error::MalformedGroup("rank must be at least 1".into()))
            }
            GroupSpec::FreeProduct { .. } => {
                return Err(Error::MalformedGroup("free product needs cyclic orders >= 2".into()))
            }
            GroupSpec::Table { elements, mul, gens } => {
                let group = FiniteGroup::from_table(elements.clone(), mul.clone())?;
                let gens = gens
                    .iter()
                    .map(|g| group.index_of(g).ok_or_else(|| Error::MalformedGroup(format!("unknown generator {g}"))))
                    .collect::<Result<Vec<_>>>()?;
                Self::finite_kind(group, gens)?
            }
            GroupSpec::Perm { gens } => {
                let (group, gen_idx) = FiniteGroup::close_permutations(gens)?;
                Self::finite_kind(group, gen_idx)?
            }
            GroupSpec::Cyclic { n } => {
                let group = FiniteGroup::cyclic(*n)?;
                let one = if *n == 1 { 0 } else { 1 };
                Self::finite_kind(group, vec![one])?
            }
        };
        Ok(GroupOracle { kind, spec })
    }

    pub fn from_finite(group: FiniteGroup, gens: Vec<usize>) -> Result<GroupOracle> {
        let spec = GroupSpec::Table {
            elements: group.names.clone(),
            mul: group.mul.clone(),
            gens: gens.iter().map(|&g| group.names[g].clone()).collect(),
        };
        Ok(GroupOracle { kind: Self::finite_kind(group, gens)?, spec })
    }

    fn finite_kind(group: FiniteGroup, gens: Vec<usize>) -> Result<Kind> {
        // breadth-first geodesics from the identity; also checks generation
        let n = group.order();
        let mut geodesics: Vec<Option<Vec<Letter>>> = vec![None; n];
        geodesics[group.identity] = Some(Vec::new());
        let mut queue = VecDeque::from([group.identity]);
        while let Some(x) = queue.pop_front() {
            for (i, &s) in gens.iter().enumerate() {
                for inverse in [false, true] {
                    let step = if inverse { group.inv(s) } else { s };
                    let y = group.mul(x, step);
                    if geodesics[y].is_none() {
                        let mut w = geodesics[x].clone().unwrap();
                        w.push(Letter::new(i, inverse));
                        geodesics[y] = Some(w);
                        queue.push_back(y);
                    }
                }
            }
        }
        if let Some(missing) = geodesics.iter().position(|g| g.is_none()) {
            return Err(Error::MalformedGroup(format!(
                "generators do not generate the group (missing {})",
                group.name(missing)
            )));
        }
        Ok(Kind::Finite { group, gens, geodesics: geodesics.into_iter().map(Option::unwrap).collect() })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn generator_count(&self) -> usize {
        match &self.kind {
            Kind::Zd(d) => *d,
            Kind::Free(k) => *k,
            Kind::FreeProduct(o) => o.len(),
            Kind::Finite { gens, .. } => gens.len(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Finite { .. })
    }

    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            Kind::Finite { group, .. } => Some(group.order()),
            _ => None,
        }
    }

    pub fn finite_group(&self) -> Option<&FiniteGroup> {
        match &self.kind {
            Kind::Finite { group, .. } => Some(group),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            Kind::Zd(d) => Element(vec![0; *d]),
            Kind::Free(_) | Kind::FreeProduct(_) => Element(Vec::new()),
            Kind::Finite { group, .. } => Element(vec![group.identity as i64]),
        }
    }

    pub fn letter(&self, l: Letter) -> Element {
        let g = self.generator(l.gen);
        if l.inverse {
            self.invert(&g)
        } else {
            g
        }
    }

    pub fn generator(&self, i: usize) -> Element {
        match &self.kind {
            Kind::Zd(d) => {
                let mut v = vec![0; *d];
                v[i] = 1;
                Element(v)
            }
            Kind::Free(_) => Element(vec![i as i64 + 1]),
            Kind::FreeProduct(_) => Element(vec![i as i64, 1]),
            Kind::Finite { gens, .. } => Element(vec![gens[i] as i64]),
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        match &self.kind {
            Kind::Zd(_) => Element(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect()),
            Kind::Free(_) => {
                let mut out = a.0.clone();
                for &x in &b.0 {
                    if out.last() == Some(&-x) {
                        out.pop();
                    } else {
                        out.push(x);
                    }
                }
                Element(out)
            }
            Kind::FreeProduct(orders) => {
                let mut out = a.0.clone();
                for syl in b.0.chunks(2) {
                    let (f, k) = (syl[0], syl[1]);
                    let n = out.len();
                    if n >= 2 && out[n - 2] == f {
                        let e = (out[n - 1] + k) % orders[f as usize];
                        if e == 0 {
                            out.truncate(n - 2);
                        } else {
                            out[n - 1] = e;
                        }
                    } else {
                        out.extend_from_slice(&[f, k]);
                    }
                }
                Element(out)
            }
            Kind::Finite { group, .. } => Element(vec![group.mul(a.0[0] as usize, b.0[0] as usize) as i64]),
        }
    }

    pub fn invert(&self, a: &Element) -> Element {
        match &self.kind {
            Kind::Zd(_) => Element(a.0.iter().map(|x| -x).collect()),
            Kind::Free(_) => Element(a.0.iter().rev().map(|x| -x).collect()),
            Kind::FreeProduct(orders) => {
                Element(a.0.chunks(2).rev().flat_map(|s| [s[0], orders[s[0] as usize] - s[1]]).collect())
            }
            Kind::Finite { group, .. } => Element(vec![group.inv(a.0[0] as usize) as i64]),
        }
    }

    /// Evaluates a word to its canonical element.
    pub fn normal_form(&self, word: &[Letter]) -> Element {
        word.iter().fold(self.identity(), |acc, &l| self.multiply(&acc, &self.letter(l)))
    }

    /// A geodesic word for `x` in the word metric of the generating set.
    pub fn geodesic(&self, x: &Element) -> Vec<Letter> {
        match &self.kind {
            Kind::Zd(_) => x
                .0
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| std::iter::repeat_n(Letter::new(i, c < 0), c.unsigned_abs() as usize))
                .collect(),
            Kind::Free(_) => x.0.iter().map(|&s| Letter::new(s.unsigned_abs() as usize - 1, s < 0)).collect(),
            Kind::FreeProduct(orders) => x
                .0
                .chunks(2)
                .flat_map(|s| {
                    let (f, k, n) = (s[0] as usize, s[1], orders[s[0] as usize]);
                    let (count, inverse) = if k <= n - k { (k, false) } else { (n - k, true) };
                    std::iter::repeat_n(Letter::new(f, inverse), count as usize)
                })
                .collect(),
            Kind::Finite { geodesics, .. } => geodesics[x.0[0] as usize].clone(),
        }
    }

    pub fn word_length(&self, x: &Element) -> usize {
        self.geodesic(x).len()
    }

    /// Human-readable element name, used as Cayley-ball vertex id.
    pub fn format(&self, x: &Element) -> String {
        match &self.kind {
            Kind::Zd(1) => x.0[0].to_string(),
            Kind::Zd(_) => format!("({})", x.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")),
            Kind::Finite { group, .. } => group.name(x.0[0] as usize).to_string(),
            Kind::Free(_) | Kind::FreeProduct(_) => format_word(&self.geodesic(x)),
        }
    }

    /// Parses a word such as `s1 s2^-1 s1⁻¹` (empty string or `1` is the identity).
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (body, inverse) = if let Some(b) = tok.strip_suffix("^-1") {
                (b, true)
            } else if let Some(b) = tok.strip_suffix("⁻¹") {
                (b, true)
            } else {
                (tok, false)
            };
            let i = body
                .strip_prefix('s')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= self.generator_count())
                .ok_or_else(|| Error::Parse(format!("bad letter {tok:?}")))?;
            out.push(Letter::new(i - 1, inverse));
        }
        Ok(out)
    }

    /// Ball of radius `radius` around the identity.
    pub fn ball(&self, radius: usize) -> Result<BallView> {
        self.ball_with_cap(radius, DEFAULT_BALL_CAP)
    }

    pub fn ball_with_cap(&self, radius: usize, cap: usize) -> Result<BallView> {
        BallView::new(self.clone(), radius, cap)
    }
}

pub fn format_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|l| if l.inverse { format!("s{}^-1", l.gen + 1) } else { format!("s{}", l.gen + 1) })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// The induced subgraph of a Cayley graph on the ball of radius `R`.
///
/// Vertices are listed in breadth-first order (generators in order, each
/// followed by its inverse). Edge `(g, s)` runs from `g` to `gs` and is
/// present when both endpoints lie in the ball.
#[derive(Debug, Clone)]
pub struct BallView {
    oracle: GroupOracle,
    radius: usize,
    universe: Universe,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    edge_gen: Vec<usize>,
}

impl BallView {
    fn new(oracle: GroupOracle, radius: usize, cap: usize) -> Result<BallView> {
        let id = oracle.identity();
        let mut elements = vec![id.clone()];
        let mut dist = vec![0usize];
        let mut index = HashMap::from([(id, 0usize)]);
        let letters: Vec<Element> = (0..oracle.generator_count())
            .flat_map(|i| [oracle.letter(Letter::new(i, false)), oracle.letter(Letter::new(i, true))])
            .collect();
        let mut head = 0;
        while head < elements.len() {
            if dist[head] < radius {
                for l in &letters {
                    let y = oracle.multiply(&elements[head], l);
                    if !index.contains_key(&y) {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded { radius, cap });
                        }
                        index.insert(y.clone(), elements.len());
                        elements.push(y);
                        dist.push(dist[head] + 1);
                    }
                }
            }
            head += 1;
        }
        let mut graph = Graph::empty();
        for x in &elements {
            graph.add_vertex(oracle.format(x))?;
        }
        let mut edge_gen = Vec::new();
        for (g, x) in elements.iter().enumerate() {
            for i in 0..oracle.generator_count() {
                let y = oracle.multiply(x, &oracle.generator(i));
                if let Some(&h) = index.get(&y) {
                    graph.add_edge(format!("({},s{})", graph.vertex_id(g), i + 1), g, h)?;
                    edge_gen.push(i);
                }
            }
        }
        let universe = Universe::ball(graph, dist, radius);
        Ok(BallView { oracle, radius, universe, elements, index, edge_gen })
    }

    pub fn oracle(&self) -> &GroupOracle {
        &self.oracle
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn graph(&self) -> &Graph {
        self.universe.graph()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, v: usize) -> &Element {
        &self.elements[v]
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn distance(&self, v: usize) -> usize {
        self.universe.distance(v).unwrap()
    }

    /// The generator labelling edge `e`.
    pub fn edge_generator(&self, e: usize) -> usize {
        self.edge_gen[e]
    }

    /// Vertices at distance exactly `R`.
    pub fn sphere(&self) -> Vec<usize> {
        (0..self.elements.len()).filter(|&v| self.distance(v) == self.radius).collect()
    }

    /// True when the ball is the whole (finite) group.
    pub fn is_whole_group(&self) -> bool {
        self.oracle.order() == Some(self.elements.len())
    }

    /// `{ g a | a in set }`; errors if an image leaves the ball.
    pub fn act_left(&self, g: &Element, set: &[usize]) -> Result<Vec<usize>> {
        self.map_set(set, |x| self.oracle.multiply(g, x))
    }

    /// `{ a g | a in set }`; errors if an image leaves the ball.
    pub fn translate_right(&self, set: &[usize], g: &Element) -> Result<Vec<usize>> {
        self.map_set(set, |x| self.oracle.multiply(x, g))
    }

    fn map_set(&self, set: &[usize], f: impl Fn(&Element) -> Element) -> Result<Vec<usize>> {
        let mut out = set
            .iter()
            .map(|&v| {
                let y = f(&self.elements[v]);
                self.index_of(&y).ok_or_else(|| Error::RadiusTooSmall(self.oracle.format(&y)))
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        Ok(out)
    }

    /// The vertex where a geodesic from the identity to `x` first reaches
    /// distance `R`, or `x` itself when it lies in the ball.
    pub fn sphere_shadow(&self, x: &Element) -> usize {
        if let Some(v) = self.index_of(x) {
            return v;
        }
        let word = self.oracle.geodesic(x);
        let prefix = self.oracle.normal_form(&word[..self.radius]);
        self.index_of(&prefix).expect("geodesic prefix lies in the ball")
    }
}
