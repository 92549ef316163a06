//! Path-counting power series.
//!
//! A path of length `ℓ` is a walk of `ℓ` darts (backtracking allowed). For a
//! family of paths `P`, `Σ(P) = Σ_p t^{length(p)}`; only the coefficients
//! `c_0..c_L` are kept, as exact big integers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::cuts::{Cut, Universe};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Enumeration,
    TransferMatrix,
}

/// Coefficients `c_0..c_L` of a path-count series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedSeries {
    #[serde(serialize_with = "decimal_strings")]
    pub coeffs: Vec<BigUint>,
    pub provenance: Provenance,
    pub certified_exact: bool,
}

fn decimal_strings<S: Serializer>(coeffs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(coeffs.iter().map(|c| c.to_str_radix(10)))
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<BigUint>, provenance: Provenance, certified_exact: bool) -> Self {
        TruncatedSeries { coeffs, provenance, certified_exact }
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigUint::from(c)).collect(), Provenance::Enumeration, false)
    }

    pub fn zero(l: usize) -> Self {
        Self::new(vec![BigUint::zero(); l + 1], Provenance::TransferMatrix, false)
    }

    /// The truncation degree `L`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, l: usize) -> &BigUint {
        &self.coeffs[l]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficientwise sum; certified only if both are.
    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_len(self, other)?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            provenance: self.provenance,
            certified_exact: self.certified_exact && other.certified_exact,
        })
    }

    pub fn scale(&self, k: u32) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c * k).collect(), ..self.clone() }
    }

    /// The coefficients as decimal strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_str_radix(10)).collect()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, c) in self.coeffs.iter().enumerate() {
            if l > 0 {
                f.write_str(" + ")?;
            }
            match l {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} t")?,
                _ => write!(f, "{c} t^{l}")?,
            }
        }
        Ok(())
    }
}

fn check_len(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<()> {
    if a.coeffs.len() != b.coeffs.len() {
        return Err(Error::LengthMismatch(a.degree(), b.degree()));
    }
    Ok(())
}

/// Outcome of the lexicographic order `⊏` on truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SeriesOrdering {
    Less { pivot: usize },
    Greater { pivot: usize },
    EqualUpTo { degree: usize },
    CertifiedEqual,
}

impl SeriesOrdering {
    pub fn is_less(self) -> bool {
        matches!(self, SeriesOrdering::Less { .. })
    }

    pub fn is_equal(self) -> bool {
        matches!(self, SeriesOrdering::EqualUpTo { .. } | SeriesOrdering::CertifiedEqual)
    }
}

pub fn compare(s1: &TruncatedSeries, s2: &TruncatedSeries) -> Result<SeriesOrdering> {
    check_len(s1, s2)?;
    for (l, (a, b)) in s1.coeffs.iter().zip(&s2.coeffs).enumerate() {
        match a.cmp(b) {
            Ordering::Less => return Ok(SeriesOrdering::Less { pivot: l }),
            Ordering::Greater => return Ok(SeriesOrdering::Greater { pivot: l }),
            Ordering::Equal => {}
        }
    }
    if s1.certified_exact && s2.certified_exact {
        Ok(SeriesOrdering::CertifiedEqual)
    } else {
        Ok(SeriesOrdering::EqualUpTo { degree: s1.degree() })
    }
}

/// Truncation degree from which equal prefixes imply equal series on a graph
/// with `n` vertices: `4n + 1`.
pub fn certified_bound(n: usize) -> usize {
    4 * n + 1
}

/// A path family to count.
#[derive(Debug, Clone)]
pub enum PathFamily {
    /// `P(A)`: paths from `A` to `A^∁`.
    Cut(Cut),
    /// `P(S)`: paths crossing the edge set `S` an odd number of times.
    OddCrossing(Vec<usize>),
    /// `P(C, D) = P(C) ∩ P(D^∁)`: paths from `C ∖ D` to `D ∖ C`.
    Between(Cut, Cut),
}

enum Counting {
    Plain { start: Vec<bool>, end: Vec<bool> },
    Parity { crossing: Vec<bool> },
}

fn counting(u: &Universe, family: &PathFamily) -> Result<Counting> {
    let n = u.len();
    let mask = |c: &Cut| -> Result<Vec<bool>> {
        if c.universe_len() != n || !c.same_universe(&u.empty_cut()) {
            return Err(Error::UniverseMismatch);
        }
        Ok((0..n).map(|v| c.contains(v)).collect())
    };
    Ok(match family {
        PathFamily::Cut(a) => {
            let start = mask(a)?;
            let end = start.iter().map(|b| !b).collect();
            Counting::Plain { start, end }
        }
        PathFamily::Between(c, d) => {
            let (c, d) = (mask(c)?, mask(d)?);
            let start = c.iter().zip(&d).map(|(&x, &y)| x && !y).collect();
            let end = c.iter().zip(&d).map(|(&x, &y)| y && !x).collect();
            Counting::Plain { start, end }
        }
        PathFamily::OddCrossing(s) => {
            let mut crossing = vec![false; u.graph().edge_count()];
            for &e in s {
                if e >= crossing.len() {
                    return Err(Error::UnknownEdge(format!("#{e}")));
                }
                crossing[e] = true;
            }
            Counting::Parity { crossing }
        }
    })
}

/// Counts by iterating the one-step transfer matrix on vertex states, or on
/// (vertex, crossing parity) states for odd-crossing families.
pub fn transfer_counts(u: &Universe, family: &PathFamily, l: usize) -> Result<TruncatedSeries> {
    let g = u.graph();
    let n = u.len();
    let mut coeffs = Vec::with_capacity(l + 1);
    match counting(u, family)? {
        Counting::Plain { start, end } => {
            let mut x: Vec<BigUint> = start.iter().map(|&b| BigUint::from(u8::from(b))).collect();
            for step in 0..=l {
                coeffs.push((0..n).filter(|&v| end[v]).map(|v| &x[v]).sum());
                if step < l {
                    let mut y = vec![BigUint::zero(); n];
                    for (v, xv) in x.iter().enumerate() {
                        if xv.is_zero() {
                            continue;
                        }
                        for d in g.darts(v) {
                            y[d.to] += xv;
                        }
                    }
                    x = y;
                }
            }
        }
        Counting::Parity { crossing } => {
            // x[2v + p]: paths ending at v with crossing parity p
            let mut x = vec![BigUint::zero(); 2 * n];
            for v in 0..n {
                x[2 * v] = BigUint::from(1u8);
            }
            for step in 0..=l {
                coeffs.push((0..n).map(|v| &x[2 * v + 1]).sum());
                if step < l {
                    let mut y = vec![BigUint::zero(); 2 * n];
                    for v in 0..n {
                        for p in 0..2 {
                            let xv = &x[2 * v + p];
                            if xv.is_zero() {
                                continue;
                            }
                            for d in g.darts(v) {
                                let q = p ^ usize::from(crossing[d.edge]);
                                y[2 * d.to + q] += xv;
                            }
                        }
                    }
                    x = y;
                }
            }
        }
    }
    let certified = l >= certified_bound(n);
    Ok(TruncatedSeries::new(coeffs, Provenance::TransferMatrix, certified))
}

/// Counts by explicit depth-first enumeration of every walk. Exponential;
/// used as an independent check on small graphs.
pub fn enumeration_counts(u: &Universe, family: &PathFamily, l: usize) -> Result<TruncatedSeries> {
    let g = u.graph();
    let n = u.len();
    let mut counts = vec![0u64; l + 1];
    let spec = counting(u, family)?;

    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &crate::graph::Graph,
        v: usize,
        parity: bool,
        depth: usize,
        l: usize,
        accept: &dyn Fn(usize, bool) -> bool,
        crossing: Option<&[bool]>,
        counts: &mut [u64],
    ) {
        if accept(v, parity) {
            counts[depth] += 1;
        }
        if depth == l {
            return;
        }
        for d in g.darts(v) {
            let p = parity ^ crossing.is_some_and(|c| c[d.edge]);
            walk(g, d.to, p, depth + 1, l, accept, crossing, counts);
        }
    }

    match &spec {
        Counting::Plain { start, end } => {
            let accept = |v: usize, _: bool| end[v];
            for v in (0..n).filter(|&v| start[v]) {
                walk(g, v, false, 0, l, &accept, None, &mut counts);
            }
        }
        Counting::Parity { crossing } => {
            let accept = |_: usize, p: bool| p;
            for v in 0..n {
                walk(g, v, false, 0, l, &accept, Some(crossing), &mut counts);
            }
        }
    }
    let certified = l >= certified_bound(n);
    Ok(TruncatedSeries::new(counts.into_iter().map(BigUint::from).collect(), Provenance::Enumeration, certified))
}

/// `Σ(A)` through degree `L`.
pub fn measure(u: &Universe, a: &Cut, l: usize) -> Result<TruncatedSeries> {
    transfer_counts(u, &PathFamily::Cut(a.clone()), l)
}

/// `Σ(S)` for the odd-crossing family of the edge set `S`.
pub fn odd_crossing_series(u: &Universe, s: &[usize], l: usize) -> Result<TruncatedSeries> {
    transfer_counts(u, &PathFamily::OddCrossing(s.to_vec()), l)
}

/// The four corner series `(a, b, c, d)` of a pair of cuts:
/// `a = Σ(A∩B, A^∁∩B)`, `b = Σ(A∩B, A^∁∩B^∁)`, `c = Σ(A∩B^∁, A^∁)`,
/// `d = Σ(A∩B^∁, A∩B)`. They satisfy `a + b + c = Σ(A)`.
pub fn corner_series(
    u: &Universe,
    a: &Cut,
    b: &Cut,
    l: usize,
) -> Result<[TruncatedSeries; 4]> {
    let ac = a.complement();
    let bc = b.complement();
    let pair = |c: Cut, d: Cut| transfer_counts(u, &PathFamily::Between(c, d), l);
    Ok([
        pair(a.intersection(b), ac.intersection(b))?,
        pair(a.intersection(b), ac.intersection(&bc))?,
        pair(a.intersection(&bc), ac)?,
        pair(a.intersection(&bc), a.intersection(b))?,
    ])
}

/// The length of the shortest path crossing both edge sets: 1 if they share
/// an edge, otherwise two plus the least distance between their endpoints.
pub fn crossing_distance(u: &Universe, r: &[usize], s: &[usize]) -> Result<usize> {
    if r.is_empty() || s.is_empty() {
        return Err(Error::NoCrossingPath(u.len()));
    }
    if r.iter().any(|e| s.contains(e)) {
        return Ok(1);
    }
    let g = u.graph();
    let n = u.len();
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for &e in r {
        for v in [g.edge(e).src, g.edge(e).dst] {
            if dist[v] == usize::MAX {
                dist[v] = 0;
                queue.push_back(v);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for d in g.darts(v) {
            if dist[d.to] == usize::MAX {
                dist[d.to] = dist[v] + 1;
                queue.push_back(d.to);
            }
        }
    }
    s.iter()
        .flat_map(|&e| [g.edge(e).src, g.edge(e).dst])
        .map(|v| dist[v])
        .min()
        .filter(|&d| d != usize::MAX)
        .map(|d| d + 2)
        .ok_or(Error::NoCrossingPath(n))
}

/// Walk counts between the blocks of a partition, for fast measures of
/// unions of blocks: `table[ℓ][i][j]` counts paths of length `ℓ` from block
/// `i` to block `j`.
#[derive(Debug, Clone)]
pub struct BlockWalkTable {
    table: Vec<Vec<Vec<BigUint>>>,
    certified: bool,
}

impl BlockWalkTable {
    pub fn new(u: &Universe, blocks: &[Cut], l: usize) -> Result<BlockWalkTable> {
        let n = u.len();
        let k = blocks.len();
        let mut block_of = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for v in b.members() {
                block_of[v] = i;
            }
        }
        let g = u.graph();
        let mut table = vec![vec![vec![BigUint::zero(); k]; k]; l + 1];
        for (i, b) in blocks.iter().enumerate() {
            let mut x: Vec<BigUint> = (0..n).map(|v| BigUint::from(u8::from(b.contains(v)))).collect();
            for (step, row) in table.iter_mut().enumerate() {
                for (v, xv) in x.iter().enumerate() {
                    if block_of[v] != usize::MAX {
                        row[i][block_of[v]] += xv;
                    }
                }
                if step < l {
                    let mut y = vec![BigUint::zero(); n];
                    for (v, xv) in x.iter().enumerate() {
                        if !xv.is_zero() {
                            for d in g.darts(v) {
                                y[d.to] += xv;
                            }
                        }
                    }
                    x = y;
                }
            }
        }
        Ok(BlockWalkTable { table, certified: l >= certified_bound(n) })
    }

    /// `Σ` of the union of the blocks selected by `mask`.
    pub fn measure(&self, mask: u64) -> TruncatedSeries {
        let k = self.table.first().map_or(0, Vec::len);
        let inside: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        let outside: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 0).collect();
        let coeffs = self
            .table
            .iter()
            .map(|m| inside.iter().flat_map(|&i| outside.iter().map(move |&j| &m[i][j])).sum())
            .collect();
        TruncatedSeries::new(coeffs, Provenance::TransferMatrix, self.certified)
    }
}
