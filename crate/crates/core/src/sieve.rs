//! Irreducibility sieve on a finite cut algebra.
//!
//! `C` is reducible when it lies in the subalgebra generated by the elements
//! of strictly smaller measure. Elements are processed in increasing order of
//! measure while an atom partition is refined by everything seen so far, so
//! each membership test is a single partition check.

use std::collections::HashMap;

use serde::Serialize;

use crate::bergman::{certified_bound, BlockWalkTable, TruncatedSeries};
use crate::cuts::{boolean_closure, is_nested, nested_report_unchecked, Cut, CutAlgebra, Universe};
use crate::treeops::NestedSystem;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SieveMode {
    /// Requires `L ≥ 4|V| + 1`, so equal prefixes are equal series.
    Certified,
    /// Any `L`; decisions resting on ties of truncated series are flagged.
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Class {
    Irreducible,
    Reducible,
    /// Treated as irreducible, but a tie at degree `degree` could flip it.
    Undecided { degree: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementReport {
    /// Atom mask of the element.
    pub mask: u64,
    #[serde(skip)]
    pub cut: Cut,
    pub members: Vec<usize>,
    pub series: TruncatedSeries,
    #[serde(flatten)]
    pub class: Class,
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveResult {
    #[serde(skip)]
    pub algebra: CutAlgebra,
    pub degree: usize,
    pub mode: SieveMode,
    pub elements: Vec<ElementReport>,
    /// Irreducible and undecided elements, in element order.
    #[serde(skip)]
    pub irr: Vec<Cut>,
    pub nested_verified: bool,
    pub generates_verified: bool,
}

impl SieveResult {
    pub fn undecided(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e.class, Class::Undecided { .. })).count()
    }

    pub fn class_of(&self, c: &Cut) -> Option<Class> {
        self.elements.iter().find(|e| &e.cut == c).map(|e| e.class)
    }
}

/// Partition of atom indices, as a class id per atom.
#[derive(Clone)]
struct AtomPartition(Vec<usize>);

impl AtomPartition {
    fn trivial(k: usize) -> Self {
        AtomPartition(vec![0; k])
    }

    fn refine(&mut self, mask: u64) {
        let mut ids = HashMap::new();
        for i in 0..self.0.len() {
            let key = (self.0[i], mask >> i & 1);
            let next = ids.len();
            self.0[i] = *ids.entry(key).or_insert(next);
        }
    }

    /// Whether `mask` is a union of classes.
    fn generates(&self, mask: u64) -> bool {
        let mut side: HashMap<usize, u64> = HashMap::new();
        (0..self.0.len()).all(|i| *side.entry(self.0[i]).or_insert(mask >> i & 1) == mask >> i & 1)
    }
}

fn series_key(s: &TruncatedSeries) -> &[num_bigint::BigUint] {
    &s.coeffs
}

/// Classifies every element of `algebra` against measures through degree `L`.
pub fn classify(u: &Universe, algebra: &CutAlgebra, l: usize, mode: SieveMode) -> Result<SieveResult> {
    let required = certified_bound(u.len());
    if mode == SieveMode::Certified && l < required {
        return Err(Error::Uncertified { given: l, required });
    }
    let k = algebra.atom_count();
    if k > 63 {
        return Err(Error::AtomCap { atoms: k, cap: 63 });
    }
    let full = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let table = BlockWalkTable::new(u, algebra.atoms(), l)?;
    let series: Vec<TruncatedSeries> = (0..=full).map(|m| table.measure(m)).collect();

    let mut order: Vec<u64> = (0..=full).collect();
    order.sort_by(|&a, &b| series_key(&series[a as usize]).cmp(series_key(&series[b as usize])).then(a.cmp(&b)));

    let mut class = vec![Class::Reducible; series.len()];
    let mut below = AtomPartition::trivial(k);
    let mut start = 0;
    while start < order.len() {
        let key = series_key(&series[order[start] as usize]);
        let end = start + order[start..].iter().take_while(|&&m| series_key(&series[m as usize]) == key).count();
        let group = &order[start..end];
        let tie_certain = mode == SieveMode::Certified || series[group[0] as usize].certified_exact;
        for &c in group {
            if below.generates(c) {
                continue;
            }
            class[c as usize] = Class::Irreducible;
            if !tie_certain {
                // complements have identical series; the other ties might not
                let mut with_ties = below.clone();
                for &d in group.iter().filter(|&&d| d != c && d != full ^ c) {
                    with_ties.refine(d);
                }
                if with_ties.generates(c) {
                    class[c as usize] = Class::Undecided { degree: l };
                }
            }
        }
        for &c in group {
            below.refine(c);
        }
        start = end;
    }

    let elements: Vec<ElementReport> = (0..=full)
        .map(|m| {
            let cut = algebra.element(m);
            ElementReport {
                mask: m,
                members: cut.members().collect(),
                cut,
                series: series[m as usize].clone(),
                class: class[m as usize],
            }
        })
        .collect();
    let irr: Vec<Cut> = elements
        .iter()
        .filter(|e| e.class != Class::Reducible)
        .map(|e| e.cut.clone())
        .collect();
    let nested_verified = irr.iter().enumerate().all(|(i, a)| irr[i + 1..].iter().all(|b| is_nested(a, b)));
    let generates_verified = CutAlgebra::generated_by(u, &irr)?.same_algebra(algebra);
    Ok(SieveResult { algebra: algebra.clone(), degree: l, mode, elements, irr, nested_verified, generates_verified })
}

/// `irr(⟨family⟩_B)`, with nestedness and generation asserted.
pub fn irr_of(u: &Universe, family: &[Cut], l: usize, mode: SieveMode) -> Result<SieveResult> {
    let algebra = boolean_closure(u, family)?;
    let result = classify(u, &algebra, l, mode)?;
    if !result.nested_verified {
        let (a, b) = first_crossing(&result.irr).unwrap();
        let r = nested_report_unchecked(u, &result.irr[a], &result.irr[b]);
        return Err(Error::Verification(format!(
            "irreducible elements {a} and {b} cross (corner sizes {:?})",
            r.sizes
        )));
    }
    if !result.generates_verified {
        return Err(Error::Verification("irreducible elements do not generate the algebra".into()));
    }
    Ok(result)
}

fn first_crossing(cuts: &[Cut]) -> Option<(usize, usize)> {
    (0..cuts.len()).flat_map(|i| (i + 1..cuts.len()).map(move |j| (i, j))).find(|&(i, j)| !is_nested(&cuts[i], &cuts[j]))
}

/// Images of a cut under the generators of an acting group; `None` entries
/// are images that cannot be formed.
pub type ActionImages<'a> = dyn Fn(&Cut) -> Result<Vec<Option<Cut>>> + 'a;

/// A `∁`-stable, action-closed subset `E` of `irr(⟨F⟩_B)` with `F ⊆ ⟨E⟩_B`,
/// minimal under greedy removal (descending measure, then element order).
pub fn select_nested_generating(
    u: &Universe,
    family: &[Cut],
    l: usize,
    mode: SieveMode,
    action: Option<&ActionImages<'_>>,
) -> Result<NestedSystem> {
    let result = irr_of(u, family, l, mode)?;
    if mode == SieveMode::Certified && result.undecided() > 0 {
        return Err(Error::Undecided(result.undecided()));
    }
    let irr = &result.irr;
    let index: HashMap<&Cut, usize> = irr.iter().enumerate().map(|(i, c)| (c, i)).collect();

    // removal classes: complement pairs merged along the action
    let mut parent: Vec<usize> = (0..irr.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
        }
    };
    for (i, c) in irr.iter().enumerate() {
        if let Some(&j) = index.get(&c.complement()) {
            union(&mut parent, i, j);
        }
        if let Some(images) = action {
            for img in images(c)?.into_iter().flatten() {
                if let Some(&j) = index.get(&img) {
                    union(&mut parent, i, j);
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = HashMap::new();
    for i in 0..irr.len() {
        let r = find(&mut parent, i);
        let id = *class_of.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[id].push(i);
    }

    let measure_of = |i: usize| &result.elements.iter().find(|e| e.cut == irr[i]).unwrap().series;
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&a, &b| {
        let ma = classes[a].iter().map(|&i| series_key(measure_of(i))).max().unwrap();
        let mb = classes[b].iter().map(|&i| series_key(measure_of(i))).max().unwrap();
        mb.cmp(ma).then(a.cmp(&b))
    });

    let mut keep = vec![true; classes.len()];
    for &c in &order {
        keep[c] = false;
        let rest: Vec<Cut> = classes
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[*i])
            .flat_map(|(_, cl)| cl.iter().map(|&i| irr[i].clone()))
            .collect();
        let sub = CutAlgebra::generated_by(u, &rest)?;
        if !family.iter().all(|f| sub.contains(f)) {
            keep[c] = true;
        }
    }
    let mut chosen: Vec<usize> = classes.iter().enumerate().filter(|(i, _)| keep[*i]).flat_map(|(_, cl)| cl.clone()).collect();
    chosen.sort_unstable();
    NestedSystem::verify(u, chosen.into_iter().map(|i| irr[i].clone()).collect())
}
