//! Seeded property suites, run by `cutforge check`.
//!
//! Every suite draws its instances from a ChaCha generator seeded from the
//! user seed, and reports one line per property. The transcript contains no
//! timings, so equal seeds give byte-identical output.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bergman::{
    certified_bound, corner_series, crossing_distance, enumeration_counts, measure, odd_crossing_series,
    transfer_counts, PathFamily,
};
use crate::cuts::{
    boolean_closure, coboundary_sources, nested_report, raw_coboundary, right_translate_sym_diff, Cut, Universe,
};
use crate::ends::{balanced_cut, ends_profile, stallings_pipeline, EndsClass, SplitOutcome};
use crate::graph::Graph;
use crate::group::{GroupOracle, GroupSpec};
use crate::sieve::{irr_of, SieveMode};
use crate::treeops::{
    build_t, build_u, collapse_compressible_by, size_polynomial, tree_cut_system, vertex_embed, NestedSystem,
    TreeAction,
};
use crate::{Error, Result};

pub const SUITES: [&str; 6] = ["graph", "cuts", "bergman", "sieve", "tree", "ends"];

/// A random multigraph with `2..=max_n` vertices and at most `max_m` edges.
/// When `connected`, a random spanning tree comes first.
pub fn random_graph(rng: &mut impl Rng, max_n: usize, max_m: usize, connected: bool) -> Graph {
    let n = rng.gen_range(2..=max_n);
    let mut g = Graph::empty();
    for v in 0..n {
        g.add_vertex(format!("v{v}")).unwrap();
    }
    let mut next = 0;
    let mut add = |g: &mut Graph, a: usize, b: usize| {
        g.add_edge(format!("e{next}"), a, b).unwrap();
        next += 1;
    };
    if connected {
        for v in 1..n.min(max_m + 1) {
            let w = rng.gen_range(0..v);
            if rng.gen_bool(0.5) {
                add(&mut g, v, w)
            } else {
                add(&mut g, w, v)
            }
        }
    }
    let extra = max_m.saturating_sub(g.edge_count());
    for _ in 0..rng.gen_range(0..=extra) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        add(&mut g, a, b);
    }
    g
}

/// A random tree on `n` vertices with random orientations and shuffled ids.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> Graph {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let mut g = Graph::empty();
    for &i in &ids {
        g.add_vertex(format!("t{i}")).unwrap();
    }
    for v in 1..n {
        let w = rng.gen_range(0..v);
        let (a, b) = if rng.gen_bool(0.5) { (v, w) } else { (w, v) };
        g.add_edge(format!("f{v}"), a, b).unwrap();
    }
    g
}

/// Each vertex independently with probability 1/2.
pub fn random_cut(rng: &mut impl Rng, u: &Universe) -> Cut {
    u.cut((0..u.len()).filter(|_| rng.gen_bool(0.5))).unwrap()
}

pub fn random_edge_set(rng: &mut impl Rng, g: &Graph) -> Vec<usize> {
    let mut s: Vec<usize> = (0..g.edge_count()).filter(|_| rng.gen_bool(0.3)).collect();
    if s.is_empty() && g.edge_count() > 0 {
        s.push(rng.gen_range(0..g.edge_count()));
    }
    s
}

/// Outcome of one property: assertions made, or the first witness.
type Outcome = std::result::Result<usize, String>;

pub struct Transcript {
    pub lines: Vec<String>,
    pub assertions: usize,
    pub failure: Option<String>,
}

impl Transcript {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

struct Runner<'a> {
    t: Transcript,
    only: Option<&'a str>,
}

impl Runner<'_> {
    fn run(&mut self, suite: &str, name: &str, f: impl FnOnce() -> Outcome) {
        if self.t.failure.is_some() || self.only.is_some_and(|o| !name.contains(o)) {
            return;
        }
        match f() {
            Ok(n) => {
                self.t.assertions += n;
                self.t.lines.push(format!("[{suite}] {name}: ok ({n} assertions)"));
            }
            Err(w) => {
                let line = format!("[{suite}] {name}: FAIL: {w}");
                self.t.lines.push(line.clone());
                self.t.failure = Some(line);
            }
        }
    }
}

fn rng_for(seed: u64, suite: &str) -> ChaCha8Rng {
    let salt = SUITES.iter().position(|s| *s == suite).unwrap() as u64;
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt))
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Runs one suite (or `all`), optionally restricted to properties whose name
/// contains `only`.
pub fn run_suite(suite: &str, seed: u64, only: Option<&str>) -> Result<Transcript> {
    let suites: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(Error::Parse(format!("unknown suite {s}"))),
    };
    let mut r = Runner {
        t: Transcript { lines: vec![format!("cutforge check suite={suite} seed={seed}")], assertions: 0, failure: None },
        only,
    };
    for s in suites {
        let mut rng = rng_for(seed, s);
        match s {
            "graph" => graph_suite(&mut r, &mut rng),
            "cuts" => cuts_suite(&mut r, &mut rng),
            "bergman" => bergman_suite(&mut r, &mut rng),
            "sieve" => sieve_suite(&mut r, &mut rng),
            "tree" => tree_suite(&mut r, &mut rng),
            _ => ends_suite(&mut r),
        }
    }
    let summary = match &r.t.failure {
        None => format!("OK ({} assertions)", r.t.assertions),
        Some(_) => "FAILED".to_string(),
    };
    r.t.lines.push(summary);
    Ok(r.t)
}

fn union_find_components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> (usize, bool) {
    let mut p: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        r
    }
    let mut comps = n;
    let mut cycle = false;
    for (a, b) in edges {
        let (ra, rb) = (root(&mut p, a), root(&mut p, b));
        if ra == rb {
            cycle = true;
        } else {
            p[ra] = rb;
            comps -= 1;
        }
    }
    (comps, cycle)
}

fn graph_suite(r: &mut Runner, rng: &mut ChaCha8Rng) {
    let graphs: Vec<Graph> = (0..100).map(|_| random_graph(rng, 9, 12, false)).collect();
    let removals: Vec<Vec<usize>> = graphs.iter().map(|g| random_edge_set(rng, g)).collect();
    r.run("graph", "components partition the vertices", || {
        let mut n = 0;
        for (g, removed) in graphs.iter().zip(&removals) {
            let parts = g.components(removed).map_err(err)?;
            let kept = (0..g.edge_count()).filter(|e| !removed.contains(e));
            let (expect, _) = union_find_components(g.vertex_count(), kept.clone().map(|e| (g.edge(e).src, g.edge(e).dst)));
            ensure!(parts.len() == expect, "component count {} vs {expect}", parts.len());
            for e in kept {
                ensure!(parts.block_of[g.edge(e).src] == parts.block_of[g.edge(e).dst], "edge {} splits a block", g.edge(e).id);
                n += 1;
            }
            n += 1;
        }
        Ok(n)
    });
    r.run("graph", "forest predicate matches cycle detection", || {
        for g in &graphs {
            let (_, cycle) = union_find_components(g.vertex_count(), g.edges().iter().map(|e| (e.src, e.dst)));
            ensure!(g.is_forest() == !cycle, "is_forest wrong on {:?}", g.vertex_ids());
        }
        Ok(graphs.len())
    });
    r.run("graph", "collapse counts", || {
        for (g, s) in graphs.iter().zip(&removals) {
            let c = g.collapse(s).map_err(err)?;
            let (comps, _) = union_find_components(g.vertex_count(), s.iter().map(|&e| (g.edge(e).src, g.edge(e).dst)));
            ensure!(c.vertex_count() == comps && c.edge_count() == g.edge_count() - s.len(), "collapse sizes");
        }
        Ok(2 * graphs.len())
    });
    let trees: Vec<Graph> = (0..30).map(|_| { let n = rng.gen_range(1..=12); random_tree(rng, n) }).collect();
    r.run("graph", "reduced paths in trees", || {
        let mut n = 0;
        for t in &trees {
            for v in 0..t.vertex_count() {
                let dist = t.distances_from(v);
                for (w, &dw) in dist.iter().enumerate() {
                    let p = t.reduced_path(v, w).map_err(err)?;
                    let vs = p.vertices(t);
                    ensure!(p.is_valid(t) && p.is_reduced(), "invalid path {v}->{w}");
                    ensure!(vs[0] == v && *vs.last().unwrap() == w, "wrong endpoints {v}->{w}");
                    ensure!(Some(p.len()) == dw, "path {v}->{w} is not shortest");
                    n += 3;
                }
            }
        }
        Ok(n)
    });
}

fn translate_identity(oracle: &GroupOracle, radius: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let ball = oracle.ball(radius).map_err(err)?;
    let mut n = 0;
    for _ in 0..20 {
        let a = random_cut(rng, ball.universe());
        for s in 0..oracle.generator_count() {
            let lhs = right_translate_sym_diff(&ball, &a, s);
            let rhs = coboundary_sources(&ball, &a, s);
            ensure!(lhs == rhs, "identity fails for s{} on a cut of size {}", s + 1, a.len());
            n += 1;
        }
    }
    Ok(n)
}

fn cuts_suite(r: &mut Runner, rng: &mut ChaCha8Rng) {
    let z = GroupOracle::new(GroupSpec::Zd { d: 1 }).unwrap();
    let f2 = GroupOracle::new(GroupSpec::Free { k: 2 }).unwrap();
    r.run("cuts", "right-translate identity on Z (R=8)", || translate_identity(&z, 8, rng));
    r.run("cuts", "right-translate identity on F2 (R=4)", || translate_identity(&f2, 4, rng));
    let cases: Vec<(Universe, Vec<Cut>)> = (0..100)
        .map(|_| {
            let u = Universe::finite(random_graph(rng, 8, 12, false));
            let k = rng.gen_range(0..=3);
            let cuts = (0..k).map(|_| random_cut(rng, &u)).collect();
            (u, cuts)
        })
        .collect();
    r.run("cuts", "boolean closure contains its generators", || {
        let mut n = 0;
        for (u, cuts) in &cases {
            let alg = boolean_closure(u, cuts).map_err(err)?;
            let covered: usize = alg.atoms().iter().map(Cut::len).sum();
            ensure!(covered == u.len(), "atoms do not partition the universe");
            for c in cuts {
                ensure!(alg.contains(c) && alg.contains(&c.complement()), "generator missing from closure");
                n += 2;
            }
            n += 1;
        }
        Ok(n)
    });
    r.run("cuts", "nested iff some corner is empty", || {
        let mut n = 0;
        for (u, cuts) in &cases {
            for a in cuts {
                for b in cuts {
                    let rep = nested_report(u, a, b).map_err(err)?;
                    ensure!(rep.sizes.iter().sum::<usize>() == u.len(), "corner sizes do not add up");
                    ensure!(rep.nested == rep.sizes.contains(&0), "nested flag disagrees with corners");
                    n += 2;
                }
            }
        }
        Ok(n)
    });
}

fn bergman_suite(r: &mut Runner, rng: &mut ChaCha8Rng) {
    let id_cases: Vec<(Universe, Cut)> = (0..200)
        .map(|_| {
            let u = Universe::finite(random_graph(rng, 10, 14, false));
            let a = random_cut(rng, &u);
            (u, a)
        })
        .collect();
    r.run("bergman", "coboundary doubles the measure; complement symmetry", || {
        let mut n = 0;
        for (u, a) in &id_cases {
            let m = measure(u, a, 12).map_err(err)?;
            let cob = raw_coboundary(u, a).map_err(err)?;
            let d = odd_crossing_series(u, &cob, 12).map_err(err)?;
            ensure!(d.coeffs == m.scale(2).coeffs, "odd-crossing series of the coboundary is not twice the measure");
            ensure!(measure(u, &a.complement(), 12).map_err(err)?.coeffs == m.coeffs, "complement changes the measure");
            ensure!(m.coeffs[0] == BigUint::ZERO, "nonzero constant term");
            n += 3;
        }
        Ok(n)
    });
    let engine_cases: Vec<(Universe, PathFamily)> = (0..200)
        .map(|i| {
            let u = Universe::finite(random_graph(rng, 8, 12, false));
            let fam = match i % 3 {
                0 => PathFamily::Cut(random_cut(rng, &u)),
                1 => PathFamily::OddCrossing(random_edge_set(rng, u.graph())),
                _ => PathFamily::Between(random_cut(rng, &u), random_cut(rng, &u)),
            };
            (u, fam)
        })
        .collect();
    r.run("bergman", "transfer matrix agrees with enumeration", || {
        for (u, fam) in &engine_cases {
            let a = transfer_counts(u, fam, 7).map_err(err)?;
            let b = enumeration_counts(u, fam, 7).map_err(err)?;
            ensure!(a.coeffs == b.coeffs, "engines disagree: {a} vs {b}");
            if let PathFamily::OddCrossing(_) = fam {
                ensure!(a.coeffs.iter().all(|c| !c.bit(0)), "odd-crossing coefficient is odd");
            }
        }
        Ok(engine_cases.len())
    });
    let pairs: Vec<(Universe, Vec<usize>, Vec<usize>)> = (0..100)
        .map(|_| {
            let u = Universe::finite(random_graph(rng, 9, 13, true));
            let rs = random_edge_set(rng, u.graph());
            let ss = random_edge_set(rng, u.graph());
            (u, rs, ss)
        })
        .collect();
    r.run("bergman", "subadditivity below the crossing distance", || {
        let mut n = 0;
        for (u, rs, ss) in &pairs {
            let d = crossing_distance(u, rs, ss).map_err(err)?;
            let both: Vec<usize> = rs.iter().chain(ss).copied().collect::<BTreeSet<_>>().into_iter().collect();
            let pr = odd_crossing_series(u, rs, d).map_err(err)?;
            let ps = odd_crossing_series(u, ss, d).map_err(err)?;
            let pu = odd_crossing_series(u, &both, d).map_err(err)?;
            for l in 0..d {
                ensure!(pu.coeffs[l] == &pr.coeffs[l] + &ps.coeffs[l], "additivity fails at l={l} < d={d}");
                n += 1;
            }
            ensure!(pu.coeffs[d] < &pr.coeffs[d] + &ps.coeffs[d], "no strict drop at d={d}");
            n += 1;
        }
        Ok(n)
    });
}

/// Connected graphs with up to three random cuts, shared by the sieve and
/// tree suites.
fn sieve_cases(rng: &mut ChaCha8Rng) -> Vec<(Universe, Vec<Cut>)> {
    (0..100)
        .map(|_| {
            let u = Universe::finite(random_graph(rng, 8, 12, true));
            let k = rng.gen_range(1..=3);
            let cuts = (0..k).map(|_| random_cut(rng, &u)).collect();
            (u, cuts)
        })
        .collect()
}

fn sieve_suite(r: &mut Runner, rng: &mut ChaCha8Rng) {
    let cases = sieve_cases(rng);
    let results: Vec<_> = cases
        .iter()
        .map(|(u, cuts)| irr_of(u, cuts, certified_bound(u.len()), SieveMode::Certified))
        .collect();
    r.run("sieve", "irr is nested, complement-stable, proper and generating", || {
        let mut n = 0;
        for ((u, _), res) in cases.iter().zip(&results) {
            let res = res.as_ref().map_err(|e| e.to_string())?;
            let irr: BTreeSet<&Cut> = res.irr.iter().collect();
            for a in &res.irr {
                ensure!(irr.contains(&a.complement()), "irr not complement-stable");
                ensure!(!a.is_empty() && !a.is_full(), "irr contains the empty or full set");
                for b in &res.irr {
                    let rep = nested_report(u, a, b).map_err(err)?;
                    ensure!(rep.nested, "irreducible cuts cross: corners {:?}", rep.sizes);
                    n += 1;
                }
                n += 2;
            }
            ensure!(res.generates_verified, "irr does not generate the algebra");
            n += 1;
        }
        Ok(n)
    });
    r.run("sieve", "corner dichotomy for irreducible pairs", || {
        let mut n = 0;
        for ((u, _), res) in cases.iter().zip(&results) {
            let res = res.as_ref().map_err(|e| e.to_string())?;
            let l = res.degree;
            for (i, a) in res.irr.iter().enumerate() {
                for b in &res.irr[i + 1..] {
                    let variants = [
                        (a.clone(), b.clone()),
                        (a.complement(), b.clone()),
                        (a.clone(), b.complement()),
                        (a.complement(), b.complement()),
                    ];
                    let mut best: Option<(Vec<BigUint>, usize)> = None;
                    for (k, (x, y)) in variants.iter().enumerate() {
                        let s = measure(u, &x.intersection(y), l).map_err(err)?.coeffs;
                        if best.as_ref().is_none_or(|(b, _)| s < *b) {
                            best = Some((s, k));
                        }
                    }
                    let (x, y) = &variants[best.unwrap().1];
                    ensure!(
                        x.intersection(y).is_empty() || x.union(y).is_full(),
                        "neither A∩B nor A^∁∩B^∁ is empty after the complement choice"
                    );
                    let [ca, cb, cc, _] = corner_series(u, x, y, l).map_err(err)?;
                    let sum = ca.add(&cb).map_err(err)?.add(&cc).map_err(err)?;
                    ensure!(sum.coeffs == measure(u, x, l).map_err(err)?.coeffs, "corner identity fails");
                    n += 2;
                }
            }
        }
        Ok(n)
    });
}

fn tree_suite(r: &mut Runner, rng: &mut ChaCha8Rng) {
    let cases = sieve_cases(rng);
    r.run("tree", "structure trees: tree, distance formula, vertex embedding", || {
        let mut n = 0;
        for (u, cuts) in &cases {
            let res = irr_of(u, cuts, certified_bound(u.len()), SieveMode::Certified).map_err(err)?;
            let sys = NestedSystem::verify(u, res.irr.clone()).map_err(err)?;
            let t = build_t(&sys).map_err(err)?;
            ensure!(t.tree.is_tree(), "T(E) is not a tree");
            let iota: Vec<usize> = (0..sys.len()).map(|e| t.vertex_of_label(&sys.iota(e)).unwrap()).collect();
            for e in 0..sys.len() {
                let dist = t.tree.distances_from(iota[e]);
                for f in 0..sys.len() {
                    let sym = sys.iota(e).symmetric_difference(&sys.iota(f)).count();
                    ensure!(dist[iota[f]] == Some(sym), "distance formula fails for e{e}, e{f}");
                    n += 1;
                }
            }
            for v in 0..u.len() {
                vertex_embed(&sys, &t, v).map_err(err)?;
                n += 1;
            }
        }
        Ok(n)
    });
    let trees: Vec<Graph> = (0..50).map(|_| { let n = rng.gen_range(1..=20); random_tree(rng, n) }).collect();
    r.run("tree", "double-dual round trip", || {
        for t in &trees {
            let sys = tree_cut_system(t).map_err(err)?;
            let u = build_u(&sys).map_err(err)?;
            ensure!(crate::treeops::same_tree_along(t, &u.tree, &u.edge_cut), "U(EE(T)) is not T");
            for (i, e) in t.edges().iter().enumerate() {
                for (tv, uv) in [(e.src, u.tree.edge(i).src), (e.dst, u.tree.edge(i).dst)] {
                    ensure!(sys.containing(tv) == u.labels[uv], "label of {} is not v** ∩ EE", t.vertex_id(tv));
                }
            }
        }
        Ok(trees.len())
    });
    let small: Vec<Graph> = (0..20).map(|_| { let n = rng.gen_range(1..=8); random_tree(rng, n) }).collect();
    r.run("tree", "collapse order does not change the size polynomial", || {
        for t in &small {
            let action = TreeAction::from_generators(
                t.clone(),
                crate::group::FiniteGroup::cyclic(1).unwrap(),
                vec![],
                vec![],
                vec![],
            )
            .map_err(err)?;
            let (a, _) = collapse_compressible_by(&action, |es| es[0]).map_err(err)?;
            let (b, _) = collapse_compressible_by(&action, |es| *es.last().unwrap()).map_err(err)?;
            ensure!(size_polynomial(&a) == size_polynomial(&b), "size depends on collapse order");
        }
        Ok(small.len())
    });
}

fn ends_suite(r: &mut Runner) {
    let oracle = |s: &str| GroupOracle::new(GroupSpec::parse(s).unwrap()).unwrap();
    r.run("ends", "ends profiles of Z, Z^2, F2 and Z/6", || {
        let z = ends_profile(&oracle("zd:1"), 7).map_err(err)?;
        ensure!(z.counts[1..] == [2; 5] && z.classification == EndsClass::Two, "Z profile {:?}", z.counts);
        let z2 = ends_profile(&oracle("zd:2"), 5).map_err(err)?;
        ensure!(z2.counts[1..] == [1; 3] && z2.classification == EndsClass::One, "Z^2 profile {:?}", z2.counts);
        let f2 = ends_profile(&oracle("free:2"), 5).map_err(err)?;
        ensure!(f2.counts == [4, 12, 36, 108], "F2 profile {:?}", f2.counts);
        let c6 = ends_profile(&oracle("cyclic:6"), 5).map_err(err)?;
        ensure!(c6.classification == EndsClass::Zero, "Z/6 not zero-ended");
        Ok(4)
    });
    r.run("ends", "splitting pipeline signatures", || {
        let zb = oracle("zd:1").ball(6).map_err(err)?;
        let z = stallings_pipeline(&zb, &balanced_cut(&zb).map_err(err)?, 2, 16).map_err(err)?;
        ensure!(z.outcome == SplitOutcome::Split, "Z pipeline undetermined");
        ensure!(
            (z.final_tree.edge_orbits, z.final_tree.vertex_orbits, z.final_tree.edge_stabilizer_orders.clone())
                == (1, 1, vec![1]),
            "Z final tree {:?}",
            z.final_tree
        );
        let db = oracle("fp:2,2").ball(6).map_err(err)?;
        let d = stallings_pipeline(&db, &balanced_cut(&db).map_err(err)?, 2, 16).map_err(err)?;
        let mut vs = d.final_tree.vertex_stabilizer_orders.clone();
        vs.sort();
        ensure!(
            d.outcome == SplitOutcome::Split && d.final_tree.edge_orbits == 1 && d.final_tree.vertex_orbits == 2 && vs == [2, 2],
            "D∞ final tree {:?}",
            d.final_tree
        );
        let z2 = oracle("zd:2").ball(6).map_err(err)?;
        ensure!(matches!(balanced_cut(&z2), Err(Error::NoBalancedCut(_))), "Z^2 was not refused");
        Ok(3)
    });
}
