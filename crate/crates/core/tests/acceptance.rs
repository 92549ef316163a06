//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! tolerance and runtime bound; the run fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cutforge::bergman::{
    certified_bound, crossing_distance, enumeration_counts, measure, odd_crossing_series, transfer_counts, PathFamily,
};
use cutforge::checks::{random_cut, random_edge_set, random_graph, random_tree};
use cutforge::cuts::{coboundary_sources, raw_coboundary, right_translate_sym_diff, Cut, Universe};
use cutforge::ends::{balanced_cut, ends_profile, stallings_pipeline, EndsClass, SplitOutcome};
use cutforge::graph::Graph;
use cutforge::group::{GroupOracle, GroupSpec};
use cutforge::sieve::{irr_of, SieveMode};
use cutforge::treeops::{build_t, build_u, tree_cut_system, vertex_embed, NestedSystem};
use cutforge::Error;

fn report(n: u32, what: &str, tolerance: &str, limit: Duration, start: Instant, failures: &[String]) {
    let took = start.elapsed();
    let ok = failures.is_empty() && took < limit;
    println!(
        "{} criterion {n}: {what}; tolerance {tolerance}; runtime {:.2}s < {}s; failures {}",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs(),
        failures.len()
    );
    assert!(failures.is_empty(), "criterion {n}: first failure: {}", failures[0]);
    assert!(took < limit, "criterion {n}: took {took:?}, limit {limit:?}");
}

// Independent walk counting: powers of the dart adjacency matrix.

type Mat = Vec<Vec<i128>>;

fn adjacency(g: &Graph, sign: impl Fn(usize) -> i128) -> Mat {
    let n = g.vertex_count();
    let mut m = vec![vec![0i128; n]; n];
    for (i, e) in g.edges().iter().enumerate() {
        m[e.src][e.dst] += sign(i);
        m[e.dst][e.src] += sign(i);
    }
    m
}

/// `out[l] = M^l` for `l ≤ lmax`.
fn powers(m: &Mat, lmax: usize) -> Vec<Mat> {
    let n = m.len();
    let mut out = vec![(0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect::<Mat>()];
    for _ in 0..lmax {
        let p = out.last().unwrap();
        let next = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| p[i][k] * m[k][j]).sum()).collect()).collect();
        out.push(next);
    }
    out
}

fn oracle_between(g: &Graph, start: &[bool], end: &[bool], lmax: usize) -> Vec<BigUint> {
    let n = g.vertex_count();
    powers(&adjacency(g, |_| 1), lmax)
        .iter()
        .map(|p| {
            let c: i128 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| start[i] && end[j]).map(|(i, j)| p[i][j]).sum();
            BigUint::from(c as u128)
        })
        .collect()
}

fn oracle_measure(u: &Universe, a: &Cut, lmax: usize) -> Vec<BigUint> {
    let start: Vec<bool> = (0..u.len()).map(|v| a.contains(v)).collect();
    let end: Vec<bool> = start.iter().map(|b| !b).collect();
    oracle_between(u.graph(), &start, &end, lmax)
}

/// Odd-crossing walks: (all walks - signed walks) / 2, where crossing edges
/// carry weight -1.
fn oracle_odd(g: &Graph, s: &[usize], lmax: usize) -> Vec<BigUint> {
    let all = powers(&adjacency(g, |_| 1), lmax);
    let signed = powers(&adjacency(g, |e| if s.contains(&e) { -1 } else { 1 }), lmax);
    all.iter()
        .zip(&signed)
        .map(|(a, b)| {
            let ta: i128 = a.iter().flatten().sum();
            let tb: i128 = b.iter().flatten().sum();
            assert_eq!((ta - tb) % 2, 0);
            BigUint::from(((ta - tb) / 2) as u128)
        })
        .collect()
}

/// Shortest walk traversing at least one edge of each set, by BFS on
/// (vertex, seen R, seen S) states.
fn oracle_crossing_distance(g: &Graph, r: &[usize], s: &[usize]) -> Option<usize> {
    let n = g.vertex_count();
    let mut dist = vec![usize::MAX; n * 4];
    let mut q = VecDeque::new();
    for v in 0..n {
        dist[v * 4] = 0;
        q.push_back((v, 0usize));
    }
    while let Some((v, f)) = q.pop_front() {
        let d = dist[v * 4 + f];
        if f == 3 {
            return Some(d);
        }
        for (i, e) in g.edges().iter().enumerate() {
            let flags = f | usize::from(r.contains(&i)) | (usize::from(s.contains(&i)) << 1);
            for (a, b) in [(e.src, e.dst), (e.dst, e.src)] {
                if a == v && dist[b * 4 + flags] == usize::MAX {
                    dist[b * 4 + flags] = d + 1;
                    q.push_back((b, flags));
                }
            }
        }
    }
    None
}

fn membership(c: &Cut, n: usize) -> Vec<bool> {
    (0..n).map(|v| c.contains(v)).collect()
}

/// Atom partition of the vertex set induced by a family, as a set of blocks.
fn atom_partition(cuts: &[Cut], n: usize) -> BTreeSet<Vec<usize>> {
    let mut blocks: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        blocks.entry(cuts.iter().map(|c| c.contains(v)).collect()).or_default().push(v);
    }
    blocks.into_values().collect()
}

fn corners_nonempty(a: &[bool], b: &[bool]) -> [bool; 4] {
    let mut out = [false; 4];
    for (&x, &y) in a.iter().zip(b) {
        out[(usize::from(!x) << 1) | usize::from(!y)] = true;
    }
    out
}

fn sieve_instances(seed: u64) -> Vec<(Universe, Vec<Cut>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100)
        .map(|_| {
            let u = Universe::finite(random_graph(&mut rng, 8, 12, true));
            let k = rng.gen_range(1..=3);
            let cuts = (0..k).map(|_| random_cut(&mut rng, &u)).collect();
            (u, cuts)
        })
        .collect()
}

fn criterion_01_bergman_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = Vec::new();
    for i in 0..200 {
        let u = Universe::finite(random_graph(&mut rng, 10, 14, false));
        let a = random_cut(&mut rng, &u);
        let m = measure(&u, &a, 12).unwrap();
        let mc = measure(&u, &a.complement(), 12).unwrap();
        let cob = raw_coboundary(&u, &a).unwrap();
        let d = odd_crossing_series(&u, &cob, 12).unwrap();
        let two: Vec<BigUint> = m.coeffs.iter().map(|c| c * 2u32).collect();
        if m.coeffs != oracle_measure(&u, &a, 12) {
            failures.push(format!("instance {i}: measure differs from the matrix-power oracle"));
        }
        if d.coeffs != two || oracle_odd(u.graph(), &cob, 12) != two {
            failures.push(format!("instance {i}: coboundary series is not twice the measure"));
        }
        if mc.coeffs != m.coeffs {
            failures.push(format!("instance {i}: complement measure differs"));
        }
    }
    report(1, "Σ(δA) = 2Σ(A), Σ(A) = Σ(A^∁) for ℓ ≤ 12 on 200 graphs", "0 (exact integers)", Duration::from_secs(30), start, &failures);
}

fn criterion_02_engine_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut failures = Vec::new();
    for i in 0..200 {
        let u = Universe::finite(random_graph(&mut rng, 8, 12, false));
        let fams = [
            PathFamily::Cut(random_cut(&mut rng, &u)),
            PathFamily::OddCrossing(random_edge_set(&mut rng, u.graph())),
            PathFamily::Between(random_cut(&mut rng, &u), random_cut(&mut rng, &u)),
        ];
        for f in &fams {
            let a = transfer_counts(&u, f, 7).unwrap();
            let b = enumeration_counts(&u, f, 7).unwrap();
            if a.coeffs != b.coeffs {
                failures.push(format!("instance {i}: {a} vs {b}"));
            }
        }
    }
    report(2, "transfer matrix = enumeration, all families, 200 instances, ℓ ≤ 7", "0 (exact integers)", Duration::from_secs(60), start, &failures);
}

fn criterion_03_crossing_subadditivity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut failures = Vec::new();
    for i in 0..100 {
        let u = Universe::finite(random_graph(&mut rng, 9, 13, true));
        let g = u.graph();
        let r = random_edge_set(&mut rng, g);
        let s = random_edge_set(&mut rng, g);
        let d = crossing_distance(&u, &r, &s).unwrap();
        if Some(d) != oracle_crossing_distance(g, &r, &s) {
            failures.push(format!("pair {i}: crossing distance {d} differs from BFS"));
            continue;
        }
        let both: Vec<usize> = r.iter().chain(&s).copied().collect::<BTreeSet<_>>().into_iter().collect();
        let (pr, ps, pu) = (oracle_odd(g, &r, d), oracle_odd(g, &s, d), oracle_odd(g, &both, d));
        if odd_crossing_series(&u, &both, d).unwrap().coeffs != pu {
            failures.push(format!("pair {i}: union series differs from oracle"));
        }
        for l in 0..d {
            if pu[l] != &pr[l] + &ps[l] {
                failures.push(format!("pair {i}: not additive at ℓ = {l} < d = {d}"));
            }
        }
        if pu[d] >= &pr[d] + &ps[d] {
            failures.push(format!("pair {i}: no strict drop at d = {d}"));
        }
    }
    report(3, "additive below d, strict at d, 100 pairs", "0 (exact integers)", Duration::from_secs(30), start, &failures);
}

fn criterion_04_sieve_soundness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (i, (u, cuts)) in sieve_instances(104).iter().enumerate() {
        let n = u.len();
        let res = irr_of(u, cuts, certified_bound(n), SieveMode::Certified).unwrap();
        let irr: BTreeSet<Vec<bool>> = res.irr.iter().map(|c| membership(c, n)).collect();
        for a in &irr {
            let comp: Vec<bool> = a.iter().map(|b| !b).collect();
            if !irr.contains(&comp) {
                failures.push(format!("instance {i}: irr is not complement-stable"));
            }
            if a.iter().all(|&b| b) || a.iter().all(|&b| !b) {
                failures.push(format!("instance {i}: irr contains ∅ or V"));
            }
            for b in &irr {
                if corners_nonempty(a, b).iter().all(|&x| x) {
                    failures.push(format!("instance {i}: two irreducibles cross"));
                }
            }
        }
        if atom_partition(&res.irr, n) != atom_partition(cuts, n) {
            failures.push(format!("instance {i}: irr generates a different algebra"));
        }
    }
    report(4, "irr nested, ∁-stable, proper, generating on 100 connected graphs at L*", "0 failures", Duration::from_secs(300), start, &failures);
}

fn criterion_05_corner_dichotomy() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut pairs = 0;
    for (i, (u, cuts)) in sieve_instances(104).iter().enumerate() {
        let l = certified_bound(u.len());
        let res = irr_of(u, cuts, l, SieveMode::Certified).unwrap();
        for (j, a) in res.irr.iter().enumerate() {
            for b in &res.irr[j + 1..] {
                pairs += 1;
                let variants = [
                    (a.clone(), b.clone()),
                    (a.complement(), b.clone()),
                    (a.clone(), b.complement()),
                    (a.complement(), b.complement()),
                ];
                let (x, y) = variants
                    .iter()
                    .min_by_key(|(x, y)| oracle_measure(u, &x.intersection(y), l))
                    .unwrap();
                if !x.intersection(y).is_empty() && !x.complement().intersection(&y.complement()).is_empty() {
                    failures.push(format!("instance {i}: neither A∩B nor A^∁∩B^∁ is empty"));
                }
            }
        }
    }
    assert!(pairs > 0);
    report(5, &format!("corner dichotomy on {pairs} irreducible pairs"), "0 failures", Duration::from_secs(300), start, &failures);
}

fn tree_distances(t: &Graph, from: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; t.vertex_count()];
    d[from] = 0;
    let mut q = VecDeque::from([from]);
    while let Some(v) = q.pop_front() {
        for e in t.edges() {
            for (a, b) in [(e.src, e.dst), (e.dst, e.src)] {
                if a == v && d[b] == usize::MAX {
                    d[b] = d[v] + 1;
                    q.push_back(b);
                }
            }
        }
    }
    d
}

fn criterion_06_tree_construction() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (i, (u, cuts)) in sieve_instances(104).iter().enumerate() {
        let res = irr_of(u, cuts, certified_bound(u.len()), SieveMode::Certified).unwrap();
        let sys = NestedSystem::verify(u, res.irr.clone()).unwrap();
        let t = build_t(&sys).unwrap();
        let g = &t.tree;
        if !(g.is_tree() && g.vertex_count() == g.edge_count() + 1 && tree_distances(g, 0).iter().all(|&d| d != usize::MAX)) {
            failures.push(format!("instance {i}: T(E) is not a tree"));
            continue;
        }
        let iota: Vec<BTreeSet<usize>> = (0..sys.len()).map(|e| sys.iota(e)).collect();
        let at: Vec<usize> = iota.iter().map(|l| t.labels.iter().position(|x| x == l).unwrap()).collect();
        for e in 0..sys.len() {
            let d = tree_distances(g, at[e]);
            for f in 0..sys.len() {
                if d[at[f]] != iota[e].symmetric_difference(&iota[f]).count() {
                    failures.push(format!("instance {i}: distance formula fails for ({e}, {f})"));
                }
            }
        }
        for v in 0..u.len() {
            let expect: BTreeSet<usize> = (0..sys.len()).filter(|&e| sys.cuts()[e].contains(v)).collect();
            match vertex_embed(&sys, &t, v) {
                Ok(x) if t.labels[x] == expect => {}
                _ => failures.push(format!("instance {i}: vertex {v} does not embed at v** ∩ E")),
            }
        }
    }
    report(6, "T(E) is a tree, distance formula, vertex embedding", "0 failures", Duration::from_secs(300), start, &failures);
}

fn criterion_07_double_dual_round_trip() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut failures = Vec::new();
    for i in 0..50 {
        let n = rng.gen_range(1..=20);
        let t = random_tree(&mut rng, n);
        let sys = tree_cut_system(&t).unwrap();
        let u = build_u(&sys).unwrap();
        // v ↦ the U-vertex labelled {e : v ∈ e**}; it must be a bijection
        // carrying every T-edge to the U-edge of the same index.
        let phi: Vec<Option<usize>> = (0..n)
            .map(|v| {
                let label: BTreeSet<usize> = (0..sys.len()).filter(|&e| sys.cuts()[e].contains(v)).collect();
                u.labels.iter().position(|l| *l == label)
            })
            .collect();
        let image: BTreeSet<Option<usize>> = phi.iter().copied().collect();
        let ok = u.tree.vertex_count() == n
            && !image.contains(&None)
            && image.len() == n
            && t.edges().iter().enumerate().all(|(j, e)| {
                let f = u.tree.edge(u.edge_cut[j]);
                phi[e.src] == Some(f.src) && phi[e.dst] == Some(f.dst)
            });
        if !ok {
            failures.push(format!("tree {i} ({n} vertices): U(EE(T)) is not T"));
        }
    }
    report(7, "U(EE(T)) ≅ T as labelled trees, 50 trees ≤ 20 vertices", "0 failures", Duration::from_secs(10), start, &failures);
}

fn criterion_08_right_translate_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut failures = Vec::new();
    for (name, spec, radius) in [("Z", GroupSpec::Zd { d: 1 }, 8), ("F2", GroupSpec::Free { k: 2 }, 4)] {
        let o = GroupOracle::new(spec).unwrap();
        let ball = o.ball(radius).unwrap();
        for c in 0..20 {
            let a = random_cut(&mut rng, ball.universe());
            for s in 0..o.generator_count() {
                // g ∈ A ▽ As⁻¹ iff exactly one of g, gs lies in A.
                let direct: BTreeSet<usize> = (0..ball.elements().len())
                    .filter(|&v| ball.distance(v) < radius)
                    .filter(|&v| {
                        let gs = o.multiply(ball.element(v), &o.generator(s));
                        a.contains(v) != a.contains(ball.index_of(&gs).unwrap())
                    })
                    .collect();
                let lhs: BTreeSet<usize> = right_translate_sym_diff(&ball, &a, s).into_iter().collect();
                let rhs: BTreeSet<usize> = coboundary_sources(&ball, &a, s).into_iter().collect();
                if lhs != direct || rhs != direct {
                    failures.push(format!("{name}: cut {c}, generator {s}"));
                }
            }
        }
    }
    report(8, "A ▽ As⁻¹ = {g : (g,s) ∈ δA} on Z (R=8) and F2 (R=4), 20 cuts each", "0 (exact set equality)", Duration::from_secs(60), start, &failures);
}

fn criterion_09_ends() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let o = |s: &str| GroupOracle::new(GroupSpec::parse(s).unwrap()).unwrap();
    let z = ends_profile(&o("zd:1"), 7).unwrap();
    for (r, c) in z.radii.iter().zip(&z.counts) {
        if (2..=6).contains(r) && *c != 2 {
            failures.push(format!("Z: {c} components at R = {r}"));
        }
    }
    if z.classification != EndsClass::Two {
        failures.push(format!("Z classified {}", z.classification));
    }
    let z2 = ends_profile(&o("zd:2"), 5).unwrap();
    for (r, c) in z2.radii.iter().zip(&z2.counts) {
        if (2..=4).contains(r) && *c != 1 {
            failures.push(format!("Z^2: {c} components at R = {r}"));
        }
    }
    if z2.classification != EndsClass::One {
        failures.push(format!("Z^2 classified {}", z2.classification));
    }
    let f2 = ends_profile(&o("free:2"), 5).unwrap();
    for r in 1..=4 {
        let i = f2.radii.iter().position(|x| *x == r);
        if i.map(|i| f2.counts[i]) != Some(4 * 3usize.pow(r as u32 - 1)) {
            failures.push(format!("F2: wrong count at R = {r}"));
        }
    }
    let mul: Vec<Vec<usize>> = (0..6).map(|i| (0..6).map(|j| (i + j) % 6).collect()).collect();
    let elements = (0..6).map(|i| format!("r{i}")).collect();
    let z6 = GroupOracle::new(GroupSpec::Table { elements, mul, gens: vec!["r1".into()] }).unwrap();
    if ends_profile(&z6, 6).unwrap().classification != EndsClass::Zero {
        failures.push("Z/6 table not zero-ended".into());
    }
    report(9, "ends of Z, Z^2, F2 and Z/6", "0 (exact counts)", Duration::from_secs(60), start, &failures);
}

fn criterion_10_splitting_pipeline() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let o = |s: &str| GroupOracle::new(GroupSpec::parse(s).unwrap()).unwrap();

    let zb = o("zd:1").ball(6).unwrap();
    let cut = balanced_cut(&zb).unwrap();
    let half: Vec<usize> = (0..zb.elements().len()).filter(|&v| zb.element(v).0[0] <= 0).collect();
    if cut.members().collect::<Vec<_>>() != half {
        failures.push("Z: balanced cut is not the half-line {n ≤ 0}".into());
    }
    let z = stallings_pipeline(&zb, &cut, 2, 16).unwrap();
    let f = &z.final_tree;
    if z.outcome != SplitOutcome::Split || f.edge_orbits != 1 || f.vertex_orbits != 1 || f.edge_stabilizer_orders != [1] {
        failures.push(format!("Z: {:?} {f:?}", z.outcome));
    }

    let db = o("fp:2,2").ball(6).unwrap();
    let d = stallings_pipeline(&db, &balanced_cut(&db).unwrap(), 2, 16).unwrap();
    let f = &d.final_tree;
    let mut vs = f.vertex_stabilizer_orders.clone();
    vs.sort();
    if d.outcome != SplitOutcome::Split || f.edge_orbits != 1 || f.vertex_orbits != 2 || vs != [2, 2] {
        failures.push(format!("D∞: {:?} {f:?}", d.outcome));
    }

    let z2 = o("zd:2").ball(6).unwrap();
    if !matches!(balanced_cut(&z2), Err(Error::NoBalancedCut(_))) {
        failures.push("Z^2 was not refused".into());
    }
    report(10, "Z, D∞ split as expected and Z^2 refused at R = 6, W = 2", "0 (exact orbit data)", Duration::from_secs(120), start, &failures);
}

fn criterion_11_determinism() {
    let start = Instant::now();
    let run = || {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = cutforge::cli::run(["cutforge", "check", "--suite", "all", "--seed", "0"], &mut out, &mut err);
        (code, out)
    };
    let (c1, a) = run();
    let (c2, b) = run();
    let mut failures = Vec::new();
    if c1 != 0 || c2 != 0 {
        failures.push(format!("exit codes {c1}, {c2}"));
    }
    if a != b {
        failures.push("transcripts differ".into());
    }
    if !String::from_utf8_lossy(&a).lines().last().is_some_and(|l| l.starts_with("OK (")) {
        failures.push("transcript does not end with OK".into());
    }
    report(11, "two `check --suite all --seed 0` runs are byte-identical", "0 (byte equality)", Duration::from_secs(300), start, &failures);
}

fn main() {
    let criteria: [fn(); 11] = [
        criterion_01_bergman_identities,
        criterion_02_engine_equivalence,
        criterion_03_crossing_subadditivity,
        criterion_04_sieve_soundness,
        criterion_05_corner_dichotomy,
        criterion_06_tree_construction,
        criterion_07_double_dual_round_trip,
        criterion_08_right_translate_identity,
        criterion_09_ends,
        criterion_10_splitting_pipeline,
        criterion_11_determinism,
    ];
    let failed = criteria.iter().filter(|c| std::panic::catch_unwind(**c).is_err()).count();
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
