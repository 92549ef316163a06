//! Ends of the built-in groups, balanced cuts, and the splitting pipeline.

use std::fmt;

use serde::Serialize;

use crate::cuts::{coboundary, orbit_cuts, translate_cut, Cut};
use crate::group::{BallView, GroupOracle, DEFAULT_BALL_CAP};
use crate::sieve::{select_nested_generating, SieveMode};
use crate::treeops::{build_t, induce_partial_action, CollapseStep, TreeAction};
use crate::{Certificate, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "ends", rename_all = "snake_case")]
pub enum EndsClass {
    Zero,
    One,
    Two,
    InfinitelyMany { growth: Vec<usize> },
    Undetermined,
}

impl fmt::Display for EndsClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndsClass::Zero => "zero ends",
            EndsClass::One => "one end",
            EndsClass::Two => "two ends",
            EndsClass::InfinitelyMany { .. } => "infinitely many ends",
            EndsClass::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndsProfile {
    pub rmax: usize,
    pub radii: Vec<usize>,
    /// Components of `ball(rmax)` minus the edges of `ball(R)` that reach
    /// the outer sphere.
    pub counts: Vec<usize>,
    pub classification: EndsClass,
    pub certificate: Certificate,
}

impl fmt::Display for EndsProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "R\tinfinite components")?;
        for (r, c) in self.radii.iter().zip(&self.counts) {
            writeln!(f, "{r}\t{c}")?;
        }
        writeln!(f, "{}", self.classification)
    }
}

pub fn ends_profile(oracle: &GroupOracle, rmax: usize) -> Result<EndsProfile> {
    ends_profile_with_cap(oracle, rmax, DEFAULT_BALL_CAP)
}

pub fn ends_profile_with_cap(oracle: &GroupOracle, rmax: usize, cap: usize) -> Result<EndsProfile> {
    if rmax < 2 {
        return Err(Error::RadiusTooSmall(format!("rmax {rmax} (need at least 2)")));
    }
    let ball = oracle.ball_with_cap(rmax, cap)?;
    let g = ball.graph();
    let radii: Vec<usize> = (1..rmax).collect();
    let counts: Vec<usize> = radii
        .iter()
        .map(|&r| {
            let inner: Vec<usize> = (0..g.edge_count())
                .filter(|&e| ball.distance(g.edge(e).src) <= r && ball.distance(g.edge(e).dst) <= r)
                .collect();
            let parts = g.components(&inner).unwrap();
            parts
                .blocks
                .iter()
                .filter(|b| b.iter().any(|&v| ball.distance(v) == rmax))
                .count()
        })
        .collect();
    let classification = classify_counts(oracle.is_finite(), &counts);
    let certificate = if oracle.is_finite() { Certificate::Exact } else { Certificate::BallVerified { radius: rmax } };
    Ok(EndsProfile { rmax, radii, counts, classification, certificate })
}

fn classify_counts(finite: bool, counts: &[usize]) -> EndsClass {
    if finite {
        EndsClass::Zero
    } else if counts.iter().all(|&c| c == 1) {
        EndsClass::One
    } else if counts.iter().all(|&c| c == 2) {
        EndsClass::Two
    } else if counts.len() >= 3 && counts[0] >= 3 && counts.windows(2).all(|w| w[0] < w[1]) {
        EndsClass::InfinitelyMany { growth: counts.to_vec() }
    } else {
        EndsClass::Undetermined
    }
}

/// A cut of `ball` whose two sides both reach the sphere, obtained by
/// removing the edges between the identity and a generator (generators tried
/// in order). The returned side contains the identity.
pub fn balanced_cut(ball: &BallView) -> Result<Cut> {
    let o = ball.oracle();
    let profile = ends_profile(o, ball.radius())?;
    if !matches!(profile.classification, EndsClass::Two | EndsClass::InfinitelyMany { .. }) {
        return Err(Error::NoBalancedCut(profile.classification.to_string()));
    }
    let g = ball.graph();
    let u = ball.universe();
    let reaches_sphere = |c: &Cut| c.members().any(|v| ball.distance(v) == ball.radius());
    for i in 0..o.generator_count() {
        let s = ball.index_of(&o.generator(i)).unwrap();
        let removed: Vec<usize> = (0..g.edge_count())
            .filter(|&e| {
                let (a, b) = (g.edge(e).src, g.edge(e).dst);
                (a == 0 && b == s) || (a == s && b == 0)
            })
            .collect();
        let parts = g.components(&removed)?;
        let far = parts.block_of[s];
        if far == parts.block_of[0] {
            continue;
        }
        let side = u.cut(parts.blocks[far].iter().copied())?.complement();
        if reaches_sphere(&side) && reaches_sphere(&side.complement()) && coboundary(u, &side).is_ok() {
            return Ok(side);
        }
    }
    Err(Error::NoBalancedCut(format!("no generator edge at the identity separates the ball (profile: {})", profile.classification)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeSummary {
    pub vertices: usize,
    pub edges: usize,
    pub edge_orbits: usize,
    pub vertex_orbits: usize,
    /// Stabilizer order per edge orbit, in orbit order.
    pub edge_stabilizer_orders: Vec<usize>,
    pub vertex_stabilizer_orders: Vec<usize>,
    pub globally_fixed_vertices: Vec<String>,
}

impl TreeSummary {
    pub fn of(action: &TreeAction) -> TreeSummary {
        let eo = action.edge_orbits();
        let vo = action.vertex_orbits();
        TreeSummary {
            vertices: action.tree.vertex_count(),
            edges: action.tree.edge_count(),
            edge_orbits: eo.len(),
            vertex_orbits: vo.len(),
            edge_stabilizer_orders: eo.iter().map(|o| action.edge_stabilizer_order(o[0])).collect(),
            vertex_stabilizer_orders: vo.iter().map(|o| action.vertex_stabilizer_order(o[0])).collect(),
            globally_fixed_vertices: action
                .global_fixed_vertices()
                .into_iter()
                .map(|v| action.tree.vertex_id(v).to_string())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveSummary {
    pub orbit_cuts: usize,
    pub selected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SplitOutcome {
    /// The tree before the last collapse has a single edge orbit.
    Split,
    Undetermined { diagnostic: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct SplittingReport {
    pub cut: Vec<String>,
    pub words: Vec<String>,
    pub sieve: SieveSummary,
    pub tree: TreeSummary,
    pub collapse_log: Vec<CollapseStep>,
    pub final_tree: TreeSummary,
    pub outcome: SplitOutcome,
    pub radius: usize,
    pub degree: usize,
    pub word_bound: usize,
    #[serde(skip)]
    pub final_action: TreeAction,
}

impl SplittingReport {
    pub fn final_dot(&self) -> String {
        self.final_action.tree.to_dot("splitting_tree")
    }
}

/// Orbit of the cut under the word ball of radius `w` → nested generating
/// irreducibles → `T(E)` with the partial action → edge orbits collapsed one
/// at a time until some vertex is fixed by every generator. The tree just
/// before that last collapse is reported.
pub fn stallings_pipeline(ball: &BallView, cut: &Cut, w: usize, l: usize) -> Result<SplittingReport> {
    let o = ball.oracle();
    let u = ball.universe();
    let words = o.ball(w)?.elements().to_vec();
    let orbit = orbit_cuts(ball, cut, &words)?;
    let family: Vec<Cut> = orbit.iter().map(|(_, c)| c.clone()).collect();
    let images = |c: &Cut| -> Result<Vec<Option<Cut>>> {
        Ok((0..o.generator_count())
            .flat_map(|i| [o.generator(i), o.invert(&o.generator(i))])
            .map(|g| translate_cut(ball, &g, c).ok())
            .collect())
    };
    let sys = select_nested_generating(u, &family, l, SieveMode::Truncated, Some(&images))?;
    let t = build_t(&sys)?;
    let action = induce_partial_action(&sys, &t, ball, w)?;
    let tree = TreeSummary::of(&action);

    let mut current = action;
    let mut log = Vec::new();
    let outcome = loop {
        if !current.global_fixed_vertices().is_empty() {
            break SplitOutcome::Undetermined {
                diagnostic: "a vertex is fixed by every generator before any edge orbit remains".into(),
            };
        }
        let orbits = current.edge_orbits();
        let first = orbits[0][0];
        let next = current.collapse_edge_orbit(first)?;
        let step = CollapseStep { orbit: orbits[0].iter().map(|&e| current.tree.edge(e).id.clone()).collect() };
        if !next.global_fixed_vertices().is_empty() {
            if orbits.len() != 1 {
                break SplitOutcome::Undetermined {
                    diagnostic: format!("fixed vertex appeared with {} edge orbits left", orbits.len()),
                };
            }
            break SplitOutcome::Split;
        }
        log.push(step);
        current = next;
    };
    let final_tree = TreeSummary::of(&current);
    Ok(SplittingReport {
        cut: cut.members().map(|v| u.graph().vertex_id(v).to_string()).collect(),
        words: words.iter().map(|x| o.format(x)).collect(),
        sieve: SieveSummary { orbit_cuts: family.len(), selected: sys.len() },
        tree,
        collapse_log: log,
        final_tree,
        outcome,
        radius: ball.radius(),
        degree: l,
        word_bound: w,
        final_action: current,
    })
}
