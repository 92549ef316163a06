mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use common::{connected_graphs, cut, with_masks};
use cutforge::bergman::certified_bound;
use cutforge::cuts::{nested_report, translate_cut, Cut, Universe};
use cutforge::group::{GroupOracle, GroupSpec};
use cutforge::sieve::{irr_of, select_nested_generating, Class, SieveMode};

/// `c` lies in the algebra generated by `d` iff it is a union of atoms.
fn in_generated_algebra(c: &Cut, d: &[&Cut], n: usize) -> bool {
    let mut side: BTreeMap<Vec<bool>, bool> = BTreeMap::new();
    (0..n).all(|v| {
        let sig: Vec<bool> = d.iter().map(|x| x.contains(v)).collect();
        *side.entry(sig).or_insert(c.contains(v)) == c.contains(v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certified_classes_match_the_definition(gm in with_masks(connected_graphs(7, 5), 1..=3)) {
        let (g, masks) = gm;
        let u = Universe::finite(g);
        let family: Vec<Cut> = masks.iter().map(|m| cut(&u, m)).collect();
        let res = irr_of(&u, &family, certified_bound(u.len()), SieveMode::Certified).unwrap();
        for e in &res.elements {
            let smaller: Vec<&Cut> = res.elements.iter().filter(|f| f.series.coeffs < e.series.coeffs).map(|f| &f.cut).collect();
            let reducible = in_generated_algebra(&e.cut, &smaller, u.len());
            prop_assert_eq!(e.class, if reducible { Class::Reducible } else { Class::Irreducible });
        }
    }

    #[test]
    fn irr_is_sound(gm in with_masks(connected_graphs(8, 5), 1..=3)) {
        let (g, masks) = gm;
        let u = Universe::finite(g);
        let family: Vec<Cut> = masks.iter().map(|m| cut(&u, m)).collect();
        let res = irr_of(&u, &family, certified_bound(u.len()), SieveMode::Certified).unwrap();
        let irr: BTreeSet<&Cut> = res.irr.iter().collect();
        for a in &res.irr {
            prop_assert!(!a.is_empty() && !a.is_full());
            prop_assert!(irr.contains(&a.complement()));
            for b in &res.irr {
                prop_assert!(nested_report(&u, a, b).unwrap().nested);
            }
        }
        for c in &family {
            let gens: Vec<&Cut> = res.irr.iter().collect();
            prop_assert!(in_generated_algebra(c, &gens, u.len()));
        }
    }
}

#[test]
fn uncertified_degree_is_refused() {
    let u = Universe::finite(common::build_graph(3, &[(0, 1), (1, 2)]));
    let a = u.cut([0]).unwrap();
    assert!(irr_of(&u, &[a], 5, SieveMode::Certified).is_err());
}

#[test]
fn half_line_translates_are_kept() {
    let o = GroupOracle::new(GroupSpec::Zd { d: 1 }).unwrap();
    let ball = o.ball(6).unwrap();
    let u = ball.universe();
    let half = u.cut((0..ball.elements().len()).filter(|&v| ball.element(v).0[0] <= 0)).unwrap();
    let family: Vec<Cut> = [-1i64, 0, 1]
        .iter()
        .map(|&k| translate_cut(&ball, &cutforge::group::Element(vec![k]), &half).unwrap())
        .collect();
    let sys = select_nested_generating(u, &family, 16, SieveMode::Truncated, None).unwrap();
    let got: BTreeSet<&Cut> = sys.cuts().iter().collect();
    let mut expect: BTreeSet<&Cut> = family.iter().collect();
    let comps: Vec<Cut> = family.iter().map(Cut::complement).collect();
    expect.extend(comps.iter());
    assert_eq!(got, expect);
}
