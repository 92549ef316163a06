use cutforge::ends::{balanced_cut, ends_profile, stallings_pipeline, EndsClass, SplitOutcome};
use cutforge::group::{GroupOracle, GroupSpec};

fn oracle(s: &str) -> GroupOracle {
    GroupOracle::new(GroupSpec::parse(s).unwrap()).unwrap()
}

#[test]
fn finite_groups_have_no_infinite_components_past_the_diameter() {
    for (spec, diameter) in [("cyclic:6", 3), ("cyclic:5", 2)] {
        let p = ends_profile(&oracle(spec), 7).unwrap();
        for (r, c) in p.radii.iter().zip(&p.counts) {
            if *r >= diameter {
                assert_eq!(*c, 0, "{spec} at R = {r}");
            }
        }
        assert_eq!(p.classification, EndsClass::Zero);
    }
}

#[test]
fn z_profile_is_stable_and_f2_profile_is_exact() {
    let z = ends_profile(&oracle("zd:1"), 9).unwrap();
    for (r, c) in z.radii.iter().zip(&z.counts) {
        if (2..=8).contains(r) {
            assert_eq!(*c, 2);
        }
    }
    let f2 = ends_profile(&oracle("free:2"), 5).unwrap();
    let expect: Vec<usize> = (1..=4).map(|r| 4 * 3usize.pow(r - 1)).collect();
    assert_eq!(f2.counts, expect);
    assert!(matches!(f2.classification, EndsClass::InfinitelyMany { .. }));
    assert!(f2.to_string().contains("infinitely many"));
}

#[test]
fn balanced_cut_sides_reach_the_sphere() {
    for spec in ["zd:1", "free:2", "fp:2,2", "fp:2,3"] {
        let ball = oracle(spec).ball(5).unwrap();
        let a = balanced_cut(&ball).unwrap();
        let sphere = ball.sphere();
        assert!(sphere.iter().any(|&v| a.contains(v)), "{spec}");
        assert!(sphere.iter().any(|&v| !a.contains(v)), "{spec}");
        assert!(a.contains(ball.index_of(&ball.oracle().identity()).unwrap()));
    }
}

#[test]
fn final_tree_is_the_first_stage() {
    for spec in ["zd:1", "fp:2,2"] {
        let ball = oracle(spec).ball(6).unwrap();
        let report = stallings_pipeline(&ball, &balanced_cut(&ball).unwrap(), 2, 16).unwrap();
        assert_eq!(report.outcome, SplitOutcome::Split, "{spec}");
        let fin = &report.final_action;
        assert_eq!(fin.edge_orbits().len(), 1);
        assert!(fin.global_fixed_vertices().is_empty(), "{spec}: a vertex is already fixed");
        let after = fin.collapse_edge_orbit(0).unwrap();
        assert!(!after.global_fixed_vertices().is_empty(), "{spec}: collapsing the last orbit fixes nothing");
    }
}
