use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cutforge_ffi::*;

fn take(s: *mut c_char) -> serde_json::Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { cf_string_free(s) };
    v
}

fn last_error() -> String {
    let p = cf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const PATH4: &str = r#"{"vertices":["1","2","3","4"],"edges":[{"id":"a","src":"1","dst":"2"},{"id":"b","src":"2","dst":"3"},{"id":"c","src":"3","dst":"4"}]}"#;

fn path4() -> *mut CfGraph {
    let json = CString::new(PATH4).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cf_graph_from_json(json.as_ptr(), &mut g) }, CfStatus::Ok);
    g
}

#[test]
fn graph_handles_and_measure() {
    let g = path4();
    let (mut nv, mut ne) = (0, 0);
    assert_eq!(unsafe { cf_graph_counts(g, &mut nv, &mut ne) }, CfStatus::Ok);
    assert_eq!((nv, ne), (4, 3));
    let members = CString::new(r#"["1"]"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cf_measure_json(g, members.as_ptr(), 4, &mut out) }, CfStatus::Ok);
    assert_eq!(take(out)["coeffs"], serde_json::json!(["0", "1", "1", "3", "3"]));
    unsafe { cf_graph_free(g) };
}

#[test]
fn sieve_and_trees() {
    let g = path4();
    let cuts = CString::new(r#"[["1"],["1","2"]]"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cf_sieve_json(g, cuts.as_ptr(), 0, &mut out) }, CfStatus::Ok);
    let v = take(out);
    assert_eq!(v["mode"], "certified");
    assert_eq!(v["irr"].as_array().unwrap().len(), 4);

    let chain = CString::new(r#"[["1"],["1","2"],["1","2","3"]]"#).unwrap();
    assert_eq!(unsafe { cf_tree_json(g, chain.as_ptr(), b'U' as c_char, &mut out) }, CfStatus::Ok);
    let v = take(out);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
    assert!(v["dot"].as_str().unwrap().starts_with("digraph"));

    assert_eq!(unsafe { cf_tree_json(g, chain.as_ptr(), b'T' as c_char, &mut out) }, CfStatus::Verification);
    assert!(last_error().contains("complement"));
    assert_eq!(unsafe { cf_tree_json(g, chain.as_ptr(), b'X' as c_char, &mut out) }, CfStatus::InvalidArgument);
    unsafe { cf_graph_free(g) };
}

#[test]
fn groups_ends_and_splitting() {
    let spec = CString::new("fp:2,2").unwrap();
    let mut grp = ptr::null_mut();
    assert_eq!(unsafe { cf_group_new(spec.as_ptr(), &mut grp) }, CfStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cf_ends_profile_json(grp, 6, &mut out) }, CfStatus::Ok);
    assert_eq!(take(out)["classification"]["ends"], "two");
    assert_eq!(unsafe { cf_split_json(grp, 6, 2, 16, &mut out) }, CfStatus::Ok);
    let v = take(out);
    assert_eq!(v["outcome"]["outcome"], "split");
    assert_eq!(v["final_tree"]["vertex_orbits"], 2);
    assert_eq!(unsafe { cf_group_ball_json(grp, 2, &mut out) }, CfStatus::Ok);
    assert_eq!(take(out)["vertices"].as_array().unwrap().len(), 5);
    unsafe { cf_group_free(grp) };

    let z2 = CString::new("zd:2").unwrap();
    assert_eq!(unsafe { cf_group_new(z2.as_ptr(), &mut grp) }, CfStatus::Ok);
    assert_eq!(unsafe { cf_split_json(grp, 6, 2, 16, &mut out) }, CfStatus::Verification);
    assert!(last_error().contains("balanced"));
    unsafe { cf_group_free(grp) };
}

#[test]
fn errors_are_reported() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cf_graph_from_json(ptr::null(), &mut g) }, CfStatus::NullPointer);
    let bad = CString::new(r#"{"vertices":["a"],"edges":[{"id":"e","src":"a","dst":"z"}]}"#).unwrap();
    assert_eq!(unsafe { cf_graph_from_json(bad.as_ptr(), &mut g) }, CfStatus::Parse);
    assert!(last_error().contains('z'));
    let spec = CString::new("zd:nope").unwrap();
    let mut grp = ptr::null_mut();
    assert_eq!(unsafe { cf_group_new(spec.as_ptr(), &mut grp) }, CfStatus::Parse);
    assert!(grp.is_null());
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cf_ends_profile_json(ptr::null(), 3, &mut out) }, CfStatus::NullPointer);
    unsafe {
        cf_graph_free(ptr::null_mut());
        cf_group_free(ptr::null_mut());
        cf_string_free(ptr::null_mut());
    }
    assert!(unsafe { CStr::from_ptr(cf_version()) }.to_str().unwrap().starts_with("0."));
}
