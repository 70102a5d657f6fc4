//! Checks that the verifications can fail: broken inputs must be rejected.

use braceops::calibration::{calibrate_with, CalibrationError};
use braceops::cohomology::{check_corolla_cocycle, complete_cocycle, psi_classes};
use braceops::fixtures::{builtin, check_all, load_dir, Fixture, FixtureError};
use braceops::operad::{act_vec, compose, j, Permutation};
use braceops::shuffle::corolla_tree;
use braceops::sign::{delta_in, delta_vec};
use braceops::vector::{q, q_int};
use braceops::{SignConvention, TreeVector};

/// `u_q` with only the flat corolla terms.
fn flat_only(lengths: &[usize]) -> TreeVector {
    let q_ = lengths.len();
    let args: Vec<TreeVector> = lengths.iter().map(|&p| j(&(1..=p as u8).collect::<Vec<_>>())).collect();
    let fact: i64 = (1..=q_ as i64).product();
    let flat = TreeVector::from_tree(corolla_tree(q_, None));
    let mut out = TreeVector::new();
    for sigma in Permutation::all(q_) {
        out.add_scaled(&compose(&act_vec(&sigma, &flat), &args), &(q_int(sigma.sign() as i64) * q(1, fact)));
    }
    out
}

#[test]
fn corolla_without_stacked_terms_leaves_top_filtration() {
    for lengths in [vec![1, 1, 1], vec![2, 1, 1], vec![1, 1, 1, 1]] {
        let (good, _) = check_corolla_cocycle(&lengths);
        assert!(good.in_lower_filtration && good.completion_found);
        let n = lengths.iter().sum();
        let (bad, _) = complete_cocycle(n, lengths.len(), &flat_only(&lengths));
        assert!(!bad.in_lower_filtration, "{lengths:?} flat part alone should not drop two levels");
    }
}

#[test]
fn every_other_convention_breaks_a_fixture_or_the_differential() {
    let t = "(r (3 (* (1) (* (6) (5)) (4)) (2)))".parse().unwrap();
    for conv in SignConvention::candidates().into_iter().filter(|c| *c != SignConvention::STANDARD) {
        let fixtures_fail = check_all(&builtin(), &conv).iter().any(|o| !o.pass);
        let d = delta_in(&conv, &t);
        let square = d.map_linear(|s| delta_in(&conv, s));
        assert!(fixtures_fail, "{} reproduces every fixture (delta squared zero: {})", conv.describe(), square.is_zero());
    }
}

#[test]
fn calibration_refuses_wrong_or_empty_evidence() {
    let mut fixtures = builtin();
    let f = fixtures.iter_mut().find(|f| f.name == "delta_string_pair").unwrap();
    f.expect = "[+1 (r (* (1) (2))) +1 (r (* (2) (1)))]".into();
    assert!(matches!(calibrate_with(&fixtures), Err(CalibrationError::NoMatch { .. })));

    let none: Vec<Fixture> = builtin().into_iter().map(|f| Fixture { calibrate: false, ..f }).collect();
    assert!(matches!(calibrate_with(&none), Err(CalibrationError::Ambiguous(32))));
}

#[test]
fn mismatching_fixture_lists_offending_terms() {
    let f = Fixture::parse("inline", "name: off\ninput: (delta (r (1 (2))))\nexpect: [+1 (r (* (1) (2)))]\n").unwrap();
    let out = &check_all(&[f], &SignConvention::STANDARD)[0];
    assert!(!out.pass);
    assert_eq!(out.difference.len(), 1);
    assert_eq!(out.difference[0].tree, "(r (* (2) (1)))");
}

#[test]
fn empty_fixture_directory_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load_dir(dir.path()), Err(FixtureError::Empty(_))));
}

#[test]
fn a_boundary_is_not_mistaken_for_a_class() {
    let p = psi_classes(3);
    assert!(p.all_cocycles);
    let b = delta_vec(&TreeVector::from_tree("(r (* (1 (2)) (3)))".parse().unwrap()));
    assert!(!b.is_zero());
    assert!(braceops::cohomology::in_image_of_delta(3, &b).holds);
    // the symmetrised product of three inputs is a class; adding a boundary keeps it one
    let mut x = braceops::expr::eval("(m 3)").unwrap();
    assert!(!braceops::cohomology::in_image_of_delta(3, &x).holds);
    x.add(&b);
    assert!(delta_vec(&x).is_zero());
    assert!(!braceops::cohomology::in_image_of_delta(3, &x).holds);
}
