use std::collections::BTreeMap;

use lierigid::cohomology::{
    dims_by_degree, direct_h1, direct_h1_for_weight, kostant_h1, NegativePart,
};
use lierigid::grading::{grading_element, ParabolicMarking};
use lierigid::linalg::{rat, Rational};
use lierigid::repthy::{construct_rep, IrrComponent};
use lierigid::rootsys::{parse_factors, RootSystem, Weight};

fn rs(s: &str) -> RootSystem {
    RootSystem::build(&parse_factors(s).unwrap()).unwrap()
}

fn agree(t: &str, marks: &[usize], hw: &[i64]) -> BTreeMap<Rational, u64> {
    let r = rs(t);
    let m = ParabolicMarking::new(marks.iter().copied());
    let lam = Weight(hw.to_vec());
    let k = dims_by_degree(&kostant_h1(&r, &m, &IrrComponent { highest_weight: lam.clone(), multiplicity: 1 }).unwrap());
    let d = direct_h1_for_weight(&r, &m, &lam, 64).unwrap().h1();
    assert_eq!(k, d, "{t} {marks:?} {hw:?}");
    k
}

#[test]
fn sl2_modules() {
    for (hw, deg) in [(2, 2), (4, 3), (6, 4)] {
        assert_eq!(agree("A1", &[1], &[hw]), BTreeMap::from([(rat(deg), 1)]));
    }
}

#[test]
fn sl3_full_flag() {
    for hw in [[1, 1], [3, 0], [0, 3], [2, 2], [1, 0], [0, 0]] {
        agree("A2", &[1, 2], &hw);
    }
}

#[test]
fn sl3_projective_plane() {
    for hw in [[1, 1], [2, 0], [0, 2], [1, 0], [0, 1]] {
        agree("A2", &[1], &hw);
        agree("A2", &[2], &hw);
    }
}

#[test]
fn products_and_kunneth() {
    let both = agree("A1xA1", &[1, 2], &[2, 2]);
    // H¹(a⊕b, V⊠W) = H¹(a,V)⊗H⁰(b,W) ⊕ H⁰(a,V)⊗H¹(b,W)
    let a1 = rs("A1");
    let m = ParabolicMarking::new([1]);
    let one = direct_h1_for_weight(&a1, &m, &Weight(vec![2]), 30).unwrap();
    let mut expect: BTreeMap<Rational, u64> = BTreeMap::new();
    for (d1, n1) in one.h1() {
        for (d0, n0) in one.h0() {
            *expect.entry(&d1 + &d0).or_insert(0) += 2 * n1 * n0;
        }
    }
    assert_eq!(both, expect);
    agree("A1xA1", &[1, 2], &[4, 2]);
    agree("A1xA1", &[1, 2], &[0, 2]);
}

#[test]
fn rank_two_non_simply_laced() {
    agree("B2", &[1], &[1, 0]);
    agree("B2", &[2], &[0, 2]);
    agree("G2", &[2], &[1, 0]);
    agree("G2", &[1], &[0, 1]);
}

#[test]
fn differential_squares_to_zero_on_larger_module() {
    let r = rs("A2");
    let m = ParabolicMarking::new([1, 2]);
    let z = grading_element(&r, &m).unwrap();
    let neg = NegativePart::new(&r, &z).unwrap();
    let rep = construct_rep(&r, &Weight(vec![2, 2]), 64).unwrap();
    let d = direct_h1(&r, &z, &neg, &rep).unwrap();
    assert!(!d.slices.is_empty());
}
