mod common;

use common::{corpus, example_g_matrix, example_theta, q, random_unimodular, rng, sqrt2};
use ncmorita::exactlin::IntMatrix;
use ncmorita::invariants::degeneracy_subgroup;
use ncmorita::reduction::{
    act, canonical_form, compose, inverse, is_in_onn, Membership, OnnElement, ReductionError, SkewMatrix,
};
use num_bigint::BigInt;
use rand::Rng;

fn check_form(theta: &SkewMatrix) {
    let cf = canonical_form(theta);
    let n = theta.n();
    assert_eq!(is_in_onn(cf.g.matrix()), Ok(Membership::SO));
    assert_eq!(act(&cf.g, theta).unwrap(), cf.theta_prime);
    assert_eq!(cf.theta_tilde.n(), cf.k);
    assert_eq!(SkewMatrix::block_diag_zero(n - cf.k, &cf.theta_tilde), cf.theta_prime);
    assert!(degeneracy_subgroup(&cf.theta_tilde).is_zero());
    assert_eq!(degeneracy_subgroup(theta).rank(), n - cf.k);

    let again = canonical_form(&cf.theta_prime);
    assert_eq!(again.k, cf.k);
    assert!(degeneracy_subgroup(&again.theta_tilde).is_zero());

    assert_eq!(act(&inverse(&cf.g), &cf.theta_prime).unwrap(), *theta);
}

#[test]
fn corpus_canonical_forms() {
    for theta in corpus() {
        check_form(&theta);
    }
}

#[test]
fn worked_example() {
    let g = OnnElement::new(example_g_matrix(5)).unwrap();
    assert_eq!(g.membership(), Membership::SO);
    let out = act(&g, &example_theta(5, q(1, 7))).unwrap();
    assert_eq!(out, SkewMatrix::from_upper(3, &[q(0, 1), q(0, 1), q(5, 7)]).unwrap());

    let g = OnnElement::new(example_g_matrix(1)).unwrap();
    let theta = example_theta(1, sqrt2());
    assert_eq!(act(&g, &theta).unwrap(), SkewMatrix::from_upper(3, &[q(0, 1), q(0, 1), sqrt2()]).unwrap());
    let cf = canonical_form(&theta);
    assert_eq!(cf.k, 2);
    check_form(&theta);
}

#[test]
fn rational_thetas_reduce_to_zero() {
    let mut r = rng(3);
    for _ in 0..50 {
        let n = r.gen_range(0..=5);
        let theta = common::random_rational_theta(&mut r, n, 12);
        let cf = canonical_form(&theta);
        assert_eq!(cf.k, 0);
        assert!(cf.theta_prime.is_zero());
    }
}

#[test]
fn irrational_two_by_two_is_nondegenerate() {
    let theta = SkewMatrix::from_upper(2, &[sqrt2()]).unwrap();
    let cf = canonical_form(&theta);
    assert_eq!(cf.k, 2);
    assert!(degeneracy_subgroup(&cf.theta_tilde).is_zero());
}

#[test]
fn odd_coordinate_swap_is_o_minus() {
    for n in 1..=4 {
        let mut h = IntMatrix::identity(2 * n);
        h.swap_rows(0, n);
        assert_eq!(is_in_onn(&h), Ok(Membership::OMinus));
    }
    assert_eq!(is_in_onn(&IntMatrix::identity(5)), Err(ReductionError::OddDimension(5)));
}

/// `[[I,S],[0,I]]`, `[[I,0],[S,I]]` or `[[U,0],[0,U^{-t}]]`.
fn random_generator(r: &mut impl Rng, n: usize) -> OnnElement {
    let id = IntMatrix::identity(n);
    let zero = IntMatrix::zeros(n, n);
    let mut s = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = BigInt::from(r.gen_range(-2..=2));
            s[(j, i)] = -x.clone();
            s[(i, j)] = x;
        }
    }
    match r.gen_range(0..3) {
        0 => OnnElement::from_blocks(&id, &s, &zero, &id).unwrap(),
        1 => OnnElement::from_blocks(&id, &zero, &s, &id).unwrap(),
        _ => {
            let u = random_unimodular(r, n, 1);
            let u_inv_t = u.to_scalar().inverse().unwrap().to_int().unwrap().transpose();
            OnnElement::from_blocks(&u, &zero, &zero, &u_inv_t).unwrap()
        }
    }
}

#[test]
fn action_is_compatible_with_composition() {
    let mut r = rng(5);
    let mut checked = 0;
    for _ in 0..200 {
        let n = r.gen_range(1..=4);
        let theta = common::random_mixed_theta(&mut r, n);
        let g1 = compose(&random_generator(&mut r, n), &random_generator(&mut r, n));
        let g2 = compose(&random_generator(&mut r, n), &random_generator(&mut r, n));
        assert_eq!(compose(&g1, &inverse(&g1)), OnnElement::identity(n));
        assert_eq!(is_in_onn(compose(&g1, &g2).matrix()), Ok(Membership::SO));
        let inner = act(&g2, &theta);
        let whole = act(&compose(&g1, &g2), &theta);
        if let (Ok(inner), Ok(whole)) = (&inner, &whole) {
            if let Ok(outer) = act(&g1, inner) {
                assert_eq!(&outer, whole);
                assert_eq!(act(&inverse(&g2), inner).unwrap(), theta);
                checked += 1;
            }
        }
    }
    assert!(checked > 100, "only {checked} defined compositions");
}
