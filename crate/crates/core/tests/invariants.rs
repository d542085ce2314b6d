mod common;

use common::checks::{self, Check};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sullivan::algebra::{q, FreeAlgebra, Monomial, Polynomial, Q};
use sullivan::corpus;
use sullivan::linalg::{self, QMatrix};
use sullivan::SullivanModel;

fn over_corpus(seed: u64, f: impl Fn(&SullivanModel, &mut ChaCha8Rng) -> Check) {
    for (i, e) in corpus::all().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + i as u64);
        if let Err(msg) = f(&e.model, &mut rng) {
            panic!("{}: {msg}", e.name);
        }
    }
}

#[test]
fn koszul_signs_on_corpus() {
    over_corpus(1, |m, rng| checks::koszul(m, rng, 300));
}

#[test]
fn leibniz_for_d_on_corpus() {
    over_corpus(2, |m, rng| checks::leibniz_d(m, rng, 1000, 25));
}

#[test]
fn leibniz_for_theta_on_corpus() {
    over_corpus(3, |m, rng| checks::leibniz_theta(m, rng, 1000));
}

#[test]
fn d_squares_to_zero_on_corpus() {
    over_corpus(4, |m, rng| checks::d_squared(m, rng, 200));
}

#[test]
fn wang_identity_on_corpus() {
    over_corpus(5, |m, rng| checks::wang_identity(m, rng, 200));
}

#[test]
fn rank_nullity_on_coboundary_matrices() {
    over_corpus(6, |m, _| checks::rank_nullity(m, 20));
}

#[test]
fn poincare_duality_on_certified_models() {
    over_corpus(7, |m, _| checks::poincare(m));
}

fn mixed_algebra() -> FreeAlgebra {
    FreeAlgebra::new([("a", 2), ("b", 3), ("c", 3), ("e", 4), ("f", 5)]).unwrap()
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    (0u32..3, 0u32..2, 0u32..2, 0u32..2, 0u32..2).prop_map(|(a, b, c, e, f)| {
        let mut m = Monomial::unit();
        for (id, exp) in [(0, a), (1, b), (2, c), (3, e), (4, f)] {
            if exp > 0 {
                m = mixed_algebra()
                    .mul_monomials(&m, &Monomial::power(id, exp))
                    .expect("distinct generators")
                    .1;
            }
        }
        m
    })
}

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((arb_monomial(), -4i64..=4), 1..4).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, q(c));
        }
        p
    })
}

fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        prop::collection::vec(
            prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -5i64..=5], c),
            r,
        )
    })
}

fn to_q(rows: &[Vec<i64>]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect()
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        let alg = mixed_algebra();
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }

    #[test]
    fn graded_commutativity(a in arb_monomial(), b in arb_monomial()) {
        let alg = mixed_algebra();
        let pa = Polynomial::term(a.clone(), q(1));
        let pb = Polynomial::term(b.clone(), q(1));
        let sign = if alg.is_odd_monomial(&a) && alg.is_odd_monomial(&b) { -1 } else { 1 };
        prop_assert_eq!(alg.mul(&pa, &pb), alg.mul(&pb, &pa).scale(&q(sign)));
    }

    #[test]
    fn rank_nullity_random(rows in arb_matrix()) {
        let m = QMatrix::from_dense(&to_q(&rows));
        let r = linalg::rank(&m);
        let kernel = linalg::kernel_basis(&m);
        prop_assert_eq!(r + kernel.len(), m.cols());
        prop_assert_eq!(r, linalg::rank(&m.transpose()));
        prop_assert_eq!(r, common::rank(to_q(&rows)));
        for v in &kernel {
            prop_assert!(linalg::is_zero_vec(&m.mul_vec(v)));
        }
    }

    #[test]
    fn rank_is_permutation_invariant(
        (rows, rp, cp) in arb_matrix().prop_flat_map(|rows| {
            let (r, c) = (rows.len(), rows[0].len());
            (
                Just(rows),
                Just((0..r).collect::<Vec<_>>()).prop_shuffle(),
                Just((0..c).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
    ) {
        let m = QMatrix::from_dense(&to_q(&rows));
        prop_assert_eq!(linalg::rank(&m), linalg::rank(&m.permuted(&rp, &cp)));
    }

    #[test]
    fn in_span_matches_rank(rows in arb_matrix(), seed in any::<u64>()) {
        let m = QMatrix::from_dense(&to_q(&rows));
        let v: Vec<Q> = (0..m.rows())
            .map(|i| q(((seed >> (i * 3)) % 5) as i64 - 2))
            .collect();
        let mut with_v = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect::<Vec<_>>()).collect::<Vec<_>>();
        for (row, x) in with_v.iter_mut().zip(&v) {
            row.push(x.clone());
        }
        let augmented = QMatrix::from_dense(&with_v);
        let expect = linalg::rank(&augmented) == linalg::rank(&m);
        prop_assert_eq!(linalg::in_span(&v, &m).unwrap(), expect);
        if let Some(x) = linalg::solve(&m, &v).unwrap() {
            prop_assert_eq!(m.mul_vec(&x), v);
        }
    }
}
