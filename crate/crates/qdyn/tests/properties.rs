use proptest::prelude::*;
use qdyn::linalg::Mat;
use qdyn::looprefl::{weyl_act, WeylPerm};
use qdyn::scalar::ExactScalar;

const N: usize = 2;

/// Small Laurent polynomial in q and the ν_i.
fn scalar() -> impl Strategy<Value = ExactScalar> {
    prop::collection::vec((-3i64..=3, -2i64..=2, 1usize..=N + 1, -2i64..=2), 1..=3).prop_map(|terms| {
        let parts: Vec<ExactScalar> = terms
            .into_iter()
            .map(|(c, qe, i, ne)| {
                let nu = ExactScalar::nu(N, i);
                let nu = if ne >= 0 { (0..ne).fold(ExactScalar::one(), |a, _| a.mul(&nu)) } else {
                    let inv = nu.inv().unwrap();
                    (0..-ne).fold(ExactScalar::one(), |a, _| a.mul(&inv))
                };
                ExactScalar::from_int(c).mul(&ExactScalar::q_pow(qe, 1)).mul(&nu)
            })
            .collect();
        ExactScalar::sum(parts.iter())
    })
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=N, 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            let ratio = b.mul(&a.inv().unwrap());
            prop_assert_eq!(ratio.mul(&a), b);
        }
    }

    #[test]
    fn weyl_action_composes(a in scalar(), u in word(), v in word()) {
        let (wu, wv) = (WeylPerm::from_word(N, &u), WeylPerm::from_word(N, &v));
        prop_assert_eq!(weyl_act(&weyl_act(&a, &wv), &wu), weyl_act(&a, &wv.compose(&wu)));
    }

    #[test]
    fn kron_mixed_product(x in prop::collection::vec(scalar(), 4), y in prop::collection::vec(scalar(), 4)) {
        let m = |v: &[ExactScalar]| Mat::from_entries(2, (0..4).map(|k| (k / 2, k % 2, v[k].clone())));
        let (a, b) = (m(&x), m(&y));
        prop_assert_eq!(a.kron(&b).mul(&b.kron(&a)), a.mul(&b).kron(&b.mul(&a)));
    }
}
