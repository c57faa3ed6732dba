use qdyn::cgtwist::CgTwist;
use qdyn::coboundary::GaussOptions;
use qdyn::linalg::Mat;
use qdyn::looprefl::*;
use qdyn::repspace::{is_weakly_upper, RepSpace};
use qdyn::scalar::ExactScalar;

fn p_fund(n: usize) -> Mat<ExactScalar> {
    let t = CgTwist::new(n);
    primitive_loop(&t.conv, &RepSpace::fundamental(n), &GaussOptions::default()).unwrap()
}

fn describe(m: &Mat<ExactScalar>) -> String {
    m.entries().map(|(r, c, v)| format!("({r},{c}) {v}")).collect::<Vec<_>>().join("; ")
}

#[test]
fn loop_matches_fundamental_closed_form() {
    for n in 1..=3 {
        let p = p_fund(n);
        let c = fundamental_p_closed(n);
        assert!(p == c, "n={n}\nP = {}\nclosed = {}", describe(&p), describe(&c));
    }
}

#[test]
fn rank_one_loop_is_companion_matrix() {
    let p = fundamental_p_closed(1);
    let qi = ExactScalar::q_pow(-1, 1);
    assert!(p.get(0, 0).is_none());
    assert_eq!(p.get_or_zero(0, 1), qi);
    assert_eq!(p.get_or_zero(1, 0), qi.neg());
    assert_eq!(p.get_or_zero(1, 1), qi.mul(&elementary_symmetric(1, 1)));
    assert!(elementary_symmetric(1, 2).is_one());
}

#[test]
fn trace_of_loop() {
    for n in 1..=3 {
        assert_eq!(p_fund(n).trace(), expected_trace(n), "n={n}");
    }
}

#[test]
fn quantum_determinant_of_loop() {
    for n in 1..=2 {
        let t = CgTwist::new(n);
        let d = loop_det_q(&t, &p_fund(n));
        let ni = n as i64;
        assert_eq!(d, ExactScalar::q_pow(-ni * (ni + 1), 1), "n={n}: {d}");
    }
}

#[test]
fn weyl_action_is_a_group_action() {
    let n = 3;
    let x = ExactScalar::nu(n, 1).add(&ExactScalar::nu(n, 2).mul(&ExactScalar::nu(n, 4)));
    let s1 = WeylPerm::simple(n, 1);
    let s2 = WeylPerm::simple(n, 2);
    let twice = weyl_act(&weyl_act(&x, &s2), &s1);
    assert_eq!(twice, weyl_act(&x, &s2.compose(&s1)));
    assert_ne!(twice, weyl_act(&x, &s1.compose(&s2)));
    let w = s1.compose(&s2);
    for i in 1..=n + 1 {
        let j = w.inverse().images()[i - 1] + 1;
        assert_eq!(weyl_act(&ExactScalar::nu(n, i), &w), ExactScalar::nu(n, j), "i={i}");
    }
}

#[test]
fn loop_is_weyl_invariant() {
    for n in 1..=3 {
        let p = p_fund(n);
        for i in 1..=n {
            let w = WeylPerm::simple(n, i);
            assert!(weyl_act_mat(&p, &w) == p, "n={n} s{i}");
        }
    }
}

#[test]
fn reflection_relations_on_fund_pair() {
    for n in 1..=2 {
        let t = CgTwist::new(n);
        let f = RepSpace::fundamental(n);
        let lp = LoopPair::new(&t, &f, &f);
        assert!(lp.linear_residual().unwrap().is_zero(), "linear n={n}");
        assert!(lp.delta_residual().unwrap().is_zero(), "delta n={n}");
        assert!(lp.reflection_residual().unwrap().is_zero(), "reflection n={n}");
        assert!(lp.intertwiner_residual().unwrap().is_zero(), "intertwiner n={n}");
    }
}

#[test]
fn untwisted_r_breaks_linear_relation() {
    let t = CgTwist::new(2);
    let f = RepSpace::fundamental(2);
    let mut lp = LoopPair::new(&t, &f, &f);
    lp.untwisted = true;
    assert!(!lp.linear_residual().unwrap().is_zero());
}

#[test]
fn coxeter_factor_is_upper_and_invariant() {
    for n in 1..=2 {
        let t = CgTwist::new(n);
        for k in 1..=2 {
            let rep = RepSpace::fund_power(n, k);
            let q = coxeter_q(&t.conv, &rep, &GaussOptions::default()).unwrap();
            assert!(is_weakly_upper(&rep, &q), "n={n} k={k}: {}", describe(&q));
            for i in 1..=n {
                assert!(weyl_act_mat(&q, &WeylPerm::simple(n, i)) == q, "n={n} k={k} s{i}");
            }
        }
    }
}

#[test]
fn sl2_exponential_and_gauss_forms_agree() {
    let t = CgTwist::new(1);
    for dim in 2..=4 {
        let rep = RepSpace::sl2_irrep(dim);
        let opts = GaussOptions::default();
        let p = primitive_loop(&t.conv, &rep, &opts).unwrap();
        let g = sl2_p_gauss(&t.conv, &rep, &opts).unwrap();
        let e = sl2_p_exponential(&t.conv, &rep);
        assert!(p == g, "dim={dim}\nP = {}\ngauss = {}", describe(&p), describe(&g));
        assert!(g == e, "dim={dim}\ngauss = {}\nexp = {}", describe(&g), describe(&e));
    }
}

#[test]
fn bare_omega_prefactor_leaves_a_diagonal_factor() {
    for dim in 2..=4 {
        let rep = RepSpace::sl2_irrep(dim);
        let t = CgTwist::new(1);
        let p = primitive_loop(&t.conv, &rep, &GaussOptions::default()).unwrap();
        let bare = sl2_omega(&rep).mul(&sl2_exponential_tail(&rep));
        let ratio = bare.mul(&p.inverse().unwrap());
        assert!(ratio.is_diagonal());
        let sign = if dim % 2 == 0 { -1 } else { 1 };
        let expected = rep.diag_by_weight(|w| {
            let h = w.h(1);
            ExactScalar::q_pow(h * (h + 2), 4).mul(&ExactScalar::from_int(sign))
        });
        assert!(ratio == expected, "dim={dim}: {}", describe(&ratio));
    }
}

#[test]
fn exponential_tail_is_symmetric_in_x() {
    let rep = RepSpace::sl2_irrep(3);
    let tail = sl2_exponential_tail(&rep);
    let swap = WeylPerm::simple(1, 1);
    assert!(weyl_act_mat(&tail, &swap) == tail);
}

#[test]
fn dynamical_weyl_cocycle() {
    let opts = GaussOptions::default();
    for n in 1..=2 {
        let f = RepSpace::fundamental(n);
        let id = dyn_weyl_a(&f, &WeylPerm::identity(n), &opts).unwrap();
        assert!(id == f.identity());
        for i in 1..=n {
            let w = WeylPerm::simple(n, i);
            for rep in [f.clone(), f.tensor(&f)] {
                let a = dyn_weyl_a(&rep, &w, &opts).unwrap();
                assert!(maps_weight_spaces(&rep, &a, &w), "n={n} s{i} dim={}: {}", rep.dim(), describe(&a));
            }
            let t = CgTwist::new(n);
            let lp = LoopPair::new(&t, &f, &f);
            let r = lp.dyn_weyl2_residual(&w).unwrap();
            assert!(r.is_zero(), "dynWeyl2 n={n} s{i}: {}", describe(&r));
        }
    }
    let n = 2;
    let f = RepSpace::fundamental(n);
    let (s1, s2) = (WeylPerm::simple(n, 1), WeylPerm::simple(n, 2));
    // a right action would need these two to agree
    let a12 = dyn_weyl_a(&f, &s1.compose(&s2), &opts).unwrap();
    let a21 = dyn_weyl_a(&f, &s2.compose(&s1), &opts).unwrap();
    assert!(a12 != a21);
    for (a, b) in [(&s1, &s2), (&s2, &s1)] {
        for rep in [f.clone(), f.tensor(&f)] {
            assert!(dyn_weyl3_residual(&rep, a, b, &opts).unwrap().is_zero());
        }
    }
}
