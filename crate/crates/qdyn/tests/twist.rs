use num_complex::Complex64;
use qdyn::cgtwist::*;
use qdyn::dyncore::evaluate;
use qdyn::linalg::Mat;
use qdyn::repspace::RepSpace;
use qdyn::rmatrix::{build_r, qybe_residual};
use qdyn::scalar::{ExactScalar, NumericPoint};

fn fund3_dims(n: usize) -> Vec<usize> {
    vec![n + 1; 3]
}

#[test]
fn w_factor_is_ratio_of_s_factors() {
    for n in 2..=3 {
        let f = RepSpace::fundamental(n);
        let t = CgTwist::new(n);
        for k in 1..n {
            let ratio = t.s_factor(k, &f, &f).mul(&t.s_factor(k + 1, &f, &f).diagonal_inverse().unwrap());
            assert_eq!(t.w_factor(k, &f, &f), ratio, "n={n} k={k}");
        }
    }
}

#[test]
fn restricted_table_breaks_w_factor() {
    let f = RepSpace::fundamental(2);
    let mut t = CgTwist::new(2);
    t.range = EpsilonRange::Restricted;
    let ratio = t.s_factor(1, &f, &f).mul(&t.s_factor(2, &f, &f).diagonal_inverse().unwrap());
    assert_ne!(t.w_factor(1, &f, &f), ratio);
}

#[test]
fn epsilon_identities_hold_up_to_rank_six() {
    for n in 1..=6 {
        assert!(epsilon_identity_shift_left(n, EpsilonRange::Full).is_empty());
        assert!(epsilon_identity_shift_right(n, EpsilonRange::Full).is_empty());
        assert!(epsilon_identity_cartan(n, EpsilonRange::Full).is_empty(), "n={n}");
    }
}

#[test]
fn j_hat_is_independent_of_split() {
    for n in 2..=3 {
        let f = RepSpace::fundamental(n);
        let t = CgTwist::new(n);
        for k in 1..=n {
            let base = t.j_hat(k, &f, &f);
            for m in 0..=k {
                assert_eq!(t.j_hat_split(k, m, &f, &f), base, "n={n} k={k} m={m}");
            }
            if k >= n {
                assert_eq!(base, Mat::identity((n + 1) * (n + 1)));
            }
        }
    }
}

#[test]
fn cocycle_on_fund_cubed() {
    let n = 2;
    let f = RepSpace::fundamental(n);
    let ff = f.tensor(&f);
    let t = CgTwist::new(n);
    let j = t.build_j(&f, &f);
    let id = f.identity();
    let lhs = t.build_j(&ff, &f).mul(&j.kron(&id));
    let rhs = t.build_j(&f, &ff).mul(&id.kron(&j));
    assert_eq!(lhs, rhs);
}

#[test]
fn rj_matches_closed_form() {
    for n in 1..=3 {
        let f = RepSpace::fundamental(n);
        let t = CgTwist::new(n);
        let rj = t.r_j(&f, &f);
        let closed = fundamental_rj_closed(n);
        if rj != closed {
            let (r, c, v) = rj.first_difference(&closed).unwrap();
            panic!("n={n} first difference at ({r},{c}): {v}; built {} closed {}", rj.get_or_zero(r, c), closed.get_or_zero(r, c));
        }
    }
}

#[test]
fn hecke_relation_and_antisymmetrizers() {
    for n in 1..=2 {
        let f = RepSpace::fundamental(n);
        let t = CgTwist::new(n);
        let d = n + 1;
        for r in [build_r(&t.conv, &f, &f), t.r_j(&f, &f)] {
            let rc = r_check(&r, d);
            let s = hecke_scalar(&rc).unwrap();
            assert_eq!(s, ExactScalar::q_pow(-1, d as i64));
            let norm = rc.scale(&s.inv().unwrap());
            let a = antisymmetrizers(&norm, d, n + 2);
            for (k, ak) in a.iter().enumerate() {
                if k + 1 < n + 2 {
                    assert_eq!(ak.mul(ak), *ak, "idempotent k={}", k + 1);
                }
            }
            assert!(a[n + 1].is_zero());
            let _ = fund3_dims(n);
        }
    }
}

#[test]
fn tau_twists_the_coproduct_by_a_cartan_factor() {
    for n in 2..=3 {
        let f = RepSpace::fundamental(n);
        for (name, r) in deltatau_residuals(&f, &f) {
            assert!(r.is_zero(), "n={n} {name}");
        }
    }
}

fn three(n: usize) -> (RepSpace, Vec<usize>) {
    (RepSpace::fundamental(n), fund3_dims(n))
}

#[test]
fn middle_leg_factor_matches_k_conjugation() {
    let n = 2;
    let (f, dims) = three(n);
    let t = CgTwist::new(n);
    let rh = qdyn::rmatrix::r_hat(&t.conv, &f, &f);
    let r13 = on_legs(&rh, &[0, 2], &dims);
    let k = qdyn::rmatrix::cartan_k(&f, &f, 1);
    let kinv = qdyn::rmatrix::cartan_k(&f, &f, -1);
    let k23 = on_legs(&k, &[1, 2], &dims);
    let k23i = on_legs(&kinv, &[1, 2], &dims);
    let k12 = on_legs(&k, &[0, 1], &dims);
    let k12i = on_legs(&kinv, &[0, 1], &dims);
    assert_eq!(k23i.mul(&r13).mul(&k23), t.j_hat_three(0, 0, MiddleLeg::ConjugatedBy23, &f, &f, &f));
    assert_eq!(k12i.mul(&r13).mul(&k12), t.j_hat_three(0, 0, MiddleLeg::ConjugatedBy12, &f, &f, &f));
}

#[test]
fn proof_relations_hold() {
    for n in 2..=3 {
        let (f, dims) = three(n);
        let ff = f.tensor(&f);
        let t = CgTwist::new(n);
        let l12 = |m: &Mat<ExactScalar>| on_legs(m, &[0, 1], &dims);
        let l23 = |m: &Mat<ExactScalar>| on_legs(m, &[1, 2], &dims);
        let l13 = |m: &Mat<ExactScalar>| on_legs(m, &[0, 2], &dims);
        let comm = |a: &Mat<ExactScalar>, b: &Mat<ExactScalar>| a.mul(b).sub(&b.mul(a));
        for k in 1..n {
            let jh = t.j_hat(k, &f, &f);
            // (Δ⊗id)Ĵ^[k] = Ĵ^{[0,k]}_{1(2|3} Ĵ^[k]_23
            let lhs = t.j_hat(k, &ff, &f);
            let rhs = t.j_hat_three(0, k, MiddleLeg::ConjugatedBy23, &f, &f, &f).mul(&l23(&jh));
            assert_eq!(lhs, rhs, "propJ1 n={n} k={k}");
            let lhs = t.j_hat(k, &f, &ff);
            let rhs = t.j_hat_three(k, 0, MiddleLeg::ConjugatedBy12, &f, &f, &f).mul(&l12(&jh));
            assert_eq!(lhs, rhs, "propJ2 n={n} k={k}");
        }
        for i in 1..n {
            for j in i..n {
                let a = l23(&t.j_k(n - i, &f, &f));
                let b = l12(&t.j_k(j, &f, &f));
                assert!(comm(&a, &b).is_zero(), "prop1 n={n} i={i} j={j}");
            }
        }
        for k in 1..n {
            for m in 1..n {
                if k + m > n - 1 {
                    continue;
                }
                let w13 = l13(&t.w_factor(k + m, &f, &f));
                let x = w13.mul(&l23(&t.w_factor(m, &f, &f)));
                assert!(comm(&l12(&t.j_hat(k, &f, &f)), &x).is_zero(), "prop2a");
                let y = w13.mul(&l12(&t.w_factor(m, &f, &f)));
                assert!(comm(&l23(&t.j_hat(k, &f, &f)), &y).is_zero(), "prop2b");
            }
        }
        for l in 1..n {
            for m in 0..l {
                let w23 = l23(&t.w_factor(m + 1, &f, &f));
                let w12 = l12(&t.w_factor(l - m, &f, &f));
                let a = t.j_hat_three(l - m - 1, m + 1, MiddleLeg::ConjugatedBy23, &f, &f, &f);
                let b = t.j_hat_three(l - m, m, MiddleLeg::ConjugatedBy12, &f, &f, &f);
                let lhs = w23.mul(&a).mul(&w23.diagonal_inverse().unwrap());
                let rhs = w12.mul(&b).mul(&w12.diagonal_inverse().unwrap());
                assert_eq!(lhs, rhs, "prop3 n={n} l={l} m={m}");
            }
        }
    }
}

#[test]
fn twisted_r_has_cremmer_gervais_classical_limit() {
    for n in 1..=3 {
        let t = CgTwist::new(n);
        let a = classical_cg_defect(&t, 1e-2).unwrap();
        let b = classical_cg_defect(&t, 5e-3).unwrap();
        let ratio = a / b;
        assert!((1.5..=2.5).contains(&ratio), "n={n} ratio={ratio} a={a}");
    }
}

#[test]
fn twisted_r_is_homogeneous() {
    for n in 1..=3 {
        let d = n + 1;
        let rj = CgTwist::new(n).r_j(&RepSpace::fundamental(n), &RepSpace::fundamental(n));
        for (r, c, _) in rj.entries() {
            assert_eq!(r / d + r % d, c / d + c % d, "n={n} row={r} col={c}");
        }
    }
}

#[test]
fn twisted_r_satisfies_qybe() {
    let f = RepSpace::fundamental(2);
    assert!(qybe_residual(&CgTwist::new(2).r_j(&f, &f), 3).is_zero());
    let n = 3;
    let f = RepSpace::fundamental(n);
    let p = NumericPoint::new(n, Complex64::new(0.7, 0.0), &[Complex64::new(1.0, 0.0); 3]);
    let rj = evaluate(&CgTwist::new(n).r_j(&f, &f), &p).unwrap();
    assert!(qybe_residual(&rj, n + 1).max_abs() <= 1e-10);
}

#[test]
fn counit_on_either_leg_is_identity() {
    for n in 1..=3 {
        let f = RepSpace::fundamental(n);
        let e = RepSpace::trivial(n);
        let t = CgTwist::new(n);
        assert_eq!(t.build_j(&e, &f), Mat::identity(n + 1), "n={n}");
        assert_eq!(t.build_j(&f, &e), Mat::identity(n + 1), "n={n}");
    }
}

#[test]
fn cocycle_numeric_rank_three() {
    let n = 3;
    let f = RepSpace::fundamental(n);
    let ff = f.tensor(&f);
    let t = CgTwist::new(n);
    let j = t.build_j(&f, &f);
    let id = f.identity();
    let res = t.build_j(&ff, &f).mul(&j.kron(&id)).sub(&t.build_j(&f, &ff).mul(&id.kron(&j)));
    let p = NumericPoint::new(n, Complex64::new(0.7, 0.0), &[Complex64::new(1.0, 0.0); 3]);
    assert!(evaluate(&res, &p).unwrap().max_abs() <= 1e-10);
}

#[test]
fn cocycle_recursion_step() {
    for n in 2..=3 {
        let (f, dims) = three(n);
        let ff = f.tensor(&f);
        let t = CgTwist::new(n);
        let l12 = |m: &Mat<ExactScalar>| on_legs(m, &[0, 1], &dims);
        let l23 = |m: &Mat<ExactScalar>| on_legs(m, &[1, 2], &dims);
        let l13 = |m: &Mat<ExactScalar>| on_legs(m, &[0, 2], &dims);
        let block = |k: usize, a: usize, b: usize| {
            l13(&t.w_factor(k, &f, &f))
                .mul(&l23(&t.w_factor(b, &f, &f)))
                .mul(&t.j_hat_three(a, b, MiddleLeg::ConjugatedBy23, &f, &f, &f))
                .mul(&l23(&t.j_hat(b, &f, &f)))
        };
        let d = dims.iter().product();
        for p in 1..n {
            let mut lhs = Mat::identity(d);
            for k in p..n {
                lhs = lhs.mul(&block(k, p - 1, k - p + 1));
            }
            for k in p..n {
                lhs = lhs.mul(&l12(&t.j_k(k, &f, &f)));
            }
            let mut rhs = t.j_k(p, &f, &ff);
            for k in p + 1..n {
                rhs = rhs.mul(&block(k, p, k - p));
            }
            for k in p + 1..n {
                rhs = rhs.mul(&l12(&t.j_k(k, &f, &f)));
            }
            rhs = rhs.mul(&l23(&t.j_k(n - p, &f, &f)));
            assert_eq!(lhs, rhs, "n={n} p={p}");
        }
    }
}
