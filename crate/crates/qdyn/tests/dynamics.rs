use num_complex::Complex64;
use qdyn::dyncore::*;
use qdyn::linalg::Mat;
use qdyn::repspace::{is_zero_weight, RepSpace};
use qdyn::rmatrix::RConventions;
use qdyn::scalar::NumericPoint;

#[test]
fn abrr_reproduces_fundamental_f() {
    for n in 1..=3 {
        let f = RepSpace::fundamental(n);
        let conv = RConventions::standard(n);
        let sol = solve_abrr(&conv, &f, &f).unwrap();
        assert!(abrr_residual(&conv, &f, &f, &sol).is_zero());
        assert_eq!(sol, fundamental_f_closed(n), "n={n}");
        assert!(is_zero_weight(&f.tensor(&f), &sol));
    }
}

#[test]
fn dynamical_r_matches_closed_form() {
    for n in 1..=3 {
        let f = RepSpace::fundamental(n);
        let conv = RConventions::standard(n);
        let r = build_dyn_r(&conv, &f, &f).unwrap();
        let c = fundamental_dyn_r_closed(n);
        if r != c {
            let (a, b, v) = r.first_difference(&c).unwrap();
            panic!("n={n} ({a},{b}) diff {v}: built {} closed {}", r.get_or_zero(a, b), c.get_or_zero(a, b));
        }
    }
}

#[test]
fn qdce_and_qdybe_on_fund_cubed() {
    for n in 1..=2 {
        let f = RepSpace::fundamental(n);
        let conv = RConventions::standard(n);
        assert!(qdce_residual(&conv, &f, &f, &f).unwrap().is_zero(), "QDCE n={n}");
        let r = build_dyn_r(&conv, &f, &f).unwrap();
        assert!(qdybe_residual(&r, &r, &r, [&f, &f, &f]).is_zero(), "QDYBE n={n}");
    }
}

#[test]
fn linear_relation_and_coproduct_of_b() {
    for n in 1..=2 {
        let f = RepSpace::fundamental(n);
        let conv = RConventions::standard(n);
        assert!(rlinear_residual(&conv, &f, &f, true).unwrap().is_zero());
        assert!(!rlinear_residual(&conv, &f, &f, false).unwrap().is_zero());
        for (name, r) in delta_b_residuals(&f, &f) {
            assert!(r.is_zero(), "{name}");
        }
    }
}

#[test]
fn truncated_product_converges_geometrically() {
    for n in 1..=3 {
        let f = RepSpace::fundamental(n);
        let conv = RConventions::standard(n);
        let p = NumericPoint::geometric(n, 0.7, 0.5);
        let exact = evaluate(&solve_abrr(&conv, &f, &f).unwrap(), &p).unwrap();
        let res = |k| truncated_f_product(&conv, &f, &f, k, &p).unwrap().sub(&exact).max_abs();
        assert!(res(40) <= 1e-10, "n={n} res={}", res(40));
        let ratio = res(11) / res(10);
        assert!((ratio - 0.5).abs() <= 0.1, "n={n} ratio={ratio}");
    }
}

#[test]
fn classical_limit_is_first_order() {
    let conv = RConventions::standard(1);
    let nu = [0.5, 2.0];
    let a = classical_defect(&conv, &nu, 1e-2).unwrap();
    let b = classical_defect(&conv, &nu, 5e-3).unwrap();
    let ratio = a / b;
    assert!((1.7..=2.3).contains(&ratio), "ratio={ratio} a={a} b={b}");
    let _ = Mat::<Complex64>::identity(1);
}
