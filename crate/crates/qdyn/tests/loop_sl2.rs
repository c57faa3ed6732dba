use num_rational::Rational64;
use qdyn::cgtwist::on_legs;
use qdyn::coboundary::{build_gauss_factors, GaussOptions, M0Choice};
use qdyn::dyncore::{dyn_shift, solve_abrr};
use qdyn::linalg::{Coeff, Mat};
use qdyn::looprefl::sl2::*;
use qdyn::looprefl::fundamental_p_closed;
use qdyn::repspace::RepSpace;
use qdyn::rmatrix::{build_r, flip_conjugate, RConventions};
use qdyn::scalar::{ExactScalar, Monomial, VarId};

fn q(p: i64) -> ExactScalar {
    ExactScalar::q_pow(p, 1)
}

fn s(x: ExactScalar) -> LoopElem {
    LoopElem::scalar(x)
}

fn describe(m: &Mat<ExactScalar>) -> String {
    m.entries().map(|(r, c, v)| format!("({r},{c}) {v}")).collect::<Vec<_>>().join("; ")
}

/// The seven defining relations as `lhs − rhs`.
macro_rules! relations {
    ($a:expr, $b:expr, $c:expr, $d:expr, $sc:expr, $one:expr) => {{
        let (a, b, c, d) = ($a, $b, $c, $d);
        let k = $sc(ExactScalar::one().sub(&q(-2)));
        let q2 = $sc(q(2));
        vec![
            ("ac = q²ca", a.mul(c).sub(&q2.mul(&c.mul(a)))),
            ("ba = q²ab", b.mul(a).sub(&q2.mul(&a.mul(b)))),
            ("bc − cb", b.mul(c).sub(&c.mul(b)).sub(&k.mul(&a.mul(&d.sub(a))))),
            ("cd − dc", c.mul(d).sub(&d.mul(c)).sub(&k.mul(&c.mul(a)))),
            ("db − bd", d.mul(b).sub(&b.mul(d)).sub(&k.mul(&a.mul(b)))),
            ("ad = da", a.mul(d).sub(&d.mul(a))),
            ("ad − q²cb = 1", a.mul(d).sub(&q2.mul(&c.mul(b))).sub(&$one)),
        ]
    }};
}

#[test]
fn normal_form_satisfies_the_relations() {
    let (a, b, c, d) = (LoopElem::a(), LoopElem::b(), LoopElem::c(), LoopElem::d());
    for (name, r) in relations!(&a, &b, &c, &d, s, LoopElem::one()) {
        assert!(r.is_zero(), "{name}");
    }
    let z = s(q(-1)).mul(&a).add(&s(q(1)).mul(&d));
    for g in [&a, &b, &c, &d] {
        assert!(z.mul(g).sub(&g.mul(&z)).is_zero());
    }
}

#[test]
fn normal_form_product_is_associative() {
    let gens = [LoopElem::a(), LoopElem::b(), LoopElem::c(), LoopElem::d(), LoopElem::rho_f()];
    let x = gens[1].mul(&gens[2]).add(&gens[0]);
    let y = gens[2].mul(&gens[2]).add(&gens[4]);
    let z = gens[1].mul(&gens[3]).mul(&gens[1]);
    let l = x.mul(&y).mul(&z);
    let r = x.mul(&y.mul(&z));
    assert!(l.sub(&r).is_zero());
}

#[test]
fn representation_is_multiplicative() {
    let gens = [LoopElem::a(), LoopElem::b(), LoopElem::c(), LoopElem::d()];
    for dim in 2..=4 {
        let w = RepSpace::sl2_irrep(dim);
        for x in &gens {
            for y in &gens {
                for z in &gens {
                    let p = x.mul(y).mul(z);
                    let lhs = represent(&p, &w).unwrap();
                    let rhs = represent(x, &w).unwrap().mul(&represent(y, &w).unwrap()).mul(&represent(z, &w).unwrap());
                    assert!(lhs == rhs, "dim={dim}");
                }
            }
        }
        let re = represent(&LoopElem::rho_e(), &w).unwrap();
        let rf = represent(&LoopElem::rho_f(), &w).unwrap();
        assert!(re == *w.e(1) && rf == *w.f(1), "dim={dim}");
    }
}

#[test]
fn kappa_image_satisfies_relations_and_inverts_rho() {
    let conv = RConventions::standard(1);
    let f = RepSpace::fundamental(1);
    for dim in 2..=3 {
        let w = RepSpace::sl2_irrep(dim);
        let r12 = build_r(&conv, &f, &w);
        let r21 = flip_conjugate(&build_r(&conv, &w, &f), 2, dim);
        let u = r21.mul(&r12);
        let block = |i: usize, j: usize| {
            Mat::from_entries(
                dim,
                (0..dim).flat_map(|r| (0..dim).map(move |c| (r, c))).filter_map(|(r, c)| {
                    u.get(i * dim + r, j * dim + c).map(|v| (r, c, v.clone()))
                }),
            )
        };
        let (a, b, c, d) = (block(0, 0), block(0, 1), block(1, 0), block(1, 1));
        let sc = |x: ExactScalar| Mat::identity(dim).scale(&x);
        for (name, r) in relations!(&a, &b, &c, &d, sc, Mat::identity(dim)) {
            assert!(r.is_zero(), "dim={dim} {name}");
        }
        for (mine, gen) in [(&a, LoopElem::a()), (&b, LoopElem::b()), (&c, LoopElem::c()), (&d, LoopElem::d())] {
            assert!(*mine == represent(&gen, &w).unwrap(), "dim={dim}");
        }
    }
}

#[test]
fn character_table() {
    let alpha = ExactScalar::monomial(Monomial::var(VarId::NuTilde(4), Rational64::from_integer(1)));
    let ev = |x: LoopElem| x.character(&alpha).unwrap();
    let (a, b, c, d) = (ev(LoopElem::a()), ev(LoopElem::b()), ev(LoopElem::c()), ev(LoopElem::d()));
    assert!(a.is_zero());
    assert_eq!(b, q(-1).mul(&alpha));
    assert_eq!(c, q(-1).mul(&alpha.inv().unwrap()).neg());
    let x = ExactScalar::nu(1, 1);
    let xx = x.add(&x.inv().unwrap());
    assert_eq!(d, q(-1).mul(&xx));
    for (name, r) in relations!(&a, &b, &c, &d, |v: ExactScalar| v, ExactScalar::one()) {
        assert!(r.is_zero(), "{name}");
    }
    assert_eq!(q(-1).mul(&a).add(&q(1).mul(&d)), xx);
    let u = Mat::from_entries(2, [(0, 0, a), (0, 1, b), (1, 0, c), (1, 1, d)]);
    let da = Mat::diagonal(vec![
        ExactScalar::monomial(Monomial::var(VarId::NuTilde(4), Rational64::new(1, 2))),
        ExactScalar::monomial(Monomial::var(VarId::NuTilde(4), Rational64::new(-1, 2))),
    ]);
    let conj = da.mul(&fundamental_p_closed(1)).mul(&da.diagonal_inverse().unwrap());
    assert!(u == conj, "{}", describe(&u));
}

#[test]
fn closed_f_coefficients_match_solver() {
    let conv = RConventions::standard(1);
    for dv in 2..=3 {
        for dw in 2..=3 {
            let (v, w) = (RepSpace::sl2_irrep(dv), RepSpace::sl2_irrep(dw));
            let a = f_from_coefficients(&v, &w);
            let b = solve_abrr(&conv, &v, &w).unwrap();
            assert!(a == b, "{dv}x{dw}\n{}\n{}", describe(&a), describe(&b));
        }
    }
}

#[test]
fn loop_side_g_represents_to_matrix_g() {
    let conv = RConventions::standard(1);
    for dv in 2..=3 {
        let v = RepSpace::sl2_irrep(dv);
        let side = g_on_loop(&v);
        for dw in 2..=3 {
            let w = RepSpace::sl2_irrep(dw);
            let rep = |m: &Mat<LoopElem>| represent_mat(m, dv, &w).unwrap();
            let f = solve_abrr(&conv, &v, &w).unwrap();
            assert!(rep(&side.f12) == f, "F {dv}x{dw}");
            let r = build_r(&conv, &v, &w);
            assert!(rep(&side.k).mul(&rep(&side.r_hat)) == r, "R {dv}x{dw}");
            let g = g_matrix(&conv, &v, &w).unwrap();
            assert!(rep(&side.g) == g, "G {dv}x{dw}");
        }
    }
}

#[test]
fn g_is_dynamically_quasitriangular_on_fund_cubed() {
    let conv = RConventions::standard(1);
    let f = RepSpace::fundamental(1);
    let ff = f.tensor(&f);
    let dims = [2, 2, 2];
    let legs = [&f, &f, &f];
    let g = g_matrix(&conv, &f, &f).unwrap();
    let lhs = g_matrix(&conv, &ff, &f).unwrap();
    let f12 = on_legs(&solve_abrr(&conv, &f, &f).unwrap(), &[0, 1], &dims);
    let g13s = dyn_shift(&on_legs(&g, &[0, 2], &dims), &legs, &[1]);
    let g23 = on_legs(&g, &[1, 2], &dims);
    let f12s_inv = dyn_shift(&f12, &legs, &[2]).inverse().unwrap();
    let rhs = f12.mul(&g13s).mul(&g23).mul(&f12s_inv);
    assert!(lhs == rhs, "{}", describe(&lhs.sub(&rhs)));
}

#[test]
fn shifted_f_evaluates_to_one() {
    let conv = RConventions::standard(1);
    let f = RepSpace::fundamental(1);
    let v3 = RepSpace::sl2_irrep(3);
    for (v, w) in [(&f, &f), (&f, &v3), (&v3, &v3)] {
        let fm = solve_abrr(&conv, v, w).unwrap();
        let e = f_shifted_by_character(&fm).unwrap();
        assert!(e == Mat::identity(fm.dim()), "{}", describe(&e));
    }
}

#[test]
fn character_coboundary() {
    let conv = RConventions::standard(1);
    let f = RepSpace::fundamental(1);
    let ff = f.tensor(&f);
    let one = ExactScalar::one();
    let me = m_from_character(&f, &one).unwrap();
    let me2 = m_from_character(&ff, &one).unwrap();
    let fm = solve_abrr(&conv, &f, &f).unwrap();
    let me1s = dyn_shift(&me.kron(&f.identity()), &[&f, &f], &[1]);
    let rhs = fm.mul(&me1s).mul(&f.identity().kron(&me));
    assert!(me2 == rhs, "M^E = {}\nresidual {}", describe(&me), describe(&me2.sub(&rhs)));
}

#[test]
fn character_m_is_a_trivial_gauge_of_m() {
    let f = RepSpace::fundamental(1);
    let opts = GaussOptions { m0: M0Choice::Trivial, ..Default::default() };
    for rep in [f.clone(), f.tensor(&f), RepSpace::sl2_irrep(3)] {
        let me = m_from_character(&rep, &ExactScalar::one()).unwrap();
        let m = build_gauss_factors(&rep, &opts).unwrap().m;
        let g = weight_parity_gauge(&rep, &m);
        assert!(me == g, "dim={}\nM^E = {}\nM = {}", rep.dim(), describe(&me), describe(&m));
    }
}
