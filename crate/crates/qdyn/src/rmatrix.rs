//! Standard universal R-matrix `R = K·R̂` evaluated on pairs of
//! representations, ribbon data, and the classical r-matrix.

use num_complex::Complex64;

use crate::linalg::{flip, Coeff, Mat};
use crate::repspace::{embed_mat, RepSpace, Weight};
use crate::rootvec::{longest_word, qexp, weyl_word, RootVectorTable};
use crate::scalar::{Base, ExactScalar};

/// Direction of the ordered product over the normal order of roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductOrder {
    /// Smallest root (`α_1`) leftmost.
    #[default]
    Ascending,
    /// Largest root leftmost.
    Descending,
}

/// Conventions used when assembling `R̂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RConventions {
    pub table: RootVectorTable,
    pub order: ProductOrder,
}

impl RConventions {
    pub fn standard(n: usize) -> Self {
        RConventions {
            table: RootVectorTable::new(n, Default::default()).expect("fundamental oracle"),
            order: ProductOrder::default(),
        }
    }

    /// Roots in product order (leftmost first).
    pub fn ordered_roots(&self) -> Vec<(usize, usize)> {
        let mut r = self.table.order.clone();
        if self.order == ProductOrder::Descending {
            r.reverse();
        }
        r
    }
}

/// `q − q⁻¹`.
pub fn q_minus_qinv() -> ExactScalar {
    ExactScalar::q_pow(1, 1).sub(&ExactScalar::q_pow(-1, 1))
}

/// `K = q^{Σ_j h_j⊗ζ^j}`: diagonal with entry `q^{(λ,μ)}`.
pub fn cartan_k(v: &RepSpace, w: &RepSpace, power: i64) -> Mat<ExactScalar> {
    let mut d = Vec::with_capacity(v.dim() * w.dim());
    for a in v.weights() {
        for b in w.weights() {
            d.push(ExactScalar::q_pow_ratio(a.pair(b) * power));
        }
    }
    Mat::diagonal(d)
}

/// `R̂_α = e_{q⁻¹}^{(q−q⁻¹) e_α⊗f_α}` with left and right operators given.
pub fn root_factor(e: &Mat<ExactScalar>, f: &Mat<ExactScalar>) -> Mat<ExactScalar> {
    let z = e.kron(f).scale(&q_minus_qinv());
    qexp(&z, Base::QInv).expect("root vectors are nilpotent")
}

/// `R̂ = ∏_α R̂_α` on `V⊗W`.
pub fn r_hat(conv: &RConventions, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
    let factors: Vec<_> = conv
        .ordered_roots()
        .into_iter()
        .map(|(i, j)| root_factor(&conv.table.e(v, i, j), &conv.table.f(w, i, j)))
        .collect();
    Mat::product(v.dim() * w.dim(), factors.iter())
}

/// `R = K·R̂` on `V⊗W`.
pub fn build_r(conv: &RConventions, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
    cartan_k(v, w, 1).mul(&r_hat(conv, v, w))
}

/// Inverse of `R` on `V⊗W`: `R̂⁻¹K⁻¹`.
pub fn build_r_inverse(conv: &RConventions, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
    let rh = r_hat(conv, v, w).unipotent_inverse().expect("R-hat is unipotent");
    rh.mul(&cartan_k(v, w, -1))
}

/// `R₂₁` as an operator on `V⊗W`, i.e. `P R_{W,V} P`.
pub fn flip_conjugate(r_wv: &Mat<ExactScalar>, dv: usize, dw: usize) -> Mat<ExactScalar> {
    let p_vw = flip::<ExactScalar>(dv, dw);
    let p_wv = flip::<ExactScalar>(dw, dv);
    p_wv.mul(r_wv).mul(&p_vw)
}

/// Closed form of `R` on `fund⊗fund`.
pub fn fundamental_r_closed(n: usize) -> Mat<ExactScalar> {
    let d = n + 1;
    let pre = ExactScalar::q_pow(-1, n as i64 + 1);
    let q = ExactScalar::q_pow(1, 1);
    let qq = q_minus_qinv();
    let mut e = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let idx = i * d + j;
            e.push((idx, idx, if i == j { q.clone() } else { ExactScalar::one() }));
            if i < j {
                e.push((i * d + j, j * d + i, qq.clone()));
            }
        }
    }
    Mat::from_entries(d * d, e).scale(&pre)
}

/// Ribbon element `v` on a representation built as a tensor power of the
/// fundamental, using `Δ(v) = (R₂₁R₁₂)⁻¹(v⊗v)` recursively.
pub fn ribbon_v(conv: &RConventions, rep: &RepSpace) -> Mat<ExactScalar> {
    let n = rep.rank();
    let fund = RepSpace::fundamental(n);
    let k = rep.factors().len();
    assert!(
        rep == &RepSpace::fund_power(n, k),
        "ribbon element implemented for fundamental tensor powers"
    );
    let v1 = Mat::identity(n + 1).scale(&ExactScalar::q_pow(-(n as i64) * (n as i64 + 2), n as i64 + 1));
    let mut acc_rep = fund.clone();
    let mut acc = v1.clone();
    for _ in 1..k {
        let r12 = build_r(conv, &acc_rep, &fund);
        let r_wv = build_r(conv, &fund, &acc_rep);
        let r21 = flip_conjugate(&r_wv, acc_rep.dim(), fund.dim());
        let mono = r21.mul(&r12);
        let inv = mono.inverse().expect("monodromy invertible");
        acc = inv.mul(&acc.kron(&v1));
        acc_rep = acc_rep.tensor(&fund);
    }
    acc
}

/// Numeric classical r-matrix `r(x)` on `fund⊗fund`:
/// `½Ω_h + Σ_{i≠j} r_{ij} E_ij⊗E_ji` with `r_{ij} = (1 − ν_i/ν_j)⁻¹`.
pub fn classical_dynamical_r(nu: &[f64]) -> Mat<Complex64> {
    let d = nu.len();
    let mut e = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let idx = i * d + j;
            let omega = if i == j { 1.0 } else { 0.0 } - 1.0 / d as f64;
            e.push((idx, idx, Complex64::new(omega / 2.0, 0.0)));
            if i != j {
                let r = 1.0 / (1.0 - nu[i] / nu[j]);
                e.push((i * d + j, j * d + i, Complex64::new(r, 0.0)));
            }
        }
    }
    Mat::from_entries(d * d, e)
}

/// Numeric classical Cremmer–Gervais r-matrix `r_{τ,s}` on `fund⊗fund`:
/// `r − s + Σ_α Σ_{l≥1} τ^l(e_α)∧f_α` with `r` the standard constant one.
pub fn classical_cg_r(n: usize) -> Mat<Complex64> {
    let d = n + 1;
    let mut e: Vec<(usize, usize, Complex64)> = Vec::new();
    let c = |x: f64| Complex64::new(x, 0.0);
    for i in 0..d {
        for j in 0..d {
            let idx = i * d + j;
            let omega = if i == j { 1.0 } else { 0.0 } - 1.0 / d as f64;
            e.push((idx, idx, c(omega / 2.0)));
            if i < j {
                e.push((i * d + j, j * d + i, c(1.0)));
            }
        }
    }
    // −s with s = −½Σ ζ^(j)∧ζ^(j+1): diagonal ½Σ_j (ζ^j(a)ζ^{j+1}(b) − ζ^{j+1}(a)ζ^j(b)).
    let zeta = |j: usize, a: usize| -> f64 {
        if j == 0 || j > n {
            0.0
        } else {
            (if a < j { 1.0 } else { 0.0 }) - j as f64 / d as f64
        }
    };
    for a in 0..d {
        for b in 0..d {
            let mut s = 0.0;
            for j in 1..n {
                s += zeta(j, a) * zeta(j + 1, b) - zeta(j + 1, a) * zeta(j, b);
            }
            e.push((a * d + b, a * d + b, c(s / 2.0)));
        }
    }
    // Σ_{α=(i..j)} Σ_{l≥1} τ^l(e_α)∧f_α with e_α ↦ E_{i,j+1}, f_α ↦ E_{j+1,i}.
    for i in 1..=n {
        for j in i..=n {
            for l in 1..i {
                let (a, b) = (i - l - 1, j + 1 - l - 1);
                let (fa, fb) = (j, i - 1);
                e.push((a * d + fa, b * d + fb, c(1.0)));
                e.push((fa * d + a, fb * d + b, c(-1.0)));
            }
        }
    }
    Mat::from_entries(d * d, e)
}

fn three_legs(v: &RepSpace) -> Vec<usize> {
    vec![v.dim(); 3]
}

fn on3(m: &Mat<ExactScalar>, pos: &[usize], dims: &[usize]) -> Mat<ExactScalar> {
    let sub: Vec<usize> = pos.iter().map(|&p| dims[p]).collect();
    embed_mat(m, &sub, pos, dims).expect("leg positions fit")
}

/// `R₁₂R₁₃R₂₃ − R₂₃R₁₃R₁₂` on `V⊗V⊗V` for an `R` on `V⊗V`.
pub fn qybe_residual<T: Coeff>(r: &Mat<T>, d: usize) -> Mat<T> {
    let dims = [d, d, d];
    let emb = |pos: &[usize]| embed_mat(r, &[d, d], pos, &dims).expect("leg positions fit");
    let (r12, r13, r23) = (emb(&[0, 1]), emb(&[0, 2]), emb(&[1, 2]));
    r12.mul(&r13).mul(&r23).sub(&r23.mul(&r13).mul(&r12))
}

/// Residuals of `(Δ⊗id)R = R₁₃R₂₃` and `(id⊗Δ)R = R₁₃R₁₂` on `V⊗V⊗V`.
pub fn quasitriangularity_residuals(conv: &RConventions, v: &RepSpace) -> Vec<(String, Mat<ExactScalar>)> {
    let dims = three_legs(v);
    let vv = v.tensor(v);
    let r = build_r(conv, v, v);
    let (r12, r13, r23) = (on3(&r, &[0, 1], &dims), on3(&r, &[0, 2], &dims), on3(&r, &[1, 2], &dims));
    vec![
        ("(Δ⊗id)R = R13 R23".into(), build_r(conv, &vv, v).sub(&r13.mul(&r23))),
        ("(id⊗Δ)R = R13 R12".into(), build_r(conv, v, &vv).sub(&r13.mul(&r12))),
    ]
}

/// Residuals of `R Δ(a) = Δ′(a) R` for `a ∈ {e_i, f_i, q^{h_i}}` on `V⊗W`.
pub fn intertwining_residuals(r: &Mat<ExactScalar>, v: &RepSpace, w: &RepSpace) -> Vec<(String, Mat<ExactScalar>)> {
    let vw = v.tensor(w);
    let wv = w.tensor(v);
    let (dv, dw) = (v.dim(), w.dim());
    let opp = |m: &Mat<ExactScalar>| flip::<ExactScalar>(dw, dv).mul(m).mul(&flip::<ExactScalar>(dv, dw));
    let mut out = Vec::new();
    for i in 1..=v.rank() {
        let gens = [
            ("e", vw.e(i).clone(), wv.e(i).clone()),
            ("f", vw.f(i).clone(), wv.f(i).clone()),
            ("q^h", vw.q_h(i, 1), wv.q_h(i, 1)),
        ];
        for (name, d, dop) in gens {
            out.push((format!("R Δ({name}_{i}) = Δ'({name}_{i}) R"), r.mul(&d).sub(&opp(&dop).mul(r))));
        }
    }
    out
}

/// `q^{−(λ,λ+2ρ)}`, the value of `v` on an irreducible of highest weight `λ`.
pub fn ribbon_value(lambda: &Weight) -> ExactScalar {
    ExactScalar::q_pow_ratio(-(lambda.pair(lambda) + lambda.rho_pair() * 2))
}

/// Residuals of the ribbon checks on `fund⊗fund`: `v` commutes with the
/// generators, `(v − v_S)(v − v_Λ) = 0` and `tr v = d_S v_S + d_Λ v_Λ` for the
/// symmetric and antisymmetric summands, and `μ` is group-like.
pub fn ribbon_residuals(conv: &RConventions, n: usize) -> Vec<(String, Mat<ExactScalar>)> {
    let f = RepSpace::fundamental(n);
    let ff = f.tensor(&f);
    let v = ribbon_v(conv, &ff);
    let mut out = Vec::new();
    for i in 1..=n {
        out.push((format!("[v, e_{i}]"), v.mul(ff.e(i)).sub(&ff.e(i).mul(&v))));
        out.push((format!("[v, f_{i}]"), v.mul(ff.f(i)).sub(&ff.f(i).mul(&v))));
    }
    let sym = Weight::from_occupation(n, &{
        let mut o = vec![0; n + 1];
        o[0] = 2;
        o
    });
    let alt = Weight::epsilon(n, 1).add(&Weight::epsilon(n, 2));
    let (vs, va) = (ribbon_value(&sym), ribbon_value(&alt));
    let one = Mat::identity(ff.dim());
    out.push((
        "(v - v_S)(v - v_A)".into(),
        v.sub(&one.scale(&vs)).mul(&v.sub(&one.scale(&va))),
    ));
    let d = (n + 1) as i64;
    let expected = vs.mul(&ExactScalar::from_int(d * (d + 1) / 2)).add(&va.mul(&ExactScalar::from_int(d * (d - 1) / 2)));
    out.push(("tr v".into(), Mat::diagonal(vec![v.trace().sub(&expected)])));
    out.push(("Δ(μ) = μ⊗μ".into(), ff.mu().sub(&f.mu().kron(&f.mu()))));
    out
}

/// Residuals of `Δ(ŵ₀) = R̂⁻¹(ŵ₀⊗ŵ₀)` and `Δ(ω) = R⁻¹ω₁ω₂` on `V⊗W` with
/// `ω = q^{−Σ h_i ζ^(i)/2} ŵ₀`.
pub fn weyl_coproduct_residuals(conv: &RConventions, v: &RepSpace, w: &RepSpace) -> Vec<(String, Mat<ExactScalar>)> {
    let n = v.rank();
    let word = longest_word(n);
    let vw = v.tensor(w);
    let w0 = |r: &RepSpace| weyl_word(r, &word);
    let omega = |r: &RepSpace| {
        let c = r.diag_by_weight(|wt| {
            ExactScalar::q_pow_ratio(-(1..=n).map(|i| wt.zeta(i) * wt.h(i)).sum::<num_rational::Rational64>() / 2)
        });
        c.mul(&w0(r))
    };
    let rh_inv = r_hat(conv, v, w).unipotent_inverse().expect("unipotent");
    vec![
        ("Δ(ŵ0) = R̂⁻¹ ŵ0⊗ŵ0".into(), w0(&vw).sub(&rh_inv.mul(&w0(v).kron(&w0(w))))),
        (
            "Δ(ω) = R⁻¹ ω1 ω2".into(),
            omega(&vw).sub(&build_r_inverse(conv, v, w).mul(&omega(v).kron(&omega(w)))),
        ),
    ]
}

/// Residuals of the braid relations `ŵ_iŵ_{i+1}ŵ_i = ŵ_{i+1}ŵ_iŵ_{i+1}` and
/// `ŵ_iŵ_j = ŵ_jŵ_i` (`|i − j| ≥ 2`) on `rep`.
pub fn braid_residuals(rep: &RepSpace) -> Vec<(String, Mat<ExactScalar>)> {
    let n = rep.rank();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let (a, b) = if j == i + 1 { (vec![i, j, i], vec![j, i, j]) } else { (vec![i, j], vec![j, i]) };
            out.push((format!("braid({i},{j})"), weyl_word(rep, &a).sub(&weyl_word(rep, &b))));
        }
    }
    out
}
