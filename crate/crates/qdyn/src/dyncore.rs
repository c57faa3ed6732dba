//! Dynamical Cartan element `B(x)`, the shift `x ↦ xq^h`, the exact ABRR
//! solver for `F(x)`, its truncated-product approximation, and the dynamical
//! R-matrix `R(x)`.

use num_complex::Complex64;
use num_rational::Rational64;
use thiserror::Error;

use crate::linalg::{flip, Mat};
use crate::repspace::{RepSpace, Weight};
use crate::rmatrix::{build_r, cartan_k, flip_conjugate, q_minus_qinv, r_hat, RConventions};
use crate::scalar::{ExactScalar, Monomial, NumericPoint, ScalarError, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error("block denominator vanishes identically at ({row}, {col})")]
    DegenerateBlock { row: usize, col: usize },
    #[error("coupling at ({row}, {col}) refers to an entry not yet solved")]
    NotTriangular { row: usize, col: usize },
}

/// Monomial value of `B(x)` on weight `λ`: `∏_k ν_k^{m_k} · q^{(λ,λ)}`.
pub fn b_monomial(w: &Weight) -> Monomial {
    w.nu_power() * Monomial::var(VarId::Q, w.pair(w))
}

/// `B(x)^r` on `rep`.
pub fn b_pow(rep: &RepSpace, r: Rational64) -> Mat<ExactScalar> {
    rep.diag_by_weight(|w| ExactScalar::monomial(b_monomial(w).pow_ratio(r)))
}

/// `B(x)` on `rep`.
pub fn b_diag(rep: &RepSpace) -> Mat<ExactScalar> {
    b_pow(rep, Rational64::from_integer(1))
}

/// `x ↦ xq^λ` on a monomial: `ν̃_k ↦ ν̃_k q^{(ζ^(k) − ζ^(k−1))(λ)/(n+1)}`.
pub fn shift_monomial(m: Monomial, w: &Weight) -> Monomial {
    let n = w.rank();
    let mut e = Rational64::from_integer(0);
    for k in 1..=n {
        let a = m.exponent(VarId::NuTilde(k));
        if *a.numer() != 0 {
            e += a * (w.zeta(k) - w.zeta(k - 1)) / (n as i64 + 1);
        }
    }
    if *e.numer() == 0 {
        m
    } else {
        m * Monomial::var(VarId::Q, e)
    }
}

/// `a(xq^λ)`.
pub fn shift_scalar(a: &ExactScalar, w: &Weight) -> ExactScalar {
    if w.occupation().iter().all(|&x| x == 0) {
        return a.clone();
    }
    a.map_monomials(|m| shift_monomial(m, w))
}

/// Digits of a multi-index in row-major order.
pub fn leg_digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

/// Shifts the dynamical variable of an operator on `legs[0]⊗legs[1]⊗⋯` by the
/// total weight of the legs in `by` (read on the row index; the operator must
/// act as identity there).
pub fn dyn_shift(op: &Mat<ExactScalar>, legs: &[&RepSpace], by: &[usize]) -> Mat<ExactScalar> {
    let dims: Vec<usize> = legs.iter().map(|l| l.dim()).collect();
    let n = legs[0].rank();
    let entries: Vec<_> = op
        .entries()
        .map(|(r, c, v)| {
            let rd = leg_digits(r, &dims);
            let cd = leg_digits(c, &dims);
            let mut w = Weight::zero(n);
            for &l in by {
                debug_assert_eq!(rd[l], cd[l], "shift leg must be spectator");
                w = w.add(legs[l].weight(rd[l]));
            }
            (r, c, shift_scalar(v, &w))
        })
        .collect();
    Mat::from_entries(op.dim(), entries)
}

/// Entrywise `x ↦ xq^λ` for a fixed weight.
pub fn dyn_shift_by_weight(op: &Mat<ExactScalar>, w: &Weight) -> Mat<ExactScalar> {
    op.map(|v| shift_scalar(v, w))
}

/// Solves `X_ab (dr_b − dl_a) = Σ_c g_ac gd_c X_cb` column by column, visiting
/// rows in `order`; `seed(a, b)` fixes entries outright.
pub fn triangular_solve<S>(
    g: &Mat<ExactScalar>,
    gd: &[ExactScalar],
    dl: &[ExactScalar],
    dr: &[ExactScalar],
    order: &[usize],
    seed: S,
) -> Result<Mat<ExactScalar>, DynError>
where
    S: Fn(usize, usize) -> Option<ExactScalar>,
{
    let d = g.dim();
    let mut entries = Vec::new();
    for b in 0..d {
        let mut x: Vec<Option<ExactScalar>> = (0..d).map(|a| seed(a, b)).collect();
        for &a in order {
            if x[a].is_some() {
                continue;
            }
            let mut terms = Vec::new();
            for (c, gv) in g.row(a) {
                match &x[*c] {
                    Some(xc) if xc.is_zero() => {}
                    Some(xc) => terms.push(gv.mul(&gd[*c]).mul(xc)),
                    None => return Err(DynError::NotTriangular { row: a, col: *c }),
                }
            }
            let s = ExactScalar::sum(terms.iter());
            if s.is_zero() {
                x[a] = Some(ExactScalar::zero());
                continue;
            }
            let den = dr[b].sub(&dl[a]);
            let v = s.checked_div(&den).map_err(|_| DynError::DegenerateBlock { row: a, col: b })?;
            x[a] = Some(v);
        }
        for (a, v) in x.into_iter().enumerate() {
            if let Some(v) = v {
                if !v.is_zero() {
                    entries.push((a, b, v));
                }
            }
        }
    }
    Ok(Mat::from_entries(d, entries))
}

/// Row order by decreasing height of `key(a)`.
pub(crate) fn by_height<F: Fn(usize) -> Weight>(d: usize, key: F) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&a, &b| key(b).rho_pair().cmp(&key(a).rho_pair()).then(a.cmp(&b)));
    idx
}

/// Standard solution `F(x)` of `F₁₂B₂ = R̂₁₂⁻¹B₂F₁₂` with `F − 1` in
/// `U⊗U⁻` on `V⊗W`.
pub fn solve_abrr(conv: &RConventions, v: &RepSpace, w: &RepSpace) -> Result<Mat<ExactScalar>, DynError> {
    let dw = w.dim();
    let d = v.dim() * dw;
    let g = r_hat(conv, v, w).unipotent_inverse().expect("R-hat is unipotent").sub(&Mat::identity(d));
    let b2: Vec<ExactScalar> = (0..d).map(|a| ExactScalar::monomial(b_monomial(w.weight(a % dw)))).collect();
    let order = by_height(d, |a| *w.weight(a % dw));
    let same = |a: usize, b: usize| w.weight(a % dw) == w.weight(b % dw);
    triangular_solve(&g, &b2, &b2, &b2, &order, |a, b| {
        if same(a, b) {
            Some(if a == b { ExactScalar::one() } else { ExactScalar::zero() })
        } else {
            None
        }
    })
}

/// `F₁₂B₂ − R̂₁₂⁻¹B₂F₁₂`.
pub fn abrr_residual(conv: &RConventions, v: &RepSpace, w: &RepSpace, f: &Mat<ExactScalar>) -> Mat<ExactScalar> {
    let b2 = v.identity().kron(&b_diag(w));
    let rinv = r_hat(conv, v, w).unipotent_inverse().expect("unipotent");
    f.mul(&b2).sub(&rinv.mul(&b2).mul(f))
}

/// `ν_j/ν_i` as an exact scalar.
pub fn nu_ratio(n: usize, j: usize, i: usize) -> ExactScalar {
    ExactScalar::monomial(Monomial::nu(n, j, 1, 1) / Monomial::nu(n, i, 1, 1))
}

/// Closed form of `F(x)` on `fund⊗fund`.
pub fn fundamental_f_closed(n: usize) -> Mat<ExactScalar> {
    let d = n + 1;
    let qq = q_minus_qinv();
    let mut e: Vec<(usize, usize, ExactScalar)> = (0..d * d).map(|a| (a, a, ExactScalar::one())).collect();
    for i in 1..=d {
        for j in i + 1..=d {
            let c = ExactScalar::one().sub(&nu_ratio(n, j, i)).inv().expect("nonzero");
            e.push(((i - 1) * d + (j - 1), (j - 1) * d + (i - 1), qq.mul(&c).neg()));
        }
    }
    Mat::from_entries(d * d, e)
}

/// `R(x) = F₂₁(x)⁻¹ R₁₂ F₁₂(x)` on `V⊗W`.
pub fn build_dyn_r(conv: &RConventions, v: &RepSpace, w: &RepSpace) -> Result<Mat<ExactScalar>, DynError> {
    let f12 = solve_abrr(conv, v, w)?;
    let f_wv = solve_abrr(conv, w, v)?;
    let f21_inv = flip_conjugate(&f_wv.unipotent_inverse().expect("F is unipotent"), v.dim(), w.dim());
    Ok(f21_inv.mul(&build_r(conv, v, w)).mul(&f12))
}

/// Closed form of `R(x)` on `fund⊗fund`.
pub fn fundamental_dyn_r_closed(n: usize) -> Mat<ExactScalar> {
    let d = n + 1;
    let qq = q_minus_qinv();
    let qq2 = qq.mul(&qq);
    let mut e = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            let diag = (i - 1) * d + (j - 1);
            if i == j {
                e.push((diag, diag, ExactScalar::q_pow(1, 1)));
                continue;
            }
            e.push((diag, diag, ExactScalar::one()));
            let r = nu_ratio(n, i, j);
            let c = ExactScalar::one().sub(&r).inv().expect("nonzero");
            e.push((diag, (j - 1) * d + (i - 1), qq.mul(&c)));
            if i > j {
                e.push((diag, diag, qq2.mul(&r).mul(&c).mul(&c).neg()));
            }
        }
    }
    Mat::from_entries(d * d, e).scale(&ExactScalar::q_pow(-1, d as i64))
}

/// Residual of `R(x)₁₂B₂(x) = B₂(x)K₁₂² R₂₁(x)⁻¹`, or without `K²` when
/// `with_k2` is false.
pub fn rlinear_residual(
    conv: &RConventions,
    v: &RepSpace,
    w: &RepSpace,
    with_k2: bool,
) -> Result<Mat<ExactScalar>, DynError> {
    let r12 = build_dyn_r(conv, v, w)?;
    let r21 = flip_conjugate(&build_dyn_r(conv, w, v)?, v.dim(), w.dim());
    let r21_inv = r21.inverse().expect("R(x) invertible");
    let b2 = v.identity().kron(&b_diag(w));
    let k2 = if with_k2 { cartan_k(v, w, 2) } else { Mat::identity(v.dim() * w.dim()) };
    Ok(r12.mul(&b2).sub(&b2.mul(&k2).mul(&r21_inv)))
}

/// Residuals of `Δ(B) = B₁B₂K² = B₁(xq^{h₂})B₂ = B₁B₂(xq^{h₁})` on `V⊗W`.
pub fn delta_b_residuals(v: &RepSpace, w: &RepSpace) -> Vec<(String, Mat<ExactScalar>)> {
    let vw = v.tensor(w);
    let delta = b_diag(&vw);
    let b1 = b_diag(v).kron(&w.identity());
    let b2 = v.identity().kron(&b_diag(w));
    let legs = [v, w];
    let a = b1.mul(&b2).mul(&cartan_k(v, w, 2));
    let b = dyn_shift(&b1, &legs, &[1]).mul(&b2);
    let c = b1.mul(&dyn_shift(&b2, &legs, &[0]));
    vec![
        ("B1 B2 K^2".into(), delta.sub(&a)),
        ("B1(xq^h2) B2".into(), delta.sub(&b)),
        ("B1 B2(xq^h1)".into(), delta.sub(&c)),
    ]
}

/// Residual of the QDYBE
/// `R_UV(x)R_UW(xq^{h_V})R_VW(x) = R_VW(xq^{h_U})R_UW(x)R_UV(xq^{h_W})`.
pub fn qdybe_residual(r_uv: &Mat<ExactScalar>, r_uw: &Mat<ExactScalar>, r_vw: &Mat<ExactScalar>, legs: [&RepSpace; 3]) -> Mat<ExactScalar> {
    let dims: Vec<usize> = legs.iter().map(|l| l.dim()).collect();
    let on = |m: &Mat<ExactScalar>, p: &[usize]| crate::cgtwist::on_legs(m, p, &dims);
    let uv = on(r_uv, &[0, 1]);
    let uw = on(r_uw, &[0, 2]);
    let vw = on(r_vw, &[1, 2]);
    let lhs = uv.mul(&dyn_shift(&uw, &legs, &[1])).mul(&vw);
    let rhs = dyn_shift(&vw, &legs, &[0]).mul(&uw).mul(&dyn_shift(&uv, &legs, &[2]));
    lhs.sub(&rhs)
}

/// Residual of the QDCE `(Δ⊗id)(F) F₁₂(xq^{h₃}) = (id⊗Δ)(F) F₂₃(x)` with the
/// composite-leg `F` obtained by re-solving ABRR.
pub fn qdce_residual(conv: &RConventions, u: &RepSpace, v: &RepSpace, w: &RepSpace) -> Result<Mat<ExactScalar>, DynError> {
    let legs = [u, v, w];
    let f_uv_w = solve_abrr(conv, &u.tensor(v), w)?;
    let f_u_vw = solve_abrr(conv, u, &v.tensor(w))?;
    let f12 = solve_abrr(conv, u, v)?.kron(&w.identity());
    let f23 = u.identity().kron(&solve_abrr(conv, v, w)?);
    let lhs = f_uv_w.mul(&dyn_shift(&f12, &legs, &[2]));
    let rhs = f_u_vw.mul(&f23);
    Ok(lhs.sub(&rhs))
}

/// Entrywise numeric evaluation.
pub fn evaluate(m: &Mat<ExactScalar>, p: &NumericPoint) -> Result<Mat<Complex64>, ScalarError> {
    m.try_map(|x| p.eval(x))
}

/// `∏_{k=0}^{depth} B₂^{−k−1} R̂₁₂ B₂^{k+1}` evaluated at `p`.
pub fn truncated_f_product(
    conv: &RConventions,
    v: &RepSpace,
    w: &RepSpace,
    depth: usize,
    p: &NumericPoint,
) -> Result<Mat<Complex64>, ScalarError> {
    let dw = w.dim();
    let rh = evaluate(&r_hat(conv, v, w), p)?;
    let b: Vec<Complex64> = (0..v.dim() * dw)
        .map(|a| p.eval(&ExactScalar::monomial(b_monomial(w.weight(a % dw)))))
        .collect::<Result<_, _>>()?;
    let mut out = Mat::identity(rh.dim());
    for k in 0..=depth {
        let e = (k + 1) as i32;
        let factor = Mat::from_entries(
            rh.dim(),
            rh.entries().map(|(r, c, x)| (r, c, x * (b[c] / b[r]).powi(e))),
        );
        out = out.mul(&factor);
    }
    Ok(out)
}

/// Numeric `(R(x) − 1)/ħ` defect against the classical `r(x)` on
/// `fund⊗fund` at `q = e^{ħ/2}`.
pub fn classical_defect(conv: &RConventions, nu: &[f64], hbar: f64) -> Result<f64, ScalarError> {
    let n = nu.len() - 1;
    let f = RepSpace::fundamental(n);
    let r = build_dyn_r(conv, &f, &f).expect("generic");
    let p = NumericPoint::from_nu((hbar / 2.0).exp(), nu);
    let rn = evaluate(&r, &p)?;
    let d = rn.dim();
    let one = Mat::<Complex64>::identity(d);
    let lin = rn.sub(&one).scale(&Complex64::new(1.0 / hbar, 0.0));
    Ok(lin.sub(&crate::rmatrix::classical_dynamical_r(nu)).max_abs())
}

/// Permutation `P` on `V⊗V`.
pub fn swap(d: usize) -> Mat<ExactScalar> {
    flip(d, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_by_fundamental_weight_sl2() {
        let w = Weight::epsilon(1, 1);
        let x2 = nu_ratio(1, 1, 2);
        let shifted = shift_scalar(&x2, &w);
        assert_eq!(shifted, x2.mul(&ExactScalar::q_pow(2, 1)));
        let shifted = shift_scalar(&x2, &Weight::epsilon(1, 2));
        assert_eq!(shifted, x2.mul(&ExactScalar::q_pow(-2, 1)));
    }

    #[test]
    fn zero_weight_shift_is_identity() {
        let a = ExactScalar::nu(2, 1).add(&ExactScalar::q_pow(1, 3));
        assert_eq!(shift_scalar(&a, &Weight::zero(2)), a);
    }

    #[test]
    fn b_on_fundamental_has_nu_diagonal() {
        let f = RepSpace::fundamental(2);
        let b = b_diag(&f);
        for i in 1..=3 {
            let expect = ExactScalar::nu(2, i).mul(&ExactScalar::q_pow(2, 3));
            assert_eq!(b.get_or_zero(i - 1, i - 1), expect);
        }
    }
}
