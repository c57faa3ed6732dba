//! `sl(2)` reflection algebra: the localized algebra `L̂ ≅ U_q(sl(2))`, its
//! primitive characters, and the shortcut `G(x) = B₁^{1/2}R(x)K⁻¹B₁^{−1/2}`.
//!
//! `L̂` is generated by `a^{±1}, b, c` with `ac = q²ca`, `ba = q²ab` and
//! `bc = u := q²t + (1−q⁻²)(1−a²)` where `t = cb`; `d = a⁻¹(1 + q²t)`.
//! Elements are stored in the normal form `Σ_{g≥0} c^g ψ_g + Σ_{g<0} ψ_g b^{|g|}`
//! with `ψ_g` a rational function of the commuting pair `(a, t)`.

use std::collections::BTreeMap;

use num_rational::Rational64;

use crate::dyncore::{b_pow, build_dyn_r, solve_abrr, DynError};
use crate::linalg::{Coeff, Mat};
use crate::repspace::RepSpace;
use crate::rmatrix::{cartan_k, RConventions};
use crate::scalar::{qfactorial, Base, ExactScalar, Monomial, ScalarError, VarId};

/// Slot holding `a`.
pub const VAR_A: VarId = VarId::NuTilde(2);
/// Slot holding `t = cb`.
pub const VAR_T: VarId = VarId::NuTilde(3);

fn q(p: i64) -> ExactScalar {
    ExactScalar::q_pow(p, 1)
}

/// `a^e`.
pub fn a_pow(e: Rational64) -> ExactScalar {
    ExactScalar::monomial(Monomial::var(VAR_A, e))
}

fn a_int(e: i64) -> ExactScalar {
    a_pow(Rational64::from_integer(e))
}

fn t_var() -> ExactScalar {
    ExactScalar::monomial(Monomial::var(VAR_T, Rational64::from_integer(1)))
}

/// `x = ν_1` for rank one.
fn x_pow(e: i64) -> ExactScalar {
    ExactScalar::monomial(Monomial::nu(1, 1, e, 1))
}

fn one_minus_q_m2() -> ExactScalar {
    ExactScalar::one().sub(&q(-2))
}

fn q_minus_qinv() -> ExactScalar {
    q(1).sub(&q(-1))
}

/// `u = bc` as a function of `(a, t)`.
pub fn u_of(a: &ExactScalar, t: &ExactScalar) -> ExactScalar {
    let a2 = a.mul(a);
    q(2).mul(t).add(&one_minus_q_m2().mul(&ExactScalar::one().sub(&a2)))
}

/// Scales `a ↦ q^k a` in every monomial.
fn scale_a(psi: &ExactScalar, k: i64) -> ExactScalar {
    psi.map_monomials(|m| {
        let e = m.exponent(VAR_A);
        if *e.numer() == 0 {
            m
        } else {
            m * Monomial::var(VarId::Q, e * k)
        }
    })
}

/// `σ(ψ)` with `cψ = σ(ψ)c`: `a ↦ q⁻²a`, `t ↦ q⁻²(t − (1−q⁻²)(1−q⁻⁴a²))`.
pub fn sigma(psi: &ExactScalar) -> ExactScalar {
    let a2 = a_int(2).mul(&q(-4));
    let val = q(-2).mul(&t_var().sub(&one_minus_q_m2().mul(&ExactScalar::one().sub(&a2))));
    scale_a(psi, -2).substitute(VAR_T, &val).expect("integer t-exponents")
}

/// `τ(ψ) = σ⁻¹(ψ)` with `bψ = τ(ψ)b`: `a ↦ q²a`, `t ↦ u`.
pub fn tau(psi: &ExactScalar) -> ExactScalar {
    let val = u_of(&a_int(1), &t_var());
    scale_a(psi, 2).substitute(VAR_T, &val).expect("integer t-exponents")
}

/// `σ^k`, with negative `k` meaning `τ^{|k|}`.
pub fn sigma_pow(psi: &ExactScalar, k: i64) -> ExactScalar {
    let mut out = psi.clone();
    for _ in 0..k.unsigned_abs() {
        out = if k > 0 { sigma(&out) } else { tau(&out) };
    }
    out
}

/// `c^s b^s = ∏_{i<s} σ^i(t)`.
fn cs_bs(s: i64) -> ExactScalar {
    let mut out = ExactScalar::one();
    let mut f = t_var();
    for i in 0..s {
        if i > 0 {
            f = sigma(&f);
        }
        out = out.mul(&f);
    }
    out
}

/// `b^s c^s = ∏_{i<s} τ^i(u)`.
fn bs_cs(s: i64) -> ExactScalar {
    let mut out = ExactScalar::one();
    let mut f = u_of(&a_int(1), &t_var());
    for i in 0..s {
        if i > 0 {
            f = tau(&f);
        }
        out = out.mul(&f);
    }
    out
}

/// Element of `L̂` (possibly localized further in rational functions of `a`,
/// `t`) in graded normal form.
#[derive(Clone, Debug, Default)]
pub struct LoopElem {
    terms: BTreeMap<i64, ExactScalar>,
}

impl LoopElem {
    pub fn scalar(s: ExactScalar) -> Self {
        Self::graded(0, s)
    }

    /// `c^g ψ` for `g ≥ 0`, `ψ b^{|g|}` for `g < 0`.
    pub fn graded(g: i64, psi: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !psi.is_zero() {
            terms.insert(g, psi);
        }
        LoopElem { terms }
    }

    pub fn a() -> Self {
        Self::scalar(a_int(1))
    }

    pub fn b() -> Self {
        Self::graded(-1, ExactScalar::one())
    }

    pub fn c() -> Self {
        Self::graded(1, ExactScalar::one())
    }

    pub fn d() -> Self {
        let psi = a_int(-1).mul(&ExactScalar::one().add(&q(2).mul(&t_var())));
        Self::scalar(psi)
    }

    /// `ρ(e) = c/(1−q⁻²)`.
    pub fn rho_e() -> Self {
        Self::graded(1, one_minus_q_m2().inv().expect("nonzero"))
    }

    /// `ρ(f) = a⁻¹b/(q−q⁻¹)`.
    pub fn rho_f() -> Self {
        Self::graded(-1, a_int(-1).mul(&q_minus_qinv().inv().expect("nonzero")))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactScalar)> {
        self.terms.iter().map(|(g, p)| (*g, p))
    }

    fn add_term(&mut self, g: i64, psi: ExactScalar) {
        if psi.is_zero() {
            return;
        }
        let e = self.terms.entry(g).or_insert_with(ExactScalar::zero);
        *e = e.add(&psi);
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    fn mul_homogeneous(g: i64, psi: &ExactScalar, h: i64, phi: &ExactScalar) -> (i64, ExactScalar) {
        if g >= 0 && h >= 0 {
            (g + h, sigma_pow(psi, -h).mul(phi))
        } else if g <= 0 && h <= 0 {
            (g + h, psi.mul(&sigma_pow(phi, g)))
        } else if g > 0 {
            let chi = psi.mul(phi);
            let m = -h;
            let s = g.min(m);
            (g - m, sigma_pow(&chi, s).mul(&cs_bs(s)))
        } else {
            let (m, l) = (-g, h);
            if m <= l {
                (l - m, sigma_pow(&psi.mul(&bs_cs(m)), -(l - m)).mul(phi))
            } else {
                (l - m, psi.mul(&sigma_pow(&bs_cs(l).mul(phi), -(m - l))))
            }
        }
    }

    /// Character `𝓔_{x,α}`: `a = 0`, `b = q⁻¹α`, `c = −q⁻¹α⁻¹`,
    /// `d = q⁻¹(x + x⁻¹)`. Each `ψ_g` is evaluated as the limit `a → 0` at
    /// `t = (ad − 1)/q²`.
    pub fn character(&self, alpha: &ExactScalar) -> Result<ExactScalar, ScalarError> {
        let delta = character_d();
        let t_val = a_int(1).mul(&delta).sub(&ExactScalar::one()).mul(&q(-2));
        let eb = q(-1).mul(alpha);
        let ec = q(-1).mul(&alpha.inv()?).neg();
        let mut out = ExactScalar::zero();
        for (g, psi) in self.terms() {
            let v = psi.substitute(VAR_T, &t_val)?.limit_at_zero(VAR_A)?;
            let gen = if g >= 0 { &ec } else { &eb };
            out = out.add(&v.mul(&gen.pow(g.unsigned_abs() as i32)?));
        }
        Ok(out)
    }
}

/// `𝓔_{x,α}(d) = q⁻¹(x + x⁻¹)`.
pub fn character_d() -> ExactScalar {
    q(-1).mul(&x_pow(1).add(&x_pow(-1)))
}

impl Coeff for LoopElem {
    fn zero() -> Self {
        LoopElem::default()
    }
    fn one() -> Self {
        Self::scalar(ExactScalar::one())
    }
    fn from_i64(k: i64) -> Self {
        Self::scalar(ExactScalar::from_int(k))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (g, p) in o.terms() {
            out.add_term(g, p.clone());
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = LoopElem::default();
        for (g, psi) in self.terms() {
            for (h, phi) in o.terms() {
                let (k, chi) = Self::mul_homogeneous(g, psi, h, phi);
                out.add_term(k, chi);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        LoopElem { terms: self.terms.iter().map(|(g, p)| (*g, p.neg())).collect() }
    }
    fn inv(&self) -> Option<Self> {
        match self.terms.iter().next() {
            Some((0, p)) if self.terms.len() == 1 => p.inv().ok().map(Self::scalar),
            _ => None,
        }
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

/// `ψ(q^m, t_m)` for a weight-`m` vector with `t` acting by `t_m`.
fn eval_on_weight(psi: &ExactScalar, m: i64, t_m: &ExactScalar) -> Result<ExactScalar, ScalarError> {
    let s = psi.substitute(VAR_T, t_m)?;
    Ok(s.map_monomials(|mono| {
        let e = mono.exponent(VAR_A);
        if *e.numer() == 0 {
            return mono;
        }
        let mut u = *mono.units();
        u[VAR_A.slot()] = 0;
        Monomial::from_units(u) * Monomial::var(VarId::Q, e * m)
    }))
}

/// Image of an element on a `U_q(sl(2))` module via `ρ⁻¹`:
/// `a ↦ q^h`, `b ↦ (q−q⁻¹)q^h f`, `c ↦ (1−q⁻²)e`.
pub fn represent(x: &LoopElem, w: &RepSpace) -> Result<Mat<ExactScalar>, ScalarError> {
    let (cm, bm) = generator_images(w);
    let t = cm.mul(&bm);
    let mut out = Mat::zeros(w.dim());
    for (g, psi) in x.terms() {
        let diag: Vec<ExactScalar> = (0..w.dim())
            .map(|i| eval_on_weight(psi, w.weight(i).h(1), &t.get_or_zero(i, i)))
            .collect::<Result<_, _>>()?;
        let d = Mat::diagonal(diag);
        let k = g.unsigned_abs() as u32;
        let term = if g >= 0 { cm.pow(k).mul(&d) } else { d.mul(&bm.pow(k)) };
        out = out.add(&term);
    }
    Ok(out)
}

/// Images of `c` and `b` on `w`.
pub fn generator_images(w: &RepSpace) -> (Mat<ExactScalar>, Mat<ExactScalar>) {
    let qh = w.diag_by_weight(|wt| q(wt.h(1)));
    let cm = w.e(1).scale(&one_minus_q_m2());
    let bm = qh.mul(w.f(1)).scale(&q_minus_qinv());
    (cm, bm)
}

/// `Σ_g` blockwise image of an operator on `V⊗L̂` as an operator on `V⊗W`.
pub fn represent_mat(m: &Mat<LoopElem>, v_dim: usize, w: &RepSpace) -> Result<Mat<ExactScalar>, ScalarError> {
    let dw = w.dim();
    let mut entries = Vec::new();
    for (r, c, x) in m.entries() {
        let block = represent(x, w)?;
        for (i, j, val) in block.entries() {
            entries.push((r * dw + i, c * dw + j, val.clone()));
        }
    }
    Ok(Mat::from_entries(v_dim * dw, entries))
}

/// Coefficients `ψ_k(a)` of the solution `F = Σ_k e^k ⊗ f^k ψ_k(q^h)` of
/// `F₁₂B₂ = R̂⁻¹B₂F₁₂`, for `k ≤ kmax`.
pub fn f_coefficients(kmax: usize) -> Vec<ExactScalar> {
    let beta = |l: i64| x_pow(-2 * l).mul(&q(2 * l * l)).mul(&a_int(-2 * l));
    let r = |j: u32| {
        q_minus_qinv().neg().pow(j as i32).expect("nonzero").mul(&qfactorial(j, Base::Q).inv().expect("nonzero"))
    };
    let mut psi = vec![ExactScalar::one()];
    for k in 1..=kmax as i64 {
        let mut acc = ExactScalar::zero();
        for j in 1..=k {
            acc = acc.add(&r(j as u32).mul(&beta(k - j)).mul(&psi[(k - j) as usize]));
        }
        let den = ExactScalar::one().sub(&beta(k));
        psi.push(acc.checked_div(&den).expect("nonzero"));
    }
    psi
}

fn lift(m: &Mat<ExactScalar>) -> Mat<LoopElem> {
    m.map(|v| LoopElem::scalar(v.clone()))
}

/// `Σ_k X_k ⊗ y_k` with scalar `X_k` on `V`.
fn sum_tensor(terms: &[(Mat<ExactScalar>, LoopElem)], d: usize) -> Mat<LoopElem> {
    let mut out = Mat::zeros(d);
    for (x, y) in terms {
        let e = x.entries().map(|(r, c, v)| (r, c, LoopElem::scalar(v.clone()).mul(y)));
        out = out.add(&Mat::from_entries(d, e));
    }
    out
}

/// Pieces of `G` on `V⊗L̂`.
pub struct LoopSide {
    pub f12: Mat<LoopElem>,
    pub f21: Mat<LoopElem>,
    pub k: Mat<LoopElem>,
    pub k_inv: Mat<LoopElem>,
    pub r_hat: Mat<LoopElem>,
    pub g: Mat<LoopElem>,
}

/// `G(x) = B₁^{1/2} F₂₁⁻¹ K R̂ F₁₂ K⁻¹ B₁^{−1/2}` on `V⊗L̂`.
pub fn g_on_loop(v: &RepSpace) -> LoopSide {
    assert_eq!(v.rank(), 1, "rank one only");
    let d = v.dim();
    let kmax = d - 1;
    let psi = f_coefficients(kmax);
    let e = v.e(1);
    let f = v.f(1);
    let mut f12_terms = Vec::new();
    let mut f21_terms = Vec::new();
    let mut rhat_terms = Vec::new();
    let (mut ek, mut fk) = (v.identity(), v.identity());
    let (mut rf, mut re) = (LoopElem::one(), LoopElem::one());
    let ab = LoopElem::rho_f().mul(&LoopElem::scalar(q_minus_qinv()));
    let mut abk = LoopElem::one();
    for (k, p) in psi.iter().enumerate() {
        if k > 0 {
            ek = ek.mul(e);
            fk = fk.mul(f);
            rf = rf.mul(&LoopElem::rho_f());
            re = re.mul(&LoopElem::rho_e());
            abk = abk.mul(&ab);
        }
        f12_terms.push((ek.clone(), rf.mul(&LoopElem::scalar(p.clone()))));
        let diag = v.diag_by_weight(|w| eval_on_weight(p, w.h(1), &ExactScalar::zero()).expect("no t"));
        f21_terms.push((fk.mul(&diag), re.clone()));
        let fact = qfactorial(k as u32, Base::QInv).inv().expect("nonzero");
        rhat_terms.push((ek.scale(&fact), abk.clone()));
    }
    let f12 = sum_tensor(&f12_terms, d);
    let f21 = sum_tensor(&f21_terms, d);
    let r_hat = sum_tensor(&rhat_terms, d);
    let k = Mat::diagonal((0..d).map(|i| LoopElem::scalar(a_pow(Rational64::new(v.weight(i).h(1), 2)))).collect());
    let k_inv = Mat::diagonal((0..d).map(|i| LoopElem::scalar(a_pow(Rational64::new(-v.weight(i).h(1), 2)))).collect());
    let half = Rational64::new(1, 2);
    let bh = lift(&b_pow(v, half));
    let bmh = lift(&b_pow(v, -half));
    let f21_inv = f21.unipotent_inverse().expect("unipotent");
    let g = Mat::product(d, [&bh, &f21_inv, &k, &r_hat, &f12, &k_inv, &bmh]);
    LoopSide { f12, f21, k, k_inv, r_hat, g }
}

/// `M^(𝓔)(x) = (id⊗𝓔_{x,α})(G(x))` on `V`.
pub fn m_from_character(v: &RepSpace, alpha: &ExactScalar) -> Result<Mat<ExactScalar>, ScalarError> {
    g_on_loop(v).g.try_map(|x| x.character(alpha))
}

/// `G(x) = B₁^{1/2} R(x) K⁻¹ B₁^{−1/2}` on `V⊗W`.
pub fn g_matrix(conv: &RConventions, v: &RepSpace, w: &RepSpace) -> Result<Mat<ExactScalar>, DynError> {
    let half = Rational64::new(1, 2);
    let bh = b_pow(v, half).kron(&w.identity());
    let bmh = b_pow(v, -half).kron(&w.identity());
    let rx = build_dyn_r(conv, v, w)?;
    Ok(bh.mul(&rx).mul(&cartan_k(v, w, -1)).mul(&bmh))
}

/// `F` on `V⊗W` from the closed coefficients `ψ_k`.
pub fn f_from_coefficients(v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
    let kmax = v.dim().min(w.dim()) - 1;
    let psi = f_coefficients(kmax);
    let mut out = Mat::zeros(v.dim() * w.dim());
    let (mut ek, mut fk) = (v.identity(), w.identity());
    for (k, p) in psi.iter().enumerate() {
        if k > 0 {
            ek = ek.mul(v.e(1));
            fk = fk.mul(w.f(1));
        }
        let diag = w.diag_by_weight(|wt| eval_on_weight(p, wt.h(1), &ExactScalar::zero()).expect("no t"));
        out = out.add(&ek.kron(&fk.mul(&diag)));
    }
    out
}

/// Reference `F` from the triangular solver.
pub fn f_reference(conv: &RConventions, v: &RepSpace, w: &RepSpace) -> Result<Mat<ExactScalar>, DynError> {
    solve_abrr(conv, v, w)
}

/// `(id⊗id⊗𝓔)(F₁₂(xq^{h₃}))`: `ν̃_1 ↦ ν̃_1 a^{1/4}`, then `a → 0`.
pub fn f_shifted_by_character(f: &Mat<ExactScalar>) -> Result<Mat<ExactScalar>, ScalarError> {
    f.try_map(|v| {
        let s = v.map_monomials(|m| {
            let e = m.exponent(VarId::NuTilde(1));
            if *e.numer() == 0 {
                m
            } else {
                m * Monomial::var(VAR_A, e / 4)
            }
        });
        s.limit_at_zero(VAR_A)
    })
}

/// `u M y` with `u = i^{−h}` and `y = i^{h}`, both group-like; the entry
/// factor `i^{m_c − m_r}` is real on each weight string.
pub fn weight_parity_gauge(rep: &RepSpace, m: &Mat<ExactScalar>) -> Mat<ExactScalar> {
    let e = m.entries().map(|(r, c, v)| {
        let s = rep.weight(c).h(1) - rep.weight(r).h(1);
        debug_assert!(s % 2 == 0, "entries connect weights of equal parity");
        let sign = if (s / 2).rem_euclid(2) == 0 { 1 } else { -1 };
        (r, c, v.mul(&ExactScalar::from_int(sign)))
    });
    Mat::from_entries(m.dim(), e)
}
