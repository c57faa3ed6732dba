//! Primitive loop `P(x)`, reflection-algebra relations, Weyl-shift invariance,
//! Coxeter factorization and the dynamical Weyl cocycle.

pub mod sl2;

use num_rational::Rational64;

use crate::cgtwist::{antisymmetrizers, det_q, gauge_d, hecke_scalar, r_check, CgTwist};
use crate::coboundary::{build_gauss_factors, GaussOptions};
use crate::dyncore::{b_diag, dyn_shift, solve_abrr, DynError};
use crate::linalg::Mat;
use crate::repspace::{Elementary, RepSpace, Weight};
use crate::rmatrix::{build_r, build_r_inverse, flip_conjugate, ribbon_v, ribbon_value, RConventions};
use crate::rootvec::{coxeter_word, qexp, weyl_simple, weyl_word};
use crate::scalar::{Base, ExactScalar, Monomial, VarId, MAX_NU, NVARS};

/// Ribbon element on a fundamental tensor power or an `sl(2)` irreducible.
pub fn ribbon_on(conv: &RConventions, rep: &RepSpace) -> Mat<ExactScalar> {
    match rep.factors() {
        [Elementary::Sl2Irrep(_)] => rep.identity().scale(&ribbon_value(rep.weight(0))),
        [Elementary::Trivial] => rep.identity(),
        _ => ribbon_v(conv, rep),
    }
}

/// `P(x) = v M(x)⁻¹ B(x) M(x)` on `rep`.
pub fn primitive_loop(conv: &RConventions, rep: &RepSpace, opts: &GaussOptions) -> Result<Mat<ExactScalar>, DynError> {
    let g = build_gauss_factors(rep, opts)?;
    let v = ribbon_on(conv, rep);
    Ok(v.mul(&g.m_inverse()).mul(&b_diag(rep)).mul(&g.m))
}

/// Elementary symmetric polynomial `S_m(ν_1, …, ν_{n+1})`.
pub fn elementary_symmetric(n: usize, m: usize) -> ExactScalar {
    fn rec(n: usize, start: usize, left: usize, acc: Monomial, out: &mut Vec<ExactScalar>) {
        if left == 0 {
            out.push(ExactScalar::monomial(acc));
            return;
        }
        for i in start..=n + 1 {
            rec(n, i + 1, left - 1, acc * Monomial::nu(n, i, 1, 1), out);
        }
    }
    let mut terms = Vec::new();
    rec(n, 1, m, Monomial::ONE, &mut terms);
    ExactScalar::sum(terms.iter())
}

/// `𝐏(x) = D q^{−n}{Σ_j E_{j,j+1} + Σ_k (−1)^{n−k} S_{n+1−k} E_{n+1,k+1}} D⁻¹`.
pub fn fundamental_p_closed(n: usize) -> Mat<ExactScalar> {
    let d = n + 1;
    let mut e: Vec<(usize, usize, ExactScalar)> = (0..n).map(|j| (j, j + 1, ExactScalar::one())).collect();
    for k in 0..=n {
        let s = elementary_symmetric(n, n + 1 - k);
        let s = if (n - k) % 2 == 1 { s.neg() } else { s };
        e.push((n, k, s));
    }
    let body = Mat::from_entries(d, e).scale(&ExactScalar::q_pow(-(n as i64), 1));
    let dg = gauge_d(n);
    let dinv = dg.diagonal_inverse().expect("D is invertible");
    dg.mul(&body).mul(&dinv)
}

/// `q^{−n}(ν_1 + ⋯ + ν_{n+1})`.
pub fn expected_trace(n: usize) -> ExactScalar {
    elementary_symmetric(n, 1).mul(&ExactScalar::q_pow(-(n as i64), 1))
}

/// `det_q(U)` on the fundamental using the normalized `Ř^J`.
pub fn loop_det_q(twist: &CgTwist, u: &Mat<ExactScalar>) -> ExactScalar {
    let n = twist.n();
    let f = RepSpace::fundamental(n);
    let rc = r_check(&twist.r_j(&f, &f), n + 1);
    let s = hecke_scalar(&rc).expect("Hecke relation");
    let norm = rc.scale(&s.inv().expect("nonzero"));
    let a = antisymmetrizers(&norm, n + 1, n + 1);
    det_q(u, &norm, &a[n])
}

/// Permutation `w` of `1..=n+1`, stored as 0-based images `w(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylPerm {
    images: Vec<usize>,
}

impl WeylPerm {
    pub fn identity(n: usize) -> Self {
        WeylPerm { images: (0..=n).collect() }
    }

    /// Simple transposition `s_i = (i, i+1)`, `1 ≤ i ≤ n`.
    pub fn simple(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "simple reflection {i} out of range");
        let mut p = Self::identity(n);
        p.images.swap(i - 1, i);
        p
    }

    /// Product of simple transpositions, leftmost acting last.
    pub fn from_word(n: usize, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(n), |acc, &i| acc.compose(&Self::simple(n, i)))
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!(i < images.len() && !seen[i], "not a permutation");
            seen[i] = true;
        }
        WeylPerm { images }
    }

    pub fn n(&self) -> usize {
        self.images.len() - 1
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        WeylPerm { images: o.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &w) in self.images.iter().enumerate() {
            inv[w] = i;
        }
        WeylPerm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &w)| i == w)
    }

    /// Image of a weight, `ε_i ↦ ε_{w(i)}`.
    pub fn on_weight(&self, w: &Weight) -> Weight {
        w.permute(&self.images)
    }
}

/// `f ↦ f(w.x)` on a monomial, with `(w.x)_i = ν_{w⁻¹(i)}` lifted to
/// `ν̃_i ↦ ν̃_{w⁻¹(i)}` and `ν̃_{n+1} = (ν̃_1⋯ν̃_n)⁻¹` re-eliminated.
pub fn weyl_act_monomial(m: Monomial, w: &WeylPerm) -> Monomial {
    let n = w.n();
    assert!(n <= MAX_NU);
    let u = m.units();
    let mut a = vec![0i64; n + 1];
    a[..n].copy_from_slice(&u[1..=n]);
    let b: Vec<i64> = (0..=n).map(|i| a[w.images[i]]).collect();
    let mut out = [0i64; NVARS];
    out[0] = u[0];
    for i in 0..n {
        out[i + 1] = b[i] - b[n];
    }
    out[n + 1..].copy_from_slice(&u[n + 1..]);
    Monomial::from_units(out)
}

/// `a(w.x)`.
pub fn weyl_act(a: &ExactScalar, w: &WeylPerm) -> ExactScalar {
    if w.is_identity() {
        return a.clone();
    }
    a.map_monomials(|m| weyl_act_monomial(m, w))
}

/// Entrywise `X(w.x)`.
pub fn weyl_act_mat(m: &Mat<ExactScalar>, w: &WeylPerm) -> Mat<ExactScalar> {
    m.map(|v| weyl_act(v, w))
}

/// Operators on `V⊗W` used by the reflection-algebra checks.
pub struct LoopPair<'a> {
    pub twist: &'a CgTwist,
    pub v: &'a RepSpace,
    pub w: &'a RepSpace,
    pub opts: GaussOptions,
    /// Use `R` in place of `R^J` (harness self-test).
    pub untwisted: bool,
}

impl<'a> LoopPair<'a> {
    pub fn new(twist: &'a CgTwist, v: &'a RepSpace, w: &'a RepSpace) -> Self {
        LoopPair { twist, v, w, opts: GaussOptions::default(), untwisted: false }
    }

    fn conv(&self) -> &RConventions {
        &self.twist.conv
    }

    fn on1(&self, m: &Mat<ExactScalar>) -> Mat<ExactScalar> {
        m.kron(&self.w.identity())
    }

    fn on2(&self, m: &Mat<ExactScalar>) -> Mat<ExactScalar> {
        self.v.identity().kron(m)
    }

    /// `R^J₁₂` (or `R₁₂`).
    pub fn rj12(&self) -> Mat<ExactScalar> {
        if self.untwisted {
            build_r(self.conv(), self.v, self.w)
        } else {
            self.twist.r_j(self.v, self.w)
        }
    }

    /// `R^J₂₁` (or `R₂₁`).
    pub fn rj21(&self) -> Mat<ExactScalar> {
        let r = if self.untwisted {
            build_r(self.conv(), self.w, self.v)
        } else {
            self.twist.r_j(self.w, self.v)
        };
        flip_conjugate(&r, self.v.dim(), self.w.dim())
    }

    /// `(R^J₁₂)⁻¹ = J⁻¹R⁻¹J₂₁` (or `R⁻¹`).
    pub fn rj12_inverse(&self) -> Mat<ExactScalar> {
        let ri = build_r_inverse(self.conv(), self.v, self.w);
        if self.untwisted {
            ri
        } else {
            let t = self.twist;
            t.build_j_inverse(self.v, self.w).mul(&ri).mul(&t.build_j21(self.v, self.w))
        }
    }

    fn p(&self, rep: &RepSpace) -> Result<Mat<ExactScalar>, DynError> {
        primitive_loop(self.conv(), rep, &self.opts)
    }

    /// `M` and `M⁻¹`, the inverse taken from the Gauss factors.
    fn m_pair(&self, rep: &RepSpace) -> Result<(Mat<ExactScalar>, Mat<ExactScalar>), DynError> {
        let g = build_gauss_factors(rep, &self.opts)?;
        let inv = g.m_inverse();
        Ok((g.m, inv))
    }

    /// `R^J₁₂P₂(x)R^J₂₁ − M₁⁻¹P₂(xq^{h₁})M₁`.
    pub fn linear_residual(&self) -> Result<Mat<ExactScalar>, DynError> {
        let p2 = self.on2(&self.p(self.w)?);
        let lhs = self.rj12().mul(&p2).mul(&self.rj21());
        let (m, mi) = self.m_pair(self.v)?;
        let (m1, m1i) = (self.on1(&m), self.on1(&mi));
        let p2s = dyn_shift(&p2, &[self.v, self.w], &[0]);
        Ok(lhs.sub(&m1i.mul(&p2s).mul(&m1)))
    }

    /// `J⁻¹P_{V⊗W}J − (R^J₁₂)⁻¹P₁R^J₁₂P₂`.
    pub fn delta_residual(&self) -> Result<Mat<ExactScalar>, DynError> {
        let t = self.twist;
        let pvw = self.p(&self.v.tensor(self.w))?;
        let lhs = t.build_j_inverse(self.v, self.w).mul(&pvw).mul(&t.build_j(self.v, self.w));
        let p1 = self.on1(&self.p(self.v)?);
        let p2 = self.on2(&self.p(self.w)?);
        let rhs = self.rj12_inverse().mul(&p1).mul(&self.rj12()).mul(&p2);
        Ok(lhs.sub(&rhs))
    }

    /// `R^J₂₁P₁R^J₁₂P₂ − P₂R^J₂₁P₁R^J₁₂`.
    pub fn reflection_residual(&self) -> Result<Mat<ExactScalar>, DynError> {
        let p1 = self.on1(&self.p(self.v)?);
        let p2 = self.on2(&self.p(self.w)?);
        let mid = self.rj21().mul(&p1).mul(&self.rj12());
        Ok(mid.mul(&p2).sub(&p2.mul(&mid)))
    }

    /// `R^J₂₁P₁R^J₁₂ − M₂⁻¹P₁(xq^{h₂})M₂`.
    pub fn intertwiner_residual(&self) -> Result<Mat<ExactScalar>, DynError> {
        let p1 = self.on1(&self.p(self.v)?);
        let lhs = self.rj21().mul(&p1).mul(&self.rj12());
        let (m, mi) = self.m_pair(self.w)?;
        let (m2, m2i) = (self.on2(&m), self.on2(&mi));
        let p1s = dyn_shift(&p1, &[self.v, self.w], &[1]);
        Ok(lhs.sub(&m2i.mul(&p1s).mul(&m2)))
    }

    /// `Δ(Ã_w)F − F(w.x)(Ã_w)₂(Ã_w)₁(xq^{h₂})`.
    pub fn dyn_weyl2_residual(&self, perm: &WeylPerm) -> Result<Mat<ExactScalar>, DynError> {
        let f = solve_abrr(self.conv(), self.v, self.w)?;
        let a12 = dyn_weyl_a(&self.v.tensor(self.w), perm, &self.opts)?;
        let a1 = self.on1(&dyn_weyl_a(self.v, perm, &self.opts)?);
        let a2 = self.on2(&dyn_weyl_a(self.w, perm, &self.opts)?);
        let a1s = dyn_shift(&a1, &[self.v, self.w], &[1]);
        let rhs = weyl_act_mat(&f, perm).mul(&a2).mul(&a1s);
        Ok(a12.mul(&f).sub(&rhs))
    }
}

/// `Ã_w(x) = M(w.x)M(x)⁻¹` on `rep`.
pub fn dyn_weyl_a(rep: &RepSpace, perm: &WeylPerm, opts: &GaussOptions) -> Result<Mat<ExactScalar>, DynError> {
    let g = build_gauss_factors(rep, opts)?;
    Ok(weyl_act_mat(&g.m, perm).mul(&g.m_inverse()))
}

/// `Ã_{ww'}(x) − Ã_w(w'.x)Ã_{w'}(x)`.
pub fn dyn_weyl3_residual(rep: &RepSpace, w: &WeylPerm, w2: &WeylPerm, opts: &GaussOptions) -> Result<Mat<ExactScalar>, DynError> {
    let lhs = dyn_weyl_a(rep, &w.compose(w2), opts)?;
    let aw = weyl_act_mat(&dyn_weyl_a(rep, w, opts)?, w2);
    Ok(lhs.sub(&aw.mul(&dyn_weyl_a(rep, w2, opts)?)))
}

/// Whether `op` maps each `V[λ]` into `V[w(λ)]`.
pub fn maps_weight_spaces(rep: &RepSpace, op: &Mat<ExactScalar>, perm: &WeylPerm) -> bool {
    op.entries().all(|(r, c, _)| *rep.weight(r) == perm.on_weight(rep.weight(c)))
}

/// `Q(x) = ŵ_C v⁻¹ P(x)`.
pub fn coxeter_q(conv: &RConventions, rep: &RepSpace, opts: &GaussOptions) -> Result<Mat<ExactScalar>, DynError> {
    let p = primitive_loop(conv, rep, opts)?;
    let vinv = ribbon_on(conv, rep).inverse().expect("ribbon invertible");
    Ok(weyl_word(rep, &coxeter_word(rep.rank())).mul(&vinv).mul(&p))
}

fn nu1(e: i64) -> ExactScalar {
    ExactScalar::monomial(Monomial::nu(1, 1, e, 1))
}

/// `sl(2)`: `ω = q^{−h²/4}ŵ`.
pub fn sl2_omega(rep: &RepSpace) -> Mat<ExactScalar> {
    assert_eq!(rep.rank(), 1);
    let h2 = rep.diag_by_weight(|w| ExactScalar::q_pow_ratio(Rational64::new(-w.h(1) * w.h(1), 4)));
    h2.mul(&weyl_simple(rep, 1))
}

/// `sl(2)`: `e_{q⁻¹}^{−xe} e_{q⁻¹}^{−x⁻¹e}` with `x = ν_1`.
pub fn sl2_exponential_tail(rep: &RepSpace) -> Mat<ExactScalar> {
    assert_eq!(rep.rank(), 1);
    let e1 = qexp(&rep.e(1).scale(&nu1(1).neg()), Base::QInv).expect("nilpotent");
    let e2 = qexp(&rep.e(1).scale(&nu1(-1).neg()), Base::QInv).expect("nilpotent");
    e1.mul(&e2)
}

/// `sl(2)`: `P = v ŵ⁻¹ q^{h/2} e_{q⁻¹}^{−xe} e_{q⁻¹}^{−x⁻¹e}`.
///
/// The prefactor equals `ξ q^{−h(h+2)/4} ω`; `ω` alone leaves that diagonal
/// factor over.
pub fn sl2_p_exponential(conv: &RConventions, rep: &RepSpace) -> Mat<ExactScalar> {
    let wi = weyl_simple(rep, 1).inverse().expect("invertible");
    let qh = rep.diag_by_weight(|w| ExactScalar::q_pow(w.h(1), 2));
    ribbon_on(conv, rep).mul(&wi).mul(&qh).mul(&sl2_exponential_tail(rep))
}

/// `sl(2)`: `P = v M⁽⁺⁾⁻¹ 𝔠⁽⁻⁾ B M⁽⁺⁾`.
pub fn sl2_p_gauss(conv: &RConventions, rep: &RepSpace, opts: &GaussOptions) -> Result<Mat<ExactScalar>, DynError> {
    assert_eq!(rep.rank(), 1);
    let g = build_gauss_factors(rep, opts)?;
    let mpi = g.m_plus.unipotent_inverse().expect("unipotent");
    Ok(ribbon_on(conv, rep).mul(&mpi).mul(&g.c_minus).mul(&b_diag(rep)).mul(&g.m_plus))
}

/// Variable used for spare parameters beyond the rank.
pub fn spare_var(n: usize, k: usize) -> VarId {
    VarId::NuTilde(n + k)
}
