//! Gauss factors `M = M⁽⁰⁾ M⁽⁻⁾⁻¹ M⁽⁺⁾` of the dynamical coboundary, the
//! sufficient-condition axioms, and closed forms in the fundamental
//! representation.

use num_complex::Complex64;
use num_rational::Rational64;

use crate::cgtwist::{gauge_d, tau_root, CgTwist, TauDirection};
use crate::dyncore::{b_diag, b_monomial, by_height, dyn_shift, evaluate, nu_ratio, triangular_solve, DynError};
use crate::linalg::Mat;
use crate::repspace::RepSpace;
use crate::rmatrix::{cartan_k, flip_conjugate, r_hat};
use crate::rootvec::qexp;
use crate::scalar::{Base, ExactScalar, Monomial, NumericPoint, ScalarError, VarId};

/// Choice of the diagonal factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum M0Choice {
    /// `∏_k ν_{k+1}^{ζ^(k)/2} q^{−(ζ^(k))²/2}`.
    #[default]
    Zeta,
    /// `M⁽⁰⁾ = 1`; valid for `n = 1` only.
    Trivial,
}

/// Order of the infinite product defining `M⁽⁻⁾`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MinusOrder {
    /// `M⁽⁻⁾ = ∏_{k=1}^{∞} B^{−k}𝔠⁽⁻⁾⁻¹B^k` with `k = 1` leftmost.
    #[default]
    Ascending,
    /// Reversed product; breaks the coboundary equation.
    Descending,
}

/// Options for building the Gauss factors.
#[derive(Debug, Clone, Default)]
pub struct GaussOptions {
    pub m0: M0Choice,
    pub minus_order: MinusOrder,
    pub tau: TauDirection,
}

/// Gauss factors of `M(x)` on one representation.
#[derive(Debug, Clone)]
pub struct GaussFactors {
    pub m0: Mat<ExactScalar>,
    pub c_plus: Mat<ExactScalar>,
    pub c_minus: Mat<ExactScalar>,
    pub c_minus_inv: Mat<ExactScalar>,
    pub m_plus: Mat<ExactScalar>,
    pub m_minus: Mat<ExactScalar>,
    pub m: Mat<ExactScalar>,
}

impl GaussFactors {
    /// `M(x)⁻¹ = M⁽⁺⁾⁻¹ M⁽⁻⁾ M⁽⁰⁾⁻¹`.
    pub fn m_inverse(&self) -> Mat<ExactScalar> {
        let p = self.m_plus.unipotent_inverse().expect("M+ is unipotent");
        let z = self.m0.diagonal_inverse().expect("M0 is invertible");
        p.mul(&self.m_minus).mul(&z)
    }
}

/// `M⁽⁰⁾` on `rep`.
pub fn m_zero(rep: &RepSpace, choice: M0Choice) -> Mat<ExactScalar> {
    let n = rep.rank();
    match choice {
        M0Choice::Trivial => rep.identity(),
        M0Choice::Zeta => rep.diag_by_weight(|w| {
            let mut m = Monomial::ONE;
            let mut qe = Rational64::from_integer(0);
            for k in 1..=n {
                let z = w.zeta(k);
                m = m * Monomial::nu(n, k + 1, *z.numer(), 2 * *z.denom());
                qe -= z * z / 2;
            }
            ExactScalar::monomial(m * Monomial::var(VarId::Q, qe))
        }),
    }
}

/// `τ^m(𝔠⁽⁺⁾) = ∏_{k=1}^{n} e_{q⁻¹}^{−ν_{k+1}⁻¹ q^{ζ^(k−1−m)} e_(k−m)}` on `rep`.
pub fn c_plus_shifted(rep: &RepSpace, m: usize, tau: TauDirection) -> Mat<ExactScalar> {
    let n = rep.rank();
    let mut out = rep.identity();
    for k in 1..=n {
        let Some((j, _)) = tau_root(n, tau, (k, k), m) else {
            continue;
        };
        let qz = rep.diag_by_weight(|w| ExactScalar::q_pow_ratio(w.zeta(j - 1)));
        let c = ExactScalar::monomial(Monomial::nu(n, k + 1, -1, 1)).neg();
        let z = qz.mul(rep.e(j)).scale(&c);
        out = out.mul(&qexp(&z, Base::QInv).expect("nilpotent"));
    }
    out
}

/// `𝔠⁽⁺⁾` on `rep`.
pub fn c_plus(rep: &RepSpace) -> Mat<ExactScalar> {
    c_plus_shifted(rep, 0, TauDirection::Down)
}

/// `𝔠⁽⁻⁾⁻¹ = ∏_{k=1}^{n} e_{q⁻¹}^{ν_{k+1} q^{−ζ^(k−1)−h_(k)−1} f_(k)}` on `rep`.
pub fn c_minus_inverse(rep: &RepSpace) -> Mat<ExactScalar> {
    let n = rep.rank();
    let mut out = rep.identity();
    for k in 1..=n {
        let qz = rep.diag_by_weight(|w| ExactScalar::q_pow_ratio(-w.zeta(k - 1) - w.h(k) - 1));
        let c = ExactScalar::monomial(Monomial::nu(n, k + 1, 1, 1));
        let z = qz.mul(rep.f(k)).scale(&c);
        out = out.mul(&qexp(&z, Base::QInv).expect("nilpotent"));
    }
    out
}

/// `M⁽⁺⁾ = ∏_{m=0}^{n−1} τ^m(𝔠⁽⁺⁾)`, `m` ascending.
pub fn m_plus(rep: &RepSpace, tau: TauDirection) -> Mat<ExactScalar> {
    let factors: Vec<_> = (0..rep.rank()).map(|m| c_plus_shifted(rep, m, tau)).collect();
    Mat::product(rep.dim(), factors.iter())
}

/// Exact `M⁽⁻⁾` from `𝔠⁽⁻⁾BM⁽⁻⁾ = M⁽⁻⁾B` (or the fixed point of the reversed
/// product, `M B⁻¹𝔠⁽⁻⁾ = B⁻¹M`).
pub fn solve_m_minus(rep: &RepSpace, c_minus: &Mat<ExactScalar>, order: MinusOrder) -> Result<Mat<ExactScalar>, DynError> {
    let d = rep.dim();
    let same = |a: usize, b: usize| rep.weight(a) == rep.weight(b);
    let seed = |a: usize, b: usize| {
        same(a, b).then(|| if a == b { ExactScalar::one() } else { ExactScalar::zero() })
    };
    let b: Vec<ExactScalar> = (0..d).map(|a| ExactScalar::monomial(b_monomial(rep.weight(a)))).collect();
    let mut rows = by_height(d, |a| *rep.weight(a));
    match order {
        MinusOrder::Ascending => {
            let g = c_minus.sub(&Mat::identity(d));
            triangular_solve(&g, &b, &b, &b, &rows, seed)
        }
        MinusOrder::Descending => {
            rows.reverse();
            let g = c_minus.transpose().sub(&Mat::identity(d));
            let binv: Vec<ExactScalar> = b.iter().map(|x| x.inv().expect("monomial")).collect();
            Ok(triangular_solve(&g, &binv, &binv, &binv, &rows, seed)?.transpose())
        }
    }
}

/// All Gauss factors and `M(x)` on `rep`.
pub fn build_gauss_factors(rep: &RepSpace, opts: &GaussOptions) -> Result<GaussFactors, DynError> {
    let m0 = m_zero(rep, opts.m0);
    let c_plus = c_plus_shifted(rep, 0, opts.tau);
    let c_minus_inv = c_minus_inverse(rep);
    let c_minus = c_minus_inv.unipotent_inverse().expect("unipotent");
    let m_plus = m_plus(rep, opts.tau);
    let m_minus = solve_m_minus(rep, &c_minus, opts.minus_order)?;
    let m_minus_inv = m_minus.unipotent_inverse().expect("M- is unipotent");
    let m = m0.mul(&m_minus_inv).mul(&m_plus);
    Ok(GaussFactors { m0, c_plus, c_minus, c_minus_inv, m_plus, m_minus, m })
}

/// `∏_{k=1}^{depth} B^{−k}𝔠⁽⁻⁾⁻¹B^k` evaluated at `p`, `k = 1` leftmost.
pub fn truncated_m_minus_product(rep: &RepSpace, depth: usize, p: &NumericPoint) -> Result<Mat<Complex64>, ScalarError> {
    let ci = evaluate(&c_minus_inverse(rep), p)?;
    let b: Vec<Complex64> = (0..rep.dim())
        .map(|a| p.eval(&ExactScalar::monomial(b_monomial(rep.weight(a)))))
        .collect::<Result<_, _>>()?;
    let mut out = Mat::identity(ci.dim());
    for k in 1..=depth as i32 {
        let factor = Mat::from_entries(ci.dim(), ci.entries().map(|(r, c, x)| (r, c, x * (b[c] / b[r]).powi(k))));
        out = out.mul(&factor);
    }
    Ok(out)
}

/// Operators on `V⊗W` shared by the coboundary checks.
pub struct PairContext<'a> {
    pub twist: &'a CgTwist,
    pub v: &'a RepSpace,
    pub w: &'a RepSpace,
    pub opts: GaussOptions,
}

impl<'a> PairContext<'a> {
    pub fn new(twist: &'a CgTwist, v: &'a RepSpace, w: &'a RepSpace) -> Self {
        PairContext { twist, v, w, opts: GaussOptions::default() }
    }

    fn legs(&self) -> [&RepSpace; 2] {
        [self.v, self.w]
    }

    fn on1(&self, m: &Mat<ExactScalar>) -> Mat<ExactScalar> {
        m.kron(&self.w.identity())
    }

    fn on2(&self, m: &Mat<ExactScalar>) -> Mat<ExactScalar> {
        self.v.identity().kron(m)
    }

    /// `X₁(xq^{h₂})` for an operator `X` on `V`.
    fn on1_shifted(&self, m: &Mat<ExactScalar>) -> Mat<ExactScalar> {
        dyn_shift(&self.on1(m), &self.legs(), &[1])
    }

    /// `X₂(xq^{h₁})` for an operator `X` on `W`.
    fn on2_shifted(&self, m: &Mat<ExactScalar>) -> Mat<ExactScalar> {
        dyn_shift(&self.on2(m), &self.legs(), &[0])
    }

    fn s12(&self, k: usize) -> Mat<ExactScalar> {
        self.twist.s_factor(k, self.v, self.w)
    }

    fn s21(&self, k: usize) -> Mat<ExactScalar> {
        flip_conjugate(&self.twist.s_factor(k, self.w, self.v), self.v.dim(), self.w.dim())
    }

    fn inv_diag(m: &Mat<ExactScalar>) -> Mat<ExactScalar> {
        m.diagonal_inverse().expect("invertible diagonal")
    }

    /// `𝓕 = Δ(M) J M₂⁻¹ M₁(xq^{h₂})⁻¹` with `J` replaced by `j` when given.
    pub fn coboundary_f(&self, j: Option<&Mat<ExactScalar>>) -> Result<Mat<ExactScalar>, DynError> {
        let mv = build_gauss_factors(self.v, &self.opts)?;
        let mw = build_gauss_factors(self.w, &self.opts)?;
        let mvw = build_gauss_factors(&self.v.tensor(self.w), &self.opts)?;
        let j = match j {
            Some(j) => j.clone(),
            None => self.twist.build_j(self.v, self.w),
        };
        let m2_inv = self.on2(&mw.m_inverse());
        let m1s_inv = self.on1_shifted(&mv.m_inverse());
        Ok(mvw.m.mul(&j).mul(&m2_inv).mul(&m1s_inv))
    }

    /// `M₂(xq^{h₁}) M₁(x) R^J M₂(x)⁻¹ M₁(xq^{h₂})⁻¹`.
    pub fn r_from_m(&self) -> Result<Mat<ExactScalar>, DynError> {
        let mv = build_gauss_factors(self.v, &self.opts)?;
        let mw = build_gauss_factors(self.w, &self.opts)?;
        let rj = self.twist.r_j(self.v, self.w);
        let lhs = self.on2_shifted(&mw.m).mul(&self.on1(&mv.m));
        let rhs = self.on2(&mw.m_inverse()).mul(&self.on1_shifted(&mv.m_inverse()));
        Ok(lhs.mul(&rj).mul(&rhs))
    }

    /// `Δ(M⁽⁰⁾) S^[1]₁₂ M⁽⁰⁾₂⁻¹ M⁽⁰⁾₁(xq^{h₂})⁻¹ − 1`, with `S^[1]` omitted
    /// when `with_s` is false.
    pub fn axiom0(&self, with_s: bool) -> Mat<ExactScalar> {
        let c = self.opts.m0;
        let delta = m_zero(&self.v.tensor(self.w), c);
        let s = if with_s { self.s12(1) } else { Mat::identity(delta.dim()) };
        let m2 = Self::inv_diag(&self.on2(&m_zero(self.w, c)));
        let m1 = Self::inv_diag(&self.on1_shifted(&m_zero(self.v, c)));
        delta.mul(&s).mul(&m2).mul(&m1).sub(&Mat::identity(delta.dim()))
    }

    fn c_pm(&self, rep: &RepSpace, plus: bool) -> Mat<ExactScalar> {
        if plus {
            c_plus_shifted(rep, 0, self.opts.tau)
        } else {
            c_minus_inverse(rep).unipotent_inverse().expect("unipotent")
        }
    }

    /// `K⁻¹Δ(𝔠)K − {S₂₁𝔠₁S₂₁⁻¹}K^{∓1}{S₁₂𝔠₂S₁₂⁻¹}K^{±1}`.
    pub fn axiom1d(&self, plus: bool) -> Mat<ExactScalar> {
        let k = cartan_k(self.v, self.w, 1);
        let kinv = cartan_k(self.v, self.w, -1);
        let delta = self.c_pm(&self.v.tensor(self.w), plus);
        let lhs = kinv.mul(&delta).mul(&k);
        let (s12, s21) = (self.s12(1), self.s21(1));
        let a = s21.mul(&self.on1(&self.c_pm(self.v, plus))).mul(&Self::inv_diag(&s21));
        let b = s12.mul(&self.on2(&self.c_pm(self.w, plus))).mul(&Self::inv_diag(&s12));
        let (k_mid, k_end) = if plus { (&kinv, &k) } else { (&k, &kinv) };
        lhs.sub(&a.mul(k_mid).mul(&b).mul(k_end))
    }

    /// `𝔠₁(xq^{h₂}) − {S₁₂⁻¹S₂₁K}𝔠₁{K⁻¹S₂₁⁻¹S₁₂}`.
    pub fn axiom1(&self, plus: bool) -> Mat<ExactScalar> {
        let c = self.c_pm(self.v, plus);
        let (s12, s21) = (self.s12(1), self.s21(1));
        let left = Self::inv_diag(&s12).mul(&s21).mul(&cartan_k(self.v, self.w, 1));
        let right = Self::inv_diag(&left);
        self.on1_shifted(&c).sub(&left.mul(&self.on1(&c)).mul(&right))
    }

    /// `B₂(S^[2])⁻¹Ĵ^[1]S^[2]B₂⁻¹`.
    pub fn conj_j1(&self) -> Mat<ExactScalar> {
        let b2 = self.on2(&b_diag(self.w));
        let s2 = self.s12(2);
        let jh = if self.twist.n() >= 2 {
            self.twist.j_hat(1, self.v, self.w)
        } else {
            Mat::identity(b2.dim())
        };
        b2.mul(&Self::inv_diag(&s2)).mul(&jh).mul(&s2).mul(&Self::inv_diag(&b2))
    }

    /// `(S^[1])⁻¹R̂S^[1]`.
    pub fn conj_r_hat(&self) -> Mat<ExactScalar> {
        let s1 = self.s12(1);
        Self::inv_diag(&s1).mul(&r_hat(&self.twist.conv, self.v, self.w)).mul(&s1)
    }

    /// `𝔠⁽⁺⁾₁(xq^{h₂})`.
    pub fn c_plus_1_shifted(&self) -> Mat<ExactScalar> {
        self.on1_shifted(&self.c_pm(self.v, true))
    }

    /// `𝔠⁽⁻⁾₂⁻¹`.
    pub fn c_minus_inv_2(&self) -> Mat<ExactScalar> {
        self.on2(&c_minus_inverse(self.w))
    }

    /// `𝔠⁻₂𝔠⁺₁(xq^{h₂}){B₂S₂⁻¹Ĵ^[1]S₂B₂⁻¹} − {S₁⁻¹R̂S₁}𝔠⁺₁(xq^{h₂})𝔠⁻₂`.
    pub fn axiom2prime(&self) -> Mat<ExactScalar> {
        let cm = self.on2(&self.c_pm(self.w, false));
        let cp = self.c_plus_1_shifted();
        cm.mul(&cp).mul(&self.conj_j1()).sub(&self.conj_r_hat().mul(&cp).mul(&cm))
    }

    /// `(𝒲, 𝒲̃)`.
    pub fn w_pair(&self) -> (Mat<ExactScalar>, Mat<ExactScalar>) {
        let cmi = self.c_minus_inv_2();
        let cp = self.c_plus_1_shifted();
        let w = cp.mul(&self.conj_j1()).mul(&cmi);
        let wt = cmi.mul(&self.conj_r_hat()).mul(&cp);
        (w, wt)
    }

    /// `Δ(M⁽⁺⁾)JM⁽⁺⁾₂⁻¹ − S^[1]∏_k 𝔠^{[+k]}₁(xq^{h₂})(S^[k+1])⁻¹Ĵ^[k]S^[k+1]`.
    pub fn uprod(&self) -> Mat<ExactScalar> {
        let n = self.twist.n();
        let tau = self.opts.tau;
        let vw = self.v.tensor(self.w);
        let j = self.twist.build_j(self.v, self.w);
        let mp2 = self.on2(&m_plus(self.w, tau)).unipotent_inverse().expect("unipotent");
        let lhs = m_plus(&vw, tau).mul(&j).mul(&mp2);
        let mut rhs = self.s12(1);
        for k in 1..=n {
            let c = self.on1_shifted(&c_plus_shifted(self.v, k - 1, tau));
            rhs = rhs.mul(&c);
            if k < n {
                let s = self.s12(k + 1);
                let jh = self.twist.j_hat(k, self.v, self.w);
                rhs = rhs.mul(&Self::inv_diag(&s)).mul(&jh).mul(&s);
            }
        }
        lhs.sub(&rhs)
    }
}

fn nu_inv(n: usize, i: usize) -> ExactScalar {
    ExactScalar::monomial(Monomial::nu(n, i, -1, 1))
}

/// `Σ ν_{a_1}⁻¹⋯ν_{a_m}⁻¹` over `lo<a_1<⋯<a_m≤n+1` (elementary) or
/// `lo≤a_1≤⋯≤a_m≤n+1` (complete).
fn inverse_symmetric(n: usize, lo: usize, m: usize, complete: bool) -> ExactScalar {
    let mut e = vec![ExactScalar::zero(); m + 1];
    e[0] = ExactScalar::one();
    let start = if complete { lo } else { lo + 1 };
    for a in start..=n + 1 {
        if complete {
            for k in 1..=m {
                e[k] = e[k].add(&e[k - 1].mul(&nu_inv(n, a)));
            }
        } else {
            for k in (1..=m).rev() {
                e[k] = e[k].add(&e[k - 1].mul(&nu_inv(n, a)));
            }
        }
    }
    e[m].clone()
}

fn q_ratio(p: i64, r: i64) -> ExactScalar {
    ExactScalar::q_pow_ratio(Rational64::new(p, r))
}

/// Closed form of `π_f(M⁽⁺⁾)` (`a_ij`, elementary sums over `i<a_1<⋯`) or of
/// `π_f(M⁽⁺⁾⁻¹)` (`b_ij`, complete sums over `j≤a_1≤⋯`).
pub fn fundamental_m_plus_closed(n: usize, inverse: bool) -> Mat<ExactScalar> {
    let d = n + 1;
    let mut e: Vec<_> = (0..d).map(|i| (i, i, ExactScalar::one())).collect();
    for i in 1..=d {
        for j in i + 1..=d {
            let (lo, sign) = if inverse { (j, 1) } else { (i, if (j - i) % 2 == 0 { 1 } else { -1 }) };
            let coef = inverse_symmetric(n, lo, j - i, inverse).mul(&ExactScalar::from_int(sign));
            let qe = q_ratio(-(((j - i) * (j + i)) as i64 - 3 * (j - i) as i64), 2 * d as i64);
            e.push((i - 1, j - 1, coef.mul(&qe)));
        }
    }
    Mat::from_entries(d, e)
}

fn one_minus_ratio(n: usize, i: usize, r: usize) -> ExactScalar {
    ExactScalar::one().sub(&nu_ratio(n, i, r))
}

fn nu_power(n: usize, i: usize, p: i64) -> ExactScalar {
    ExactScalar::monomial(Monomial::nu(n, i, p, 1))
}

/// Closed form of `π_f(M⁽⁻⁾)` (`c_ij`) or of `π_f(M⁽⁻⁾⁻¹)` with
/// `d_ij = ν_i^{i−j}/∏_{r=j}^{i−1}(1−ν_iν_r⁻¹)`.
pub fn fundamental_m_minus_closed(n: usize, inverse: bool) -> Mat<ExactScalar> {
    let d = n + 1;
    let mut e: Vec<_> = (0..d).map(|i| (i, i, ExactScalar::one())).collect();
    for i in 1..=d {
        for j in 1..=d {
            if !inverse && i < j {
                let mut den = ExactScalar::one();
                for r in i + 1..=j {
                    den = den.mul(&one_minus_ratio(n, i, r));
                }
                let c = nu_power(n, i, (j - i) as i64).checked_div(&den).expect("nonzero");
                let qe = q_ratio(((j - i) * (j + i)) as i64 - 3 * (j - i) as i64, 2 * d as i64);
                e.push((j - 1, i - 1, c.mul(&qe)));
            }
            if inverse && i > j {
                let mut den = ExactScalar::one();
                for r in j..i {
                    den = den.mul(&one_minus_ratio(n, i, r));
                }
                let c = nu_power(n, i, i as i64 - j as i64).checked_div(&den).expect("nonzero");
                let qe = q_ratio(((i - j) * (j + i)) as i64 - 3 * (i - j) as i64, 2 * d as i64);
                e.push((i - 1, j - 1, c.mul(&qe)));
            }
        }
    }
    Mat::from_entries(d, e)
}

/// Vandermonde `𝒱 = Σ ν_j^{i−1} E_ij`.
pub fn vandermonde(n: usize) -> Mat<ExactScalar> {
    let d = n + 1;
    let mut e = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            e.push((i - 1, j - 1, nu_power(n, j, i as i64 - 1)));
        }
    }
    Mat::from_entries(d, e)
}

/// Diagonal `𝒰(x)`.
pub fn u_diag(n: usize) -> Mat<ExactScalar> {
    let d = n + 1;
    let mut out = Vec::with_capacity(d);
    for i in 1..=d {
        let mut m = Monomial::nu(n, i, 1 - i as i64, 1);
        let mut qe = Rational64::from_integer(0);
        for k in 2..=d {
            let z = Rational64::from_integer(if i < k { 1 } else { 0 }) - Rational64::new(k as i64 - 1, d as i64);
            m = m * Monomial::nu(n, k, -*z.numer(), 2 * *z.denom());
            qe += z * z / 2;
        }
        let mut den = ExactScalar::one();
        for r in i + 1..=d {
            den = den.mul(&one_minus_ratio(n, i, r));
        }
        let num = ExactScalar::monomial(m * Monomial::var(VarId::Q, qe));
        out.push(num.checked_div(&den).expect("nonzero"));
    }
    Mat::diagonal(out)
}

/// `D𝒱𝒰D⁻¹`, the closed form of `π_f(M(x)⁻¹)`.
pub fn fundamental_m_inverse_closed(n: usize) -> Mat<ExactScalar> {
    let d = gauge_d(n);
    let dinv = d.diagonal_inverse().expect("invertible");
    d.mul(&vandermonde(n)).mul(&u_diag(n)).mul(&dinv)
}

/// Closed forms of `(S^[1])⁻¹R̂S^[1]`, `B₂S₂⁻¹Ĵ^[1]S₂B₂⁻¹`, `𝔠⁽⁻⁾₂⁻¹` and
/// `𝔠⁽⁺⁾₁(xq^{h₂})` on `fund⊗fund`, in that order.
pub fn fundamental_w_factors_closed(n: usize) -> [Mat<ExactScalar>; 4] {
    let d = n + 1;
    let dd = d * d;
    let at = |i: usize, j: usize, k: usize, l: usize| ((i - 1) * d + (k - 1), (j - 1) * d + (l - 1));
    let one_m_q2 = ExactScalar::one().sub(&ExactScalar::q_pow(-2, 1));
    let id = || (0..dd).map(|a| (a, a, ExactScalar::one())).collect::<Vec<_>>();

    let mut r = id();
    for i in 1..=d {
        for j in i + 1..=d {
            let (row, col) = at(i, j, j, i);
            r.push((row, col, one_m_q2.mul(&q_ratio(2 * (j as i64 - i as i64), d as i64))));
        }
    }

    let mut jm = id();
    for i in 1..=d {
        for j in i + 1..d {
            let (row, col) = at(i, j, j + 1, i + 1);
            let c = one_m_q2.mul(&q_ratio(3 * (j as i64 - i as i64), d as i64)).mul(&nu_ratio(n, j + 1, i + 1));
            jm.push((row, col, c));
        }
    }

    let mut cm = id();
    for i in 1..=d {
        for k in 1..=n {
            let (row, col) = at(i, i, k + 1, k);
            cm.push((row, col, q_ratio(k as i64 - 1, d as i64).mul(&nu_power(n, k + 1, 1))));
        }
    }

    let mut cp = id();
    for i in 1..=d {
        for j in i + 1..=d {
            let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
            let mut nu = ExactScalar::from_int(sign);
            for l in i + 1..=j {
                nu = nu.mul(&nu_inv(n, l));
            }
            for k in 1..=d {
                let delta = if i < k && k <= j { 1 } else { 0 };
                let num = -(((j - i) as i64) * (i as i64 + j as i64 - 7)) - 4 * d as i64 * delta;
                let (row, col) = at(i, j, k, k);
                cp.push((row, col, nu.mul(&q_ratio(num, 2 * d as i64))));
            }
        }
    }
    [r, jm, cm, cp].map(|e| Mat::from_entries(dd, e))
}

/// Residual of the trivial-gauge transform `M ↦ uMy⁻¹` on `V⊗W`: the new
/// coboundary with the twisted cocycle `Δ(y)Jy₂⁻¹y₁⁻¹` minus the original `𝓕`.
/// `u` is the dynamical group-like `B(x)`, `y` the zero-weight `1 + f_1e_1`.
pub fn trivial_gauge_residual(ctx: &PairContext) -> Result<Mat<ExactScalar>, DynError> {
    let (v, w) = (ctx.v, ctx.w);
    let vw = v.tensor(w);
    let y = |r: &RepSpace| r.identity().add(&r.f(1).mul(r.e(1)));
    let gauged = |r: &RepSpace| -> Result<(Mat<ExactScalar>, Mat<ExactScalar>), DynError> {
        let m = build_gauss_factors(r, &ctx.opts)?;
        let yr = y(r);
        let yi = yr.inverse().expect("y invertible");
        let b = b_diag(r);
        let mm = b.mul(&m.m).mul(&yi);
        let inv = yr.mul(&m.m_inverse()).mul(&b.diagonal_inverse().expect("B invertible"));
        Ok((mm, inv))
    };
    let (_, mv_inv) = gauged(v)?;
    let (_, mw_inv) = gauged(w)?;
    let (mvw, _) = gauged(&vw)?;
    let j = ctx.twist.build_j(v, w);
    let y1_inv = y(v).inverse().expect("invertible").kron(&w.identity());
    let y2_inv = v.identity().kron(&y(w).inverse().expect("invertible"));
    let j_twisted = y(&vw).mul(&j).mul(&y2_inv).mul(&y1_inv);
    let f_new = mvw.mul(&j_twisted).mul(&ctx.on2(&mw_inv)).mul(&ctx.on1_shifted(&mv_inv));
    Ok(f_new.sub(&ctx.coboundary_f(None)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repspace::{is_strictly_lower, is_strictly_upper};

    #[test]
    fn factor_shapes() {
        let f = RepSpace::fundamental(2);
        let g = build_gauss_factors(&f, &GaussOptions::default()).unwrap();
        assert!(g.m0.is_diagonal());
        assert!(is_strictly_upper(&f, &g.m_plus.sub(&f.identity())));
        assert!(is_strictly_lower(&f, &g.m_minus.sub(&f.identity())));
    }

    #[test]
    fn sl2_c_plus_is_single_exponential() {
        let f = RepSpace::fundamental(1);
        let c = c_plus(&f);
        let expected = f.identity().sub(&f.e(1).scale(&nu_inv(1, 2)));
        assert_eq!(c, expected);
    }
}
