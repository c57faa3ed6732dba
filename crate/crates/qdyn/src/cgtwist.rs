//! Shift morphisms of the Cremmer–Gervais triple, the twist `J` built from
//! shifted `R̂` factors, the twisted R-matrix, Hecke antisymmetrizers and the
//! quantum determinant.

use num_rational::Rational64;
use thiserror::Error;

use crate::linalg::{flip, Mat};
use crate::repspace::{embed_mat, RepSpace};
use crate::rmatrix::{build_r, flip_conjugate, q_minus_qinv, RConventions};
use crate::rootvec::qexp;
use crate::scalar::{qnum, Base, ExactScalar, QNumKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("Ř fails the Hecke relation with s = {s}")]
    HeckeViolation { s: String },
}

/// Direction of `τ` on simple root indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauDirection {
    /// `e_(i) ↦ e_(i−1)`.
    #[default]
    Down,
    /// `e_(i) ↦ e_(i+1)`; not a valid shift, kept for mutation tests.
    Up,
}

/// Root `(i, j)` moved by `τ^k`, or `None` when it leaves the diagram.
pub fn tau_root(n: usize, dir: TauDirection, (i, j): (usize, usize), k: usize) -> Option<(usize, usize)> {
    match dir {
        TauDirection::Down => (i > k).then(|| (i - k, j - k)),
        TauDirection::Up => (j + k <= n).then(|| (i + k, j + k)),
    }
}

/// Root `(i, j)` moved by `τ̃^m` (`f_(i) ↦ f_(i+1)`).
pub fn tau_tilde_root(n: usize, (i, j): (usize, usize), m: usize) -> Option<(usize, usize)> {
    (j + m <= n).then(|| (i + m, j + m))
}

/// `τ^k` on a Cartan element written in the `ζ^(1..n)` basis.
pub fn tau_cartan(c: &[Rational64], k: usize) -> Vec<Rational64> {
    let n = c.len();
    (0..n).map(|j| if j + k < n { c[j + k] } else { Rational64::from_integer(0) }).collect()
}

/// `τ̃^m` on a Cartan element written in the `ζ^(1..n)` basis.
pub fn tau_tilde_cartan(c: &[Rational64], m: usize) -> Vec<Rational64> {
    let n = c.len();
    (0..n).map(|j| if j >= m { c[j - m] } else { Rational64::from_integer(0) }).collect()
}

/// Index range of the `ε`-table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonRange {
    /// `i, j ∈ 1..=n`, `m ∈ 1..=n−1`: reproduces `S^[m]/S^[m+1]`.
    #[default]
    Full,
    /// `i, j, m ∈ 1..=n−1`.
    Restricted,
}

/// `ε^(m)_{i,j}`.
pub fn epsilon(n: usize, range: EpsilonRange, m: usize, i: usize, j: usize) -> i64 {
    let top = match range {
        EpsilonRange::Full => n,
        EpsilonRange::Restricted => n.saturating_sub(1),
    };
    if m == 0 || m >= n || i == 0 || j == 0 || i > top || j > top {
        0
    } else if j == m + i {
        1
    } else if j == m + i + 1 {
        -1
    } else {
        0
    }
}

/// Violations of `ε^m_{i,j} = ε^{m−k}_{i+k,j}`.
pub fn epsilon_identity_shift_left(n: usize, range: EpsilonRange) -> Vec<[usize; 4]> {
    let mut bad = Vec::new();
    for i in 1..n {
        for j in 1..n {
            for k in 1..n {
                for m in 1..n {
                    if i + k < n
                        && m > k
                        && epsilon(n, range, m, i, j) != epsilon(n, range, m - k, i + k, j)
                    {
                        bad.push([i, j, k, m]);
                    }
                }
            }
        }
    }
    bad
}

/// Violations of `ε^m_{i,j} = ε^{m−k}_{i,j−k}`.
pub fn epsilon_identity_shift_right(n: usize, range: EpsilonRange) -> Vec<[usize; 4]> {
    let mut bad = Vec::new();
    for i in 1..n {
        for j in 1..n {
            for k in 1..n {
                for m in 1..n {
                    if m > k && j > k && epsilon(n, range, m, i, j) != epsilon(n, range, m - k, i, j - k) {
                        bad.push([i, j, k, m]);
                    }
                }
            }
        }
    }
    bad
}

/// `h_(i)` in the `ζ` basis (`ζ^(0) = ζ^(n+1) = 0`).
fn h_in_zeta(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i - 1] = 2;
    if i >= 2 {
        v[i - 2] = -1;
    }
    if i < n {
        v[i] = -1;
    }
    v
}

/// Violations of `h_(p−m−1) + h_(p−m) = Σ_i ε^{m+1}_{i,p}ζ^(i) + Σ_j ε^{l−m}_{p−l,j}ζ^(j)`
/// over `1 ≤ m+1 ≤ l ≤ p−1 ≤ n−1`.
pub fn epsilon_identity_cartan(n: usize, range: EpsilonRange) -> Vec<[usize; 3]> {
    let mut bad = Vec::new();
    for p in 2..=n {
        for l in 1..p {
            for m in 0..l {
                let a = h_in_zeta(n, p - m - 1);
                let b = h_in_zeta(n, p - m);
                let rhs: Vec<i64> = (1..=n)
                    .map(|t| epsilon(n, range, m + 1, t, p) + epsilon(n, range, l - m, p - l, t))
                    .collect();
                if (0..n).any(|t| a[t] + b[t] != rhs[t]) {
                    bad.push([l, m, p]);
                }
            }
        }
    }
    bad
}

/// Builder for the Cremmer–Gervais twist on pairs of representations.
#[derive(Debug, Clone)]
pub struct CgTwist {
    pub conv: RConventions,
    pub tau: TauDirection,
    pub range: EpsilonRange,
}

/// Middle-leg Cartan factor in the three-leg shifted `R̂_13`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiddleLeg {
    /// `K₂₃⁻¹ R̂₁₃ K₂₃`: `q^{h_α}` on leg 2.
    ConjugatedBy23,
    /// `K₁₂⁻¹ R̂₁₃ K₁₂`: `q^{−h_α}` on leg 2.
    ConjugatedBy12,
}

impl CgTwist {
    pub fn new(n: usize) -> Self {
        CgTwist { conv: RConventions::standard(n), tau: TauDirection::Down, range: EpsilonRange::Full }
    }

    pub fn n(&self) -> usize {
        self.conv.table.n
    }

    fn factor(&self, e: &Mat<ExactScalar>, f: &Mat<ExactScalar>) -> Mat<ExactScalar> {
        qexp(&e.kron(f).scale(&q_minus_qinv()), Base::QInv).expect("shifted root vectors are nilpotent")
    }

    /// `(τ^{k−m} ⊗ τ̃^m)(R̂)` on `V⊗W`.
    pub fn j_hat_split(&self, k: usize, m: usize, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
        assert!(m <= k);
        let n = self.n();
        let t = &self.conv.table;
        let mut out = Mat::identity(v.dim() * w.dim());
        for alpha in self.conv.ordered_roots() {
            let (Some(a), Some(b)) = (tau_root(n, self.tau, alpha, k - m), tau_tilde_root(n, alpha, m)) else {
                continue;
            };
            out = out.mul(&self.factor(&t.e(v, a.0, a.1), &t.f(w, b.0, b.1)));
        }
        out
    }

    /// `Ĵ^[k] = (τ^k ⊗ id)(R̂)` on `V⊗W`.
    pub fn j_hat(&self, k: usize, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
        self.j_hat_split(k, 0, v, w)
    }

    /// `S^[k] = q^{Σ_{i=1}^{n−k} ζ^(i)⊗ζ^(i+k)}` on `V⊗W`.
    pub fn s_factor(&self, k: usize, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
        let n = self.n();
        diag_pair(v, w, |a, b| {
            (1..=n.saturating_sub(k)).map(|i| a.zeta(i) * b.zeta(i + k)).sum()
        })
    }

    /// `W^[k] = q^{Σ ε^k_{ij} ζ^(i)⊗ζ^(j)}` on `V⊗W`.
    pub fn w_factor(&self, k: usize, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
        let n = self.n();
        diag_pair(v, w, |a, b| {
            let mut s = Rational64::from_integer(0);
            for i in 1..=n {
                for j in 1..=n {
                    let e = epsilon(n, self.range, k, i, j);
                    if e != 0 {
                        s += a.zeta(i) * b.zeta(j) * e;
                    }
                }
            }
            s
        })
    }

    /// `J^[k] = W^[k] Ĵ^[k]`.
    pub fn j_k(&self, k: usize, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
        self.w_factor(k, v, w).mul(&self.j_hat(k, v, w))
    }

    /// `J = J^[1] J^[2] ⋯ J^[n−1]`.
    pub fn build_j(&self, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
        let d = v.dim() * w.dim();
        let factors: Vec<_> = (1..self.n()).map(|k| self.j_k(k, v, w)).collect();
        Mat::product(d, factors.iter())
    }

    /// `J⁻¹`, assembled from the unipotent and diagonal inverses.
    pub fn build_j_inverse(&self, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
        let d = v.dim() * w.dim();
        let mut out = Mat::identity(d);
        for k in 1..self.n() {
            let jh = self.j_hat(k, v, w).unipotent_inverse().expect("Ĵ is unipotent");
            let wi = self.w_factor(k, v, w).diagonal_inverse().expect("W is invertible");
            out = jh.mul(&wi).mul(&out);
        }
        out
    }

    /// `J₂₁` on `V⊗W`.
    pub fn build_j21(&self, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
        flip_conjugate(&self.build_j(w, v), v.dim(), w.dim())
    }

    /// `R^J = J₂₁⁻¹ R J₁₂` on `V⊗W`.
    pub fn r_j(&self, v: &RepSpace, w: &RepSpace) -> Mat<ExactScalar> {
        let j21_inv = flip_conjugate(&self.build_j_inverse(w, v), v.dim(), w.dim());
        j21_inv.mul(&build_r(&self.conv, v, w)).mul(&self.build_j(v, w))
    }

    /// `(τ^k ⊗ id ⊗ τ̃^m)(K^{-1} R̂₁₃ K)` on `U⊗V⊗W`, with `K` on legs 2,3 or 1,2.
    pub fn j_hat_three(
        &self,
        k: usize,
        m: usize,
        middle: MiddleLeg,
        u: &RepSpace,
        v: &RepSpace,
        w: &RepSpace,
    ) -> Mat<ExactScalar> {
        let n = self.n();
        let t = &self.conv.table;
        let sign = match middle {
            MiddleLeg::ConjugatedBy23 => 1,
            MiddleLeg::ConjugatedBy12 => -1,
        };
        let mut out = Mat::identity(u.dim() * v.dim() * w.dim());
        for alpha in self.conv.ordered_roots() {
            let (Some(a), Some(b)) = (tau_root(n, self.tau, alpha, k), tau_tilde_root(n, alpha, m)) else {
                continue;
            };
            let h = v.diag_by_weight(|wt| {
                ExactScalar::q_pow(sign * (alpha.0..=alpha.1).map(|l| wt.h(l)).sum::<i64>(), 1)
            });
            let z = t.e(u, a.0, a.1).kron(&h).kron(&t.f(w, b.0, b.1)).scale(&q_minus_qinv());
            out = out.mul(&qexp(&z, Base::QInv).expect("nilpotent"));
        }
        out
    }
}

/// Diagonal `q^{Σ_j c_j ζ^(j)}` on `rep`.
pub fn q_cartan(rep: &RepSpace, c: &[Rational64]) -> Mat<ExactScalar> {
    rep.diag_by_weight(|w| ExactScalar::q_pow_ratio(c.iter().enumerate().map(|(j, x)| *x * w.zeta(j + 1)).sum()))
}

/// `h_(i)` as a Cartan vector in the `ζ` basis.
pub fn h_vector(n: usize, i: usize) -> Vec<Rational64> {
    h_in_zeta(n, i).into_iter().map(Rational64::from_integer).collect()
}

/// Residuals of `(τ⊗τ)Δ(e_i) = q^{ζ^(n−1)⊗ζ^(n)} Δ(τ e_i) q^{−ζ^(n−1)⊗ζ^(n)}` and
/// of the `τ̃` analogue on `f_i`, for each `i`, on `V⊗W`.
pub fn deltatau_residuals(v: &RepSpace, w: &RepSpace) -> Vec<(String, Mat<ExactScalar>)> {
    let n = v.rank();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let conj = |a: usize, b: usize, sign: i64| {
        let mut d = Vec::new();
        for x in v.weights() {
            for y in w.weights() {
                d.push(ExactScalar::q_pow_ratio(x.zeta(a) * y.zeta(b) * sign));
            }
        }
        Mat::diagonal(d)
    };
    let idv = v.identity();
    let idw = w.identity();
    for i in 1..=n {
        let h = h_vector(n, i);
        let lhs = if i == 1 {
            Mat::zeros(v.dim() * w.dim())
        } else {
            v.e(i - 1).kron(&q_cartan(w, &tau_cartan(&h, 1))).add(&idv.kron(w.e(i - 1)))
        };
        let rhs = if i == 1 {
            Mat::zeros(v.dim() * w.dim())
        } else {
            let delta = v.e(i - 1).kron(&w.q_h(i - 1, 1)).add(&idv.kron(w.e(i - 1)));
            conj(n - 1, n, 1).mul(&delta).mul(&conj(n - 1, n, -1))
        };
        out.push((format!("tau e_{i}"), lhs.sub(&rhs)));
        let lhs = if i == n {
            Mat::zeros(v.dim() * w.dim())
        } else {
            v.f(i + 1).kron(&idw).add(&q_cartan(v, &tau_tilde_cartan(&h, 1).iter().map(|x| -*x).collect::<Vec<_>>()).kron(w.f(i + 1)))
        };
        let rhs = if i == n {
            Mat::zeros(v.dim() * w.dim())
        } else {
            let delta = v.f(i + 1).kron(&idw).add(&v.q_h(i + 1, -1).kron(w.f(i + 1)));
            conj(1, 2, 1).mul(&delta).mul(&conj(1, 2, -1))
        };
        out.push((format!("tau~ f_{i}"), lhs.sub(&rhs)));
    }
    out
}

/// Numeric `(R^J − 1)/ħ` defect against `r_{τ,s}` on `fund⊗fund` at `q = e^{ħ/2}`.
pub fn classical_cg_defect(twist: &CgTwist, hbar: f64) -> Result<f64, crate::scalar::ScalarError> {
    let n = twist.n();
    let f = RepSpace::fundamental(n);
    let rj = twist.r_j(&f, &f);
    let nu = vec![1.0; n + 1];
    let p = crate::scalar::NumericPoint::from_nu((hbar / 2.0).exp(), &nu);
    let rn = rj.try_map(|x| p.eval(x))?;
    let one = Mat::<num_complex::Complex64>::identity(rn.dim());
    let lin = rn.sub(&one).scale(&num_complex::Complex64::new(1.0 / hbar, 0.0));
    Ok(lin.sub(&crate::rmatrix::classical_cg_r(n)).max_abs())
}

/// `η(i,j,k)`: `1` if `i ≤ k < j`, `−1` if `j ≤ k < i`, else `0`.
pub fn eta(i: usize, j: usize, k: usize) -> i64 {
    if i <= k && k < j {
        1
    } else if j <= k && k < i {
        -1
    } else {
        0
    }
}

/// `D = Σ_i q^{(i²−3i)/(2(n+1))} E_ii`.
pub fn gauge_d(n: usize) -> Mat<ExactScalar> {
    let r = 2 * (n as i64 + 1);
    Mat::diagonal((1..=n as i64 + 1).map(|i| ExactScalar::q_pow(i * i - 3 * i, r)).collect())
}

/// Closed form of `R^J` on `fund⊗fund`: `(D⊗D) R̃ (D⊗D)⁻¹`.
pub fn fundamental_rj_closed(n: usize) -> Mat<ExactScalar> {
    let dd = gauge_d(n).kron(&gauge_d(n));
    dd.mul(&fundamental_rj_ungauged(n)).mul(&dd.diagonal_inverse().expect("D invertible"))
}

/// The matrix `R̃` of the closed form, before conjugation by `D⊗D`.
pub fn fundamental_rj_ungauged(n: usize) -> Mat<ExactScalar> {
    let d = n + 1;
    let den = d as i64;
    let qq = q_minus_qinv();
    let mut e = Vec::new();
    for r in 1..=d {
        for s in 1..=d {
            let idx = (r - 1) * d + (s - 1);
            e.push((idx, idx, ExactScalar::q_pow(2 * (r as i64 - s as i64) + den, den)));
        }
    }
    for i in 1..=d {
        for j in 1..=d {
            for k in 1..=d {
                let et = eta(i, j, k);
                if et == 0 || j + i <= k || j + i - k > d {
                    continue;
                }
                let col1 = j + i - k;
                let row = (i - 1) * d + (j - 1);
                let col = (col1 - 1) * d + (k - 1);
                let c = ExactScalar::q_pow(2 * (i as i64 - k as i64), den).mul(&qq).scale((et as i128).into());
                e.push((row, col, c));
            }
        }
    }
    Mat::from_entries(d * d, e).scale(&ExactScalar::q_pow(-1, den))
}

/// Diagonal operator on `V⊗W` with entry `q^{g(λ, μ)}`.
fn diag_pair<F>(v: &RepSpace, w: &RepSpace, g: F) -> Mat<ExactScalar>
where
    F: Fn(&crate::repspace::Weight, &crate::repspace::Weight) -> Rational64,
{
    let mut d = Vec::with_capacity(v.dim() * w.dim());
    for a in v.weights() {
        for b in w.weights() {
            d.push(ExactScalar::q_pow_ratio(g(a, b)));
        }
    }
    Mat::diagonal(d)
}

/// Places an operator on legs `positions` of `V_1⊗⋯⊗V_p`.
pub fn on_legs(op: &Mat<ExactScalar>, positions: &[usize], dims: &[usize]) -> Mat<ExactScalar> {
    let sub: Vec<usize> = positions.iter().map(|&p| dims[p]).collect();
    embed_mat(op, &sub, positions, dims).expect("leg positions fit")
}

/// `Ř = R·P` on `V⊗V`.
pub fn r_check(r: &Mat<ExactScalar>, d: usize) -> Mat<ExactScalar> {
    r.mul(&flip::<ExactScalar>(d, d))
}

/// Scalar `s` with `(Ř − q s)(Ř + q⁻¹ s) = 0`, read off the highest-weight
/// vector and then verified.
pub fn hecke_scalar(rc: &Mat<ExactScalar>) -> Result<ExactScalar, TwistError> {
    let s = rc.get_or_zero(0, 0).mul(&ExactScalar::q_pow(-1, 1));
    let d = rc.dim();
    let a = rc.sub(&Mat::identity(d).scale(&s.mul(&ExactScalar::q_pow(1, 1))));
    let b = rc.add(&Mat::identity(d).scale(&s.mul(&ExactScalar::q_pow(-1, 1))));
    if a.mul(&b).is_zero() {
        Ok(s)
    } else {
        Err(TwistError::HeckeViolation { s: s.to_string() })
    }
}

/// Antisymmetrizers `A^(1), …, A^(kmax)` on `V^{⊗k}` from a Hecke `Ř`
/// normalized to eigenvalues `q`, `−q⁻¹`:
/// `A^(k+1) = [k+1]⁻¹ A^(k) (q^k − [k] Ř_{k,k+1}) A^(k)`.
pub fn antisymmetrizers(rc_normalized: &Mat<ExactScalar>, d: usize, kmax: usize) -> Vec<Mat<ExactScalar>> {
    let mut out = vec![Mat::identity(d)];
    for k in 1..kmax {
        let dims = vec![d; k + 1];
        let prev = out[k - 1].kron(&Mat::identity(d));
        let rk = on_legs(rc_normalized, &[k - 1, k], &dims);
        let qk = ExactScalar::q_pow(k as i64, 1);
        let bracket = qnum(k as i64, Base::Q, QNumKind::Symmetric);
        let mid = Mat::identity(prev.dim()).scale(&qk).sub(&rk.scale(&bracket));
        let c = qnum(k as i64 + 1, Base::Q, QNumKind::Symmetric).inv().expect("nonzero");
        out.push(prev.mul(&mid).mul(&prev).scale(&c));
    }
    out
}

/// `det_q(U) = tr(A^(n+1) (U_1 Ř_12 Ř_23 ⋯ Ř_{n,n+1})^{n+1})` for a matrix `U`
/// with scalar entries.
pub fn det_q(u: &Mat<ExactScalar>, rc: &Mat<ExactScalar>, antisym_top: &Mat<ExactScalar>) -> ExactScalar {
    let d = u.dim();
    let p = d;
    let dims = vec![d; p];
    let mut word = on_legs(u, &[0], &dims);
    for i in 0..p - 1 {
        word = word.mul(&on_legs(rc, &[i, i + 1], &dims));
    }
    antisym_top.mul(&word.pow(p as u32)).trace()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_moves_roots_down() {
        assert_eq!(tau_root(2, TauDirection::Down, (1, 2), 1), None);
        assert_eq!(tau_root(3, TauDirection::Down, (2, 3), 1), Some((1, 2)));
        assert_eq!(tau_tilde_root(3, (1, 2), 1), Some((2, 3)));
        assert_eq!(tau_tilde_root(3, (2, 3), 1), None);
    }

    #[test]
    fn tau_on_cartan_shifts_index() {
        let r = |x| Rational64::from_integer(x);
        assert_eq!(tau_cartan(&[r(1), r(2), r(3)], 1), vec![r(2), r(3), r(0)]);
        assert_eq!(tau_tilde_cartan(&[r(1), r(2), r(3)], 1), vec![r(0), r(1), r(2)]);
    }

    #[test]
    fn restricted_table_misses_top_index() {
        assert_eq!(epsilon(2, EpsilonRange::Full, 1, 1, 2), 1);
        assert_eq!(epsilon(2, EpsilonRange::Restricted, 1, 1, 2), 0);
    }

    #[test]
    fn sl2_has_trivial_twist() {
        let f = RepSpace::fundamental(1);
        let t = CgTwist::new(1);
        assert_eq!(t.build_j(&f, &f), Mat::identity(4));
    }
}
