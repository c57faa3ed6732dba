//! PBW root vectors, q-exponentials of nilpotent operators and quantum Weyl
//! group elements.

use thiserror::Error;

use crate::linalg::Mat;
use crate::repspace::RepSpace;
use crate::scalar::{qfactorial, Base, ExactScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("operator is not nilpotent within the dimension bound")]
    NotNilpotent,
    #[error("root vector ({i},{j}) fails the fundamental-representation oracle")]
    OracleMismatch { i: usize, j: usize },
}

/// Bracket convention of the inductive root-vector recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KtConvention {
    /// `e_(i,j) = e_(i,j−1)e_(j) − q⁻¹e_(j)e_(i,j−1)`,
    /// `f_(i,j) = f_(j)f_(i,j−1) − q f_(i,j−1)f_(j)`.
    #[default]
    Standard,
    /// Same brackets with `q ↔ q⁻¹`.
    Swapped,
}

/// Positive roots `α_(ij) = α_i + ⋯ + α_j` in the normal order
/// `α_1 < α_1+α_2 < α_2 < α_1+α_2+α_3 < ⋯ < α_n`.
pub fn root_order(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for j in 1..=n {
        for i in 1..=j {
            out.push((i, j));
        }
    }
    out
}

/// Symbolic table of root vectors: each `(i, j)` is a nested bracket word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootVectorTable {
    pub n: usize,
    pub order: Vec<(usize, usize)>,
    pub convention: KtConvention,
}

impl RootVectorTable {
    pub fn new(n: usize, convention: KtConvention) -> Result<Self, RootError> {
        let t = RootVectorTable { n, order: root_order(n), convention };
        let fund = RepSpace::fundamental(n);
        for &(i, j) in &t.order {
            let e = t.e(&fund, i, j);
            let f = t.f(&fund, i, j);
            let d = n + 1;
            if e != Mat::unit(d, i - 1, j, ExactScalar::one()) || f != Mat::unit(d, j, i - 1, ExactScalar::one()) {
                return Err(RootError::OracleMismatch { i, j });
            }
        }
        Ok(t)
    }

    fn coefs(&self) -> (ExactScalar, ExactScalar) {
        match self.convention {
            KtConvention::Standard => (ExactScalar::q_pow(-1, 1), ExactScalar::q_pow(1, 1)),
            KtConvention::Swapped => (ExactScalar::q_pow(1, 1), ExactScalar::q_pow(-1, 1)),
        }
    }

    /// `e_(i,j)` evaluated in `rep`.
    pub fn e(&self, rep: &RepSpace, i: usize, j: usize) -> Mat<ExactScalar> {
        assert!(1 <= i && i <= j && j <= self.n);
        if i == j {
            return rep.e(i).clone();
        }
        let prev = self.e(rep, i, j - 1);
        let (ce, _) = self.coefs();
        prev.mul(rep.e(j)).sub(&rep.e(j).mul(&prev).scale(&ce))
    }

    /// `f_(i,j)` evaluated in `rep`.
    pub fn f(&self, rep: &RepSpace, i: usize, j: usize) -> Mat<ExactScalar> {
        assert!(1 <= i && i <= j && j <= self.n);
        if i == j {
            return rep.f(i).clone();
        }
        let prev = self.f(rep, i, j - 1);
        let (_, cf) = self.coefs();
        rep.f(j).mul(&prev).sub(&prev.mul(rep.f(j)).scale(&cf))
    }
}

/// `e_b^z = Σ_m z^m/(m)_b!` for nilpotent `z`.
pub fn qexp(z: &Mat<ExactScalar>, base: Base) -> Result<Mat<ExactScalar>, RootError> {
    let d = z.dim();
    let mut out = Mat::identity(d);
    let mut power = Mat::identity(d);
    for m in 1..=d as u32 + 1 {
        power = power.mul(z);
        if power.is_zero() {
            return Ok(out);
        }
        let c = qfactorial(m, base).inv().expect("q-factorial is nonzero");
        out = out.add(&power.scale(&c));
    }
    Err(RootError::NotNilpotent)
}

/// Diagonal `q^{c·h_i²}` with rational `c`.
fn q_h_squared(rep: &RepSpace, i: usize, num: i64, den: i64) -> Mat<ExactScalar> {
    rep.diag_by_weight(|w| ExactScalar::q_pow(num * w.h(i) * w.h(i), den))
}

/// `ŵ_i = e_{q⁻¹}^{f} q^{−h²/4} e_{q⁻¹}^{−e} q^{−h²/4} e_{q⁻¹}^{f} q^{−h/2}`.
pub fn weyl_simple(rep: &RepSpace, i: usize) -> Mat<ExactScalar> {
    let ef = qexp(rep.f(i), Base::QInv).expect("f is nilpotent");
    let ee = qexp(&rep.e(i).neg(), Base::QInv).expect("e is nilpotent");
    let h2 = q_h_squared(rep, i, -1, 4);
    let hh = rep.diag_by_weight(|w| ExactScalar::q_pow(-w.h(i), 2));
    Mat::product(rep.dim(), [&ef, &h2, &ee, &h2, &ef, &hh])
}

/// Second expression `e_{q⁻¹}^{−e} q^{−h²/4} e_{q⁻¹}^{f} q^{−h²/4} e_{q⁻¹}^{−e} q^{−h/2}`.
pub fn weyl_simple_alt(rep: &RepSpace, i: usize) -> Mat<ExactScalar> {
    let ef = qexp(rep.f(i), Base::QInv).expect("f is nilpotent");
    let ee = qexp(&rep.e(i).neg(), Base::QInv).expect("e is nilpotent");
    let h2 = q_h_squared(rep, i, -1, 4);
    let hh = rep.diag_by_weight(|w| ExactScalar::q_pow(-w.h(i), 2));
    Mat::product(rep.dim(), [&ee, &h2, &ef, &h2, &ee, &hh])
}

/// `ŵ_w` for a word of simple reflections (1-based indices).
pub fn weyl_word(rep: &RepSpace, word: &[usize]) -> Mat<ExactScalar> {
    let mats: Vec<_> = word.iter().map(|&i| weyl_simple(rep, i)).collect();
    Mat::product(rep.dim(), mats.iter())
}

/// Reduced word of the longest element `w_1(w_2w_1)⋯(w_n⋯w_1)`.
pub fn longest_word(n: usize) -> Vec<usize> {
    let mut w = Vec::new();
    for k in 1..=n {
        for i in (1..=k).rev() {
            w.push(i);
        }
    }
    w
}

/// Reduced word of the Coxeter element `w_1 w_2 ⋯ w_n`.
pub fn coxeter_word(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

/// `ξ`-part of `ŵ_i²`: the operator `ŵ_i² q^{−h_i²/2} v_i⁻¹`, where `v_i` is
/// the ribbon element of the `i`-th `sl(2)` triple acting on each weight
/// string. On irreducible strings of length `k` this is `(−1)^{k−1}`.
pub fn weyl_square_defect(rep: &RepSpace, i: usize) -> Mat<ExactScalar> {
    let w = weyl_simple(rep, i);
    let w2 = w.mul(&w);
    w2.mul(&q_h_squared(rep, i, -1, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_oracle_passes() {
        for n in 1..=3 {
            assert!(RootVectorTable::new(n, KtConvention::Standard).is_ok());
            assert!(RootVectorTable::new(n, KtConvention::Swapped).is_ok());
        }
    }

    #[test]
    fn order_lists_all_roots() {
        assert_eq!(root_order(3), vec![(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (3, 3)]);
    }

    #[test]
    fn qexp_of_square_zero() {
        let f = RepSpace::fundamental(1);
        let z = f.e(1);
        assert_eq!(qexp(z, Base::Q).unwrap(), f.identity().add(z));
    }

    #[test]
    fn weyl_expressions_agree() {
        for (n, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let v = RepSpace::fund_power(n, k);
            for i in 1..=n {
                assert_eq!(weyl_simple(&v, i), weyl_simple_alt(&v, i));
            }
        }
    }
}
