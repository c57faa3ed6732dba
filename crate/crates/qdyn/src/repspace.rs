//! Weight-graded representations of `U_q(sl(n+1))` built as tensor products
//! of elementary modules, and operators addressed by tensor legs.

use std::sync::Arc;

use num_rational::Rational64;
use thiserror::Error;

use crate::linalg::{Coeff, Mat};
use crate::scalar::{qnum, Base, ExactScalar, Monomial, QNumKind};

/// Largest `n + 1` for which weights can be stored.
pub const MAX_SLOTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("leg positions {positions:?} do not fit {arity} ambient legs")]
    ArityMismatch { positions: Vec<usize>, arity: usize },
    #[error("representations over different ranks")]
    RankMismatch,
}

/// Weight of `sl(n+1)` as an occupation vector `(m_1, …, m_{n+1})` modulo
/// the all-ones vector, normalized to minimal entry 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    n: usize,
    m: [i32; MAX_SLOTS],
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        assert!((1..MAX_SLOTS).contains(&n), "rank n={n} unsupported");
        Weight { n, m: [0; MAX_SLOTS] }
    }

    pub fn from_occupation(n: usize, occ: &[i32]) -> Self {
        assert_eq!(occ.len(), n + 1);
        let mut w = Self::zero(n);
        w.m[..=n].copy_from_slice(occ);
        w.normalized()
    }

    /// Weight `ε_i` of the `i`-th fundamental basis vector (1-based).
    pub fn epsilon(n: usize, i: usize) -> Self {
        let mut w = Self::zero(n);
        w.m[i - 1] = 1;
        w.normalized()
    }

    fn normalized(mut self) -> Self {
        let lo = *self.m[..=self.n].iter().min().unwrap();
        for x in self.m[..=self.n].iter_mut() {
            *x -= lo;
        }
        self
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn occupation(&self) -> &[i32] {
        &self.m[..=self.n]
    }

    fn total(&self) -> i64 {
        self.occupation().iter().map(|&x| x as i64).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut w = *self;
        for i in 0..=self.n {
            w.m[i] += o.m[i];
        }
        w.normalized()
    }

    pub fn neg(&self) -> Self {
        let mut w = *self;
        for i in 0..=self.n {
            w.m[i] = -w.m[i];
        }
        w.normalized()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `h_(j)(λ) = m_j − m_{j+1}` for `1 ≤ j ≤ n`.
    pub fn h(&self, j: usize) -> i64 {
        assert!((1..=self.n).contains(&j));
        (self.m[j - 1] - self.m[j]) as i64
    }

    /// `ζ^(j)(λ)`; zero for `j = 0` and `j = n + 1`.
    pub fn zeta(&self, j: usize) -> Rational64 {
        if j == 0 || j > self.n {
            return Rational64::from_integer(0);
        }
        let partial: i64 = self.m[..j].iter().map(|&x| x as i64).sum();
        Rational64::new(partial * (self.n as i64 + 1) - j as i64 * self.total(), self.n as i64 + 1)
    }

    /// Invariant form `(λ, μ)`.
    pub fn pair(&self, o: &Self) -> Rational64 {
        let dot: i64 = (0..=self.n).map(|i| self.m[i] as i64 * o.m[i] as i64).sum();
        Rational64::new(dot * (self.n as i64 + 1) - self.total() * o.total(), self.n as i64 + 1)
    }

    /// `(ρ, λ) = Σ_j ζ^(j)(λ)`, a height function for the dominance order.
    pub fn rho_pair(&self) -> Rational64 {
        (1..=self.n).map(|j| self.zeta(j)).sum()
    }

    /// Coefficients of `λ` in the simple roots when `λ` is in the root
    /// lattice: `ζ^(i)(λ)`.
    pub fn root_coordinates(&self) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(self.n);
        for j in 1..=self.n {
            let z = self.zeta(j);
            if !z.is_integer() {
                return None;
            }
            out.push(z.to_integer());
        }
        Some(out)
    }

    /// `λ ≥ μ` in the dominance order.
    pub fn dominates(&self, o: &Self) -> bool {
        match self.sub(o).root_coordinates() {
            Some(c) => c.iter().all(|&x| x >= 0),
            None => false,
        }
    }

    /// Weyl group action by a permutation of `1..=n+1` (0-based image list).
    pub fn permute(&self, w: &[usize]) -> Self {
        let mut out = Self::zero(self.n);
        for i in 0..=self.n {
            out.m[w[i]] = self.m[i];
        }
        out.normalized()
    }

    /// `∏ ν_k^{m_k}`, the `x`-part of the dynamical Cartan element.
    pub fn nu_power(&self) -> Monomial {
        let mut m = Monomial::ONE;
        for k in 1..=self.n + 1 {
            m = m * Monomial::nu(self.n, k, self.m[k - 1] as i64, 1);
        }
        m
    }
}

/// Irreducible building blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Elementary {
    Fundamental,
    /// Irreducible `sl(2)` module of the given dimension (`n = 1` only).
    Sl2Irrep(usize),
    Trivial,
}

/// Finite-dimensional representation given by generator matrices and the
/// weight of each basis vector. Tensor bases are row-major in factor order.
#[derive(Clone, Debug)]
pub struct RepSpace {
    n: usize,
    factors: Vec<Elementary>,
    weights: Vec<Weight>,
    e: Vec<Mat<ExactScalar>>,
    f: Vec<Mat<ExactScalar>>,
}

impl PartialEq for RepSpace {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.factors == o.factors
    }
}

impl RepSpace {
    pub fn fundamental(n: usize) -> Self {
        let d = n + 1;
        let weights = (1..=d).map(|i| Weight::epsilon(n, i)).collect();
        let e = (0..n).map(|i| Mat::unit(d, i, i + 1, ExactScalar::one())).collect();
        let f = (0..n).map(|i| Mat::unit(d, i + 1, i, ExactScalar::one())).collect();
        RepSpace { n, factors: vec![Elementary::Fundamental], weights, e, f }
    }

    /// Irreducible `sl(2)` module with basis `v_0..v_{d-1}` of weights
    /// `d−1, d−3, …`: `e v_k = [d−k] v_{k−1}`, `f v_k = [k+1] v_{k+1}`.
    pub fn sl2_irrep(dim: usize) -> Self {
        assert!(dim >= 1);
        let d = dim as i64;
        let weights = (0..dim)
            .map(|k| Weight::from_occupation(1, &[(dim - 1 - k) as i32, k as i32]))
            .collect();
        let e = Mat::from_entries(
            dim,
            (1..dim).map(|k| (k - 1, k, qnum(d - k as i64, Base::Q, QNumKind::Symmetric))),
        );
        let f = Mat::from_entries(
            dim,
            (0..dim - 1).map(|k| (k + 1, k, qnum(k as i64 + 1, Base::Q, QNumKind::Symmetric))),
        );
        RepSpace { n: 1, factors: vec![Elementary::Sl2Irrep(dim)], weights, e: vec![e], f: vec![f] }
    }

    pub fn trivial(n: usize) -> Self {
        RepSpace {
            n,
            factors: vec![Elementary::Trivial],
            weights: vec![Weight::zero(n)],
            e: vec![Mat::zeros(1); n],
            f: vec![Mat::zeros(1); n],
        }
    }

    /// `fund^{⊗k}`.
    pub fn fund_power(n: usize, k: usize) -> Self {
        let f = Self::fundamental(n);
        let mut out = f.clone();
        for _ in 1..k {
            out = out.tensor(&f);
        }
        out
    }

    /// Tensor product via the coproduct
    /// `Δe = e⊗q^{h} + 1⊗e`, `Δf = f⊗1 + q^{−h}⊗f`.
    pub fn tensor(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "representations over different ranks");
        let (d1, d2) = (self.dim(), o.dim());
        let id1 = Mat::identity(d1);
        let id2 = Mat::identity(d2);
        let mut e = Vec::with_capacity(self.n);
        let mut f = Vec::with_capacity(self.n);
        for i in 1..=self.n {
            e.push(self.e(i).kron(&o.q_h(i, 1)).add(&id1.kron(o.e(i))));
            f.push(self.f(i).kron(&id2).add(&self.q_h(i, -1).kron(o.f(i))));
        }
        let mut weights = Vec::with_capacity(d1 * d2);
        for a in &self.weights {
            for b in &o.weights {
                weights.push(a.add(b));
            }
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&o.factors);
        RepSpace { n: self.n, factors, weights, e, f }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn factors(&self) -> &[Elementary] {
        &self.factors
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Generator `e_(i)`, `1 ≤ i ≤ n`.
    pub fn e(&self, i: usize) -> &Mat<ExactScalar> {
        &self.e[i - 1]
    }

    pub fn f(&self, i: usize) -> &Mat<ExactScalar> {
        &self.f[i - 1]
    }

    pub fn identity(&self) -> Mat<ExactScalar> {
        Mat::identity(self.dim())
    }

    /// Diagonal operator with entry `g(λ)` on each basis vector of weight λ.
    pub fn diag_by_weight<F: Fn(&Weight) -> ExactScalar>(&self, g: F) -> Mat<ExactScalar> {
        Mat::diagonal(self.weights.iter().map(g).collect())
    }

    /// `q^{c·h_(i)}`.
    pub fn q_h(&self, i: usize, c: i64) -> Mat<ExactScalar> {
        self.diag_by_weight(|w| ExactScalar::q_pow(c * w.h(i), 1))
    }

    /// `q^{c·ζ^(i)}`.
    pub fn q_zeta(&self, i: usize, c: Rational64) -> Mat<ExactScalar> {
        self.diag_by_weight(|w| ExactScalar::q_pow_ratio(c * w.zeta(i)))
    }

    /// `h_(i)` as a diagonal integer matrix.
    pub fn h_mat(&self, i: usize) -> Mat<ExactScalar> {
        self.diag_by_weight(|w| ExactScalar::from_int(w.h(i)))
    }

    /// `μ = q^{2t_ρ}`.
    pub fn mu(&self) -> Mat<ExactScalar> {
        self.diag_by_weight(|w| ExactScalar::q_pow_ratio(w.rho_pair() * 2))
    }

    /// Partition of basis indices by weight, ordered by decreasing height.
    pub fn weight_blocks(&self) -> Vec<(Weight, Vec<usize>)> {
        let mut blocks: Vec<(Weight, Vec<usize>)> = Vec::new();
        for (i, w) in self.weights.iter().enumerate() {
            match blocks.iter_mut().find(|(b, _)| b == w) {
                Some((_, idx)) => idx.push(i),
                None => blocks.push((*w, vec![i])),
            }
        }
        blocks.sort_by(|a, b| b.0.rho_pair().cmp(&a.0.rho_pair()).then(a.1[0].cmp(&b.1[0])));
        blocks
    }

    /// Residuals of the defining relations: `[e_i, f_j] = δ_ij [h_i]`,
    /// `q^h e_j q^{−h} = q^{a_ij} e_j`, and the Serre relations.
    pub fn relation_residuals(&self) -> Vec<(String, Mat<ExactScalar>)> {
        let n = self.n;
        let q = ExactScalar::q_pow(1, 1);
        let qinv = ExactScalar::q_pow(-1, 1);
        let qq = q.sub(&qinv);
        let two = qnum(2, Base::Q, QNumKind::Symmetric);
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                let comm = self.e(i).mul(self.f(j)).sub(&self.f(j).mul(self.e(i)));
                let rhs = if i == j {
                    self.q_h(i, 1).sub(&self.q_h(i, -1)).scale(&qq.inv().unwrap())
                } else {
                    Mat::zeros(self.dim())
                };
                out.push((format!("[e{i},f{j}]"), comm.sub(&rhs)));
                let a = if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 };
                let conj = self.q_h(i, 1).mul(self.e(j)).mul(&self.q_h(i, -1));
                out.push((format!("q^h{i} e{j}"), conj.sub(&self.e(j).scale(&ExactScalar::q_pow(a, 1)))));
                let conj = self.q_h(i, 1).mul(self.f(j)).mul(&self.q_h(i, -1));
                out.push((format!("q^h{i} f{j}"), conj.sub(&self.f(j).scale(&ExactScalar::q_pow(-a, 1)))));
                if i.abs_diff(j) == 1 {
                    for (name, g) in [("e", &self.e), ("f", &self.f)] {
                        let (x, y) = (&g[i - 1], &g[j - 1]);
                        let serre = x
                            .mul(x)
                            .mul(y)
                            .sub(&x.mul(y).mul(x).scale(&two))
                            .add(&y.mul(x).mul(x));
                        out.push((format!("serre {name}{i}{j}"), serre));
                    }
                } else if i != j {
                    out.push((format!("[e{i},e{j}]"), self.e(i).mul(self.e(j)).sub(&self.e(j).mul(self.e(i)))));
                    out.push((format!("[f{i},f{j}]"), self.f(i).mul(self.f(j)).sub(&self.f(j).mul(self.f(i)))));
                }
            }
        }
        out
    }
}

/// Operator on a tensor product of representations.
#[derive(Clone, Debug)]
pub struct LegOperator<T> {
    pub legs: Vec<Arc<RepSpace>>,
    pub mat: Mat<T>,
}

impl<T: Coeff> LegOperator<T> {
    pub fn new(legs: Vec<Arc<RepSpace>>, mat: Mat<T>) -> Self {
        let d: usize = legs.iter().map(|l| l.dim()).product();
        assert_eq!(d, mat.dim(), "matrix does not match leg dimensions");
        LegOperator { legs, mat }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.legs.iter().map(|l| l.dim()).collect()
    }

    /// Places `self` on the given ambient legs, identity elsewhere.
    pub fn embed(&self, positions: &[usize], ambient: &[Arc<RepSpace>]) -> Result<LegOperator<T>, RepError> {
        if positions.len() != self.legs.len() {
            return Err(RepError::ArityMismatch { positions: positions.to_vec(), arity: ambient.len() });
        }
        for (p, leg) in positions.iter().zip(&self.legs) {
            if *p >= ambient.len() || ambient[*p].dim() != leg.dim() {
                return Err(RepError::ArityMismatch { positions: positions.to_vec(), arity: ambient.len() });
            }
        }
        let dims: Vec<usize> = ambient.iter().map(|l| l.dim()).collect();
        Ok(LegOperator { legs: ambient.to_vec(), mat: embed_mat(&self.mat, &self.dims(), positions, &dims)? })
    }
}

/// Tensor rep of a list of legs.
pub fn tensor_all(legs: &[Arc<RepSpace>]) -> RepSpace {
    let mut out = (*legs[0]).clone();
    for l in &legs[1..] {
        out = out.tensor(l);
    }
    out
}

fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

fn undigits(d: &[usize], dims: &[usize]) -> usize {
    d.iter().zip(dims).fold(0, |acc, (x, m)| acc * m + x)
}

/// Kronecker embedding of an operator on sub-legs `sub_dims` into the legs
/// `positions` of an ambient product with dimensions `dims`.
pub fn embed_mat<T: Coeff>(
    op: &Mat<T>,
    sub_dims: &[usize],
    positions: &[usize],
    dims: &[usize],
) -> Result<Mat<T>, RepError> {
    let distinct = {
        let mut p = positions.to_vec();
        p.sort_unstable();
        p.dedup();
        p.len() == positions.len()
    };
    if !distinct
        || positions.len() != sub_dims.len()
        || positions.iter().zip(sub_dims).any(|(&p, &d)| p >= dims.len() || dims[p] != d)
    {
        return Err(RepError::ArityMismatch { positions: positions.to_vec(), arity: dims.len() });
    }
    let total: usize = dims.iter().product();
    let mut entries = Vec::new();
    for r in 0..total {
        let rd = digits(r, dims);
        let sub_r: Vec<usize> = positions.iter().map(|&p| rd[p]).collect();
        let sr = undigits(&sub_r, sub_dims);
        for (sc, v) in op.row(sr) {
            let scd = digits(*sc, sub_dims);
            let mut cd = rd.clone();
            for (k, &p) in positions.iter().enumerate() {
                cd[p] = scd[k];
            }
            entries.push((r, undigits(&cd, dims), v.clone()));
        }
    }
    Ok(Mat::from_entries(total, entries))
}

/// Whether every entry connects basis vectors of equal weight.
pub fn is_zero_weight<T: Coeff>(rep: &RepSpace, op: &Mat<T>) -> bool {
    op.entries().all(|(r, c, _)| rep.weight(r) == rep.weight(c))
}

/// Whether `op` maps each weight space strictly into higher ones.
pub fn is_strictly_upper<T: Coeff>(rep: &RepSpace, op: &Mat<T>) -> bool {
    op.entries()
        .all(|(r, c, _)| rep.weight(r) != rep.weight(c) && rep.weight(r).dominates(rep.weight(c)))
}

/// Whether `op` maps each weight space into weakly higher ones.
pub fn is_weakly_upper<T: Coeff>(rep: &RepSpace, op: &Mat<T>) -> bool {
    op.entries().all(|(r, c, _)| rep.weight(r).dominates(rep.weight(c)))
}

pub fn is_strictly_lower<T: Coeff>(rep: &RepSpace, op: &Mat<T>) -> bool {
    op.entries()
        .all(|(r, c, _)| rep.weight(r) != rep.weight(c) && rep.weight(c).dominates(rep.weight(r)))
}
