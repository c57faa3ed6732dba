//! Sparse square matrices over exact or numeric scalars.

use std::fmt::Debug;

use num_complex::Complex64;

use crate::scalar::ExactScalar;

/// Scalar ring used as matrix entries.
pub trait Coeff: Clone + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(k: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn sum(items: &[Self]) -> Self {
        items.iter().fold(Self::zero(), |a, b| a.add(b))
    }
    /// Size used for numeric residuals; exact values report 0 or 1.
    fn magnitude(&self) -> f64;
}

impl Coeff for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn from_i64(k: i64) -> Self {
        ExactScalar::from_int(k)
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        ExactScalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ExactScalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ExactScalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        ExactScalar::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        ExactScalar::inv(self).ok()
    }
    fn sum(items: &[Self]) -> Self {
        ExactScalar::sum(items.iter())
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Sparse square matrix: rows of `(column, value)` sorted by column with no
/// stored zeros.
#[derive(Clone, Debug)]
pub struct Mat<T> {
    dim: usize,
    rows: Vec<Vec<(usize, T)>>,
}

impl<T: Coeff> Mat<T> {
    pub fn zeros(dim: usize) -> Self {
        Mat { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal((0..dim).map(|_| T::one()).collect())
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let dim = d.len();
        let rows = d
            .into_iter()
            .enumerate()
            .map(|(i, v)| if v.is_zero() { Vec::new() } else { vec![(i, v)] })
            .collect();
        Mat { dim, rows }
    }

    /// Builds from triplets; repeated positions are summed.
    pub fn from_entries<I: IntoIterator<Item = (usize, usize, T)>>(dim: usize, it: I) -> Self {
        let mut acc: Vec<Vec<(usize, Vec<T>)>> = vec![Vec::new(); dim];
        for (r, c, v) in it {
            assert!(r < dim && c < dim, "entry ({r},{c}) outside dimension {dim}");
            let row = &mut acc[r];
            match row.iter_mut().find(|(cc, _)| *cc == c) {
                Some((_, vs)) => vs.push(v),
                None => row.push((c, vec![v])),
            }
        }
        let rows = acc
            .into_iter()
            .map(|row| {
                let mut out: Vec<(usize, T)> = row
                    .into_iter()
                    .map(|(c, vs)| (c, T::sum(&vs)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                out.sort_by_key(|(c, _)| *c);
                out
            })
            .collect();
        Mat { dim, rows }
    }

    /// Matrix unit `E_{r,c}` scaled by `v`.
    pub fn unit(dim: usize, r: usize, c: usize, v: T) -> Self {
        Self::from_entries(dim, [(r, c, v)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[(usize, T)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&T> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |(cc, _)| *cc).ok().map(|k| &row[k].1)
    }

    pub fn get_or_zero(&self, r: usize, c: usize) -> T {
        self.get(r, c).cloned().unwrap_or_else(T::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c.to_owned(), v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }

    pub fn map<U: Coeff, F: Fn(&T) -> U>(&self, f: F) -> Mat<U> {
        Mat::from_entries(self.dim, self.entries().map(|(r, c, v)| (r, c, f(v))))
    }

    pub fn try_map<U: Coeff, E, F: Fn(&T) -> Result<U, E>>(&self, f: F) -> Result<Mat<U>, E> {
        let mut out = Vec::with_capacity(self.nnz());
        for (r, c, v) in self.entries() {
            out.push((r, c, f(v)?));
        }
        Ok(Mat::from_entries(self.dim, out))
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.dim, self.entries().map(|(r, c, v)| (c, r, v.clone())))
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::zeros(self.dim);
        }
        Self::from_entries(self.dim, self.entries().map(|(r, c, v)| (r, c, v.mul(s))))
    }

    pub fn neg(&self) -> Self {
        Mat { dim: self.dim, rows: self.rows.iter().map(|row| row.iter().map(|(c, v)| (*c, v.neg())).collect()).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .zip(o.rows.iter())
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                        out.push(a[i].clone());
                        i += 1;
                    } else if i == a.len() || b[j].0 < a[i].0 {
                        out.push(b[j].clone());
                        j += 1;
                    } else {
                        let v = a[i].1.add(&b[j].1);
                        if !v.is_zero() {
                            out.push((a[i].0, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                out
            })
            .collect();
        Mat { dim: self.dim, rows }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let rows = self.rows.iter().map(|row| mul_row(row, o)).collect();
        Mat { dim: self.dim, rows }
    }

    /// Product of a sequence of matrices, left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a Mat<T>>>(dim: usize, it: I) -> Self {
        let mut out: Option<Mat<T>> = None;
        for m in it {
            out = Some(match out {
                None => m.clone(),
                Some(acc) => acc.mul(m),
            });
        }
        out.unwrap_or_else(|| Self::identity(dim))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Kronecker product with row-major basis order.
    pub fn kron(&self, o: &Self) -> Self {
        let d = o.dim;
        let mut entries = Vec::with_capacity(self.nnz() * o.nnz());
        for (r1, c1, v1) in self.entries() {
            for (r2, c2, v2) in o.entries() {
                entries.push((r1 * d + r2, c1 * d + c2, v1.mul(v2)));
            }
        }
        Self::from_entries(self.dim * d, entries)
    }

    pub fn diag_entries(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get_or_zero(i, i)).collect()
    }

    pub fn trace(&self) -> T {
        T::sum(&self.diag_entries())
    }

    /// Smallest `k` with `self^k = 0`, if reached within `dim + 1` steps.
    pub fn nilpotency_index(&self) -> Option<u32> {
        let mut p = Self::identity(self.dim);
        for k in 0..=self.dim as u32 + 1 {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Inverse of a diagonal matrix.
    pub fn diagonal_inverse(&self) -> Option<Self> {
        if !self.is_diagonal() {
            return None;
        }
        let mut d = Vec::with_capacity(self.dim);
        for v in self.diag_entries() {
            d.push(v.inv()?);
        }
        Some(Self::diagonal(d))
    }

    /// Inverse of `1 + N` with `N` nilpotent, via the terminating series.
    pub fn unipotent_inverse(&self) -> Option<Self> {
        let n = self.sub(&Self::identity(self.dim));
        let neg = n.neg();
        let mut term = Self::identity(self.dim);
        let mut out = Self::identity(self.dim);
        for _ in 0..=self.dim {
            term = term.mul(&neg);
            if term.is_zero() {
                return Some(out);
            }
            out = out.add(&term);
        }
        None
    }

    /// General inverse by Gauss–Jordan elimination; diagonal and unipotent
    /// inputs take the cheap routes.
    pub fn inverse(&self) -> Option<Self> {
        if let Some(d) = self.diagonal_inverse() {
            return Some(d);
        }
        if let Some(u) = self.unipotent_inverse() {
            return Some(u);
        }
        let n = self.dim;
        let mut a: Vec<Vec<T>> = (0..n).map(|r| (0..n).map(|c| self.get_or_zero(r, c)).collect()).collect();
        let mut b: Vec<Vec<T>> = (0..n).map(|r| (0..n).map(|c| if r == c { T::one() } else { T::zero() }).collect()).collect();
        for col in 0..n {
            let piv = (col..n)
                .filter(|&r| !a[r][col].is_zero())
                .max_by(|&x, &y| a[x][col].magnitude().partial_cmp(&a[y][col].magnitude()).unwrap())?;
            a.swap(col, piv);
            b.swap(col, piv);
            let pinv = a[col][col].inv()?;
            for c in 0..n {
                a[col][c] = a[col][c].mul(&pinv);
                b[col][c] = b[col][c].mul(&pinv);
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    if !a[col][c].is_zero() {
                        a[r][c] = a[r][c].sub(&f.mul(&a[col][c]));
                    }
                    if !b[col][c].is_zero() {
                        b[r][c] = b[r][c].sub(&f.mul(&b[col][c]));
                    }
                }
            }
        }
        Some(Self::from_entries(
            n,
            b.into_iter()
                .enumerate()
                .flat_map(|(r, row)| row.into_iter().enumerate().map(move |(c, v)| (r, c, v))),
        ))
    }

    /// First entry where `self` and `o` differ.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize, T)> {
        let d = self.sub(o);
        let first = d.entries().next().map(|(r, c, v)| (r, c, v.clone()));
        first
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.magnitude()).fold(0.0, f64::max)
    }
}

fn mul_row<T: Coeff>(row: &[(usize, T)], o: &Mat<T>) -> Vec<(usize, T)> {
    if row.is_empty() {
        return Vec::new();
    }
    if row.len() == 1 {
        let (k, a) = &row[0];
        return o.rows[*k]
            .iter()
            .map(|(c, b)| (*c, a.mul(b)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
    }
    let mut acc: Vec<Vec<T>> = vec![Vec::new(); o.dim];
    let mut touched = Vec::new();
    for (k, a) in row {
        for (c, b) in &o.rows[*k] {
            if acc[*c].is_empty() {
                touched.push(*c);
            }
            acc[*c].push(a.mul(b));
        }
    }
    touched.sort_unstable();
    touched
        .into_iter()
        .filter_map(|c| {
            let v = T::sum(&acc[c]);
            if v.is_zero() {
                None
            } else {
                Some((c, v))
            }
        })
        .collect()
}

impl<T: Coeff + PartialEq> PartialEq for Mat<T> {
    fn eq(&self, o: &Self) -> bool {
        self.dim == o.dim && self.sub(o).is_zero()
    }
}

/// Permutation matrix of the flip `V⊗W → W⊗V`, `v⊗w ↦ w⊗v`.
pub fn flip<T: Coeff>(dv: usize, dw: usize) -> Mat<T> {
    let mut e = Vec::with_capacity(dv * dw);
    for a in 0..dv {
        for b in 0..dw {
            e.push((b * dv + a, a * dw + b, T::one()));
        }
    }
    Mat::from_entries(dv * dw, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat<ExactScalar> {
        let d = rows.len();
        Mat::from_entries(
            d,
            rows.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, ExactScalar::from_int(v)))),
        )
    }

    #[test]
    fn product_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
    }

    #[test]
    fn unipotent_series() {
        let a = m(&[&[1, 3, 0], &[0, 1, 5], &[0, 0, 1]]);
        let inv = a.unipotent_inverse().unwrap();
        assert_eq!(inv.mul(&a), Mat::identity(3));
    }

    #[test]
    fn kron_mixed_product() {
        let a = m(&[&[0, 1], &[0, 0]]);
        let b = m(&[&[1, 2], &[3, 4]]);
        let lhs = a.kron(&b).mul(&b.kron(&a));
        let rhs = a.mul(&b).kron(&b.mul(&a));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn flip_swaps_factors() {
        let a = m(&[&[0, 1], &[0, 0]]);
        let b = m(&[&[1, 0], &[3, 4]]);
        let p: Mat<ExactScalar> = flip(2, 2);
        assert_eq!(p.mul(&a.kron(&b)).mul(&p), b.kron(&a));
    }
}
