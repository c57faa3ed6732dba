use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, EXP_DEN, NVARS};

pub type Coef = Ratio<i128>;

/// Sparse Laurent polynomial with rational coefficients; terms sorted by
/// descending monomial, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: Vec<(Monomial, Coef)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::term(Monomial::ONE, Coef::one())
    }

    pub fn constant(c: Coef) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: Coef) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coef)>>(it: I) -> Self {
        let mut acc: HashMap<Monomial, Coef> = HashMap::new();
        for (m, c) in it {
            *acc.entry(m).or_insert_with(Coef::zero) += c;
        }
        Self::from_hash(acc)
    }

    fn from_hash(acc: HashMap<Monomial, Coef>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Coef)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The single term, if this is a monomial times a coefficient.
    pub fn as_term(&self) -> Option<(Monomial, Coef)> {
        if self.terms.len() == 1 {
            Some(self.terms[0])
        } else {
            None
        }
    }

    pub fn lead(&self) -> Option<&(Monomial, Coef)> {
        self.terms.first()
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -*c)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1 + b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = o.as_term() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_term() {
            return o.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Coef> = HashMap::with_capacity(self.len() * o.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                *acc.entry(*ma * *mb).or_insert_with(Coef::zero) += *ca * *cb;
            }
        }
        Self::from_hash(acc)
    }

    /// Multiplication by a single term; preserves order since the monomial
    /// order is a group order.
    pub fn mul_term(&self, m: Monomial, c: Coef) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(mm, cc)| (*mm * m, *cc * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Componentwise exponent minima and maxima over the support.
    pub fn exponent_box(&self) -> ([i64; NVARS], [i64; NVARS]) {
        let mut lo = [i64::MAX; NVARS];
        let mut hi = [i64::MIN; NVARS];
        for (m, _) in &self.terms {
            for (s, &u) in m.units().iter().enumerate() {
                lo[s] = lo[s].min(u);
                hi[s] = hi[s].max(u);
            }
        }
        (lo, hi)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((m, c)) = d.as_term() {
            return Some(self.mul_term(m.inv(), c.recip()));
        }
        if self.len() < d.len() {
            return None;
        }
        let (nlo, nhi) = self.exponent_box();
        let (dlo, dhi) = d.exponent_box();
        let mut qlo = [0; NVARS];
        let mut qhi = [0; NVARS];
        for s in 0..NVARS {
            qlo[s] = nlo[s] - dlo[s];
            qhi[s] = nhi[s] - dhi[s];
            if qlo[s] > qhi[s] {
                return None;
            }
        }
        let (dm, dc) = d.terms[0];
        let mut rem: BTreeMap<Monomial, Coef> = self.terms.iter().copied().collect();
        let mut quot = Vec::new();
        while let Some((&lm, &lc)) = rem.iter().next_back() {
            let qm = lm / dm;
            let u = qm.units();
            if (0..NVARS).any(|s| u[s] < qlo[s] || u[s] > qhi[s]) {
                return None;
            }
            let qc = lc / dc;
            quot.push((qm, qc));
            for (tm, tc) in &d.terms {
                let key = *tm * qm;
                let e = rem.entry(key).or_insert_with(Coef::zero);
                *e -= qc * *tc;
                if e.is_zero() {
                    rem.remove(&key);
                }
            }
        }
        Some(Poly { terms: quot })
    }

    /// Splits off the monomial content and leading coefficient:
    /// `self = m · c · p` with `p` having componentwise-minimal exponents 0
    /// and leading coefficient 1.
    pub fn normalize(&self) -> (Monomial, Coef, Poly) {
        assert!(!self.is_zero(), "cannot normalize zero");
        let mut content = self.terms[0].0;
        for (m, _) in &self.terms[1..] {
            content = content.meet(*m);
        }
        let c = self.terms[0].1;
        let p = self.mul_term(content.inv(), c.recip());
        (content, c, p)
    }

    /// Applies a monomial group homomorphism termwise.
    pub fn map_monomials<F: Fn(Monomial) -> Monomial>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(*m), *c)))
    }

    /// Evaluates at a point given by the principal logarithms of the
    /// variables `(q, ν̃_1, …)`.
    pub fn eval_logs(&self, logs: &[Complex64; NVARS]) -> (Complex64, f64) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (m, c) in &self.terms {
            let mut l = Complex64::new(0.0, 0.0);
            for (s, &u) in m.units().iter().enumerate() {
                if u != 0 {
                    l += logs[s] * (u as f64 / EXP_DEN as f64);
                }
            }
            let t = l.exp() * (*c.numer() as f64 / *c.denom() as f64);
            scale += t.norm();
            sum += t;
        }
        (sum, scale)
    }
}

pub fn write_coef(f: &mut fmt::Formatter<'_>, c: &Coef) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if m.is_one() {
                write_coef(f, &a)?;
            } else {
                write_coef(f, &a)?;
                write!(f, " * {m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: i128) -> Coef {
        Coef::from_integer(x)
    }

    fn q(p: i64) -> Monomial {
        Monomial::q(p, 1)
    }

    #[test]
    fn exact_division_recovers_factor() {
        let a = Poly::from_terms([(Monomial::ONE, c(1)), (q(1), c(1))]);
        let b = Poly::from_terms([(Monomial::ONE, c(1)), (q(1), c(-1))]);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(prod.exact_div(&a), Some(b));
        let three = Poly::from_terms([(Monomial::ONE, c(1)), (q(1), c(3))]);
        assert_eq!(prod.exact_div(&three), None);
    }

    #[test]
    fn non_divisible_laurent_terminates() {
        let n = Poly::from_terms([(q(3), c(1)), (Monomial::ONE, c(1))]);
        let d = Poly::from_terms([(q(1), c(1)), (Monomial::ONE, c(-2))]);
        assert_eq!(n.exact_div(&d), None);
    }

    #[test]
    fn normalize_strips_content() {
        let p = Poly::from_terms([(q(-1), c(3)), (q(1), c(-3))]);
        let (m, k, r) = p.normalize();
        assert_eq!(m, q(-1));
        assert_eq!(k, c(-3));
        assert_eq!(r, Poly::from_terms([(q(2), c(1)), (Monomial::ONE, c(-1))]));
    }
}
