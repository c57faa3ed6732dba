use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};

use super::monomial::{Monomial, VarId, EXP_DEN, NVARS};
use super::poly::{Coef, Poly};
use super::ScalarError;

/// Denominator factor: a normalized polynomial (no monomial content,
/// leading coefficient 1) with multiplicity.
type Atom = Arc<Poly>;

/// Exact element of the field ℚ(q, ν̃₁, …) with rational exponents.
///
/// Stored as `num / ∏ atom^e`. Every atom is normalized and no atom divides
/// the numerator, so common factors are cancelled as far as the atom basis
/// resolves them. Equality is decided exactly by testing whether the
/// difference has a zero numerator.
#[derive(Clone, Debug)]
pub struct ExactScalar {
    num: Poly,
    den: Vec<(Atom, u32)>,
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

fn merge_sum(a: &[(Atom, u32)], b: &[(Atom, u32)]) -> Vec<(Atom, u32)> {
    merge_with(a, b, |x, y| x + y)
}

fn merge_max(a: &[(Atom, u32)], b: &[(Atom, u32)]) -> Vec<(Atom, u32)> {
    merge_with(a, b, |x, y| x.max(y))
}

fn merge_with(a: &[(Atom, u32)], b: &[(Atom, u32)], f: impl Fn(u32, u32) -> u32) -> Vec<(Atom, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0.clone(), f(a[i].1, b[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn insert_atom(den: &mut Vec<(Atom, u32)>, atom: Atom, e: u32) {
    if e == 0 || atom.is_one() {
        return;
    }
    match den.binary_search_by(|(a, _)| a.cmp(&atom)) {
        Ok(k) => den[k].1 += e,
        Err(k) => den.insert(k, (atom, e)),
    }
}

/// Divides `num` by every atom of `den` as often as possible; returns the
/// reduced numerator and the remaining denominator.
fn cancel(mut num: Poly, den: &[(Atom, u32)]) -> (Poly, Vec<(Atom, u32)>) {
    let mut rest = Vec::with_capacity(den.len());
    for (atom, e) in den {
        let mut e = *e;
        while e > 0 {
            match num.exact_div(atom) {
                Some(q) => {
                    num = q;
                    e -= 1;
                }
                None => break,
            }
        }
        if e > 0 {
            rest.push((atom.clone(), e));
        }
    }
    (num, rest)
}

/// Product of atom powers `∏ atom^{full - part}`.
fn complement(full: &[(Atom, u32)], part: &[(Atom, u32)]) -> Poly {
    let mut out = Poly::one();
    for (atom, e) in full {
        let have = part
            .binary_search_by(|(a, _)| a.cmp(atom))
            .map(|k| part[k].1)
            .unwrap_or(0);
        if *e > have {
            out = out.mul(&atom.pow(*e - have));
        }
    }
    out
}

fn expand(den: &[(Atom, u32)]) -> Poly {
    complement(den, &[])
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar { num: Poly::zero(), den: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_poly(Poly::constant(Coef::from_integer(k as i128)))
    }

    pub fn from_ratio(p: i64, r: i64) -> Self {
        Self::from_poly(Poly::constant(Coef::new(p as i128, r as i128)))
    }

    pub fn from_coef(c: Coef) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        ExactScalar { num: p, den: Vec::new() }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::from_poly(Poly::term(m, Coef::one()))
    }

    pub fn term(m: Monomial, c: Coef) -> Self {
        Self::from_poly(Poly::term(m, c))
    }

    /// `q^{p/r}`.
    pub fn q_pow(p: i64, r: i64) -> Self {
        Self::monomial(Monomial::q(p, r))
    }

    pub fn q_pow_ratio(e: Rational64) -> Self {
        Self::monomial(Monomial::var(VarId::Q, e))
    }

    /// `ν_i` for the rank-`n` algebra.
    pub fn nu(n: usize, i: usize) -> Self {
        Self::monomial(Monomial::nu(n, i, 1, 1))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator expanded into a single polynomial.
    pub fn denominator(&self) -> Poly {
        expand(&self.den)
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.den.iter().map(|(a, e)| (a.as_ref(), *e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// Returns the monomial and coefficient when the value is a single term.
    pub fn as_term(&self) -> Option<(Monomial, Coef)> {
        if self.den.is_empty() {
            self.num.as_term()
        } else {
            None
        }
    }

    /// Reduces the representation against its own atoms; idempotent.
    pub fn canonicalize(&self) -> Self {
        let (num, den) = cancel(self.num.clone(), &self.den);
        if num.is_zero() {
            return Self::zero();
        }
        ExactScalar { num, den }
    }

    pub fn neg(&self) -> Self {
        ExactScalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if num.is_zero() {
                return Self::zero();
            }
            let (num, den) = cancel(num, &self.den);
            return ExactScalar { num, den };
        }
        let l = merge_max(&self.den, &o.den);
        let num = self
            .num
            .mul(&complement(&l, &self.den))
            .add(&o.num.mul(&complement(&l, &o.den)));
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = cancel(num, &l);
        ExactScalar { num, den }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Sum of many values over a single common denominator.
    pub fn sum<'a, I: IntoIterator<Item = &'a ExactScalar>>(items: I) -> Self {
        let items: Vec<&ExactScalar> = items.into_iter().filter(|s| !s.is_zero()).collect();
        match items.len() {
            0 => return Self::zero(),
            1 => return items[0].clone(),
            _ => {}
        }
        let mut l: Vec<(Atom, u32)> = Vec::new();
        for s in &items {
            if s.den != l {
                l = merge_max(&l, &s.den);
            }
        }
        let mut num = Poly::zero();
        for s in &items {
            if s.den == l {
                num = num.add(&s.num);
            } else {
                num = num.add(&s.num.mul(&complement(&l, &s.den)));
            }
        }
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = cancel(num, &l);
        ExactScalar { num, den }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_empty() && o.den.is_empty() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        let (an, bd) = cancel(self.num.clone(), &o.den);
        let (bn, ad) = cancel(o.num.clone(), &self.den);
        ExactScalar { num: an.mul(&bn), den: merge_sum(&ad, &bd) }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        ExactScalar { num: self.num.mul_term(m, Coef::one()), den: self.den.clone() }
    }

    pub fn scale(&self, c: Coef) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExactScalar { num: self.num.mul_term(Monomial::ONE, c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let (m, c, p) = self.num.normalize();
        let num = expand(&self.den).mul_term(m.inv(), c.recip());
        let mut den = Vec::new();
        insert_atom(&mut den, Arc::new(p), 1);
        Ok(ExactScalar { num, den })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ScalarError> {
        let inv = o.inv()?;
        if self.den.is_empty() || inv.den.is_empty() {
            return Ok(self.mul(&inv));
        }
        // Refine the new atom against the existing ones by exact division.
        let (new_atom, _) = inv.den[0].clone();
        let mut lhs = self.clone();
        let mut pieces = vec![(new_atom.as_ref().clone(), 1u32)];
        let mut extra: Vec<(Atom, u32)> = Vec::new();
        for (atom, _) in &self.den {
            let mut k = 0;
            while k < pieces.len() {
                let (p, e) = pieces[k].clone();
                if p.is_one() || p == **atom {
                    k += 1;
                    continue;
                }
                if let Some(q) = p.exact_div(atom) {
                    insert_atom(&mut extra, atom.clone(), e);
                    pieces[k] = (q.normalize().2, e);
                    continue;
                }
                if let Some(q) = atom.exact_div(&p) {
                    // Split the existing atom: atom = p · q.
                    let qn = q.normalize();
                    let mut den = Vec::new();
                    let mut num = lhs.num.clone();
                    for (a, ea) in &lhs.den {
                        if a == atom {
                            insert_atom(&mut den, Arc::new(p.clone()), *ea);
                            insert_atom(&mut den, Arc::new(qn.2.clone()), *ea);
                            num = num.mul_term(qn.0.pow(-(*ea as i64)), qn.1.recip().pow(*ea as i32));
                        } else {
                            insert_atom(&mut den, a.clone(), *ea);
                        }
                    }
                    lhs = ExactScalar { num, den };
                    lhs = lhs.canonicalize();
                }
                k += 1;
            }
        }
        // The split pieces multiply back to the new atom up to a unit.
        let mut rebuilt = Poly::one();
        for (p, e) in &pieces {
            rebuilt = rebuilt.mul(&p.pow(*e));
        }
        rebuilt = rebuilt.mul(&expand(&extra));
        let (m, c, _) = rebuilt.normalize();
        let mut den = extra;
        for (p, e) in pieces {
            insert_atom(&mut den, Arc::new(p), e);
        }
        let inv2 = ExactScalar { num: inv.num.mul_term(m, c), den };
        Ok(lhs.mul(&inv2))
    }

    pub fn pow(&self, k: i32) -> Result<Self, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut out = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(out)
    }

    /// Applies a monomial automorphism (dynamical shift, Weyl permutation).
    pub fn map_monomials<F: Fn(Monomial) -> Monomial>(&self, f: F) -> Self {
        let mut num = self.num.map_monomials(&f);
        let mut den = Vec::new();
        for (atom, e) in &self.den {
            let (m, c, p) = atom.map_monomials(&f).normalize();
            num = num.mul_term(m.pow(-(*e as i64)), c.recip().pow(*e as i32));
            insert_atom(&mut den, Arc::new(p), *e);
        }
        ExactScalar { num, den }
    }

    /// Evaluates at a point given by the logarithms of `(q, ν̃_1, …)`.
    pub fn eval_logs(&self, logs: &[Complex64; NVARS]) -> Result<Complex64, ScalarError> {
        let (n, _) = self.num.eval_logs(logs);
        let mut d = Complex64::new(1.0, 0.0);
        for (atom, e) in &self.den {
            let (v, scale) = atom.eval_logs(logs);
            if v.norm() <= 1e-13 * scale {
                return Err(ScalarError::PoleAtSamplePoint);
            }
            d *= v.powi(*e as i32);
        }
        let out = n / d;
        if !out.re.is_finite() || !out.im.is_finite() {
            return Err(ScalarError::PoleAtSamplePoint);
        }
        Ok(out)
    }

    /// Replaces every power `v^k` by `value^k`; exponents of `v` must be
    /// integers.
    pub fn substitute(&self, v: VarId, value: &ExactScalar) -> Result<Self, ScalarError> {
        let sub = |p: &Poly| -> Result<ExactScalar, ScalarError> {
            let slot = v.slot();
            let mut parts = Vec::with_capacity(p.len());
            for (m, c) in p.terms() {
                let u = m.units()[slot];
                if u % EXP_DEN != 0 {
                    return Err(ScalarError::NonIntegerExponent);
                }
                let mut rest = *m.units();
                rest[slot] = 0;
                let k = i32::try_from(u / EXP_DEN).map_err(|_| ScalarError::NonIntegerExponent)?;
                parts.push(ExactScalar::term(Monomial::from_units(rest), *c).mul(&value.pow(k)?));
            }
            Ok(ExactScalar::sum(parts.iter()))
        };
        sub(&self.num)?.checked_div(&sub(&self.denominator())?)
    }

    /// Limit as `v → 0` with the other variables fixed.
    pub fn limit_at_zero(&self, v: VarId) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let slot = v.slot();
        let lowest = |p: &Poly| {
            let e = p.terms().iter().map(|(m, _)| m.units()[slot]).min().expect("nonzero");
            let lead = p.terms().iter().filter(|(m, _)| m.units()[slot] == e).map(|(m, c)| {
                let mut u = *m.units();
                u[slot] = 0;
                (Monomial::from_units(u), *c)
            });
            (e, ExactScalar::from_poly(Poly::from_terms(lead)))
        };
        let (en, ln) = lowest(&self.num);
        let (ed, ld) = lowest(&self.denominator());
        match en.cmp(&ed) {
            std::cmp::Ordering::Greater => Ok(Self::zero()),
            std::cmp::Ordering::Equal => ln.checked_div(&ld),
            std::cmp::Ordering::Less => Err(ScalarError::Divergent),
        }
    }

    /// Largest exponent denominator appearing anywhere in the value.
    pub fn max_exponent_denominator(&self) -> i64 {
        let mut d = 1;
        for (m, _) in self.num.terms() {
            d = d.max(m.max_denominator());
        }
        for (a, _) in &self.den {
            for (m, _) in a.terms() {
                d = d.max(m.max_denominator());
            }
        }
        d
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.sub(o).is_zero()
    }
}

impl Eq for ExactScalar {}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / (", self.num)?;
        for (k, (a, e)) in self.den.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "({a})")?;
            } else {
                write!(f, "({a})^{e}")?;
            }
        }
        write!(f, ")")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: &ExactScalar) -> ExactScalar {
                self.$f(o)
            }
        }
        impl std::ops::$tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: ExactScalar) -> ExactScalar {
                (&self).$f(&o)
            }
        }
        impl std::ops::$tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: &ExactScalar) -> ExactScalar {
                (&self).$f(o)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, o: &ExactScalar) -> ExactScalar {
        self.checked_div(o).expect("division by zero")
    }
}

impl std::ops::Div<ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn div(self, o: ExactScalar) -> ExactScalar {
        &self / &o
    }
}

impl std::ops::Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::neg(&self)
    }
}

impl std::ops::Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::neg(self)
    }
}

impl From<i64> for ExactScalar {
    fn from(k: i64) -> Self {
        ExactScalar::from_int(k)
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(i: usize) -> ExactScalar {
        ExactScalar::nu(2, i)
    }

    #[test]
    fn cancellation_of_nu_ratio() {
        let r = &nu(2) / &nu(1);
        let a = &(&ExactScalar::one() - &r) + &r;
        assert!(a.is_one());
    }

    #[test]
    fn self_division_is_one() {
        let d = ExactScalar::q_pow(1, 1) - ExactScalar::q_pow(-1, 1);
        assert!((&d / &d).is_one());
    }

    #[test]
    fn partial_fractions_cancel() {
        let one = ExactScalar::one();
        let x = &nu(1) / &nu(2);
        let a = &one / &(&one - &x);
        let b = &x / &(&one - &x);
        assert!((&a - &b).is_one());
    }

    #[test]
    fn refined_atoms_keep_equality_exact() {
        let one = ExactScalar::one();
        let x = ExactScalar::q_pow(1, 1);
        let x2 = &x * &x;
        let a = &one / &(&one - &x);
        let b = &one / &(&one - &x2);
        let lhs = &a * &b;
        let rhs = &(&one / &(&(&one - &x) * &(&one - &x))) / &(&one + &x);
        assert_eq!(lhs, rhs);
        let s = &a - &(&x / &(&one - &x2));
        let t = &one / &(&one - &x2);
        assert_eq!(s, t);
    }

    #[test]
    fn pole_detected() {
        let one = ExactScalar::one();
        let a = &one / &(&one - &(&nu(2) / &nu(1)));
        let logs = [Complex64::new(0.0, 0.0); NVARS];
        assert_eq!(a.eval_logs(&logs), Err(ScalarError::PoleAtSamplePoint));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(ExactScalar::one().checked_div(&ExactScalar::zero()), Err(ScalarError::DivisionByZero));
    }
}
