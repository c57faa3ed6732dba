use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;

/// Number of dynamical variables supported (ν̃₁..ν̃₄, i.e. n ≤ 4).
pub const MAX_NU: usize = 4;
/// Slots in a monomial: q followed by ν̃₁..ν̃_MAX_NU.
pub const NVARS: usize = MAX_NU + 1;
/// Common denominator of every stored exponent.
///
/// Exponents are kept as integer multiples of `1/EXP_DEN`; the value covers
/// `4(n+1)^2` for `n ≤ 4`, which bounds every exponent produced by the crate.
pub const EXP_DEN: i64 = 100_800;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    Q,
    /// ν̃_i with `1 ≤ i ≤ MAX_NU`.
    NuTilde(usize),
}

impl VarId {
    pub fn slot(self) -> usize {
        match self {
            VarId::Q => 0,
            VarId::NuTilde(i) => {
                assert!((1..=MAX_NU).contains(&i), "nu~ index {i} out of range");
                i
            }
        }
    }

    pub fn from_slot(slot: usize) -> Self {
        if slot == 0 {
            VarId::Q
        } else {
            VarId::NuTilde(slot)
        }
    }
}

/// Converts a rational exponent to lattice units, panicking if its
/// denominator does not divide [`EXP_DEN`].
pub fn to_units(e: Rational64) -> i64 {
    let d = *e.denom();
    assert!(
        EXP_DEN % d == 0,
        "exponent {e} has a denominator outside the supported lattice 1/{EXP_DEN}"
    );
    e.numer() * (EXP_DEN / d)
}

pub fn from_units(u: i64) -> Rational64 {
    Rational64::new(u, EXP_DEN)
}

/// A Laurent monomial `q^{a_0} ν̃_1^{a_1} ⋯` with rational exponents.
///
/// Ordering is lexicographic on `(q, ν̃_1, ν̃_2, …)`, which is a group order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial([i64; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn from_units(units: [i64; NVARS]) -> Self {
        Monomial(units)
    }

    pub fn units(&self) -> &[i64; NVARS] {
        &self.0
    }

    pub fn var(v: VarId, e: Rational64) -> Self {
        let mut u = [0; NVARS];
        u[v.slot()] = to_units(e);
        Monomial(u)
    }

    /// `q^{p/r}`.
    pub fn q(p: i64, r: i64) -> Self {
        Self::var(VarId::Q, Rational64::new(p, r))
    }

    /// `ν̃_i^{p/r}`.
    pub fn nu_tilde(i: usize, p: i64, r: i64) -> Self {
        Self::var(VarId::NuTilde(i), Rational64::new(p, r))
    }

    /// `ν_i^{p/r}` for the rank-`n` algebra, with `ν̃_{n+1}` eliminated.
    pub fn nu(n: usize, i: usize, p: i64, r: i64) -> Self {
        assert!((1..=MAX_NU).contains(&n), "rank n={n} unsupported");
        assert!((1..=n + 1).contains(&i), "nu index {i} out of range for n={n}");
        let e = Rational64::new(p * 2 * (n as i64 + 1), r);
        if i <= n {
            Self::var(VarId::NuTilde(i), e)
        } else {
            let mut m = Monomial::ONE;
            for k in 1..=n {
                m = m * Self::var(VarId::NuTilde(k), -e);
            }
            m
        }
    }

    pub fn exponent(&self, v: VarId) -> Rational64 {
        from_units(self.0[v.slot()])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&u| u == 0)
    }

    pub fn inv(self) -> Self {
        let mut u = self.0;
        for x in u.iter_mut() {
            *x = -*x;
        }
        Monomial(u)
    }

    pub fn pow(self, k: i64) -> Self {
        let mut u = self.0;
        for x in u.iter_mut() {
            *x *= k;
        }
        Monomial(u)
    }

    /// Raises to a rational power; the result must stay on the lattice.
    pub fn pow_ratio(self, r: Rational64) -> Self {
        let mut u = self.0;
        for x in u.iter_mut() {
            let v = Rational64::from_integer(*x) * r;
            assert!(v.is_integer(), "fractional power leaves the exponent lattice");
            *x = v.to_integer();
        }
        Monomial(u)
    }

    /// Componentwise minimum (gcd in the monomial lattice).
    pub fn meet(self, o: Self) -> Self {
        let mut u = self.0;
        for (x, y) in u.iter_mut().zip(o.0.iter()) {
            *x = (*x).min(*y);
        }
        Monomial(u)
    }

    pub fn join(self, o: Self) -> Self {
        let mut u = self.0;
        for (x, y) in u.iter_mut().zip(o.0.iter()) {
            *x = (*x).max(*y);
        }
        Monomial(u)
    }

    /// Largest exponent denominator actually in use.
    pub fn max_denominator(&self) -> i64 {
        self.0
            .iter()
            .map(|&u| EXP_DEN / u.gcd(&EXP_DEN))
            .max()
            .unwrap_or(1)
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;
    // exponents add under multiplication
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: Self) -> Self {
        let mut u = self.0;
        for (x, y) in u.iter_mut().zip(o.0.iter()) {
            *x += *y;
        }
        Monomial(u)
    }
}

impl std::ops::Div for Monomial {
    type Output = Monomial;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}

fn write_exp(f: &mut fmt::Formatter<'_>, e: Rational64) -> fmt::Result {
    if e.is_integer() {
        write!(f, "{}", e.numer())
    } else {
        write!(f, "{{{}/{}}}", e.numer(), e.denom())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (slot, &u) in self.0.iter().enumerate() {
            if u == 0 {
                continue;
            }
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            match VarId::from_slot(slot) {
                VarId::Q => write!(f, "q^")?,
                VarId::NuTilde(i) => write!(f, "nu~{i}^")?,
            }
            write_exp(f, from_units(u))?;
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_powers_add() {
        let h = Monomial::q(1, 2);
        assert_eq!(h * h, Monomial::q(1, 1));
    }

    #[test]
    fn eliminated_nu_is_inverse_product() {
        let n = 2;
        let prod = Monomial::nu(n, 1, 1, 1) * Monomial::nu(n, 2, 1, 1) * Monomial::nu(n, 3, 1, 1);
        assert!(prod.is_one());
    }

    #[test]
    fn display_uses_fractions() {
        let m = Monomial::q(-1, 3) * Monomial::nu_tilde(1, 6, 1);
        assert_eq!(m.to_string(), "q^{-1/3} * nu~1^6");
    }

    #[test]
    #[should_panic]
    fn off_lattice_exponent_rejected() {
        Monomial::q(1, 11);
    }
}
