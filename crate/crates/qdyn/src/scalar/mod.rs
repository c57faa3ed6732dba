//! Exact rational functions in `q` and the dynamical variables `ν̃_i`, and
//! their numeric evaluation.

mod exact;
mod monomial;
mod numeric;
mod poly;

pub use exact::ExactScalar;
pub use monomial::{from_units, to_units, Monomial, VarId, EXP_DEN, MAX_NU, NVARS};
pub use numeric::NumericPoint;
pub use poly::{Coef, Poly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the sample point")]
    PoleAtSamplePoint,
    #[error("substituted variable has a non-integer exponent")]
    NonIntegerExponent,
    #[error("limit diverges")]
    Divergent,
}

/// Which q-number to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QNumKind {
    /// `[z] = (q^z − q^{−z})/(q − q^{−1})`.
    Symmetric,
    /// `(z) = (1 − q^{2z})/(1 − q²)`.
    Shifted,
}

/// The deformation parameter used as base: `q` or `q⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Q,
    QInv,
}

impl Base {
    pub fn sign(self) -> i64 {
        match self {
            Base::Q => 1,
            Base::QInv => -1,
        }
    }
}

/// q-number of an integer argument in the given base.
pub fn qnum(z: i64, base: Base, kind: QNumKind) -> ExactScalar {
    if z == 0 {
        return ExactScalar::zero();
    }
    if z < 0 {
        return match kind {
            QNumKind::Symmetric => qnum(-z, base, kind).neg(),
            // (−z) = −q^{−2z}(z)
            QNumKind::Shifted => qnum(-z, base, kind)
                .mul_monomial(Monomial::q(2 * z * base.sign(), 1))
                .neg(),
        };
    }
    let s = base.sign();
    let terms = (0..z).map(|k| {
        let e = match kind {
            QNumKind::Symmetric => z - 1 - 2 * k,
            QNumKind::Shifted => 2 * k,
        };
        (Monomial::q(e * s, 1), Coef::from_integer(1))
    });
    ExactScalar::from_poly(Poly::from_terms(terms))
}

/// `(m)!` for the shifted q-number in the given base.
pub fn qfactorial(m: u32, base: Base) -> ExactScalar {
    let mut out = ExactScalar::one();
    for k in 1..=m as i64 {
        out = out.mul(&qnum(k, base, QNumKind::Shifted));
    }
    out
}
