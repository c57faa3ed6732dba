use num_complex::Complex64;

use super::exact::ExactScalar;
use super::monomial::NVARS;
use super::ScalarError;

/// Sample point for numeric evaluation: values of `q` and `ν̃_1..ν̃_n`.
///
/// Stores principal logarithms so that rational powers use the principal
/// branch.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericPoint {
    pub n: usize,
    logs: [Complex64; NVARS],
}

impl NumericPoint {
    pub fn new(n: usize, q: Complex64, nu_tilde: &[Complex64]) -> Self {
        assert_eq!(nu_tilde.len(), n, "need exactly n values of nu~");
        let mut logs = [Complex64::new(0.0, 0.0); NVARS];
        logs[0] = q.ln();
        for (k, v) in nu_tilde.iter().enumerate() {
            logs[k + 1] = v.ln();
        }
        NumericPoint { n, logs }
    }

    /// Point with real `q > 0` and positive `ν_1, …, ν_{n+1}` whose product
    /// is 1 (the last value is implied by the others).
    pub fn from_nu(q: f64, nu: &[f64]) -> Self {
        let n = nu.len() - 1;
        let total: f64 = nu.iter().map(|v| v.ln()).sum();
        assert!(total.abs() < 1e-9, "nu values must multiply to 1");
        let nt: Vec<Complex64> = nu[..n]
            .iter()
            .map(|v| Complex64::new((v.ln() / (2.0 * (n as f64 + 1.0))).exp(), 0.0))
            .collect();
        Self::new(n, Complex64::new(q, 0.0), &nt)
    }

    /// Geometric point `ν_{i+1}/ν_i = 1/ratio`, i.e. `ν_i/ν_{i+1} = ratio`.
    pub fn geometric(n: usize, q: f64, ratio: f64) -> Self {
        let logs: Vec<f64> = (0..=n).map(|i| -(i as f64) * ratio.ln()).collect();
        let mean = logs.iter().sum::<f64>() / (n as f64 + 1.0);
        let nu: Vec<f64> = logs.iter().map(|l| (l - mean).exp()).collect();
        Self::from_nu(q, &nu)
    }

    pub fn q(&self) -> Complex64 {
        self.logs[0].exp()
    }

    pub fn with_q(&self, q: Complex64) -> Self {
        let mut p = self.clone();
        p.logs[0] = q.ln();
        p
    }

    pub fn eval(&self, a: &ExactScalar) -> Result<Complex64, ScalarError> {
        a.eval_logs(&self.logs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qnum, Base, QNumKind};

    #[test]
    fn q_number_at_seven_tenths() {
        let p = NumericPoint::from_nu(0.7, &[1.0, 1.0]);
        let v = p.eval(&qnum(2, Base::Q, QNumKind::Symmetric)).unwrap();
        assert!((v.re - (0.7 + 1.0 / 0.7)).abs() < 1e-12);
    }

    #[test]
    fn principal_square_root() {
        let p = NumericPoint::from_nu(0.49, &[1.0, 1.0]);
        let v = p.eval(&ExactScalar::q_pow(1, 2)).unwrap();
        assert!((v.re - 0.7).abs() < 1e-12 && v.im.abs() < 1e-15);
    }

    #[test]
    fn geometric_ratios() {
        let p = NumericPoint::geometric(2, 0.7, 0.5);
        let r = p.eval(&(&ExactScalar::nu(2, 1) / &ExactScalar::nu(2, 2))).unwrap();
        assert!((r.re - 0.5).abs() < 1e-12);
    }
}
