use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real polynomial in `s`, coefficients in descending powers.
///
/// Leading (exact) zeros are stripped on construction; the zero polynomial is
/// stored as a single `0.0` coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        let first_nonzero = coeffs.iter().position(|&c| c != 0.0).unwrap_or(coeffs.len());
        coeffs.drain(..first_nonzero);
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn one() -> Self {
        Polynomial::constant(1.0)
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        Polynomial { coeffs: vec![1.0, 0.0] }
    }

    /// `lead * prod (s - r)` for roots closed under conjugation.
    ///
    /// Real roots (zero imaginary part) contribute linear factors and each
    /// root with positive imaginary part contributes the real quadratic of its
    /// conjugate pair; roots with negative imaginary part are assumed to be
    /// the partners and are skipped.
    pub fn from_roots(lead: f64, roots: &[Complex64]) -> Self {
        let mut p = Polynomial::constant(lead);
        for r in roots {
            if r.im == 0.0 {
                p = p.mul(&Polynomial::new(vec![1.0, -r.re]));
            } else if r.im > 0.0 {
                p = p.mul(&Polynomial::new(vec![1.0, -2.0 * r.re, r.norm_sqr()]));
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    /// Constant coefficient.
    pub fn trailing(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Multiplicity of the exact root at `s = 0` (count of trailing zeros).
    pub fn origin_multiplicity(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coeffs.iter().rev().take_while(|&&c| c == 0.0).count()
    }

    /// Coefficient of `s^k`.
    pub fn coeff_of_power(&self, k: usize) -> f64 {
        if k > self.degree() {
            0.0
        } else {
            self.coeffs[self.degree() - k]
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, c) in self.coeffs.iter().rev().enumerate() {
            out[n - 1 - i] += c;
        }
        for (i, c) in other.coeffs.iter().rev().enumerate() {
            out[n - 1 - i] += c;
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Product (coefficient convolution).
    pub fn mul(&self, other: &Polynomial) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn powi(&self, n: usize) -> Self {
        (0..n).fold(Polynomial::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[..n]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (n - i) as f64)
                .collect::<Vec<_>>(),
        )
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    /// `sum |a_k| |s|^k`, the natural scale of `|p(s)|` under rounding.
    pub fn magnitude_scale(&self, s: Complex64) -> f64 {
        let r = s.norm();
        self.coeffs.iter().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    /// Divides out `s` after checking that the constant term vanishes to
    /// within `rel_tol` of the coefficient scale; the constant is discarded.
    pub fn deflate_origin(&self, rel_tol: f64) -> Result<Self> {
        let c0 = self.trailing();
        if self.degree() == 0 || c0.abs() > rel_tol * self.norm_inf() {
            return Err(Error::MissingOriginRoot { constant: c0 });
        }
        Ok(Polynomial::new(self.coeffs[..self.coeffs.len() - 1].to_vec()))
    }

    /// Removes `k` exact factors of `s`; callers guarantee the trailing zeros.
    pub(crate) fn strip_origin(&self, k: usize) -> Self {
        debug_assert!(self.origin_multiplicity() >= k);
        Polynomial::new(self.coeffs[..self.coeffs.len() - k].to_vec())
    }

    pub fn roots(&self) -> Result<Vec<Complex64>> {
        super::roots::poly_roots(self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let power = n - i;
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match power {
                0 => write!(f, "{mag}")?,
                _ if mag != 1.0 => write!(f, "{mag}")?,
                _ => {}
            }
            match power {
                0 => {}
                1 => write!(f, "s")?,
                _ => write!(f, "s^{power}")?,
            }
        }
        Ok(())
    }
}

/// Convolution of coefficient sequences.
pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    a.mul(b)
}
