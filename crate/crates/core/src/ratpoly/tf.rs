use std::fmt;

use num_complex::Complex64;

use super::poly::Polynomial;
use super::statespace::StateSpace;
use crate::error::{Error, Result};

/// Default relative root distance under which `tf_minreal` cancels a pair.
pub const MINREAL_TOL: f64 = 1e-6;

/// Rational transfer function `num(s) / den(s)` with a monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    num: Polynomial,
    den: Polynomial,
}

impl TransferFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        // divide rather than scale by 1/lead so the denominator is exactly monic
        let lead = den.leading();
        let monic = |p: &Polynomial| Polynomial::new(p.coeffs().iter().map(|c| c / lead).collect::<Vec<_>>());
        Ok(TransferFunction { num: monic(&num), den: monic(&den) })
    }

    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    pub fn gain(k: f64) -> Self {
        TransferFunction { num: Polynomial::constant(k), den: Polynomial::one() }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval_complex(s) / self.den.eval_complex(s)
    }

    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() <= self.den.degree()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        self.den.roots()
    }

    /// Zeros of the numerator; a zero transfer function has none.
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        if self.num.is_zero() {
            return Ok(Vec::new());
        }
        self.num.roots()
    }

    /// Denominator degree minus numerator degree.
    pub fn relative_degree(&self) -> i64 {
        self.den.degree() as i64 - self.num.degree() as i64
    }

    /// Static gain `lim s->0 G(s)`, infinite for integrating systems.
    ///
    /// When both constant terms vanish the limit is taken from the lowest
    /// nonvanishing terms.
    pub fn dcgain(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let kn = self.num.origin_multiplicity();
        let kd = self.den.origin_multiplicity();
        let ratio = self.num.coeff_of_power(kn) / self.den.coeff_of_power(kd);
        match kn.cmp(&kd) {
            std::cmp::Ordering::Equal => ratio,
            std::cmp::Ordering::Greater => 0.0,
            std::cmp::Ordering::Less => f64::INFINITY.copysign(ratio),
        }
    }

    /// Cascade `self` then `other`; no cancellation is attempted.
    pub fn series(&self, other: &TransferFunction) -> TransferFunction {
        TransferFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("product of nonzero denominators is nonzero")
    }

    /// Unity negative feedback around `self` as the loop gain: `L / (1 + L)`.
    pub fn feedback(&self) -> Result<TransferFunction> {
        let den = self.den.add(&self.num);
        if den.is_zero() {
            return Err(Error::IllPosedLoop);
        }
        TransferFunction::new(self.num.clone(), den)
    }

    /// Cancels numerator/denominator roots closer than `tol` (relative to the
    /// larger root magnitude). Pairs are taken closest first; complex roots
    /// are handled as conjugate pairs.
    pub fn minreal(&self, tol: f64) -> Result<TransferFunction> {
        if self.num.is_zero() {
            return Ok(TransferFunction::gain(0.0));
        }
        let zeros = factor_roots(&self.num.roots()?);
        let poles = factor_roots(&self.den.roots()?);

        let mut candidates = Vec::new();
        for (i, z) in zeros.iter().enumerate() {
            for (j, p) in poles.iter().enumerate() {
                if (z.im == 0.0) != (p.im == 0.0) {
                    continue;
                }
                let dist = (z - p).norm();
                if dist <= tol * z.norm().max(p.norm()) {
                    candidates.push((dist, i, j));
                }
            }
        }
        if candidates.is_empty() {
            return Ok(self.clone());
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut zero_used = vec![false; zeros.len()];
        let mut pole_used = vec![false; poles.len()];
        for &(_, i, j) in &candidates {
            if !zero_used[i] && !pole_used[j] {
                zero_used[i] = true;
                pole_used[j] = true;
            }
        }
        let cancelled = |roots: &[Complex64], used: &[bool]| -> Vec<Complex64> {
            roots.iter().zip(used).filter(|(_, u)| **u).map(|(r, _)| *r).collect()
        };
        // dividing the factors out of the original coefficients keeps the
        // surviving roots, clustered or not, exactly where they were
        let num = deconvolve(&self.num, &Polynomial::from_roots(1.0, &cancelled(&zeros, &zero_used)));
        let den = deconvolve(&self.den, &Polynomial::from_roots(1.0, &cancelled(&poles, &pole_used)));
        TransferFunction::new(num, den)
    }

    /// Controllable canonical realization.
    pub fn to_statespace(&self) -> Result<StateSpace> {
        if !self.is_proper() {
            return Err(Error::ImproperTransferFunction {
                num: self.num.degree(),
                den: self.den.degree(),
            });
        }
        let n = self.den.degree();
        let a = &self.den.coeffs()[1..];
        // num = d * den + r with deg r < n
        let d = if !self.num.is_zero() && self.num.degree() == n { self.num.leading() } else { 0.0 };
        let r = self.num.sub(&self.den.scale(d));
        let c: Vec<f64> = (0..n).rev().map(|k| r.coeff_of_power(k)).collect();
        let mut am = nalgebra::DMatrix::zeros(n, n);
        for j in 0..n {
            am[(0, j)] = -a[j];
        }
        for i in 1..n {
            am[(i, i - 1)] = 1.0;
        }
        let mut bm = nalgebra::DMatrix::zeros(n, 1);
        if n > 0 {
            bm[(0, 0)] = 1.0;
        }
        let cm = nalgebra::DMatrix::from_row_slice(1, n, &c);
        let dm = nalgebra::DMatrix::from_element(1, 1, d);
        StateSpace::new(am, bm, cm, dm)
    }

    /// Splits into an invertible minimum-phase factor and an all-pass part
    /// carrying the right-half-plane zeros.
    pub fn min_phase_split(&self) -> Result<MinPhaseSplit> {
        let zeros = if self.num.is_zero() { Vec::new() } else { self.zeros()? };
        let unstable: Vec<Complex64> = zeros.iter().copied().filter(|z| z.re >= 0.0).collect();
        if unstable.is_empty() {
            return Ok(MinPhaseSplit {
                minus: self.clone(),
                plus: TransferFunction::gain(1.0),
                axis_zeros: Vec::new(),
            });
        }
        let axis_zeros: Vec<Complex64> = unstable.iter().copied().filter(|z| z.re == 0.0).collect();
        // mirror image -conj(z) of each RHP zero; axis zeros get a stable
        // companion pole at -|z| (or -1 at the origin)
        let mirrored: Vec<Complex64> = unstable
            .iter()
            .map(|z| {
                if z.re == 0.0 {
                    Complex64::new(-z.norm().max(1.0), 0.0)
                } else {
                    Complex64::new(-z.re, z.im)
                }
            })
            .collect();
        let plus = TransferFunction::new(
            Polynomial::from_roots(1.0, &unstable),
            Polynomial::from_roots(1.0, &dedup_axis(&mirrored, &unstable)),
        )?;
        let stable: Vec<Complex64> = zeros.iter().copied().filter(|z| z.re < 0.0).collect();
        let mut minus_zeros = stable;
        minus_zeros.extend(dedup_axis(&mirrored, &unstable));
        let minus = TransferFunction::new(
            Polynomial::from_roots(self.num.leading(), &minus_zeros),
            self.den.clone(),
        )?;
        Ok(MinPhaseSplit { minus, plus, axis_zeros })
    }
}

/// Mirror images of imaginary-axis pairs collapse onto the real axis; keep a
/// single real companion per pair so the factor stays real and proper.
fn dedup_axis(mirrored: &[Complex64], unstable: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(mirrored.len());
    for (m, z) in mirrored.iter().zip(unstable) {
        if z.re == 0.0 && z.im != 0.0 {
            // (s - jw)(s + jw) -> (s + w)^2
            if z.im > 0.0 {
                out.push(*m);
                out.push(*m);
            }
        } else {
            out.push(*m);
        }
    }
    out
}

/// Keeps real roots and the upper member of conjugate pairs.
fn factor_roots(roots: &[Complex64]) -> Vec<Complex64> {
    roots.iter().copied().filter(|z| z.im >= 0.0).collect()
}

/// Quotient `q` minimizing `|f q - p|` in the least-squares sense, for a
/// monic `f` that (nearly) divides `p`.
fn deconvolve(p: &Polynomial, f: &Polynomial) -> Polynomial {
    let (pc, fc) = (p.coeffs(), f.coeffs());
    if fc.len() == 1 {
        return p.clone();
    }
    let rows = pc.len();
    let cols = rows - fc.len() + 1;
    let mut m = nalgebra::DMatrix::<f64>::zeros(rows, cols);
    for j in 0..cols {
        for (k, c) in fc.iter().enumerate() {
            m[(j + k, j)] = *c;
        }
    }
    let rhs = nalgebra::DVector::from_column_slice(pc);
    let q = m.svd(true, true).solve(&rhs, 0.0).expect("SVD with both factors computed");
    Polynomial::new(q.as_slice().to_vec())
}

/// Result of [`TransferFunction::min_phase_split`]: `g = minus * plus`.
#[derive(Debug, Clone)]
pub struct MinPhaseSplit {
    pub minus: TransferFunction,
    pub plus: TransferFunction,
    /// Numerator roots found exactly on the imaginary axis (assigned to `plus`).
    pub axis_zeros: Vec<Complex64>,
}

impl fmt::Display for TransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

pub fn tf_series(g1: &TransferFunction, g2: &TransferFunction) -> TransferFunction {
    g1.series(g2)
}

pub fn tf_feedback(open_loop: &TransferFunction) -> Result<TransferFunction> {
    open_loop.feedback()
}

pub fn tf_minreal(g: &TransferFunction, tol: f64) -> Result<TransferFunction> {
    g.minreal(tol)
}

pub fn tf_relative_degree(g: &TransferFunction) -> i64 {
    g.relative_degree()
}

pub fn tf_dcgain(g: &TransferFunction) -> f64 {
    g.dcgain()
}

pub fn tf_to_statespace(g: &TransferFunction) -> Result<StateSpace> {
    g.to_statespace()
}

pub fn min_phase_split(g: &TransferFunction) -> Result<MinPhaseSplit> {
    g.min_phase_split()
}
