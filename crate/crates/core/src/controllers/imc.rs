use super::mrc::cancel_origin;
use crate::error::{Error, Result};
use crate::ratpoly::{Polynomial, TransferFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImcParams {
    /// Filter time constant, s.
    pub lambda: f64,
    /// Filter order.
    pub order: usize,
}

impl ImcParams {
    pub fn new(lambda: f64, order: usize) -> Self {
        ImcParams { lambda, order }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("IMC lambda must be > 0 (got {})", self.lambda)));
        }
        if self.order == 0 {
            return Err(Error::InvalidParameter("IMC filter order must be >= 1".into()));
        }
        Ok(())
    }
}

/// `Q(s) = 1 / (lambda s + 1)^n`.
pub fn imc_filter(p: &ImcParams) -> Result<TransferFunction> {
    p.validate()?;
    TransferFunction::new(Polynomial::one(), Polynomial::new(vec![p.lambda, 1.0]).powi(p.order))
}

/// `C = Q / ((1 - Q) G-)` with `G-` the invertible factor of `G`.
///
/// `Qd - Qn` has an exact root at the origin, deflated to `s P`, so
/// `C = Qn G-d / (G-n s P)` before the shared `s` factors are removed.
pub fn imc_controller(g: &TransferFunction, p: &ImcParams) -> Result<TransferFunction> {
    let q = imc_filter(p)?;
    let minus = g.min_phase_split()?.minus;
    let required = minus.relative_degree();
    if (p.order as i64) < required {
        return Err(Error::ImproperImc { order: p.order, required: required.max(0) as usize });
    }
    let pq = q.den().sub(q.num()).deflate_origin(1e-12)?;
    let num = q.num().mul(minus.den());
    let den = minus.num().mul(&Polynomial::s()).mul(&pq);
    cancel_origin(num, den)
}
