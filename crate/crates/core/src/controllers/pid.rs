use crate::error::{Error, Result};
use crate::ratpoly::{Polynomial, TransferFunction};

/// Filtered-derivative PID gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidParams {
    pub kp: f64,
    /// 1/s
    pub ki: f64,
    /// s
    pub kd: f64,
    /// Derivative filter time constant, s.
    pub tf: f64,
}

impl PidParams {
    pub fn new(kp: f64, ki: f64, kd: f64, tf: f64) -> Self {
        PidParams { kp, ki, kd, tf }
    }

    pub fn from_theta(theta: &[f64; 4]) -> Self {
        PidParams::new(theta[0], theta[1], theta[2], theta[3])
    }

    pub fn theta(&self) -> [f64; 4] {
        [self.kp, self.ki, self.kd, self.tf]
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("PID gains must be finite".into()));
        }
        if self.kp < 0.0 || self.ki < 0.0 || self.kd < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "PID gains must be >= 0 (kp = {}, ki = {}, kd = {})",
                self.kp, self.ki, self.kd
            )));
        }
        if !(self.tf > 0.0) {
            return Err(Error::InvalidParameter(format!("PID filter constant tf must be > 0 (got {})", self.tf)));
        }
        Ok(())
    }
}

/// `Kp + Ki/s + Kd s / (1 + Tf s)` over the common denominator `s (1 + Tf s)`.
///
/// With `Ki = 0` the numerator loses its constant term exactly and the
/// shared `s` is removed, so PD laws carry no pole at the origin.
pub fn pid_controller(p: &PidParams) -> Result<TransferFunction> {
    p.validate()?;
    let num = Polynomial::new(vec![p.kp * p.tf + p.kd, p.kp + p.ki * p.tf, p.ki]);
    let den = Polynomial::new(vec![p.tf, 1.0, 0.0]);
    if num.is_zero() {
        return Ok(TransferFunction::gain(0.0));
    }
    if p.ki == 0.0 {
        return TransferFunction::new(num.strip_origin(1), den.strip_origin(1));
    }
    TransferFunction::new(num, den)
}
