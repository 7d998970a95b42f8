use crate::error::{Error, Result};
use crate::ratpoly::{Polynomial, TransferFunction};

/// Relative tolerance for the structural root at s = 0 in `den - num`.
const ORIGIN_TOL: f64 = 1e-9;

/// Second-order template with a first-order roll-off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MrcParams {
    pub zeta: f64,
    /// rad/s
    pub wn: f64,
    /// s
    pub tauf: f64,
}

impl MrcParams {
    pub fn new(zeta: f64, wn: f64, tauf: f64) -> Self {
        MrcParams { zeta, wn, tauf }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zeta > 0.0 && self.zeta <= 1.0) {
            return Err(Error::InvalidParameter(format!("MRC zeta must lie in (0, 1] (got {})", self.zeta)));
        }
        if !(self.wn > 0.0 && self.wn.is_finite()) {
            return Err(Error::InvalidParameter(format!("MRC wn must be > 0 (got {})", self.wn)));
        }
        if !(self.tauf > 0.0 && self.tauf.is_finite()) {
            return Err(Error::InvalidParameter(format!("MRC tauf must be > 0 (got {})", self.tauf)));
        }
        Ok(())
    }
}

/// `M(s) = wn^2 / ((s^2 + 2 zeta wn s + wn^2)(tauf s + 1))`.
pub fn mrc_reference_model(p: &MrcParams) -> Result<TransferFunction> {
    p.validate()?;
    let w2 = p.wn * p.wn;
    let second = Polynomial::new(vec![1.0, 2.0 * p.zeta * p.wn, w2]);
    let lag = Polynomial::new(vec![p.tauf, 1.0]);
    TransferFunction::new(Polynomial::constant(w2), second.mul(&lag))
}

/// `C = M / (G (1 - M))` for the template built from `p`.
pub fn mrc_controller(g: &TransferFunction, p: &MrcParams) -> Result<TransferFunction> {
    model_matching_controller(g, &mrc_reference_model(p)?)
}

/// `C = M / (G (1 - M))` for any unit-DC-gain model `M`.
///
/// Writing `M = Mn / Md`, the factor `Md - Mn` vanishes at s = 0 and is
/// deflated exactly to `s P`, so `C = Mn Gd / (Gn s P)`. The explicit `s`
/// then cancels against the plant integrator in `Gd`.
pub fn model_matching_controller(g: &TransferFunction, m: &TransferFunction) -> Result<TransferFunction> {
    ensure_minimum_phase(g)?;
    let p = m.den().sub(m.num()).deflate_origin(ORIGIN_TOL)?;
    let num = m.num().mul(g.den());
    let den = g.num().mul(&Polynomial::s()).mul(&p);
    cancel_origin(num, den)
}

pub(crate) fn ensure_minimum_phase(g: &TransferFunction) -> Result<()> {
    if g.num().is_zero() {
        return Err(Error::InvalidParameter("plant numerator is zero".into()));
    }
    if g.num().degree() > 0 && g.zeros()?.iter().any(|z| z.re >= 0.0) {
        return Err(Error::NonMinimumPhase);
    }
    Ok(())
}

/// Strips the shared exact powers of `s` and checks properness.
pub(crate) fn cancel_origin(num: Polynomial, den: Polynomial) -> Result<TransferFunction> {
    let k = num.origin_multiplicity().min(den.origin_multiplicity());
    let (num, den) = (num.strip_origin(k), den.strip_origin(k));
    if !num.is_zero() && num.degree() > den.degree() {
        return Err(Error::ImproperController { num: num.degree(), den: den.degree() });
    }
    TransferFunction::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::{surge_plant, PlantParams};
    use crate::ratpoly::MINREAL_TOL;

    #[test]
    fn template_structure() {
        let m = mrc_reference_model(&MrcParams::new(0.9, 5.5, 0.1)).unwrap();
        assert!((m.dcgain() - 1.0).abs() < 1e-15);
        assert_eq!(m.den().degree(), 3);
        assert!(m.poles().unwrap().iter().all(|p| p.re < 0.0));
    }

    #[test]
    fn first_order_template_on_integrator() {
        let g = TransferFunction::from_coeffs(&[1.0], &[1.0, 0.0]).unwrap();
        let m = TransferFunction::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap();
        let c = model_matching_controller(&g, &m).unwrap();
        assert_eq!(c.num().coeffs(), &[1.0]);
        assert_eq!(c.den().coeffs(), &[1.0]);
    }

    #[test]
    fn surge_controller_is_biproper_and_matches_template() {
        let g = surge_plant(&PlantParams::default()).unwrap();
        let p = MrcParams::new(0.9, 5.5, 0.1);
        let c = mrc_controller(&g, &p).unwrap();
        assert_eq!(c.relative_degree(), 0);
        assert_eq!(c.den().origin_multiplicity(), 0);
        let cl = g.series(&c).feedback().unwrap().minreal(MINREAL_TOL).unwrap();
        let m = mrc_reference_model(&p).unwrap();
        let (got, want) = (cl.poles().unwrap(), m.poles().unwrap());
        assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).norm() < 1e-6, "{got:?} vs {want:?}");
        }
        assert!((cl.dcgain() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_rhp_zero() {
        let g = TransferFunction::from_coeffs(&[-1.0, 1.0], &[1.0, 3.0, 2.0, 0.0]).unwrap();
        assert!(matches!(
            mrc_controller(&g, &MrcParams::new(0.9, 2.0, 0.1)),
            Err(Error::NonMinimumPhase)
        ));
    }

    #[test]
    fn invalid_params() {
        assert!(mrc_reference_model(&MrcParams::new(1.2, 5.0, 0.1)).is_err());
        assert!(mrc_reference_model(&MrcParams::new(0.9, 0.0, 0.1)).is_err());
        assert!(mrc_reference_model(&MrcParams::new(0.9, 5.0, 0.0)).is_err());
    }
}
