//! Identified T200 thruster model and the surge plant built from it.

use crate::error::{Error, Result};
use crate::ratpoly::{Polynomial, TransferFunction};

/// Thruster numerator, descending powers of s.
pub const THRUSTER_NUM: [f64; 3] = [330.8, 16550.0, 5854.0];
/// Thruster denominator, descending powers of s.
pub const THRUSTER_DEN: [f64; 5] = [1.0, 135.1, 18130.0, 550400.0, 134700.0];
/// Vehicle mass in kg.
pub const VEHICLE_MASS: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PlantParams {
    pub thruster_num: Vec<f64>,
    pub thruster_den: Vec<f64>,
    /// kg
    pub mass: f64,
}

impl Default for PlantParams {
    fn default() -> Self {
        PlantParams {
            thruster_num: THRUSTER_NUM.to_vec(),
            thruster_den: THRUSTER_DEN.to_vec(),
            mass: VEHICLE_MASS,
        }
    }
}

impl PlantParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) {
            return Err(Error::Invariant(format!("plant.mass must be > 0 (got {})", self.mass)));
        }
        if Polynomial::new(self.thruster_den.clone()).is_zero() {
            return Err(Error::Invariant("plant.thruster_den must not be zero".into()));
        }
        Ok(())
    }
}

/// Force-to-thrust dynamics `T(s)`.
pub fn thruster_tf(params: &PlantParams) -> Result<TransferFunction> {
    TransferFunction::new(
        Polynomial::new(params.thruster_num.clone()),
        Polynomial::new(params.thruster_den.clone()),
    )
}

/// `G(s) = T(s) / (m s)`: thruster in series with the vehicle integrator.
pub fn surge_plant(params: &PlantParams) -> Result<TransferFunction> {
    params.validate()?;
    let integrator = TransferFunction::new(Polynomial::one(), Polynomial::new(vec![params.mass, 0.0]))?;
    Ok(thruster_tf(params)?.series(&integrator))
}
