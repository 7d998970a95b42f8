use nalgebra::{DMatrix, DVector};

use super::discretize::{c2d_tustin, c2d_zoh, DiscreteSystem};
use super::scenario::{Realization, ScenarioConfig};
use super::trace::SimTrace;
use crate::error::{Error, Result};
use crate::ratpoly::TransferFunction;

/// |y| beyond which a run is declared divergent and stopped.
pub const DIVERGENCE_BOUND: f64 = 1e6;

/// Plant and controller discretized at one step size, ready to be run
/// against any number of realizations.
#[derive(Debug, Clone)]
pub struct LoopModel {
    plant: DiscreteSystem,
    controller: DiscreteSystem,
    dt: f64,
}

impl LoopModel {
    pub fn new(plant: &TransferFunction, controller: &TransferFunction, dt: f64) -> Result<Self> {
        if !controller.is_proper() {
            return Err(Error::ImproperController {
                num: controller.num().degree(),
                den: controller.den().degree(),
            });
        }
        if !plant.is_strictly_proper() {
            return Err(Error::AlgebraicLoopRisk);
        }
        // balanced realizations keep the matrix exponential well scaled
        let plant_ss = plant.to_statespace()?.balanced();
        let ctrl_ss = controller.to_statespace()?.balanced();
        Ok(LoopModel { plant: c2d_zoh(&plant_ss, dt)?, controller: c2d_tustin(&ctrl_ss, dt)?, dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn plant(&self) -> &DiscreteSystem {
        &self.plant
    }

    pub fn controller(&self) -> &DiscreteSystem {
        &self.controller
    }

    /// Plant state that holds the output at `y0` with zero input:
    /// `(Ad - I) x = 0`, `Cd x = y0`.
    pub fn equilibrium_state(&self, y0: f64) -> Result<DVector<f64>> {
        let n = self.plant.order();
        if y0 == 0.0 || n == 0 {
            return Ok(DVector::zeros(n));
        }
        let mut lhs = DMatrix::<f64>::zeros(n + 1, n);
        lhs.view_mut((0, 0), (n, n))
            .copy_from(&(&self.plant.ad - DMatrix::<f64>::identity(n, n)));
        lhs.view_mut((n, 0), (1, n)).copy_from(&self.plant.cd);
        let mut rhs = DVector::<f64>::zeros(n + 1);
        rhs[n] = y0;
        let x = lhs
            .clone()
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map_err(|_| Error::UnreachableInitialOutput(y0))?;
        let residual = (&lhs * &x - &rhs).amax();
        if !(residual <= 1e-9 * y0.abs().max(1.0)) {
            return Err(Error::UnreachableInitialOutput(y0));
        }
        Ok(x)
    }

    /// Steps the loop over one realization. Both states start at zero
    /// unless `initial_output` asks for a plant equilibrium.
    pub fn run(&self, realization: &Realization, initial_output: f64) -> Result<SimTrace> {
        let mut plant = self.plant.clone();
        let mut ctrl = self.controller.clone();
        plant.state = self.equilibrium_state(initial_output)?;
        ctrl.reset();

        let n = realization.len();
        let mut trace = SimTrace {
            t: Vec::with_capacity(n),
            r: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            ym: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            d: Vec::with_capacity(n),
            dt: self.dt,
            diverged: false,
        };
        for k in 0..n {
            let y = plant.output(0.0);
            let r = realization.reference[k];
            let d = realization.disturbance[k];
            let ym = y + realization.noise[k];
            let u = ctrl.step(r - ym);
            trace.t.push(realization.t[k]);
            trace.r.push(r);
            trace.y.push(y);
            trace.ym.push(ym);
            trace.u.push(u);
            trace.d.push(d);
            if !(y.abs() <= DIVERGENCE_BOUND) || !u.is_finite() {
                trace.diverged = true;
                break;
            }
            plant.advance(u + d);
        }
        Ok(trace)
    }
}

/// Discretizes and runs the loop for one scenario.
pub fn simulate_closed_loop(
    plant: &TransferFunction,
    controller: &TransferFunction,
    cfg: &ScenarioConfig,
) -> Result<SimTrace> {
    let realization = Realization::generate(cfg)?;
    simulate_with_realization(plant, controller, cfg, &realization)
}

/// Same as [`simulate_closed_loop`] with externally supplied signals, so that
/// several controllers can share one realization.
pub fn simulate_with_realization(
    plant: &TransferFunction,
    controller: &TransferFunction,
    cfg: &ScenarioConfig,
    realization: &Realization,
) -> Result<SimTrace> {
    cfg.validate()?;
    LoopModel::new(plant, controller, cfg.dt)?.run(realization, cfg.initial_output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::ScenarioKind;

    fn integrator() -> TransferFunction {
        TransferFunction::from_coeffs(&[1.0], &[1.0, 0.0]).unwrap()
    }

    #[test]
    fn unit_feedback_integrator() {
        let cfg = ScenarioConfig { ref_amplitude: 1.0, horizon: 2.0, dt: 0.001, ..Default::default() };
        let tr = simulate_closed_loop(&integrator(), &TransferFunction::gain(1.0), &cfg).unwrap();
        assert_eq!(tr.len(), 2001);
        assert!((tr.y[1000] - (1.0 - (-1.0f64).exp())).abs() < 1e-3);
    }

    #[test]
    fn rejects_improper_and_biproper_plant() {
        let cfg = ScenarioConfig { horizon: 1.0, ..Default::default() };
        let improper = TransferFunction::from_coeffs(&[1.0, 0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!(matches!(
            simulate_closed_loop(&integrator(), &improper, &cfg),
            Err(Error::ImproperController { .. })
        ));
        let biproper = TransferFunction::from_coeffs(&[1.0, 2.0], &[1.0, 1.0]).unwrap();
        assert!(matches!(
            simulate_closed_loop(&biproper, &TransferFunction::gain(1.0), &cfg),
            Err(Error::AlgebraicLoopRisk)
        ));
    }

    #[test]
    fn divergence_is_flagged() {
        let unstable = TransferFunction::from_coeffs(&[1.0], &[1.0, -5.0]).unwrap();
        let cfg = ScenarioConfig { horizon: 50.0, ..Default::default() };
        let tr = simulate_closed_loop(&unstable, &TransferFunction::gain(1.0), &cfg).unwrap();
        assert!(tr.diverged);
        assert!(tr.len() < cfg.n_samples());
    }

    #[test]
    fn initial_output_is_held() {
        let g = integrator().series(&TransferFunction::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap());
        let cfg = ScenarioConfig {
            ref_amplitude: 1.5,
            horizon: 1.0,
            initial_output: 1.5,
            kind: ScenarioKind::Nominal,
            ..Default::default()
        };
        let tr = simulate_closed_loop(&g, &TransferFunction::gain(2.0), &cfg).unwrap();
        assert!(tr.y.iter().all(|y| (y - 1.5).abs() < 1e-9));
        // no integrator: a nonzero resting output is not an equilibrium
        let lag = TransferFunction::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap();
        assert!(matches!(
            simulate_closed_loop(&lag, &TransferFunction::gain(1.0), &cfg),
            Err(Error::UnreachableInitialOutput(_))
        ));
    }
}
