use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::ratpoly::StateSpace;

/// Discrete-time SISO realization with its own state.
#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    pub ad: DMatrix<f64>,
    pub bd: DMatrix<f64>,
    pub cd: DMatrix<f64>,
    pub dd: DMatrix<f64>,
    pub state: DVector<f64>,
    pub dt: f64,
    scratch: Vec<f64>,
}

impl DiscreteSystem {
    pub fn new(ad: DMatrix<f64>, bd: DMatrix<f64>, cd: DMatrix<f64>, dd: DMatrix<f64>, dt: f64) -> Self {
        let n = ad.nrows();
        DiscreteSystem { ad, bd, cd, dd, state: DVector::zeros(n), dt, scratch: vec![0.0; n] }
    }

    pub fn order(&self) -> usize {
        self.ad.nrows()
    }

    pub fn reset(&mut self) {
        self.state.fill(0.0);
    }

    pub fn feedthrough(&self) -> f64 {
        self.dd[(0, 0)]
    }

    /// `C x + D u` for the current state.
    #[inline]
    pub fn output(&self, u: f64) -> f64 {
        let c = self.cd.as_slice();
        let x = self.state.as_slice();
        let mut y = self.dd[(0, 0)] * u;
        for j in 0..x.len() {
            y += c[j] * x[j];
        }
        y
    }

    /// `x <- A x + B u`.
    #[inline]
    pub fn advance(&mut self, u: f64) {
        let n = self.order();
        let a = self.ad.as_slice();
        let b = self.bd.as_slice();
        let x = self.state.as_mut_slice();
        // column-major: a[j * n + i] = A[i, j]
        for i in 0..n {
            self.scratch[i] = b[i] * u;
        }
        for j in 0..n {
            let xj = x[j];
            if xj != 0.0 {
                let col = &a[j * n..(j + 1) * n];
                for i in 0..n {
                    self.scratch[i] += col[i] * xj;
                }
            }
        }
        x.copy_from_slice(&self.scratch);
    }

    /// Output for input `u`, then advance the state with the same input.
    #[inline]
    pub fn step(&mut self, u: f64) -> f64 {
        let y = self.output(u);
        self.advance(u);
        y
    }
}

/// Zero-order-hold discretization via the augmented matrix exponential
/// `exp([[A, B], [0, 0]] dt)`.
pub fn c2d_zoh(ss: &StateSpace, dt: f64) -> Result<DiscreteSystem> {
    check_dt(dt)?;
    let n = ss.order();
    let m = ss.b.ncols();
    if n == 0 {
        return Ok(DiscreteSystem::new(
            DMatrix::zeros(0, 0),
            DMatrix::zeros(0, m),
            ss.c.clone(),
            ss.d.clone(),
            dt,
        ));
    }
    let mut aug = DMatrix::<f64>::zeros(n + m, n + m);
    aug.view_mut((0, 0), (n, n)).copy_from(&(&ss.a * dt));
    aug.view_mut((0, n), (n, m)).copy_from(&(&ss.b * dt));
    let e = aug.exp();
    let ad = e.view((0, 0), (n, n)).into_owned();
    let bd = e.view((0, n), (n, m)).into_owned();
    Ok(DiscreteSystem::new(ad, bd, ss.c.clone(), ss.d.clone(), dt))
}

/// Bilinear (Tustin) discretization `s <- (2/dt)(z - 1)/(z + 1)`.
pub fn c2d_tustin(ss: &StateSpace, dt: f64) -> Result<DiscreteSystem> {
    check_dt(dt)?;
    let n = ss.order();
    if n == 0 {
        return c2d_zoh(ss, dt);
    }
    let half = 0.5 * dt;
    let eye = DMatrix::<f64>::identity(n, n);
    let ima = &eye - &ss.a * half;
    let lu = ima.clone().lu();
    let inv = lu.try_inverse().ok_or(Error::TustinSingularity)?;
    if !inv.iter().all(|v| v.is_finite()) {
        return Err(Error::TustinSingularity);
    }
    let ad = &inv * (&eye + &ss.a * half);
    let bd = &inv * &ss.b * dt;
    let cd = &ss.c * &inv;
    let dd = &ss.d + (&ss.c * &bd) * 0.5;
    Ok(DiscreteSystem::new(ad, bd, cd, dd, dt))
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("dt must be > 0 (got {dt})")))
    }
}
