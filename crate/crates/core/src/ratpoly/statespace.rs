use nalgebra::{linalg::balancing::balance_parlett_reinsch, DMatrix};

use super::poly::Polynomial;
use super::tf::TransferFunction;
use crate::error::{Error, Result};

/// Continuous-time realization `x' = A x + B u`, `y = C x + D u`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        let consistent = a.is_square()
            && b.nrows() == n
            && c.ncols() == n
            && d.nrows() == c.nrows()
            && d.ncols() == b.ncols();
        if !consistent {
            return Err(Error::InvalidParameter(format!(
                "inconsistent state-space dimensions: A {}x{}, B {}x{}, C {}x{}, D {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        Ok(StateSpace { a, b, c, d })
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Diagonal similarity `x = T z` that balances `A`; the input/output map
    /// is unchanged.
    pub fn balanced(&self) -> StateSpace {
        if self.order() == 0 {
            return self.clone();
        }
        let mut a = self.a.clone();
        let t = balance_parlett_reinsch(&mut a);
        let mut b = self.b.clone();
        let mut c = self.c.clone();
        for i in 0..self.order() {
            b.row_mut(i).unscale_mut(t[i]);
            c.column_mut(i).scale_mut(t[i]);
        }
        StateSpace { a, b, c, d: self.d.clone() }
    }

    /// Transfer function of a SISO realization (Faddeev-LeVerrier).
    pub fn transfer_function(&self) -> Result<TransferFunction> {
        let n = self.order();
        let d = self.d[(0, 0)];
        if n == 0 {
            return Ok(TransferFunction::gain(d));
        }
        // det(sI - A) = sum_k c[k] s^(n-k), adj(sI - A) = sum_{k>=1} M_k s^(n-k)
        let mut char_poly = vec![0.0; n + 1];
        char_poly[0] = 1.0;
        let mut adj_terms = vec![0.0; n + 1];
        let eye = DMatrix::<f64>::identity(n, n);
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 1..=n {
            m = &self.a * &m + &eye * char_poly[k - 1];
            adj_terms[k] = (&self.c * &m * &self.b)[(0, 0)];
            char_poly[k] = -(&self.a * &m).trace() / k as f64;
        }
        let den = Polynomial::new(char_poly);
        let num = Polynomial::new(adj_terms).add(&den.scale(d));
        TransferFunction::new(num, den)
    }
}
