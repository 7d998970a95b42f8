//! Reference implementations used as independent oracles. Nothing here calls
//! into the library's polynomial, discretization or simulation code.

#![allow(dead_code)]

/// Product of two polynomials, coefficients in descending powers.
pub fn pmul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Sum of two polynomials, coefficients in descending powers.
pub fn padd(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (k, x) in a.iter().enumerate() {
        out[n - a.len() + k] += x;
    }
    for (k, x) in b.iter().enumerate() {
        out[n - b.len() + k] += x;
    }
    out
}

/// Routh-Hurwitz test: every root strictly in the open left half plane.
pub fn hurwitz(p: &[f64]) -> bool {
    let p: Vec<f64> = p.iter().copied().skip_while(|c| *c == 0.0).collect();
    if p.is_empty() {
        return false;
    }
    let sign = p[0].signum();
    let p: Vec<f64> = p.iter().map(|c| c * sign).collect();
    if p.iter().any(|c| *c <= 0.0) {
        return false;
    }
    let n = p.len();
    let width = n.div_ceil(2);
    let mut rows = vec![vec![0.0; width + 1]; 2];
    for (k, c) in p.iter().enumerate() {
        rows[k % 2][k / 2] = *c;
    }
    for _ in 2..n {
        let (a, b) = (&rows[rows.len() - 2], &rows[rows.len() - 1]);
        if b[0] <= 0.0 {
            return false;
        }
        let mut next = vec![0.0; width + 1];
        for j in 0..width {
            next[j] = (b[0] * a[j + 1] - a[0] * b[j + 1]) / b[0];
        }
        rows.push(next);
    }
    rows.iter().all(|r| r[0] > 0.0)
}

/// Continuous simulation of `num/den` driven by `input(t)`, by classical RK4
/// on the controllable canonical form with `substeps` steps per output
/// sample. Returns the output at `t = k dt` for `k < n`, starting from rest.
pub fn rk4_response(num: &[f64], den: &[f64], input: impl Fn(f64) -> f64, dt: f64, n: usize, substeps: usize) -> Vec<f64> {
    let lead = den[0];
    let a: Vec<f64> = den.iter().map(|c| c / lead).collect();
    let order = a.len() - 1;
    let mut b = vec![0.0; order + 1];
    for (k, c) in num.iter().enumerate() {
        b[order + 1 - num.len() + k] = c / lead;
    }
    // strictly proper remainder plus direct feedthrough
    let d = b[0];
    let bs: Vec<f64> = (1..=order).map(|k| b[k] - d * a[k]).collect();
    // state x[i] = i-th derivative of the internal variable
    let deriv = |x: &[f64], u: f64| -> Vec<f64> {
        let mut dx = vec![0.0; order];
        dx[..order - 1].copy_from_slice(&x[1..order]);
        let mut top = u;
        for i in 0..order {
            top -= a[order - i] * x[i];
        }
        dx[order - 1] = top;
        dx
    };
    let output = |x: &[f64], u: f64| -> f64 {
        let mut y = d * u;
        for i in 0..order {
            y += bs[order - 1 - i] * x[i];
        }
        y
    };
    let h = dt / substeps as f64;
    let mut x = vec![0.0; order];
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let t0 = k as f64 * dt;
        out.push(output(&x, input(t0)));
        for j in 0..substeps {
            let t = t0 + j as f64 * h;
            let k1 = deriv(&x, input(t));
            let x2: Vec<f64> = x.iter().zip(&k1).map(|(x, k)| x + 0.5 * h * k).collect();
            let k2 = deriv(&x2, input(t + 0.5 * h));
            let x3: Vec<f64> = x.iter().zip(&k2).map(|(x, k)| x + 0.5 * h * k).collect();
            let k3 = deriv(&x3, input(t + 0.5 * h));
            let x4: Vec<f64> = x.iter().zip(&k3).map(|(x, k)| x + h * k).collect();
            let k4 = deriv(&x4, input(t + h));
            for i in 0..order {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
    out
}

pub fn rms_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Surge plant `T(s) / (m s)` with the bundled coefficients, built by hand.
pub fn plant_coeffs() -> (Vec<f64>, Vec<f64>) {
    let num = vec![330.8, 16550.0, 5854.0];
    let den = pmul(&[1.0, 135.1, 18130.0, 550400.0, 134700.0], &[2.0, 0.0]);
    (num, den)
}

/// PID in the filtered parallel form as (num, den).
pub fn pid_coeffs(kp: f64, ki: f64, kd: f64, tf: f64) -> (Vec<f64>, Vec<f64>) {
    (vec![kp * tf + kd, kp + ki * tf, ki], vec![tf, 1.0, 0.0])
}

/// Closed-loop `r -> y` and `d -> y` transfer functions of a unity feedback
/// loop with plant `gn/gd` and controller `cn/cd`.
pub fn closed_loop(gn: &[f64], gd: &[f64], cn: &[f64], cd: &[f64]) -> ClosedLoop {
    let char_poly = padd(&pmul(gd, cd), &pmul(gn, cn));
    ClosedLoop { ry_num: pmul(gn, cn), dy_num: pmul(gn, cd), den: char_poly }
}

pub struct ClosedLoop {
    pub ry_num: Vec<f64>,
    pub dy_num: Vec<f64>,
    pub den: Vec<f64>,
}
