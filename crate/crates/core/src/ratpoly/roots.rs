//! Polynomial roots from the eigenvalues of the balanced companion matrix.
//!
//! Eigenvalues are refined with a few guarded Newton steps on the original
//! polynomial. Multiple roots come back from the eigensolver as a small
//! cloud of radius ~ eps^(1/m); when a cloud is confirmed as a genuine
//! m-fold root (all derivatives below order m vanish at its centroid to
//! rounding level) it is collapsed onto the centroid, which is far better
//! conditioned than any individual member.

use nalgebra::{linalg::balancing::balance_parlett_reinsch, DMatrix, Schur};
use num_complex::Complex64;

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Relative residual tolerance the roots are expected to satisfy.
pub const TOL_ROOT: f64 = 1e-8;

const NEWTON_STEPS: usize = 6;
const SCHUR_MAX_ITER: usize = 10_000;
/// Largest multiplicity recognised by the cluster pass.
const MAX_CLUSTER: i32 = 3;

/// All `deg(p)` roots with multiplicity, sorted by real then imaginary part.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::UndefinedRoots);
    }
    let zeros_at_origin = p.origin_multiplicity();
    let q = p.strip_origin(zeros_at_origin);
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];

    let mut found = match q.degree() {
        0 => Vec::new(),
        1 => vec![Complex64::new(-q.coeffs()[1] / q.coeffs()[0], 0.0)],
        n => companion_eigenvalues(&q).ok_or(Error::RootsDidNotConverge(n))?,
    };
    let clustered = collapse_clusters(&q, &mut found);
    polish(&q, &mut found, &clustered);
    roots.extend(found);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn companion_eigenvalues(q: &Polynomial) -> Option<Vec<Complex64>> {
    let n = q.degree();
    let lead = q.leading();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (j, c) in q.coeffs()[1..].iter().enumerate() {
        m[(0, j)] = -c / lead;
    }
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    balance_parlett_reinsch(&mut m);
    let schur = Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITER)?;
    Some(schur.complex_eigenvalues().iter().copied().collect())
}

fn newton(q: &Polynomial, dq: &Polynomial, mut z: Complex64) -> Complex64 {
    let mut fz = q.eval_complex(z).norm();
    for _ in 0..NEWTON_STEPS {
        let d = dq.eval_complex(z);
        if d.norm() == 0.0 || fz == 0.0 {
            break;
        }
        let next = z - q.eval_complex(z) / d;
        let f_next = q.eval_complex(next).norm();
        if !(f_next < fz) {
            break;
        }
        z = next;
        fz = f_next;
    }
    z
}

/// Refines simple real roots and the upper member of each conjugate pair,
/// then restores exact conjugate symmetry. Collapsed multiple roots are left
/// alone: Newton converges poorly there and would bias the centroid.
fn polish(q: &Polynomial, roots: &mut Vec<Complex64>, clustered: &[bool]) {
    let dq = q.derivative();
    let upper = roots.iter().filter(|z| z.im > 0.0).count();
    let lower = roots.iter().filter(|z| z.im < 0.0).count();
    if upper != lower {
        for (z, &skip) in roots.iter_mut().zip(clustered) {
            if !skip {
                *z = newton(q, &dq, *z);
            }
        }
        return;
    }
    let mut out = Vec::with_capacity(roots.len());
    for (z, &skip) in roots.iter().zip(clustered).filter(|(z, _)| z.im >= 0.0) {
        let refined = if skip { *z } else { newton(q, &dq, *z) };
        if z.im == 0.0 {
            out.push(Complex64::new(refined.re, 0.0));
        } else {
            let refined = Complex64::new(refined.re, refined.im.abs());
            out.push(refined);
            out.push(refined.conj());
        }
    }
    *roots = out;
}

/// Returns a mask of the roots that were collapsed onto a cluster centroid.
fn collapse_clusters(q: &Polynomial, roots: &mut [Complex64]) -> Vec<bool> {
    let n = roots.len();
    let mut collapsed = vec![false; n];
    if n < 2 {
        return collapsed;
    }
    let eps = f64::EPSILON;
    let link = 1e3 * eps.powf(1.0 / MAX_CLUSTER as f64);

    // single-linkage grouping
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        g[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= link * scale {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a.max(b)] = a.min(b);
            }
        }
    }

    let mut derivs = vec![q.clone()];
    for _ in 1..MAX_CLUSTER {
        let next = derivs.last().unwrap().derivative();
        derivs.push(next);
    }

    for root in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| find(&mut group, i) == root).collect();
        let m = members.len();
        if m < 2 || m > MAX_CLUSTER as usize {
            continue;
        }
        let centroid =
            members.iter().map(|&i| roots[i]).sum::<Complex64>() / m as f64;
        let scale = centroid.norm().max(1.0);
        let spread = members
            .iter()
            .map(|&i| (roots[i] - centroid).norm())
            .fold(0.0, f64::max);
        if spread > 1e3 * eps.powf(1.0 / m as f64) * scale {
            continue;
        }
        let vanishing = derivs[1..m].iter().all(|d| {
            d.eval_complex(centroid).norm() <= 1e4 * eps * d.magnitude_scale(centroid)
        });
        if !vanishing {
            continue;
        }
        let centroid = if centroid.im.abs() <= spread {
            Complex64::new(centroid.re, 0.0)
        } else {
            centroid
        };
        for &i in &members {
            roots[i] = centroid;
            collapsed[i] = true;
        }
    }
    collapsed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_roots(p: &Polynomial, expected: &[Complex64], tol: f64) {
        let got = poly_roots(p).unwrap();
        assert_eq!(got.len(), expected.len(), "{got:?}");
        let mut used = vec![false; got.len()];
        for e in expected {
            let (k, d) = got
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, g)| (k, (g - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d <= tol * e.norm().max(1.0), "root {e} missing in {got:?}");
            used[k] = true;
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(matches!(poly_roots(&Polynomial::zero()), Err(Error::UndefinedRoots)));
    }

    #[test]
    fn factored_quadratic() {
        assert_roots(&Polynomial::new(vec![1.0, 3.0, 2.0]), &[c(-1.0, 0.0), c(-2.0, 0.0)], 1e-14);
    }

    #[test]
    fn imaginary_pair() {
        let r = poly_roots(&Polynomial::new(vec![1.0, 0.0, 1.0])).unwrap();
        assert_roots(&Polynomial::new(vec![1.0, 0.0, 1.0]), &[c(0.0, 1.0), c(0.0, -1.0)], 1e-14);
        assert_eq!(r[0], r[1].conj());
    }

    #[test]
    fn thruster_numerator_matches_quadratic_formula() {
        let (a, b, cc) = (330.8_f64, 16550.0_f64, 5854.0_f64);
        let disc = (b * b - 4.0 * a * cc).sqrt();
        // numerically stable pair
        let q = -0.5 * (b + disc);
        let expected = [c(q / a, 0.0), c(cc / q, 0.0)];
        assert_roots(&Polynomial::new(vec![a, b, cc]), &expected, 1e-13);
        assert!((expected[1].re + 0.35625).abs() < 1e-4);
        assert!((expected[0].re + 49.674).abs() < 1e-3);
    }

    #[test]
    fn origin_roots_are_exact() {
        let r = poly_roots(&Polynomial::new(vec![1.0, 2.0, 0.0, 0.0])).unwrap();
        assert_eq!(r.iter().filter(|z| **z == c(0.0, 0.0)).count(), 2);
    }

    #[test]
    fn multiple_roots_collapse() {
        let triple = Polynomial::new(vec![1.0, 5.0]).powi(3);
        let r = poly_roots(&triple).unwrap();
        for z in &r {
            assert!((z - c(-5.0, 0.0)).norm() < 1e-10, "{r:?}");
        }
        let double_pair = Polynomial::new(vec![1.0, 0.0, 1.0]).powi(2);
        assert_roots(
            &double_pair,
            &[c(0.0, 1.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, -1.0)],
            1e-10,
        );
    }

    #[test]
    fn close_distinct_roots_stay_apart() {
        let p = Polynomial::new(vec![1.0, 1.0]).mul(&Polynomial::new(vec![1.0, 1.001]));
        assert_roots(&p, &[c(-1.0, 0.0), c(-1.001, 0.0)], 1e-12);
    }
}
