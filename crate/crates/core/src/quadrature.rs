//! Gauss–Legendre rules and small dense least-squares helpers.

use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss–Legendre rule on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        out.push((mid - half * z, half * w));
    }
    out.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    out
}

/// Least-squares solution of `a·c = y` with column equilibration.
pub fn least_squares(a: &DMatrix<f64>, y: &DVector<f64>) -> Option<DVector<f64>> {
    let mut scaled = a.clone();
    let mut scale = vec![1.0; a.ncols()];
    for (j, sc) in scale.iter_mut().enumerate() {
        let n = a.column(j).norm();
        if n > 0.0 {
            *sc = n;
            scaled.column_mut(j).scale_mut(1.0 / n);
        }
    }
    let svd = scaled.svd(true, true);
    let c = svd.solve(y, 1e-14).ok()?;
    Some(DVector::from_iterator(
        c.len(),
        c.iter().zip(scale.iter()).map(|(v, s)| v / s),
    ))
}

/// Fit `y ≈ Σ c_k x^k` over the listed powers; returns coefficients and max residual.
pub fn fit_powers(xs: &[f64], ys: &[f64], powers: &[i32]) -> Option<(Vec<f64>, f64)> {
    let a = DMatrix::from_fn(xs.len(), powers.len(), |i, j| xs[i].powi(powers[j]));
    let y = DVector::from_column_slice(ys);
    let c = least_squares(&a, &y)?;
    let r = (&a * &c - &y).amax();
    Some((c.iter().copied().collect(), r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = gauss_legendre(6, -0.5, 2.0);
        let v: f64 = rule.iter().map(|(x, w)| w * x.powi(11)).sum();
        let exact = (2f64.powi(12) - 0.5f64.powi(12)) / 12.0;
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn fit_recovers_coefficients() {
        let xs: Vec<f64> = (0..8).map(|k| 0.1 * 0.5f64.powi(k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 0.25 * x.powi(3) + x.powi(5)).collect();
        let (c, _) = fit_powers(&xs, &ys, &[1, 2, 3, 4, 5]).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-12);
        assert!((c[2] + 0.25).abs() < 1e-9);
    }
}
