//! One-dimensional Gauss rules.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d.is_finite() { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (z * p - p0) / (z * z - 1.0);
    (p, d)
}

/// Gauss–Legendre on `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let x = x.iter().map(|t| a + h * (t + 1.0)).collect();
    let w = w.iter().map(|v| v * h).collect();
    (x, w)
}

/// Gauss–Jacobi rule for the weight `(1-x)^α (1+x)^β` on `[-1, 1]`, α, β > -1.
///
/// Golub–Welsch eigenvalues give the starting nodes, Newton steps on the
/// recurrence polish them, and the weights come from the closed formula.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && alpha > -1.0 && beta > -1.0);
    let (a, b) = (alpha, beta);
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jm[(k, k)] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if k + 1 < n {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + a + b;
            let num = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b);
            let den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
            let off = (num / den).sqrt();
            jm[(k, k + 1)] = off;
            jm[(k + 1, k)] = off;
        }
    }
    let mut roots: Vec<f64> = SymmetricEigen::new(jm).eigenvalues.iter().copied().collect();
    roots.sort_by(|x, y| x.total_cmp(y));
    for z in roots.iter_mut() {
        for _ in 0..8 {
            let (p, d) = jacobi_with_derivative(n, a, b, *z);
            let dz = p / d;
            if !dz.is_finite() {
                break;
            }
            *z -= dz;
            if dz.abs() <= 1e-16 * z.abs().max(1e-300) {
                break;
            }
        }
    }
    let nf = n as f64;
    let ln_c = (a + b + 1.0) * 2f64.ln() + ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0)
        - ln_gamma(nf + a + b + 1.0)
        - ln_gamma(nf + 1.0);
    let weights = roots
        .iter()
        .map(|&z| {
            let (_, d) = jacobi_with_derivative(n, a, b, z);
            (ln_c - ((1.0 - z) * (1.0 + z)).ln() - 2.0 * d.abs().ln()).exp()
        })
        .collect();
    (roots, weights)
}

fn jacobi_with_derivative(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b + (a + b + 2.0) * x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let a1 = 2.0 * k * (k + a + b) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let c = 2.0 * nf + a + b;
    // (c)(1 - x²) P'ₙ = n(a - b - c x) Pₙ + 2(n + a)(n + b) Pₙ₋₁
    let d = (nf * (a - b - c * x) * p1 + 2.0 * (nf + a) * (nf + b) * p0) / (c * (1.0 - x * x));
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg} got={got}");
            }
        }
    }

    #[test]
    fn jacobi_moments() {
        // moments of ((1+x)/2)^k against the Beta-function closed form
        for &(a, b) in &[(0.0, -0.98), (0.0, -0.5), (0.5, 1.5), (0.0, 0.0)] {
            let (x, w) = gauss_jacobi(24, a, b);
            for k in 0..20 {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * ((1.0 + x) / 2.0).powi(k)).sum();
                // ∫₋₁¹ (1-x)^a (1+x)^b ((1+x)/2)^k dx = 2^{a+b+1} B(b+k+1, a+1)
                let lb = ln_gamma(b + k as f64 + 1.0) + ln_gamma(a + 1.0) - ln_gamma(a + b + k as f64 + 2.0);
                let exact = ((a + b + 1.0) * 2f64.ln() + lb).exp();
                assert!((got - exact).abs() < 1e-11 * exact, "a={a} b={b} k={k}: {got} vs {exact}");
            }
        }
    }
}
