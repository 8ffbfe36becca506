use super::gauss::gauss_legendre;
use super::sum::Neumaier;

const ORDER: usize = 16;
const PANELS: usize = 80;
const RATIO: f64 = 0.5;

/// `∫ₐᵇ f(r) dr` for integrands with power-law ends.
///
/// `exp_zero` is the exponent of `f` as `r → 0` (used when `a == 0`) and
/// `exp_inf` the exponent as `r → ∞` (used when `b` is infinite). Both ends
/// must be integrable; the caller classifies first.
pub fn integrate_power_law<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    exp_zero: Option<f64>,
    exp_inf: Option<f64>,
) -> f64 {
    let (x, w) = gauss_legendre(ORDER);
    let panel = |acc: &mut Neumaier, lo: f64, hi: f64, g: &dyn Fn(f64) -> f64| {
        let h = 0.5 * (hi - lo);
        for (t, wt) in x.iter().zip(&w) {
            acc.add(wt * h * g(lo + h * (t + 1.0)));
        }
    };
    // ∫₀ᶜ g with g ~ r^e near 0: geometric panels plus a power-law tail
    let near_zero = |acc: &mut Neumaier, c: f64, e: f64, g: &dyn Fn(f64) -> f64| {
        let mut hi = c;
        for _ in 0..PANELS {
            let lo = hi * RATIO;
            panel(acc, lo, hi, g);
            hi = lo;
        }
        acc.add(g(hi) * hi / (e + 1.0));
    };
    let finite = |acc: &mut Neumaier, lo: f64, hi: f64, g: &dyn Fn(f64) -> f64| {
        if hi / lo > 4.0 {
            let k = ((hi / lo).ln() / 2f64.ln()).ceil() as usize;
            let q = (hi / lo).powf(1.0 / k as f64);
            let mut l = lo;
            for i in 0..k {
                let h = if i + 1 == k { hi } else { l * q };
                panel(acc, l, h, g);
                l = h;
            }
        } else {
            for i in 0..8 {
                let l = lo + (hi - lo) * i as f64 / 8.0;
                let h = lo + (hi - lo) * (i + 1) as f64 / 8.0;
                panel(acc, l, h, g);
            }
        }
    };

    let mut acc = Neumaier::new();
    let split = if b.is_finite() { b } else if a > 0.0 { a } else { 1.0 };
    if a == 0.0 {
        near_zero(&mut acc, split, exp_zero.unwrap_or(0.0), &f);
    } else if split > a {
        finite(&mut acc, a, split, &f);
    }
    if b.is_infinite() {
        // r = c/u maps [c, ∞) to (0, 1]; the integrand behaves like u^{-e-2}
        let c = split;
        let e = -exp_inf.unwrap_or(-2.0) - 2.0;
        let g = |u: f64| f(c / u) * c / (u * u);
        near_zero(&mut acc, 1.0, e, &g);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_laws() {
        let v = integrate_power_law(|r| r.powf(-0.5), 0.0, 1.0, Some(-0.5), None);
        assert!((v - 2.0).abs() < 1e-12);
        let v = integrate_power_law(|r| r.powf(-0.96) * (1.0 - r), 0.0, 1.0, Some(-0.96), None);
        let exact = 1.0 / 0.04 - 1.0 / 1.04;
        assert!((v - exact).abs() < 1e-11 * exact);
        let v = integrate_power_law(|r| 1.0 / (1.0 + r).powi(3), 0.0, f64::INFINITY, Some(0.0), Some(-3.0));
        assert!((v - 0.5).abs() < 1e-12);
        let v = integrate_power_law(|r| r.recip(), 1.0, 2.0, None, None);
        assert!((v - 2f64.ln()).abs() < 1e-14);
        let v = integrate_power_law(|r| r.powi(-3), 2.0, f64::INFINITY, None, Some(-3.0));
        assert!((v - 0.125).abs() < 1e-13);
    }
}
