//! The Hartogs triangle `{|z₂| < |z₁| < 1}`: its monomial basis, the symbols
//! `f_ε(w) = |w₁|^{-2+2ε}`, their Berezin transforms in closed form, and the
//! blow-up of `‖B f_ε‖₂ / ‖f_ε‖₂` as `ε → 0`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::berezin::{OperatorSymbol, SymbolClass};
use crate::domains::{diagonal_unchecked, kernel_unchecked, Domain};
use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::quadrature::{gauss_legendre_on, integrate, Neumaier, QuadratureRule};

/// `‖(1 − |z₁|²)²‖_{L²(ℍ)} = π/√30`, from `π² ∫₀¹ x(1−x)⁴ dx = π²/30`.
pub const WEIGHT_NORM: f64 = PI / 5.477_225_575_051_661;

/// Largest `|z₁|` accepted by [`berezin_feps_closed`].
pub const MAX_RADIUS: f64 = 0.999;

const CLOSED_REL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HartogsBasisIndex {
    pub n: i64,
    pub m: i64,
}

impl HartogsBasisIndex {
    pub fn new(n: i64, m: i64) -> Result<Self> {
        if m >= 0 && n + m >= -1 {
            Ok(HartogsBasisIndex { n, m })
        } else {
            Err(Error::InadmissibleIndex { n, m })
        }
    }

    /// `k = n + m + 1`
    pub fn k(&self) -> i64 {
        self.n + self.m + 1
    }

    /// `‖z₁ⁿ z₂ᵐ‖⁻²`
    pub fn coefficient(&self) -> f64 {
        ((self.m + 1) * (self.n + self.m + 2)) as f64 / (PI * PI)
    }

    pub fn monomial(&self, z: &CPoint) -> Complex64 {
        z[0].powi(self.n as i32) * z[1].powi(self.m as i32)
    }
}

/// `a_{nm} = (m+1)(n+m+2)/π²`, the reciprocal of `‖z₁ⁿ z₂ᵐ‖²`.
pub fn a_nm(n: i64, m: i64) -> Result<f64> {
    Ok(HartogsBasisIndex::new(n, m)?.coefficient())
}

/// Truncated `Σ a_{nm} (z₁w̄₁)ⁿ (z₂w̄₂)ᵐ` over `k = n+m+1 < truncation`, `m < truncation`.
pub fn kernel_series(z: &CPoint, w: &CPoint, truncation: usize) -> Complex64 {
    let a = z[0] * w[0].conj();
    let b = z[1] * w[1].conj();
    // (z₁w̄₁)ⁿ (z₂w̄₂)ᵐ = a^{k-1} (b/a)ᵐ
    let q = b / a;
    let mut total = Complex64::new(0.0, 0.0);
    let mut ak = 1.0 / a;
    for k in 0..truncation {
        let mut qm = Complex64::new(1.0, 0.0);
        let mut row = Complex64::new(0.0, 0.0);
        for m in 0..truncation {
            row += qm * (m + 1) as f64;
            qm *= q;
        }
        total += ak * row * (k + 1) as f64;
        ak *= a;
    }
    total / (PI * PI)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(eps))
    }
}

/// `f_ε(w) = |w₁|^{-2+2ε}`; `ε = 1` gives the constant 1.
pub fn f_eps(eps: f64, w: &CPoint) -> Result<f64> {
    check_eps(eps)?;
    Domain::HartogsTriangle.check(w)?;
    Ok(w[0].norm().powf(-2.0 + 2.0 * eps))
}

/// `‖f_ε‖_{L²} = π/√(2ε)`
pub fn f_eps_norm(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(PI / (2.0 * eps).sqrt())
}

/// `f_ε` as an operator symbol. It lies in `Lᵖ` for `p < 2/(1−ε)`.
pub fn f_eps_symbol(eps: f64) -> Result<OperatorSymbol> {
    check_eps(eps)?;
    let e = -2.0 + 2.0 * eps;
    Ok(OperatorSymbol::real(format!("f_eps({eps})"), SymbolClass::PIntegrable(2.0), move |w| w[0].norm().powf(e)))
}

/// Exponent `γ` with `f_ε |k_z|² ~ |w₁|^γ` at the origin, for
/// [`crate::quadrature::build_singular_rule`].
pub fn berezin_origin_power(eps: f64) -> f64 {
    -4.0 + 2.0 * eps
}

/// Exponent `γ` with `f_ε² ~ |w₁|^γ` at the origin.
pub fn norm_origin_power(eps: f64) -> f64 {
    -4.0 + 4.0 * eps
}

/// `B f_ε(z) = (1 − |z₁|²)² Σ_{k<T} (k+1)²/(k+ε) |z₁|^{2k}`.
///
/// The remainder is bounded with `(k+1)²/(k+ε) ≤ k + 3` for `k ≥ 1`; if the
/// bound exceeds `1e-10` of the partial sum the call fails.
pub fn berezin_feps_closed(eps: f64, z: &CPoint, truncation: usize) -> Result<f64> {
    check_eps(eps)?;
    Domain::HartogsTriangle.check(z)?;
    let r = z[0].norm();
    if r > MAX_RADIUS {
        return Err(Error::InvalidArgument(format!("|z₁| = {r} exceeds {MAX_RADIUS}")));
    }
    let x = r * r;
    let mut acc = Neumaier::new();
    let mut xk = 1.0;
    for k in 0..truncation {
        let kf = k as f64;
        acc.add((kf + 1.0).powi(2) / (kf + eps) * xk);
        xk *= x;
    }
    let s = acc.value();
    let t = truncation as f64;
    let tail = if truncation == 0 { f64::INFINITY } else { xk * ((t + 3.0) / (1.0 - x) + x / (1.0 - x).powi(2)) };
    if tail > CLOSED_REL_TOL * s {
        return Err(Error::TruncationInsufficient { truncation, tail: tail / s });
    }
    let w = (1.0 - r) * (1.0 + r);
    Ok(w * w * s)
}

/// [`berezin_feps_closed`] with the smallest truncation meeting the tail bound.
pub fn berezin_feps(eps: f64, z: &CPoint) -> Result<f64> {
    let r = z[0].norm().min(MAX_RADIUS);
    let x = r * r;
    // x^T (T+3)/(1-x)² below 1e-12 is plenty
    let mut t = 16usize;
    while x.powi(t as i32) * (t as f64 + 3.0) / (1.0 - x).powi(2) > 1e-13 {
        t *= 2;
    }
    berezin_feps_closed(eps, z, t)
}

/// `g(x) = B f_ε` at `|z₁|² = x`, accurate up to `x → 1`.
///
/// Uses `(k+1)² = (k+ε)(k+2−ε) + (1−ε)²`, so that
/// `g = x + (2−ε)(1−x) + (1−ε)²(1−x)² L(x)` with `L(x) = Σ xᵏ/(k+ε)`.
pub fn berezin_feps_radial(eps: f64, x: f64) -> f64 {
    let y = 1.0 - x;
    x + (2.0 - eps) * y + (1.0 - eps).powi(2) * y * y * lerch_l(eps, x)
}

/// `L(x) = Σ_{k≥0} xᵏ/(k+ε)` for `0 ≤ x < 1`.
fn lerch_l(eps: f64, x: f64) -> f64 {
    if x < 0.5 {
        let mut acc = Neumaier::new();
        let mut xk = 1.0;
        let mut k = 0.0;
        while xk > 1e-18 {
            acc.add(xk / (k + eps));
            xk *= x;
            k += 1.0;
        }
        return acc.value();
    }
    // 1/(k+ε) = 1/k − ε/k² + ε²/(k²(k+ε)) for k ≥ 1
    let mut rest = Neumaier::new();
    let mut xk = x;
    for k in 1..4000 {
        let kf = k as f64;
        rest.add(xk / (kf * kf * (kf + eps)));
        xk *= x;
    }
    1.0 / eps - (1.0 - x).ln() - eps * dilog(x) + eps * eps * rest.value()
}

/// Dilogarithm on `[0, 1)`.
fn dilog(x: f64) -> f64 {
    let series = |u: f64| {
        let mut acc = Neumaier::new();
        let mut uk = u;
        let mut k = 1.0;
        while uk > 1e-18 * k * k {
            acc.add(uk / (k * k));
            uk *= u;
            k += 1.0;
        }
        acc.value()
    };
    if x <= 0.5 {
        series(x)
    } else {
        PI * PI / 6.0 - x.ln() * (1.0 - x).ln() - series(1.0 - x)
    }
}

/// `∫_ℍ g(z)² dV` for functions of `x = |z₁|²`: `π² ∫₀¹ g(x)² x dx`, on
/// Gauss panels that shrink geometrically toward `x = 1`.
fn radial_l2_norm2<G: Fn(f64) -> f64>(g: G) -> f64 {
    let mut acc = Neumaier::new();
    let mut lo = 0.0;
    for k in 1..=46 {
        let hi = 1.0 - 0.5f64.powi(k);
        let (xs, ws) = gauss_legendre_on(20, lo, hi);
        for (x, w) in xs.iter().zip(&ws) {
            acc.add(w * g(*x).powi(2) * x);
        }
        lo = hi;
    }
    PI * PI * acc.value()
}

/// `‖B f_ε‖_{L²(ℍ)}`, by the one-dimensional reduction over `|z₁|`.
pub fn berezin_feps_norm(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(radial_l2_norm2(|x| berezin_feps_radial(eps, x)).sqrt())
}

/// Checks `1/(π²|z₁|²K(z,z)) = (1 − |z₂/z₁|²)²(1 − |z₁|²)²` to `1e-12` relative.
pub fn diagonal_identity_check(z: &CPoint) -> bool {
    if !Domain::HartogsTriangle.contains(z) {
        return false;
    }
    let (a, b) = (z[0].norm(), z[1].norm());
    let lhs = 1.0 / (PI * PI * a * a * diagonal_unchecked(&Domain::HartogsTriangle, z));
    let t = b / a;
    let rhs = ((1.0 - t) * (1.0 + t) * (1.0 - a) * (1.0 + a)).powi(2);
    (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupRow {
    pub eps: f64,
    pub norm_f: f64,
    /// `‖(1 − |z₁|²)²‖/ε`, from keeping only the `k = 0` term.
    pub lower_bound_bf: f64,
    /// `lower_bound_bf / norm_f = 1/√(15ε)`
    pub ratio_lower: f64,
    /// `‖B f_ε‖ / ‖f_ε‖`
    pub ratio_quadrature: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupTable {
    pub rows: Vec<BlowupRow>,
    /// Least-squares slope of `log ratio_quadrature` against `log ε`.
    pub slope: f64,
}

pub const BLOWUP_CSV_HEADER: &str = "eps,norm_f,lower_bound_Bf,ratio_lower,ratio_quadrature";

impl BlowupTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(BLOWUP_CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let cells = [r.eps, r.norm_f, r.lower_bound_bf, r.ratio_lower, r.ratio_quadrature];
            let line: Vec<String> = cells.iter().map(|v| format!("{v:.11e}")).collect();
            let _ = writeln!(s, "{}", line.join(","));
        }
        s
    }
}

pub fn blowup_row(eps: f64) -> Result<BlowupRow> {
    let norm_f = f_eps_norm(eps)?;
    let lower_bound_bf = WEIGHT_NORM / eps;
    let bf = berezin_feps_norm(eps)?;
    Ok(BlowupRow { eps, norm_f, lower_bound_bf, ratio_lower: lower_bound_bf / norm_f, ratio_quadrature: bf / norm_f })
}

pub fn blowup_table(eps_list: &[f64]) -> Result<BlowupTable> {
    if eps_list.is_empty() {
        return Err(Error::InvalidArgument("empty ε list".into()));
    }
    for &e in eps_list {
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::EpsilonOutOfRange(e));
        }
    }
    let rows: Vec<BlowupRow> = eps_list.par_iter().map(|&e| blowup_row(e)).collect::<Result<_>>()?;
    let slope = if rows.len() >= 2 {
        fit_slope(rows.iter().map(|r| (r.eps.ln(), r.ratio_quadrature.ln())))
    } else {
        f64::NAN
    };
    Ok(BlowupTable { rows, slope })
}

fn fit_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points.collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `|⟨1/w₁, k_z⟩|` at `z = (1/j, 0)`, which is `|1/z₁| / √K(z,z)`.
pub fn weak_pairing(j: u32) -> Result<f64> {
    if j < 2 {
        return Err(Error::InvalidArgument(format!("j = {j} must be at least 2")));
    }
    let r = 1.0 / j as f64;
    // 1/√K(z,z) = π|z₁|(1 − |z₂/z₁|²)(1 − |z₁|²) with z₂ = 0
    let inv_sqrt_k = PI * r * (1.0 - r) * (1.0 + r);
    Ok(inv_sqrt_k / r)
}

/// The same pairing by quadrature on `rule`.
pub fn weak_pairing_quadrature(j: u32, rule: &QuadratureRule) -> Result<f64> {
    if j < 2 {
        return Err(Error::InvalidArgument(format!("j = {j} must be at least 2")));
    }
    let d = Domain::HartogsTriangle;
    let z = CPoint::two(Complex64::new(1.0 / j as f64, 0.0), Complex64::new(0.0, 0.0));
    let s = 1.0 / diagonal_unchecked(&d, &z).sqrt();
    let v = integrate(rule, |w| kernel_unchecked(&d, w, &z).conj() * s / w[0])?;
    Ok(v.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coefficients() {
        assert!((a_nm(0, 0).unwrap() - 2.0 / (PI * PI)).abs() < 1e-16);
        assert!((a_nm(-1, 0).unwrap() - 1.0 / (PI * PI)).abs() < 1e-16);
        assert!(matches!(a_nm(-2, 0), Err(Error::InadmissibleIndex { .. })));
        assert!(matches!(a_nm(0, -1), Err(Error::InadmissibleIndex { .. })));
    }

    #[test]
    fn weight_norm_constant() {
        let v = radial_l2_norm2(|x| (1.0 - x).powi(2)).sqrt();
        assert!((v - WEIGHT_NORM).abs() < 1e-14);
        assert!((WEIGHT_NORM - PI / 30f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn closed_form_is_independent_of_z2() {
        let a = berezin_feps(0.1, &CPoint::two(c(0.5, 0.0), c(0.2, 0.0))).unwrap();
        let b = berezin_feps(0.1, &CPoint::two(c(0.5, 0.0), c(0.1, 0.0))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn radial_form_matches_series() {
        for eps in [0.5, 0.1, 1e-2, 1e-4] {
            for r in [0.05, 0.3, 0.6, 0.69, 0.71, 0.9, 0.99] {
                let z = CPoint::two(c(r, 0.0), c(0.0, 0.0));
                let s = berezin_feps(eps, &z).unwrap();
                let g = berezin_feps_radial(eps, r * r);
                assert!((s - g).abs() < 1e-12 * s, "eps={eps} r={r}: {s} vs {g}");
            }
        }
    }

    #[test]
    fn small_eps_is_dominated_by_leading_term() {
        let z = CPoint::two(c(0.4, 0.0), c(0.1, 0.0));
        let r = berezin_feps(1e-3, &z).unwrap() / berezin_feps(1e-4, &z).unwrap();
        assert!((9.0..=11.0).contains(&(1.0 / r)));
    }

    #[test]
    fn refuses_near_boundary_and_short_truncation() {
        let z = CPoint::two(c(0.9995, 0.0), c(0.0, 0.0));
        assert!(berezin_feps_closed(0.1, &z, 100_000).is_err());
        let z = CPoint::two(c(0.9, 0.0), c(0.0, 0.0));
        assert!(matches!(berezin_feps_closed(0.1, &z, 50), Err(Error::TruncationInsufficient { .. })));
        assert!(matches!(f_eps_norm(0.0), Err(Error::EpsilonOutOfRange(_))));
    }

    #[test]
    fn diagonal_identity() {
        assert!(diagonal_identity_check(&CPoint::two(c(0.5, 0.0), c(0.0, 0.0))));
        assert!(diagonal_identity_check(&CPoint::two(c(0.5, 0.0), c(0.49999, 0.0))));
        assert!(diagonal_identity_check(&CPoint::two(c(0.0, 0.9), c(-0.3, 0.2))));
    }

    #[test]
    fn weak_pairing_values() {
        assert!((weak_pairing(2).unwrap() - 0.75 * PI).abs() < 1e-15);
        assert!((weak_pairing(1000).unwrap() - PI).abs() < 1e-5);
    }

    #[test]
    fn blowup_rows() {
        let t = blowup_table(&[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
        assert!((t.rows[1].ratio_lower - 1.0 / 0.15f64.sqrt()).abs() < 1e-12);
        for r in &t.rows {
            assert!(r.ratio_quadrature >= r.ratio_lower * 0.99, "{r:?}");
            assert!((r.ratio_lower - r.lower_bound_bf / r.norm_f).abs() < 1e-14 * r.ratio_lower);
        }
        for w in t.rows.windows(2) {
            assert!(w[1].ratio_quadrature > w[0].ratio_quadrature);
        }
        assert!((-0.55..=-0.45).contains(&t.slope), "slope {}", t.slope);
        let csv = t.to_csv();
        assert!(csv.starts_with("eps,norm_f,lower_bound_Bf,ratio_lower,ratio_quadrature\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn series_matches_closed_kernel() {
        let z = CPoint::two(c(0.8, 0.0), c(0.5, 0.3));
        let w = CPoint::two(c(-0.2, 0.7), c(0.1, -0.4));
        let k = kernel_unchecked(&Domain::HartogsTriangle, &z, &w);
        let s = kernel_series(&z, &w, 160);
        assert!((k - s).norm() < 1e-8 * k.norm());
    }
}
