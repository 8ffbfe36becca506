//! Reinhardt domains given by a modulus profile, and the monomial-series kernel.
//!
//! A profile describes `{ inner < |z₁| < outer }` in dimension one, or
//! `{ inner < |z₁| < outer, |z₂| < h(|z₁|) }` in dimension two. Monomial
//! integrability is decided from the power-law behaviour of `h` at `0` and `∞`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::quadrature::{integrate_power_law, tail_exponent_classify, Convergence, Locus, TailExponent};

use super::{Domain, BOUNDARY_MARGIN};

type Bound = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Power-law exponents of the fiber bound: `h(r) ~ c·r^at_zero` as `r → 0`
/// and `h(r) ~ c·r^at_infinity` as `r → ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Asymptotics {
    pub at_zero: f64,
    pub at_infinity: f64,
}

#[derive(Clone)]
struct Fiber {
    bound: Bound,
    declared: Option<Asymptotics>,
}

#[derive(Clone)]
pub struct ReinhardtProfile {
    name: String,
    inner: f64,
    outer: f64,
    fiber: Option<Fiber>,
}

impl fmt::Debug for ReinhardtProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReinhardtProfile")
            .field("name", &self.name)
            .field("inner", &self.inner)
            .field("outer", &self.outer)
            .field("dim", &self.dim())
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MonomialNorm {
    Finite(f64),
    Infinite,
}

impl MonomialNorm {
    pub fn is_finite(&self) -> bool {
        matches!(self, MonomialNorm::Finite(_))
    }
}

const PROBE_TOL: f64 = 0.01;

fn log_slope(h: &dyn Fn(f64) -> f64, r: f64) -> f64 {
    let step = 1.01_f64;
    (h(r * step).ln() - h(r / step).ln()) / (2.0 * step.ln())
}

impl ReinhardtProfile {
    /// One-dimensional annulus `{inner < |z| < outer}`; `inner = 0` gives a disc.
    pub fn annulus(name: &str, inner: f64, outer: f64) -> Result<Self> {
        if !(inner >= 0.0 && outer > inner) {
            return Err(Error::InvalidProfile(format!("empty annulus ({inner}, {outer})")));
        }
        Ok(ReinhardtProfile { name: name.into(), inner, outer, fiber: None })
    }

    /// Two-dimensional profile `{inner < |z₁| < outer, |z₂| < bound(|z₁|)}`.
    ///
    /// Declared exponents are checked against local log-slopes of `bound`
    /// at `r = 10⁻³` (when `inner = 0`) and `r = 10³` (when `outer = ∞`).
    pub fn fibered<F>(name: &str, inner: f64, outer: f64, bound: F, declared: Option<Asymptotics>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(inner >= 0.0 && outer > inner) {
            return Err(Error::InvalidProfile(format!("empty base interval ({inner}, {outer})")));
        }
        let mid = if outer.is_finite() { 0.5 * (inner + outer) } else { inner + 1.0 };
        for r in [mid, inner + 0.1 * (mid - inner), mid + 0.4 * (mid - inner)] {
            let v = bound(r);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidProfile(format!("fiber bound is {v} at r = {r}")));
            }
        }
        if let Some(a) = declared {
            let tol = |e: f64| PROBE_TOL * e.abs().max(1.0);
            if inner == 0.0 {
                let s = log_slope(&bound, 1e-3);
                if (s - a.at_zero).abs() > tol(a.at_zero) {
                    return Err(Error::InvalidProfile(format!(
                        "declared exponent at 0 is {} but the bound has slope {s:.4}",
                        a.at_zero
                    )));
                }
            }
            if outer.is_infinite() {
                let s = log_slope(&bound, 1e3);
                if (s - a.at_infinity).abs() > tol(a.at_infinity) {
                    return Err(Error::InvalidProfile(format!(
                        "declared exponent at ∞ is {} but the bound has slope {s:.4}",
                        a.at_infinity
                    )));
                }
            }
        }
        Ok(ReinhardtProfile {
            name: name.into(),
            inner,
            outer,
            fiber: Some(Fiber { bound: Arc::new(bound), declared }),
        })
    }

    pub fn disc() -> Self {
        Self::annulus("disc", 0.0, 1.0).expect("valid")
    }

    pub fn bidisc() -> Self {
        let a = Asymptotics { at_zero: 0.0, at_infinity: 0.0 };
        Self::fibered("bidisc", 0.0, 1.0, |_| 1.0, Some(a)).expect("valid")
    }

    pub fn ball2() -> Self {
        let a = Asymptotics { at_zero: 0.0, at_infinity: 0.0 };
        Self::fibered("ball2", 0.0, 1.0, |r| ((1.0 - r) * (1.0 + r)).sqrt(), Some(a)).expect("valid")
    }

    pub fn hartogs() -> Self {
        let a = Asymptotics { at_zero: 1.0, at_infinity: 1.0 };
        Self::fibered("hartogs", 0.0, 1.0, |r| r, Some(a)).expect("valid")
    }

    /// `{|z₂| < (1 + |z₁|)⁻¹}`, unbounded and logarithmically convex.
    pub fn boas() -> Self {
        let a = Asymptotics { at_zero: 0.0, at_infinity: -1.0 };
        Self::fibered("boas", 0.0, f64::INFINITY, |r| 1.0 / (1.0 + r), Some(a)).expect("valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        if self.fiber.is_some() {
            2
        } else {
            1
        }
    }

    pub fn fiber_bound(&self, r: f64) -> Option<f64> {
        self.fiber.as_ref().map(|f| (f.bound)(r))
    }

    /// Declared exponents, or exponents read off numerically when two probes agree.
    pub fn asymptotics(&self) -> Result<Option<Asymptotics>> {
        let Some(fiber) = &self.fiber else { return Ok(None) };
        if let Some(a) = fiber.declared {
            return Ok(Some(a));
        }
        let probe = |r1: f64, r2: f64| -> Result<f64> {
            let (s1, s2) = (log_slope(&*fiber.bound, r1), log_slope(&*fiber.bound, r2));
            if s1.is_finite() && (s1 - s2).abs() <= PROBE_TOL * s1.abs().max(1.0) {
                Ok(s2)
            } else {
                Err(Error::UndeclaredAsymptotics {
                    profile: self.name.clone(),
                    detail: format!("log-slopes {s1:.4} at r={r1:e} and {s2:.4} at r={r2:e} disagree"),
                })
            }
        };
        let at_zero = if self.inner == 0.0 { probe(1e-3, 1e-6)? } else { 0.0 };
        let at_infinity = if self.outer.is_infinite() { probe(1e3, 1e6)? } else { 0.0 };
        Ok(Some(Asymptotics { at_zero, at_infinity }))
    }

    pub fn contains(&self, z: &CPoint) -> bool {
        if z.dim() != self.dim() || !z.is_finite() {
            return false;
        }
        let r1 = z[0].norm();
        let lower_ok = if self.inner > 0.0 { r1 - self.inner > BOUNDARY_MARGIN } else { true };
        let upper_ok = self.outer.is_infinite() || self.outer - r1 > BOUNDARY_MARGIN;
        if !(lower_ok && upper_ok) {
            return false;
        }
        match self.fiber_bound(r1) {
            None => true,
            Some(h) => h > 0.0 && h - z[1].norm() > BOUNDARY_MARGIN * h.max(1e-300),
        }
    }

    pub(crate) fn sample<R: Rng>(&self, rng: &mut R, depth: f64) -> CPoint {
        let hi = if self.outer.is_finite() { self.outer } else { self.inner + 3.0 };
        let lo = self.inner;
        loop {
            let r1 = lo + (hi - lo) * (0.02 + 0.98 * depth * rng.gen::<f64>());
            let z1 = Complex64::from_polar(r1, 2.0 * PI * rng.gen::<f64>());
            let p = match self.fiber_bound(r1) {
                None => CPoint::one(z1),
                Some(h) => {
                    let z2 = Complex64::from_polar(h * depth * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>());
                    CPoint::two(z1, z2)
                }
            };
            if self.contains(&p) {
                return p;
            }
        }
    }

    /// `∫ |z^α|² dV`, classified by tail exponents and evaluated by quadrature.
    pub fn monomial_norm2(&self, alpha: &[i64]) -> Result<MonomialNorm> {
        if alpha.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: alpha.len() });
        }
        let two_pi = 2.0 * PI;
        match &self.fiber {
            None => {
                let e = 2.0 * alpha[0] as f64 + 1.0;
                let mut tails = Vec::new();
                if self.inner == 0.0 {
                    tails.push(TailExponent { locus: Locus::Zero, exponent: e });
                }
                if self.outer.is_infinite() {
                    tails.push(TailExponent { locus: Locus::Infinity, exponent: e });
                }
                if tail_exponent_classify(&tails)? == Convergence::Diverges {
                    return Ok(MonomialNorm::Infinite);
                }
                let v = integrate_power_law(|r| r.powf(e), self.inner, self.outer, Some(e), Some(e));
                finite_norm(two_pi * v, alpha)
            }
            Some(fiber) => {
                let (n, m) = (alpha[0] as f64, alpha[1] as f64);
                let fiber_exp = 2.0 * m + 1.0;
                let inner_fiber = [TailExponent { locus: Locus::Zero, exponent: fiber_exp }];
                if tail_exponent_classify(&inner_fiber)? == Convergence::Diverges {
                    return Ok(MonomialNorm::Infinite);
                }
                let asym = self.asymptotics()?.expect("fibered profile");
                let e0 = 2.0 * n + 1.0 + asym.at_zero * (2.0 * m + 2.0);
                let einf = 2.0 * n + 1.0 + asym.at_infinity * (2.0 * m + 2.0);
                let mut tails = Vec::new();
                if self.inner == 0.0 {
                    tails.push(TailExponent { locus: Locus::Zero, exponent: e0 });
                }
                if self.outer.is_infinite() {
                    tails.push(TailExponent { locus: Locus::Infinity, exponent: einf });
                }
                if tail_exponent_classify(&tails)? == Convergence::Diverges {
                    return Ok(MonomialNorm::Infinite);
                }
                let h = fiber.bound.clone();
                let p = 2.0 * m + 2.0;
                // log form: r^{2n+1} and h^p separately over- and underflow near 0
                let g = move |r: f64| ((2.0 * n + 1.0) * r.ln() + p * h(r).ln()).exp() / p;
                let v = integrate_power_law(g, self.inner, self.outer, Some(e0), Some(einf));
                finite_norm(two_pi * two_pi * v, alpha)
            }
        }
    }
}

fn finite_norm(v: f64, alpha: &[i64]) -> Result<MonomialNorm> {
    if v.is_finite() && v > 0.0 {
        Ok(MonomialNorm::Finite(v))
    } else {
        Err(Error::NonFiniteValue { index: 0, value: format!("‖z^{alpha:?}‖² = {v}") })
    }
}

/// `‖z^α‖²` on a domain. Closed-form kinds are routed to their Reinhardt profile.
pub fn monomial_l2_norm2(domain: &Domain, alpha: &[i64]) -> Result<MonomialNorm> {
    let profile = match domain {
        Domain::UnitDisc => ReinhardtProfile::disc(),
        Domain::PuncturedDisc => ReinhardtProfile::annulus("punctured-disc", 0.0, 1.0)?,
        Domain::Polydisc(2) => ReinhardtProfile::bidisc(),
        Domain::UnitBall(2) => ReinhardtProfile::ball2(),
        Domain::UnitBall(1) | Domain::Polydisc(1) => ReinhardtProfile::disc(),
        Domain::HartogsTriangle => ReinhardtProfile::hartogs(),
        Domain::Reinhardt(p) => p.clone(),
        _ => return Err(Error::UnsupportedKind { domain: domain.tag(), op: "monomial_l2_norm2" }),
    };
    profile.monomial_norm2(alpha)
}

/// Partial sum of `Σ z^α w̄^α / ‖z^α‖²` over admissible multi-indices.
#[derive(Clone, Debug)]
pub struct SeriesKernel {
    pub value: Complex64,
    /// Geometric estimate of the omitted tail, in absolute terms.
    pub tail: f64,
    /// Last ℓ¹ shell summed.
    pub degree: usize,
    /// True when the truncation cap stopped the summation.
    pub cap_hit: bool,
    pub terms: usize,
}

const SERIES_REL_TOL: f64 = 1e-10;
const MIN_SHELLS: usize = 4;

fn shell(dim: usize, d: usize) -> Vec<Vec<i64>> {
    let d = d as i64;
    match dim {
        1 => {
            if d == 0 {
                vec![vec![0]]
            } else {
                vec![vec![-d], vec![d]]
            }
        }
        _ => {
            let mut out = Vec::new();
            for a in -d..=d {
                let b = d - a.abs();
                out.push(vec![a, -b]);
                if b != 0 {
                    out.push(vec![a, b]);
                }
            }
            out
        }
    }
}

fn monomial(z: &CPoint, alpha: &[i64]) -> Complex64 {
    z.coords().iter().zip(alpha).map(|(c, &k)| c.powi(k as i32)).product()
}

/// Kernel of a Reinhardt domain from its monomial basis.
///
/// Indices are visited in ℓ¹ shells `Σ|αᵢ| = d`, lexicographically within a
/// shell, so the result is bit-reproducible. Summation stops once the
/// geometric tail estimate drops below `1e-10` relative, or at `truncation`.
pub fn reinhardt_kernel(profile: &ReinhardtProfile, z: &CPoint, w: &CPoint, truncation: usize) -> Result<SeriesKernel> {
    if truncation < 1 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    for p in [z, w] {
        if !profile.contains(p) {
            return Err(Error::PointOutsideDomain { domain: format!("reinhardt:{}", profile.name), point: p.to_string() });
        }
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut prev_shell = 0.0;
    let mut prev_pair = 0.0;
    let mut ratio = f64::NAN;
    let mut tail = f64::INFINITY;
    let mut terms = 0;
    let mut degree = 0;
    for d in 0..=truncation {
        degree = d;
        let mut shell_abs = 0.0;
        for alpha in shell(profile.dim(), d) {
            let MonomialNorm::Finite(n2) = profile.monomial_norm2(&alpha)? else { continue };
            let t = monomial(z, &alpha) * monomial(w, &alpha).conj() / n2;
            if !(t.re.is_finite() && t.im.is_finite()) {
                continue;
            }
            // Neumaier step on each component
            let y = t - comp;
            let s = value + y;
            comp = (s - value) - y;
            value = s;
            shell_abs += t.norm();
            terms += 1;
        }
        // Pairs of adjacent shells: some domains only populate every other
        // shell along their slowest direction.
        let pair = shell_abs + prev_shell;
        if d >= 1 {
            let (now, before) = if d == 1 { (shell_abs, prev_shell) } else { (pair, prev_pair) };
            ratio = if before > 0.0 { now / before } else if now == 0.0 { 0.0 } else { f64::INFINITY };
            tail = if ratio < 1.0 { pair * ratio / (1.0 - ratio) } else { f64::INFINITY };
        }
        prev_shell = shell_abs;
        prev_pair = pair;
        if d >= MIN_SHELLS && tail <= SERIES_REL_TOL * value.norm() {
            return Ok(SeriesKernel { value, tail, degree, cap_hit: false, terms });
        }
    }
    if !(ratio < 1.0) {
        return Err(Error::SeriesDivergenceSuspected { degree, ratio });
    }
    Ok(SeriesKernel { value, tail, degree, cap_hit: true, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::kernel;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn boas_classification_matches_j_less_than_k() {
        let boas = ReinhardtProfile::boas();
        for j in 0..=4 {
            for k in 0..=4 {
                let finite = boas.monomial_norm2(&[j, k]).unwrap().is_finite();
                assert_eq!(finite, j < k, "(j,k)=({j},{k})");
            }
        }
    }

    #[test]
    fn boas_kernel_vanishes_at_origin() {
        let o = CPoint::two(c(0.0, 0.0), c(0.0, 0.0));
        let k = reinhardt_kernel(&ReinhardtProfile::boas(), &o, &o, 40).unwrap();
        assert_eq!(k.value, c(0.0, 0.0));
    }

    #[test]
    fn disc_norms_and_origin_kernel() {
        for n in 0..8 {
            let MonomialNorm::Finite(v) = monomial_l2_norm2(&Domain::UnitDisc, &[n]).unwrap() else { panic!() };
            assert!((v - PI / (n as f64 + 1.0)).abs() < 1e-12 * v);
        }
        assert_eq!(monomial_l2_norm2(&Domain::UnitDisc, &[-1]).unwrap(), MonomialNorm::Infinite);
        let o = CPoint::one(c(0.0, 0.0));
        for cap in [1, 5, 30] {
            let k = reinhardt_kernel(&ReinhardtProfile::disc(), &o, &o, cap).unwrap();
            assert!((k.value.re - 1.0 / PI).abs() < 1e-14);
        }
    }

    #[test]
    fn hartogs_norms_match_closed_form() {
        for (n, m) in [(-1i64, 0i64), (0, 0), (1, 0), (2, 1), (-3, 2), (4, 3)] {
            let MonomialNorm::Finite(v) = monomial_l2_norm2(&Domain::HartogsTriangle, &[n, m]).unwrap() else {
                panic!("({n},{m})")
            };
            let expected = PI * PI / ((m as f64 + 1.0) * ((n + m) as f64 + 2.0));
            assert!((v - expected).abs() < 1e-10 * expected, "({n},{m}): {v} vs {expected}");
        }
        for (n, m) in [(-2i64, 0i64), (0, -1), (-4, 2)] {
            assert_eq!(monomial_l2_norm2(&Domain::HartogsTriangle, &[n, m]).unwrap(), MonomialNorm::Infinite);
        }
    }

    #[test]
    fn hartogs_series_matches_closed_form() {
        let z = CPoint::two(c(0.5, 0.0), c(0.2, 0.0));
        let s = reinhardt_kernel(&ReinhardtProfile::hartogs(), &z, &z, 80).unwrap();
        let k = kernel(&Domain::HartogsTriangle, &z, &z).unwrap();
        assert!((s.value - k).norm() < 1e-8 * k.norm(), "{} vs {}", s.value, k);
        let w = CPoint::two(c(0.3, 0.4), c(-0.1, 0.25));
        let s = reinhardt_kernel(&ReinhardtProfile::hartogs(), &z, &w, 80).unwrap();
        let k = kernel(&Domain::HartogsTriangle, &z, &w).unwrap();
        assert!((s.value - k).norm() < 1e-8 * k.norm(), "{} vs {}", s.value, k);
    }

    #[test]
    fn bidisc_and_ball_series_match_closed_forms() {
        let z = CPoint::two(c(0.3, 0.1), c(-0.2, 0.25));
        let w = CPoint::two(c(0.1, -0.4), c(0.3, 0.0));
        for (profile, domain) in [
            (ReinhardtProfile::bidisc(), Domain::Polydisc(2)),
            (ReinhardtProfile::ball2(), Domain::UnitBall(2)),
        ] {
            let s = reinhardt_kernel(&profile, &z, &w, 80).unwrap();
            let k = kernel(&domain, &z, &w).unwrap();
            assert!((s.value - k).norm() < 1e-8 * k.norm(), "{domain}: {} vs {}", s.value, k);
            assert!(!s.cap_hit);
        }
    }

    #[test]
    fn declared_exponents_are_checked() {
        let bad = Asymptotics { at_zero: 0.0, at_infinity: -2.0 };
        assert!(ReinhardtProfile::fibered("bad", 0.0, f64::INFINITY, |r| 1.0 / (1.0 + r), Some(bad)).is_err());
    }

    #[test]
    fn exponents_probed_when_undeclared() {
        let p = ReinhardtProfile::fibered("boas-probed", 0.0, f64::INFINITY, |r| 1.0 / (1.0 + r), None).unwrap();
        let a = p.asymptotics().unwrap().unwrap();
        assert!((a.at_infinity + 1.0).abs() < 1e-3);
        assert_eq!(p.monomial_norm2(&[1, 1]).unwrap(), MonomialNorm::Infinite);
        assert!(p.monomial_norm2(&[0, 1]).unwrap().is_finite());

        // oscillating bound: slopes never settle
        let wild =
            ReinhardtProfile::fibered("wild", 0.0, f64::INFINITY, |r| 2.0 + (3.0 * r.ln()).sin(), None).unwrap();
        assert!(matches!(wild.monomial_norm2(&[0, 0]), Err(Error::UndeclaredAsymptotics { .. })));
    }

    #[test]
    fn annulus_allows_laurent_terms() {
        let a = ReinhardtProfile::annulus("ring", 0.5, 1.0).unwrap();
        let MonomialNorm::Finite(v) = a.monomial_norm2(&[-1]).unwrap() else { panic!() };
        assert!((v - 2.0 * PI * 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn divergent_series_is_reported() {
        // annulus 1 < |z| < ∞ only admits z^α with α <= -2; at |z|·|w| < 1 the
        // shells grow without bound
        let p = ReinhardtProfile::annulus("exterior", 1.0, f64::INFINITY).unwrap();
        let z = CPoint::one(c(1.5, 0.0));
        let w = CPoint::one(c(1.5, 0.0));
        assert!(reinhardt_kernel(&p, &z, &w, 60).is_ok());
        let r = reinhardt_kernel(&p, &CPoint::one(c(1.0 + 1e-9, 0.0)), &CPoint::one(c(1.0 + 1e-9, 0.0)), 30);
        assert!(matches!(r, Err(Error::SeriesDivergenceSuspected { .. })));
    }
}
