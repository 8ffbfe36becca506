use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauss::{gauss_jacobi, gauss_legendre};
use super::sum::{Neumaier, NeumaierComplex};
use crate::domains::{Domain, BOUNDARY_MARGIN};
use crate::error::{Error, Result};
use crate::point::CPoint;

/// Nodes evaluated per parallel block before the sequential reduction.
const BLOCK: usize = 1 << 14;

/// Grading used toward outer boundaries on the Hartogs triangle.
const OUTER_GRADING: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleMeta {
    pub domain: String,
    pub radial_n: usize,
    pub angular_n: usize,
    pub grading: f64,
    /// Exponent γ of the integrand class `|z₁|^γ` absorbed by a Gauss–Jacobi
    /// panel at the origin, if any.
    pub origin_power: Option<f64>,
}

#[derive(Clone, Debug)]
struct Axis {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Axis {
    fn concat(mut self, other: Axis) -> Axis {
        self.x.extend(other.x);
        self.w.extend(other.w);
        self
    }

    fn len(&self) -> usize {
        self.x.len()
    }

    fn sum(&self) -> f64 {
        self.w.iter().sum()
    }
}

#[derive(Clone, Debug)]
struct Angles {
    phase: Vec<Complex64>,
    w: f64,
}

impl Angles {
    fn uniform(n: usize) -> Angles {
        let h = 2.0 * PI / n as f64;
        Angles { phase: (0..n).map(|k| Complex64::from_polar(1.0, h * k as f64)).collect(), w: h }
    }
}

#[derive(Clone, Debug)]
enum Layout {
    /// `z = r e^{iθ}`; with `cayley` the point is mapped to the upper half-plane.
    Disc { r: Axis, th: Angles, cayley: bool },
    Polydisc { r: Axis, th: Angles, n: usize },
    /// `z = ρ (cos φ e^{iθ₁}, sin φ e^{iθ₂})`
    Ball2 { rho: Axis, phi: Axis, th: Angles },
    /// `z₁ = r e^{iθ₁}`, `z₂ = z₁ s e^{iθ₂}`
    Hartogs { r: Axis, s: Axis, th: Angles },
    Explicit { nodes: Vec<CPoint>, weights: Vec<f64> },
}

/// Tensor-product rule over a model domain, or an explicit node list.
///
/// Tensor nodes are generated on demand from their factors, so large rules
/// (e.g. 64⁴ nodes on the Hartogs triangle) never materialize.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    domain: Domain,
    meta: RuleMeta,
    layout: Layout,
}

/// `x ∈ (0,1) ↦ 1 - (1-x)^g` on Gauss–Legendre nodes; clusters toward 1.
fn graded_to_one(n: usize, g: f64, lo: f64, hi: f64) -> Axis {
    let (t, w) = gauss_legendre(n);
    let mut ax = Axis { x: Vec::with_capacity(n), w: Vec::with_capacity(n) };
    for (t, w) in t.iter().zip(&w) {
        let v = 0.5 * (1.0 - t);
        ax.x.push(hi - (hi - lo) * v.powf(g));
        ax.w.push(0.5 * w * (hi - lo) * g * v.powf(g - 1.0));
    }
    ax
}

/// `x ↦ lo + (hi-lo) u^g`; clusters toward `lo`.
fn graded_to_zero(n: usize, g: f64, lo: f64, hi: f64) -> Axis {
    let (t, w) = gauss_legendre(n);
    let mut ax = Axis { x: Vec::with_capacity(n), w: Vec::with_capacity(n) };
    for (t, w) in t.iter().zip(&w) {
        let u = 0.5 * (t + 1.0);
        ax.x.push(lo + (hi - lo) * u.powf(g));
        ax.w.push(0.5 * w * (hi - lo) * g * u.powf(g - 1.0));
    }
    ax
}

fn times_power(mut ax: Axis, k: i32) -> Axis {
    for (x, w) in ax.x.iter().zip(ax.w.iter_mut()) {
        *w *= x.powi(k);
    }
    ax
}

/// Radial rule on `(0, 1)` for `r dr`, graded toward the boundary.
fn disc_radial(n: usize, g: f64) -> Axis {
    times_power(graded_to_one(n, g, 0.0, 1.0), 1)
}

fn check_resolution(radial_n: usize, angular_n: usize, grading: f64) -> Result<()> {
    if radial_n < 4 || angular_n < 4 {
        return Err(Error::InvalidResolution(format!(
            "radial_n = {radial_n} and angular_n = {angular_n} must both be at least 4"
        )));
    }
    if !(grading >= 1.0) || !grading.is_finite() {
        return Err(Error::InvalidResolution(format!("grading {grading} must be a finite number >= 1")));
    }
    Ok(())
}

fn outer_r_axis(n: usize) -> Axis {
    graded_to_one(n, OUTER_GRADING, 0.5, 1.0)
}

fn hartogs_s_axis(n: usize) -> Axis {
    times_power(graded_to_one(n, OUTER_GRADING, 0.0, 1.0), 1)
}

/// Tensor rule over `domain` with `radial_n` Gauss nodes per radial factor and
/// `angular_n` uniform nodes per angle.
///
/// `grading` clusters radial nodes toward the singular loci: the boundary on
/// the disc, ball, polydisc and half-plane (through the Cayley map); the
/// origin on the punctured disc and on the Hartogs triangle, where the
/// outer loci `|z₁| = 1` and `|z₂| = |z₁|` get grading 2.
pub fn build_rule(domain: &Domain, radial_n: usize, angular_n: usize, grading: f64) -> Result<QuadratureRule> {
    check_resolution(radial_n, angular_n, grading)?;
    let th = Angles::uniform(angular_n);
    let layout = match domain {
        Domain::UnitDisc | Domain::UnitBall(1) | Domain::Polydisc(1) => {
            Layout::Disc { r: disc_radial(radial_n, grading), th, cayley: false }
        }
        Domain::UpperHalfPlane => Layout::Disc { r: disc_radial(radial_n, grading), th, cayley: true },
        Domain::PuncturedDisc => {
            let inner = graded_to_zero(radial_n - radial_n / 2, grading, 0.0, 0.5);
            let outer = graded_to_one(radial_n / 2, grading, 0.5, 1.0);
            Layout::Disc { r: times_power(inner.concat(outer), 1), th, cayley: false }
        }
        Domain::Polydisc(n) => Layout::Polydisc { r: disc_radial(radial_n, grading), th, n: *n },
        Domain::UnitBall(2) => {
            let rho = times_power(graded_to_one(radial_n, grading, 0.0, 1.0), 3);
            let (t, w) = gauss_legendre(radial_n);
            let mut phi = Axis { x: Vec::new(), w: Vec::new() };
            for (t, w) in t.iter().zip(&w) {
                let p = PI / 4.0 * (t + 1.0);
                phi.x.push(p);
                phi.w.push(PI / 4.0 * w * p.cos() * p.sin());
            }
            Layout::Ball2 { rho, phi, th }
        }
        Domain::HartogsTriangle => {
            let inner = graded_to_zero(radial_n - radial_n / 2, grading, 0.0, 0.5);
            let r = times_power(inner.concat(outer_r_axis(radial_n / 2)), 3);
            Layout::Hartogs { r, s: hartogs_s_axis(radial_n), th }
        }
        _ => return Err(Error::UnsupportedKind { domain: domain.tag(), op: "build_rule" }),
    };
    let meta = RuleMeta { domain: domain.tag(), radial_n, angular_n, grading, origin_power: None };
    let rule = QuadratureRule { domain: domain.clone(), meta, layout };
    rule.check_extreme_nodes()?;
    Ok(rule)
}

/// Hartogs rule whose inner `|z₁|` panel is Gauss–Jacobi for integrands that
/// behave like `|z₁|^γ · (smooth)` at the origin, `γ > -4`.
///
/// Power grading cannot reach the scales such integrands need when γ is
/// close to -4: the relevant mass sits at `|z₁| ≈ 1e-200` and beyond, where
/// function values overflow. The Jacobi weight absorbs the singular factor
/// exactly, and all nodes stay at moderate radii.
pub fn build_singular_rule(domain: &Domain, radial_n: usize, angular_n: usize, origin_power: f64) -> Result<QuadratureRule> {
    check_resolution(radial_n, angular_n, 1.0)?;
    if !matches!(domain, Domain::HartogsTriangle) {
        return Err(Error::UnsupportedKind { domain: domain.tag(), op: "build_singular_rule" });
    }
    // dV contributes |z₁|³ d|z₁|; the Jacobi exponent is γ + 3
    let beta = origin_power + 3.0;
    if !(beta > -1.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("origin power {origin_power} is not integrable (need > -4)")));
    }
    let n_in = radial_n - radial_n / 2;
    let (x, w) = gauss_jacobi(n_in, 0.0, beta);
    let scale = 0.25f64.powf(beta + 1.0);
    let mut inner = Axis { x: Vec::with_capacity(n_in), w: Vec::with_capacity(n_in) };
    for (x, w) in x.iter().zip(&w) {
        let r = 0.25 * (1.0 + x);
        inner.x.push(r);
        // w·scale integrates r^β dr; convert to r³ dr
        inner.w.push(w * scale * r.powf(3.0 - beta));
    }
    let r = inner.concat(times_power(outer_r_axis(radial_n / 2), 3));
    let layout = Layout::Hartogs { r, s: hartogs_s_axis(radial_n), th: Angles::uniform(angular_n) };
    let meta = RuleMeta {
        domain: domain.tag(),
        radial_n,
        angular_n,
        grading: 1.0,
        origin_power: Some(origin_power),
    };
    let rule = QuadratureRule { domain: domain.clone(), meta, layout };
    rule.check_extreme_nodes()?;
    Ok(rule)
}

impl QuadratureRule {
    /// Rule from explicit nodes and weights, as read back from a rule file.
    pub fn explicit(domain: &Domain, meta: RuleMeta, nodes: Vec<CPoint>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: nodes.len(), got: weights.len() });
        }
        for (i, (z, w)) in nodes.iter().zip(&weights).enumerate() {
            if !(*w > 0.0 && w.is_finite()) {
                return Err(Error::Format(format!("weight {w} at node {i} is not positive")));
            }
            domain.check(z)?;
        }
        Ok(QuadratureRule { domain: domain.clone(), meta, layout: Layout::Explicit { nodes, weights } })
    }

    /// A one-node rule; handy for degenerate discretizations.
    pub fn single(domain: &Domain, z: CPoint, weight: f64) -> Result<Self> {
        let meta = RuleMeta { domain: domain.tag(), radial_n: 1, angular_n: 1, grading: 1.0, origin_power: None };
        Self::explicit(domain, meta, vec![z], vec![weight])
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn meta(&self) -> &RuleMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        match &self.layout {
            Layout::Disc { r, th, .. } => r.len() * th.phase.len(),
            Layout::Polydisc { r, th, n } => (r.len() * th.phase.len()).pow(*n as u32),
            Layout::Ball2 { rho, phi, th } => rho.len() * phi.len() * th.phase.len().pow(2),
            Layout::Hartogs { r, s, th } => r.len() * s.len() * th.phase.len().pow(2),
            Layout::Explicit { nodes, .. } => nodes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `i` and its weight. Tensor indices run with the last factor fastest.
    pub fn node(&self, i: usize) -> (CPoint, f64) {
        match &self.layout {
            Layout::Disc { r, th, cayley } => {
                let na = th.phase.len();
                let (ir, ia) = (i / na, i % na);
                let zeta = th.phase[ia] * r.x[ir];
                let w = r.w[ir] * th.w;
                if *cayley {
                    let one = Complex64::new(1.0, 0.0);
                    let d = one - zeta;
                    let z = Complex64::i() * (one + zeta) / d;
                    (CPoint::one(z), w * 4.0 / d.norm_sqr().powi(2))
                } else {
                    (CPoint::one(zeta), w)
                }
            }
            Layout::Polydisc { r, th, n } => {
                let na = th.phase.len();
                let per = r.len() * na;
                let mut rest = i;
                let mut digits = [0usize; 8];
                for k in (0..*n).rev() {
                    digits[k] = rest % per;
                    rest /= per;
                }
                let mut w = 1.0;
                let z = CPoint::new((0..*n).map(|k| {
                    let (ir, ia) = (digits[k] / na, digits[k] % na);
                    w *= r.w[ir] * th.w;
                    th.phase[ia] * r.x[ir]
                }));
                (z, w)
            }
            Layout::Ball2 { rho, phi, th } => {
                let na = th.phase.len();
                let i2 = i % na;
                let i1 = (i / na) % na;
                let ip = (i / (na * na)) % phi.len();
                let ir = i / (na * na * phi.len());
                let (p, rr) = (phi.x[ip], rho.x[ir]);
                let z = CPoint::two(th.phase[i1] * (rr * p.cos()), th.phase[i2] * (rr * p.sin()));
                (z, rho.w[ir] * phi.w[ip] * th.w * th.w)
            }
            Layout::Hartogs { r, s, th } => {
                let na = th.phase.len();
                let i2 = i % na;
                let is = (i / na) % s.len();
                let i1 = (i / (na * s.len())) % na;
                let ir = i / (na * na * s.len());
                let z1 = th.phase[i1] * r.x[ir];
                let z2 = z1 * th.phase[i2] * s.x[is];
                (CPoint::two(z1, z2), r.w[ir] * s.w[is] * th.w * th.w)
            }
            Layout::Explicit { nodes, weights } => (nodes[i].clone(), weights[i]),
        }
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.node(i).1
    }

    pub fn iter(&self) -> impl Iterator<Item = (CPoint, f64)> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }

    /// `Σ wⱼ`, summed in node order.
    pub fn sum_weights(&self) -> f64 {
        match &self.layout {
            // the tensor sum factorizes; node order gives the same value to rounding
            Layout::Disc { r, th, cayley: false } => r.sum() * th.w * th.phase.len() as f64,
            Layout::Polydisc { r, th, n } => (r.sum() * th.w * th.phase.len() as f64).powi(*n as i32),
            Layout::Ball2 { rho, phi, th } => rho.sum() * phi.sum() * (th.w * th.phase.len() as f64).powi(2),
            Layout::Hartogs { r, s, th } => r.sum() * s.sum() * (th.w * th.phase.len() as f64).powi(2),
            _ => {
                let mut acc = Neumaier::new();
                for i in 0..self.len() {
                    acc.add(self.weight(i));
                }
                acc.value()
            }
        }
    }

    /// The grid of distinct `|z₁|` values of a tensor rule (first radial factor).
    pub fn radial_nodes(&self) -> Option<&[f64]> {
        match &self.layout {
            Layout::Disc { r, .. } | Layout::Polydisc { r, .. } | Layout::Hartogs { r, .. } => Some(&r.x),
            Layout::Ball2 { rho, .. } => Some(&rho.x),
            Layout::Explicit { .. } => None,
        }
    }

    fn check_extreme_nodes(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidResolution(format!("{what}: grading pushes nodes onto the boundary")));
        let m = BOUNDARY_MARGIN;
        match &self.layout {
            Layout::Disc { r, cayley, .. } => {
                let last = *r.x.last().unwrap();
                if 1.0 - last <= m || (*cayley && (1.0 - last) < 1e-7) {
                    return bad(&self.meta.domain);
                }
                if matches!(self.domain, Domain::PuncturedDisc) && r.x[0] <= m {
                    return bad(&self.meta.domain);
                }
            }
            Layout::Polydisc { r, .. } => {
                if 1.0 - r.x.last().unwrap() <= m {
                    return bad(&self.meta.domain);
                }
            }
            Layout::Ball2 { rho, .. } => {
                if 1.0 - rho.x.last().unwrap() <= m {
                    return bad(&self.meta.domain);
                }
            }
            Layout::Hartogs { r, s, .. } => {
                if r.x[0] <= 0.0 || 1.0 - r.x.last().unwrap() <= m || 1.0 - s.x.last().unwrap() <= m {
                    return bad(&self.meta.domain);
                }
            }
            Layout::Explicit { .. } => {}
        }
        Ok(())
    }
}

fn block_sum<T, E, A>(n: usize, eval: E, mut sink: A) -> Result<()>
where
    T: Send,
    E: Fn(usize) -> Result<T> + Sync,
    A: FnMut(T),
{
    let mut buf: Vec<Result<T>> = Vec::with_capacity(BLOCK.min(n));
    let mut start = 0;
    while start < n {
        let end = (start + BLOCK).min(n);
        buf.clear();
        (start..end).into_par_iter().map(&eval).collect_into_vec(&mut buf);
        for v in buf.drain(..) {
            sink(v?);
        }
        start = end;
    }
    Ok(())
}

/// `Σ wⱼ f(zⱼ)`, with parallel node evaluation and a sequential compensated
/// sum in node order. Bit-reproducible regardless of thread count.
pub fn integrate<F>(rule: &QuadratureRule, f: F) -> Result<Complex64>
where
    F: Fn(&CPoint) -> Complex64 + Sync,
{
    let eval = |i: usize| {
        let (z, w) = rule.node(i);
        let v = f(&z);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v * w)
        } else {
            Err(Error::NonFiniteValue { index: i, value: v.to_string() })
        }
    };
    let mut acc = NeumaierComplex::new();
    block_sum(rule.len(), eval, |v| acc.add(v))?;
    Ok(acc.value())
}

/// Real-valued variant of [`integrate`].
pub fn integrate_real<F>(rule: &QuadratureRule, f: F) -> Result<f64>
where
    F: Fn(&CPoint) -> f64 + Sync,
{
    let eval = |i: usize| {
        let (z, w) = rule.node(i);
        let v = f(&z);
        if v.is_finite() {
            Ok(v * w)
        } else {
            Err(Error::NonFiniteValue { index: i, value: v.to_string() })
        }
    };
    let mut acc = Neumaier::new();
    block_sum(rule.len(), eval, |v| acc.add(v))?;
    Ok(acc.value())
}

/// Values sampled at the nodes of a rule.
#[derive(Clone, Debug)]
pub struct GridFunction<'a> {
    rule: &'a QuadratureRule,
    values: Vec<Complex64>,
}

impl<'a> GridFunction<'a> {
    pub fn sample<F>(rule: &'a QuadratureRule, f: F) -> Result<Self>
    where
        F: Fn(&CPoint) -> Complex64 + Sync,
    {
        let values: Vec<Complex64> = (0..rule.len()).into_par_iter().map(|i| f(&rule.node(i).0)).collect();
        Self::from_values(rule, values)
    }

    pub fn from_values(rule: &'a QuadratureRule, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != rule.len() {
            return Err(Error::DimensionMismatch { expected: rule.len(), got: values.len() });
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFiniteValue { index: i, value: v.to_string() });
        }
        Ok(GridFunction { rule, values })
    }

    pub fn rule(&self) -> &QuadratureRule {
        self.rule
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn integrate(&self) -> Complex64 {
        let mut acc = NeumaierComplex::new();
        for (i, v) in self.values.iter().enumerate() {
            acc.add(v * self.rule.weight(i));
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        let disc = build_rule(&Domain::UnitDisc, 64, 64, 2.0).unwrap();
        assert!((disc.sum_weights() - PI).abs() < 1e-10);
        let h = build_rule(&Domain::HartogsTriangle, 64, 64, 3.0).unwrap();
        assert!((h.sum_weights() - PI * PI / 2.0).abs() < 1e-6);
        let bi = build_rule(&Domain::Polydisc(2), 32, 32, 2.0).unwrap();
        assert!((bi.sum_weights() - PI * PI).abs() < 1e-8);
        let ball = build_rule(&Domain::UnitBall(2), 24, 8, 2.0).unwrap();
        assert!((ball.sum_weights() - PI * PI / 2.0).abs() < 1e-12);
        let pd = build_rule(&Domain::PuncturedDisc, 32, 8, 2.0).unwrap();
        assert!((pd.sum_weights() - PI).abs() < 1e-12);
    }

    #[test]
    fn factorized_sum_matches_node_order_sum() {
        let h = build_rule(&Domain::HartogsTriangle, 8, 6, 3.0).unwrap();
        let direct = integrate_real(&h, |_| 1.0).unwrap();
        assert!((direct - h.sum_weights()).abs() < 1e-14);
        let bi = build_rule(&Domain::Polydisc(2), 6, 5, 2.0).unwrap();
        let direct = integrate_real(&bi, |_| 1.0).unwrap();
        assert!((direct - bi.sum_weights()).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_resolution() {
        assert!(matches!(build_rule(&Domain::UnitDisc, 3, 8, 2.0), Err(Error::InvalidResolution(_))));
        assert!(matches!(build_rule(&Domain::UnitDisc, 8, 8, 0.5), Err(Error::InvalidResolution(_))));
    }

    #[test]
    fn nodes_are_interior() {
        for d in [Domain::UnitDisc, Domain::HartogsTriangle, Domain::UnitBall(2), Domain::Polydisc(2), Domain::UpperHalfPlane] {
            let rule = build_rule(&d, 8, 6, 3.0).unwrap();
            for (z, w) in rule.iter() {
                assert!(d.contains(&z) && w > 0.0, "{d} {z}");
            }
        }
    }

    #[test]
    fn nonfinite_values_are_reported() {
        let rule = build_rule(&Domain::UnitDisc, 8, 8, 1.0).unwrap();
        let r = integrate(&rule, |z| if z[0].re > 0.5 { Complex64::new(f64::NAN, 0.0) } else { Complex64::new(1.0, 0.0) });
        assert!(matches!(r, Err(Error::NonFiniteValue { .. })));
    }
}
