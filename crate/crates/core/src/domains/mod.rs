//! Model domains in ℂⁿ and their Bergman kernels.
//!
//! Kernels follow the convention `K(z, w)` holomorphic in `z` and
//! antiholomorphic in `w`, with respect to unnormalized Lebesgue volume.

mod reinhardt;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::point::CPoint;

pub use reinhardt::{
    monomial_l2_norm2, reinhardt_kernel, Asymptotics, MonomialNorm, ReinhardtProfile, SeriesKernel,
};

/// Points closer than this to the boundary are rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

#[derive(Clone)]
pub enum Domain {
    UnitDisc,
    UnitBall(usize),
    Polydisc(usize),
    UpperHalfPlane,
    PuncturedDisc,
    /// `{|z₂| < |z₁| < 1}` in ℂ².
    HartogsTriangle,
    Reinhardt(ReinhardtProfile),
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::UnitDisc | Domain::UpperHalfPlane | Domain::PuncturedDisc => 1,
            Domain::UnitBall(n) | Domain::Polydisc(n) => *n,
            Domain::HartogsTriangle => 2,
            Domain::Reinhardt(p) => p.dim(),
        }
    }

    /// Short machine-readable tag, also used by the CLI and the rule file header.
    pub fn tag(&self) -> String {
        match self {
            Domain::UnitDisc => "disc".into(),
            Domain::UnitBall(n) => format!("ball{n}"),
            Domain::Polydisc(n) => format!("polydisc{n}"),
            Domain::UpperHalfPlane => "upper-half-plane".into(),
            Domain::PuncturedDisc => "punctured-disc".into(),
            Domain::HartogsTriangle => "hartogs".into(),
            Domain::Reinhardt(p) => format!("reinhardt:{}", p.name()),
        }
    }

    /// Inverse of [`Domain::tag`] for the closed-form kinds. Also accepts a few aliases.
    pub fn from_tag(tag: &str) -> Option<Domain> {
        let t = tag.trim().to_ascii_lowercase();
        let parse_n = |prefix: &str| t.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
        match t.as_str() {
            "disc" | "unit-disc" => Some(Domain::UnitDisc),
            "bidisc" => Some(Domain::Polydisc(2)),
            "ball" => Some(Domain::UnitBall(2)),
            "upper-half-plane" | "uhp" | "half-plane" => Some(Domain::UpperHalfPlane),
            "punctured-disc" => Some(Domain::PuncturedDisc),
            "hartogs" | "hartogs-triangle" => Some(Domain::HartogsTriangle),
            "boas" => Some(Domain::Reinhardt(ReinhardtProfile::boas())),
            _ => {
                if let Some(n) = parse_n("ball").filter(|&n| n >= 1) {
                    Some(Domain::UnitBall(n))
                } else {
                    parse_n("polydisc").filter(|&n| n >= 1).map(Domain::Polydisc)
                }
            }
        }
    }

    /// Strict membership with [`BOUNDARY_MARGIN`].
    ///
    /// On the Hartogs triangle the edge `|z₂| = |z₁|` is tested relative to
    /// `|z₁|`, since the kernel singularity there scales with `|z₁|`.
    pub fn contains(&self, z: &CPoint) -> bool {
        if z.dim() != self.dim() || !z.is_finite() {
            return false;
        }
        let m = BOUNDARY_MARGIN;
        match self {
            Domain::UnitDisc => 1.0 - z[0].norm() > m,
            Domain::PuncturedDisc => 1.0 - z[0].norm() > m && z[0].norm() > m,
            Domain::UnitBall(_) => 1.0 - z.norm_sqr().sqrt() > m,
            Domain::Polydisc(_) => z.coords().iter().all(|c| 1.0 - c.norm() > m),
            Domain::UpperHalfPlane => z[0].im > m,
            Domain::HartogsTriangle => {
                let (a, b) = (z[0].norm(), z[1].norm());
                a > 0.0 && 1.0 - a > m && a - b > m * a
            }
            Domain::Reinhardt(p) => p.contains(z),
        }
    }

    pub fn check(&self, z: &CPoint) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.dim() });
        }
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::PointOutsideDomain { domain: self.tag(), point: z.to_string() })
        }
    }

    /// Lebesgue volume; infinite for the half-plane.
    pub fn volume(&self) -> f64 {
        match self {
            Domain::UnitDisc | Domain::PuncturedDisc => PI,
            Domain::UnitBall(n) => PI.powi(*n as i32) / factorial(*n),
            Domain::Polydisc(n) => PI.powi(*n as i32),
            Domain::UpperHalfPlane => f64::INFINITY,
            Domain::HartogsTriangle => PI * PI / 2.0,
            Domain::Reinhardt(p) => match p.monomial_norm2(&vec![0; p.dim()]) {
                Ok(MonomialNorm::Finite(v)) => v,
                _ => f64::INFINITY,
            },
        }
    }

    pub fn has_closed_form_kernel(&self) -> bool {
        !matches!(self, Domain::Reinhardt(_))
    }

    /// Uniform-ish random interior point, kept away from the singular loci.
    ///
    /// `depth` in (0, 1) bounds how far toward the boundary samples reach:
    /// moduli stay below `depth`, and on the Hartogs triangle `|z₂/z₁| < depth`.
    pub fn sample<R: Rng>(&self, rng: &mut R, depth: f64) -> CPoint {
        let disc = |rng: &mut R, rmax: f64| {
            let r = rmax * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
        };
        match self {
            Domain::UnitDisc => CPoint::one(disc(rng, depth)),
            Domain::PuncturedDisc => loop {
                let z = disc(rng, depth);
                if z.norm() > 1e-3 {
                    break CPoint::one(z);
                }
            },
            Domain::Polydisc(n) => CPoint::new((0..*n).map(|_| disc(rng, depth))),
            Domain::UnitBall(n) => loop {
                let p = CPoint::new((0..*n).map(|_| disc(rng, depth)));
                if p.norm_sqr().sqrt() < depth {
                    break p;
                }
            },
            Domain::UpperHalfPlane => {
                let x = 4.0 * rng.gen::<f64>() - 2.0;
                let y = 0.1 + 2.9 * rng.gen::<f64>();
                CPoint::one(Complex64::new(x, y))
            }
            Domain::HartogsTriangle => {
                let r1 = 0.05 + (depth - 0.05) * rng.gen::<f64>().sqrt();
                let z1 = Complex64::from_polar(r1, 2.0 * PI * rng.gen::<f64>());
                let t = disc(rng, depth);
                CPoint::two(z1, z1 * t)
            }
            Domain::Reinhardt(p) => p.sample(rng, depth),
        }
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Closed-form kernel without membership checks. Callers guarantee both points
/// lie in the domain.
pub(crate) fn kernel_unchecked(domain: &Domain, z: &CPoint, w: &CPoint) -> Complex64 {
    match domain {
        Domain::UnitDisc | Domain::PuncturedDisc => disc_kernel(z[0], w[0]),
        Domain::Polydisc(_) => {
            z.coords().iter().zip(w.coords()).map(|(a, b)| disc_kernel(*a, *b)).product()
        }
        Domain::UnitBall(n) => {
            let inner: Complex64 = z.coords().iter().zip(w.coords()).map(|(a, b)| a * b.conj()).sum();
            let one = Complex64::new(1.0, 0.0);
            Complex64::from(factorial(*n) / PI.powi(*n as i32)) / (one - inner).powi(*n as i32 + 1)
        }
        Domain::UpperHalfPlane => {
            let d = z[0] - w[0].conj();
            -1.0 / (PI * d * d)
        }
        Domain::HartogsTriangle => {
            let a = z[0] * w[0].conj();
            let b = z[1] * w[1].conj();
            let one = Complex64::new(1.0, 0.0);
            a / (PI * PI * (a - b).powi(2) * (one - a).powi(2))
        }
        Domain::Reinhardt(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

#[inline]
fn disc_kernel(z: Complex64, w: Complex64) -> Complex64 {
    let d = Complex64::new(1.0, 0.0) - z * w.conj();
    1.0 / (PI * d * d)
}

/// `K(z, z)` evaluated with cancellation-safe factors near the boundary.
pub(crate) fn diagonal_unchecked(domain: &Domain, z: &CPoint) -> f64 {
    let disc_diag = |c: Complex64| {
        let r = c.norm();
        let d = (1.0 - r) * (1.0 + r);
        1.0 / (PI * d * d)
    };
    match domain {
        Domain::UnitDisc | Domain::PuncturedDisc => disc_diag(z[0]),
        Domain::Polydisc(_) => z.coords().iter().map(|c| disc_diag(*c)).product(),
        Domain::UnitBall(n) => {
            let r = z.norm_sqr().sqrt();
            let d = (1.0 - r) * (1.0 + r);
            factorial(*n) / (PI.powi(*n as i32) * d.powi(*n as i32 + 1))
        }
        Domain::UpperHalfPlane => {
            let y = z[0].im;
            1.0 / (4.0 * PI * y * y)
        }
        Domain::HartogsTriangle => {
            let (a, b) = (z[0].norm(), z[1].norm());
            let edge = (a - b) * (a + b);
            let outer = (1.0 - a) * (1.0 + a);
            a * a / (PI * PI * edge * edge * outer * outer)
        }
        Domain::Reinhardt(_) => f64::NAN,
    }
}

/// Bergman kernel `K(z, w)` of a closed-form domain.
pub fn kernel(domain: &Domain, z: &CPoint, w: &CPoint) -> Result<Complex64> {
    if !domain.has_closed_form_kernel() {
        return Err(Error::UnsupportedKind { domain: domain.tag(), op: "kernel (use reinhardt_kernel)" });
    }
    domain.check(z)?;
    domain.check(w)?;
    if z == w {
        return Ok(Complex64::new(diagonal_unchecked(domain, z), 0.0));
    }
    Ok(kernel_unchecked(domain, z, w))
}

/// `K(z, z)`, required to be positive.
pub fn kernel_diagonal(domain: &Domain, z: &CPoint) -> Result<f64> {
    if !domain.has_closed_form_kernel() {
        return Err(Error::UnsupportedKind { domain: domain.tag(), op: "kernel_diagonal" });
    }
    domain.check(z)?;
    positive_diagonal(domain, z)
}

pub(crate) fn positive_diagonal(domain: &Domain, z: &CPoint) -> Result<f64> {
    let d = diagonal_unchecked(domain, z);
    if d > 0.0 && d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonpositiveDiagonal { point: z.to_string(), value: d })
    }
}

/// `|K(w, z)| / K(z, z)`, the quantity whose supremum defines property BR.
pub fn kernel_ratio(domain: &Domain, z: &CPoint, w: &CPoint) -> Result<f64> {
    let kzz = kernel_diagonal(domain, z)?;
    let kwz = kernel(domain, w, z)?;
    Ok(kwz.norm() / kzz)
}

/// `w ↦ K(w, z) / √K(z, z)`, a unit vector in L².
#[derive(Clone, Debug)]
pub struct NormalizedKernel {
    domain: Domain,
    z: CPoint,
    inv_sqrt_diag: f64,
}

impl NormalizedKernel {
    pub fn center(&self) -> &CPoint {
        &self.z
    }

    pub fn at(&self, w: &CPoint) -> Complex64 {
        kernel_unchecked(&self.domain, w, &self.z) * self.inv_sqrt_diag
    }

    pub fn try_at(&self, w: &CPoint) -> Result<Complex64> {
        self.domain.check(w)?;
        Ok(self.at(w))
    }
}

pub fn normalized_kernel(domain: &Domain, z: &CPoint) -> Result<NormalizedKernel> {
    let d = kernel_diagonal(domain, z)?;
    Ok(NormalizedKernel { domain: domain.clone(), z: z.clone(), inv_sqrt_diag: 1.0 / d.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disc_kernel_at_origin() {
        let o = CPoint::one(c(0.0, 0.0));
        let k = kernel(&Domain::UnitDisc, &o, &o).unwrap();
        assert!((k.re - 1.0 / PI).abs() < 1e-15 && k.im == 0.0);
    }

    #[test]
    fn hartogs_kernel_on_real_axis() {
        let (delta, eps) = (0.3_f64, 0.7_f64);
        let z = CPoint::two(c(delta, 0.0), c(0.0, 0.0));
        let w = CPoint::two(c(eps, 0.0), c(0.0, 0.0));
        let k = kernel(&Domain::HartogsTriangle, &z, &w).unwrap();
        let ed = eps * delta;
        let expected = ed / (PI * PI * ed * ed * (1.0 - ed).powi(2));
        assert!((k.re - expected).abs() < 1e-13 * expected);
    }

    #[test]
    fn hartogs_diagonal_value() {
        // 1/(π²·0.25·0.75²), frozen from a 30-digit evaluation of the formula
        let z = CPoint::two(c(0.5, 0.0), c(0.0, 0.0));
        let d = kernel_diagonal(&Domain::HartogsTriangle, &z).unwrap();
        assert!((d - 0.720_506_194_789_957_5).abs() < 1e-15);
        let via_pair = kernel_unchecked(&Domain::HartogsTriangle, &z, &z).re;
        assert!((via_pair - d).abs() < 1e-14);
    }

    #[test]
    fn membership_rejects_boundary_points() {
        let d = Domain::UnitDisc;
        assert!(d.contains(&CPoint::one(c(0.999_999, 0.0))));
        assert!(!d.contains(&CPoint::one(c(1.0 - 1e-13, 0.0))));
        assert!(!Domain::PuncturedDisc.contains(&CPoint::one(c(0.0, 0.0))));
        let h = Domain::HartogsTriangle;
        assert!(h.contains(&CPoint::two(c(0.5, 0.0), c(0.0, 0.49))));
        assert!(!h.contains(&CPoint::two(c(0.5, 0.0), c(0.5, 0.0))));
        assert!(!h.contains(&CPoint::two(c(0.0, 0.0), c(0.0, 0.0))));
        assert!(!Domain::UpperHalfPlane.contains(&CPoint::one(c(3.0, 0.0))));
        assert!(matches!(
            kernel(&d, &CPoint::one(c(2.0, 0.0)), &CPoint::one(c(0.0, 0.0))),
            Err(Error::PointOutsideDomain { .. })
        ));
    }

    #[test]
    fn ratio_on_disc_center_is_one() {
        let o = CPoint::one(c(0.0, 0.0));
        for w in [c(0.3, 0.2), c(-0.9, 0.1), c(0.0, -0.99)] {
            let r = kernel_ratio(&Domain::UnitDisc, &o, &CPoint::one(w)).unwrap();
            assert!((r - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn disc_ratio_grid_search_approaches_bound() {
        // grid search oracle: max over |w| < 1 at fixed |z| = 0.9 is (1 + 0.9)²
        let z = CPoint::one(c(0.9, 0.0));
        let mut best: f64 = 0.0;
        for i in 0..200 {
            let r = 1.0 - 10f64.powf(-(i as f64) / 20.0);
            for k in 0..64 {
                let w = Complex64::from_polar(r, 2.0 * PI * k as f64 / 64.0);
                if let Ok(v) = kernel_ratio(&Domain::UnitDisc, &z, &CPoint::one(w)) {
                    best = best.max(v);
                }
            }
        }
        assert!(best <= 3.61 + 1e-12);
        assert!(best > 3.6099);
    }

    #[test]
    fn hermitian_symmetry_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [
            Domain::UnitDisc,
            Domain::UnitBall(2),
            Domain::UnitBall(3),
            Domain::Polydisc(2),
            Domain::UpperHalfPlane,
            Domain::PuncturedDisc,
            Domain::HartogsTriangle,
        ] {
            for _ in 0..100 {
                let z = d.sample(&mut rng, 0.9);
                let w = d.sample(&mut rng, 0.9);
                let kzw = kernel(&d, &z, &w).unwrap();
                let kwz = kernel(&d, &w, &z).unwrap();
                assert!((kzw - kwz.conj()).norm() <= 1e-12 * kzw.norm(), "{d}");
                assert!(kernel_diagonal(&d, &z).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn polydisc_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = Domain::Polydisc(2);
        for _ in 0..50 {
            let z = d.sample(&mut rng, 0.95);
            let w = d.sample(&mut rng, 0.95);
            let k = kernel(&d, &z, &w).unwrap();
            let k1 = kernel(&Domain::UnitDisc, &CPoint::one(z[0]), &CPoint::one(w[0])).unwrap();
            let k2 = kernel(&Domain::UnitDisc, &CPoint::one(z[1]), &CPoint::one(w[1])).unwrap();
            assert!((k - k1 * k2).norm() <= 1e-14 * k.norm());
        }
    }

    #[test]
    fn half_plane_ratio_formula_and_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = Domain::UpperHalfPlane;
        for _ in 0..200 {
            let z = d.sample(&mut rng, 0.9);
            let w = d.sample(&mut rng, 0.9);
            let r = kernel_ratio(&d, &z, &w).unwrap();
            let expected = 4.0 * z[0].im.powi(2) / (z[0] - w[0].conj()).norm_sqr();
            assert!((r - expected).abs() < 1e-12 * expected);
            assert!(r <= 4.0);
        }
    }

    #[test]
    fn disc_ratio_never_exceeds_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let z = Domain::UnitDisc.sample(&mut rng, 0.999);
            let w = Domain::UnitDisc.sample(&mut rng, 0.999);
            let r = kernel_ratio(&Domain::UnitDisc, &z, &w).unwrap();
            assert!(r <= (1.0 + z[0].norm()).powi(2) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn normalized_kernel_at_origin_is_constant() {
        let k = normalized_kernel(&Domain::UnitDisc, &CPoint::one(c(0.0, 0.0))).unwrap();
        for w in [c(0.1, 0.2), c(-0.7, 0.0)] {
            assert!((k.at(&CPoint::one(w)) - c(1.0 / PI.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn reinhardt_routes_to_series_engine() {
        let d = Domain::Reinhardt(ReinhardtProfile::boas());
        let o = CPoint::two(c(0.0, 0.0), c(0.0, 0.0));
        assert!(matches!(kernel(&d, &o, &o), Err(Error::UnsupportedKind { .. })));
    }

    #[test]
    fn tags_round_trip() {
        for d in [
            Domain::UnitDisc,
            Domain::UnitBall(2),
            Domain::Polydisc(3),
            Domain::UpperHalfPlane,
            Domain::PuncturedDisc,
            Domain::HartogsTriangle,
        ] {
            assert_eq!(Domain::from_tag(&d.tag()).unwrap().tag(), d.tag());
        }
        assert!(Domain::from_tag("torus").is_none());
    }
}
