use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domains::{diagonal_unchecked, kernel_ratio, kernel_unchecked, Domain};
use crate::error::{Error, Result};
use crate::point::CPoint;

/// Sample grid for [`br_scan`]: `count` log-spaced radii per singular locus,
/// reaching within `depth` of it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub count: usize,
    pub depth: f64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid { count: 12, depth: 1e-6 }
    }
}

impl ScanGrid {
    /// Twice the radii, reaching the square of the depth.
    pub fn refined(&self) -> Self {
        ScanGrid { count: 2 * self.count, depth: self.depth * self.depth }
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 || self.count > 400 || !(self.depth > 1e-150 && self.depth < 1.0) {
            return Err(Error::InvalidResolution(format!("{self:?}")));
        }
        Ok(())
    }

    fn toward_zero(&self) -> Vec<f64> {
        (1..=self.count).map(|k| self.depth.powf(k as f64 / self.count as f64)).collect()
    }

    fn toward_one(&self) -> Vec<f64> {
        self.toward_zero().into_iter().map(|d| 1.0 - d).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResolution {
    pub domain: String,
    pub count: usize,
    pub depth: f64,
    pub refined_count: usize,
    pub refined_depth: f64,
    pub points: usize,
    pub refined_points: usize,
    /// Supremum on the unrefined grid.
    pub base_supremum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BRScanReport {
    pub supremum: f64,
    /// `[z, w]` at the supremum.
    pub argmax: [CPoint; 2],
    pub divergent: bool,
    pub resolution: ScanResolution,
}

/// Growth of the supremum under one refinement that counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 10.0;

fn phases(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect()
}

fn with_ends(mut v: Vec<f64>, extra: &[f64]) -> Vec<f64> {
    v.extend_from_slice(extra);
    v
}

fn grid_points(domain: &Domain, g: &ScanGrid) -> Result<Vec<CPoint>> {
    let to_one = g.toward_one();
    let both = with_ends(g.toward_zero(), &with_ends(to_one.clone(), &[0.5]));
    let c = Complex64::new;
    let mut pts = Vec::new();
    match domain {
        Domain::UnitDisc => {
            for r in with_ends(to_one, &[0.0, 0.5]) {
                for u in phases(8) {
                    pts.push(CPoint::one(u * r));
                }
            }
        }
        Domain::PuncturedDisc => {
            for r in &both {
                for u in phases(8) {
                    pts.push(CPoint::one(u * *r));
                }
            }
        }
        Domain::UpperHalfPlane => {
            let ys = with_ends(g.toward_zero(), &[1.0]);
            let ys: Vec<f64> = ys.iter().chain(g.toward_zero().iter().map(|y| 1.0 / y).collect::<Vec<_>>().iter()).copied().collect();
            for y in ys {
                for x in [-1.0, 0.0, 1.0] {
                    pts.push(CPoint::one(c(x, y)));
                }
            }
        }
        Domain::UnitBall(2) | Domain::Polydisc(2) | Domain::HartogsTriangle => {
            let first = if matches!(domain, Domain::HartogsTriangle) { both.clone() } else { with_ends(to_one.clone(), &[0.0, 0.5]) };
            let second = with_ends(to_one, &[0.0, 0.5]);
            let ph = phases(2);
            for a in &first {
                for t in &second {
                    for u in &ph {
                        for v in &ph {
                            let (z1, z2) = match domain {
                                Domain::UnitBall(_) => (*a, t * (1.0 - a * a).max(0.0).sqrt()),
                                Domain::Polydisc(_) => (*a, *t),
                                _ => (*a, t * a),
                            };
                            let p = CPoint::two(u * z1, v * z2);
                            if domain.contains(&p) {
                                pts.push(p);
                            }
                        }
                    }
                }
            }
        }
        _ => return Err(Error::UnsupportedKind { domain: domain.tag(), op: "BR scan" }),
    }
    pts.retain(|p| domain.contains(p));
    Ok(pts)
}

/// Largest `|K(w,z)|/K(z,z)` over all pairs, first in node order on ties.
fn scan_max(domain: &Domain, pts: &[CPoint]) -> (f64, usize, usize) {
    let per_z: Vec<(f64, usize)> = pts
        .par_iter()
        .map(|z| {
            let kzz = diagonal_unchecked(domain, z);
            let mut best = (f64::NEG_INFINITY, 0);
            for (j, w) in pts.iter().enumerate() {
                let r = kernel_unchecked(domain, w, z).norm() / kzz;
                if r > best.0 {
                    best = (r, j);
                }
            }
            best
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, 0, 0);
    for (i, (r, j)) in per_z.into_iter().enumerate() {
        if r > best.0 {
            best = (r, i, j);
        }
    }
    best
}

/// Sampled `sup |K(w,z)|/K(z,z)` on `grid` and on its refinement. The scan is
/// flagged divergent when the refinement multiplies the supremum by at least
/// [`DIVERGENCE_FACTOR`].
pub fn br_scan(domain: &Domain, grid: &ScanGrid) -> Result<BRScanReport> {
    grid.validate()?;
    let refined = grid.refined();
    let base = grid_points(domain, grid)?;
    let fine = grid_points(domain, &refined)?;
    let (s0, i0, j0) = scan_max(domain, &base);
    let (s1, i1, j1) = scan_max(domain, &fine);
    let (supremum, argmax) = if s1 >= s0 {
        (s1, [fine[i1].clone(), fine[j1].clone()])
    } else {
        (s0, [base[i0].clone(), base[j0].clone()])
    };
    Ok(BRScanReport {
        supremum,
        argmax: [argmax[0].clone(), argmax[1].clone()],
        divergent: s1 >= DIVERGENCE_FACTOR * s0,
        resolution: ScanResolution {
            domain: domain.tag(),
            count: grid.count,
            depth: grid.depth,
            refined_count: refined.count,
            refined_depth: refined.depth,
            points: base.len(),
            refined_points: fine.len(),
            base_supremum: s0,
        },
    })
}

/// `|K(w,z)|/K(z,z)` on the Hartogs triangle at `z = (δ, 0)`, `w = (ε, 0)`.
pub fn ratio_path(delta: f64, eps: f64) -> Result<f64> {
    let z = CPoint::real(&[delta, 0.0]);
    let w = CPoint::real(&[eps, 0.0]);
    kernel_ratio(&Domain::HartogsTriangle, &z, &w)
}

/// For fixed `w`, the smallest sampled ratio over `z` at distance `d` from the
/// boundary, for each `d` in `depths`.
pub fn br_infimum_profile(domain: &Domain, w: &CPoint, depths: &[f64]) -> Result<Vec<f64>> {
    domain.check(w)?;
    depths
        .iter()
        .map(|&d| {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::InvalidArgument(format!("depth {d} must lie in (0, 1)")));
            }
            let r = 1.0 - d;
            let zs: Vec<CPoint> = match domain {
                Domain::UnitDisc | Domain::PuncturedDisc => phases(16).into_iter().map(|u| CPoint::one(u * r)).collect(),
                Domain::UnitBall(2) | Domain::Polydisc(2) | Domain::HartogsTriangle => phases(16)
                    .into_iter()
                    .flat_map(|u| {
                        let mut v = vec![CPoint::two(u * r, Complex64::new(0.0, 0.0))];
                        if matches!(domain, Domain::UnitBall(_)) {
                            v.push(CPoint::two(Complex64::new(0.0, 0.0), u * r));
                            v.push(CPoint::two(u * (r / 2f64.sqrt()), u.conj() * (r / 2f64.sqrt())));
                        }
                        v
                    })
                    .collect(),
                _ => return Err(Error::UnsupportedKind { domain: domain.tag(), op: "BR infimum profile" }),
            };
            let mut m = f64::INFINITY;
            for z in zs.iter().filter(|z| domain.contains(z)) {
                m = m.min(kernel_ratio(domain, z, w)?);
            }
            Ok(m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_supremum_near_four() {
        let r = br_scan(&Domain::UnitDisc, &ScanGrid::default()).unwrap();
        assert!((3.92..=4.0).contains(&r.supremum), "{}", r.supremum);
        assert!(!r.divergent);
    }

    #[test]
    fn hartogs_diverges() {
        let r = br_scan(&Domain::HartogsTriangle, &ScanGrid::default()).unwrap();
        assert!(r.divergent);
        assert!(r.supremum > 1e3);
    }

    #[test]
    fn path_formula() {
        let (d, e) = (0.5, 1e-4);
        let v = ratio_path(d, e).unwrap();
        let f = d * (1.0 - d * d).powi(2) / (e * (1.0 - d * e).powi(2));
        assert!((v - f).abs() < 1e-10 * f);
        assert!(v >= 1e3);
    }

    #[test]
    fn infimum_decreases() {
        let w = CPoint::real(&[0.3]);
        let v = br_infimum_profile(&Domain::UnitDisc, &w, &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
        assert!(v.windows(2).all(|p| p[1] < p[0]));
        assert!(v[3] < 1e-3);
    }
}
