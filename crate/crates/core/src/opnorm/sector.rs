//! Rotation-invariant sectors of `B` and `P⁺` on the disc and bidisc.
//!
//! Both kernels are positive and commute with rotations, so their `Lᵖ` norms
//! are attained on radial functions. Averaging over the angle leaves, in the
//! variable `y = 1 − |z|²` with `dA = π dy`,
//!
//! ```text
//! B:  y²(1 + xX)/(1 − xX)³ dY        P⁺:  1/(1 − xX) dY        (x = 1 − y)
//! ```
//!
//! with `1 − xX = y + Y − yY` evaluated without cancellation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::matrix::{Entries, OperatorMatrix, Resolution};
use crate::domains::Domain;
use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::quadrature::gauss_legendre_on;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectorOperator {
    Berezin,
    AbsoluteProjection,
}

/// Gauss panels `[σ^{k+1}, σ^k]`, `k < levels`, plus `[0, σ^levels]`, in `y = 1 − r²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorMesh {
    pub levels: usize,
    pub order: usize,
    pub ratio: f64,
}

impl Default for SectorMesh {
    fn default() -> Self {
        SectorMesh { levels: 45, order: 10, ratio: 0.25 }
    }
}

impl SectorMesh {
    pub fn new(levels: usize, order: usize, ratio: f64) -> Result<Self> {
        let m = SectorMesh { levels, order, ratio };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 || self.order < 2 || !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidResolution(format!("{self:?}")));
        }
        if self.depth() < 1e-280 || (self.levels + 1) * self.order > 20_000 {
            return Err(Error::InvalidResolution(format!("{self:?} is too fine")));
        }
        Ok(())
    }

    /// `σ^levels`, the innermost panel edge.
    pub fn depth(&self) -> f64 {
        self.ratio.powi(self.levels as i32)
    }

    /// Twice the panels, reaching the square of the depth.
    pub fn refined(&self) -> Self {
        SectorMesh { levels: 2 * self.levels, ..*self }
    }

    pub fn len(&self) -> usize {
        (self.levels + 1) * self.order
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Nodes `y` and weights `dy`, with `y` decreasing.
    pub fn nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let mut ys = Vec::with_capacity(self.len());
        let mut ws = Vec::with_capacity(self.len());
        let mut hi = 1.0;
        for k in 0..=self.levels {
            let lo = if k == self.levels { 0.0 } else { hi * self.ratio };
            let (x, w) = gauss_legendre_on(self.order, lo, hi);
            for (a, b) in x.iter().zip(&w).rev() {
                ys.push(*a);
                ws.push(*b);
            }
            hi = lo;
        }
        (ys, ws)
    }

    fn resolution(&self, domain: &Domain, scheme: &str, n: usize) -> Resolution {
        Resolution {
            domain: domain.tag(),
            scheme: scheme.into(),
            rows: n,
            cols: n,
            radial_n: self.levels,
            angular_n: self.order,
            grading: self.ratio,
        }
    }
}

/// Sector kernel density with respect to `π dY`.
fn factor(op: SectorOperator, ys: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(ys.len(), ys.len(), |i, j| {
        let (y, v) = (ys[i], ys[j]);
        let s = y + v - y * v;
        match op {
            SectorOperator::Berezin => {
                let xx = (1.0 - y) * (1.0 - v);
                y * y * (1.0 + xx) / (s * s * s) / PI
            }
            SectorOperator::AbsoluteProjection => 1.0 / (s * PI),
        }
    })
}

fn radius(y: f64) -> f64 {
    (1.0 - y).max(0.0).sqrt()
}

/// The radial sector of `op` on the disc or bidisc.
pub fn sector_matrix(domain: &Domain, op: SectorOperator, mesh: &SectorMesh) -> Result<OperatorMatrix> {
    mesh.validate()?;
    let (ys, dy) = mesh.nodes();
    let w: Vec<f64> = dy.iter().map(|d| PI * d).collect();
    let a = factor(op, &ys);
    match domain {
        Domain::UnitDisc | Domain::Polydisc(1) => {
            let nodes: Vec<CPoint> = ys.iter().map(|y| CPoint::real(&[radius(*y)])).collect();
            Ok(OperatorMatrix {
                domain: domain.clone(),
                entries: Entries::Dense(a),
                resolution: mesh.resolution(domain, "radial-sector", nodes.len()),
                row_nodes: nodes.clone(),
                col_nodes: nodes,
                row_weights: Some(w.clone()),
                col_weights: w,
                factor_weights: None,
                col_rho: Some(ys),
            })
        }
        Domain::Polydisc(2) => {
            let mut nodes = Vec::with_capacity(ys.len() * ys.len());
            let mut weights = Vec::with_capacity(nodes.capacity());
            let mut rho = Vec::with_capacity(nodes.capacity());
            for (y1, w1) in ys.iter().zip(&w) {
                for (y2, w2) in ys.iter().zip(&w) {
                    nodes.push(CPoint::real(&[radius(*y1), radius(*y2)]));
                    weights.push(w1 * w2);
                    rho.push(y1 * y2);
                }
            }
            Ok(OperatorMatrix {
                domain: domain.clone(),
                entries: Entries::Kron(a.clone(), a),
                resolution: mesh.resolution(domain, "radial-sector-kron", nodes.len()),
                row_nodes: nodes.clone(),
                col_nodes: nodes,
                row_weights: Some(weights.clone()),
                col_weights: weights,
                factor_weights: Some((w.clone(), w)),
                col_rho: Some(rho),
            })
        }
        _ => Err(Error::UnsupportedKind { domain: domain.tag(), op: "radial sector discretization" }),
    }
}

/// Rows of a disc sector whose kernel mass is resolved by the mesh: `y ≥ 10⁷·depth`.
pub fn resolved_rows(m: &OperatorMatrix, mesh: &SectorMesh) -> Vec<usize> {
    let cut = 1e7 * mesh.depth();
    match (m.domain(), m.boundary_distance()) {
        (Domain::UnitDisc | Domain::Polydisc(1), Some(rho)) => (0..m.rows()).filter(|&i| rho[i] >= cut).collect(),
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_weights_sum_to_one() {
        let (y, w) = SectorMesh::default().nodes();
        assert_eq!(y.len(), 460);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(y.windows(2).all(|p| p[0] > p[1]));
    }

    #[test]
    fn berezin_rows_sum_to_one() {
        let mesh = SectorMesh::default();
        let m = sector_matrix(&Domain::UnitDisc, SectorOperator::Berezin, &mesh).unwrap();
        let out = m.apply_real(&vec![1.0; m.cols()]).unwrap();
        for i in resolved_rows(&m, &mesh) {
            assert!((out[i] - 1.0).abs() < 1e-6, "row {i}: {}", out[i]);
        }
        assert!(out.iter().all(|v| *v <= 1.0 + 1e-9));
    }

    #[test]
    fn rejects_other_domains() {
        let e = sector_matrix(&Domain::HartogsTriangle, SectorOperator::Berezin, &SectorMesh::default());
        assert!(matches!(e, Err(Error::UnsupportedKind { .. })));
    }
}
