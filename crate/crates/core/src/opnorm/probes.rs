use serde::{Deserialize, Serialize};

use super::estimate::estimate_norm;
use super::matrix::Resolution;
use super::sector::{resolved_rows, sector_matrix, SectorMesh, SectorOperator};
use crate::domains::Domain;
use crate::error::{Error, Result};

/// `(‖P⁺_{𝔻×𝔻}‖_p, ‖P⁺_𝔻‖_p²)`.
///
/// The disc norm comes from `mesh`, the bidisc norm from a Kronecker product
/// of a second mesh with two more Gauss points per panel, so the two sides
/// share no nodes.
pub fn product_norm_check(p: f64, mesh: &SectorMesh) -> Result<(f64, f64)> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("p = {p} must lie in (1, ∞)")));
    }
    let disc = sector_matrix(&Domain::UnitDisc, SectorOperator::AbsoluteProjection, mesh)?;
    let d = estimate_norm(&disc, p)?.value;
    let other = SectorMesh { order: mesh.order + 2, ..*mesh };
    let bidisc = sector_matrix(&Domain::Polydisc(2), SectorOperator::AbsoluteProjection, &other)?;
    let b = estimate_norm(&bidisc, p)?.value;
    Ok((b, d * d))
}

/// Schur-test probe `sup P⁺ρ^{−s} / ρ^{−s}` on the disc, at a mesh and its refinement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurProbe {
    pub s: f64,
    pub max_ratio: f64,
    pub refined_max_ratio: f64,
    /// `refined_max_ratio / max_ratio − 1`
    pub growth: f64,
    pub resolution: Resolution,
}

fn schur_max(s: f64, mesh: &SectorMesh) -> Result<f64> {
    let m = sector_matrix(&Domain::UnitDisc, SectorOperator::AbsoluteProjection, mesh)?;
    let rho = m.boundary_distance().expect("sector meshes record ρ");
    let h: Vec<f64> = rho.iter().map(|r| r.powf(-s)).collect();
    let ph = m.apply_real(&h)?;
    let v = resolved_rows(&m, mesh).into_iter().map(|i| ph[i] / h[i]).fold(f64::NEG_INFINITY, f64::max);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidResolution(format!("{mesh:?} has no resolved rows")))
    }
}

/// For `0 < s < 1` the ratio tends to `π/sin(πs)` at the boundary.
pub fn schur_probe(s: f64, mesh: &SectorMesh) -> Result<SchurProbe> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!("Schur exponent {s} must lie in (0, 1)")));
    }
    let refined = mesh.refined();
    let max_ratio = schur_max(s, mesh)?;
    let refined_max_ratio = schur_max(s, &refined)?;
    let n = refined.len();
    Ok(SchurProbe {
        s,
        max_ratio,
        refined_max_ratio,
        growth: refined_max_ratio / max_ratio - 1.0,
        resolution: Resolution {
            domain: Domain::UnitDisc.tag(),
            scheme: "radial-sector".into(),
            rows: n,
            cols: n,
            radial_n: refined.levels,
            angular_n: refined.order,
            grading: refined.ratio,
        },
    })
}
