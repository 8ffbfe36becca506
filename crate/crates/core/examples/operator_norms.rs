//! Lᵖ norms of the Berezin transform and the absolute projection on the disc
//! and bidisc, with witness lower bounds and the Schur probe.

use std::f64::consts::PI;

use bergman::domains::Domain;
use bergman::opnorm::{
    estimate_norm, product_norm_check, schur_probe, sector_matrix, witness_lower_bound, SectorMesh, SectorOperator,
    WitnessFamily,
};

fn main() -> bergman::Result<()> {
    let mesh = SectorMesh::default();
    let b = sector_matrix(&Domain::UnitDisc, SectorOperator::Berezin, &mesh)?;
    for p in [1.5, 2.0, 3.0, 6.0, f64::INFINITY] {
        let est = estimate_norm(&b, p)?;
        let wit = if p.is_finite() {
            format!("{:.6}", witness_lower_bound(&b, p, &WitnessFamily::radial_sweep(p))?.value)
        } else {
            "-".into()
        };
        println!("disc B  p = {p:<4}  {:.6} ({:?}, {:?})  witness {wit}", est.value, est.method, est.bound_kind);
    }

    let (disc, bidisc) = product_norm_check(4.0, &mesh)?;
    println!("‖P⁺‖₄ on disc² = {disc:.6}, bidisc = {bidisc:.6}");

    for s in [0.5, 0.25] {
        let probe = schur_probe(s, &mesh)?;
        println!(
            "Schur s = {s}: {:.6} -> {:.6}, limit π/sin(πs) = {:.6}",
            probe.max_ratio,
            probe.refined_max_ratio,
            PI / (PI * s).sin()
        );
    }
    Ok(())
}
