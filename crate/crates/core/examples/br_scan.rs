//! Scans sup |K(w,z)|/K(z,z) on each domain; only the Hartogs triangle blows up.

use bergman::domains::Domain;
use bergman::opnorm::{br_infimum_profile, br_scan, ratio_path, ScanGrid};
use bergman::CPoint;

fn main() -> bergman::Result<()> {
    let grid = ScanGrid::default();
    for tag in ["disc", "punctured-disc", "upper-half-plane", "ball2", "polydisc2", "hartogs"] {
        let d = Domain::from_tag(tag).expect("known tag");
        let r = br_scan(&d, &grid)?;
        println!(
            "{tag:>16}  sup {:>12.6e}  base {:>12.6e}  divergent {}",
            r.supremum, r.resolution.base_supremum, r.divergent
        );
    }

    for delta in [1e-2, 1e-4, 1e-6] {
        println!("ratio along (δ,0), w = (0.5,0): δ = {delta:.0e}  {:.6e}", ratio_path(delta, 0.5)?);
    }

    let w = CPoint::real(&[0.5, 0.0]);
    let depths = [1e-2, 1e-4, 1e-6];
    let inf = br_infimum_profile(&Domain::HartogsTriangle, &w, &depths)?;
    println!("infimum profile at w = (0.5,0): {inf:?}");
    Ok(())
}
