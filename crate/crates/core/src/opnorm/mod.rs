//! Discretized `Lᵖ` operator norms of `B` and `P⁺`, witness lower bounds,
//! the property-BR scanner, and product and Schur-test probes.

mod estimate;
mod matrix;
mod probes;
mod scan;
mod sector;

pub use estimate::{estimate_norm, exponent, feps_witness, witness_lower_bound, BoundKind, Method, NormEstimate, WitnessFamily, SVD_LIMIT};
pub use matrix::{
    discretize_absolute_projection, discretize_berezin, discretize_berezin_rows, Entries, OperatorMatrix, Resolution,
    MAX_DENSE_NODES,
};
pub use probes::{product_norm_check, schur_probe, SchurProbe};
pub use scan::{br_infimum_profile, br_scan, ratio_path, BRScanReport, ScanGrid};
pub use sector::{resolved_rows, sector_matrix, SectorMesh, SectorOperator};
