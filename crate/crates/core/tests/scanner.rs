use bergman::domains::{kernel_ratio, Domain};
use bergman::opnorm::{br_scan, ScanGrid};

#[test]
fn scan_supremum_is_attained_at_argmax() {
    for tag in ["disc", "punctured-disc", "upper-half-plane", "ball2", "polydisc2", "hartogs"] {
        let d = Domain::from_tag(tag).unwrap();
        let r = br_scan(&d, &ScanGrid::default()).unwrap();
        let [z, w] = &r.argmax;
        let at = kernel_ratio(&d, z, w).unwrap();
        assert!((at - r.supremum).abs() <= 1e-12 * r.supremum, "{tag}: {at} vs {}", r.supremum);
    }
}

#[test]
fn scan_flags_only_the_hartogs_triangle() {
    for tag in ["disc", "punctured-disc", "upper-half-plane", "ball2", "polydisc2", "hartogs"] {
        let d = Domain::from_tag(tag).unwrap();
        let r = br_scan(&d, &ScanGrid::default()).unwrap();
        assert_eq!(r.divergent, tag == "hartogs", "{tag}: {r:?}");
    }
}

#[test]
fn disc_scan_stays_below_four() {
    let r = br_scan(&Domain::UnitDisc, &ScanGrid::default()).unwrap();
    assert!(r.supremum <= 4.0 && r.supremum > 3.9);
}
