use bergman::domains::Domain;
use bergman::hartogs::{blowup_table, BlowupTable, BLOWUP_CSV_HEADER};
use bergman::opnorm::{br_scan, estimate_norm, sector_matrix, BRScanReport, NormEstimate, ScanGrid, SectorMesh, SectorOperator};
use bergman::quadrature::{build_rule, read_rule, write_rule};

#[test]
fn norm_estimate_round_trips() {
    let m = sector_matrix(&Domain::UnitDisc, SectorOperator::Berezin, &SectorMesh::new(16, 6, 0.25).unwrap()).unwrap();
    for p in [2.0, 3.0, f64::INFINITY] {
        let e = estimate_norm(&m, p).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        let back: NormEstimate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
    }
    let e = estimate_norm(&m, f64::INFINITY).unwrap();
    assert!(serde_json::to_string(&e).unwrap().contains("\"p\":\"inf\""));
}

#[test]
fn scan_report_round_trips() {
    let r = br_scan(&Domain::UnitDisc, &ScanGrid::default()).unwrap();
    let back: BRScanReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn blowup_table_formats() {
    let t = blowup_table(&[1e-1, 1e-2]).unwrap();
    let csv = t.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(BLOWUP_CSV_HEADER));
    assert_eq!(lines.count(), 2);
    let back: BlowupTable = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);
}

#[test]
fn rule_file_round_trips() {
    let rule = build_rule(&Domain::UnitBall(2), 6, 8, 2.0).unwrap();
    let mut buf = Vec::new();
    write_rule(&rule, &mut buf).unwrap();
    let back = read_rule(buf.as_slice()).unwrap();
    assert_eq!(back.len(), rule.len());
    assert_eq!(back.meta(), rule.meta());
    for i in 0..rule.len() {
        assert_eq!(back.node(i), rule.node(i));
    }
    assert!(read_rule(&b"XXXX"[..]).is_err());
}
