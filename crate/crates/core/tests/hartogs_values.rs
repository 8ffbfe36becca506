use std::f64::consts::PI;

use bergman::hartogs::{a_nm, f_eps_norm, HartogsBasisIndex};
use bergman::quadrature::{build_rule, build_singular_rule, integrate, integrate_real};
use bergman::domains::Domain;

#[test]
fn monomial_norms_match_coefficients() {
    let d = Domain::HartogsTriangle;
    for (n, m) in [(-1, 0), (0, 0), (2, 1)] {
        let idx = HartogsBasisIndex::new(n, m).unwrap();
        let power = 2.0 * (n + m) as f64;
        let rule = build_singular_rule(&d, 32, 4, power).unwrap();
        let got = integrate_real(&rule, |z| idx.monomial(z).norm_sqr()).unwrap();
        let want = 1.0 / a_nm(n, m).unwrap();
        assert!((got - want).abs() <= 1e-9 * want, "({n},{m}): {got} vs {want}");
    }
}

#[test]
fn basis_is_orthogonal() {
    let d = Domain::HartogsTriangle;
    let rule = build_rule(&d, 24, 16, 2.0).unwrap();
    let idx: Vec<_> = [(0, 0), (1, 0), (0, 1), (2, 1), (1, 2)]
        .iter()
        .map(|&(n, m)| HartogsBasisIndex::new(n, m).unwrap())
        .collect();
    for (i, a) in idx.iter().enumerate() {
        for b in &idx[i + 1..] {
            let ip = integrate(&rule, |z| a.monomial(z) * b.monomial(z).conj()).unwrap();
            assert!(ip.norm() < 1e-12, "{a:?} {b:?}: {ip}");
        }
    }
}

#[test]
fn inadmissible_indices_are_refused() {
    assert!(HartogsBasisIndex::new(-2, 0).is_err());
    assert!(HartogsBasisIndex::new(0, -1).is_err());
}

#[test]
fn feps_at_one_is_the_volume() {
    assert!((f_eps_norm(1.0).unwrap() - PI / 2f64.sqrt()).abs() < 1e-14);
    assert!(f_eps_norm(0.0).is_err());
    assert!(f_eps_norm(1.5).is_err());
}
