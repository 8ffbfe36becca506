//! Product rules on the model domains: volumes, a singular weight, and a rule file.

use bergman::domains::Domain;
use bergman::hartogs::{a_nm, HartogsBasisIndex};
use bergman::quadrature::{build_rule, build_singular_rule, integrate_real, read_rule, write_rule};

fn main() -> bergman::Result<()> {
    for tag in ["disc", "ball2", "polydisc2", "hartogs"] {
        let d = Domain::from_tag(tag).expect("known tag");
        let rule = build_rule(&d, 24, 32, 2.0)?;
        println!("{tag:>10}  nodes {:>6}  Σw = {:.15}  volume = {:.15}", rule.len(), rule.sum_weights(), d.volume());
    }

    // |z₁|⁻² on the Hartogs triangle: the rule absorbs the origin singularity.
    let d = Domain::HartogsTriangle;
    let idx = HartogsBasisIndex::new(-1, 0)?;
    let rule = build_singular_rule(&d, 32, 4, -2.0)?;
    let got = integrate_real(&rule, |z| idx.monomial(z).norm_sqr())?;
    println!("‖z₁⁻¹‖² = {got:.15}  expected {:.15}", 1.0 / a_nm(-1, 0)?);

    let mut buf = Vec::new();
    write_rule(&rule, &mut buf)?;
    let back = read_rule(buf.as_slice())?;
    println!("rule file: {} bytes, {} nodes read back", buf.len(), back.len());
    Ok(())
}
