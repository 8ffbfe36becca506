//! Berezin transforms of a few symbols, and the singular f_eps family.

use bergman::berezin::{berezin, OperatorSymbol};
use bergman::domains::Domain;
use bergman::hartogs::{berezin_feps, berezin_origin_power, f_eps_symbol};
use bergman::quadrature::{build_rule, build_singular_rule};
use bergman::CPoint;
use num_complex::Complex64;

fn main() -> bergman::Result<()> {
    let d = Domain::UnitDisc;
    let rule = build_rule(&d, 48, 96, 2.0)?;
    let symbols = [
        OperatorSymbol::one(),
        OperatorSymbol::modulus_squared(),
        OperatorSymbol::bump(Complex64::new(0.2, 0.0), 0.3),
    ];
    for r in [0.0, 0.5, 0.9] {
        let z = CPoint::real(&[r]);
        for s in &symbols {
            println!("disc  z = {r:.1}  B[{}] = {:.12}", s.name(), berezin(&d, s, &z, &rule)?.re);
        }
    }

    // Closed form against quadrature on the Hartogs triangle.
    let d = Domain::HartogsTriangle;
    let z = CPoint::real(&[0.4, 0.1]);
    for eps in [0.5, 0.1, 0.02] {
        let rule = build_singular_rule(&d, 32, 48, berezin_origin_power(eps))?;
        let quad = berezin(&d, &f_eps_symbol(eps)?, &z, &rule)?.re;
        println!("hartogs  eps = {eps:<5}  series {:.12}  quadrature {quad:.12}", berezin_feps(eps, &z)?);
    }
    Ok(())
}
