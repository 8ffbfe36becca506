//! Monomial norms and series kernels of Reinhardt domains.

use bergman::domains::{kernel, reinhardt_kernel, Domain, MonomialNorm, ReinhardtProfile};
use bergman::CPoint;

fn main() -> bergman::Result<()> {
    // Which z₁ʲz₂ᵏ are square integrable on the Boas domain.
    let boas = ReinhardtProfile::boas();
    println!("Boas domain, L² monomials (rows j, columns k):");
    for j in 0..=4i64 {
        let row: String = (0..=4i64)
            .map(|k| match boas.monomial_norm2(&[j, k]) {
                Ok(MonomialNorm::Finite(_)) => " ✓",
                Ok(MonomialNorm::Infinite) => " ·",
                Err(_) => " ?",
            })
            .collect();
        println!("  j = {j}:{row}");
    }

    // Series against closed form.
    let z = CPoint::real(&[0.4, 0.1]);
    let w = CPoint::real(&[0.3, -0.05]);
    for (profile, tag) in [(ReinhardtProfile::ball2(), "ball2"), (ReinhardtProfile::hartogs(), "hartogs")] {
        let s = reinhardt_kernel(&profile, &z, &w, 200)?;
        let exact = kernel(&Domain::from_tag(tag).expect("known tag"), &z, &w)?;
        println!(
            "{tag:>8}  series {:.12}  closed {:.12}  degree {}  terms {}",
            s.value.re, exact.re, s.degree, s.terms
        );
    }
    Ok(())
}
