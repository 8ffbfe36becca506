//! Closed-form Bergman kernels on the model domains.

use bergman::domains::{kernel, kernel_diagonal, kernel_ratio, Domain};
use bergman::point::parse_point;

fn main() -> bergman::Result<()> {
    let cases = [
        ("disc", "0.3+0.1i", "-0.2i"),
        ("punctured-disc", "0.3+0.1i", "-0.2i"),
        ("upper-half-plane", "0.5+1i", "-1+0.25i"),
        ("ball2", "0.3,0.1i", "0.2,-0.4"),
        ("polydisc2", "0.3,0.1i", "0.2,-0.4"),
        ("hartogs", "0.5,0.1+0.2i", "0.3i,0.1"),
    ];
    for (tag, z, w) in cases {
        let d = Domain::from_tag(tag).expect("known tag");
        let z = parse_point(z).expect("point");
        let w = parse_point(w).expect("point");
        println!(
            "{tag:>16}  K(z,w) = {:.10}  K(z,z) = {:.10}  |K(w,z)|/K(z,z) = {:.6}",
            kernel(&d, &z, &w)?,
            kernel_diagonal(&d, &z)?,
            kernel_ratio(&d, &z, &w)?
        );
    }
    Ok(())
}
