use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locus {
    /// `∫₀ r^a dr`
    Zero,
    /// `∫^∞ r^a dr`
    Infinity,
}

/// Power-law behavior of a one-dimensional integrand near one end.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailExponent {
    pub locus: Locus,
    pub exponent: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convergence {
    Converges,
    Diverges,
}

/// Power-comparison verdict for a set of end behaviors.
///
/// An exponent of exactly `-1` is a logarithmic divergence. Exponents that
/// are merely close to `-1` (within 1e-9) are refused, since the data cannot
/// distinguish them from the borderline case.
pub fn tail_exponent_classify(tails: &[TailExponent]) -> Result<Convergence> {
    let mut verdict = Convergence::Converges;
    for t in tails {
        let a = t.exponent;
        if !a.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite exponent {a}")));
        }
        if a == -1.0 {
            verdict = Convergence::Diverges;
            continue;
        }
        if (a + 1.0).abs() < 1e-9 {
            return Err(Error::BorderlineExponent { exponent: a });
        }
        let ok = match t.locus {
            Locus::Zero => a > -1.0,
            Locus::Infinity => a < -1.0,
        };
        if !ok {
            verdict = Convergence::Diverges;
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(locus: Locus, exponent: f64) -> Vec<TailExponent> {
        vec![TailExponent { locus, exponent }]
    }

    #[test]
    fn power_comparison() {
        // outer Boas integrand r^{2j+1-(2k+2)}
        let boas = |j: f64, k: f64| 2.0 * j + 1.0 - (2.0 * k + 2.0);
        assert_eq!(tail_exponent_classify(&at(Locus::Infinity, boas(0.0, 1.0))).unwrap(), Convergence::Converges);
        assert_eq!(tail_exponent_classify(&at(Locus::Infinity, boas(1.0, 1.0))).unwrap(), Convergence::Diverges);
        assert_eq!(tail_exponent_classify(&at(Locus::Zero, -1.0 + 0.4)).unwrap(), Convergence::Converges);
        assert_eq!(tail_exponent_classify(&at(Locus::Zero, -1.5)).unwrap(), Convergence::Diverges);
        assert_eq!(tail_exponent_classify(&[]).unwrap(), Convergence::Converges);
    }

    #[test]
    fn near_borderline_is_refused() {
        assert!(matches!(
            tail_exponent_classify(&at(Locus::Zero, -1.0 + 1e-11)),
            Err(Error::BorderlineExponent { .. })
        ));
    }
}
