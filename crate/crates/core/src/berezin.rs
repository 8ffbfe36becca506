//! Berezin transform, its adjoint, the Bergman and absolute Bergman
//! projections, and Berezin symbols of operators given in a monomial basis.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::domains::{kernel_unchecked, positive_diagonal, Domain};
use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::quadrature::{integrate, integrate_real, QuadratureRule};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymbolClass {
    Bounded,
    /// In `Lᵖ` for the given exponent.
    PIntegrable(f64),
}

/// A function on a domain, tagged with its integrability class.
#[derive(Clone)]
pub struct OperatorSymbol {
    name: String,
    class: SymbolClass,
    f: Arc<dyn Fn(&CPoint) -> Complex64 + Send + Sync>,
}

impl fmt::Debug for OperatorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorSymbol({}, {:?})", self.name, self.class)
    }
}

impl OperatorSymbol {
    pub fn new<F>(name: impl Into<String>, class: SymbolClass, f: F) -> Self
    where
        F: Fn(&CPoint) -> Complex64 + Send + Sync + 'static,
    {
        OperatorSymbol { name: name.into(), class, f: Arc::new(f) }
    }

    pub fn bounded<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&CPoint) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(name, SymbolClass::Bounded, f)
    }

    /// Real-valued symbol.
    pub fn real<F>(name: impl Into<String>, class: SymbolClass, f: F) -> Self
    where
        F: Fn(&CPoint) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, class, move |z| Complex64::new(f(z), 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::bounded(format!("const({c})"), move |_| c)
    }

    pub fn one() -> Self {
        Self::bounded("one", |_| Complex64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::bounded("zero", |_| Complex64::new(0.0, 0.0))
    }

    /// `|w|²`
    pub fn modulus_squared() -> Self {
        Self::real("abs2", SymbolClass::Bounded, |w| w.norm_sqr())
    }

    /// Radial bump `(1 - |w - c|²/r²)³` supported in the disc `|w - c| < r`
    /// (first coordinate).
    pub fn bump(c: Complex64, r: f64) -> Self {
        Self::real(format!("bump({c},{r})"), SymbolClass::Bounded, move |w| {
            let q = 1.0 - (w[0] - c).norm_sqr() / (r * r);
            if q > 0.0 {
                q * q * q
            } else {
                0.0
            }
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> SymbolClass {
        self.class
    }

    #[inline]
    pub fn eval(&self, z: &CPoint) -> Complex64 {
        (self.f)(z)
    }

    /// `|φ|` as a new symbol.
    pub fn modulus(&self) -> Self {
        let f = self.f.clone();
        Self::real(format!("|{}|", self.name), self.class, move |z| f(z).norm())
    }
}

fn check_setup(domain: &Domain, z: &CPoint, rule: &QuadratureRule) -> Result<f64> {
    if !domain.has_closed_form_kernel() {
        return Err(Error::UnsupportedKind { domain: domain.tag(), op: "integral operators" });
    }
    if rule.domain().tag() != domain.tag() {
        return Err(Error::InvalidArgument(format!(
            "rule is on {} but the operator acts on {}",
            rule.domain().tag(),
            domain.tag()
        )));
    }
    domain.check(z)?;
    positive_diagonal(domain, z)
}

/// Turns a non-finite integrand report into `NonFiniteSymbol` when the symbol
/// is to blame.
fn blame_symbol(err: Error, rule: &QuadratureRule, sym: &OperatorSymbol) -> Error {
    if let Error::NonFiniteValue { index, .. } = err {
        let (w, _) = rule.node(index);
        let v = sym.eval(&w);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Error::NonFiniteSymbol { point: w.to_string() };
        }
        return Error::NonFiniteValue { index, value: format!("integrand at {w}") };
    }
    err
}

/// `Bφ(z) = ∫ φ(w) |k_z(w)|² dV(w)`
pub fn berezin(domain: &Domain, phi: &OperatorSymbol, z: &CPoint, rule: &QuadratureRule) -> Result<Complex64> {
    let kzz = check_setup(domain, z, rule)?;
    let inv = 1.0 / kzz;
    integrate(rule, |w| phi.eval(w) * (kernel_unchecked(domain, w, z).norm_sqr() * inv))
        .map_err(|e| blame_symbol(e, rule, phi))
}

/// `B*ψ(z) = K(z,z) ∫ |k_z(w)|² ψ(w) / K(w,w) dV(w)`
pub fn berezin_adjoint(domain: &Domain, psi: &OperatorSymbol, z: &CPoint, rule: &QuadratureRule) -> Result<Complex64> {
    check_setup(domain, z, rule)?;
    integrate(rule, |w| {
        let kww = crate::domains::diagonal_unchecked(domain, w);
        psi.eval(w) * (kernel_unchecked(domain, w, z).norm_sqr() / kww)
    })
    .map_err(|e| blame_symbol(e, rule, psi))
}

/// `P⁺f(z) = ∫ |K(z,w)| |f(w)| dV(w)`
pub fn absolute_projection(domain: &Domain, f: &OperatorSymbol, z: &CPoint, rule: &QuadratureRule) -> Result<f64> {
    check_setup(domain, z, rule)?;
    integrate_real(rule, |w| f.eval(w).norm() * kernel_unchecked(domain, z, w).norm())
        .map_err(|e| blame_symbol(e, rule, f))
}

/// `Pf(z) = ∫ K(z,w) f(w) dV(w)`
pub fn bergman_project(domain: &Domain, f: &OperatorSymbol, z: &CPoint, rule: &QuadratureRule) -> Result<Complex64> {
    check_setup(domain, z, rule)?;
    integrate(rule, |w| f.eval(w) * kernel_unchecked(domain, z, w)).map_err(|e| blame_symbol(e, rule, f))
}

/// Checks `|Bφ(z)| ≤ C·P⁺|φ|(z)` up to quadrature slack `1e-8 + 1e-6·max`.
///
/// Any evaluation failure counts as "not verified" and returns `false`.
pub fn pointwise_domination(domain: &Domain, phi: &OperatorSymbol, z: &CPoint, c: f64, rule: &QuadratureRule) -> bool {
    let Ok(b) = berezin(domain, phi, z, rule) else { return false };
    let Ok(p) = absolute_projection(domain, phi, z, rule) else { return false };
    let (lhs, rhs) = (b.norm(), c * p);
    lhs <= rhs + 1e-8 + 1e-6 * lhs.max(rhs)
}

/// Orthonormal monomial bases of the Bergman space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// `eₙ = √((n+1)/π) zⁿ`, `0 ≤ n < N`.
    DiscMonomials,
    /// `e_{nm} = √a_{nm} z₁ⁿ z₂ᵐ` with `a_{nm} = (m+1)(n+m+2)/π²`, indexed by
    /// `k = n+m+1` then `m`, with `k, m < N`.
    HartogsMonomials,
}

impl Basis {
    pub fn domain(&self) -> Domain {
        match self {
            Basis::DiscMonomials => Domain::UnitDisc,
            Basis::HartogsMonomials => Domain::HartogsTriangle,
        }
    }

    pub fn len(&self, truncation: usize) -> usize {
        match self {
            Basis::DiscMonomials => truncation,
            Basis::HartogsMonomials => truncation * truncation,
        }
    }

    /// Exponents of basis element `i`.
    pub fn exponents(&self, i: usize, truncation: usize) -> Vec<i64> {
        match self {
            Basis::DiscMonomials => vec![i as i64],
            Basis::HartogsMonomials => {
                let (k, m) = ((i / truncation) as i64, (i % truncation) as i64);
                vec![k - 1 - m, m]
            }
        }
    }

    /// `eᵢ(z)` for all `i < len`.
    pub fn eval_all(&self, z: &CPoint, truncation: usize) -> Vec<Complex64> {
        match self {
            Basis::DiscMonomials => {
                let mut p = Complex64::new(1.0, 0.0);
                (0..truncation)
                    .map(|n| {
                        let v = p * ((n as f64 + 1.0) / PI).sqrt();
                        p *= z[0];
                        v
                    })
                    .collect()
            }
            Basis::HartogsMonomials => {
                // z₁ⁿ z₂ᵐ = z₁^{k-1} tᵐ with t = z₂/z₁, which stays bounded
                let t = z[1] / z[0];
                let mut out = Vec::with_capacity(truncation * truncation);
                let mut pk = 1.0 / z[0];
                for k in 0..truncation {
                    let mut pm = Complex64::new(1.0, 0.0);
                    for m in 0..truncation {
                        let a = ((m + 1) * (k + 1)) as f64 / (PI * PI);
                        out.push(pk * pm * a.sqrt());
                        pm *= t;
                    }
                    pk *= z[0];
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum BasisEntries {
    Dense(DMatrix<Complex64>),
    Diagonal(Vec<Complex64>),
}

/// Bounded operator on the Bergman space given by `T[m][n] = ⟨T eₙ, e_m⟩`.
#[derive(Clone, Debug)]
pub struct BasisOperator {
    basis: Basis,
    truncation: usize,
    entries: BasisEntries,
}

impl BasisOperator {
    pub fn identity(basis: Basis, truncation: usize) -> Self {
        let n = basis.len(truncation);
        BasisOperator { basis, truncation, entries: BasisEntries::Diagonal(vec![Complex64::new(1.0, 0.0); n]) }
    }

    pub fn diagonal(basis: Basis, truncation: usize, diag: Vec<Complex64>) -> Result<Self> {
        let n = basis.len(truncation);
        if diag.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: diag.len() });
        }
        Self::validated(BasisOperator { basis, truncation, entries: BasisEntries::Diagonal(diag) })
    }

    pub fn dense(basis: Basis, truncation: usize, m: DMatrix<Complex64>) -> Result<Self> {
        let n = basis.len(truncation);
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.nrows().max(m.ncols()) });
        }
        Self::validated(BasisOperator { basis, truncation, entries: BasisEntries::Dense(m) })
    }

    fn validated(op: Self) -> Result<Self> {
        let bad = match &op.entries {
            BasisEntries::Dense(m) => m.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())),
            BasisEntries::Diagonal(d) => d.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())),
        };
        match bad {
            Some(i) => Err(Error::NonFiniteValue { index: i, value: "operator entry".into() }),
            None => Ok(op),
        }
    }

    /// Toeplitz operator `T_φ` with entries `∫ φ eₙ ē_m dV` computed on `rule`.
    pub fn toeplitz(basis: Basis, truncation: usize, phi: &OperatorSymbol, rule: &QuadratureRule) -> Result<Self> {
        if rule.domain().tag() != basis.domain().tag() {
            return Err(Error::InvalidArgument("rule and basis live on different domains".into()));
        }
        let n = basis.len(truncation);
        let mut e = DMatrix::<Complex64>::zeros(rule.len(), n);
        let mut we = DMatrix::<Complex64>::zeros(rule.len(), n);
        for (i, (z, w)) in rule.iter().enumerate() {
            let f = phi.eval(&z);
            if !(f.re.is_finite() && f.im.is_finite()) {
                return Err(Error::NonFiniteSymbol { point: z.to_string() });
            }
            for (j, v) in basis.eval_all(&z, truncation).into_iter().enumerate() {
                e[(i, j)] = v;
                we[(i, j)] = v * f * w;
            }
        }
        // T[m][n] = Σᵢ wᵢ φᵢ eₙ(zᵢ) conj(e_m(zᵢ))
        let t = e.adjoint() * we;
        Self::dense(basis, truncation, t)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn entries(&self) -> &BasisEntries {
        &self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        match &self.entries {
            BasisEntries::Dense(t) => t[(m, n)],
            BasisEntries::Diagonal(d) => {
                if m == n {
                    d[m]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }
}

/// `⟨T k_z, k_z⟩ = Σ T[m][n] uₙ(z) conj(u_m(z))` with `uₙ = conj(eₙ(z))/√K(z,z)`.
///
/// Fails with `TruncationInsufficient` when `1 − Σ|uₙ|²` exceeds `1e-8`.
pub fn berezin_of_operator(t: &BasisOperator, z: &CPoint) -> Result<Complex64> {
    let domain = t.basis.domain();
    domain.check(z)?;
    let kzz = positive_diagonal(&domain, z)?;
    let s = 1.0 / kzz.sqrt();
    let u: Vec<Complex64> = t.basis.eval_all(z, t.truncation).into_iter().map(|e| e.conj() * s).collect();
    let mass: f64 = u.iter().map(|v| v.norm_sqr()).sum();
    let tail = 1.0 - mass;
    if tail > 1e-8 {
        return Err(Error::TruncationInsufficient { truncation: t.truncation, tail });
    }
    let value = match &t.entries {
        BasisEntries::Diagonal(d) => d.iter().zip(&u).map(|(d, u)| d * u.norm_sqr()).sum(),
        BasisEntries::Dense(m) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, un) in u.iter().enumerate() {
                for (i, um) in u.iter().enumerate() {
                    acc += m[(i, j)] * un * um.conj();
                }
            }
            acc
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_rule;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc_rule() -> QuadratureRule {
        build_rule(&Domain::UnitDisc, 64, 64, 2.0).unwrap()
    }

    #[test]
    fn disc_identities() {
        let d = Domain::UnitDisc;
        let rule = disc_rule();
        let o = CPoint::one(c(0.0, 0.0));
        assert!((berezin(&d, &OperatorSymbol::one(), &o, &rule).unwrap() - 1.0).norm() < 1e-12);
        // (1/π)·2π∫r³dr
        let b = berezin(&d, &OperatorSymbol::modulus_squared(), &o, &rule).unwrap();
        assert!((b - 0.5).norm() < 1e-12);
        let adj = berezin_adjoint(&d, &OperatorSymbol::one(), &o, &rule).unwrap();
        assert!((adj - 1.0 / 3.0).norm() < 1e-12);
        assert!((absolute_projection(&d, &OperatorSymbol::one(), &o, &rule).unwrap() - 1.0).abs() < 1e-12);
        let conj = OperatorSymbol::bounded("conj", |w| w[0].conj());
        assert!(bergman_project(&d, &conj, &o, &rule).unwrap().norm() < 1e-14);
    }

    #[test]
    fn adjoint_of_diagonal_reciprocal_is_diagonal() {
        let d = Domain::UnitDisc;
        let rule = disc_rule();
        let psi = OperatorSymbol::real("K(w,w)", SymbolClass::Bounded, |w| crate::domains::diagonal_unchecked(&Domain::UnitDisc, w));
        let z = CPoint::one(c(0.3, -0.2));
        let kzz = crate::domains::kernel_diagonal(&d, &z).unwrap();
        let v = berezin_adjoint(&d, &psi, &z, &rule).unwrap();
        assert!((v.re - kzz).abs() < 1e-10 * kzz);
    }

    #[test]
    fn reproducing_property() {
        let d = Domain::UnitDisc;
        let rule = disc_rule();
        for n in 0..6 {
            let f = OperatorSymbol::bounded(format!("z^{n}"), move |w| w[0].powi(n));
            for z in [c(0.3, 0.1), c(-0.6, 0.2)] {
                let p = bergman_project(&d, &f, &CPoint::one(z), &rule).unwrap();
                assert!((p - z.powi(n)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn operator_symbols() {
        let o = CPoint::one(c(0.0, 0.0));
        let id = BasisOperator::identity(Basis::DiscMonomials, 40);
        assert!((berezin_of_operator(&id, &CPoint::one(c(0.4, 0.3))).unwrap() - 1.0).norm() < 1e-12);
        // Toeplitz operator of |w|²: diagonal (n+1)/(n+2)
        let diag = (0..40).map(|n| c((n as f64 + 1.0) / (n as f64 + 2.0), 0.0)).collect();
        let t = BasisOperator::diagonal(Basis::DiscMonomials, 40, diag).unwrap();
        assert!((berezin_of_operator(&t, &o).unwrap() - 0.5).norm() < 1e-15);
        let h = BasisOperator::identity(Basis::HartogsMonomials, 60);
        let v = berezin_of_operator(&h, &CPoint::two(c(0.5, 0.0), c(0.2, 0.0))).unwrap();
        assert!((v - 1.0).norm() < 1e-6);
        assert!(matches!(
            berezin_of_operator(&BasisOperator::identity(Basis::DiscMonomials, 5), &CPoint::one(c(0.9, 0.0))),
            Err(Error::TruncationInsufficient { .. })
        ));
    }

    #[test]
    fn toeplitz_matches_direct_berezin() {
        let d = Domain::UnitDisc;
        let rule = build_rule(&d, 64, 128, 1.0).unwrap();
        let phi = OperatorSymbol::bounded("mix", |w| c(0.3, 0.0) + w[0] * w[0].conj() * 0.5 + w[0].conj() * c(0.0, 0.2));
        let t = BasisOperator::toeplitz(Basis::DiscMonomials, 40, &phi, &rule).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let z = d.sample(&mut rng, 0.6);
            let a = berezin_of_operator(&t, &z).unwrap();
            let b = berezin(&d, &phi, &z, &rule).unwrap();
            assert!((a - b).norm() < 1e-6 * b.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn domination_on_disc() {
        let d = Domain::UnitDisc;
        let rule = disc_rule();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let z = d.sample(&mut rng, 0.7);
            let cc = c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let phi = OperatorSymbol::bump(cc, 0.4);
            assert!(pointwise_domination(&d, &phi, &z, 4.0, &rule));
        }
        assert!(pointwise_domination(&d, &OperatorSymbol::zero(), &CPoint::one(c(0.2, 0.0)), 4.0, &rule));
    }

    #[test]
    fn nonfinite_symbol_is_reported() {
        let rule = build_rule(&Domain::UnitDisc, 8, 8, 1.0).unwrap();
        let bad = OperatorSymbol::real("bad", SymbolClass::Bounded, |w| if w[0].re > 0.0 { f64::INFINITY } else { 0.0 });
        let z = CPoint::one(c(0.0, 0.0));
        assert!(matches!(berezin(&Domain::UnitDisc, &bad, &z, &rule), Err(Error::NonFiniteSymbol { .. })));
    }
}
