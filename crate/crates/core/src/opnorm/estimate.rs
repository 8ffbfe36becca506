use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::matrix::{kron_apply, Entries, OperatorMatrix, Resolution};
use crate::domains::Domain;
use crate::error::{Error, Result};
use crate::hartogs::blowup_row;
use crate::point::CPoint;
use crate::quadrature::{tail_exponent_classify, Convergence, Locus, TailExponent};

/// Dense problems up to this size are solved by SVD at `p = 2`.
pub const SVD_LIMIT: usize = 2000;

const MAX_ITERATIONS: usize = 5000;
const REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    WeightedSvd,
    PPowerIteration,
    WitnessSweep,
    RowSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Lower,
    Approximate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    #[serde(with = "exponent")]
    pub p: f64,
    pub method: Method,
    pub bound_kind: BoundKind,
    pub resolution: Resolution,
}

/// `p` as a JSON number, or the string `"inf"`.
pub mod exponent {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*p)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum P {
            Num(f64),
            Text(String),
        }
        match P::deserialize(d)? {
            P::Num(v) => Ok(v),
            P::Text(t) if t == "inf" => Ok(f64::INFINITY),
            P::Text(t) => Err(de::Error::custom(format!("bad exponent `{t}`"))),
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && !p.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("p = {p} must lie in (1, ∞]")))
    }
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return x.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `M = R^{1/p} A C^{1−1/p}`, under which the weighted `Lᵖ` norm becomes the
/// plain `ℓᵖ` norm.
enum Scaled {
    Dense(DMatrix<f64>),
    Kron(DMatrix<f64>, DMatrix<f64>),
}

impl Scaled {
    fn new(m: &OperatorMatrix, p: f64) -> Result<Self> {
        let rw = m
            .row_weights()
            .ok_or_else(|| Error::InvalidArgument("operator has no row measure; norms need a square discretization".into()))?;
        let (a, b) = (1.0 / p, 1.0 - 1.0 / p);
        let scale = |mat: &DMatrix<f64>, r: &[f64], c: &[f64]| {
            DMatrix::from_fn(mat.nrows(), mat.ncols(), |i, j| r[i].powf(a) * mat[(i, j)] * c[j].powf(b))
        };
        Ok(match (&m.entries, &m.factor_weights) {
            (Entries::Dense(x), _) => Scaled::Dense(scale(x, rw, m.col_weights())),
            (Entries::Kron(x, y), Some((wx, wy))) => Scaled::Kron(scale(x, wx, wx), scale(y, wy, wy)),
            (Entries::Kron(..), None) => return Err(Error::InvalidArgument("Kronecker operator without factor weights".into())),
        })
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Scaled::Dense(a) => (a * DVector::from_column_slice(x)).as_slice().to_vec(),
            Scaled::Kron(a, b) => kron_apply(a, b, x),
        }
    }

    fn apply_t(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Scaled::Dense(a) => (a.tr_mul(&DVector::from_column_slice(x))).as_slice().to_vec(),
            Scaled::Kron(a, b) => kron_apply(&a.transpose(), &b.transpose(), x),
        }
    }
}

fn normalized(mut v: Vec<f64>, p: f64) -> Vec<f64> {
    let n = lp_norm(&v, p);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    v
}

/// Power iteration on `MᵀM`, started from the normalized weights.
fn spectral_power(m: &Scaled, start: Vec<f64>) -> Result<f64> {
    let mut x = normalized(start, 2.0);
    let mut best = 0.0f64;
    let mut last = 0.0;
    for it in 0..MAX_ITERATIONS {
        let y = m.apply(&x);
        let s = lp_norm(&y, 2.0);
        best = best.max(s);
        if it > 0 && (s - last).abs() <= REL_TOL * s {
            return Ok(best);
        }
        last = s;
        x = normalized(m.apply_t(&y), 2.0);
    }
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, best })
}

/// Boyd's iteration for `‖M‖_{p→p}` of a nonnegative matrix; every iterate
/// is a lower bound and the sequence is nondecreasing.
fn boyd(m: &Scaled, start: Vec<f64>, p: f64) -> Result<f64> {
    let q = p / (p - 1.0);
    let mut x = normalized(start, p);
    let mut best = 0.0f64;
    for _ in 0..MAX_ITERATIONS {
        let y = m.apply(&x);
        let s = lp_norm(&y, p);
        let gain = s - best;
        best = best.max(s);
        if gain.abs() <= REL_TOL * s {
            return Ok(best);
        }
        let ymax = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let dual: Vec<f64> = y.iter().map(|v| (v.abs() / ymax).powf(p - 1.0)).collect();
        let z = m.apply_t(&dual);
        let zmax = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        x = normalized(z.iter().map(|v| (v.abs() / zmax).powf(q - 1.0)).collect(), p);
    }
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, best })
}

/// Estimates `‖T‖_{Lᵖ→Lᵖ}` of the discretized operator.
///
/// * `p = ∞`: the largest weighted row sum, exact for nonnegative entries.
/// * `p = 2`, dense up to [`SVD_LIMIT`]: the top singular value of `W^{1/2} A W^{1/2}`.
/// * `p = 2` otherwise: power iteration on `MᵀM`.
/// * other `p`: Boyd's dual ascent, a lower bound.
pub fn estimate_norm(m: &OperatorMatrix, p: f64) -> Result<NormEstimate> {
    check_p(p)?;
    let rw = m
        .row_weights()
        .ok_or_else(|| Error::InvalidArgument("operator has no row measure; norms need a square discretization".into()))?;
    let done = |value, method, bound_kind| {
        Ok(NormEstimate { value, p, method, bound_kind, resolution: m.resolution().clone() })
    };
    if p.is_infinite() {
        let sums = m.apply_real(&vec![1.0; m.cols()])?;
        return done(lp_norm(&sums, f64::INFINITY), Method::RowSum, BoundKind::Approximate);
    }
    let scaled = Scaled::new(m, p)?;
    let start = rw.to_vec();
    if p == 2.0 {
        if let Scaled::Dense(a) = &scaled {
            if a.nrows() <= SVD_LIMIT && a.ncols() <= SVD_LIMIT {
                let s = a.clone().singular_values().max();
                return done(s, Method::WeightedSvd, BoundKind::Approximate);
            }
        }
        return done(spectral_power(&scaled, start)?, Method::PPowerIteration, BoundKind::Lower);
    }
    done(boyd(&scaled, start, p)?, Method::PPowerIteration, BoundKind::Lower)
}

/// Witnesses `f(z) = |z₁|^a ρ(z)^b` over a grid of `(a, b)`, where `ρ` is the
/// boundary distance proxy of the domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl WitnessFamily {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Self {
        WitnessFamily { a, b }
    }

    /// `{1}`
    pub fn constant() -> Self {
        WitnessFamily { a: vec![0.0], b: vec![0.0] }
    }

    /// Powers of `ρ` approaching the critical exponent `−1/p` from above.
    pub fn radial_sweep(p: f64) -> Self {
        let crit = if p.is_infinite() { 0.0 } else { -1.0 / p };
        let b = [0.5, 0.3, 0.2, 0.12, 0.08, 0.05, 0.03, 0.02, 0.012, 0.008, 0.005].iter().map(|d| crit + d).collect();
        WitnessFamily { a: vec![0.0], b }
    }

    pub fn len(&self) -> usize {
        self.a.len() * self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `ρ(z)`, and the radial exponent of the volume element at `|z₁| = 0`.
fn rho(domain: &Domain, z: &CPoint) -> Option<f64> {
    let c = z.coords();
    Some(match domain {
        Domain::UnitDisc | Domain::UnitBall(_) => 1.0 - z.norm_sqr(),
        Domain::Polydisc(_) => c.iter().map(|w| 1.0 - w.norm_sqr()).product(),
        Domain::HartogsTriangle => 1.0 - c[0].norm_sqr(),
        _ => return None,
    })
}

fn z1_volume_exponent(domain: &Domain) -> f64 {
    match domain {
        Domain::HartogsTriangle => 3.0,
        _ => 1.0,
    }
}

fn in_lp(domain: &Domain, a: f64, b: f64, p: f64) -> Result<bool> {
    if p.is_infinite() {
        return Ok(a >= 0.0 && b >= 0.0);
    }
    let tails = [
        TailExponent { locus: Locus::Zero, exponent: a * p + z1_volume_exponent(domain) },
        TailExponent { locus: Locus::Zero, exponent: b * p },
    ];
    Ok(tail_exponent_classify(&tails)? == Convergence::Converges)
}

/// `max ‖Tf‖_p/‖f‖_p` over the family, evaluated on the matrix nodes.
pub fn witness_lower_bound(m: &OperatorMatrix, p: f64, family: &WitnessFamily) -> Result<NormEstimate> {
    check_p(p)?;
    let rw = m.row_weights().ok_or_else(|| Error::InvalidArgument("operator has no row measure".into()))?;
    let domain = m.domain();
    if rho(domain, &m.col_nodes()[0]).is_none() {
        return Err(Error::UnsupportedKind { domain: domain.tag(), op: "radial-power witnesses" });
    }
    let weighted = |v: &[f64], w: &[f64]| {
        if p.is_infinite() {
            lp_norm(v, p)
        } else {
            let scaled: Vec<f64> = v.iter().zip(w).map(|(x, w)| x * w.powf(1.0 / p)).collect();
            lp_norm(&scaled, p)
        }
    };
    let mut best: Option<f64> = None;
    for &a in &family.a {
        for &b in &family.b {
            if !in_lp(domain, a, b, p)? {
                continue;
            }
            let f: Vec<f64> = match m.boundary_distance() {
                Some(r) => m.col_nodes().iter().zip(r).map(|(z, r)| z[0].norm().powf(a) * r.powf(b)).collect(),
                None => m.sample(|z| z[0].norm().powf(a) * rho(domain, z).unwrap_or(1.0).powf(b)),
            };
            let tf = m.apply_real(&f)?;
            let r = weighted(&tf, rw) / weighted(&f, m.col_weights());
            if r.is_finite() {
                best = Some(best.map_or(r, |x| x.max(r)));
            }
        }
    }
    let value = best.ok_or(Error::EmptyFamily)?;
    let mut resolution = m.resolution().clone();
    resolution.scheme = format!("{}+witness", resolution.scheme);
    Ok(NormEstimate { value, p, method: Method::WitnessSweep, bound_kind: BoundKind::Lower, resolution })
}

/// `max ‖B f_ε‖₂/‖f_ε‖₂` on the Hartogs triangle over `eps_list`.
pub fn feps_witness(eps_list: &[f64]) -> Result<NormEstimate> {
    let mut best: Option<f64> = None;
    for &e in eps_list {
        let r = blowup_row(e)?.ratio_quadrature;
        best = Some(best.map_or(r, |x: f64| x.max(r)));
    }
    let value = best.ok_or(Error::EmptyFamily)?;
    let resolution = Resolution {
        domain: Domain::HartogsTriangle.tag(),
        scheme: "f-eps-radial".into(),
        rows: eps_list.len(),
        cols: eps_list.len(),
        radial_n: 46,
        angular_n: 20,
        grading: 0.5,
    };
    Ok(NormEstimate { value, p: 2.0, method: Method::WitnessSweep, bound_kind: BoundKind::Lower, resolution })
}

#[cfg(test)]
mod tests {
    use super::super::sector::{sector_matrix, SectorMesh, SectorOperator};
    use super::*;
    use std::f64::consts::PI;

    fn disc_b() -> OperatorMatrix {
        sector_matrix(&Domain::UnitDisc, SectorOperator::Berezin, &SectorMesh::default()).unwrap()
    }

    fn dostanic(p: f64) -> f64 {
        PI * (p + 1.0) / (p * p * (PI / p).sin())
    }

    #[test]
    fn disc_norms() {
        let m = disc_b();
        let e2 = estimate_norm(&m, 2.0).unwrap();
        assert_eq!(e2.method, Method::WeightedSvd);
        assert!((e2.value / dostanic(2.0) - 1.0).abs() < 0.05, "{}", e2.value);
        let einf = estimate_norm(&m, f64::INFINITY).unwrap();
        assert!((einf.value - 1.0).abs() < 1e-6);
        let e3 = estimate_norm(&m, 3.0).unwrap();
        let r = e3.value / dostanic(3.0);
        assert!((0.8..=1.01).contains(&r), "{r}");
    }

    #[test]
    fn witnesses_are_lower_bounds() {
        let m = disc_b();
        let w = witness_lower_bound(&m, 2.0, &WitnessFamily::radial_sweep(2.0)).unwrap();
        assert!(w.value >= 2.2, "{}", w.value);
        assert!(w.value <= estimate_norm(&m, 2.0).unwrap().value + 1e-6);
        let one = witness_lower_bound(&m, f64::INFINITY, &WitnessFamily::constant()).unwrap();
        assert!((one.value - 1.0).abs() < 1e-9);
        let empty = WitnessFamily::new(vec![], vec![0.0]);
        assert!(matches!(witness_lower_bound(&m, 2.0, &empty), Err(Error::EmptyFamily)));
        // only non-L² members
        let bad = WitnessFamily::new(vec![0.0], vec![-0.9]);
        assert!(matches!(witness_lower_bound(&m, 2.0, &bad), Err(Error::EmptyFamily)));
    }

    #[test]
    fn json_exponent() {
        let e = estimate_norm(&disc_b(), f64::INFINITY).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains("\"p\":\"inf\""));
        let back: NormEstimate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
