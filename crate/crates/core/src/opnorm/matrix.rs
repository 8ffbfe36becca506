use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domains::{kernel_unchecked, positive_diagonal, Domain};
use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::quadrature::QuadratureRule;

/// Largest node count accepted for dense assembly from a full rule.
pub const MAX_DENSE_NODES: usize = 4096;

/// How a discretization was built, so a result can be reproduced.
///
/// For radial-sector meshes `radial_n` is the number of geometric panels,
/// `angular_n` the Gauss order per panel and `grading` the panel ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub domain: String,
    pub scheme: String,
    pub rows: usize,
    pub cols: usize,
    pub radial_n: usize,
    pub angular_n: usize,
    pub grading: f64,
}

#[derive(Clone, Debug)]
pub enum Entries {
    Dense(DMatrix<f64>),
    /// `A ⊗ B` on a product measure, index `i = i₁·n₂ + i₂`.
    Kron(DMatrix<f64>, DMatrix<f64>),
}

/// `(Tφ)(zᵢ) = Σⱼ A[i][j]·wⱼ·φ(wⱼ)`, a nonnegative kernel sampled at nodes.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub(crate) domain: Domain,
    pub(crate) entries: Entries,
    pub(crate) row_nodes: Vec<CPoint>,
    pub(crate) col_nodes: Vec<CPoint>,
    /// Measure on the rows, present when the operator maps a space to itself.
    pub(crate) row_weights: Option<Vec<f64>>,
    pub(crate) col_weights: Vec<f64>,
    /// Factor weights of a product measure, for `Entries::Kron`.
    pub(crate) factor_weights: Option<(Vec<f64>, Vec<f64>)>,
    /// `ρ` at the column nodes where `1 − |z|²` would lose digits.
    pub(crate) col_rho: Option<Vec<f64>>,
    pub(crate) resolution: Resolution,
}

impl OperatorMatrix {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn rows(&self) -> usize {
        self.row_nodes.len()
    }

    pub fn cols(&self) -> usize {
        self.col_nodes.len()
    }

    pub fn row_nodes(&self) -> &[CPoint] {
        &self.row_nodes
    }

    pub fn col_nodes(&self) -> &[CPoint] {
        &self.col_nodes
    }

    pub fn row_weights(&self) -> Option<&[f64]> {
        self.row_weights.as_deref()
    }

    pub fn col_weights(&self) -> &[f64] {
        &self.col_weights
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    /// Exact boundary distance `ρ` at the column nodes, when the
    /// discretization knows it better than `1 − |z|²`.
    pub fn boundary_distance(&self) -> Option<&[f64]> {
        self.col_rho.as_deref()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match &self.entries {
            Entries::Dense(a) => a[(i, j)],
            Entries::Kron(a, b) => {
                let (n2, m2) = (b.nrows(), b.ncols());
                a[(i / n2, j / m2)] * b[(i % n2, j % m2)]
            }
        }
    }

    /// `y = A·x`, without weights.
    pub(crate) fn matvec(&self, x: &[f64]) -> Vec<f64> {
        match &self.entries {
            Entries::Dense(a) => (a * nalgebra::DVector::from_column_slice(x)).as_slice().to_vec(),
            Entries::Kron(a, b) => kron_apply(a, b, x),
        }
    }

    /// Applies the operator to real values at the column nodes.
    pub fn apply_real(&self, phi: &[f64]) -> Result<Vec<f64>> {
        if phi.len() != self.cols() {
            return Err(Error::DimensionMismatch { expected: self.cols(), got: phi.len() });
        }
        let x: Vec<f64> = phi.iter().zip(&self.col_weights).map(|(f, w)| f * w).collect();
        Ok(self.matvec(&x))
    }

    /// Applies the operator to complex values at the column nodes.
    pub fn apply(&self, phi: &[Complex64]) -> Result<Vec<Complex64>> {
        let re: Vec<f64> = phi.iter().map(|c| c.re).collect();
        let im: Vec<f64> = phi.iter().map(|c| c.im).collect();
        let (re, im) = (self.apply_real(&re)?, self.apply_real(&im)?);
        Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
    }

    /// Samples `f` at the column nodes.
    pub fn sample<F: Fn(&CPoint) -> f64>(&self, f: F) -> Vec<f64> {
        self.col_nodes.iter().map(f).collect()
    }
}

/// `(A ⊗ B)·x` with `x` laid out row-major as an `n_A × n_B` array.
pub(crate) fn kron_apply(a: &DMatrix<f64>, b: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let xm = DMatrix::from_row_slice(a.ncols(), b.ncols(), x);
    let y = a * xm * b.transpose();
    let mut out = Vec::with_capacity(y.len());
    for i in 0..y.nrows() {
        for j in 0..y.ncols() {
            out.push(y[(i, j)]);
        }
    }
    out
}

fn check_rule(domain: &Domain, rule: &QuadratureRule, rows: usize) -> Result<()> {
    if !domain.has_closed_form_kernel() {
        return Err(Error::UnsupportedKind { domain: domain.tag(), op: "operator discretization" });
    }
    if rule.domain().tag() != domain.tag() {
        return Err(Error::InvalidArgument(format!("rule is on {} but the operator acts on {}", rule.domain().tag(), domain.tag())));
    }
    if rule.len() > MAX_DENSE_NODES || rows > MAX_DENSE_NODES {
        return Err(Error::InvalidResolution(format!(
            "{rows}×{} dense matrix exceeds the {MAX_DENSE_NODES}-node limit",
            rule.len()
        )));
    }
    Ok(())
}

fn assemble<F>(rows: &[CPoint], cols: &[CPoint], entry: F) -> Result<DMatrix<f64>>
where
    F: Fn(usize, &CPoint, &CPoint) -> f64 + Sync,
{
    let data: Vec<Vec<f64>> = rows
        .par_iter()
        .enumerate()
        .map(|(i, z)| cols.iter().map(|w| entry(i, z, w)).collect())
        .collect();
    let m = DMatrix::from_fn(rows.len(), cols.len(), |i, j| data[i][j]);
    if let Some(k) = m.iter().position(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::NonFiniteValue { index: k, value: m[k].to_string() });
    }
    Ok(m)
}

fn rule_resolution(domain: &Domain, rule: &QuadratureRule, rows: usize, scheme: &str) -> Resolution {
    let meta = rule.meta();
    Resolution {
        domain: domain.tag(),
        scheme: scheme.into(),
        rows,
        cols: rule.len(),
        radial_n: meta.radial_n,
        angular_n: meta.angular_n,
        grading: meta.grading,
    }
}

/// `A[i][j] = |K(wⱼ, zᵢ)|²/K(zᵢ, zᵢ)` at the given rows, columns from `rule`.
pub fn discretize_berezin_rows(domain: &Domain, rows: &[CPoint], rule: &QuadratureRule) -> Result<OperatorMatrix> {
    check_rule(domain, rule, rows.len())?;
    let diag: Vec<f64> = rows
        .iter()
        .map(|z| {
            domain.check(z)?;
            positive_diagonal(domain, z)
        })
        .collect::<Result<_>>()?;
    let (cols, weights): (Vec<CPoint>, Vec<f64>) = rule.iter().unzip();
    let a = assemble(rows, &cols, |i, z, w| kernel_unchecked(domain, w, z).norm_sqr() / diag[i])?;
    Ok(OperatorMatrix {
        domain: domain.clone(),
        entries: Entries::Dense(a),
        row_nodes: rows.to_vec(),
        col_nodes: cols,
        row_weights: None,
        col_weights: weights,
        factor_weights: None,
        col_rho: None,
        resolution: rule_resolution(domain, rule, rows.len(), "rule-rows"),
    })
}

/// Berezin transform on the nodes of `rule`, as a map of `Lᵖ(rule)` to itself.
pub fn discretize_berezin(domain: &Domain, rule: &QuadratureRule) -> Result<OperatorMatrix> {
    let (nodes, weights): (Vec<CPoint>, Vec<f64>) = rule.iter().unzip();
    let mut m = discretize_berezin_rows(domain, &nodes, rule)?;
    m.row_weights = Some(weights);
    m.resolution.scheme = "rule".into();
    Ok(m)
}

/// `A[i][j] = |K(zᵢ, wⱼ)|` on the nodes of `rule`.
pub fn discretize_absolute_projection(domain: &Domain, rule: &QuadratureRule) -> Result<OperatorMatrix> {
    check_rule(domain, rule, rule.len())?;
    let (nodes, weights): (Vec<CPoint>, Vec<f64>) = rule.iter().unzip();
    let a = assemble(&nodes, &nodes, |_, z, w| kernel_unchecked(domain, z, w).norm())?;
    Ok(OperatorMatrix {
        domain: domain.clone(),
        entries: Entries::Dense(a),
        row_nodes: nodes.clone(),
        col_nodes: nodes,
        row_weights: Some(weights.clone()),
        col_weights: weights,
        factor_weights: None,
        col_rho: None,
        resolution: rule_resolution(domain, rule, rule.len(), "rule"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::berezin::{berezin, OperatorSymbol};
    use crate::quadrature::build_rule;
    use std::f64::consts::PI;

    #[test]
    fn single_node_disc() {
        let rule = QuadratureRule::single(&Domain::UnitDisc, CPoint::real(&[0.0]), PI).unwrap();
        let m = discretize_berezin(&Domain::UnitDisc, &rule).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!((m.entry(0, 0) - 1.0 / PI).abs() < 1e-15);
        assert!((m.apply_real(&[1.0]).unwrap()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reproduces_berezin_at_rows() {
        let d = Domain::UnitDisc;
        let rule = build_rule(&d, 24, 24, 2.0).unwrap();
        let rows = vec![CPoint::real(&[0.3]), CPoint::one(Complex64::new(-0.2, 0.5))];
        let m = discretize_berezin_rows(&d, &rows, &rule).unwrap();
        let phi = OperatorSymbol::modulus_squared();
        let vals: Vec<Complex64> = m.col_nodes().iter().map(|w| phi.eval(w)).collect();
        let out = m.apply(&vals).unwrap();
        for (z, v) in rows.iter().zip(out) {
            let b = berezin(&d, &phi, z, &rule).unwrap();
            assert!((b - v).norm() < 1e-12);
        }
    }

    #[test]
    fn kron_matches_entries() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 0.0, 2.0]);
        let x = [1.0, -1.0, 2.0, 0.5];
        let y = kron_apply(&a, &b, &x);
        let k = a.kronecker(&b);
        let z = k * nalgebra::DVector::from_column_slice(&x);
        for (u, v) in y.iter().zip(z.iter()) {
            assert!((u - v).abs() < 1e-14);
        }
    }
}
