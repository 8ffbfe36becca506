//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when `reproduce` has a failing check, 2 for
//! invalid arguments or any error raised while evaluating them.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::acceptance::{render_table, run_all, CheckOutcome};
use crate::berezin::{berezin, OperatorSymbol};
use crate::domains::{kernel, Domain};
use crate::error::{Error, Result};
use crate::hartogs::{berezin_origin_power, blowup_table, f_eps_symbol};
use crate::opnorm::{
    br_scan, estimate_norm, feps_witness, sector_matrix, ScanGrid, SectorMesh, SectorOperator,
};
use crate::point::{parse_complex, parse_point, CPoint};
use crate::quadrature::{build_rule, build_singular_rule, QuadratureRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    Berezin,
    Projection,
}

#[derive(Debug, Parser)]
#[command(name = "bergman", version, about = "Bergman kernels, Berezin transforms and operator norms")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by the subcommands.
#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// disc, ball2, bidisc, polydiscN, upper-half-plane, punctured-disc, hartogs
    #[arg(long, default_value = "disc")]
    pub domain: String,
    /// Radial resolution: Gauss nodes per radial factor for quadrature rules,
    /// geometric panels for `norm`, radii per locus for `br-scan`.
    #[arg(long = "radial-n")]
    pub radial_n: Option<usize>,
    /// Angular resolution: uniform nodes per angle for quadrature rules,
    /// Gauss order per panel for `norm`.
    #[arg(long = "angular-n")]
    pub angular_n: Option<usize>,
    /// Radial grading exponent for quadrature rules, panel ratio for `norm`.
    #[arg(long)]
    pub grading: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate K(z, w); K(z, z) when --w is omitted.
    Kernel {
        #[command(flatten)]
        common: Common,
        /// Point as comma-separated complex coordinates, e.g. 0.3+0.1i,0.05
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
    },
    /// Berezin transform of a symbol at z, by quadrature.
    Berezin {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// one, zero, abs2, const:C, bump:C:R, f_eps:E
        #[arg(long, default_value = "one")]
        symbol: String,
    },
    /// Lᵖ norm estimate of B or P⁺ as JSON.
    Norm {
        #[command(flatten)]
        common: Common,
        /// Exponent in (1, ∞]; `inf` for ∞.
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, value_enum, default_value = "berezin")]
        op: OperatorArg,
        /// On the Hartogs triangle, the f_eps witnesses to sweep.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-1, 1e-2, 1e-3, 1e-4])]
        eps: Vec<f64>,
    },
    /// Sampled sup |K(w,z)|/K(z,z) with a divergence flag, as JSON.
    BrScan {
        #[command(flatten)]
        common: Common,
        /// How close the grid comes to the singular loci.
        #[arg(long, default_value_t = 1e-6)]
        depth: f64,
    },
    /// Blow-up of ‖B f_eps‖/‖f_eps‖ on the Hartogs triangle, as CSV.
    Blowup {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-1, 1e-2, 1e-3, 1e-4])]
        eps: Vec<f64>,
    },
    /// Run the acceptance checks and print a pass/fail table.
    Reproduce {
        #[command(flatten)]
        common: Common,
    },
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn domain_of(tag: &str) -> Result<Domain> {
    Domain::from_tag(tag).ok_or_else(|| bad(format!("unknown domain `{tag}`")))
}

fn point_of(text: &str, domain: &Domain) -> Result<CPoint> {
    let z = parse_point(text).ok_or_else(|| bad(format!("cannot parse point `{text}`")))?;
    if z.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: z.dim() });
    }
    domain.check(&z)?;
    Ok(z)
}

fn parse_p(text: &str) -> Result<f64> {
    let p = match text.trim() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|_| bad(format!("cannot parse p `{t}`")))?,
    };
    if p > 1.0 {
        Ok(p)
    } else {
        Err(bad(format!("p = {p} must lie in (1, ∞]")))
    }
}

/// Default quadrature resolution per domain: `(radial_n, angular_n, grading)`.
fn default_rule(domain: &Domain) -> (usize, usize, f64) {
    match domain {
        Domain::UnitBall(_) => (24, 40, 2.0),
        Domain::Polydisc(_) => (32, 64, 2.0),
        Domain::HartogsTriangle => (32, 48, 3.0),
        Domain::UpperHalfPlane => (64, 128, 2.0),
        _ => (48, 96, 2.0),
    }
}

fn rule_for(domain: &Domain, c: &Common, origin_power: Option<f64>) -> Result<QuadratureRule> {
    let (r, a, g) = default_rule(domain);
    let (r, a, g) = (c.radial_n.unwrap_or(r), c.angular_n.unwrap_or(a), c.grading.unwrap_or(g));
    match origin_power {
        Some(gamma) => build_singular_rule(domain, r, a, gamma),
        None => build_rule(domain, r, a, g),
    }
}

/// Parses a symbol and, for `f_eps`, the origin power its rule must absorb.
fn symbol_of(text: &str) -> Result<(OperatorSymbol, Option<f64>)> {
    let parts: Vec<&str> = text.split(':').collect();
    let complex = |s: &str| parse_complex(s).ok_or_else(|| bad(format!("cannot parse `{s}`")));
    let real = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("cannot parse `{s}`")));
    Ok(match parts.as_slice() {
        ["one"] => (OperatorSymbol::one(), None),
        ["zero"] => (OperatorSymbol::zero(), None),
        ["abs2"] => (OperatorSymbol::modulus_squared(), None),
        ["const", c] => (OperatorSymbol::constant(complex(c)?), None),
        ["bump", c, r] => (OperatorSymbol::bump(complex(c)?, real(r)?), None),
        ["f_eps", e] => {
            let e = real(e)?;
            (f_eps_symbol(e)?, Some(berezin_origin_power(e)))
        }
        _ => return Err(bad(format!("unknown symbol `{text}`"))),
    })
}

fn complex_text(v: Complex64) -> String {
    format!("{}{:+}i", v.re, v.im)
}

#[derive(Serialize)]
struct PointValue {
    domain: String,
    z: CPoint,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<CPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symbol: Option<String>,
    value: [f64; 2],
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn emit(c: &Common, payload: &str) -> Result<()> {
    match &c.out {
        Some(path) => fs::write(path, payload)?,
        None => std::io::stdout().write_all(payload.as_bytes())?,
    }
    Ok(())
}

fn outcomes_csv(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::from("id,name,passed,measured,tolerance,seconds,grid,detail\n");
    let q = |t: &str| format!("\"{}\"", t.replace('"', "\"\""));
    for o in outcomes {
        s += &format!(
            "{},{},{},{:.11e},{},{:.3},{},{}\n",
            o.id,
            q(&o.name),
            o.passed,
            o.measured,
            q(&o.tolerance),
            o.seconds,
            q(&o.grid),
            q(&o.detail)
        );
    }
    s
}

/// Runs a parsed configuration and returns the process exit code.
pub fn execute(cfg: RunConfig) -> Result<i32> {
    match cfg.command {
        Command::Kernel { common, z, w } => {
            let d = domain_of(&common.domain)?;
            let z = point_of(&z, &d)?;
            let w = w.map(|w| point_of(&w, &d)).transpose()?;
            let v = kernel(&d, &z, w.as_ref().unwrap_or(&z))?;
            let out = match common.format.unwrap_or(Format::Text) {
                Format::Json => json(&PointValue { domain: d.tag(), z, w, symbol: None, value: [v.re, v.im] })?,
                _ => complex_text(v) + "\n",
            };
            emit(&common, &out)?;
        }
        Command::Berezin { common, z, symbol } => {
            let d = domain_of(&common.domain)?;
            let z = point_of(&z, &d)?;
            let (sym, gamma) = symbol_of(&symbol)?;
            if gamma.is_some() && !matches!(d, Domain::HartogsTriangle) {
                return Err(bad("f_eps is defined on the Hartogs triangle"));
            }
            let rule = rule_for(&d, &common, gamma)?;
            let v = berezin(&d, &sym, &z, &rule)?;
            let out = match common.format.unwrap_or(Format::Text) {
                Format::Json => json(&PointValue { domain: d.tag(), z, w: None, symbol: Some(symbol), value: [v.re, v.im] })?,
                _ => complex_text(v) + "\n",
            };
            emit(&common, &out)?;
        }
        Command::Norm { common, p, op, eps } => {
            let d = domain_of(&common.domain)?;
            let p = parse_p(&p)?;
            let est = if matches!(d, Domain::HartogsTriangle) {
                if op != OperatorArg::Berezin || p != 2.0 {
                    return Err(bad("on the Hartogs triangle only the Berezin transform at p = 2 is supported"));
                }
                feps_witness(&eps)?
            } else {
                let base = SectorMesh::default();
                let mesh = SectorMesh::new(
                    common.radial_n.unwrap_or(base.levels),
                    common.angular_n.unwrap_or(base.order),
                    common.grading.unwrap_or(base.ratio),
                )?;
                let kind = match op {
                    OperatorArg::Berezin => SectorOperator::Berezin,
                    OperatorArg::Projection => SectorOperator::AbsoluteProjection,
                };
                estimate_norm(&sector_matrix(&d, kind, &mesh)?, p)?
            };
            emit(&common, &json(&est)?)?;
        }
        Command::BrScan { common, depth } => {
            let d = domain_of(&common.domain)?;
            let grid = ScanGrid { count: common.radial_n.unwrap_or(ScanGrid::default().count), depth };
            emit(&common, &json(&br_scan(&d, &grid)?)?)?;
        }
        Command::Blowup { common, eps } => {
            let t = blowup_table(&eps)?;
            let out = match common.format.unwrap_or(Format::Csv) {
                Format::Json => json(&t)?,
                _ => t.to_csv(),
            };
            emit(&common, &out)?;
            eprintln!("log-log slope {:.6}", t.slope);
        }
        Command::Reproduce { common } => {
            let outcomes = run_all();
            print!("{}", render_table(&outcomes));
            if let Some(path) = &common.out {
                let payload = match common.format.unwrap_or(Format::Json) {
                    Format::Csv => outcomes_csv(&outcomes),
                    _ => json(&outcomes)?,
                };
                fs::write(path, payload)?;
            }
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

/// Parses `argv`, runs it, and maps every failure to an exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
