//! Columnar rule files.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic  b"BGQR"   version u32 = 1
//! tag_len u32      tag bytes (UTF-8 domain tag)
//! dim u32          radial_n u64   angular_n u64
//! grading f64      origin_power f64 (NaN when absent)
//! count u64
//! count records:   re₁ im₁ … reₙ imₙ weight   (f64 each)
//! ```

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use super::rule::{QuadratureRule, RuleMeta};
use crate::domains::Domain;
use crate::error::{Error, Result};
use crate::point::CPoint;

const MAGIC: &[u8; 4] = b"BGQR";
const VERSION: u32 = 1;

pub fn write_rule<W: Write>(rule: &QuadratureRule, mut out: W) -> Result<()> {
    let meta = rule.meta();
    out.write_all(MAGIC)?;
    out.write_u32::<LittleEndian>(VERSION)?;
    out.write_u32::<LittleEndian>(meta.domain.len() as u32)?;
    out.write_all(meta.domain.as_bytes())?;
    out.write_u32::<LittleEndian>(rule.domain().dim() as u32)?;
    out.write_u64::<LittleEndian>(meta.radial_n as u64)?;
    out.write_u64::<LittleEndian>(meta.angular_n as u64)?;
    out.write_f64::<LittleEndian>(meta.grading)?;
    out.write_f64::<LittleEndian>(meta.origin_power.unwrap_or(f64::NAN))?;
    out.write_u64::<LittleEndian>(rule.len() as u64)?;
    for (z, w) in rule.iter() {
        for c in z.coords() {
            out.write_f64::<LittleEndian>(c.re)?;
            out.write_f64::<LittleEndian>(c.im)?;
        }
        out.write_f64::<LittleEndian>(w)?;
    }
    Ok(())
}

/// Reads a rule written by [`write_rule`]. Only closed-form domain tags are
/// accepted, since a Reinhardt profile cannot be rebuilt from its name.
pub fn read_rule<R: Read>(mut input: R) -> Result<QuadratureRule> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = input.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let tag_len = input.read_u32::<LittleEndian>()? as usize;
    if tag_len > 256 {
        return Err(Error::Format(format!("tag length {tag_len} is implausible")));
    }
    let mut tag = vec![0u8; tag_len];
    input.read_exact(&mut tag)?;
    let tag = String::from_utf8(tag).map_err(|e| Error::Format(e.to_string()))?;
    let domain = Domain::from_tag(&tag).ok_or_else(|| Error::Format(format!("unknown domain tag `{tag}`")))?;
    let dim = input.read_u32::<LittleEndian>()? as usize;
    if dim != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: dim });
    }
    let radial_n = input.read_u64::<LittleEndian>()? as usize;
    let angular_n = input.read_u64::<LittleEndian>()? as usize;
    let grading = input.read_f64::<LittleEndian>()?;
    let op = input.read_f64::<LittleEndian>()?;
    let count = input.read_u64::<LittleEndian>()? as usize;
    let mut nodes = Vec::with_capacity(count.min(1 << 24));
    let mut weights = Vec::with_capacity(count.min(1 << 24));
    for _ in 0..count {
        let mut coords = Vec::with_capacity(dim);
        for _ in 0..dim {
            let re = input.read_f64::<LittleEndian>()?;
            let im = input.read_f64::<LittleEndian>()?;
            coords.push(Complex64::new(re, im));
        }
        nodes.push(CPoint::new(coords));
        weights.push(input.read_f64::<LittleEndian>()?);
    }
    let meta = RuleMeta {
        domain: tag,
        radial_n,
        angular_n,
        grading,
        origin_power: if op.is_nan() { None } else { Some(op) },
    };
    QuadratureRule::explicit(&domain, meta, nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_rule;

    #[test]
    fn round_trip() {
        let rule = build_rule(&Domain::HartogsTriangle, 6, 4, 3.0).unwrap();
        let mut buf = Vec::new();
        write_rule(&rule, &mut buf).unwrap();
        let dim = 2;
        let header = 4 + 4 + 4 + "hartogs".len() + 4 + 8 + 8 + 8 + 8 + 8;
        assert_eq!(buf.len(), header + rule.len() * (2 * dim + 1) * 8);
        let back = read_rule(buf.as_slice()).unwrap();
        assert_eq!(back.meta(), rule.meta());
        assert_eq!(back.len(), rule.len());
        for i in 0..rule.len() {
            assert_eq!(back.node(i), rule.node(i));
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(read_rule(&b"NOPE...."[..]), Err(Error::Format(_))));
    }
}
