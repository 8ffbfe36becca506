use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

/// A point in ℂⁿ.
#[derive(Clone, PartialEq)]
pub struct CPoint(SmallVec<[Complex64; 2]>);

impl CPoint {
    pub fn new(coords: impl IntoIterator<Item = Complex64>) -> Self {
        CPoint(coords.into_iter().collect())
    }

    pub fn one(z: Complex64) -> Self {
        CPoint(smallvec::smallvec![z])
    }

    pub fn two(z1: Complex64, z2: Complex64) -> Self {
        CPoint(smallvec::smallvec![z1, z2])
    }

    /// Point with real coordinates.
    pub fn real(coords: &[f64]) -> Self {
        CPoint(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl std::ops::Index<usize> for CPoint {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl fmt::Debug for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", c.re, c.im)?;
        }
        write!(f, ")")
    }
}

// JSON form: [[re, im], [re, im], ...]
impl Serialize for CPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(CPoint::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im))))
    }
}

/// Parses a complex number written as `0.3+0.1i`, `-2i`, `0.5` or `1e-3-4e-2i`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re.parse::<f64>().ok()?, im))
}

/// Parses a comma-separated list of complex coordinates.
pub fn parse_point(text: &str) -> Option<CPoint> {
    text.split(',').map(parse_complex).collect::<Option<Vec<_>>>().map(CPoint::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complex_literals() {
        assert_eq!(parse_complex("0.3+0.1i"), Some(Complex64::new(0.3, 0.1)));
        assert_eq!(parse_complex("-2i"), Some(Complex64::new(0.0, -2.0)));
        assert_eq!(parse_complex("0.5"), Some(Complex64::new(0.5, 0.0)));
        assert_eq!(parse_complex("1e-3-4e-2i"), Some(Complex64::new(1e-3, -4e-2)));
        assert_eq!(parse_complex("i"), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(parse_complex("abc"), None);
    }

    #[test]
    fn point_json_shape() {
        let p = CPoint::two(Complex64::new(0.5, 0.0), Complex64::new(0.1, -0.2));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[0.5,0.0],[0.1,-0.2]]");
        let back: CPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
