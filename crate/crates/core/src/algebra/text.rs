//! Text forms for series and polynomials.
//!
//! Compact form: `b; w; c_w c_{w+1} … c_p`, listing the coefficients of
//! `x^{-w}, x^{-w-1}, …, x^{-p}` down to the precision `p`. Exact values end
//! with `; exact` and list coefficients up to the last nonzero one.
//!
//! Human form: `x^2 + 2*x^-1 + O(x^-6)`, where the `O(x^-k)` tail marks a
//! series known up to (excluding) `x^-k`.

use std::fmt;
use std::str::FromStr;

use super::field::Field;
use super::poly::Poly;
use super::series::Series;
use crate::error::{Error, Result};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Writes `terms` (exponent, nonzero coefficient; descending) and an optional
/// `O(x^e)` tail.
pub(crate) fn write_terms(
    f: &mut fmt::Formatter<'_>,
    terms: &[(i64, u8)],
    tail: Option<i64>,
) -> fmt::Result {
    let mut first = true;
    for &(e, c) in terms {
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        match (c, e) {
            (c, 0) => write!(f, "{c}")?,
            (1, 1) => f.write_str("x")?,
            (1, e) => write!(f, "x^{e}")?,
            (c, 1) => write!(f, "{c}*x")?,
            (c, e) => write!(f, "{c}*x^{e}")?,
        }
    }
    match tail {
        Some(e) => {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "O(x^{e})")
        }
        None if first => f.write_str("0"),
        None => Ok(()),
    }
}

impl Series {
    pub fn to_compact(&self) -> String {
        let b = self.field().order();
        let (top, coeffs) = self.window();
        match self.precision() {
            None => {
                let w = if self.is_zero() { 0 } else { -top };
                let cs: Vec<String> = coeffs.iter().map(u8::to_string).collect();
                format!("{b}; {w}; {}; exact", cs.join(" "))
            }
            Some(p) => {
                let w = if self.is_zero() { p + 1 } else { -top };
                let cs: Vec<String> =
                    (w..=p).map(|i| self.coeff(-i).unwrap_or(0).to_string()).collect();
                format!("{b}; {w}; {}", cs.join(" "))
            }
        }
    }

    pub fn parse_compact(s: &str) -> Result<Series> {
        let parts: Vec<&str> = s.split(';').map(str::trim).collect();
        let exact = match parts.len() {
            3 => false,
            4 if parts[3] == "exact" => true,
            _ => return Err(parse_err(format!("expected `b; w; coeffs[; exact]`, got {s:?}"))),
        };
        let b: u32 = parts[0].parse().map_err(|_| parse_err(format!("bad modulus {:?}", parts[0])))?;
        let field = Field::new(b)?;
        let w: i64 = parts[1].parse().map_err(|_| parse_err(format!("bad index {:?}", parts[1])))?;
        let coeffs = parts[2]
            .split_whitespace()
            .map(|t| match t.parse::<u32>() {
                Ok(c) if c < b => Ok(c as u8),
                _ => Err(parse_err(format!("bad coefficient {t:?} for b={b}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        let prec = if exact { None } else { Some(w + coeffs.len() as i64 - 1) };
        Ok(Series::from_coeffs(field, -w, coeffs, prec))
    }

    /// Parses the human form over the given field.
    pub fn parse_human(field: Field, s: &str) -> Result<Series> {
        let (terms, tail) = parse_terms(field, s)?;
        let prec = tail.map(|e| -e - 1);
        let mut acc = match prec {
            Some(p) => Series::zero_to(field, p),
            None => Series::zero(field),
        };
        for (e, c) in terms {
            if let Some(p) = prec {
                if e < -p {
                    return Err(parse_err(format!("term x^{e} lies beyond the O() tail")));
                }
            }
            acc = &acc + &Series::monomial(field, c, e);
        }
        Ok(acc)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (top, coeffs) = self.window();
        let terms: Vec<(i64, u8)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (top - k as i64, c))
            .collect();
        let tail = self.precision().map(|p| -p - 1);
        write_terms(f, &terms, tail)
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Series> {
        Series::parse_compact(s)
    }
}

impl Poly {
    /// Parses `x^3 + 2*x + 1` style input over the given field.
    pub fn parse(field: Field, s: &str) -> Result<Poly> {
        let (terms, tail) = parse_terms(field, s)?;
        if tail.is_some() {
            return Err(parse_err("polynomials have no O() tail"));
        }
        let mut acc = Poly::zero(field);
        for (e, c) in terms {
            if e < 0 {
                return Err(parse_err(format!("negative exponent {e} in a polynomial")));
            }
            acc = &acc + &Poly::monomial(field, c, e as usize);
        }
        Ok(acc)
    }
}

/// Splits a sum of terms `c*x^e`, `x^e`, `c*x`, `x`, `c`, `O(x^e)`.
fn parse_terms(field: Field, s: &str) -> Result<(Vec<(i64, u8)>, Option<i64>)> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(parse_err("empty expression"));
    }
    let mut terms = Vec::new();
    let mut tail = None;
    for raw in compact.split('+') {
        if raw.is_empty() {
            return Err(parse_err(format!("empty term in {s:?}")));
        }
        if let Some(inner) = raw.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            if tail.is_some() {
                return Err(parse_err("more than one O() tail"));
            }
            let (c, e) = parse_monomial(inner)?;
            if c != 1 {
                return Err(parse_err("O() takes a bare power of x"));
            }
            tail = Some(e);
            continue;
        }
        let (c, e) = parse_monomial(raw)?;
        terms.push((e, field.reduce(c)));
    }
    Ok((terms, tail))
}

fn parse_monomial(t: &str) -> Result<(u64, i64)> {
    let bad = || parse_err(format!("cannot parse term {t:?}"));
    let (coef, var) = match t.split_once('*') {
        Some((c, v)) => (Some(c), v),
        None if t.starts_with('x') => (None, t),
        None => (Some(t), ""),
    };
    let c: u64 = match coef {
        Some(c) => c.parse().map_err(|_| bad())?,
        None => 1,
    };
    let e = if var.is_empty() {
        0
    } else if var == "x" {
        1
    } else if let Some(e) = var.strip_prefix("x^") {
        e.parse().map_err(|_| bad())?
    } else {
        return Err(bad());
    };
    Ok((c, e))
}
