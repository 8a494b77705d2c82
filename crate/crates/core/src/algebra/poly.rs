use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::field::Field;

/// Degree valuation: an integer or −∞ (the degree of zero). Serializes as
/// the integer or the string `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "DegRepr", try_from = "DegRepr")]
pub enum Deg {
    NegInf,
    Finite(i64),
}

impl Deg {
    pub fn finite(self) -> Option<i64> {
        match self {
            Deg::NegInf => None,
            Deg::Finite(v) => Some(v),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, Deg::NegInf)
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum DegRepr {
    Finite(i64),
    Text(String),
}

impl From<Deg> for DegRepr {
    fn from(d: Deg) -> Self {
        match d {
            Deg::Finite(v) => DegRepr::Finite(v),
            Deg::NegInf => DegRepr::Text("-inf".into()),
        }
    }
}

impl TryFrom<DegRepr> for Deg {
    type Error = String;

    fn try_from(r: DegRepr) -> std::result::Result<Self, String> {
        match r {
            DegRepr::Finite(v) => Ok(Deg::Finite(v)),
            DegRepr::Text(s) if s == "-inf" => Ok(Deg::NegInf),
            DegRepr::Text(s) => Err(format!("bad degree {s:?}")),
        }
    }
}

impl Add for Deg {
    type Output = Deg;

    fn add(self, rhs: Deg) -> Deg {
        match (self, rhs) {
            (Deg::Finite(a), Deg::Finite(c)) => Deg::Finite(a + c),
            _ => Deg::NegInf,
        }
    }
}

impl fmt::Display for Deg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Deg::NegInf => write!(f, "-inf"),
            Deg::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// A polynomial in F_b[x], coefficients stored by ascending power.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u8>,
}

impl Poly {
    pub fn zero(field: Field) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: Field, c: u8) -> Self {
        Self::new(field, vec![c])
    }

    /// `c · x^k`.
    pub fn monomial(field: Field, c: u8, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    pub fn x_pow(field: Field, k: usize) -> Self {
        Self::monomial(field, 1, k)
    }

    /// Builds from ascending coefficients, reducing mod b and trimming.
    pub fn new(field: Field, coeffs: Vec<u8>) -> Self {
        let mut coeffs: Vec<u8> = coeffs.into_iter().map(|c| field.reduce(c as u64)).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    /// The polynomial whose coefficients are the base-b digits of `index`
    /// (least significant digit = constant term). Enumerating `0..b^k` visits
    /// every polynomial of degree < k in increasing numeric order.
    pub fn from_index(field: Field, mut index: u64) -> Self {
        let b = field.order() as u64;
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push((index % b) as u8);
            index /= b;
        }
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u8 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Deg {
        if self.coeffs.is_empty() {
            Deg::NegInf
        } else {
            Deg::Finite(self.coeffs.len() as i64 - 1)
        }
    }

    /// Number of stored coefficients (`deg + 1`, or 0 for zero).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: u8) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Horner evaluation at another polynomial.
    pub fn compose(&self, at: &Poly) -> Poly {
        let mut acc = Poly::zero(self.field);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + &Poly::constant(self.field, c);
        }
        acc
    }

    fn zip_with(&self, other: &Poly, op: impl Fn(u8, u8) -> u8) -> Poly {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| op(self.coeff(k), other.coeff(k))).collect();
        Poly::new(self.field, coeffs)
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let f = self.field;
        self.zip_with(rhs, |a, c| f.add(a, c))
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let f = self.field;
        self.zip_with(rhs, |a, c| f.sub(a, c))
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "polynomials over different fields");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &c) in rhs.coeffs.iter().enumerate() {
                acc[i + j] += a as u64 * c as u64;
            }
        }
        let f = self.field;
        Poly::new(f, acc.into_iter().map(|v| f.reduce(v)).collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[b={}]({})", self.field.order(), self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, u8)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k as i64, c))
            .collect();
        super::text::write_terms(f, &terms, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    #[test]
    fn square_of_x_plus_one_over_f2() {
        let p = Poly::new(f2(), vec![1, 1]);
        let sq = &p * &p;
        assert_eq!(sq, Poly::new(f2(), vec![1, 0, 1]));
        assert_eq!(sq.deg(), Deg::Finite(2));
    }

    #[test]
    fn zero_has_neg_inf_degree() {
        assert_eq!(Poly::zero(f2()).deg(), Deg::NegInf);
        assert_eq!(Poly::new(f2(), vec![0, 2, 0]).deg(), Deg::NegInf);
    }

    #[test]
    fn degree_json() {
        assert_eq!(serde_json::to_string(&Deg::Finite(-1)).unwrap(), "-1");
        assert_eq!(serde_json::to_string(&Deg::NegInf).unwrap(), "\"-inf\"");
        assert_eq!(serde_json::from_str::<Deg>("\"-inf\"").unwrap(), Deg::NegInf);
        assert_eq!(serde_json::from_str::<Deg>("3").unwrap(), Deg::Finite(3));
    }

    #[test]
    fn from_index_orders_numerically() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(Poly::from_index(f3, 0), Poly::zero(f3));
        assert_eq!(Poly::from_index(f3, 3), Poly::x_pow(f3, 1));
        assert_eq!(Poly::from_index(f3, 5), Poly::new(f3, vec![2, 1]));
    }

    #[test]
    fn degree_arithmetic() {
        assert_eq!(Deg::Finite(2) + Deg::Finite(-3), Deg::Finite(-1));
        assert_eq!(Deg::Finite(2) + Deg::NegInf, Deg::NegInf);
        assert!(Deg::NegInf < Deg::Finite(-1000));
    }
}
