use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::poly::{Deg, Poly};
use crate::error::{Error, Result};

/// Precision value used for exactly known series (polynomials, monomials).
pub(crate) const EXACT: i64 = i64::MAX / 4;

/// Precision cap used when an exact series must be divided by an exact
/// non-monomial and no other bound is available.
pub const EXACT_DIVISION_CAP: i64 = 256;

fn clamp_prec(p: i64) -> i64 {
    if p > EXACT / 2 {
        EXACT
    } else {
        p
    }
}

/// A truncated Laurent series `Σ_{e ≤ top} c_e x^e` over F_b with tracked
/// absolute precision.
///
/// Every coefficient of `x^e` with `e ≥ -prec` is known; the stored window
/// runs from `top` down to the last nonzero known coefficient, and every known
/// coefficient outside the window is zero. A series whose known window holds
/// only zeros is *zero up to precision*: it reports degree −∞ and refuses any
/// operation that needs its leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    field: Field,
    top: i64,
    coeffs: Vec<u8>,
    prec: i64,
}

impl Series {
    pub fn zero(field: Field) -> Self {
        Self { field, top: 0, coeffs: Vec::new(), prec: EXACT }
    }

    /// Zero known to precision `prec` (unknown below `x^{-prec}`).
    pub fn zero_to(field: Field, prec: i64) -> Self {
        Self { field, top: 0, coeffs: Vec::new(), prec: clamp_prec(prec) }
    }

    pub fn one(field: Field) -> Self {
        Self::monomial(field, 1, 0)
    }

    pub fn constant(field: Field, c: u8) -> Self {
        Self::monomial(field, c, 0)
    }

    /// Exact `c · x^e`.
    pub fn monomial(field: Field, c: u8, e: i64) -> Self {
        Self::from_coeffs(field, e, vec![c], None)
    }

    pub fn from_poly(p: &Poly) -> Self {
        let coeffs: Vec<u8> = p.coeffs().iter().rev().copied().collect();
        let top = p.len() as i64 - 1;
        Self::from_coeffs(p.field(), top, coeffs, None)
    }

    /// Builds `Σ_k coeffs[k] x^{top-k}` known down to `x^{-prec}` (`None` =
    /// exact). Coefficients below `x^{-prec}` are discarded.
    pub fn from_coeffs(field: Field, top: i64, coeffs: Vec<u8>, prec: Option<i64>) -> Self {
        let prec = prec.map(clamp_prec).unwrap_or(EXACT);
        let mut s = Self {
            field,
            top,
            coeffs: coeffs.into_iter().map(|c| field.reduce(c as u64)).collect(),
            prec,
        };
        s.normalize();
        s
    }

    /// Restores the representation invariants.
    fn normalize(&mut self) {
        self.prec = clamp_prec(self.prec);
        let keep = (self.top + self.prec + 1).max(0);
        if (self.coeffs.len() as i64) > keep {
            self.coeffs.truncate(keep as usize);
        }
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.top = 0;
            }
            Some(k) => {
                if k > 0 {
                    self.coeffs.drain(..k);
                    self.top -= k as i64;
                }
                while self.coeffs.last() == Some(&0) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Absolute precision: coefficients of `x^e` are known for `e ≥ -prec`.
    /// `None` means the series is exact.
    pub fn precision(&self) -> Option<i64> {
        if self.is_exact() {
            None
        } else {
            Some(self.prec)
        }
    }

    pub fn deg(&self) -> Deg {
        if self.is_zero() {
            Deg::NegInf
        } else {
            Deg::Finite(self.top)
        }
    }

    /// Leading index `w` with `f = Σ_{i ≥ w} c_i x^{-i}`; `None` when zero.
    pub fn lead_exp(&self) -> Option<i64> {
        self.deg().finite().map(|d| -d)
    }

    /// Upper bound on the true degree: the degree itself, or `-(prec+1)` for
    /// a series that is zero up to precision.
    pub(crate) fn deg_bound(&self) -> i64 {
        if self.is_zero() {
            -(self.prec + 1)
        } else {
            self.top
        }
    }

    /// Coefficient of `x^e`, or `None` if it lies below the known window.
    pub fn coeff(&self, e: i64) -> Option<u8> {
        if e < -self.prec {
            return None;
        }
        if self.is_zero() || e > self.top {
            return Some(0);
        }
        let k = (self.top - e) as usize;
        Some(self.coeffs.get(k).copied().unwrap_or(0))
    }

    /// Lowest exponent held in the stored window.
    fn low(&self) -> i64 {
        self.top - self.coeffs.len() as i64 + 1
    }

    /// Lowers precision to at most `prec`.
    pub fn truncated(&self, prec: i64) -> Series {
        let mut s = self.clone();
        s.prec = s.prec.min(prec);
        s.normalize();
        s
    }

    pub fn try_add(&self, rhs: &Series) -> Result<Series> {
        self.field.check_same(rhs.field)?;
        Ok(self.add_impl(rhs, false))
    }

    pub fn try_sub(&self, rhs: &Series) -> Result<Series> {
        self.field.check_same(rhs.field)?;
        Ok(self.add_impl(rhs, true))
    }

    fn add_impl(&self, rhs: &Series, negate_rhs: bool) -> Series {
        let f = self.field;
        let prec = self.prec.min(rhs.prec);
        let mut hi = i64::MIN;
        let mut lo = i64::MAX;
        for s in [self, rhs] {
            if !s.is_zero() {
                hi = hi.max(s.top);
                lo = lo.min(s.low());
            }
        }
        if hi == i64::MIN {
            return Series::zero_to(f, prec);
        }
        lo = lo.max(-prec);
        if lo > hi {
            return Series::zero_to(f, prec);
        }
        let mut coeffs = vec![0u8; (hi - lo + 1) as usize];
        for (s, neg) in [(self, false), (rhs, negate_rhs)] {
            for (k, &c) in s.coeffs.iter().enumerate() {
                let e = s.top - k as i64;
                if e < lo {
                    break;
                }
                let c = if neg { f.neg(c) } else { c };
                let slot = &mut coeffs[(hi - e) as usize];
                *slot = f.add(*slot, c);
            }
        }
        Series::from_coeffs(f, hi, coeffs, Some(prec))
    }

    pub fn try_mul(&self, rhs: &Series) -> Result<Series> {
        self.field.check_same(rhs.field)?;
        Ok(self.mul_impl(rhs))
    }

    fn mul_impl(&self, rhs: &Series) -> Series {
        let f = self.field;
        // Error terms: (f + O(x^{-pf-1}))(g + O(x^{-pg-1})).
        let prec = clamp_prec(
            (self.prec - rhs.deg_bound())
                .min(rhs.prec - self.deg_bound())
                .min(EXACT),
        );
        if self.is_zero() || rhs.is_zero() {
            return Series::zero_to(f, prec);
        }
        let top = self.top + rhs.top;
        let lo = (self.low() + rhs.low()).max(-prec);
        if lo > top {
            return Series::zero_to(f, prec);
        }
        let len = (top - lo + 1) as usize;
        let mut acc = vec![0u64; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a == 0 {
                continue;
            }
            let room = (len - i).min(rhs.coeffs.len());
            for (j, &c) in rhs.coeffs[..room].iter().enumerate() {
                acc[i + j] += a as u64 * c as u64;
            }
        }
        let coeffs = acc.into_iter().map(|v| f.reduce(v)).collect();
        Series::from_coeffs(f, top, coeffs, Some(prec))
    }

    pub fn scale(&self, c: u8) -> Series {
        let f = self.field;
        if c % f.order() as u8 == 0 {
            return Series::zero_to(f, self.prec);
        }
        let coeffs = self.coeffs.iter().map(|&a| f.mul(a, c)).collect();
        Series::from_coeffs(f, self.top, coeffs, Some(self.prec))
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Series {
        let mut s = self.clone();
        if !s.is_exact() {
            s.prec -= k;
        }
        if !s.is_zero() {
            s.top += k;
        }
        s.normalize();
        s
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut acc = Series::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Natural precision of the inverse: `prec + 2·deg`.
    fn natural_inv_prec(&self) -> i64 {
        clamp_prec(self.prec + 2 * self.top)
    }

    /// Inverse at its natural precision.
    ///
    /// Fails with `DivideByZero` for a series that is zero up to precision and
    /// with `Unbounded` for an exact non-monomial (use [`Series::inv_to`]).
    pub fn inv(&self) -> Result<Series> {
        self.inv_to(EXACT)
    }

    /// Inverse computed to precision at most `cap`.
    pub fn inv_to(&self, cap: i64) -> Result<Series> {
        let f = self.field;
        if self.is_zero() {
            return Err(Error::DivideByZero { prec: self.prec });
        }
        let lead_inv = f.inv(self.coeffs[0]).expect("leading coefficient is nonzero");
        if self.coeffs.len() == 1 {
            let prec = if self.is_exact() { EXACT } else { self.natural_inv_prec() };
            return Ok(Series::from_coeffs(f, -self.top, vec![lead_inv], Some(prec.min(cap))));
        }
        let prec = self.natural_inv_prec().min(cap);
        if prec >= EXACT {
            return Err(Error::Unbounded);
        }
        // h = Σ_k h_k x^{-top-k}, from Σ_{i≤k} a_i h_{k-i} = δ_{k0}.
        let top = -self.top;
        if top < -prec {
            return Ok(Series::zero_to(f, prec));
        }
        let n = (top + prec + 1) as usize;
        let a = &self.coeffs;
        let mut h = vec![0u8; n];
        for k in 0..n {
            let mut s: u64 = if k == 0 { 1 } else { 0 };
            let b = f.order() as u64;
            let upper = k.min(a.len() - 1);
            let mut sub: u64 = 0;
            for i in 1..=upper {
                sub += a[i] as u64 * h[k - i] as u64;
            }
            s = (s + (b - sub % b)) % b;
            h[k] = f.mul(s as u8, lead_inv);
        }
        Ok(Series::from_coeffs(f, top, h, Some(prec)))
    }

    /// `self / rhs` at its natural precision. When `rhs` is exact the
    /// quotient keeps `prec(self) + deg(rhs)`.
    pub fn div(&self, rhs: &Series) -> Result<Series> {
        self.field.check_same(rhs.field)?;
        if rhs.is_zero() {
            return Err(Error::DivideByZero { prec: rhs.prec });
        }
        if self.is_zero() && self.is_exact() {
            return Ok(Series::zero(self.field));
        }
        let target = clamp_prec(
            (self.prec + rhs.top).min(rhs.natural_inv_prec() - self.deg_bound()),
        );
        if target >= EXACT {
            if rhs.coeffs.len() == 1 {
                return Ok(self * &rhs.inv()?);
            }
            return Err(Error::Unbounded);
        }
        self.div_to(rhs, target)
    }

    /// `self / rhs` truncated at precision `cap`.
    pub fn div_to(&self, rhs: &Series, cap: i64) -> Result<Series> {
        self.field.check_same(rhs.field)?;
        let inv_cap = cap.saturating_add(self.deg_bound().max(-EXACT));
        let inv = rhs.inv_to(inv_cap.min(EXACT))?;
        Ok((self * &inv).truncated(cap))
    }

    /// Polynomial part `⌈g⌉`: the terms with nonnegative exponent.
    pub fn poly_part(&self) -> Result<Poly> {
        let f = self.field;
        if !self.is_zero() && self.top < 0 {
            return Ok(Poly::zero(f));
        }
        if self.prec < 0 {
            return Err(Error::PrecisionExhausted(format!(
                "polynomial part needs precision >= 0, have {}",
                self.prec
            )));
        }
        if self.is_zero() {
            return Ok(Poly::zero(f));
        }
        let coeffs = (0..=self.top).map(|e| self.coeff(e).unwrap_or(0)).collect();
        Ok(Poly::new(f, coeffs))
    }

    /// Residue: the coefficient of `x^{-1}`.
    pub fn res(&self) -> Result<u8> {
        if !self.is_zero() && self.top < -1 {
            return Ok(0);
        }
        self.coeff(-1).ok_or_else(|| {
            Error::PrecisionExhausted(format!("residue needs precision >= 1, have {}", self.prec))
        })
    }

    fn check_unit_cube(&self) -> Result<()> {
        if !self.is_zero() && self.top >= 0 {
            return Err(Error::PreconditionViolated(format!(
                "series of degree {} is not in the digital unit cube",
                self.top
            )));
        }
        if self.is_zero() && self.prec < 0 {
            return Err(Error::PrecisionExhausted(
                "cannot decide membership in the unit cube".into(),
            ));
        }
        Ok(())
    }

    /// Truncation `tr_n`: the digits `c_1, .., c_n` of `Σ c_i x^{-i}`.
    pub fn digits(&self, n: usize) -> Result<Vec<u8>> {
        self.check_unit_cube()?;
        if self.prec < n as i64 {
            return Err(Error::PrecisionExhausted(format!(
                "{n} digits requested, precision is {}",
                self.prec
            )));
        }
        Ok((1..=n as i64).map(|i| self.coeff(-i).unwrap_or(0)).collect())
    }

    /// `tr_n` as a series `Σ_{i=1}^n c_i x^{-i}` (exact).
    pub fn truncate(&self, n: usize) -> Result<Series> {
        let d = self.digits(n)?;
        Ok(Series::from_coeffs(self.field, -1, d, None))
    }

    /// `φ_n`: the rational `a / b^n` with `a = Σ c_i b^{n-i}`, plus its float.
    pub fn phi(&self, n: usize) -> Result<BaseFraction> {
        let digits = self.digits(n)?;
        BaseFraction::from_digits(self.field.order(), &digits)
    }

    /// Frobenius `h ↦ h^b`, which in characteristic b spreads the exponents.
    pub fn frobenius(&self) -> Series {
        let f = self.field;
        let b = f.order() as i64;
        let prec = if self.is_exact() { EXACT } else { b * (self.prec + 1) - 1 };
        if self.is_zero() {
            return Series::zero_to(f, prec);
        }
        let mut coeffs = vec![0u8; (self.coeffs.len() - 1) * b as usize + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * b as usize] = c;
        }
        Series::from_coeffs(f, self.top * b, coeffs, Some(prec))
    }

    /// `Σ_{i≥0} h^{b^i}` to precision `target`, requiring `deg h < 0`.
    pub fn frobenius_sum(&self, target: i64) -> Result<Series> {
        let bound = self.deg_bound();
        if bound >= 0 {
            return Err(Error::NonConvergent { deg: bound });
        }
        let mut acc = Series::zero(self.field);
        let mut term = self.clone();
        loop {
            acc = &acc + &term;
            if term.is_zero() && term.prec >= target {
                break;
            }
            if term.deg_bound() < -target {
                break;
            }
            term = term.frobenius();
        }
        Ok(acc.truncated(target))
    }

    /// True when the two series agree on their common known window.
    pub fn agrees_with(&self, other: &Series) -> bool {
        if self.field != other.field {
            return false;
        }
        (self - other).is_zero()
    }

    pub(crate) fn window(&self) -> (i64, &[u8]) {
        (self.top, &self.coeffs)
    }
}

impl Add for &Series {
    type Output = Series;

    fn add(self, rhs: &Series) -> Series {
        self.try_add(rhs).expect("series over different fields")
    }
}

impl Sub for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        self.try_sub(rhs).expect("series over different fields")
    }
}

impl Mul for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("series over different fields")
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        let f = self.field;
        let coeffs = self.coeffs.iter().map(|&c| f.neg(c)).collect();
        Series::from_coeffs(f, self.top, coeffs, Some(self.prec))
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[b={}]({})", self.field.order(), self)
    }
}

/// An exact base-b fraction `numerator / b^digits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseFraction {
    pub numerator: u128,
    pub base: u32,
    pub digits: u32,
}

impl BaseFraction {
    pub fn from_digits(base: u32, digits: &[u8]) -> Result<Self> {
        let mut num: u128 = 0;
        for &c in digits {
            num = num
                .checked_mul(base as u128)
                .and_then(|v| v.checked_add(c as u128))
                .ok_or_else(|| Error::PrecisionExhausted("fraction exceeds 128 bits".into()))?;
        }
        Ok(Self { numerator: num, base, digits: digits.len() as u32 })
    }

    pub fn denominator(&self) -> Option<u128> {
        (self.base as u128).checked_pow(self.digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / (self.base as f64).powi(self.digits as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(b: u32) -> Field {
        Field::new(b).unwrap()
    }

    /// ξ = Σ_{i≥0} x^{-2^i} over F_2, known to precision `p`.
    fn xi(p: i64) -> Series {
        let mut c = vec![0u8; p as usize];
        let mut e = 1usize;
        while e <= p as usize {
            c[e - 1] = 1;
            e *= 2;
        }
        Series::from_coeffs(f(2), -1, c, Some(p))
    }

    #[test]
    fn degree_examples() {
        assert_eq!(Series::zero(f(2)).deg(), Deg::NegInf);
        let s = &Series::monomial(f(2), 1, 3) + &Series::monomial(f(2), 1, -1);
        assert_eq!(s.deg(), Deg::Finite(3));
        let p = Series::from_poly(&Poly::new(f(2), vec![1, 1]));
        assert_eq!((&p * &p).deg(), Deg::Finite(2));
    }

    #[test]
    fn add_examples() {
        let b = f(5);
        let a = Series::monomial(b, 1, -1);
        let z = Series::zero(b);
        assert_eq!(&a + &z, a);
        assert!((&a + &Series::monomial(b, 4, -1)).is_zero());
        let g = f(2);
        let l = &Series::monomial(g, 1, 1) + &Series::monomial(g, 1, -1);
        let r = &Series::monomial(g, 1, 1) + &Series::monomial(g, 1, -2);
        let want = &Series::monomial(g, 1, -1) + &Series::monomial(g, 1, -2);
        assert_eq!(&l + &r, want);
    }

    #[test]
    fn add_takes_min_precision() {
        let g = f(3);
        let a = Series::from_coeffs(g, 0, vec![1, 2, 1], Some(5));
        let c = Series::from_coeffs(g, -1, vec![1], Some(3));
        assert_eq!((&a + &c).precision(), Some(3));
    }

    #[test]
    fn mul_examples() {
        let g = f(2);
        let x2 = Series::monomial(g, 1, 2);
        let xm2 = Series::monomial(g, 1, -2);
        assert_eq!(&x2 * &xm2, Series::one(g));
        let s = xi(40);
        assert_eq!(&s * &Series::one(g), s);
        // ξ² = ξ + x^{-1} in characteristic 2
        let sq = &s * &s;
        let want = &s + &Series::monomial(g, 1, -1);
        assert!(sq.agrees_with(&want));
        assert_eq!(sq.precision(), Some(41));
    }

    #[test]
    fn mul_precision_contract() {
        let g = f(3);
        let a = Series::from_coeffs(g, 2, vec![1, 1], Some(4));
        let c = Series::from_coeffs(g, -1, vec![2, 0, 1], Some(6));
        let p = &a * &c;
        assert_eq!(p.precision(), Some((4 - (-1)).min(6 - 2)));
    }

    #[test]
    fn inv_examples() {
        let g = f(2);
        assert_eq!(Series::one(g).inv().unwrap(), Series::one(g));
        assert_eq!(Series::monomial(g, 1, 2).inv().unwrap(), Series::monomial(g, 1, -2));
        let one_plus = &Series::one(g) + &xi(30);
        let h = one_plus.inv().unwrap();
        assert_eq!(h.precision(), Some(30));
        let r = &(&one_plus * &h) - &Series::one(g);
        assert!(r.is_zero());
        assert!(r.precision().unwrap() >= 30);
    }

    #[test]
    fn inv_precision_follows_degree() {
        let g = f(3);
        // deg -2, known to 10: inverse known to 10 + 2(-2) = 6
        let a = Series::from_coeffs(g, -2, vec![1, 2, 0, 1], Some(10));
        assert_eq!(a.inv().unwrap().precision(), Some(6));
        let z = Series::zero_to(g, 10);
        assert!(matches!(z.inv(), Err(Error::DivideByZero { .. })));
        let exact = Series::from_poly(&Poly::new(g, vec![1, 1]));
        assert!(matches!(exact.inv(), Err(Error::Unbounded)));
        assert_eq!(exact.inv_to(12).unwrap().precision(), Some(12));
    }

    #[test]
    fn poly_part_examples() {
        let g = f(2);
        let s = Series::from_coeffs(g, 2, vec![1, 0, 1, 1], None);
        assert_eq!(s.poly_part().unwrap(), Poly::new(g, vec![1, 0, 1]));
        assert!(Series::monomial(g, 1, -3).poly_part().unwrap().is_zero());
        assert!(Series::zero(g).poly_part().unwrap().is_zero());
        assert!(Series::zero_to(g, -2).poly_part().is_err());
    }

    #[test]
    fn residue_examples() {
        assert_eq!(Series::monomial(f(2), 1, -1).res().unwrap(), 1);
        let g = f(7);
        let s = &Series::monomial(g, 1, 2) + &Series::monomial(g, 5, -2);
        assert_eq!(s.res().unwrap(), 0);
        let g3 = f(3);
        let s = &Series::monomial(g3, 2, -1) + &Series::monomial(g3, 1, -4);
        assert_eq!(s.res().unwrap(), 2);
        assert!(Series::zero_to(g3, 0).res().is_err());
    }

    #[test]
    fn truncation_examples() {
        let g = f(2);
        let s = Series::from_coeffs(g, -1, vec![1, 1, 0, 1], None);
        assert_eq!(s.digits(2).unwrap(), vec![1, 1]);
        assert_eq!(Series::zero(g).digits(3).unwrap(), vec![0, 0, 0]);
        assert_eq!(Series::monomial(g, 1, -2).digits(1).unwrap(), vec![0]);
        assert!(Series::monomial(g, 1, 0).digits(1).is_err());
        assert!(Series::from_coeffs(g, -1, vec![1], Some(2)).digits(3).is_err());
    }

    #[test]
    fn phi_examples() {
        let g = f(2);
        let a = Series::monomial(g, 1, -1).phi(2).unwrap();
        assert_eq!((a.numerator, a.denominator().unwrap()), (2, 4));
        assert_eq!(a.to_f64(), 0.5);
        let s = Series::from_coeffs(g, -1, vec![1, 1], None).phi(2).unwrap();
        assert_eq!((s.numerator, s.denominator().unwrap()), (3, 4));
        let g3 = f(3);
        let t = &Series::monomial(g3, 2, -1) + &Series::monomial(g3, 1, -3);
        let t = t.phi(3).unwrap();
        assert_eq!((t.numerator, t.denominator().unwrap()), (19, 27));
    }

    #[test]
    fn frobenius_sum_examples() {
        let g = f(2);
        assert!(Series::zero(g).frobenius_sum(20).unwrap().is_zero());
        let s = Series::monomial(g, 1, -1).frobenius_sum(40).unwrap();
        assert!(s.agrees_with(&xi(40)));
        assert_eq!(s.precision(), Some(40));
        // s² + s = x^{-1} up to precision
        let lhs = &(&s * &s) + &s;
        assert!(lhs.agrees_with(&Series::monomial(g, 1, -1)));

        let g3 = f(3);
        let s3 = Series::monomial(g3, 1, -2).frobenius_sum(60).unwrap();
        for e in 1..=60i64 {
            let want = matches!(e, 2 | 6 | 18 | 54) as u8;
            assert_eq!(s3.coeff(-e), Some(want), "exponent -{e}");
        }
        assert!(matches!(
            Series::monomial(g, 1, 0).frobenius_sum(5),
            Err(Error::NonConvergent { .. })
        ));
    }

    #[test]
    fn frobenius_precision() {
        let g = f(3);
        let h = Series::from_coeffs(g, -1, vec![1, 2], Some(4));
        let h3 = h.frobenius();
        assert_eq!(h3.precision(), Some(14));
        assert!(h3.agrees_with(&h.pow(3)));
    }

    #[test]
    fn shift_moves_window_and_precision() {
        let g = f(2);
        let s = Series::from_coeffs(g, -1, vec![1, 1], Some(5));
        let t = s.shift(3);
        assert_eq!(t.deg(), Deg::Finite(2));
        assert_eq!(t.precision(), Some(2));
    }
}
