//! F_b[x]-lattices `X = T(F_b[x]^d)`, shrinking and the admissibility scan.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Deg, Field, Poly, Series};
use crate::error::{Error, Result};
use crate::matrix::LaurentMatrix;
use crate::par;

/// Default cap on the number of vectors `m_scan` may enumerate.
pub const DEFAULT_SCAN_CAP: u128 = 1 << 24;

/// A lattice given by its generator `T`, optionally with a dual generator
/// `(T^{-1})^T` known to better precision than a fresh inversion would give.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub b: Field,
    pub d: usize,
    pub generator: LaurentMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<LaurentMatrix>,
}

impl LatticeSpec {
    pub fn new(generator: LaurentMatrix) -> Result<Self> {
        if !generator.is_square() {
            return Err(Error::DimensionMismatch("lattice generator must be square".into()));
        }
        Ok(Self { b: generator.field(), d: generator.rows(), generator, dual: None })
    }

    pub fn with_dual(generator: LaurentMatrix, dual: LaurentMatrix) -> Result<Self> {
        let mut s = Self::new(generator)?;
        if (dual.rows(), dual.cols()) != (s.d, s.d) {
            return Err(Error::DimensionMismatch("dual generator shape".into()));
        }
        s.dual = Some(dual);
        Ok(s)
    }

    /// The lattice `F_b[x]^d` itself.
    pub fn identity(b: Field, d: usize) -> Self {
        let id = LaurentMatrix::identity(b, d);
        Self { b, d, generator: id.clone(), dual: Some(id) }
    }

    /// `(T^{-1})^T`, the generator of the dual lattice.
    pub fn dual_generator(&self) -> Result<LaurentMatrix> {
        match &self.dual {
            Some(b) => Ok(b.clone()),
            None => Ok(self.generator.inverse()?.transpose()),
        }
    }

    /// The lattice `f^{-1} X` with generator `D_f^{-1} T` and dual `D_f B`.
    pub fn shrink(&self, f: &ShrinkFactor) -> Result<LatticeSpec> {
        if f.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "shrink factor has {} components, lattice dimension is {}",
                f.len(),
                self.d
            )));
        }
        let fs = f.as_series();
        let generator = self.generator.divide_rows(&fs)?;
        let dual = self.dual_generator()?.scale_rows(&fs)?;
        LatticeSpec::with_dual(generator, dual)
    }

    pub fn precision(&self) -> Option<i64> {
        self.generator.precision()
    }
}

/// Coordinate-wise polynomial shrinking factor `f = (f_1, .., f_d)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ShrinkFactor(Vec<Poly>);

impl ShrinkFactor {
    pub fn new(polys: Vec<Poly>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::PreconditionViolated("empty shrink factor".into()));
        }
        if let Some(j) = polys.iter().position(Poly::is_zero) {
            return Err(Error::PreconditionViolated(format!("shrink factor component {j} is zero")));
        }
        let b = polys[0].field();
        for p in &polys {
            b.check_same(p.field())?;
        }
        Ok(Self(polys))
    }

    /// `(x^r, .., x^r)` in dimension `d`.
    pub fn uniform(b: Field, d: usize, r: usize) -> Self {
        Self(vec![Poly::x_pow(b, r); d])
    }

    /// Parses a comma-separated list such as `x^3,x^3`.
    pub fn parse(b: Field, s: &str) -> Result<Self> {
        let polys = s.split(',').map(|t| Poly::parse(b, t)).collect::<Result<Vec<_>>>()?;
        Self::new(polys)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn polys(&self) -> &[Poly] {
        &self.0
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.0.iter().map(|p| p.deg().finite().expect("nonzero")).collect()
    }

    pub fn total_degree(&self) -> i64 {
        self.degrees().iter().sum()
    }

    pub fn as_series(&self) -> Vec<Series> {
        self.0.iter().map(Series::from_poly).collect()
    }
}

impl fmt::Display for ShrinkFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Poly::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for ShrinkFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShrinkFactor({self})")
    }
}

/// Result of the bounded-degree dual scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub degree_bound: u32,
    /// Smallest degree sum found; an upper bound on `M(X)`.
    pub m_hat: Deg,
    /// Dual coefficient vector `h` attaining `m_hat`, as polynomial strings.
    pub witness: Vec<String>,
    pub certified_lower_bound: Option<i64>,
    /// `m_hat` equals the certified lower bound, so `M(X) = m_hat`.
    pub exact: bool,
    /// Some coordinate degree was only bounded because it vanished to
    /// working precision.
    pub degrees_bounded: bool,
    pub scanned: u128,
}

impl AdmissibilityReport {
    pub fn with_certificate(mut self, bound: i64) -> Self {
        self.certified_lower_bound = Some(bound);
        self.exact = self.m_hat == Deg::Finite(bound);
        self
    }
}

#[derive(Clone)]
struct ScanBest {
    value: Deg,
    idx: u128,
    bounded: bool,
}

/// Exhaustive scan over nonzero `h` with `deg h_j ≤ bound` of
/// `Σ_j deg((B h)_j)`, where `B` is the dual generator.
///
/// `h` runs through `1..b^{d(bound+1)}`; the base-b digits of the index give
/// the coefficients of `h_1` first (ascending powers), then `h_2`, and so on.
/// The witness is the first vector attaining the minimum in that order.
pub fn m_scan(x: &LatticeSpec, bound: u32, cap: u128) -> Result<AdmissibilityReport> {
    let f = x.b;
    let b = f.order() as u128;
    let d = x.d;
    let per = bound as usize + 1;
    let positions = d * per;
    let total = b
        .checked_pow(positions as u32)
        .filter(|&t| t <= cap)
        .ok_or(Error::BudgetExceeded {
            size: b.checked_pow(positions as u32).unwrap_or(u128::MAX),
            cap,
        })?;
    let dual = x.dual_generator()?;
    // images[p] = B · (x^e in coordinate k), p = k·per + e
    let mut images = Vec::with_capacity(positions);
    for k in 0..d {
        for e in 0..per {
            let img: Vec<Series> = (0..d).map(|i| dual.get(i, k).shift(e as i64)).collect();
            images.push(img);
        }
    }
    let chunks = (par::threads() * 4).max(1).min(total as usize);
    let chunk_len = total.div_ceil(chunks as u128);
    let results = par::map_range(chunks, |c| {
        let start = (c as u128 * chunk_len).max(1);
        let end = ((c as u128 + 1) * chunk_len).min(total);
        scan_chunk(f, &images, start, end)
    });
    let best = results
        .into_iter()
        .flatten()
        .min_by(|a, c| a.value.cmp(&c.value).then(a.idx.cmp(&c.idx)))
        .expect("at least one nonzero vector");
    let witness = index_to_vector(f, best.idx, d, per).iter().map(Poly::to_string).collect();
    Ok(AdmissibilityReport {
        degree_bound: bound,
        m_hat: best.value,
        witness,
        certified_lower_bound: None,
        exact: false,
        degrees_bounded: best.bounded,
        scanned: total - 1,
    })
}

fn index_to_digits(mut idx: u128, b: u128, n: usize) -> Vec<u8> {
    let mut digits = vec![0u8; n];
    for slot in digits.iter_mut() {
        *slot = (idx % b) as u8;
        idx /= b;
    }
    digits
}

fn index_to_vector(f: Field, idx: u128, d: usize, per: usize) -> Vec<Poly> {
    let digits = index_to_digits(idx, f.order() as u128, d * per);
    digits.chunks(per).map(|c| Poly::new(f, c.to_vec())).collect()
}

fn degree_sum(v: &[Series]) -> (Deg, bool) {
    let mut total = Deg::Finite(0);
    let mut bounded = false;
    for s in v {
        if s.is_zero() {
            match s.precision() {
                None => return (Deg::NegInf, false),
                Some(p) => {
                    bounded = true;
                    total = total + Deg::Finite(-(p + 1));
                }
            }
        } else {
            total = total + s.deg();
        }
    }
    (total, bounded)
}

fn scan_chunk(f: Field, images: &[Vec<Series>], start: u128, end: u128) -> Option<ScanBest> {
    if start >= end {
        return None;
    }
    let b = f.order() as u128;
    let d = images[0].len();
    let mut digits = index_to_digits(start, b, images.len());
    let mut v: Vec<Series> = vec![Series::zero(f); d];
    for (p, &c) in digits.iter().enumerate() {
        if c != 0 {
            for i in 0..d {
                v[i] = &v[i] + &images[p][i].scale(c);
            }
        }
    }
    let mut best: Option<ScanBest> = None;
    let mut idx = start;
    loop {
        let (value, bounded) = degree_sum(&v);
        if best.as_ref().is_none_or(|bst| value < bst.value) {
            best = Some(ScanBest { value, idx, bounded });
        }
        idx += 1;
        if idx >= end {
            break;
        }
        // odometer step: each touched digit contributes one more copy of its image
        let mut p = 0;
        loop {
            for i in 0..d {
                v[i] = &v[i] + &images[p][i];
            }
            digits[p] += 1;
            if (digits[p] as u128) < b {
                break;
            }
            digits[p] = 0;
            p += 1;
        }
    }
    best
}
