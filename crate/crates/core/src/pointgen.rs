//! Point sets `P_f = f^{-1}X ∩ U^d_b` and their digit representation.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::algebra::{Deg, Field, Poly, Series};
use crate::construction::{generator_matrix, Construction};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, ShrinkFactor};
use crate::linalg::FbMatrix;
use crate::matrix::{quotient, LQFactors, LaurentMatrix};

/// Guard digits added to `m` for the default truncation depth.
pub const GUARD_DIGITS: usize = 8;

/// Default cap on `|S|` for the literal breadth-first enumeration.
pub const DEFAULT_S_CAP: usize = 1 << 20;

/// Outcome of the degree condition `deg f_j ≥ max_{i≤j} deg l'_{ji}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShrinkCheck {
    pub satisfied: bool,
    pub degrees: Vec<i64>,
    pub minimal_degrees: Vec<i64>,
}

pub fn check_shrink_condition(lprime: &LaurentMatrix, f: &ShrinkFactor) -> ShrinkCheck {
    let d = lprime.rows();
    let minimal_degrees: Vec<i64> = (0..d)
        .map(|j| {
            (0..=j)
                .filter_map(|i| lprime.get(j, i).deg().finite())
                .max()
                .unwrap_or(0)
                .max(0)
        })
        .collect();
    let degrees = f.degrees();
    let satisfied =
        degrees.len() == d && degrees.iter().zip(&minimal_degrees).all(|(have, need)| have >= need);
    ShrinkCheck { satisfied, degrees, minimal_degrees }
}

fn check_valuation_lower(l: &LaurentMatrix) -> Result<Vec<usize>> {
    let d = l.rows();
    let mut sizes = Vec::with_capacity(d);
    for i in 0..d {
        for j in 0..d {
            let deg = l.get(i, j).deg();
            if j > i && !l.get(i, j).is_zero() {
                return Err(Error::PreconditionViolated(format!(
                    "L is not lower triangular at ({i},{j})"
                )));
            }
            if deg > Deg::Finite(0) {
                return Err(Error::PreconditionViolated(format!(
                    "deg l_{i}{j} = {deg} exceeds 0"
                )));
            }
        }
        match l.get(i, i).deg() {
            Deg::Finite(e) => sizes.push((-e) as usize),
            Deg::NegInf => return Err(Error::Singular { row: i }),
        }
    }
    Ok(sizes)
}

/// `⌈−l_jj^{-1} Σ_{i<j} l_ji g_i⌉`.
fn forced_part(l: &LaurentMatrix, j: usize, g: &[Poly]) -> Result<Poly> {
    let f = l.field();
    let mut s = Series::zero(f);
    for (i, gi) in g.iter().enumerate().take(j) {
        if gi.is_zero() {
            continue;
        }
        s = &s + &(l.get(j, i) * &Series::from_poly(gi));
    }
    if s.is_zero() && s.is_exact() {
        return Ok(Poly::zero(f));
    }
    quotient(&-&s, l.get(j, j))?.poly_part()
}

/// Basis of the F_b-space `S = {g : L g ∈ U^d_b}`: one vector per pair
/// `(j, k)` with `k < −deg l_jj`, whose free part is `x^k` in coordinate `j`.
pub fn s_basis(l: &LaurentMatrix) -> Result<Vec<Vec<Poly>>> {
    let sizes = check_valuation_lower(l)?;
    let f = l.field();
    let d = l.rows();
    let mut basis = Vec::new();
    for j in 0..d {
        for k in 0..sizes[j] {
            let mut g = vec![Poly::zero(f); d];
            g[j] = Poly::x_pow(f, k);
            for i in j + 1..d {
                g[i] = forced_part(l, i, &g)?;
            }
            basis.push(g);
        }
    }
    Ok(basis)
}

/// Literal breadth-first construction of `S`, level by level.
pub fn enumerate_s(l: &LaurentMatrix, cap: usize) -> Result<Vec<Vec<Poly>>> {
    let sizes = check_valuation_lower(l)?;
    let f = l.field();
    let b = f.order() as u128;
    let total = sizes.iter().try_fold(1u128, |acc, &s| acc.checked_mul(b.checked_pow(s as u32)?));
    match total {
        Some(t) if t <= cap as u128 => {}
        other => {
            return Err(Error::BudgetExceeded { size: other.unwrap_or(u128::MAX), cap: cap as u128 })
        }
    }
    let mut level: Vec<Vec<Poly>> = vec![Vec::new()];
    for (j, &size) in sizes.iter().enumerate() {
        let count = (b as u64).pow(size as u32);
        let mut next = Vec::with_capacity(level.len() * count as usize);
        for prefix in &level {
            let base = forced_part(l, j, prefix)?;
            for h in 0..count {
                let mut g = prefix.clone();
                g.push(&base + &Poly::from_index(f, h));
                next.push(g);
            }
        }
        level = next;
    }
    Ok(level)
}

/// Linear description of a digital point set: the digit images of a basis,
/// from which every point is an F_b-combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitalGenerator {
    pub b: Field,
    pub d: usize,
    pub m: u32,
    pub depth: usize,
    /// `m` vectors of length `d·depth`, laid out `[coord][digit]`.
    pub images: Vec<Vec<u8>>,
}

impl DigitalGenerator {
    pub fn num_points(&self) -> u128 {
        (self.b.order() as u128).pow(self.m)
    }

    /// Rank of the images over F_b; equals `m` iff the points are distinct
    /// at this depth.
    pub fn rank(&self) -> usize {
        FbMatrix::from_rows(self.b, self.d * self.depth, &self.images).rank()
    }

    /// Point with index `i`, whose base-b digits (least significant first)
    /// are the coefficients on the basis images.
    pub fn point(&self, mut i: u128) -> Vec<u8> {
        let f = self.b;
        let b = f.order() as u128;
        let mut out = vec![0u8; self.d * self.depth];
        for img in &self.images {
            let c = (i % b) as u8;
            i /= b;
            if c != 0 {
                for (o, &v) in out.iter_mut().zip(img) {
                    *o = f.add(*o, f.mul(c, v));
                }
            }
        }
        out
    }

    /// Visits all `b^m` points in index order. Consecutive points differ by
    /// one image per odometer digit touched.
    pub fn for_each_point(&self, mut visit: impl FnMut(u128, &[u8])) {
        let f = self.b;
        let b = f.order() as u8;
        let total = self.num_points();
        let mut cur = vec![0u8; self.d * self.depth];
        let mut odo = vec![0u8; self.m as usize];
        let mut idx = 0u128;
        loop {
            visit(idx, &cur);
            idx += 1;
            if idx == total {
                break;
            }
            let mut p = 0;
            loop {
                for (o, &v) in cur.iter_mut().zip(&self.images[p]) {
                    *o = f.add(*o, v);
                }
                odo[p] += 1;
                if odo[p] < b {
                    break;
                }
                odo[p] = 0;
                p += 1;
            }
        }
    }

    /// Number of distinct points, by enumerating, packing each point into a
    /// base-b key, sorting and deduplicating.
    pub fn count_distinct(&self) -> u128 {
        let b = self.b.order() as u128;
        let len = self.d * self.depth;
        let fits = b.checked_pow(len as u32).is_some();
        if fits {
            // digits are packed in u64 groups first; b^group stays below 2^64
            let mut group = 1usize;
            while (b as u64).checked_pow(group as u32 + 1).is_some() {
                group += 1;
            }
            let shift = (b as u64).pow(group as u32) as u128;
            let mut keys = Vec::with_capacity(self.num_points() as usize);
            self.for_each_point(|_, p| {
                let key = p.chunks(group).fold(0u128, |k, chunk| {
                    let part = chunk.iter().fold(0u64, |a, &c| a * b as u64 + c as u64);
                    let scale = if chunk.len() == group { shift } else { b.pow(chunk.len() as u32) };
                    k * scale + part as u128
                });
                keys.push(key);
            });
            keys.sort_unstable();
            keys.dedup();
            keys.len() as u128
        } else {
            let mut keys = Vec::with_capacity(self.num_points() as usize);
            self.for_each_point(|_, p| keys.push(p.to_vec()));
            keys.sort_unstable();
            keys.dedup();
            keys.len() as u128
        }
    }

    pub fn materialize(&self) -> DigitPointSet {
        let mut digits = Vec::with_capacity(self.num_points() as usize * self.d * self.depth);
        self.for_each_point(|_, p| digits.extend_from_slice(p));
        DigitPointSet { b: self.b, d: self.d, m: self.m, depth: self.depth, digits }
    }

    /// Keeps the first `d` coordinates.
    pub fn project(&self, d: usize) -> Result<DigitalGenerator> {
        if d == 0 || d > self.d {
            return Err(Error::DimensionMismatch(format!(
                "cannot project dimension {} onto {d}",
                self.d
            )));
        }
        Ok(DigitalGenerator {
            d,
            images: self.images.iter().map(|v| v[..d * self.depth].to_vec()).collect(),
            ..self.clone()
        })
    }
}

/// Intermediate data of the point construction.
#[derive(Clone, Debug)]
pub struct PointConstruction {
    pub lq: LQFactors,
    pub shrink: ShrinkCheck,
    /// `L = D_f^{-1} L'`.
    pub l: LaurentMatrix,
    pub s_basis: Vec<Vec<Poly>>,
    pub generator: DigitalGenerator,
}

/// Builds the digit generator of `P_f` at truncation depth `depth`
/// (default `m + GUARD_DIGITS`).
///
/// Every `g ∈ S` maps to `L Q ⌈Q^{-1} g⌉`; the map is F_b-linear, so only
/// the basis of `S` is pushed through it.
pub fn construct_points(
    x: &LatticeSpec,
    f: &ShrinkFactor,
    depth: Option<usize>,
) -> Result<PointConstruction> {
    if f.len() != x.d {
        return Err(Error::DimensionMismatch(format!(
            "shrink factor has {} components, lattice dimension is {}",
            f.len(),
            x.d
        )));
    }
    x.b.check_same(f.polys()[0].field())?;
    let lq = x.generator.lq_decompose()?;
    let shrink = check_shrink_condition(&lq.lprime, f);
    if !shrink.satisfied {
        return Err(Error::ShrinkConditionViolated {
            have: shrink.degrees.clone(),
            need: shrink.minimal_degrees.clone(),
        });
    }
    let fs = f.as_series();
    let l = lq.lprime.divide_rows(&fs)?;
    let basis = s_basis(&l)?;
    let m = basis.len() as u32;
    let t_f = x.generator.divide_rows(&fs)?;
    let mut depth = depth.unwrap_or(m as usize + GUARD_DIGITS).max(1);
    let images_exact: Vec<Vec<Series>> = basis
        .iter()
        .map(|g| -> Result<Vec<Series>> {
            let u = lq
                .qinv
                .apply_poly(g)?
                .iter()
                .map(Series::poly_part)
                .collect::<Result<Vec<_>>>()?;
            t_f.apply_poly(&u)
        })
        .collect::<Result<_>>()?;
    let mut retried = false;
    loop {
        let images = images_exact
            .iter()
            .map(|y| -> Result<Vec<u8>> {
                let mut v = Vec::with_capacity(x.d * depth);
                for s in y {
                    v.extend(s.digits(depth)?);
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let generator = DigitalGenerator { b: x.b, d: x.d, m, depth, images };
        if generator.rank() == m as usize {
            return Ok(PointConstruction { lq, shrink, l, s_basis: basis, generator });
        }
        if retried {
            return Err(Error::DuplicateAtDepth { depth });
        }
        retried = true;
        depth *= 2;
    }
}

/// Materialized `P_f` at the given depth.
pub fn point_set(x: &LatticeSpec, f: &ShrinkFactor, depth: Option<usize>) -> Result<DigitPointSet> {
    Ok(construct_points(x, f, depth)?.generator.materialize())
}

/// Working precision `4·(depth + d)` used for a requested depth.
pub fn working_precision(depth: usize, d: usize) -> i64 {
    4 * (depth + d) as i64
}

/// A constructed net: the lattice, the point construction and the digits.
#[derive(Clone, Debug)]
pub struct Net {
    pub construction: Construction,
    pub points: PointConstruction,
    pub precision: i64,
}

/// Builds the explicit lattice for `(b, n)` and the point generator of
/// `P_f`, doubling the working precision whenever it runs out.
pub fn build_net(
    b: Field,
    n: u32,
    f: &ShrinkFactor,
    depth: Option<usize>,
    precision: Option<i64>,
) -> Result<Net> {
    let d = (b.order() as usize).pow(n);
    let m_guess = crate::construction::det_b_degree_formula(b.order(), n) + f.total_degree();
    let want_depth = depth.unwrap_or(m_guess.max(0) as usize + GUARD_DIGITS);
    let mut prec = precision.unwrap_or_else(|| working_precision(want_depth, d));
    for _ in 0..6 {
        let construction = generator_matrix(b, n, prec)?;
        match construct_points(&construction.lattice, f, depth) {
            Ok(points) => return Ok(Net { construction, points, precision: prec }),
            Err(Error::PrecisionExhausted(_)) | Err(Error::Singular { .. }) => prec *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecisionExhausted(format!("no stable point set up to precision {prec}")))
}

/// `b^m` points in `[0,1)^d`, each a `d × depth` digit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitPointSet {
    pub b: Field,
    pub d: usize,
    pub m: u32,
    pub depth: usize,
    /// Flat `[point][coord][digit]`, digit `k` is the coefficient of
    /// `x^{-(k+1)}`.
    pub digits: Vec<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Digits,
    Rational,
    Float,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "digits" => Ok(Format::Digits),
            "rational" => Ok(Format::Rational),
            "float" => Ok(Format::Float),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Digits => "digits",
            Format::Rational => "rational",
            Format::Float => "float",
        }
    }
}

impl DigitPointSet {
    pub fn new(b: Field, d: usize, m: u32, depth: usize, digits: Vec<u8>) -> Result<Self> {
        if d == 0 || depth == 0 || digits.len() % (d * depth) != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} digits do not split into points of {d}x{depth}",
                digits.len()
            )));
        }
        if digits.iter().any(|&c| c as u32 >= b.order()) {
            return Err(Error::Parse(format!("digit out of range for b={}", b.order())));
        }
        Ok(Self { b, d, m, depth, digits })
    }

    pub fn len(&self) -> usize {
        self.digits.len() / (self.d * self.depth)
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn point(&self, i: usize) -> &[u8] {
        let w = self.d * self.depth;
        &self.digits[i * w..(i + 1) * w]
    }

    pub fn coord(&self, i: usize, j: usize) -> &[u8] {
        let start = (i * self.d + j) * self.depth;
        &self.digits[start..start + self.depth]
    }

    pub fn points(&self) -> impl Iterator<Item = &[u8]> {
        self.digits.chunks(self.d * self.depth)
    }

    /// Numerator of `φ_depth`, i.e. `Σ c_k b^{depth-k}`; `None` on overflow.
    pub fn numerator(&self, i: usize, j: usize) -> Option<u128> {
        let b = self.b.order() as u128;
        self.coord(i, j)
            .iter()
            .try_fold(0u128, |acc, &c| acc.checked_mul(b)?.checked_add(c as u128))
    }

    pub fn float(&self, i: usize, j: usize) -> f64 {
        let b = self.b.order() as f64;
        let mut scale = 1.0 / b;
        let mut acc = 0.0;
        for &c in self.coord(i, j) {
            acc += c as f64 * scale;
            scale /= b;
        }
        acc
    }

    pub fn to_floats(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| (0..self.d).map(|j| self.float(i, j)).collect()).collect()
    }

    /// Truncation to the first `n` digits of every coordinate.
    pub fn truncate(&self, n: usize) -> Result<DigitPointSet> {
        if n == 0 || n > self.depth {
            return Err(Error::PreconditionViolated(format!(
                "cannot truncate depth {} to {n}",
                self.depth
            )));
        }
        let mut digits = Vec::with_capacity(self.len() * self.d * n);
        for i in 0..self.len() {
            for j in 0..self.d {
                digits.extend_from_slice(&self.coord(i, j)[..n]);
            }
        }
        Ok(DigitPointSet { depth: n, digits, ..self.clone() })
    }

    /// Keeps the first `d` coordinates.
    pub fn project(&self, d: usize) -> Result<DigitPointSet> {
        if d == 0 || d > self.d {
            return Err(Error::DimensionMismatch(format!("cannot project {} onto {d}", self.d)));
        }
        let mut digits = Vec::with_capacity(self.len() * d * self.depth);
        for p in self.points() {
            digits.extend_from_slice(&p[..d * self.depth]);
        }
        Ok(DigitPointSet { d, digits, ..self.clone() })
    }

    pub fn count_distinct(&self) -> usize {
        let mut pts: Vec<&[u8]> = self.points().collect();
        pts.sort_unstable();
        pts.dedup();
        pts.len()
    }

    /// Points as series `Σ c_k x^{-k}` (exact).
    pub fn series_point(&self, i: usize) -> Vec<Series> {
        (0..self.d)
            .map(|j| Series::from_coeffs(self.b, -1, self.coord(i, j).to_vec(), None))
            .collect()
    }

    pub fn header(&self, format: Format) -> String {
        format!(
            "# b={} d={} m={} depth={} format={}",
            self.b.order(),
            self.d,
            self.m,
            self.depth,
            format.name()
        )
    }

    fn digit_string(&self, digits: &[u8]) -> String {
        if self.b.order() <= 10 {
            digits.iter().map(|&c| char::from(b'0' + c)).collect()
        } else {
            let parts: Vec<String> = digits.iter().map(u8::to_string).collect();
            parts.join(":")
        }
    }

    /// One line per point, coordinates separated by commas.
    pub fn emit_line(&self, i: usize, format: Format) -> String {
        let mut line = String::new();
        for j in 0..self.d {
            if j > 0 {
                line.push(',');
            }
            match format {
                Format::Digits => line.push_str(&self.digit_string(self.coord(i, j))),
                Format::Rational => match self.numerator(i, j) {
                    Some(a) => {
                        let _ = write!(line, "{a}/{}", self.denominator_string());
                    }
                    None => line.push_str("overflow"),
                },
                Format::Float => {
                    let _ = write!(line, "{}", self.float(i, j));
                }
            }
        }
        line
    }

    fn denominator_string(&self) -> String {
        match (self.b.order() as u128).checked_pow(self.depth as u32) {
            Some(q) => q.to_string(),
            None => format!("{}^{}", self.b.order(), self.depth),
        }
    }

    pub fn emit<W: Write>(&self, format: Format, mut w: W) -> Result<()> {
        if format == Format::Rational
            && (self.b.order() as u128).checked_pow(self.depth as u32).is_none()
        {
            return Err(Error::PreconditionViolated(format!(
                "rational output needs b^depth below 2^128 (depth {})",
                self.depth
            )));
        }
        writeln!(w, "{}", self.header(format))?;
        for i in 0..self.len() {
            writeln!(w, "{}", self.emit_line(i, format))?;
        }
        Ok(())
    }

    pub fn to_text(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.emit(format, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Reads the digit or rational format. The header line supplies `b`,
    /// `m` and `depth`; without it `b` must be given and `m` is taken from
    /// the point count.
    pub fn parse<R: BufRead>(r: R, b: Option<Field>, m: Option<u32>) -> Result<DigitPointSet> {
        let mut header: Option<(Field, u32, usize, Format)> = None;
        let mut rows: Vec<Vec<String>> = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                header = Some(parse_header(h)?);
                continue;
            }
            rows.push(line.split(',').map(|s| s.trim().to_string()).collect());
        }
        let (field, hm, hdepth, format) = match header {
            Some((f, m, depth, fmt)) => (f, Some(m), Some(depth), fmt),
            None => {
                let f = b.ok_or_else(|| Error::Parse("no header and no base given".into()))?;
                let fmt =
                    if rows.first().is_some_and(|r| r[0].contains('/')) { Format::Rational } else { Format::Digits };
                (f, None, None, fmt)
            }
        };
        if let Some(given) = b {
            field.check_same(given)?;
        }
        let d = rows.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(Error::Parse("no points".into()));
        }
        let mut digits = Vec::new();
        let mut depth = hdepth;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Parse(format!("line {} has {} coordinates, expected {d}", i + 1, row.len())));
            }
            for cell in row {
                let ds = match format {
                    Format::Digits => parse_digit_string(field, cell)?,
                    Format::Rational => parse_rational(field, cell, depth)?,
                    Format::Float => {
                        return Err(Error::Parse("float output is lossy and cannot be read back".into()))
                    }
                };
                match depth {
                    None => depth = Some(ds.len()),
                    Some(k) if k != ds.len() => {
                        return Err(Error::Parse(format!("coordinate {cell:?} has depth {}, expected {k}", ds.len())))
                    }
                    _ => {}
                }
                digits.extend(ds);
            }
        }
        let depth = depth.unwrap_or(1);
        let n = rows.len() as u128;
        let m = match m.or(hm) {
            Some(m) => m,
            None => exact_log(field.order() as u128, n)
                .ok_or_else(|| Error::Parse(format!("{n} points is not a power of {}", field.order())))?,
        };
        DigitPointSet::new(field, d, m, depth, digits)
    }

    pub fn parse_str(s: &str, b: Option<Field>, m: Option<u32>) -> Result<DigitPointSet> {
        Self::parse(s.as_bytes(), b, m)
    }
}

fn exact_log(b: u128, n: u128) -> Option<u32> {
    let mut k = 0;
    let mut p = 1u128;
    while p < n {
        p = p.checked_mul(b)?;
        k += 1;
    }
    (p == n).then_some(k)
}

fn parse_header(h: &str) -> Result<(Field, u32, usize, Format)> {
    let mut b = None;
    let mut m = None;
    let mut depth = None;
    let mut format = Format::Digits;
    for kv in h.split_whitespace() {
        let Some((k, v)) = kv.split_once('=') else { continue };
        let num = || v.parse::<u64>().map_err(|_| Error::Parse(format!("bad header value {kv:?}")));
        match k {
            "b" => b = Some(Field::new(num()? as u32)?),
            "m" => m = Some(num()? as u32),
            "depth" => depth = Some(num()? as usize),
            "format" => format = v.parse()?,
            _ => {}
        }
    }
    match (b, m, depth) {
        (Some(b), Some(m), Some(depth)) => Ok((b, m, depth, format)),
        _ => Err(Error::Parse(format!("incomplete header {h:?}"))),
    }
}

fn parse_digit_string(b: Field, s: &str) -> Result<Vec<u8>> {
    let bad = || Error::Parse(format!("bad digit string {s:?}"));
    let ds: Vec<u8> = if b.order() <= 10 {
        s.bytes()
            .map(|c| c.checked_sub(b'0').filter(|&v| (v as u32) < b.order()).ok_or_else(bad))
            .collect::<Result<_>>()?
    } else {
        s.split(':')
            .map(|t| t.parse::<u8>().ok().filter(|&v| (v as u32) < b.order()).ok_or_else(bad))
            .collect::<Result<_>>()?
    };
    if ds.is_empty() {
        return Err(bad());
    }
    Ok(ds)
}

fn parse_rational(b: Field, s: &str, depth: Option<usize>) -> Result<Vec<u8>> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (a, q) = s.split_once('/').ok_or_else(bad)?;
    let mut a: u128 = a.parse().map_err(|_| bad())?;
    let q: u128 = q.parse().map_err(|_| bad())?;
    let base = b.order() as u128;
    let k = exact_log(base, q).ok_or_else(bad)? as usize;
    if depth.is_some_and(|dp| dp != k) || a >= q {
        return Err(bad());
    }
    let mut ds = vec![0u8; k];
    for slot in ds.iter_mut().rev() {
        *slot = (a % base) as u8;
        a /= base;
    }
    Ok(ds)
}
