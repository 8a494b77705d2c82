//! The explicit admissible lattice: roots of `p_d = F_n + x^{-1}`, their
//! Vandermonde matrix `B` and the generator `T = (B^{-1})^T`.

use serde::Serialize;

use crate::algebra::{Deg, Field, Poly, Series};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, ShrinkFactor};
use crate::matrix::LaurentMatrix;

/// Polynomial in `z` with coefficients in F_b[x]; `coeffs[k]` multiplies `z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivarPoly {
    field: Field,
    coeffs: Vec<Poly>,
}

impl BivarPoly {
    pub fn new(field: Field, mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn z_pow(field: Field, k: usize) -> Self {
        let mut c = vec![Poly::zero(field); k + 1];
        c[k] = Poly::one(field);
        Self::new(field, c)
    }

    pub fn constant(p: Poly) -> Self {
        let f = p.field();
        Self::new(f, vec![p])
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Poly {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Poly::zero(self.field))
    }

    /// Degree in `z`; `None` for zero.
    pub fn z_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == Poly::one(self.field))
    }

    pub fn add(&self, rhs: &BivarPoly) -> BivarPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(self.field, (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &BivarPoly) -> BivarPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(self.field, (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }

    pub fn mul(&self, rhs: &BivarPoly) -> BivarPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::new(self.field, Vec::new());
        }
        let mut out = vec![Poly::zero(self.field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, c) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * c);
            }
        }
        Self::new(self.field, out)
    }

    pub fn scale(&self, p: &Poly) -> BivarPoly {
        Self::new(self.field, self.coeffs.iter().map(|c| c * p).collect())
    }

    pub fn pow(&self, e: u32) -> BivarPoly {
        let mut acc = Self::constant(Poly::one(self.field));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horner evaluation at a polynomial.
    pub fn eval_poly(&self, z: &Poly) -> Poly {
        let mut acc = Poly::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// Horner evaluation at a series.
    pub fn eval_series(&self, z: &Series) -> Series {
        let mut acc = Series::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + &Series::from_poly(c);
        }
        acc
    }
}

/// `F_1 = z^b − z`, `F_n = F_{n−1}^b − F_{n−1}(x^{n−1})^{b−1} F_{n−1}`.
pub fn build_fn(field: Field, n: u32) -> Result<BivarPoly> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be at least 1".into()));
    }
    let b = field.order();
    let mut f = BivarPoly::z_pow(field, b as usize).sub(&BivarPoly::z_pow(field, 1));
    for k in 2..=n {
        let c = f.eval_poly(&Poly::x_pow(field, k as usize - 1));
        f = f.pow(b).sub(&f.scale(&c.pow(b - 1)));
    }
    Ok(f)
}

/// `p_d = F_n + x^{-1}` written as `F_n` plus the separate constant.
pub fn p_d_residual(fn_poly: &BivarPoly, z: &Series) -> Series {
    let f = z.field();
    &fn_poly.eval_series(z) + &Series::monomial(f, 1, -1)
}

/// `c_k = F_{k−1}(x^{k−1})` for `k = 2..=n`, with `c[0]` unused.
fn level_constants(field: Field, n: u32) -> Vec<Poly> {
    let b = field.order();
    let mut consts = vec![Poly::one(field)];
    let mut f = BivarPoly::z_pow(field, b as usize).sub(&BivarPoly::z_pow(field, 1));
    for k in 2..=n {
        let c = f.eval_poly(&Poly::x_pow(field, k as usize - 1));
        consts.push(c.clone());
        f = f.pow(b).sub(&f.scale(&c.pow(b - 1)));
    }
    consts
}

/// The `b` roots of `z^b − z·c^{b−1} + g`, namely `(a + Σ_i h^{b^i})·c` with
/// `h = c^{−b} g`, for `a = 0, .., b−1`.
pub fn linearized_roots(c: &Series, g: &Series, prec: i64) -> Result<Vec<Series>> {
    let f = c.field();
    let cb = c.pow(f.order());
    let h = g.div_to(&cb, prec + cb.deg().finite().unwrap_or(0))?;
    match h.deg() {
        Deg::Finite(e) if e >= 0 => {
            return Err(Error::PreconditionViolated(format!(
                "deg(c^-b g) = {e} is not negative"
            )))
        }
        _ => {}
    }
    let s = h.frobenius_sum(prec + c.deg().finite().unwrap_or(0))?;
    Ok((0..f.order() as u8)
        .map(|a| (&(&Series::constant(f, a) + &s) * c).truncated(prec))
        .collect())
}

/// One root of `F_n(z) + f`, the one whose polynomial part vanishes at every
/// level of the recursion.
fn base_root(field: Field, n: u32, f: &Series, consts: &[Poly], work: i64) -> Result<Series> {
    let mut drive = f.clone();
    for k in (2..=n).rev() {
        let c = Series::from_poly(&consts[k as usize - 1]);
        let roots = linearized_roots(&c, &drive, work)?;
        drive = -&roots[0];
    }
    let one = Series::one(field);
    let roots = linearized_roots(&one, &drive, work)?;
    Ok(roots[0].clone())
}

/// The `d = b^n` roots of `p_d`, indexed lexicographically by the digits
/// `(a_{n−1}, .., a_0)` of their polynomial parts.
#[derive(Clone, Debug, Serialize)]
pub struct RootSet {
    pub b: Field,
    pub n: u32,
    #[serde(serialize_with = "ser_series")]
    pub roots: Vec<Series>,
    #[serde(serialize_with = "ser_polys")]
    pub offsets: Vec<Poly>,
    /// `deg p_d(ξ_j)`, or the degree bound when the residual vanishes to
    /// working precision.
    pub residual_degrees: Vec<i64>,
}

fn ser_series<S: serde::Serializer>(v: &[Series], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Series::to_compact))
}

fn ser_polys<S: serde::Serializer>(v: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Poly::to_string))
}

fn residual_degree(r: &Series) -> i64 {
    match r.deg() {
        Deg::Finite(e) => e,
        Deg::NegInf => r.precision().map_or(i64::MIN, |p| -(p + 1)),
    }
}

/// Precision consumed by the recursion: `Σ_{k=2}^{n} (b−1)·deg F_{k−1}(x^{k−1})`
/// plus the Vandermonde powers.
pub fn precision_budget(b: u32, n: u32) -> i64 {
    let b = b as i64;
    let d = b.pow(n);
    let rec: i64 = (2..=n as i64).map(|k| (b - 1) * (k - 1) * b.pow(k as u32 - 1)).sum();
    rec + (d - 1) * (n as i64 - 1).max(0) + n as i64 * d
}

pub fn roots_pd(field: Field, n: u32, prec: i64) -> Result<RootSet> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be at least 1".into()));
    }
    let d = (field.order() as u64)
        .checked_pow(n)
        .filter(|&d| d <= 1 << 12)
        .ok_or_else(|| Error::PreconditionViolated(format!("b^n too large for n={n}")))?;
    let consts = level_constants(field, n);
    let fn_poly = build_fn(field, n)?;
    let mut work = prec + precision_budget(field.order(), n);
    let xi = loop {
        let xi = base_root(field, n, &Series::monomial(field, 1, -1), &consts, work)?;
        match xi.precision() {
            Some(p) if p < prec => work = work * 2 + 8,
            _ => break xi.truncated(prec),
        }
    };
    let offsets: Vec<Poly> = (0..d).map(|j| Poly::from_index(field, j)).collect();
    let roots: Vec<Series> = offsets.iter().map(|a| &xi + &Series::from_poly(a)).collect();
    let residual_degrees =
        roots.iter().map(|r| residual_degree(&p_d_residual(&fn_poly, r))).collect();
    Ok(RootSet { b: field, n, roots, offsets, residual_degrees })
}

/// Output of the explicit construction.
#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    pub n: u32,
    pub roots: RootSet,
    /// Lattice with generator `T` and dual generator `B`.
    pub lattice: LatticeSpec,
    pub det_b_degree: i64,
}

/// `B = (ξ_i^{j−1})`, `T = (B^{-1})^T`, both known to at least `prec`.
pub fn generator_matrix(field: Field, n: u32, prec: i64) -> Result<Construction> {
    let budget = precision_budget(field.order(), n);
    let mut extra = budget;
    for _ in 0..6 {
        let roots = roots_pd(field, n, prec + extra)?;
        let d = roots.roots.len();
        let mut rows = Vec::with_capacity(d);
        for xi in &roots.roots {
            let mut row = Vec::with_capacity(d);
            let mut p = Series::one(field);
            for _ in 0..d {
                row.push(p.clone());
                p = &p * xi;
            }
            rows.push(row);
        }
        let b = LaurentMatrix::from_rows(field, rows)?;
        let t = match b.inverse() {
            Ok(inv) => inv.transpose(),
            Err(Error::Singular { .. }) | Err(Error::PrecisionExhausted(_)) => {
                extra = extra * 2 + 16;
                continue;
            }
            Err(e) => return Err(e),
        };
        if t.precision().is_some_and(|p| p < prec) || b.precision().is_some_and(|p| p < prec) {
            extra = extra * 2 + 16;
            continue;
        }
        let det_b_degree = b
            .det_degree()?
            .finite()
            .ok_or_else(|| Error::PrecisionExhausted("det B vanished".into()))?;
        let roots = RootSet {
            roots: roots.roots.iter().map(|r| r.truncated(prec)).collect(),
            ..roots
        };
        let lattice = LatticeSpec::with_dual(t.truncated(prec), b.truncated(prec))?;
        return Ok(Construction { n, roots, lattice, det_b_degree });
    }
    Err(Error::PrecisionExhausted(format!(
        "generator for b={} n={n} did not reach precision {prec}",
        field.order()
    )))
}

/// `deg det B = (b^n/2)((n−1)b^n − (b^n − b)/(b−1))`.
pub fn det_b_degree_formula(b: u32, n: u32) -> i64 {
    let b = b as i128;
    let d = b.pow(n);
    let num = d * ((n as i128 - 1) * d * (b - 1) - (d - b));
    (num / (2 * (b - 1))) as i64
}

/// `(d/2)(d·log_b d − (d−1)·b/(b−1))` with `d = b^n`, computed exactly.
pub fn t_bound_formula(b: u32, n: u32) -> i64 {
    let b = b as i128;
    let d = b.pow(n);
    let num = d * (d * n as i128 * (b - 1) - (d - 1) * b);
    (num / (2 * (b - 1))).max(0) as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedQuality {
    pub m: i64,
    pub t_bound: i64,
    pub strength_bound: i64,
}

pub fn predicted_quality(b: Field, n: u32, f: &ShrinkFactor) -> PredictedQuality {
    let m = det_b_degree_formula(b.order(), n) + f.total_degree();
    let t_bound = t_bound_formula(b.order(), n).min(m);
    PredictedQuality { m, t_bound, strength_bound: m - t_bound }
}

/// Certified lower bound `1 − d` on `M(X)` for the constructed lattices.
pub fn admissibility_certificate(b: u32, n: u32) -> i64 {
    1 - (b as i64).pow(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(b: u32) -> Field {
        Field::new(b).unwrap()
    }

    #[test]
    fn f1_over_small_fields() {
        let g = f(2);
        let f1 = build_fn(g, 1).unwrap();
        assert_eq!(f1.coeffs(), &[Poly::zero(g), Poly::one(g), Poly::one(g)]);
        let g3 = f(3);
        let f1 = build_fn(g3, 1).unwrap();
        assert_eq!(f1.coeff(1), Poly::constant(g3, 2));
        assert_eq!(f1.coeff(3), Poly::one(g3));
    }

    #[test]
    fn f2_vanishes_on_low_degree_polys() {
        let g = f(2);
        let f2 = build_fn(g, 2).unwrap();
        assert_eq!(f2.z_degree(), Some(4));
        assert!(f2.is_monic());
        for i in 0..4 {
            assert!(f2.eval_poly(&Poly::from_index(g, i)).is_zero());
        }
        // z^4 + z^2 + (x^2+x)(z^2+z)
        let want = BivarPoly::new(
            g,
            vec![
                Poly::zero(g),
                Poly::new(g, vec![0, 1, 1]),
                Poly::new(g, vec![1, 1, 1]),
                Poly::zero(g),
                Poly::one(g),
            ],
        );
        assert_eq!(f2, want);
    }

    #[test]
    fn linearized_roots_examples() {
        let g = f(2);
        let one = Series::one(g);
        let zero = Series::zero(g);
        let r = linearized_roots(&one, &zero, 20).unwrap();
        assert!(r[0].is_zero());
        assert!((&r[1] - &one).is_zero());
        let r = linearized_roots(&one, &Series::monomial(g, 1, -1), 40).unwrap();
        for xi in &r {
            let v = &(&(xi * xi) + xi) + &Series::monomial(g, 1, -1);
            assert!(v.is_zero());
        }
        assert!(linearized_roots(&one, &Series::monomial(g, 1, 0), 10).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(det_b_degree_formula(2, 1), 0);
        assert_eq!(det_b_degree_formula(2, 2), 4);
        assert_eq!(det_b_degree_formula(3, 1), 0);
        assert_eq!(t_bound_formula(2, 2), 4);
        assert_eq!(t_bound_formula(2, 1), 0);
        assert_eq!(t_bound_formula(3, 1), 0);
    }
}
