//! Square and rectangular matrices over truncated Laurent series.

use serde::{Deserialize, Serialize};

use crate::algebra::{Deg, Field, Poly, Series, EXACT_DIVISION_CAP};
use crate::error::{Error, Result};

/// `a / c`, falling back to [`EXACT_DIVISION_CAP`] when both are exact and
/// the quotient would be an infinite series.
pub fn quotient(a: &Series, c: &Series) -> Result<Series> {
    match a.div(c) {
        Err(Error::Unbounded) => a.div_to(c, EXACT_DIVISION_CAP),
        other => other,
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Series>,
}

impl LaurentMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, entries: vec![Series::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, d: usize) -> Self {
        let mut m = Self::zeros(field, d, d);
        for i in 0..d {
            m.set(i, i, Series::one(field));
        }
        m
    }

    pub fn diag(field: Field, diag: Vec<Series>) -> Self {
        let d = diag.len();
        let mut m = Self::zeros(field, d, d);
        for (i, s) in diag.into_iter().enumerate() {
            m.set(i, i, s);
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Series>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            for s in r {
                field.check_same(s.field())?;
                entries.push(s);
            }
        }
        Ok(Self { field, rows: nrows, cols, entries })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, s: Series) {
        self.entries[i * self.cols + j] = s;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Series> {
        self.entries.iter()
    }

    pub fn row(&self, i: usize) -> &[Series] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Smallest precision over all entries (`None` if every entry is exact).
    pub fn precision(&self) -> Option<i64> {
        self.entries.iter().filter_map(Series::precision).min()
    }

    /// Largest entry degree (`NegInf` for the zero matrix).
    pub fn max_degree(&self) -> Deg {
        self.entries.iter().map(Series::deg).max().unwrap_or(Deg::NegInf)
    }

    pub fn truncated(&self, prec: i64) -> Self {
        self.map(|s| s.truncated(prec))
    }

    pub fn map(&self, f: impl Fn(&Series) -> Series) -> Self {
        Self {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mat_mul(&self, rhs: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.field.check_same(rhs.field)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Series::zero(self.field);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let c = rhs.get(k, j);
                    if (a.is_zero() && a.is_exact()) || (c.is_zero() && c.is_exact()) {
                        continue;
                    }
                    acc = &acc + &(a * c);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &[Series]) -> Result<Vec<Series>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Series::zero(self.field);
            for (a, x) in self.row(i).iter().zip(v) {
                if (a.is_zero() && a.is_exact()) || (x.is_zero() && x.is_exact()) {
                    continue;
                }
                acc = &acc + &a.try_mul(x)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Applies the matrix to a polynomial vector.
    pub fn apply_poly(&self, g: &[Poly]) -> Result<Vec<Series>> {
        let v: Vec<Series> = g.iter().map(Series::from_poly).collect();
        self.mat_vec(&v)
    }

    pub fn sub(&self, rhs: &LaurentMatrix) -> Result<LaurentMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        let mut out = self.clone();
        for (e, r) in out.entries.iter_mut().zip(&rhs.entries) {
            *e = e.try_sub(r)?;
        }
        Ok(out)
    }

    /// Multiplies row `i` by `factors[i]`.
    pub fn scale_rows(&self, factors: &[Series]) -> Result<LaurentMatrix> {
        if factors.len() != self.rows {
            return Err(Error::DimensionMismatch("row scaling".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, factors[i].try_mul(self.get(i, j))?);
            }
        }
        Ok(out)
    }

    /// Divides row `i` by `divisors[i]`.
    pub fn divide_rows(&self, divisors: &[Series]) -> Result<LaurentMatrix> {
        if divisors.len() != self.rows {
            return Err(Error::DimensionMismatch("row division".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.is_zero() && e.is_exact() {
                    continue;
                }
                out.set(i, j, quotient(e, &divisors[i])?);
            }
        }
        Ok(out)
    }

    fn swap_cols(&mut self, a: usize, c: usize) {
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + c);
        }
    }

    fn swap_rows(&mut self, a: usize, c: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, c * self.cols + j);
        }
    }

    /// `col_j -= c · col_i`.
    fn col_axpy(&mut self, j: usize, i: usize, c: &Series) {
        for r in 0..self.rows {
            let src = self.get(r, i);
            if src.is_zero() && src.is_exact() {
                continue;
            }
            let v = self.get(r, j) - &(c * src);
            self.set(r, j, v);
        }
    }

    /// `row_i += c · row_j`.
    fn row_axpy(&mut self, i: usize, j: usize, c: &Series) {
        for k in 0..self.cols {
            let src = self.get(j, k);
            if src.is_zero() && src.is_exact() {
                continue;
            }
            let v = self.get(i, k) + &(c * src);
            self.set(i, k, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = -self.get(i, k);
            self.set(i, k, v);
        }
    }

    /// Factors `self = L' · Q` with `L'` lower triangular, `Q` over the
    /// power-series ring (all entry degrees ≤ 0) and `det Q = 1`.
    ///
    /// Row by row, the entry of maximal degree among the remaining columns is
    /// swapped onto the diagonal (ties go to the smallest column) and the
    /// columns to its right are cleared by valuation-ring column operations.
    pub fn lq_decompose(&self) -> Result<LQFactors> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("LQ needs a square matrix".into()));
        }
        let d = self.rows;
        let f = self.field;
        let mut a = self.clone();
        let mut q = Self::identity(f, d);
        let mut qinv = Self::identity(f, d);
        let mut swaps = 0usize;
        let mut dropped: Option<i64> = None;
        for i in 0..d {
            let pivot = (i..d)
                .filter(|&j| !a.get(i, j).is_zero())
                .max_by(|&j, &k| a.get(i, j).deg().cmp(&a.get(i, k).deg()).then(k.cmp(&j)))
                .ok_or(Error::Singular { row: i })?;
            if pivot != i {
                a.swap_cols(i, pivot);
                qinv.swap_cols(i, pivot);
                q.swap_rows(i, pivot);
                swaps += 1;
            }
            let diag = a.get(i, i).clone();
            for j in i + 1..d {
                let e = a.get(i, j);
                if e.is_zero() && e.is_exact() {
                    continue;
                }
                let c = quotient(e, &diag)?;
                a.col_axpy(j, i, &c);
                qinv.col_axpy(j, i, &c);
                q.row_axpy(i, j, &c);
                let rest = a.get(i, j);
                if let Some(p) = rest.precision() {
                    dropped = Some(dropped.map_or(p, |q: i64| q.min(p)));
                }
                if !rest.is_zero() {
                    return Err(Error::PrecisionExhausted(format!(
                        "elimination left a nonzero entry at ({i},{j})"
                    )));
                }
                a.set(i, j, Series::zero(f));
            }
        }
        if swaps % 2 == 1 {
            a.negate_col(0);
            qinv.negate_col(0);
            q.negate_row(0);
        }
        Ok(LQFactors { lprime: a, q, qinv, dropped })
    }

    /// Inverse via `A^{-1} = Q^{-1} L'^{-1}`.
    pub fn inverse(&self) -> Result<LaurentMatrix> {
        let lq = self.lq_decompose()?;
        let linv = lq.lprime.lower_triangular_inverse()?;
        lq.qinv.mat_mul(&linv)
    }

    /// Forward substitution for `L X = I`.
    pub fn lower_triangular_inverse(&self) -> Result<LaurentMatrix> {
        let d = self.rows;
        let f = self.field;
        let mut x = Self::zeros(f, d, d);
        for k in 0..d {
            for i in k..d {
                let mut rhs = if i == k { Series::one(f) } else { Series::zero(f) };
                for j in k..i {
                    let l = self.get(i, j);
                    if l.is_zero() && l.is_exact() {
                        continue;
                    }
                    rhs = &rhs - &(l * x.get(j, k));
                }
                let diag = self.get(i, i);
                if diag.is_zero() {
                    return Err(Error::Singular { row: i });
                }
                let v = if rhs.is_zero() && rhs.is_exact() { rhs } else { quotient(&rhs, diag)? };
                x.set(i, k, v);
            }
        }
        Ok(x)
    }

    /// `deg det` as `Σ deg l'_jj`.
    pub fn det_degree(&self) -> Result<Deg> {
        let lq = self.lq_decompose()?;
        Ok(lq.det_degree())
    }

    /// Determinant by the Leibniz expansion; meant for small `d`.
    pub fn det_leibniz(&self) -> Result<Series> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let d = self.rows;
        let f = self.field;
        let mut perm: Vec<usize> = (0..d).collect();
        let mut acc = Series::zero(f);
        // Heap's algorithm; the sign flips with every swap.
        let mut c = vec![0usize; d];
        let mut sign_neg = false;
        let term = |perm: &[usize], neg: bool| -> Series {
            let mut t = Series::one(f);
            for (i, &j) in perm.iter().enumerate() {
                t = &t * self.get(i, j);
            }
            if neg {
                -&t
            } else {
                t
            }
        };
        acc = &acc + &term(&perm, sign_neg);
        let mut i = 0;
        while i < d {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                sign_neg = !sign_neg;
                acc = &acc + &term(&perm, sign_neg);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        Ok(acc)
    }
}

impl std::fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "LaurentMatrix[b={}] {}x{}", self.field.order(), self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// `T = L' · Q` with `Q^{-1}` alongside.
#[derive(Clone, Debug)]
pub struct LQFactors {
    pub lprime: LaurentMatrix,
    pub q: LaurentMatrix,
    pub qinv: LaurentMatrix,
    dropped: Option<i64>,
}

impl LQFactors {
    /// Precision every factor is known to, including the entries above the
    /// diagonal of `L'` that were cleared to exact zero.
    pub fn precision(&self) -> Option<i64> {
        [self.lprime.precision(), self.q.precision(), self.qinv.precision(), self.dropped]
            .into_iter()
            .flatten()
            .min()
    }

    pub fn det_degree(&self) -> Deg {
        (0..self.lprime.rows()).fold(Deg::Finite(0), |acc, j| acc + self.lprime.get(j, j).deg())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    b: u32,
    precision: Option<i64>,
    entries: Vec<Vec<String>>,
}

impl Serialize for LaurentMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            b: self.field.order(),
            precision: self.precision(),
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(Series::to_compact).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(d)?;
        let field = Field::new(repr.b).map_err(D::Error::custom)?;
        let rows = repr
            .entries
            .iter()
            .map(|r| r.iter().map(|s| Series::parse_compact(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        LaurentMatrix::from_rows(field, rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    fn xi(p: i64) -> Series {
        Series::monomial(f2(), 1, -1).frobenius_sum(p).unwrap()
    }

    fn m2(a: &Series, c: &Series, e: &Series, g: &Series) -> LaurentMatrix {
        LaurentMatrix::from_rows(f2(), vec![vec![a.clone(), c.clone()], vec![e.clone(), g.clone()]])
            .unwrap()
    }

    fn is_identity(m: &LaurentMatrix) -> bool {
        let id = LaurentMatrix::identity(m.field(), m.rows());
        m.sub(&id).unwrap().entries().all(Series::is_zero)
    }

    #[test]
    fn vandermonde_inverse_in_char_two() {
        let one = Series::one(f2());
        let x = xi(40);
        let one_x = &one + &x;
        let b = m2(&one, &x, &one, &one_x);
        let binv = m2(&one_x, &x, &one, &one);
        assert!(is_identity(&b.mat_mul(&binv).unwrap()));
        let inv = b.inverse().unwrap();
        assert!(inv.sub(&binv).unwrap().entries().all(Series::is_zero));
    }

    #[test]
    fn lq_of_worked_example() {
        let one = Series::one(f2());
        let x = xi(40);
        let one_x = &one + &x;
        let t = m2(&one_x, &one, &x, &one);
        let lq = t.lq_decompose().unwrap();
        let l = &lq.lprime;
        assert!(l.get(0, 0).agrees_with(&one_x));
        assert!(l.get(0, 1).is_zero());
        assert!(l.get(1, 0).agrees_with(&x));
        let want = one_x.inv().unwrap();
        assert!(l.get(1, 1).agrees_with(&want));
        assert!(lq.q.max_degree() <= Deg::Finite(0));
        assert!((&lq.q.det_leibniz().unwrap() - &one).is_zero());
        assert!(l.mat_mul(&lq.q).unwrap().sub(&t).unwrap().entries().all(Series::is_zero));
        assert_eq!(lq.det_degree(), Deg::Finite(0));
    }

    #[test]
    fn trivial_decompositions() {
        let g = Field::new(3).unwrap();
        let id = LaurentMatrix::identity(g, 3);
        let lq = id.lq_decompose().unwrap();
        assert_eq!(lq.lprime, id);
        assert_eq!(lq.q, id);
        let t = LaurentMatrix::from_rows(
            g,
            vec![
                vec![Series::monomial(g, 2, 0), Series::zero(g)],
                vec![Series::monomial(g, 1, -3), Series::monomial(g, 1, -1)],
            ],
        )
        .unwrap();
        let lq = t.lq_decompose().unwrap();
        assert_eq!(lq.lprime, t);
        assert_eq!(lq.q, LaurentMatrix::identity(g, 2));
    }

    #[test]
    fn diagonal_inverse_and_degree() {
        let g = f2();
        let d = LaurentMatrix::diag(g, vec![Series::monomial(g, 1, 2), Series::monomial(g, 1, -1)]);
        let want =
            LaurentMatrix::diag(g, vec![Series::monomial(g, 1, -2), Series::monomial(g, 1, 1)]);
        assert_eq!(d.inverse().unwrap(), want);
        let e = LaurentMatrix::diag(g, vec![Series::monomial(g, 1, 3), Series::monomial(g, 1, -1)]);
        assert_eq!(e.det_degree().unwrap(), Deg::Finite(2));
        assert_eq!(LaurentMatrix::identity(g, 4).det_degree().unwrap(), Deg::Finite(0));
    }

    #[test]
    fn singular_is_reported() {
        let g = f2();
        let one = Series::one(g);
        let s = m2(&one, &one, &one, &one);
        assert!(matches!(s.lq_decompose(), Err(Error::Singular { row: 1 })));
    }

    #[test]
    fn json_round_trip() {
        let one = Series::one(f2());
        let x = xi(12);
        let t = m2(&(&one + &x), &one, &x, &one);
        let js = serde_json::to_string(&t).unwrap();
        let back: LaurentMatrix = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
    }
}
