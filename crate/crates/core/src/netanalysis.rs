//! Net verification: elementary-interval counting, the dual net over F_b,
//! minimum NRT weight and character sums.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, FbMatrix};
use crate::par;
use crate::pointgen::DigitPointSet;

/// Dual spaces up to this many elements are enumerated outright.
pub const NRT_ENUMERATION_CAP: u128 = 1 << 20;

/// All `(l_1, .., l_parts)` with `Σ l_j = total` and `0 ≤ l_j ≤ max_part`,
/// in lexicographic order.
pub fn compositions(total: usize, parts: usize, max_part: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            if left <= max_part {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for l in 0..=left.min(max_part) {
            cur.push(l);
            rec(left - l, parts - 1, max_part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, max_part, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Counts of points in each elementary interval of shape `l`, indexed by the
/// concatenated digit prefixes.
pub fn interval_counts(p: &DigitPointSet, l: &[usize]) -> Result<Vec<u32>> {
    if l.len() != p.d {
        return Err(Error::DimensionMismatch("interval shape".into()));
    }
    if l.iter().any(|&k| k > p.depth) {
        return Err(Error::PreconditionViolated(format!(
            "interval shape {l:?} needs more than {} digits",
            p.depth
        )));
    }
    let b = p.b.order() as usize;
    let total: usize = l.iter().sum();
    let cells = b
        .checked_pow(total as u32)
        .filter(|&c| c <= 1 << 28)
        .ok_or(Error::BudgetExceeded { size: u128::MAX, cap: 1 << 28 })?;
    let mut counts = vec![0u32; cells];
    for pt in p.points() {
        let mut key = 0usize;
        for (j, &lj) in l.iter().enumerate() {
            for &c in &pt[j * p.depth..j * p.depth + lj] {
                key = key * b + c as usize;
            }
        }
        counts[key] += 1;
    }
    Ok(counts)
}

/// Whether every elementary interval of volume `b^{t−m}` holds exactly `b^t`
/// points; fails outright when `|P| ≠ b^m`.
pub fn is_net(p: &DigitPointSet, t: u32) -> Result<bool> {
    let b = p.b.order() as u128;
    if t > p.m || b.checked_pow(p.m) != Some(p.len() as u128) {
        return Ok(false);
    }
    let level = (p.m - t) as usize;
    let want = (p.b.order() as u32).pow(t);
    let shapes = compositions(level, p.d, level);
    let ok = par::map_range(shapes.len(), |i| -> Result<bool> {
        Ok(interval_counts(p, &shapes[i])?.iter().all(|&c| c == want))
    });
    for r in ok {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `t` for which `p` is a `(t, m, d)`-net.
pub fn exact_t(p: &DigitPointSet) -> Result<u32> {
    for t in 0..=p.m {
        if is_net(p, t)? {
            return Ok(t);
        }
    }
    Err(Error::PreconditionViolated(format!(
        "{} points is not b^m with m = {}",
        p.len(),
        p.m
    )))
}

/// The dual net at truncation depth `n`: all `g ∈ M^d_{b,n}` with
/// `res(Σ_j g_j p_j) = 0` for every point. Vectors use the layout
/// `j·n + k` for the coefficient of `x^k` in `g_j`.
#[derive(Clone, Debug)]
pub struct DualNet {
    pub b: Field,
    pub d: usize,
    pub n: usize,
    /// Rank of the truncated point set.
    pub point_rank: usize,
    pub basis: Vec<Vec<u8>>,
}

impl DualNet {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, g: &[u8]) -> bool {
        let mut e = EchelonBasis::new(self.b, self.d * self.n);
        for v in &self.basis {
            e.insert(v);
        }
        e.contains(g)
    }
}

/// Truncated point vectors in the pairing layout.
fn point_rows(p: &DigitPointSet, n: usize) -> impl Iterator<Item = Vec<u8>> + '_ {
    p.points().map(move |pt| {
        let mut v = Vec::with_capacity(p.d * n);
        for j in 0..p.d {
            v.extend_from_slice(&pt[j * p.depth..j * p.depth + n]);
        }
        v
    })
}

pub fn dual_net(p: &DigitPointSet, n: usize) -> Result<DualNet> {
    if n > p.depth {
        return Err(Error::PreconditionViolated(format!(
            "dual depth {n} exceeds point depth {}",
            p.depth
        )));
    }
    let len = p.d * n;
    let mut basis = EchelonBasis::new(p.b, len);
    let mut multiplicity: HashMap<Vec<u8>, usize> = HashMap::new();
    for v in point_rows(p, n) {
        basis.insert(&v);
        *multiplicity.entry(v).or_default() += 1;
    }
    let r = basis.rank();
    let b = p.b.order() as u128;
    let distinct = multiplicity.len() as u128;
    let uniform = multiplicity.values().all(|&c| c * multiplicity.len() == p.len());
    if b.checked_pow(r as u32) != Some(distinct) || !uniform {
        return Err(Error::NotAGroup);
    }
    let kernel = if len == 0 { Vec::new() } else { basis.to_matrix().kernel() };
    let kernel = if r == 0 {
        (0..len)
            .map(|i| {
                let mut v = vec![0u8; len];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        kernel
    };
    Ok(DualNet { b: p.b, d: p.d, n, point_rank: r, basis: kernel })
}

/// NRT weight `Σ_j μ(g_j)` with `μ(g) = 1 + deg g`, `μ(0) = 0`.
pub fn nrt_weight(g: &[u8], d: usize, n: usize) -> u32 {
    (0..d)
        .map(|j| {
            g[j * n..(j + 1) * n].iter().rposition(|&c| c != 0).map_or(0, |k| k as u32 + 1)
        })
        .sum()
}

/// Minimum NRT weight over nonzero dual elements; `None` for a trivial dual.
pub fn min_nrt(dual: &DualNet) -> Result<Option<u32>> {
    let size = (dual.b.order() as u128).checked_pow(dual.dimension() as u32);
    match size {
        Some(s) if s <= NRT_ENUMERATION_CAP => min_nrt_enumerate(dual),
        _ => Ok(min_nrt_profile(dual)),
    }
}

/// Minimum NRT weight by walking every element of the dual.
pub fn min_nrt_enumerate(dual: &DualNet) -> Result<Option<u32>> {
    let k = dual.dimension();
    if k == 0 {
        return Ok(None);
    }
    let f = dual.b;
    let b = f.order() as u8;
    let size = (b as u128)
        .checked_pow(k as u32)
        .filter(|&s| s <= 1 << 24)
        .ok_or(Error::BudgetExceeded { size: u128::MAX, cap: 1 << 24 })?;
    let len = dual.d * dual.n;
    let mut cur = vec![0u8; len];
    let mut odo = vec![0u8; k];
    let mut best = u32::MAX;
    for _ in 1..size {
        let mut p = 0;
        loop {
            for (o, &v) in cur.iter_mut().zip(&dual.basis[p]) {
                *o = f.add(*o, v);
            }
            odo[p] += 1;
            if odo[p] < b {
                break;
            }
            odo[p] = 0;
            p += 1;
        }
        best = best.min(nrt_weight(&cur, dual.d, dual.n));
    }
    Ok(Some(best))
}

/// Minimum NRT weight by weight profiles: the smallest `w` for which some
/// `(μ_1, .., μ_d)` with `Σ μ_j = w` admits a nonzero dual element with
/// `μ(g_j) ≤ μ_j`, detected as a rank drop of the basis restricted to the
/// coefficients that must vanish.
pub fn min_nrt_profile(dual: &DualNet) -> Option<u32> {
    let k = dual.dimension();
    if k == 0 {
        return None;
    }
    let basis = FbMatrix::from_rows(dual.b, dual.d * dual.n, &dual.basis);
    for w in 1..=dual.d * dual.n {
        for mu in compositions(w, dual.d, dual.n) {
            let forced: Vec<usize> = (0..dual.d)
                .flat_map(|j| (mu[j]..dual.n).map(move |kk| j * dual.n + kk))
                .collect();
            if basis.select_cols(&forced).rank() < k {
                return Some(w as u32);
            }
        }
    }
    unreachable!("a nonzero dual element has weight at most d·n")
}

/// `Σ_p ω_b^{res(p·g)}` kept as the histogram of residues.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSum {
    pub histogram: Vec<u64>,
}

impl CharacterSum {
    /// The sum vanishes exactly when all residues are equally frequent.
    pub fn is_zero(&self) -> bool {
        self.histogram.windows(2).all(|w| w[0] == w[1])
    }

    /// Integer value when every residue is 0 or the sum vanishes.
    pub fn integer_value(&self) -> Option<u64> {
        if self.is_zero() {
            Some(0)
        } else if self.histogram[1..].iter().all(|&c| c == 0) {
            Some(self.histogram[0])
        } else {
            None
        }
    }

    pub fn complex(&self) -> (f64, f64) {
        let b = self.histogram.len() as f64;
        self.histogram.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, &c)| {
            let a = std::f64::consts::TAU * k as f64 / b;
            (re + c as f64 * a.cos(), im + c as f64 * a.sin())
        })
    }
}

/// Character sum for `g` given as `d` coefficient vectors (ascending powers).
pub fn character_sum(p: &DigitPointSet, g: &[Vec<u8>]) -> Result<CharacterSum> {
    if g.len() != p.d {
        return Err(Error::DimensionMismatch("character vector".into()));
    }
    if let Some(j) = g.iter().position(|gj| gj.len() > p.depth) {
        return Err(Error::PreconditionViolated(format!(
            "g_{j} needs more than {} digits",
            p.depth
        )));
    }
    let f = p.b;
    let mut histogram = vec![0u64; f.order() as usize];
    for pt in p.points() {
        let mut r = 0u8;
        for (j, gj) in g.iter().enumerate() {
            for (k, &c) in gj.iter().enumerate() {
                r = f.add(r, f.mul(c, pt[j * p.depth + k]));
            }
        }
        histogram[r as usize] += 1;
    }
    Ok(CharacterSum { histogram })
}

/// Quality summary of a point set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetReport {
    pub b: u32,
    pub d: usize,
    pub m: u32,
    pub points: usize,
    pub exact_t: u32,
    pub t_bound_predicted: Option<i64>,
    /// Minimum NRT weight of the dual net at depth `dual_depth`; `None` is +∞.
    pub delta: Option<u32>,
    pub dual_depth: usize,
    pub dual_dimension: usize,
    pub strength: u32,
    pub duality_consistent: bool,
    pub star_discrepancy: Option<f64>,
    pub discrepancy_bound: Option<f64>,
}

/// `exact_t` by counting, cross-checked against `max(0, m − δ + 1)` from the
/// dual net at depth `m`.
pub fn duality_check(p: &DigitPointSet) -> Result<NetReport> {
    let t = exact_t(p)?;
    let n = (p.m as usize).min(p.depth);
    let dual = dual_net(p, n)?;
    let delta = min_nrt(&dual)?;
    let from_dual = match delta {
        None => 0,
        Some(dl) => (p.m as i64 - dl as i64 + 1).max(0) as u32,
    };
    Ok(NetReport {
        b: p.b.order(),
        d: p.d,
        m: p.m,
        points: p.len(),
        exact_t: t,
        t_bound_predicted: None,
        delta,
        dual_depth: n,
        dual_dimension: dual.dimension(),
        strength: p.m - t,
        duality_consistent: from_dual == t,
        star_discrepancy: None,
        discrepancy_bound: None,
    })
}
