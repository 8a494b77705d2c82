//! Star discrepancy, equal-weight cubature and integration-error trends.

use serde::Serialize;

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::lattice::ShrinkFactor;
use crate::pointgen::{build_net, DigitPointSet};

/// Largest dimension handled by the exact discrepancy sweep.
pub const MAX_EXACT_DIM: usize = 3;

/// Default cap on the number of points for the exact discrepancy.
pub const DEFAULT_DISCREPANCY_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyResult {
    pub points: usize,
    pub d: usize,
    /// Exact value `numerator / denominator`, reduced.
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
    /// `b^t (m−t)^{d−1} / b^m` with constant 1; a shape, not a certified bound.
    pub bound: Option<f64>,
    pub method: &'static str,
}

fn gcd(mut a: u128, mut c: u128) -> u128 {
    while c != 0 {
        (a, c) = (c, a % c);
    }
    a
}

/// Integer coordinates over the common denominator `b^D`, where `D` is the
/// last digit position holding a nonzero digit.
fn integer_coords(p: &DigitPointSet) -> (Vec<Vec<u128>>, u128) {
    let b = p.b.order() as u128;
    let used = p.digits.chunks(p.depth).filter_map(|c| c.iter().rposition(|&x| x != 0)).max();
    let depth = used.map_or(1, |k| k + 1);
    let coords = (0..p.len())
        .map(|i| {
            (0..p.d)
                .map(|j| p.coord(i, j)[..depth].iter().fold(0u128, |a, &c| a * b + c as u128))
                .collect()
        })
        .collect();
    (coords, b.pow(depth as u32))
}

/// Exact `D*` over the critical corners: every upper corner whose
/// coordinates are point coordinates or 1, with the box taken open (points
/// strictly below) for the volume excess and closed (points at or below)
/// for the count excess.
pub fn star_discrepancy_exact(p: &DigitPointSet, cap: usize) -> Result<DiscrepancyResult> {
    if p.d > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge { d: p.d, max: MAX_EXACT_DIM });
    }
    if p.len() > cap {
        return Err(Error::BudgetExceeded { size: p.len() as u128, cap: cap as u128 });
    }
    if p.is_empty() {
        return Err(Error::PreconditionViolated("empty point set".into()));
    }
    let (coords, s) = integer_coords(p);
    let n = p.len() as u128;
    let scale = s
        .checked_pow(p.d as u32)
        .and_then(|v| v.checked_mul(n))
        .filter(|&v| v < 1 << 126)
        .ok_or_else(|| {
            Error::PreconditionViolated("exact discrepancy exceeds 128-bit arithmetic".into())
        })?;
    let best = sweep(&coords, p.d, s, n);
    let g = gcd(best, scale);
    let (num, den) = (best / g, scale / g);
    Ok(DiscrepancyResult {
        points: p.len(),
        d: p.d,
        numerator: num.to_string(),
        denominator: den.to_string(),
        value: num as f64 / den as f64,
        bound: None,
        method: "critical-corners",
    })
}

/// Maximum of both one-sided excesses, in units of `1/(N·S^d)`.
fn sweep(coords: &[Vec<u128>], d: usize, s: u128, n: u128) -> u128 {
    let mut grids: Vec<Vec<u128>> = (0..d)
        .map(|j| {
            let mut g: Vec<u128> = coords.iter().map(|c| c[j]).collect();
            g.push(s);
            g.sort_unstable();
            g.dedup();
            g
        })
        .collect();
    let last = grids.pop().expect("d >= 1");
    let mut best = 0u128;
    let mut prefix = vec![0usize; d - 1];
    loop {
        let corner: Vec<u128> = prefix.iter().enumerate().map(|(j, &k)| grids[j][k]).collect();
        let vol_prefix: u128 = corner.iter().product();
        let mut open: Vec<u128> = Vec::new();
        let mut closed: Vec<u128> = Vec::new();
        for c in coords {
            if c[..d - 1].iter().zip(&corner).all(|(x, y)| x < y) {
                open.push(c[d - 1]);
            }
            if c[..d - 1].iter().zip(&corner).all(|(x, y)| x <= y) {
                closed.push(c[d - 1]);
            }
        }
        open.sort_unstable();
        closed.sort_unstable();
        let (mut io, mut ic) = (0usize, 0usize);
        for &y in &last {
            while io < open.len() && open[io] < y {
                io += 1;
            }
            while ic < closed.len() && closed[ic] <= y {
                ic += 1;
            }
            let vol = n * vol_prefix * y;
            let unit = s.pow((d - 1) as u32);
            let below = io as u128 * unit * s;
            let at_or_below = ic as u128 * unit * s;
            if y < s || d == 1 {
                best = best.max(at_or_below.saturating_sub(vol));
            }
            best = best.max(vol.saturating_sub(below));
        }
        // advance the prefix corner
        let mut j = 0;
        loop {
            if j == d - 1 {
                return best;
            }
            prefix[j] += 1;
            if prefix[j] < grids[j].len() {
                break;
            }
            prefix[j] = 0;
            j += 1;
        }
    }
}

/// `b^t (m−t)^{d−1} / b^m`.
pub fn discrepancy_bound(m: u32, t: u32, d: usize, b: u32) -> f64 {
    let b = b as f64;
    b.powi(t as i32) * ((m - t) as f64).powi(d as i32 - 1) / b.powi(m as i32)
}

/// Fixed test integrands on `[0,1)^d` with known integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrand {
    Constant,
    Linear,
    SmoothProduct,
    Oscillatory,
    Indicator,
}

const OSC_SHIFT: f64 = 0.3;
const OSC_FREQ: f64 = 1.5;
const INDICATOR_EDGE: f64 = 0.6;

impl Integrand {
    pub const ALL: [Integrand; 5] = [
        Integrand::Constant,
        Integrand::Linear,
        Integrand::SmoothProduct,
        Integrand::Oscillatory,
        Integrand::Indicator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Integrand::Constant => "constant",
            Integrand::Linear => "linear",
            Integrand::SmoothProduct => "smooth-product",
            Integrand::Oscillatory => "oscillatory",
            Integrand::Indicator => "indicator",
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Integrand::Constant => 1.0,
            Integrand::Linear => x[0],
            Integrand::SmoothProduct => x.iter().map(|&v| 1.0 + (v - 0.5)).product(),
            Integrand::Oscillatory => {
                (std::f64::consts::TAU * OSC_SHIFT + OSC_FREQ * x.iter().sum::<f64>()).cos()
            }
            Integrand::Indicator => {
                if x.iter().all(|&v| v < INDICATOR_EDGE) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Exact integral over `[0,1)^d`.
    pub fn integral(self, d: usize) -> f64 {
        match self {
            Integrand::Constant | Integrand::SmoothProduct => 1.0,
            Integrand::Linear => 0.5,
            Integrand::Oscillatory => {
                // Re(e^{iθ} ((e^{ia} − 1)/(ia))^d)
                let a = OSC_FREQ;
                let (re1, im1) = (a.sin() / a, (1.0 - a.cos()) / a);
                let (mut re, mut im) = (
                    (std::f64::consts::TAU * OSC_SHIFT).cos(),
                    (std::f64::consts::TAU * OSC_SHIFT).sin(),
                );
                for _ in 0..d {
                    (re, im) = (re * re1 - im * im1, re * im1 + im * re1);
                }
                re
            }
            Integrand::Indicator => INDICATOR_EDGE.powi(d as i32),
        }
    }
}

impl std::str::FromStr for Integrand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Integrand::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown integrand {s:?}")))
    }
}

/// Equal-weight rule `(1/N) Σ ψ(x)`.
pub fn qmc_integrate(p: &DigitPointSet, psi: impl Fn(&[f64]) -> f64) -> f64 {
    let mut x = vec![0.0; p.d];
    let mut acc = 0.0;
    for i in 0..p.len() {
        for (j, slot) in x.iter_mut().enumerate() {
            *slot = p.float(i, j);
        }
        acc += psi(&x);
    }
    acc / p.len() as f64
}

/// The cubature prefactor `b^{deg det T} / b^{Σ deg f_j}` as an exact
/// fraction `(1, b^k)`.
pub fn cubature_prefactor(b: u32, det_t_degree: i64, shrink_degree: i64) -> Option<(u128, u128)> {
    let k = shrink_degree - det_t_degree;
    if k < 0 {
        return None;
    }
    (b as u128).checked_pow(k as u32).map(|q| (1, q))
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrationRow {
    pub r: usize,
    pub points: usize,
    pub estimate: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrationRun {
    pub integrand: Integrand,
    pub b: u32,
    pub n: u32,
    pub d: usize,
    pub rows: Vec<IntegrationRow>,
    /// Least-squares slope of `ln error` against `ln N` over nonzero errors.
    pub slope: Option<f64>,
}

impl IntegrationRun {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("integrand,r,points,estimate,error\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.integrand.name(),
                row.r,
                row.points,
                row.estimate,
                row.error
            ));
        }
        out
    }
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Cubature errors of the `(b, n)` nets with `f = (x^r, .., x^r)` over `rs`.
pub fn error_decay_experiment(
    b: Field,
    n: u32,
    integrand: Integrand,
    rs: std::ops::RangeInclusive<usize>,
) -> Result<IntegrationRun> {
    let d = (b.order() as usize).pow(n);
    let exact = integrand.integral(d);
    let mut rows = Vec::new();
    for r in rs {
        let net = build_net(b, n, &ShrinkFactor::uniform(b, d, r), None, None)?;
        let p = net.points.generator.materialize();
        let estimate = qmc_integrate(&p, |x| integrand.eval(x));
        rows.push(IntegrationRow { r, points: p.len(), estimate, error: (estimate - exact).abs() });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|row| row.error > 1e-15)
        .map(|row| ((row.points as f64).ln(), row.error.ln()))
        .unzip();
    let slope = least_squares_slope(&xs, &ys);
    Ok(IntegrationRun { integrand, b: b.order(), n, d, rows, slope })
}
