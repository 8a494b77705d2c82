//! One PASS/FAIL line per acceptance criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use polyfrolov::algebra::{Deg, Field, Poly, Series};
use polyfrolov::construction::{
    admissibility_certificate, build_fn, det_b_degree_formula, generator_matrix, p_d_residual, roots_pd, t_bound_formula,
};
use polyfrolov::lattice::{m_scan, ShrinkFactor, DEFAULT_SCAN_CAP};
use polyfrolov::matrix::LaurentMatrix;
use polyfrolov::netanalysis::{character_sum, dual_net, duality_check};
use polyfrolov::pointgen::{build_net, Net};
use polyfrolov::quality::star_discrepancy_exact;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn field(b: u32) -> Field {
    Field::new(b).unwrap()
}

struct Case {
    b: u32,
    n: u32,
    r: usize,
    net: Net,
}

impl Case {
    fn label(&self) -> String {
        format!("b={} n={} r={}", self.b, self.n, self.r)
    }
}

fn build(b: u32, n: u32, r: usize) -> Case {
    let f = field(b);
    let d = (b as usize).pow(n);
    let net = build_net(f, n, &ShrinkFactor::uniform(f, d, r), None, None)
        .unwrap_or_else(|e| panic!("b={b} n={n} r={r}: {e}"));
    Case { b, n, r, net }
}

fn cardinality(cases: &[Case], elapsed: Duration) -> Outcome {
    let mut bad = Vec::new();
    for c in cases.iter().filter(|c| c.n == 1) {
        let d = c.b as i64;
        let det_t = -c.net.construction.det_b_degree;
        let want = (c.b as u128).pow((-det_t + d * c.r as i64) as u32);
        let got = c.net.points.generator.count_distinct();
        if got != want {
            bad.push(format!("{}: {got} != {want}", c.label()));
        }
    }
    let fast = elapsed < Duration::from_secs(10);
    let n = cases.iter().filter(|c| c.n == 1).count();
    outcome(
        bad.is_empty() && fast,
        format!("{n} nets, distinct counts match b^(-deg det T + d r), {elapsed:.2?} {bad:?}"),
    )
}

fn worked_example() -> Outcome {
    let f = field(2);
    let c = generator_matrix(f, 1, 128).unwrap();
    let xi = Series::monomial(f, 1, -1).frobenius_sum(128).unwrap();
    let one = Series::one(f);
    let want = LaurentMatrix::from_rows(f, vec![vec![&one + &xi, one.clone()], vec![xi.clone(), one]])
        .unwrap();
    let t_ok = c.lattice.generator.sub(&want).unwrap().entries().all(Series::is_zero);
    let xi_ok = (&(&xi * &xi) - &(&xi + &Series::monomial(f, 1, -1))).is_zero();
    let det_ok = c.det_b_degree == 0 && det_b_degree_formula(2, 1) == 0;
    let scan = m_scan(&c.lattice, 3, DEFAULT_SCAN_CAP)
        .unwrap()
        .with_certificate(admissibility_certificate(2, 1));
    let scan_ok = scan.m_hat == Deg::Finite(-1) && scan.m_hat >= Deg::Finite(1 - 2) && scan.exact;
    outcome(
        t_ok && xi_ok && det_ok && scan_ok,
        format!(
            "T matches [[1+xi,1],[xi,1]]: {t_ok}, deg det B = {}, M-hat(D=3) = {} witness {:?}",
            c.det_b_degree, scan.m_hat, scan.witness
        ),
    )
}

fn t_values(cases: &[Case]) -> (Outcome, Vec<(String, u32, Option<u32>, u32)>) {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for c in cases.iter().filter(|c| c.n == 1 && (c.b == 2 || c.r <= 3)) {
        let p = c.net.points.generator.materialize();
        let rep = duality_check(&p).unwrap();
        if rep.exact_t != 0 {
            bad.push(format!("{}: t={}", c.label(), rep.exact_t));
        }
        rows.push((c.label(), rep.exact_t, rep.delta, p.m));
    }
    let elapsed = start.elapsed();
    let detail = format!("{} nets with t=0, {elapsed:.2?} {bad:?}", rows.len());
    (outcome(bad.is_empty() && elapsed < Duration::from_secs(60), detail), rows)
}

fn d4_case(case: &Case) -> (Outcome, (String, u32, Option<u32>, u32)) {
    let start = Instant::now();
    let p = case.net.points.generator.materialize();
    let rep = duality_check(&p).unwrap();
    let bound = t_bound_formula(2, 2);
    let elapsed = start.elapsed();
    let pass = p.m == 8
        && p.count_distinct() == 256
        && bound == 4
        && (rep.exact_t as i64) <= bound
        && elapsed < Duration::from_secs(120);
    (
        outcome(
            pass,
            format!("m={} points={} exact_t={} bound={bound}, {elapsed:.2?}", p.m, p.len(), rep.exact_t),
        ),
        (case.label(), rep.exact_t, rep.delta, p.m),
    )
}

fn duality(rows: &[(String, u32, Option<u32>, u32)]) -> Outcome {
    let mut bad = Vec::new();
    for (label, t, delta, m) in rows {
        let from_dual = match delta {
            None => 0,
            Some(dl) => (*m as i64 - *dl as i64 + 1).max(0) as u32,
        };
        if from_dual != *t {
            bad.push(format!("{label}: t={t} delta={delta:?}"));
        }
    }
    let summary: Vec<String> =
        rows.iter().map(|(l, t, dl, _)| format!("{l}: t={t} delta={}", dl.unwrap_or(0))).collect();
    outcome(bad.is_empty(), format!("{} nets consistent [{}] {bad:?}", rows.len(), summary.join("; ")))
}

fn random_matrix(rng: &mut impl Rng, f: Field, d: usize, prec: i64) -> LaurentMatrix {
    let b = f.order();
    let rows = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let top = rng.gen_range(-2..=2i64);
                    let coeffs = (0..top + prec + 1).map(|_| rng.gen_range(0..b) as u8).collect();
                    Series::from_coeffs(f, top, coeffs, Some(prec))
                })
                .collect()
        })
        .collect();
    LaurentMatrix::from_rows(f, rows).unwrap()
}

fn lq_contract() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x51);
    let prec_in = 64;
    let mut violations = Vec::new();
    let mut lowest = i64::MAX;
    for b in [2, 3, 5] {
        let f = field(b);
        let mut done = 0;
        let mut singular = 0;
        while done < 200 {
            let d = rng.gen_range(1..=4);
            let t = random_matrix(&mut rng, f, d, prec_in);
            let Ok(lq) = t.lq_decompose() else {
                singular += 1;
                assert!(singular < 1000, "too many singular samples");
                continue;
            };
            done += 1;
            let prec = lq.precision().unwrap_or(i64::MAX);
            lowest = lowest.min(prec);
            let need = prec.saturating_sub(4);
            let certified = |s: &Series| s.is_zero() && s.precision().unwrap_or(i64::MAX) >= need;
            let residual = lq.lprime.mat_mul(&lq.q).unwrap().sub(&t).unwrap();
            if !residual.entries().all(certified) {
                violations.push(format!("b={b} d={d}: L'Q - T"));
            }
            if lq.q.max_degree() > Deg::Finite(0) {
                violations.push(format!("b={b} d={d}: deg q > 0"));
            }
            let det = &lq.q.det_leibniz().unwrap() - &Series::one(f);
            if !certified(&det) {
                violations.push(format!("b={b} d={d}: det Q != 1"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!("600 matrices, input precision {prec_in}, lowest factor precision {lowest}, violations {violations:?}"),
    )
}

fn root_residuals() -> Outcome {
    let prec = 128;
    let mut bad = Vec::new();
    let mut worst = Vec::new();
    for (b, n) in [(2u32, 1u32), (2, 2), (3, 1)] {
        let f = field(b);
        let roots = roots_pd(f, n, prec).unwrap();
        let fnp = build_fn(f, n).unwrap();
        let limit = -(prec - n as i64 * (b as i64).pow(n));
        let mut top = i64::MIN;
        for xi in &roots.roots {
            let res = p_d_residual(&fnp, xi);
            let deg = match res.deg() {
                Deg::Finite(e) => e,
                Deg::NegInf => -(res.precision().unwrap_or(i64::MAX) + 1),
            };
            top = top.max(deg);
            if deg >= limit {
                bad.push(format!("b={b} n={n}: deg {deg} >= {limit}"));
            }
        }
        if roots.roots.len() != (b as usize).pow(n) {
            bad.push(format!("b={b} n={n}: {} roots", roots.roots.len()));
        }
        worst.push(format!("b={b} n={n}: max deg {top} < {limit}"));
    }
    outcome(bad.is_empty(), format!("{} {bad:?}", worst.join("; ")))
}

fn precision_soundness(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    for c in cases {
        let f = field(c.b);
        let d = (c.b as usize).pow(c.n);
        let g = &c.net.points.generator;
        let again = build_net(
            f,
            c.n,
            &ShrinkFactor::uniform(f, d, c.r),
            Some(g.depth),
            Some(2 * c.net.precision),
        )
        .unwrap();
        let h = &again.points.generator;
        if h.m != g.m || h.depth != g.depth || h.images != g.images {
            bad.push(c.label());
        }
    }
    outcome(bad.is_empty(), format!("{} nets bit-identical at doubled precision {bad:?}", cases.len()))
}

fn character_orthogonality(case: &Case) -> Outcome {
    let p = case.net.points.generator.materialize();
    let n = 6;
    let dual = dual_net(&p, n).unwrap();
    let total = 1u64 << (2 * n);
    let (mut zeros, mut full, mut bad) = (0u64, 0u64, Vec::new());
    for idx in 0..total {
        let flat: Vec<u8> = (0..2 * n).map(|k| ((idx >> k) & 1) as u8).collect();
        let g = vec![flat[..n].to_vec(), flat[n..].to_vec()];
        let s = character_sum(&p, &g).unwrap();
        let in_dual = dual.contains(&flat);
        match (s.integer_value(), s.is_zero()) {
            (_, true) if !in_dual => zeros += 1,
            (Some(64), _) if in_dual => full += 1,
            _ => bad.push(idx),
        }
    }
    outcome(
        bad.is_empty() && zeros + full == total,
        format!("{total} characters: {full} sum to 64 (dual net), {zeros} vanish, mismatches {}", bad.len()),
    )
}

fn star_discrepancy(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    let mut values = Vec::new();
    for c in cases.iter().filter(|c| c.b == 2 && c.n == 1) {
        let p = c.net.points.generator.materialize();
        let r = star_discrepancy_exact(&p, 4096).unwrap();
        values.push((c.r, r.value, format!("{}/{}", r.numerator, r.denominator)));
    }
    let elapsed = start.elapsed();
    let decreasing = values.windows(2).all(|w| w[1].1 < w[0].1);
    let last = values.last().map_or(1.0, |v| v.1);
    let shown: Vec<String> = values.iter().map(|(r, v, q)| format!("r={r}: {q} ({v:.5})")).collect();
    outcome(
        decreasing && last < 0.01 && values.len() == 5 && elapsed < Duration::from_secs(30),
        format!("{}, {elapsed:.2?}", shown.join(", ")),
    )
}

/// Points of `f^{-1} T F_b[x]^2` in the unit cube, found by enumerating
/// `g` with `deg g_j < r + 2` and keeping `y` with every `deg y_j < 0`.
fn brute_force(t: &LaurentMatrix, r: usize, depth: usize) -> BTreeSet<Vec<u8>> {
    let f = t.field();
    let span = 1u64 << (r + 2);
    let mut out = BTreeSet::new();
    for i in 0..span {
        for j in 0..span {
            let g = [Poly::from_index(f, i), Poly::from_index(f, j)];
            let y = t.apply_poly(&g).unwrap();
            let y: Vec<Series> = y.iter().map(|s| s.shift(-(r as i64))).collect();
            if y.iter().all(|s| s.deg() < Deg::Finite(0)) {
                let mut digits = Vec::new();
                for s in &y {
                    digits.extend(s.digits(depth).unwrap());
                }
                out.insert(digits);
            }
        }
    }
    out
}

fn membership_oracle() -> Outcome {
    let f = field(2);
    let mut bad = Vec::new();
    let mut sizes = Vec::new();
    for r in 0..=2 {
        let net = build_net(f, 1, &ShrinkFactor::uniform(f, 2, r), None, None).unwrap();
        let g = &net.points.generator;
        let pipeline: BTreeSet<Vec<u8>> = g.materialize().points().map(<[u8]>::to_vec).collect();
        let oracle = brute_force(&net.construction.lattice.generator, r, g.depth);
        if pipeline != oracle {
            bad.push(r);
        }
        sizes.push(format!("r={r}: {}", oracle.len()));
    }
    outcome(bad.is_empty(), format!("sets equal [{}] {bad:?}", sizes.join(", ")))
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    let start = Instant::now();
    let mut cases = Vec::new();
    for r in 1..=5 {
        cases.push(build(2, 1, r));
    }
    for r in 1..=5 {
        cases.push(build(3, 1, r));
    }
    let c1 = cardinality(&cases, start.elapsed());
    results.push((1, "cardinality law", c1));
    results.push((2, "worked b=2 n=1 generator", worked_example()));

    let (c3, mut rows) = t_values(&cases);
    results.push((3, "t = 0 for d <= b", c3));
    let d4 = build(2, 2, 1);
    let (c4, row) = d4_case(&d4);
    results.push((4, "d = 4 net", c4));
    rows.push(row);
    results.push((5, "duality t = max(0, m - delta + 1)", duality(&rows)));
    results.push((6, "LQ contract", lq_contract()));
    results.push((7, "root residuals", root_residuals()));

    let mut checked = cases;
    checked.push(d4);
    results.push((8, "precision soundness", precision_soundness(&checked)));
    let r3 = checked.iter().find(|c| c.b == 2 && c.n == 1 && c.r == 3).unwrap();
    results.push((9, "character orthogonality", character_orthogonality(r3)));
    results.push((10, "exact star discrepancy", star_discrepancy(&checked)));
    results.push((11, "brute-force membership", membership_oracle()));

    let mut failed = 0;
    for (k, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {k:>2} [{tag}] {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
