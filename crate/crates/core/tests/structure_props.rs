use polyfrolov::algebra::{Deg, Field, Poly, Series};
use polyfrolov::construction::{build_fn, det_b_degree_formula, generator_matrix};
use polyfrolov::lattice::{m_scan, ShrinkFactor};
use polyfrolov::linalg::FbMatrix;
use polyfrolov::matrix::LaurentMatrix;
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u32, 3, 5]).prop_map(|b| Field::new(b).unwrap())
}

fn matrix_in(f: Field, d: usize, prec: i64) -> impl Strategy<Value = LaurentMatrix> {
    let b = f.order() as u8;
    let entry = (-2i64..=2, prop::collection::vec(0..b, (prec + 3) as usize))
        .prop_map(move |(top, c)| Series::from_coeffs(f, top, c, Some(prec)));
    prop::collection::vec(prop::collection::vec(entry, d), d)
        .prop_map(move |rows| LaurentMatrix::from_rows(f, rows).unwrap())
}

fn square() -> impl Strategy<Value = LaurentMatrix> {
    (field(), 1usize..=4).prop_flat_map(|(f, d)| matrix_in(f, d, 48))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lq_contract(t in square()) {
        let Ok(lq) = t.lq_decompose() else { return Ok(()) };
        let prec = lq.precision().unwrap_or(i64::MAX);
        let residual = lq.lprime.mat_mul(&lq.q).unwrap().sub(&t).unwrap();
        for e in residual.entries() {
            prop_assert!(e.is_zero());
            prop_assert!(e.precision().unwrap_or(i64::MAX) >= prec - 4);
        }
        prop_assert!(lq.q.max_degree() <= Deg::Finite(0));
        let det = &lq.q.det_leibniz().unwrap() - &Series::one(t.field());
        prop_assert!(det.is_zero());
        for i in 0..t.rows() {
            for j in i + 1..t.cols() {
                prop_assert!(lq.lprime.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn lq_is_deterministic(t in square()) {
        let (a, c) = (t.lq_decompose(), t.lq_decompose());
        match (a, c) {
            (Ok(a), Ok(c)) => {
                prop_assert_eq!(a.lprime, c.lprime);
                prop_assert_eq!(a.q, c.q);
            }
            (Err(a), Err(c)) => prop_assert_eq!(a.code(), c.code()),
            _ => prop_assert!(false, "outcomes differ"),
        }
    }

    #[test]
    fn inverse_negates_det_degree(t in square()) {
        let Ok(inv) = t.inverse() else { return Ok(()) };
        let d = t.det_degree().unwrap();
        let di = inv.det_degree().unwrap();
        prop_assert_eq!(d.finite().map(|x| -x), di.finite());
    }

    #[test]
    fn rank_nullity((f, _, cols, data) in field().prop_flat_map(|f| {
        let b = f.order() as u8;
        (1usize..6, 1usize..7).prop_flat_map(move |(r, c)| {
            (Just(f), Just(r), Just(c), prop::collection::vec(0..b, r * c))
        })
    })) {
        let m = FbMatrix::from_rows(f, cols, &data.chunks(cols).map(<[u8]>::to_vec).collect::<Vec<_>>());
        let k = m.kernel();
        prop_assert_eq!(k.len() + m.rank(), cols);
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }
}

fn random_poly(f: Field, seed: u64, len: usize) -> Poly {
    let b = f.order() as u64;
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let coeffs = (0..len)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % b) as u8
        })
        .collect();
    Poly::new(f, coeffs)
}

#[test]
fn dual_pairing_lands_in_polynomials() {
    for (b, n) in [(2u32, 1u32), (3, 1), (2, 2)] {
        let f = Field::new(b).unwrap();
        let c = generator_matrix(f, n, 96).unwrap();
        let t = &c.lattice.generator;
        let dual = c.lattice.dual_generator().unwrap();
        let d = t.rows();
        for seed in 0..20u64 {
            let g: Vec<Poly> = (0..d).map(|j| random_poly(f, seed * 31 + j as u64, 4)).collect();
            let h: Vec<Poly> = (0..d).map(|j| random_poly(f, seed * 57 + j as u64 + 7, 4)).collect();
            let x = t.apply_poly(&g).unwrap();
            let y = dual.apply_poly(&h).unwrap();
            let mut ip = Series::zero(f);
            for (a, c) in x.iter().zip(&y) {
                ip = &ip + &(a * c);
            }
            let want = g.iter().zip(&h).fold(Poly::zero(f), |acc, (a, c)| &acc + &(a * c));
            assert!(ip.agrees_with(&Series::from_poly(&want)), "b={b} n={n} seed={seed}");
            assert_eq!(ip.res().unwrap(), 0);
        }
    }
}

#[test]
fn det_b_matches_closed_form() {
    for (b, n) in [(2u32, 1u32), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let f = Field::new(b).unwrap();
        let c = generator_matrix(f, n, 64).unwrap();
        assert_eq!(c.det_b_degree, det_b_degree_formula(b, n), "b={b} n={n}");
    }
}

#[test]
fn fn_is_additive_in_polynomial_shifts() {
    for (b, n) in [(2u32, 2u32), (3, 1), (2, 3), (3, 2)] {
        let f = Field::new(b).unwrap();
        let fnp = build_fn(f, n).unwrap();
        assert!(fnp.is_monic());
        assert_eq!(fnp.z_degree(), Some((b as usize).pow(n)));
        // the z^0 coefficient of F_n vanishes, so p_d has constant term x^{-1}
        assert!(fnp.coeff(0).is_zero());
        for seed in 0..10u64 {
            let z = random_poly(f, seed, 5);
            let g = random_poly(f, seed + 100, 3);
            for a in 0..b as u8 {
                let lhs = fnp.eval_poly(&(&z + &g.scale(a)));
                let rhs = &fnp.eval_poly(&z) + &fnp.eval_poly(&g).scale(a);
                assert_eq!(lhs, rhs, "b={b} n={n} a={a}");
            }
        }
    }
}

#[test]
fn scan_is_monotone_in_the_bound() {
    for (b, n) in [(2u32, 1u32), (3, 1)] {
        let f = Field::new(b).unwrap();
        let c = generator_matrix(f, n, 64).unwrap();
        let mut prev = Deg::Finite(i64::MAX);
        for bound in 0..=3 {
            let r = m_scan(&c.lattice, bound, 1 << 20).unwrap();
            assert!(r.m_hat <= prev, "b={b} bound={bound}");
            prev = r.m_hat;
        }
    }
}

#[test]
fn shrinking_shifts_the_scan() {
    let f = Field::new(2).unwrap();
    let c = generator_matrix(f, 1, 64).unwrap();
    let base = m_scan(&c.lattice, 3, 1 << 20).unwrap();
    for r in 1..=2 {
        let sf = ShrinkFactor::uniform(f, 2, r);
        let shrunk = c.lattice.shrink(&sf).unwrap();
        let s = m_scan(&shrunk, 3, 1 << 20).unwrap();
        assert_eq!(s.m_hat, base.m_hat + Deg::Finite(sf.total_degree()));
    }
}
