use polyfrolov::algebra::{Deg, Field, Poly, Series};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u32, 3, 5, 7]).prop_map(|b| Field::new(b).unwrap())
}

fn poly_in(f: Field) -> impl Strategy<Value = Poly> {
    let b = f.order() as u8;
    prop::collection::vec(0..b, 0..8).prop_map(move |c| Poly::new(f, c))
}

/// A series whose leading coefficient is nonzero, known to `prec`.
fn unit_series_in(f: Field, prec: i64) -> impl Strategy<Value = Series> {
    let b = f.order() as u8;
    (-3i64..=3, 1..b, prop::collection::vec(0..b, 0..40)).prop_map(move |(top, lead, rest)| {
        let mut c = vec![lead];
        c.extend(rest);
        Series::from_coeffs(f, top, c, Some(prec))
    })
}

fn long_coeffs(f: Field) -> impl Strategy<Value = (i64, Vec<u8>)> {
    let b = f.order() as u8;
    (-2i64..=2, 1..b, prop::collection::vec(0..b, 200)).prop_map(|(top, lead, mut rest)| {
        rest.insert(0, lead);
        (top, rest)
    })
}

proptest! {
    #[test]
    fn poly_degree_laws((_, a, c) in field().prop_flat_map(|f| (Just(f), poly_in(f), poly_in(f)))) {
        prop_assert_eq!((&a * &c).deg(), a.deg() + c.deg());
        prop_assert!((&a + &c).deg() <= a.deg().max(c.deg()));
    }

    #[test]
    fn poly_ring_laws((f, a, c, e) in field().prop_flat_map(|f| (Just(f), poly_in(f), poly_in(f), poly_in(f)))) {
        prop_assert_eq!(&a * &(&c + &e), &(&a * &c) + &(&a * &e));
        prop_assert_eq!(&(&a + &c) - &c, a.clone());
        prop_assert_eq!(&a * &Poly::one(f), a);
    }

    #[test]
    fn series_degree_laws((_, a, c) in field().prop_flat_map(|f| (Just(f), poly_in(f), poly_in(f)))) {
        let (sa, sc) = (Series::from_poly(&a).shift(-3), Series::from_poly(&c).shift(-1));
        prop_assert_eq!((&sa * &sc).deg(), sa.deg() + sc.deg());
        prop_assert!((&sa + &sc).deg() <= sa.deg().max(sc.deg()));
    }

    #[test]
    fn poly_part_leaves_a_proper_fraction(s in field().prop_flat_map(|f| unit_series_in(f, 30))) {
        let p = s.poly_part().unwrap();
        let frac = &s - &Series::from_poly(&p);
        prop_assert!(frac.deg() < Deg::Finite(0));
    }

    #[test]
    fn inverse_is_two_sided(s in field().prop_flat_map(|f| unit_series_in(f, 40))) {
        let inv = s.inv().unwrap();
        let one = Series::one(s.field());
        let left = &(&s * &inv) - &one;
        let right = &(&inv * &s) - &one;
        let deg = s.deg().finite().unwrap();
        for r in [left, right] {
            prop_assert!(r.is_zero());
            prop_assert!(r.precision().unwrap() >= 40 + deg);
        }
    }

    #[test]
    fn frobenius_is_additive((f, a, c) in field().prop_flat_map(|f| (Just(f), unit_series_in(f, 25), unit_series_in(f, 25)))) {
        let b = f.order();
        let lhs = (&a + &c).pow(b);
        let rhs = &a.pow(b) + &c.pow(b);
        prop_assert!(lhs.agrees_with(&rhs));
        prop_assert!(a.frobenius().agrees_with(&a.pow(b)));
        for k in 0..b as u8 {
            prop_assert_eq!(Series::constant(f, k).pow(b), Series::constant(f, k));
        }
    }

    #[test]
    fn product_over_the_prime_field((f, p, g) in field().prop_flat_map(|f| (Just(f), poly_in(f), poly_in(f)))) {
        let b = f.order();
        let mut prod = Poly::one(f);
        for a in 0..b as u8 {
            prod = &prod * &(&p + &g.scale(a));
        }
        let want = &p.pow(b) - &(&p * &g.pow(b - 1));
        prop_assert_eq!(prod, want);
    }

    #[test]
    fn frobenius_sum_solves_artin_schreier(s in field().prop_flat_map(|f| unit_series_in(f, 30))) {
        let h = s.shift(-4 - s.deg().finite().unwrap());
        let sum = h.frobenius_sum(60).unwrap();
        // S − S^b = h
        let lhs = &sum - &sum.frobenius();
        prop_assert!(lhs.agrees_with(&h));
    }

    #[test]
    fn compact_text_round_trips(s in field().prop_flat_map(|f| unit_series_in(f, 20))) {
        let text = s.to_compact();
        prop_assert_eq!(Series::parse_compact(&text).unwrap(), s.clone());
        let human = s.to_string();
        prop_assert_eq!(Series::parse_human(s.field(), &human).unwrap(), s);
    }

    #[test]
    fn doubling_precision_keeps_the_window(
        (f, (ta, ca), (tc, cc)) in field().prop_flat_map(|f| (Just(f), long_coeffs(f), long_coeffs(f)))
    ) {
        let expr = |p: i64| -> Series {
            let a = Series::from_coeffs(f, ta, ca.clone(), Some(p));
            let c = Series::from_coeffs(f, tc, cc.clone(), Some(p));
            let num = &(&a * &c) + &a.frobenius();
            num.div(&(&c + &Series::monomial(f, 1, -7))).unwrap()
        };
        let (lo, hi) = (expr(40), expr(80));
        prop_assert!(lo.precision().unwrap() < hi.precision().unwrap());
        prop_assert!(lo.agrees_with(&hi));
    }

    #[test]
    fn digits_and_phi_agree(s in field().prop_flat_map(|f| unit_series_in(f, 30))) {
        let frac = s.shift(-4 - s.deg().finite().unwrap());
        let digits = frac.digits(10).unwrap();
        let phi = frac.phi(10).unwrap();
        let b = frac.field().order() as u128;
        let num = digits.iter().fold(0u128, |a, &d| a * b + d as u128);
        prop_assert_eq!(phi.numerator, num);
    }
}
