//! Algebraic invariants checked on random inputs.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use cyfibre::coupling::{extract_gw, main_example_yukawa_corrected, verify_pf_constraints, Potential, YukawaSet};
use cyfibre::hypergeo::{derivative_rule_check, gauss_operator, pfq, DiffFieldElem, FieldParams, HGParams, Poly3};
use cyfibre::modular::{anomaly_decompose, eisenstein, fit, FitSpec, Level};
use cyfibre::periods::ModelParams;
use cyfibre::rat::{ri, rq};
use cyfibre::series::{QExp, Series1, Series2, Weight};
use cyfibre::weyl::ShiftOp;
use cyfibre::Rat;

fn rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rq(n, d))
}

fn series2(d1: usize, d2: usize) -> impl Strategy<Value = Series2> {
    prop::collection::vec(rat(), (d1 + 1) * (d2 + 1)).prop_map(move |v| {
        Series2::from_terms(d1, d2, v.into_iter().enumerate().map(|(k, c)| (k / (d2 + 1), k % (d2 + 1), c)))
    })
}

/// `1 + (terms of positive degree)`.
fn unit2(d1: usize, d2: usize) -> impl Strategy<Value = Series2> {
    series2(d1, d2).prop_map(|mut s| {
        s.set(0, 0, Rat::one());
        s
    })
}

fn shift_op(max_terms: usize) -> impl Strategy<Value = ShiftOp> {
    prop::collection::vec(((0u32..=2, 0u32..=2), (0u32..=2, 0u32..=2), rat()), 1..=max_terms).prop_map(|ts| {
        ts.into_iter().fold(ShiftOp::zero(2), |acc, ((a1, a2), (b1, b2), c)| {
            acc.add(&ShiftOp::monomial(2, vec![a1, a2], vec![b1, b2], c))
        })
    })
}

/// Parameters away from the non-positive integers.
fn hg_params() -> impl Strategy<Value = HGParams> {
    (prop::collection::vec(rat(), 1..=3), prop::collection::vec((1i64..=12, 1i64..=6), 0..=2)).prop_map(|(upper, lower)| {
        let mut low = vec![Rat::one()];
        low.extend(lower.into_iter().map(|(n, d)| rq(n, d)));
        HGParams::new(upper, low)
    })
}

fn poly3() -> impl Strategy<Value = Poly3> {
    prop::collection::vec(((0u32..=2, 0u32..=1, 0u32..=1), rat()), 1..=4)
        .prop_map(|ts| ts.into_iter().fold(Poly3::zero(), |acc, ((a, b, c), k)| acc.add(&Poly3::monomial([a, b, c], k))))
}

fn field_elem() -> impl Strategy<Value = DiffFieldElem> {
    (poly3(), 0u32..=2, 0u32..=2).prop_map(|(n, a, b)| {
        DiffFieldElem::new(&FieldParams::new(ri(432), rq(5, 6), rq(1, 6)), n, [a, b, 0])
    })
}

fn qexp(s: &Series1) -> QExp {
    QExp::from_series(s, Weight::Mixed)
}

fn eis(k: u32, order: usize) -> Series1 {
    eisenstein(k, order).unwrap().to_series().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series2_ring_axioms(a in series2(5, 5), b in series2(5, 5), c in series2(5, 5), k in rat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &k, &(&a * &k) + &(&b * &k));
        prop_assert_eq!(&a * &Series2::one(5, 5), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn rational_power(f in unit2(4, 3), p in -3i64..=3, q in 1i64..=3) {
        let r = f.pow_rational(&rq(p, q)).unwrap().pow_int(q as u32);
        let want = if p >= 0 { f.pow_int(p as u32) } else { f.inv().unwrap().pow_int((-p) as u32) };
        prop_assert_eq!(r, want);
    }

    #[test]
    fn theta_derivations_commute(f in series2(5, 5), g in series2(5, 5)) {
        prop_assert_eq!(f.theta(0).theta(1), f.theta(1).theta(0));
        // Leibniz rule
        let lhs = (&f * &g).theta(0);
        prop_assert_eq!(lhs, &(&f.theta(0) * &g) + &(&f * &g.theta(0)));
    }

    #[test]
    fn shift_operator_algebra(a in shift_op(3), b in shift_op(3), c in shift_op(3), f in series2(6, 6)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let lhs = ab.apply_series2(&f).unwrap();
        let rhs = a.apply_series2(&b.apply_series2(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ShiftOp::theta(2, 0).mul(&ShiftOp::theta(2, 1)).unwrap(), ShiftOp::theta(2, 1).mul(&ShiftOp::theta(2, 0)).unwrap());
    }

    #[test]
    fn restriction_drops_variable(a in shift_op(4), f in series2(4, 4)) {
        // on series without z2 dependence, theta2 acts as zero and z2 shifts out of range
        let g = Series2::from_terms(4, 4, (0..=4).map(|i| (i, 0, f.get(i, 0).clone())));
        let full = a.apply_series2(&g).unwrap();
        let restricted = a.restrict(1).apply_series2(&g).unwrap();
        for i in 0..=4 {
            prop_assert_eq!(full.get(i, 0), restricted.get(i, 0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mirror_map_inverse(u1 in unit2(3, 3), u2 in unit2(3, 3)) {
        let (v1, v2) = Series2::invert_map(&u1, &u2).unwrap();
        let (g1, g2) = (v1.shift(1, 0), v2.shift(0, 1));
        let w1 = &u1.substitute(&g1, &g2).unwrap() * &v1;
        let w2 = &u2.substitute(&g1, &g2).unwrap() * &v2;
        let (c1, c2) = w1.caps();
        prop_assert_eq!(w1, Series2::one(c1, c2));
        prop_assert_eq!(w2.clone(), Series2::one(w2.caps().0, w2.caps().1));
    }

    #[test]
    fn hypergeometric_operator(p in hg_params()) {
        let f = pfq(&p, 10).unwrap();
        prop_assert!(gauss_operator(&p).annihilates1(&f).unwrap().is_ok());
        prop_assert!(derivative_rule_check(&p, 8).unwrap());
    }

    #[test]
    fn field_theta(x in field_elem(), y in field_elem()) {
        let order = 6;
        prop_assert_eq!(x.theta().eval(order).unwrap(), x.eval(order).unwrap().theta());
        let lhs = x.mul(&y).unwrap().theta();
        let rhs = x.theta().mul(&y).unwrap().add(&x.mul(&y.theta()).unwrap()).unwrap();
        prop_assert_eq!(lhs.eval(order).unwrap(), rhs.eval(order).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().eval(order).unwrap(), &x.eval(order).unwrap() * &y.eval(order).unwrap());
    }

    #[test]
    fn fit_recovers_combination(a in rat(), b in rat(), c in rat()) {
        let o = 24;
        let (e2, e4, e6) = (eis(2, o), eis(4, o), eis(6, o));
        let f = &(&e4.pow_int(3).scale(&a) + &e6.pow_int(2).scale(&b)) + &(&(&e2 * &e4) * &e6).scale(&c);
        let spec = FitSpec { weight: 12, extra_weights: Vec::new(), level: Level::SL2Z, eta_power: 0, q_shift: 0, max_e2: 1 };
        let r = fit(&qexp(&f), &spec).unwrap();
        prop_assert_eq!(r.coeff(0, &[3, 0]), a);
        prop_assert_eq!(r.coeff(0, &[0, 2]), b);
        prop_assert_eq!(r.coeff(1, &[1, 1]), c.clone());
        let parts = anomaly_decompose(&r);
        let e2part: Vec<_> = parts.iter().filter(|(d, _)| *d == 1).collect();
        if c.is_zero() {
            prop_assert!(e2part.is_empty());
        } else {
            prop_assert_eq!(e2part.len(), 1);
            prop_assert_eq!(&e2part[0].1.terms[0].1, &c);
        }
    }

    #[test]
    fn multicover_round_trip(vals in prop::collection::vec(-50i64..=50, 6 * 4)) {
        let (d1m, d2m) = (5u32, 3u32);
        let n: BTreeMap<(u32, u32), Rat> =
            (0..=d1m).flat_map(|a| (0..=d2m).map(move |b| (a, b))).filter(|&k| k != (0, 0)).map(|(a, b)| ((a, b), ri(vals[(a * 4 + b) as usize]))).collect();
        // N(a, b) = sum_{k | (a, b)} n(a/k, b/k) / k^2
        let mut sectors = vec![vec![Rat::zero(); d1m as usize + 1]; d2m as usize + 1];
        for (&(a, b), v) in &n {
            for k in 1..=5u32 {
                if a * k <= d1m && b * k <= d2m {
                    sectors[(b * k) as usize][(a * k) as usize] += v / ri((k * k) as i64);
                }
            }
        }
        let pot = Potential { gamma: 1, sectors: sectors.into_iter().map(Series1::from_coeffs).collect() };
        let t = extract_gw(&pot, d1m, d2m).unwrap();
        prop_assert_eq!(&t.n, &n);
        prop_assert!(t.round_trip());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn perturbation_detected(k in 0usize..5, i in 0u32..4, j in 0u32..3, c in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])) {
        let p = ModelParams::main();
        let base = main_example_yukawa_corrected();
        let clean = base.hat_series(6, 3).unwrap();
        let mut w = base.w.clone();
        w[k] = w[k].perturb_numerator(i, j, ri(c));
        if let Ok(hats) = (YukawaSet { w }).hat_series(6, 3) {
            if hats != clean {
                prop_assert!(!verify_pf_constraints(&hats, &p).unwrap().passed());
            }
        }
    }
}
