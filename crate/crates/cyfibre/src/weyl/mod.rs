//! The shift algebra `Q[z, theta]`, operator action on series, and the
//! `z_k -> 0` restriction.

mod op;
mod presets;
mod text;

pub use op::{Mono, Residual, ShiftOp};
pub use presets::{
    make_l, make_l1, make_l2, make_lm, model_preset, model_presets, pf_system_presets, level_rows, Level, LimitCheck,
    LimitClaim, ModelParams, PFSystemPreset,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{ri, rq};
    use crate::series::{LogSeries, Series1, Series2};

    #[test]
    fn theta_times_z() {
        let a = ShiftOp::theta(1, 0).mul(&ShiftOp::z(1, 0)).unwrap();
        assert_eq!(a, ShiftOp::parse(1, "z1 T1 + z1").unwrap());
        let b = ShiftOp::z(1, 0).mul(&ShiftOp::theta(1, 0)).unwrap();
        assert_eq!(b.to_string(), "z1 T1");
    }

    #[test]
    fn theta_squared_times_z() {
        let a = ShiftOp::theta(1, 0).pow(2).mul(&ShiftOp::z(1, 0)).unwrap();
        assert_eq!(a, ShiftOp::parse(1, "z1 T1^2 + 2 z1 T1 + z1").unwrap());
    }

    #[test]
    fn restriction_of_l1_is_gauss() {
        let p = ModelParams::main();
        let r = p.l1().restrict(1);
        let want = ShiftOp::parse(2, "T1^2 - 432 z1 (T1 + 5/6)(T1 + 1/6)").unwrap();
        assert_eq!(r, want);
        assert!(ShiftOp::theta(2, 1).pow(2).restrict(1).is_zero());
    }

    #[test]
    fn l_on_one() {
        let l = make_l(&ri(432), &rq(5, 6), &rq(1, 6));
        let r = l.apply_series1(&Series1::one(3)).unwrap();
        assert_eq!(r, Series1::from_ints(&[0, -60, 0, 0]));
    }

    #[test]
    fn theta_on_log() {
        let t = ShiftOp::theta(2, 0);
        let r = t.apply(&LogSeries::log_var(0, 3, 1)).unwrap();
        assert_eq!(r, LogSeries::from_series(Series2::one(3, 1)));
    }

    #[test]
    fn annihilation_reports_residual() {
        let l = make_l(&ri(432), &rq(5, 6), &rq(1, 6));
        let bad = Series1::from_ints(&[1, 1, 0, 0]);
        let res = l.annihilates1(&bad).unwrap().unwrap_err();
        assert_eq!(res.at, (1, 0));
        assert!(ShiftOp::theta(1, 0).annihilates1(&Series1::one(5)).unwrap().is_ok());
    }

    #[test]
    fn holomorphic_solution_of_gauss() {
        let l = make_l(&ri(432), &rq(5, 6), &rq(1, 6));
        let f = l.holomorphic_solution(4).unwrap();
        assert_eq!(f, Series1::from_ints(&[1, 60, 13860, 4084080, 1338557220]));
    }

    #[test]
    fn row0_restriction() {
        let rows = pf_system_presets().unwrap();
        let l2 = &rows[0].generators[1].1;
        let lim = l2.restrict(0);
        let want = ShiftOp::parse(2, "T2^3 + 3 z2 T2 (3 T2 + 1)(3 T2 + 2)").unwrap();
        assert_eq!(lim, want);
    }

    #[test]
    fn l2_sign() {
        let odd = make_l2(3);
        assert_eq!(odd, ShiftOp::parse(2, "T2^3 + z2 (3 T2 - T1)(3 T2 - T1 + 1)(3 T2 - T1 + 2)").unwrap());
        let even = make_l2(2);
        assert_eq!(even, ShiftOp::parse(2, "T2^2 - z2 (2 T2 - T1)(2 T2 - T1 + 1)").unwrap());
    }
}
