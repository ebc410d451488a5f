//! Frobenius periods of the two-parameter system, Wronskians, and the
//! `z2`-slices of the periods with their closed forms.

mod slices;

pub use slices::{slice_constants, symbolic_slices, SliceData, SymbolicSlices};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rat::{ri, Rat};
use crate::series::{series2_to_json, LogSeries, Series1, Series2};
use crate::weyl::{make_lm, ShiftOp};

pub use crate::weyl::ModelParams;

/// `Pi^0` and the non-log parts `S_1`, `S_2` of `Pi^a = Pi^0 log z_a + S_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSet {
    pub params: ModelParams,
    pub pi0: Series2,
    pub s1: Series2,
    pub s2: Series2,
}

/// Solves `A_k f = r_k` for all `k` simultaneously, order by order in `(j, i)`
/// lexicographic order.
///
/// At each point the first operator whose indicial part is nonzero fixes the
/// coefficient and every other operator is checked against it. Points where
/// all indicial parts vanish take `f(0,0) = c00` at the origin and `0`
/// elsewhere.
pub fn solve_recursive(ops: &[ShiftOp], rhs: &[Series2], c00: &Rat, d1: usize, d2: usize) -> Result<Series2> {
    if ops.len() != rhs.len() {
        return Err(Error::Precondition("one right-hand side per operator".into()));
    }
    let groups: Vec<Vec<((usize, usize), Vec<(Vec<u32>, Rat)>)>> = ops
        .iter()
        .map(|op| {
            if op.nvars() != 2 {
                return Err(Error::VarMismatch(op.nvars(), 2));
            }
            Ok(op.by_shift().into_iter().map(|(a, p)| ((a[0] as usize, a[1] as usize), p)).collect())
        })
        .collect::<Result<_>>()?;
    let mut f = Series2::zero(d1, d2);
    for j in 0..=d2 {
        for i in 0..=d1 {
            let pt = [ri(i as i64), ri(j as i64)];
            // (indicial value, rhs - rest) per operator
            let mut eqs = Vec::with_capacity(ops.len());
            for (k, g) in groups.iter().enumerate() {
                let mut lead = Rat::zero();
                let mut rest = Rat::zero();
                for (a, poly) in g {
                    if *a == (0, 0) {
                        lead = ShiftOp::eval_poly(poly, &pt);
                    } else if a.0 <= i && a.1 <= j {
                        let v = f.get(i - a.0, j - a.1);
                        if !v.is_zero() {
                            let at = [ri((i - a.0) as i64), ri((j - a.1) as i64)];
                            rest += ShiftOp::eval_poly(poly, &at) * v;
                        }
                    }
                }
                let r = rhs[k].coeff(i, j).cloned().unwrap_or_else(Rat::zero);
                eqs.push((lead, r - rest));
            }
            let value = match eqs.iter().find(|(l, _)| !l.is_zero()) {
                Some((l, r)) => r / l,
                None if (i, j) == (0, 0) => c00.clone(),
                None => Rat::zero(),
            };
            for (k, (l, r)) in eqs.iter().enumerate() {
                if &(l * &value) != r {
                    return Err(Error::Inconsistent(format!("operator {k} disagrees at z1^{i} z2^{j}")));
                }
            }
            f.set(i, j, value);
        }
    }
    Ok(f)
}

/// Frobenius basis `Pi^0 = 1 + ...`, `Pi^a = Pi^0 log z_a + S_a` with `S_a(0,0) = 0`.
pub fn frobenius_solve(params: &ModelParams, d1: usize, d2: usize) -> Result<PeriodSet> {
    if d1 == 0 {
        return Err(Error::Precondition("z1 cap must be positive".into()));
    }
    let ops = [params.l1(), params.l2()];
    let zero = [Series2::zero(d1, d2), Series2::zero(d1, d2)];
    let pi0 = solve_recursive(&ops, &zero, &Rat::one(), d1, d2)?;
    let mut s = Vec::new();
    for axis in 0..2 {
        // A (Pi0 log z + S) = 0 means A S = -(dA/dtheta) Pi0
        let rhs: Vec<Series2> =
            ops.iter().map(|op| op.d_theta(axis).apply_series2(&pi0).map(|r| r.scale(&-Rat::one()))).collect::<Result<_>>()?;
        s.push(solve_recursive(&ops, &rhs, &Rat::zero(), d1, d2)?);
    }
    let s2 = s.pop().unwrap();
    let s1 = s.pop().unwrap();
    Ok(PeriodSet { params: params.clone(), pi0, s1, s2 })
}

impl PeriodSet {
    pub fn caps(&self) -> (usize, usize) {
        self.pi0.caps()
    }

    /// `Pi^0`, `Pi^1` or `Pi^2` as a log series.
    pub fn period(&self, a: usize) -> Result<LogSeries> {
        match a {
            0 => Ok(LogSeries::from_series(self.pi0.clone())),
            1 => Ok(LogSeries::with_log(0, &self.pi0, &self.s1)),
            2 => Ok(LogSeries::with_log(1, &self.pi0, &self.s2)),
            _ => Err(Error::OutOfRange(format!("period index {a}"))),
        }
    }

    /// Non-log part: `Pi^0` for `a = 0`, else `S_a`.
    pub fn holo(&self, a: usize) -> Result<&Series2> {
        match a {
            0 => Ok(&self.pi0),
            1 => Ok(&self.s1),
            2 => Ok(&self.s2),
            _ => Err(Error::OutOfRange(format!("period index {a}"))),
        }
    }

    /// Coefficient of `z2^i` in the non-log part of period `a`.
    pub fn slice(&self, a: usize, i: usize) -> Result<Series1> {
        let s = self.holo(a)?;
        if i > self.caps().1 {
            return Err(Error::OutOfRange(format!("slice {i} beyond z2 cap {}", self.caps().1)));
        }
        s.slice_z2(i)
    }

    /// Checks that `L1` and `L2` annihilate all three periods; returns the first failure.
    pub fn check_annihilation(&self) -> Result<std::result::Result<(), String>> {
        for (name, op) in [("L1", self.params.l1()), ("L2", self.params.l2())] {
            for a in 0..3 {
                if let Err(r) = op.annihilates(&self.period(a)?)? {
                    return Ok(Err(format!("{name} on period {a}: {r}")));
                }
            }
        }
        Ok(Ok(()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump<'a> {
            params: &'a ModelParams,
            pi0: serde_json::Value,
            s1: serde_json::Value,
            s2: serde_json::Value,
        }
        let v = |s: &Series2| serde_json::from_str(&series2_to_json(s)).expect("json");
        serde_json::to_value(Dump { params: &self.params, pi0: v(&self.pi0), s1: v(&self.s1), s2: v(&self.s2) }).expect("json")
    }
}

/// `W^{a,b} = Pi^0 theta_a Pi^b - Pi^b theta_a Pi^0` for `a, b` in `{1, 2}`; log terms
/// cancel, leaving `(Pi^0)^2 delta_ab + Pi^0 theta_a S_b - S_b theta_a Pi^0`.
pub fn wronskian(ps: &PeriodSet, a: usize, b: usize) -> Result<Series2> {
    if !(1..=2).contains(&a) || !(1..=2).contains(&b) {
        return Err(Error::OutOfRange(format!("wronskian indices ({a},{b})")));
    }
    let sb = ps.holo(b)?;
    let mut w = &(&ps.pi0 * &sb.theta(a - 1)) - &(sb * &ps.pi0.theta(a - 1));
    if a == b {
        w = &w + &(&ps.pi0 * &ps.pi0);
    }
    Ok(w)
}

/// `(1 - a0 z)^{-(a1 + a2)}`, the closed form of `W^{1,1}` at `z2 = 0`.
pub fn wronskian_closed_form(params: &ModelParams, order: usize) -> Result<Series1> {
    let mut c = vec![Rat::zero(); order.max(1) + 1];
    c[0] = Rat::one();
    c[1] = -params.a0.clone();
    Series1::from_coeffs(c).truncate(order).pow_rational(&-(&params.a1 + &params.a2))
}

/// Checks `W^{1,1}|_{z2=0} = (1 - a0 z)^{-(a1 + a2)}` to the z1 cap.
pub fn wronskian_check(ps: &PeriodSet) -> Result<bool> {
    let w = wronskian(ps, 1, 1)?.slice_z2(0)?;
    Ok(w == wronskian_closed_form(&ps.params, w.cap())?)
}

/// Falling-factorial derivative `z^m (d/dz)^m f`.
pub fn z_pow_derivative(f: &Series1, m: usize) -> Series1 {
    let mut c = vec![Rat::zero(); f.cap() + 1];
    for (r, v) in c.iter_mut().enumerate().skip(m) {
        let mut ff = Rat::one();
        for t in 0..m {
            ff *= ri((r - t) as i64);
        }
        *v = ff * f.coeff(r);
    }
    Series1::from_coeffs(c)
}

/// Checks the slice equations `L^{ni} Pi^0_i = 0`, `L^{ni} S1_i = -(dL^{ni}/dtheta) Pi^0_i`
/// and `L^{ni} S2_i = n theta Pi^0_i`.
pub fn nonhom_slice_check(ps: &PeriodSet, i: usize) -> Result<bool> {
    let p = &ps.params;
    let m = ri((p.n as usize * i) as i64);
    let l = make_lm(&p.a0, &p.a1, &p.a2, &m);
    let p0 = ps.slice(0, i)?;
    let s1 = ps.slice(1, i)?;
    let s2 = ps.slice(2, i)?;
    let ok0 = l.apply_series1(&p0)?.is_zero();
    let ok1 = l.apply_series1(&s1)? == -&l.d_theta(0).apply_series1(&p0)?;
    let ok2 = l.apply_series1(&s2)? == p0.theta().scale(&ri(p.n as i64));
    Ok(ok0 && ok1 && ok2)
}

/// Log-free form of the `z2^0` slice of `Pi^2`:
/// `S2(z1, 0) = -(n/2) Pi^0_0 log(u1(z1, 0) (1 - a0 z1))` with `q1 = z1 u1`.
pub fn log_free_slice_check(ps: &PeriodSet) -> Result<bool> {
    let p = &ps.params;
    p.require_balanced()?;
    let f = ps.slice(0, 0)?;
    let g = ps.slice(1, 0)?;
    let u1 = g.div(&f)?.exp_nilconst()?;
    let mut lc = vec![Rat::zero(); f.cap() + 1];
    lc[0] = Rat::one();
    lc[1] = -p.a0.clone();
    let arg = &u1 * &Series1::from_coeffs(lc);
    let rhs = (&f * &arg.log_unit()?).scale(&-p.half_n());
    Ok(ps.slice(2, 0)? == rhs)
}
