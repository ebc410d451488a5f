//! `X = ((1 - a0 z1) / z1)^{n/2} q2 q1^{n/2} / z2 = 1 + sum C_i z2^i`.

use num_traits::One;

use super::{one_minus, MirrorMap, TauDerivations};
use crate::error::{Error, Result};
use crate::hypergeo::{DiffFieldElem, Poly3};
use crate::periods::{symbolic_slices, PeriodSet};
use crate::rat::{ri, Rat};
use crate::series::{Series1, Series2};
use crate::weyl::ModelParams;

/// `X` as the unit series `(1 - a0 z1)^{n/2} u1^{n/2} u2`.
pub fn x_direct(ps: &PeriodSet, mm: &MirrorMap) -> Result<Series2> {
    let p = &ps.params;
    p.require_balanced()?;
    let (d1, d2) = mm.u1.caps();
    let l = one_minus(&p.a0, d1).lift(d2).pow_rational(&p.half_n())?;
    Ok(&(&l * &mm.u1.pow_rational(&p.half_n())?) * &mm.u2)
}

/// `X` from `theta2 X = X ((W22 + (n/2) W21) / (Pi0)^2 - 1)` with `X|_{z2=0} = 1`.
pub fn x_recursive(ps: &PeriodSet, td: &TauDerivations) -> Result<Series2> {
    let p = &ps.params;
    p.require_balanced()?;
    let w = &td.w;
    let pp = &ps.pi0 * &ps.pi0;
    let (d1, d2) = pp.caps();
    let r = &(&w[1][1] + &w[1][0].scale(&p.half_n())).div(&pp)? - &Series2::one(d1, d2);
    if !r.slice_z2(0)?.is_zero() {
        return Err(Error::Inconsistent("logarithmic z2-derivative of X has a z2^0 term".into()));
    }
    let rs: Vec<Series1> = (0..=d2).map(|j| r.slice_z2(j)).collect::<Result<_>>()?;
    let mut xs = vec![Series1::one(d1)];
    for j in 1..=d2 {
        let mut acc = Series1::zero(d1);
        for k in 1..=j {
            acc = &acc + &(&rs[k] * &xs[j - k]);
        }
        xs.push(acc.scale(&(Rat::one() / ri(j as i64))));
    }
    let mut out = Series2::zero(d1, d2);
    for (j, s) in xs.iter().enumerate() {
        for i in 0..=d1 {
            out.set(i, j, s.coeff(i).clone());
        }
    }
    Ok(out)
}

/// `C_0..=C_imax` in `Q(z, F, theta F)`, as the `z2`-slices of
/// `exp((B + (n/2) A) / Pi^0)`.
pub fn x_symbolic(p: &ModelParams, imax: usize) -> Result<Vec<DiffFieldElem>> {
    let sym = symbolic_slices(p, imax)?;
    let fp = &sym.field;
    let zero = DiffFieldElem::zero(fp);
    // 1 / Pi^0 as a z2-series
    let f_inv = sym.pi0[0].inv()?;
    let mut inv = vec![f_inv.clone()];
    for i in 1..=imax {
        let mut s = zero.clone();
        for k in 1..=i {
            s = s.add(&sym.pi0[k].mul(&inv[i - k])?)?;
        }
        inv.push(s.mul(&f_inv)?.scale(&-Rat::one()));
    }
    let num: Vec<DiffFieldElem> =
        (0..=imax).map(|i| sym.b[i].add(&sym.a[i].scale(&p.half_n()))).collect::<Result<_>>()?;
    let mut y = Vec::new();
    for i in 0..=imax {
        let mut s = zero.clone();
        for k in 0..=i {
            s = s.add(&num[k].mul(&inv[i - k])?)?;
        }
        y.push(s);
    }
    if !y[0].is_zero() {
        return Err(Error::Inconsistent("log X has a z2^0 term".into()));
    }
    // i X_i = sum_k k Y_k X_{i-k}
    let mut xs = vec![DiffFieldElem::constant(fp, Rat::one())];
    for i in 1..=imax {
        let mut s = zero.clone();
        for k in 1..=i {
            s = s.add(&y[k].mul(&xs[i - k])?.scale(&ri(k as i64)))?;
        }
        xs.push(s.scale(&(Rat::one() / ri(i as i64))));
    }
    Ok(xs)
}

/// The printed cubic coefficient of the first `R`-polynomial, in the two forms
/// that occur (`291589632` and `2915896332`), with whether each equals
/// `C_1 (1 - 432 z)^4 F` for the main example.
pub fn r1_variants() -> Result<Vec<(i64, bool)>> {
    let p = ModelParams::main();
    let c = x_symbolic(&p, 1)?;
    let fp = c[1].params().clone();
    let scaled = c[1].mul(&DiffFieldElem::disc(&fp).pow(4).mul(&DiffFieldElem::f(&fp))?)?;
    let mut out = Vec::new();
    for v in [291589632i64, 2915896332] {
        let a = Poly3::in_z(&[ri(1), ri(-1708), ri(1075344), ri(-v), ri(62983360512)])
            .mul(&Poly3::monomial([0, 1, 0], ri(12)));
        let b = Poly3::in_z(&[ri(1), ri(-2184), ri(1907712), ri(-828610560), ri(143183904768)])
            .mul(&Poly3::monomial([0, 0, 1], ri(20)));
        let r = DiffFieldElem::new(&fp, a.sub(&b), [0, 0, 0]);
        out.push((v, r == scaled));
    }
    Ok(out)
}
