//! Mirror maps, the flat-coordinate derivations, the quantity `X` and the
//! expansion in `t = q2 q1^{n/2}`.

mod texp;
mod x;

pub use texp::{t_expand, t_expand_twisted, TExpansion};
pub use x::{r1_variants, x_direct, x_recursive, x_symbolic};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::periods::{wronskian, PeriodSet};
use crate::rat::Rat;
use crate::series::{Series1, Series2};

/// `q_a = z_a u_a(z)` and its inverse `z_a = q_a v_a(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorMap {
    pub u1: Series2,
    pub u2: Series2,
    pub v1: Series2,
    pub v2: Series2,
}

/// `u_a = exp(S_a / Pi^0)` and the inverse map.
pub fn build_mirror(ps: &PeriodSet) -> Result<MirrorMap> {
    let u1 = ps.s1.div(&ps.pi0)?.exp_nilconst()?;
    let u2 = ps.s2.div(&ps.pi0)?.exp_nilconst()?;
    let (v1, v2) = Series2::invert_map(&u1, &u2)?;
    Ok(MirrorMap { u1, u2, v1, v2 })
}

impl MirrorMap {
    /// `z1(q)`, `z2(q)`.
    pub fn z_of_q(&self) -> (Series2, Series2) {
        (self.v1.shift(1, 0), self.v2.shift(0, 1))
    }

    /// `q1(z)`, `q2(z)`.
    pub fn q_of_z(&self) -> (Series2, Series2) {
        (self.u1.shift(1, 0), self.u2.shift(0, 1))
    }

    /// Composes `f(z)` with `z = z(q)`.
    pub fn to_q(&self, f: &Series2) -> Result<Series2> {
        let (z1, z2) = self.z_of_q();
        f.substitute(&z1, &z2)
    }

    /// Checks `q(z(q)) = q` to caps.
    pub fn round_trip(&self) -> Result<bool> {
        let (z1, z2) = self.z_of_q();
        let (q1, q2) = self.q_of_z();
        let a = q1.substitute(&z1, &z2)?;
        let b = q2.substitute(&z1, &z2)?;
        let (d1, d2) = a.caps();
        Ok(a == Series2::monomial(1, 0, Rat::one(), d1, d2) && b == Series2::monomial(0, 1, Rat::one(), b.caps().0, b.caps().1))
    }
}

/// The derivations `d/dtau_a = sum_e minv[e][a] theta_e`, with
/// `minv[e][a] = d log z_e / d tau_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauDerivations {
    pub minv: [[Series2; 2]; 2],
    /// `W^{11} W^{22} - W^{21} W^{12}`.
    pub det: Series2,
    /// `[[W11, W12], [W21, W22]]`, first index the differentiation variable.
    pub w: [[Series2; 2]; 2],
}

/// Builds the derivations from the Wronskian formulas.
pub fn tau_derivations(ps: &PeriodSet) -> Result<TauDerivations> {
    let w11 = wronskian(ps, 1, 1)?;
    let w12 = wronskian(ps, 1, 2)?;
    let w21 = wronskian(ps, 2, 1)?;
    let w22 = wronskian(ps, 2, 2)?;
    let det = &(&w11 * &w22) - &(&w21 * &w12);
    if det.constant_term().is_zero() {
        return Err(Error::NonUnit);
    }
    let fac = (&ps.pi0 * &ps.pi0).div(&det)?;
    let neg = -Rat::one();
    let minv = [[&fac * &w22, (&fac * &w21).scale(&neg)], [(&fac * &w12).scale(&neg), &fac * &w11]];
    Ok(TauDerivations { minv, det, w: [[w11, w12], [w21, w22]] })
}

/// The same matrix by inverting `d tau_a / d log z_e` directly.
pub fn tau_derivations_jacobian(ps: &PeriodSet) -> Result<[[Series2; 2]; 2]> {
    let r1 = ps.s1.div(&ps.pi0)?;
    let r2 = ps.s2.div(&ps.pi0)?;
    let (d1, d2) = r1.caps();
    let one = Series2::one(d1, d2);
    // j[a][e] = d tau_a / d log z_e
    let j = [[&one + &r1.theta(0), r1.theta(1)], [r2.theta(0), &one + &r2.theta(1)]];
    let det = &(&j[0][0] * &j[1][1]) - &(&j[0][1] * &j[1][0]);
    let idet = det.inv()?;
    let neg = -Rat::one();
    Ok([
        [&j[1][1] * &idet, (&j[0][1] * &idet).scale(&neg)],
        [(&j[1][0] * &idet).scale(&neg), &j[0][0] * &idet],
    ])
}

impl TauDerivations {
    /// `d f / d tau_a` for a function `f` of `z`.
    pub fn apply(&self, a: usize, f: &Series2) -> Series2 {
        &(&self.minv[0][a] * &f.theta(0)) + &(&self.minv[1][a] * &f.theta(1))
    }

    /// Checks `d tau_b / d tau_a = delta_ab` to caps.
    pub fn check_flat(&self, ps: &PeriodSet) -> Result<bool> {
        let r = [ps.s1.div(&ps.pi0)?, ps.s2.div(&ps.pi0)?];
        for a in 0..2 {
            for b in 0..2 {
                // tau_b = log z_b + S_b / Pi0
                let v = &self.minv[b][a] + &self.apply(a, &r[b]);
                let (d1, d2) = v.caps();
                let want = if a == b { Series2::one(d1, d2) } else { Series2::zero(d1, d2) };
                if v != want {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `(Pi0)^2 W^{21} / (z2 det)` and `(Pi0)^2 W^{11} / det` at `z2 = 0`.
    pub fn z2_limits(&self, ps: &PeriodSet) -> Result<(Series1, Series1)> {
        let fac = (&ps.pi0 * &ps.pi0).div(&self.det)?;
        let a = (&fac * &self.w[1][0]).unshift(0, 1)?.slice_z2(0)?;
        let b = (&fac * &self.w[0][0]).slice_z2(0)?;
        Ok((a, b))
    }
}

pub(crate) fn one_minus(a0: &Rat, order: usize) -> Series1 {
    let mut c = vec![Rat::zero(); order.max(1) + 1];
    c[0] = Rat::one();
    c[1] = -a0.clone();
    Series1::from_coeffs(c).truncate(order)
}
