//! Regrouping `f(z(q))` as `sum_i f_i(q1) t^i` with `t = q2 q1^{n/2}`.

use num_traits::{One, Zero};

use super::{MirrorMap, TauDerivations};
use crate::error::{Error, Result};
use crate::rat::{ri, Rat};
use crate::series::{QExp, Series1, Series2, Weight};

/// `f = sum_i f_i(q1) t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TExpansion {
    pub n: u32,
    pub parts: Vec<QExp>,
}

fn to_qexp(s: &Series1, n: u32, i: usize) -> Result<QExp> {
    let m = n as i64 * i as i64;
    if n % 2 == 0 {
        QExp::new(Weight::Mixed, 1, -m / 2, s.coeffs())
    } else {
        let mut c = vec![Rat::zero(); 2 * s.cap() + 1];
        for (k, v) in s.coeffs().into_iter().enumerate() {
            c[2 * k] = v;
        }
        QExp::new(Weight::Mixed, 2, -m, c)
    }
}

impl TExpansion {
    /// From the `q2^i` coefficients `slices[i](q1)` of a function of `q`.
    pub fn from_q2_slices(slices: &[Series1], n: u32) -> Result<Self> {
        let parts = slices.iter().enumerate().map(|(i, s)| to_qexp(s, n, i)).collect::<Result<_>>()?;
        Ok(Self { n, parts })
    }

    /// `sum_i f_i t^i` as a series in `q1, q2`; `q1` cap is the smallest over the parts.
    pub fn reconstruct(&self) -> Result<Series2> {
        let b = 2i64;
        let half = self.n as i64; // exponent of q1 in t, times 2
        let mut d1 = usize::MAX;
        for (i, f) in self.parts.iter().enumerate() {
            let top = f.cap() * (b / f.base_den() as i64) + half * i as i64;
            if top < 0 {
                return Err(Error::TruncationLoss(format!("t^{i} part carries no q1 information")));
            }
            d1 = d1.min((top / b) as usize);
        }
        let d2 = self.parts.len().saturating_sub(1);
        let mut out = Series2::zero(d1, d2);
        for (i, f) in self.parts.iter().enumerate() {
            for a in 0..=d1 {
                // q1^a q2^i = q1^(a - n i / 2) t^i
                let x = Rat::new((b * a as i64 - half * i as i64).into(), b.into());
                let v = f.coeff_at(&x).ok_or_else(|| Error::TruncationLoss(format!("t^{i} part beyond cap")))?;
                out.set(a, i, v);
            }
        }
        Ok(out)
    }
}

/// `f_i(q1) = [q2^i] f(z(q)) q1^{-n i / 2}` for `i <= t_order`.
pub fn t_expand(f: &Series2, mm: &MirrorMap, n: u32, t_order: usize) -> Result<TExpansion> {
    let fq = mm.to_q(f)?;
    let (_, d2) = fq.caps();
    if t_order > d2 {
        return Err(Error::TruncationLoss(format!("t^{t_order} needs z2 cap {t_order}, have {d2}")));
    }
    let parts = (0..=t_order)
        .map(|i| to_qexp(&fq.slice_z2(i)?, n, i))
        .collect::<Result<_>>()?;
    Ok(TExpansion { n, parts })
}

/// The same expansion through `f_i = (1 / i!) (q1^{-n/2} d/dq2)^i f |_{q2 = 0}`, with
/// `d/dq2 = (z2 u2)^{-1} d/dtau2` applied in `z`-coordinates.
pub fn t_expand_twisted(f: &Series2, mm: &MirrorMap, td: &TauDerivations, n: u32, t_order: usize) -> Result<TExpansion> {
    let u2_inv = mm.u2.inv()?;
    let (z1, _) = mm.z_of_q();
    let z1q = z1.slice_z2(0)?;
    let mut g = f.clone();
    let mut fact = Rat::one();
    let mut parts = Vec::new();
    for i in 0..=t_order {
        if i > 0 {
            fact *= ri(i as i64);
            let dg = td.apply(1, &g).unshift(0, 1)?;
            let (d1, d2) = dg.caps();
            g = &dg * &u2_inv.truncate(d1, d2);
        }
        let s = g.slice_z2(0)?;
        let sq = s.compose1(&z1q.truncate(s.cap()))?;
        parts.push(to_qexp(&sq.scale(&(Rat::one() / &fact)), n, i)?);
    }
    Ok(TExpansion { n, parts })
}
