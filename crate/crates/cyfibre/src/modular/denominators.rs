use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::Level;
use crate::error::Result;
use crate::hypergeo::{log_companion_scaled, pfq_scaled, HGParams};
use crate::rat::Rat;
use crate::series::Series1;
use crate::weyl::level_rows;

/// Coefficient denominators of the Gauss mirror map `q = z exp(G/F)` and of its
/// inverse, for the argument `a0 z`.
#[derive(Clone, Debug, Serialize)]
pub struct DenominatorReport {
    pub level: String,
    pub a0: String,
    pub a1: String,
    pub a2: String,
    pub order: usize,
    /// Denominator of each coefficient of `q(z)`, from `z^1`.
    pub q_of_z: Vec<String>,
    /// Denominator of each coefficient of `z(q)`, from `q^1`.
    pub z_of_q: Vec<String>,
    /// Least common multiple of all reported denominators.
    pub lcm: String,
}

fn dens(s: &Series1) -> Vec<BigInt> {
    (1..=s.cap()).map(|k| s.coeff(k).denom().clone()).collect()
}

pub fn gauss_mirror_map(a0: &Rat, a1: &Rat, a2: &Rat, order: usize) -> Result<(Series1, Series1)> {
    let f = pfq_scaled(&HGParams::gauss(a1.clone(), a2.clone()), a0, order)?;
    let g = log_companion_scaled(&[a1.clone(), a2.clone()], a0, order)?;
    let u = g.div(&f)?.exp_nilconst()?;
    let q = u.shift(1).truncate(order);
    let z = q.invert()?;
    Ok((q, z))
}

/// One report per row of the generator table, at the row's `a0` and at `a0 = 1`.
pub fn denominator_report(order: usize) -> Result<Vec<DenominatorReport>> {
    let mut out = Vec::new();
    for (lvl, a0, a1, a2) in level_rows() {
        for a in [a0.clone(), Rat::one()] {
            let (q, z) = gauss_mirror_map(&a, &a1, &a2, order)?;
            let dq = dens(&q);
            let dz = dens(&z);
            let lcm = dq.iter().chain(&dz).fold(BigInt::one(), |acc, d| acc.lcm(d));
            out.push(DenominatorReport {
                level: format!("{:?}", lvl as Level),
                a0: crate::rat::fmt_rat(&a),
                a1: crate::rat::fmt_rat(&a1),
                a2: crate::rat::fmt_rat(&a2),
                order,
                q_of_z: dq.iter().map(|d| d.to_string()).collect(),
                z_of_q: dz.iter().map(|d| d.to_string()).collect(),
                lcm: lcm.to_string(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{ri, rq};

    #[test]
    fn rows_and_unscaled() {
        let r = denominator_report(6).unwrap();
        assert_eq!(r.len(), 8);
        for pair in r.chunks(2) {
            assert_eq!(pair[0].lcm, "1");
            assert_ne!(pair[1].lcm, "1");
        }
    }

    #[test]
    fn main_row_mirror_map() {
        let (q, z) = gauss_mirror_map(&ri(432), &rq(5, 6), &rq(1, 6), 4).unwrap();
        assert_eq!(q, Series1::from_ints(&[0, 1, 312, 107604, 39073568]));
        assert_eq!(z, Series1::from_ints(&[0, 1, -312, 87084, -23067968]));
    }
}
