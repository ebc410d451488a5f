//! Four-point couplings of the fourfold, their constraints, flat-coordinate
//! transformation, three-point functions and genus-zero invariants.

mod gw;
mod rational;
mod threept;
mod yukawa;

pub use gw::{assemble_potential, extract_gw, GWTable, Potential};
pub use rational::{Poly2, RationalFn2};
pub use threept::{solve_three_point, Seed, SeedSet, ThreePoint};
pub use yukawa::{
    delta1, delta2, derive_yukawa_series, griffiths_relations, main_example_yukawa, main_example_yukawa_corrected,
    pf_constraints, verify_pf_constraints, Constraint, GriffithsRelation, PfReport, YukawaSet,
};

use crate::error::Result;
use crate::mirror::{build_mirror, tau_derivations, MirrorMap, TauDerivations};
use crate::periods::{frobenius_solve, PeriodSet};
use crate::weyl::ModelParams;
use crate::rat::{ri, Rat};
use crate::series::Series2;

/// Classical data of the main example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionData {
    /// `int J1^{4-k} J2^k`, `k = 0..=4`.
    pub c0: Vec<Rat>,
    /// Inverse pairing on the `gamma` basis.
    pub eta_inv: [[Rat; 2]; 2],
    pub gamma_names: [&'static str; 2],
}

impl IntersectionData {
    pub fn main() -> Self {
        Self {
            c0: [64, 16, 4, 1, 0].iter().map(|&v| ri(v)).collect(),
            eta_inv: [[ri(-4), ri(1)], [ri(1), ri(0)]],
            gamma_names: ["J2^2", "(4 J1^2 + J1 J2)/17"],
        }
    }
}

/// `C_{a1 a2 a3 a4}(z) = (Pi0)^{-2} sum_e What^{|e|} prod_i minv[e_i][a_i]`, indices 0-based.
pub fn tau_coupling_z(hats: &[Series2], ps: &PeriodSet, td: &TauDerivations, a: [usize; 4]) -> Result<Series2> {
    let (d1, d2) = hats[0].caps();
    // polynomial in y: prod_i (minv[0][a_i] + minv[1][a_i] y)
    let mut poly = vec![Series2::one(d1, d2)];
    for &ai in &a {
        let m0 = &td.minv[0][ai];
        let m1 = &td.minv[1][ai];
        let mut next = vec![Series2::zero(d1, d2); poly.len() + 1];
        for (c, p) in poly.iter().enumerate() {
            next[c] = &next[c] + &(p * m0);
            next[c + 1] = &next[c + 1] + &(p * m1);
        }
        poly = next;
    }
    let mut s = Series2::zero(d1, d2);
    for (c, p) in poly.iter().enumerate() {
        s = &s + &(p * &hats[c]);
    }
    s.div(&(&ps.pi0 * &ps.pi0))
}

/// The five couplings `C_{1..12..2}` (`k` twos) as series in `q`.
pub fn to_tau(hats: &[Series2], ps: &PeriodSet, td: &TauDerivations, mm: &MirrorMap) -> Result<Vec<Series2>> {
    (0..5)
        .map(|k| {
            let mut a = [0usize; 4];
            for x in a.iter_mut().skip(4 - k) {
                *x = 1;
            }
            mm.to_q(&tau_coupling_z(hats, ps, td, a)?)
        })
        .collect()
}

/// Everything from periods to three-point functions for the main example.
#[derive(Clone, Debug)]
pub struct GenusZero {
    pub periods: PeriodSet,
    pub mirror: MirrorMap,
    pub derivations: TauDerivations,
    /// `C_{1..12..2}` in `q`, indexed by the number of twos.
    pub couplings: Vec<Series2>,
    pub three_point: ThreePoint,
}

/// Runs the main example to `q1^d1`, `q2^d2`.
pub fn genus_zero(d1: usize, d2: usize) -> Result<GenusZero> {
    let periods = frobenius_solve(&ModelParams::main(), d1, d2)?;
    let mirror = build_mirror(&periods)?;
    let derivations = tau_derivations(&periods)?;
    let hats = main_example_yukawa_corrected().hat_series(d1, d2)?;
    let couplings = to_tau(&hats, &periods, &derivations, &mirror)?;
    let three_point = solve_three_point(&couplings, &IntersectionData::main(), &SeedSet::main(), d2)?;
    Ok(GenusZero { periods, mirror, derivations, couplings, three_point })
}

impl GenusZero {
    pub fn potential(&self, gamma: usize) -> Result<Potential> {
        assemble_potential(&self.three_point, gamma)
    }

    pub fn invariants(&self, gamma: usize, d1: u32, d2: u32) -> Result<GWTable> {
        extract_gw(&self.potential(gamma)?, d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_limits_and_symmetry() {
        let ps = frobenius_solve(&ModelParams::main(), 5, 2).unwrap();
        let mm = build_mirror(&ps).unwrap();
        let td = tau_derivations(&ps).unwrap();
        let hats = main_example_yukawa_corrected().hat_series(5, 2).unwrap();
        let c = to_tau(&hats, &ps, &td, &mm).unwrap();
        let ct: Vec<Rat> = c.iter().map(|s| s.constant_term().clone()).collect();
        assert_eq!(ct, IntersectionData::main().c0);
        let x = tau_coupling_z(&hats, &ps, &td, [0, 1, 0, 1]).unwrap();
        let y = tau_coupling_z(&hats, &ps, &td, [1, 1, 0, 0]).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn bps_numbers_low_degree() {
        let gz = genus_zero(5, 2).unwrap();
        let g1 = gz.invariants(1, 5, 2).unwrap();
        let col: Vec<Rat> = (0..=5).map(|d| g1.n[&(d, 1)].clone()).collect();
        let want = [-20i64, 7680, -1800000, 278394880, 623056099920, 97531011394560];
        assert_eq!(col, want.iter().map(|&v| ri(v)).collect::<Vec<_>>());
        assert_eq!(g1.big_n[&(0, 2)], ri(-825));
        assert_eq!(g1.n[&(0, 2)], ri(-820));
        assert_eq!(g1.n[&(1, 2)], ri(491520));
        assert!(g1.round_trip());
        let g2 = gz.invariants(2, 5, 2).unwrap();
        let row0: Vec<Rat> = (1..=5).map(|d| g2.n[&(d, 0)].clone()).collect();
        assert_eq!(row0, (1..=5).map(|d| ri(960 * d)).collect::<Vec<_>>());
        assert_eq!(g2.n[&(1, 1)], ri(5760));
        assert_eq!(g2.n[&(2, 2)], ri(-98640000));
    }
}
