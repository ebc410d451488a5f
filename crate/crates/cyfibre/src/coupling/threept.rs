use num_traits::Zero;
use serde::Deserialize;

use super::IntersectionData;
use crate::error::{Error, Result};
use crate::modular::eisenstein;
use crate::rat::{parse_rat, ri, Rat};
use crate::series::{Series1, Series2};

/// `C_{ab gamma}` at `q2^0`: `constant + e4 * E4(q1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    /// `0` for `11`, `1` for `12`, `2` for `22`.
    pub ab: usize,
    /// `0` or `1`.
    pub gamma: usize,
    pub constant: Rat,
    pub e4: Rat,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSet {
    pub seeds: Vec<Seed>,
}

#[derive(Deserialize)]
struct SeedJson {
    ab: String,
    gamma: usize,
    constant: String,
    e4: String,
    source: String,
}

impl SeedSet {
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Vec<SeedJson> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut seeds = Vec::new();
        for r in raw {
            let ab = match r.ab.as_str() {
                "11" => 0,
                "12" => 1,
                "22" => 2,
                x => return Err(Error::Parse(format!("index pair {x}"))),
            };
            if !(1..=2).contains(&r.gamma) {
                return Err(Error::Parse(format!("gamma {}", r.gamma)));
            }
            seeds.push(Seed { ab, gamma: r.gamma - 1, constant: parse_rat(&r.constant)?, e4: parse_rat(&r.e4)?, source: r.source });
        }
        let set = Self { seeds };
        for ab in 0..3 {
            for g in 0..2 {
                set.get(ab, g)?;
            }
        }
        Ok(set)
    }

    /// The seeds of the main example.
    pub fn main() -> Self {
        Self::from_json(include_str!("../../presets/seeds.json")).expect("bundled seeds")
    }

    pub fn get(&self, ab: usize, gamma: usize) -> Result<&Seed> {
        self.seeds
            .iter()
            .find(|s| s.ab == ab && s.gamma == gamma)
            .ok_or_else(|| Error::Precondition(format!("missing seed for pair {ab}, gamma {}", gamma + 1)))
    }

    pub fn value(&self, ab: usize, gamma: usize, order: usize) -> Result<Series1> {
        let s = self.get(ab, gamma)?;
        let e4 = eisenstein(4, order)?.to_series()?;
        Ok(&Series1::constant(s.constant.clone(), order) + &e4.scale(&s.e4))
    }
}

/// `C_{ab gamma}` order by order in `q2`: `C_{22} = k^2 phi_k`, `C_{12} = k theta phi_k`,
/// `C_{11} = theta^2 phi_k` on `q2^k`, `k >= 1`.
#[derive(Clone, Debug)]
pub struct ThreePoint {
    pub seeds: SeedSet,
    /// `phi[gamma][k]`; entry `0` unused.
    pub phi: [Vec<Series1>; 2],
    pub order: usize,
}

const PAIRS: [(usize, usize, usize); 6] = [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 1, 2), (1, 2, 3), (2, 2, 4)];

impl ThreePoint {
    /// `C_{ab gamma}` at `q2^k`.
    pub fn c3(&self, ab: usize, gamma: usize, k: usize) -> Result<Series1> {
        if k == 0 {
            return self.seeds.value(ab, gamma, self.order);
        }
        let p = &self.phi[gamma][k];
        let kk = ri(k as i64);
        Ok(match ab {
            2 => p.scale(&(&kk * &kk)),
            1 => p.theta().scale(&kk),
            _ => p.theta().theta(),
        })
    }

    fn pair(&self, g: &[[Rat; 2]; 2], ab: usize, cd: usize, k: usize) -> Result<Series1> {
        let mut tot = Series1::zero(self.order);
        for k1 in 0..=k {
            for (a, row) in g.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    tot = &tot + &(&self.c3(ab, a, k1)? * &self.c3(cd, b, k - k1)?).scale(v);
                }
            }
        }
        Ok(tot)
    }

    /// `sum C_{ab gamma} eta^{gamma delta} C_{cd delta}` at `q2^k`, for every index pattern.
    pub fn check(&self, c4: &[Series1], inter: &IntersectionData, k: usize) -> Result<()> {
        for &(ab, cd, comp) in &PAIRS {
            if self.pair(&inter.eta_inv, ab, cd, k)? != c4[comp] {
                let name = ["11", "12", "22"];
                return Err(Error::Inconsistent(format!(
                    "C_{}{} differs at q2^{k} (pairing {} x {})",
                    name[ab], name[cd], name[ab], name[cd]
                )));
            }
        }
        Ok(())
    }
}

fn slices(c4: &[Series2], k: usize, order: usize) -> Result<Vec<Series1>> {
    c4.iter().map(|s| Ok(s.slice_z2(k)?.truncate(order))).collect()
}

/// Solves `C_{abcd} = C_{ab gamma} eta^{gamma delta} C_{cd delta}` for the `q2^k`
/// coefficients, `k = 1..=kmax`, from the `2222` and `1222` components; the
/// other components are checked.
pub fn solve_three_point(c4: &[Series2], inter: &IntersectionData, seeds: &SeedSet, kmax: usize) -> Result<ThreePoint> {
    let (order, d2) = c4[0].caps();
    if kmax > d2 {
        return Err(Error::TruncationLoss(format!("q2^{kmax} requested, couplings known to q2^{d2}")));
    }
    let mut tp = ThreePoint { seeds: seeds.clone(), phi: [vec![Series1::zero(order)], vec![Series1::zero(order)]], order };
    let g = &inter.eta_inv;
    // constant parts of the 12 and 22 seeds enter the linear system
    let s22: Vec<Rat> = (0..2).map(|c| seeds.get(2, c).map(|s| s.constant.clone())).collect::<Result<_>>()?;
    let s12: Vec<Rat> = (0..2).map(|c| seeds.get(1, c).map(|s| s.constant.clone())).collect::<Result<_>>()?;
    if seeds.get(2, 0)?.e4 != Rat::zero() || seeds.get(2, 1)?.e4 != Rat::zero() || seeds.get(1, 0)?.e4 != Rat::zero() || seeds.get(1, 1)?.e4 != Rat::zero() {
        return Err(Error::Unsupported("non-constant 12 or 22 seeds".into()));
    }
    // v = eta s22, u = eta s12
    let v: Vec<Rat> = (0..2).map(|a| (0..2).map(|b| &g[a][b] * &s22[b]).sum()).collect();
    let u: Vec<Rat> = (0..2).map(|a| (0..2).map(|b| &g[a][b] * &s12[b]).sum()).collect();
    let det = &v[0] * &u[1] - &v[1] * &u[0];
    if det.is_zero() {
        return Err(Error::Inconsistent("singular leading system for the three-point functions".into()));
    }
    tp.check(&slices(c4, 0, order)?, inter, 0)?;
    for k in 1..=kmax {
        let c = slices(c4, k, order)?;
        tp.phi[0].push(Series1::zero(order));
        tp.phi[1].push(Series1::zero(order));
        let kk = ri(k as i64);
        let k2 = &kk * &kk;
        // 2222: 2 k^2 (v . phi) = C2222 - rest
        let rest = tp.pair(g, 2, 2, k)?;
        let psi = (&c[4] - &rest).scale(&(Rat::from_integer(1.into()) / (ri(2) * &k2)));
        // 1222: k theta (v . phi) + k^2 (u . phi) = C1222 - rest
        let rest = tp.pair(g, 1, 2, k)?;
        let chi = (&(&c[3] - &rest) - &psi.theta().scale(&kk)).scale(&(Rat::from_integer(1.into()) / &k2));
        // [[v0, v1], [u0, u1]] phi = [psi, chi]
        let p0 = (&psi.scale(&u[1]) - &chi.scale(&v[1])).scale(&(Rat::from_integer(1.into()) / &det));
        let p1 = (&chi.scale(&v[0]) - &psi.scale(&u[0])).scale(&(Rat::from_integer(1.into()) / &det));
        tp.phi[0][k] = p0;
        tp.phi[1][k] = p1;
        tp.check(&c, inter, k)?;
    }
    Ok(tp)
}
