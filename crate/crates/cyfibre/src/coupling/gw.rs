use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::Zero;
use serde_json::json;

use super::ThreePoint;
use crate::error::{Error, Result};
use crate::mirror::TExpansion;
use crate::rat::{fmt_rat, ri, Rat};
use crate::series::Series1;

/// `F^0(gamma)` without its classical and logarithmic part, by powers of `q2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    /// `1` or `2`.
    pub gamma: usize,
    /// `sectors[k]` is the coefficient of `q2^k`; `sectors[0]` has no constant term.
    pub sectors: Vec<Series1>,
}

/// Integrates `theta2^2` on the `q2^k`, `k >= 1`, sectors and takes the `q2^0`
/// sector from `theta1^2 F = C_{11 gamma}`.
pub fn assemble_potential(tp: &ThreePoint, gamma: usize) -> Result<Potential> {
    if !(1..=2).contains(&gamma) {
        return Err(Error::Precondition(format!("gamma {gamma}")));
    }
    let g = gamma - 1;
    let c11 = tp.seeds.value(0, g, tp.order)?;
    let mut s0 = vec![Rat::zero(); tp.order + 1];
    for (d, v) in s0.iter_mut().enumerate().skip(1) {
        *v = c11.coeff(d) / ri((d * d) as i64);
    }
    let mut sectors = vec![Series1::from_coeffs(s0)];
    sectors.extend(tp.phi[g].iter().skip(1).cloned());
    Ok(Potential { gamma, sectors })
}

impl Potential {
    /// `f_k(q1)` with `F = sum f_k t^k`, `t = q2 q1^{n/2}`.
    pub fn t_expansion(&self, n: u32) -> Result<TExpansion> {
        TExpansion::from_q2_slices(&self.sectors, n)
    }
}

/// Genus-zero invariants `N(d1, d2)` and BPS numbers `n(d1, d2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWTable {
    pub gamma: usize,
    pub big_n: BTreeMap<(u32, u32), Rat>,
    pub n: BTreeMap<(u32, u32), Rat>,
}

fn divisors(a: u32, b: u32) -> Vec<u32> {
    let g = a.gcd(&b);
    (1..=g).filter(|k| g % k == 0).collect()
}

/// Reads off `N` and inverts `N(beta) = sum_{k | beta} n(beta / k) / k^2`.
pub fn extract_gw(pot: &Potential, d1max: u32, d2max: u32) -> Result<GWTable> {
    let mut big_n = BTreeMap::new();
    for d2 in 0..=d2max {
        let s = pot.sectors.get(d2 as usize).ok_or_else(|| Error::TruncationLoss(format!("q2^{d2} not computed")))?;
        for d1 in 0..=d1max {
            if d1 == 0 && d2 == 0 {
                continue;
            }
            if d1 as usize > s.cap() {
                return Err(Error::TruncationLoss(format!("q1^{d1} beyond cap {}", s.cap())));
            }
            big_n.insert((d1, d2), s.coeff(d1 as usize).clone());
        }
    }
    let mut n: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
    let mut keys: Vec<(u32, u32)> = big_n.keys().cloned().collect();
    keys.sort_by_key(|&(a, b)| (a + b, a));
    for (a, b) in keys {
        let mut v = big_n[&(a, b)].clone();
        for k in divisors(a, b).into_iter().skip(1) {
            v -= &n[&(a / k, b / k)] / ri((k * k) as i64);
        }
        n.insert((a, b), v);
    }
    Ok(GWTable { gamma: pot.gamma, big_n, n })
}

impl GWTable {
    /// `N` rebuilt from `n`.
    pub fn reassemble(&self) -> BTreeMap<(u32, u32), Rat> {
        self.n
            .keys()
            .map(|&(a, b)| {
                let v = divisors(a, b).into_iter().map(|k| &self.n[&(a / k, b / k)] / ri((k * k) as i64)).sum();
                ((a, b), v)
            })
            .collect()
    }

    pub fn round_trip(&self) -> bool {
        self.reassemble() == self.big_n
    }

    fn dims(&self) -> (u32, u32) {
        let d1 = self.n.keys().map(|k| k.0).max().unwrap_or(0);
        let d2 = self.n.keys().map(|k| k.1).max().unwrap_or(0);
        (d1, d2)
    }

    /// Rows `d1`, columns `d2`, header row of `d2` values; the classical entry is marked.
    pub fn to_csv(&self, bps: bool) -> String {
        let (d1m, d2m) = self.dims();
        let table = if bps { &self.n } else { &self.big_n };
        let mut s = String::from("d1\\d2");
        for d2 in 0..=d2m {
            let _ = write!(s, ",{d2}");
        }
        s.push('\n');
        for d1 in 0..=d1m {
            let _ = write!(s, "{d1}");
            for d2 in 0..=d2m {
                match table.get(&(d1, d2)) {
                    Some(v) => {
                        let _ = write!(s, ",{}", fmt_rat(v));
                    }
                    None => s.push_str(",classical"),
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .n
            .iter()
            .map(|(&(a, b), v)| json!({ "d1": a, "d2": b, "N": fmt_rat(&self.big_n[&(a, b)]), "n": fmt_rat(v) }))
            .collect();
        json!({
            "gamma": self.gamma,
            "classical": "classical part omitted",
            "entries": entries,
        })
    }
}
