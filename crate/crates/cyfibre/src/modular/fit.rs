use std::fmt;

use num_traits::{One, Zero};
use serde_json::json;

use super::{eta_pow, level_generators, GeneratorSet, Level};
use crate::error::{Error, Result};
use crate::linalg::{rref, solve_general};
use crate::rat::{fmt_rat, Rat};
use crate::series::{QExp, Series1};

/// What to fit: `f = q^s eta^{-p} P` with `P` of weight `weight + p/2` in the
/// level's generators and `E2^a`, `a <= max_e2`. Each of `extra_weights` adds
/// the monomials of weight `w + p/2`.
#[derive(Clone, Debug)]
pub struct FitSpec {
    pub weight: i64,
    pub extra_weights: Vec<i64>,
    pub level: Level,
    pub eta_power: i64,
    pub q_shift: i64,
    pub max_e2: u32,
}

/// Exponent of `E2` followed by the exponents of the level generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub e2: u32,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub spec: FitSpec,
    pub names: Vec<String>,
    pub terms: Vec<(Monomial, Rat)>,
    /// Number of coefficients matched (`q^0 ..` of `P`).
    pub rows: usize,
    pub basis_size: usize,
}

fn monomials(weights: &[u32], target: i64, max_e2: u32) -> Vec<Monomial> {
    fn rec(weights: &[u32], rem: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match weights.split_first() {
            None => {
                if rem == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&w, rest)) => {
                let mut e = 0;
                while e as i64 * w as i64 <= rem {
                    cur.push(e);
                    rec(rest, rem - e as i64 * w as i64, cur, out);
                    cur.pop();
                    e += 1;
                }
            }
        }
    }
    let mut out = Vec::new();
    for a in 0..=max_e2 {
        let rem = target - 2 * a as i64;
        if rem < 0 {
            break;
        }
        let mut v = Vec::new();
        rec(weights, rem, &mut Vec::new(), &mut v);
        out.extend(v.into_iter().map(|exps| Monomial { e2: a, exps }));
    }
    out
}

fn eval_monomial(gs: &GeneratorSet, m: &Monomial, order: usize) -> Result<Series1> {
    let mut r = gs.e2.to_series()?.truncate(order).pow_int(m.e2);
    for (g, &e) in gs.gens.iter().zip(&m.exps) {
        r = &r * &g.q.to_series()?.truncate(order).pow_int(e);
    }
    Ok(r)
}

/// `f q^{-s} eta^p` as an ordinary power series.
fn stripped(f: &QExp, spec: &FitSpec) -> Result<Series1> {
    let span = (f.cap() - f.min_exp()) as usize / f.base_den() as usize + 2;
    let eta = eta_pow(spec.eta_power, span)?;
    let b = eta.base_den().max(f.base_den()) as i64;
    let g = f.mul(&eta)?.shift(-spec.q_shift * b);
    g.to_series().map_err(|_| Error::Precondition("f q^-s eta^p is not a power series in q".into()))
}

/// Decomposes `f`. Linearly dependent monomials are dropped greedily; the
/// system must have at least `basis + 3` rows and be consistent on all of them.
pub fn fit(f: &QExp, spec: &FitSpec) -> Result<FitResult> {
    if spec.eta_power % 2 != 0 {
        return Err(Error::Unsupported("odd eta power".into()));
    }
    let g = stripped(f, spec)?;
    let order = g.cap();
    let gs = level_generators(spec.level, order)?;
    let weights: Vec<u32> = gs.gens.iter().map(|x| x.weight).collect();
    let mut targets: Vec<i64> = std::iter::once(spec.weight).chain(spec.extra_weights.iter().cloned()).collect();
    targets.sort();
    targets.dedup();
    let mons: Vec<Monomial> = targets
        .iter()
        .flat_map(|w| monomials(&weights, w + spec.eta_power / 2, spec.max_e2))
        .collect();
    let cols: Vec<Series1> = mons.iter().map(|m| eval_monomial(&gs, m, order)).collect::<Result<_>>()?;
    // independent columns
    let mut mt: Vec<Vec<Rat>> = (0..=order).map(|r| cols.iter().map(|c| c.coeff(r).clone()).collect()).collect();
    let keep = if mons.is_empty() { Vec::new() } else { rref(&mut mt) };
    let basis_size = keep.len();
    if order + 1 < basis_size + 3 {
        return Err(Error::Underdetermined(format!(
            "{} coefficients for {} basis monomials; need {}",
            order + 1,
            basis_size,
            basis_size + 3
        )));
    }
    let a: Vec<Vec<Rat>> = (0..=order).map(|r| keep.iter().map(|&k| cols[k].coeff(r).clone()).collect()).collect();
    let rhs: Vec<Rat> = (0..=order).map(|r| g.coeff(r).clone()).collect();
    let sol = solve_general(&a, &rhs)?;
    let terms = keep
        .iter()
        .zip(sol.particular)
        .filter(|(_, v)| !v.is_zero())
        .map(|(&k, v)| (mons[k].clone(), v))
        .collect();
    Ok(FitResult {
        spec: spec.clone(),
        names: gs.gens.iter().map(|x| x.name.clone()).collect(),
        terms,
        rows: order + 1,
        basis_size,
    })
}

/// Scans `eta_power` in `powers` and `q_shift` in `shifts`; first consistent fit wins.
pub fn fit_search(f: &QExp, weight: i64, level: Level, max_e2: u32, powers: &[i64], shifts: &[i64]) -> Result<FitResult> {
    for &p in powers {
        for &s in shifts {
            let spec = FitSpec { weight, extra_weights: Vec::new(), level, eta_power: p, q_shift: s, max_e2 };
            if let Ok(r) = fit(f, &spec) {
                return Ok(r);
            }
        }
    }
    Err(Error::Inconsistent("no (eta power, q shift) in the grid gives a consistent fit".into()))
}

/// Splits a fit by `E2` degree.
pub fn anomaly_decompose(r: &FitResult) -> Vec<(u32, FitResult)> {
    let mut degs: Vec<u32> = r.terms.iter().map(|(m, _)| m.e2).collect();
    degs.sort();
    degs.dedup();
    degs.into_iter()
        .map(|d| {
            let terms = r.terms.iter().filter(|(m, _)| m.e2 == d).cloned().collect();
            (d, FitResult { terms, ..r.clone() })
        })
        .collect()
}

impl FitResult {
    /// The polynomial part `P` to `order`.
    pub fn polynomial(&self, order: usize) -> Result<Series1> {
        let gs = level_generators(self.spec.level, order)?;
        let mut r = Series1::zero(order);
        for (m, c) in &self.terms {
            r = &r + &eval_monomial(&gs, m, order)?.scale(c);
        }
        Ok(r)
    }

    /// `q^s eta^{-p} P` to `order` in `P`.
    pub fn reconstruct(&self, order: usize) -> Result<QExp> {
        let p = QExp::from_series(&self.polynomial(order)?, crate::series::Weight::Mixed);
        let eta = eta_pow(-self.spec.eta_power, order)?;
        let b = eta.base_den() as i64;
        Ok(p.mul(&eta)?.shift(self.spec.q_shift * b))
    }

    /// Coefficient of a monomial given as `(e2, exps)`.
    pub fn coeff(&self, e2: u32, exps: &[u32]) -> Rat {
        self.terms
            .iter()
            .find(|(m, _)| m.e2 == e2 && m.exps == exps)
            .map_or_else(Rat::zero, |(_, c)| c.clone())
    }

    fn monomial_string(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        if m.e2 > 0 {
            parts.push(if m.e2 == 1 { "E2".to_string() } else { format!("E2^{}", m.e2) });
        }
        for (n, &e) in self.names.iter().zip(&m.exps) {
            if e == 1 {
                parts.push(n.clone());
            } else if e > 1 {
                parts.push(format!("{n}^{e}"));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| json!({ "monomial": self.monomial_string(m), "e2": m.e2, "exps": m.exps, "coeff": fmt_rat(c) }))
            .collect();
        json!({
            "level": format!("{:?}", self.spec.level),
            "weight": self.spec.weight,
            "extra_weights": self.spec.extra_weights,
            "eta_power": self.spec.eta_power,
            "q_shift": self.spec.q_shift,
            "generators": self.names,
            "rows": self.rows,
            "basis_size": self.basis_size,
            "terms": terms,
        })
    }
}

impl fmt::Display for FitResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.q_shift != 0 {
            write!(f, "q^{}", self.spec.q_shift)?;
        }
        if self.spec.eta_power != 0 {
            write!(f, "/eta^{}", self.spec.eta_power)?;
        }
        write!(f, " * (")?;
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rat::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if a.is_one() {
                write!(f, "{}", self.monomial_string(m))?;
            } else {
                write!(f, "{}*{}", fmt_rat(&a), self.monomial_string(m))?;
            }
        }
        write!(f, ")  [{} coefficients, {} monomials]", self.rows, self.basis_size)
    }
}
