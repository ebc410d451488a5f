use std::fmt;

use num_traits::{One, Zero};
use serde_json::json;

use super::rational::{Poly2, RationalFn2};
use super::IntersectionData;
use crate::error::{Error, Result};
use crate::linalg::solve_general;
use crate::rat::{fmt_rat, ri, rq, Rat};
use crate::series::{series2_to_json, Series2};
use crate::weyl::{ModelParams, ShiftOp};

/// The five couplings `W^(4-k, k)`, `k = 0..=4`, with their poles at `z = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YukawaSet {
    pub w: Vec<RationalFn2>,
}

/// `-1 + 1728 z1 - 1119744 z1^2 + 322486272 z1^3 + 34828517376 z1^4 (-1 + 256 z2)`.
pub fn delta1() -> Poly2 {
    Poly2::in_z1(&[-1, 1728, -1119744, 322486272, -34828517376])
        .add(&Poly2::monomial(4, 1, ri(34828517376) * ri(256)))
}

/// `-1 + 256 z2`.
pub fn delta2() -> Poly2 {
    Poly2::constant(ri(-1)).add(&Poly2::monomial(0, 1, ri(256)))
}

fn mono(i: u32, j: u32) -> Poly2 {
    Poly2::monomial(i, j, Rat::one())
}

/// The couplings of the main example, with the poles exactly as printed.
/// `W^(1,3)` is printed with `z1 z2^2`; see [`main_example_yukawa_corrected`].
pub fn main_example_yukawa() -> YukawaSet {
    build_main(2)
}

/// As [`main_example_yukawa`] with the pole of `W^(1,3)` raised to `z1 z2^3`.
pub fn main_example_yukawa_corrected() -> YukawaSet {
    build_main(3)
}

fn build_main(w13_pole: u32) -> YukawaSet {
    let d1 = delta1();
    let l = Poly2::in_z1(&[-1, 432]);
    let w = vec![
        RationalFn2::new(Poly2::constant(ri(-64)), mono(4, 0).mul(&d1)),
        RationalFn2::new(l.scale(&ri(16)), mono(3, 1).mul(&d1)),
        RationalFn2::new(l.pow(2).scale(&ri(-4)), mono(2, 2).mul(&d1)),
        RationalFn2::new(l.pow(3), mono(1, w13_pole).mul(&d1)),
        RationalFn2::new(
            Poly2::in_z1(&[-1, 1728, -1119744, 322486272]).scale(&ri(64)),
            mono(0, 3).mul(&d1).mul(&delta2()),
        ),
    ];
    YukawaSet { w: w.into_iter().map(|r| r.expect("nonzero denominator")).collect() }
}

impl YukawaSet {
    /// `z1^{4-k} z2^k W^(4-k, k)` as power series.
    pub fn hat_series(&self, d1: usize, d2: usize) -> Result<Vec<Series2>> {
        self.w.iter().enumerate().map(|(k, r)| r.times_monomial_series(4 - k as u32, k as u32, d1, d2)).collect()
    }

    pub fn to_json(&self, d1: usize, d2: usize) -> Result<serde_json::Value> {
        let hats = self.hat_series(d1, d2)?;
        let comps: Vec<_> = self
            .w
            .iter()
            .zip(&hats)
            .enumerate()
            .map(|(k, (r, s))| json!({ "j": [4 - k, k], "rational": r.to_string(), "hat_series": serde_json::from_str::<serde_json::Value>(&series2_to_json(s)).expect("json") }))
            .collect();
        Ok(json!({ "couplings": comps }))
    }
}

impl fmt::Display for YukawaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.w.iter().enumerate() {
            writeln!(f, "W^({},{}) = {}", 4 - k, k, r)?;
        }
        Ok(())
    }
}

/// `W^j = (1/2) sum_m j_m d_m W^{j - e_m}` for `|j| = 5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GriffithsRelation {
    pub target: Vec<u32>,
    /// `(coefficient, m, source)`.
    pub terms: Vec<(Rat, usize, Vec<u32>)>,
}

impl fmt::Display for GriffithsRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "W^({}) =", idx(&self.target))?;
        for (k, (c, m, s)) in self.terms.iter().enumerate() {
            let sep = if k == 0 { " " } else { " + " };
            write!(f, "{sep}{}*d{}W^({})", fmt_rat(c), m + 1, idx(s))?;
        }
        Ok(())
    }
}

fn compositions(h: usize, total: u32) -> Vec<Vec<u32>> {
    if h == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for a in (0..=total).rev() {
        for mut rest in compositions(h - 1, total - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// The order-five relations for `h` moduli, `h` in `{2, 3}`.
pub fn griffiths_relations(h: usize) -> Result<Vec<GriffithsRelation>> {
    if !(2..=3).contains(&h) {
        return Err(Error::Unsupported(format!("{h} moduli")));
    }
    Ok(compositions(h, 5)
        .into_iter()
        .map(|j| {
            let terms = (0..h)
                .filter(|&m| j[m] > 0)
                .map(|m| {
                    let mut s = j.clone();
                    s[m] -= 1;
                    (rq(j[m] as i64, 2), m, s)
                })
                .collect();
            GriffithsRelation { target: j, terms }
        })
        .collect())
}

/// `coef * z^alpha * (theta_m - shift)^{[m given]} What_k`.
#[derive(Clone, Debug)]
struct CTerm {
    alpha: (usize, usize),
    k: usize,
    theta: Option<(usize, Rat)>,
    coef: Rat,
}

/// A linear constraint on the hatted couplings from `theta^gamma L`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub label: String,
    terms: Vec<CTerm>,
}

fn stirling2(b: u32, j: u32) -> i64 {
    if b == j {
        return 1;
    }
    if j == 0 || j > b {
        return 0;
    }
    j as i64 * stirling2(b - 1, j) + stirling2(b - 1, j - 1)
}

fn constraint_from(op: &ShiftOp, label: String, rels: &[GriffithsRelation]) -> Result<Constraint> {
    let mut terms = Vec::new();
    for ((alpha, beta), x) in op.terms() {
        let al = (alpha[0] as usize, alpha[1] as usize);
        for j1 in 0..=beta[0] {
            for j2 in 0..=beta[1] {
                let s = stirling2(beta[0], j1) * stirling2(beta[1], j2);
                if s == 0 || j1 + j2 < 4 {
                    continue;
                }
                let co = x * ri(s);
                match j1 + j2 {
                    4 => terms.push(CTerm { alpha: al, k: j2 as usize, theta: None, coef: co }),
                    5 => {
                        let rel = rels.iter().find(|r| r.target == [j1, j2]).expect("relation for |j| = 5");
                        for (c, m, src) in &rel.terms {
                            // z^j d_m W^{j-e_m} = (theta_m - (j_m - 1)) What^{j-e_m}
                            let shift = ri(rel.target[*m] as i64 - 1);
                            terms.push(CTerm { alpha: al, k: src[1] as usize, theta: Some((*m, shift)), coef: &co * c });
                        }
                    }
                    d => return Err(Error::Unsupported(format!("pairing of order {d}"))),
                }
            }
        }
    }
    Ok(Constraint { label, terms })
}

/// `theta^gamma L_k` of total order 4 or 5, as constraints on the hatted couplings.
pub fn pf_constraints(p: &ModelParams) -> Result<Vec<Constraint>> {
    if p.n != 4 {
        return Err(Error::Unsupported(format!("four-point couplings need n = 4, got {}", p.n)));
    }
    let rels = griffiths_relations(2)?;
    let mut out = Vec::new();
    for (name, l) in [("L1", p.l1()), ("L2", p.l2())] {
        let o = l.order();
        for g in 0..=5u32.saturating_sub(o) {
            if o + g < 4 {
                continue;
            }
            for g1 in 0..=g {
                let t = ShiftOp::theta(2, 0).pow(g1).mul(&ShiftOp::theta(2, 1).pow(g - g1))?;
                let op = t.mul(&l)?;
                out.push(constraint_from(&op, format!("theta1^{g1} theta2^{} {name}", g - g1), &rels)?);
            }
        }
    }
    Ok(out)
}

impl Constraint {
    pub fn apply(&self, hats: &[Series2]) -> Series2 {
        let (d1, d2) = hats[0].caps();
        let mut r = Series2::zero(d1, d2);
        for t in &self.terms {
            let mut s = hats[t.k].clone();
            if let Some((m, sh)) = &t.theta {
                s = s.theta(*m).add_scaled(&s, &-sh.clone());
            }
            r = r.add_scaled(&s.shift(t.alpha.0, t.alpha.1), &t.coef);
        }
        r
    }
}

/// Result of [`verify_pf_constraints`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfReport {
    pub constraints: usize,
    pub caps: (usize, usize),
    /// Lowest total degree with a nonzero residual, with the constraint label.
    pub first_residual: Option<(usize, String)>,
}

impl PfReport {
    pub fn passed(&self) -> bool {
        self.first_residual.is_none()
    }
}

/// Applies every constraint to the hatted series.
pub fn verify_pf_constraints(hats: &[Series2], p: &ModelParams) -> Result<PfReport> {
    let cons = pf_constraints(p)?;
    let mut first: Option<(usize, String)> = None;
    for c in &cons {
        let r = c.apply(hats);
        if let Some(d) = r.terms().filter(|(_, _, v)| !v.is_zero()).map(|(i, j, _)| i + j).min() {
            if first.as_ref().map_or(true, |(e, _)| d < *e) {
                first = Some((d, c.label.clone()));
            }
        }
    }
    Ok(PfReport { constraints: cons.len(), caps: hats[0].caps(), first_residual: first })
}

/// Solves the constraints order by order for the five hatted series; the
/// constant terms are the classical four-point numbers.
pub fn derive_yukawa_series(p: &ModelParams, inter: &IntersectionData, d1: usize, d2: usize) -> Result<Vec<Series2>> {
    let cons = pf_constraints(p)?;
    let mut w = vec![Series2::zero(d1, d2); 5];
    let mut degs: Vec<(usize, usize)> = (0..=d1).flat_map(|i| (0..=d2).map(move |j| (i, j))).collect();
    degs.sort_by_key(|&(i, j)| (i + j, i, j));
    for d in degs {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for c in &cons {
            let mut row = vec![Rat::zero(); 5];
            let mut b = Rat::zero();
            let mut used = false;
            for t in &c.terms {
                if t.alpha.0 > d.0 || t.alpha.1 > d.1 {
                    continue;
                }
                used = true;
                let src = (d.0 - t.alpha.0, d.1 - t.alpha.1);
                let f = match &t.theta {
                    None => t.coef.clone(),
                    Some((m, sh)) => &t.coef * (ri([src.0, src.1][*m] as i64) - sh),
                };
                if src == d {
                    row[t.k] += f;
                } else {
                    b -= f * w[t.k].get(src.0, src.1);
                }
            }
            if used {
                rows.push(row);
                rhs.push(b);
            }
        }
        let sol = solve_general(&rows, &rhs).map_err(|_| Error::Inconsistent(format!("constraints inconsistent at z^{d:?}")))?;
        if d == (0, 0) {
            for (k, v) in inter.c0.iter().enumerate() {
                w[k].set(0, 0, v.clone());
            }
            for (row, b) in rows.iter().zip(&rhs) {
                let lhs: Rat = row.iter().zip(&inter.c0).map(|(a, c)| a * c).sum();
                if &lhs != b {
                    return Err(Error::Inconsistent("classical numbers violate the constraints at z^0".into()));
                }
            }
            continue;
        }
        if !sol.kernel.is_empty() {
            return Err(Error::Underdetermined(format!("{} free coefficients at z^{d:?}", sol.kernel.len())));
        }
        for (k, v) in sol.particular.into_iter().enumerate() {
            w[k].set(d.0, d.1, v);
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_coefficients() {
        let r = griffiths_relations(2).unwrap();
        assert_eq!(r[0].target, vec![5, 0]);
        assert_eq!(r[0].terms, vec![(rq(5, 2), 0, vec![4, 0])]);
        assert_eq!(r[1].terms, vec![(rq(4, 2), 0, vec![3, 1]), (rq(1, 2), 1, vec![4, 0])]);
        assert_eq!(r[5].to_string(), "W^(0,5) = 5/2*d2W^(0,4)");
        assert_eq!(r[4].terms, vec![(rq(1, 2), 0, vec![0, 4]), (rq(4, 2), 1, vec![1, 3])]);
        assert_eq!(griffiths_relations(3).unwrap().len(), 21);
        assert!(griffiths_relations(4).is_err());
    }

    #[test]
    fn printed_leading_terms() {
        assert_eq!(delta2().to_string(), "-1 + 256*z2");
        let y = main_example_yukawa();
        assert_eq!(y.w[0].numerator(), &Poly2::constant(ri(-64)));
        let h = y.hat_series(3, 2).unwrap();
        assert_eq!(h[0].constant_term(), &ri(64));
        // printed pole of W^(1,3) leaves a factor z2
        assert!(h[3].constant_term().is_zero());
        let hc = main_example_yukawa_corrected().hat_series(3, 2).unwrap();
        let c: Vec<Rat> = hc.iter().map(|s| s.constant_term().clone()).collect();
        assert_eq!(c, vec![ri(64), ri(16), ri(4), ri(1), ri(0)]);
    }

    #[test]
    fn corrected_set_satisfies_constraints() {
        let p = ModelParams::main();
        let hats = main_example_yukawa_corrected().hat_series(6, 3).unwrap();
        let rep = verify_pf_constraints(&hats, &p).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let scaled: Vec<Series2> = hats.iter().map(|s| s.scale(&ri(7))).collect();
        assert!(verify_pf_constraints(&scaled, &p).unwrap().passed());
        let printed = main_example_yukawa().hat_series(6, 3).unwrap();
        assert!(!verify_pf_constraints(&printed, &p).unwrap().passed());
        let bumped = main_example_yukawa_corrected();
        let mut w = bumped.w.clone();
        w[0] = w[0].perturb_numerator(1, 0, ri(1));
        let hb = YukawaSet { w }.hat_series(6, 3).unwrap();
        let rep = verify_pf_constraints(&hb, &p).unwrap();
        assert_eq!(rep.first_residual.map(|x| x.0), Some(1));
    }

    #[test]
    fn derived_series_match() {
        let p = ModelParams::main();
        let w = derive_yukawa_series(&p, &IntersectionData::main(), 6, 3).unwrap();
        assert_eq!(w, main_example_yukawa_corrected().hat_series(6, 3).unwrap());
        // What^(4,0) Delta1 is the constant -64
        let d = delta1().to_series(6, 3);
        assert_eq!(&w[0] * &d, Series2::constant(ri(-64), 6, 3));
    }
}
