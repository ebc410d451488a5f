use num_traits::{One, Zero};
use serde::Serialize;

use super::{z_pow_derivative, PeriodSet};
use crate::error::{Error, Result};
use crate::hypergeo::{log_companion_scaled, pfq_scaled, DiffFieldElem, FieldParams, HGParams};
use crate::linalg::solve_unique;
use crate::rat::{fmt_rat, ri, Rat};
use crate::series::Series1;
use crate::weyl::ModelParams;

/// Constants and field elements attached to the `z2^i` slice.
///
/// `Pi^0_i = c0 z^m F^{(m)}`, `Pi^0_i log z + S1_i = c1 z^m (F log z + G)^{(m)} + ct1 Pi^0_i`
/// with `m = n i`; `A` and `B` are defined by `Pi^0_i log z1 + S1_i = Pi^0_i log q + A`
/// and `Pi^0_i log z2 + S2_i = Pi^0_i log z2~ + B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceData {
    pub i: usize,
    pub c0: Rat,
    pub c1: Rat,
    pub ct1: Rat,
    pub a: DiffFieldElem,
    pub b: DiffFieldElem,
}

impl SliceData {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump {
            i: usize,
            c0: String,
            c1: String,
            ct1: String,
            a: String,
            b: String,
        }
        serde_json::to_value(Dump {
            i: self.i,
            c0: fmt_rat(&self.c0),
            c1: fmt_rat(&self.c1),
            ct1: fmt_rat(&self.ct1),
            a: self.a.to_string(),
            b: self.b.to_string(),
        })
        .expect("json")
    }
}

/// `Pi^0_i`, `A_i`, `B_i` for `i <= imax` as elements of `Q(z, F, theta F)`.
#[derive(Clone, Debug)]
pub struct SymbolicSlices {
    pub field: FieldParams,
    pub pi0: Vec<DiffFieldElem>,
    pub a: Vec<DiffFieldElem>,
    pub b: Vec<DiffFieldElem>,
}

pub(crate) fn field_of(p: &ModelParams) -> FieldParams {
    FieldParams::new(p.a0.clone(), p.a1.clone(), p.a2.clone())
}

// f * ell + g
#[derive(Clone)]
struct Pair {
    f: DiffFieldElem,
    g: DiffFieldElem,
}

impl Pair {
    fn theta1(&self, dl: &DiffFieldElem) -> Result<Self> {
        Ok(Pair { f: self.f.theta(), g: self.f.mul(dl)?.add(&self.g.theta())? })
    }

    fn scale(&self, k: &Rat) -> Self {
        Pair { f: self.f.scale(k), g: self.g.scale(k) }
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        Ok(Pair { f: self.f.sub(&o.f)?, g: self.g.sub(&o.g)? })
    }
}

/// Runs the `L2` recursion on `sum_i (Pi^0_i ell + X_i) z2^i` from `X_0 = 0`.
/// `dl = theta1 ell`; `z2_log` when `theta2 ell = 1`.
fn l2_recursion(p: &ModelParams, dl: &DiffFieldElem, z2_log: bool, imax: usize) -> Result<Vec<Pair>> {
    let fp = field_of(p);
    let n = p.n as i64;
    let sgn = if n % 2 == 0 { ri(1) } else { ri(-1) };
    let mut out = vec![Pair { f: DiffFieldElem::f(&fp), g: DiffFieldElem::zero(&fp) }];
    for i in 1..=imax as i64 {
        let mut y = out.last().unwrap().clone();
        for k in 0..n {
            // (n theta2 - theta1 + k) at level i - 1
            let c = ri(n * (i - 1) + k);
            let mut next = y.scale(&c).sub(&y.theta1(dl)?)?;
            if z2_log {
                next.g = next.g.add(&y.f.scale(&ri(n)))?;
            }
            y = next;
        }
        let inv = Rat::one() / ri(i.pow(p.n));
        let f = y.f.scale(&(&sgn * &inv));
        let mut g = y.g.scale(&sgn);
        if z2_log {
            g = g.sub(&f.scale(&ri(n * i.pow(p.n - 1))))?;
        }
        out.push(Pair { f, g: g.scale(&inv) });
    }
    Ok(out)
}

/// Symbolic slices from the `L2` recursion; requires `a1 + a2 = 1`.
pub fn symbolic_slices(p: &ModelParams, imax: usize) -> Result<SymbolicSlices> {
    p.require_balanced()?;
    let fp = field_of(p);
    let disc_inv = DiffFieldElem::disc(&fp).inv()?;
    // theta log q = 1 / ((1 - a0 z) F^2)
    let w = disc_inv.mul(&DiffFieldElem::f(&fp).pow(2).inv()?)?;
    // theta1 log z2~ = -(n/2) (w - 1 / (1 - a0 z))
    let wt = w.sub(&disc_inv)?.scale(&-p.half_n());
    let ra = l2_recursion(p, &w, false, imax)?;
    let rb = l2_recursion(p, &wt, true, imax)?;
    for (x, y) in ra.iter().zip(&rb) {
        if x.f != y.f {
            return Err(Error::Inconsistent("holomorphic slices differ between recursions".into()));
        }
    }
    Ok(SymbolicSlices {
        field: fp,
        pi0: ra.iter().map(|x| x.f.clone()).collect(),
        a: ra.into_iter().map(|x| x.g).collect(),
        b: rb.into_iter().map(|x| x.g).collect(),
    })
}

/// `sum_{k=1}^m C(m,k) (-1)^{k-1} (k-1)! z^{m-k} F^{(m-k)} + z^m G^{(m)}`, the non-log part of
/// `z^m (d/dz)^m (F log z + G)`.
fn log_bracket(f: &Series1, g: &Series1, m: usize) -> Series1 {
    let mut r = z_pow_derivative(g, m);
    let mut binom = Rat::one();
    let mut fact = Rat::one();
    for k in 1..=m {
        binom = binom * ri((m - k + 1) as i64) / ri(k as i64);
        if k > 1 {
            fact *= ri(k as i64 - 1);
        }
        let sign = if k % 2 == 1 { ri(1) } else { ri(-1) };
        r = &r + &z_pow_derivative(f, m - k).scale(&(&binom * &sign * &fact));
    }
    r
}

fn columns_solve(cols: &[&Series1], target: &Series1) -> Result<Vec<Rat>> {
    let n = target.cap();
    let rows: Vec<Vec<Rat>> = (0..=n).map(|r| cols.iter().map(|c| c.coeff(r).clone()).collect()).collect();
    let rhs: Vec<Rat> = (0..=n).map(|r| target.coeff(r).clone()).collect();
    solve_unique(&rows, &rhs)
}

/// Fits the constants of slice `i` against the Frobenius slices, and checks the
/// symbolic `A_i`, `B_i` against their series definitions.
pub fn slice_constants(ps: &PeriodSet, i: usize) -> Result<SliceData> {
    let p = &ps.params;
    let order = ps.caps().0;
    let m = p.n as usize * i;
    if m > order {
        return Err(Error::TruncationLoss(format!("slice {i} starts at z^{m}, beyond cap {order}")));
    }
    let hg = HGParams::gauss(p.a1.clone(), p.a2.clone());
    let f = pfq_scaled(&hg, &p.a0, order)?;
    let g = log_companion_scaled(&[p.a1.clone(), p.a2.clone()], &p.a0, order)?;
    let p0 = ps.slice(0, i)?;
    let s1 = ps.slice(1, i)?;
    let s2 = ps.slice(2, i)?;

    let dmf = z_pow_derivative(&f, m);
    let c0 = columns_solve(&[&dmf], &p0)?.remove(0);
    let br = log_bracket(&f, &g, m);
    let (c1, ct1) = if p0.is_zero() {
        (columns_solve(&[&br], &s1)?.remove(0), Rat::zero())
    } else {
        let v = columns_solve(&[&br, &p0], &s1)?;
        (v[0].clone(), v[1].clone())
    };

    let sym = symbolic_slices(p, i)?;
    let a = sym.a[i].clone();
    let b = sym.b[i].clone();
    if sym.pi0[i].eval(order)? != p0 {
        return Err(Error::Inconsistent(format!("symbolic Pi^0_{i} differs from the Frobenius slice")));
    }
    // A_i = S1_i - Pi^0_i G / F
    let gf = g.div(&f)?;
    if a.eval(order)? != &s1 - &(&p0 * &gf) {
        return Err(Error::Inconsistent(format!("A_{i} differs from the Frobenius slice")));
    }
    // B_i = S2_i + (n/2) Pi^0_i (G / F + log(1 - a0 z))
    let mut lc = vec![Rat::zero(); order + 1];
    lc[0] = Rat::one();
    lc[1] = -p.a0.clone();
    let lg = Series1::from_coeffs(lc).log_unit()?;
    if b.eval(order)? != &s2 + &(&p0 * &(&gf + &lg)).scale(&p.half_n()) {
        return Err(Error::Inconsistent(format!("B_{i} differs from the Frobenius slice")));
    }
    Ok(SliceData { i, c0, c1, ct1, a, b })
}
