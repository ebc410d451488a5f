//! Generalized hypergeometric series, the logarithmic companion solution and
//! the differential field generated by `z`, `F` and `theta F`.

mod field;

pub use field::{DiffFieldElem, FieldParams, Poly3};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{pochhammer, rbig, ri, Rat};
use crate::series::Series1;
use crate::weyl::ShiftOp;

/// Upper and lower parameters of `pFq`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGParams {
    #[serde(with = "crate::rat::serde_rat_vec")]
    pub upper: Vec<Rat>,
    #[serde(with = "crate::rat::serde_rat_vec")]
    pub lower: Vec<Rat>,
}

impl HGParams {
    pub fn new(upper: Vec<Rat>, lower: Vec<Rat>) -> Self {
        Self { upper, lower }
    }

    /// `2F1(a1, a2; 1)`.
    pub fn gauss(a1: Rat, a2: Rat) -> Self {
        Self { upper: vec![a1, a2], lower: vec![ri(1)] }
    }

    fn check_lower(&self) -> Result<()> {
        for b in &self.lower {
            if b <= &Rat::zero() && b.is_integer() {
                return Err(Error::Precondition(format!("lower parameter {b} is a non-positive integer")));
            }
        }
        Ok(())
    }

    /// Every parameter shifted by one.
    pub fn raised(&self) -> Self {
        let up = |v: &Vec<Rat>| v.iter().map(|x| x + ri(1)).collect();
        Self { upper: up(&self.upper), lower: up(&self.lower) }
    }
}

/// `sum_k prod (a_i)_k / (prod (b_j)_k k!) z^k` to `z^order`.
pub fn pfq(p: &HGParams, order: usize) -> Result<Series1> {
    pfq_scaled(p, &Rat::one(), order)
}

/// `pFq` evaluated at `x z`.
pub fn pfq_scaled(p: &HGParams, x: &Rat, order: usize) -> Result<Series1> {
    p.check_lower()?;
    let mut c = vec![Rat::zero(); order + 1];
    let mut t = Rat::one();
    c[0] = t.clone();
    for k in 1..=order {
        let km = ri(k as i64 - 1);
        for a in &p.upper {
            t *= a + &km;
        }
        for b in &p.lower {
            t /= b + &km;
        }
        t = t * x / ri(k as i64);
        c[k] = t.clone();
    }
    Ok(Series1::from_coeffs(c))
}

/// The series `G` with `F log z + G` a solution, for `q = p - 1` and all lower parameters `1`.
pub fn log_companion(a: &[Rat], order: usize) -> Result<Series1> {
    log_companion_scaled(a, &Rat::one(), order)
}

/// [`log_companion`] at `x z`; then `F(xz) log z + G(xz)` solves the rescaled equation.
pub fn log_companion_scaled(a: &[Rat], x: &Rat, order: usize) -> Result<Series1> {
    if a.is_empty() {
        return Err(Error::Precondition("need at least one upper parameter".into()));
    }
    for aj in a {
        if aj <= &Rat::zero() && aj.is_integer() {
            return Err(Error::Precondition(format!("upper parameter {aj} is a non-positive integer")));
        }
    }
    let p = a.len() as u32;
    let mut c = vec![Rat::zero(); order + 1];
    let mut h = Rat::zero();
    let mut xk = Rat::one();
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        let i = ri(k as i64 - 1);
        for aj in a {
            h += Rat::one() / (aj + &i) - Rat::one() / (&i + ri(1));
        }
        xk *= x;
        let mut lead = rbig(BigInt::one());
        for aj in a {
            lead *= pochhammer(aj, k);
        }
        let kf = rbig(crate::rat::factorial(k));
        *ck = lead / crate::rat::pow(&kf, p) * &h * &xk;
    }
    Ok(Series1::from_coeffs(c))
}

/// `theta prod (theta + b_j - 1) - z prod (theta + a_i)`.
pub fn gauss_operator(p: &HGParams) -> ShiftOp {
    gauss_operator_scaled(p, &Rat::one())
}

/// The operator annihilating `pFq(x z)`.
pub fn gauss_operator_scaled(p: &HGParams, x: &Rat) -> ShiftOp {
    let t = ShiftOp::theta(1, 0);
    let mut lead = t.clone();
    for b in &p.lower {
        lead = lead.mul(&ShiftOp::linear(1, &[ri(1)], b - ri(1))).unwrap();
    }
    let mut tail = ShiftOp::z(1, 0).scale(x);
    for a in &p.upper {
        tail = tail.mul(&ShiftOp::linear(1, &[ri(1)], a.clone())).unwrap();
    }
    lead.sub(&tail)
}

/// The operator satisfied by `z^s f` when `A f = 0`: every `theta` becomes `theta - s`.
pub fn shift_rule(a: &ShiftOp, s: &Rat) -> ShiftOp {
    a.shift_theta(0, &-s)
}

/// Parameters of the equation satisfied by `z^{b1 - 1} F(a; b)`.
pub fn shifted_params(p: &HGParams) -> Result<HGParams> {
    let b1 = p.lower.first().ok_or_else(|| Error::Precondition("no lower parameter".into()))?.clone();
    let d = ri(1) - &b1;
    let mut lower = vec![ri(2) - &b1];
    lower.extend(p.lower[1..].iter().map(|b| b + &d));
    Ok(HGParams { upper: p.upper.iter().map(|a| a + &d).collect(), lower })
}

/// Checks `d/dz pFq(a; b) = (prod a / prod b) pFq(a + 1; b + 1)` to `order`.
pub fn derivative_rule_check(p: &HGParams, order: usize) -> Result<bool> {
    let lhs = pfq(p, order + 1)?.derivative();
    let mut k = Rat::one();
    for a in &p.upper {
        k *= a;
    }
    for b in &p.lower {
        k /= b;
    }
    let rhs = pfq(&p.raised(), order)?.scale(&k);
    Ok(lhs.truncate(order) == rhs)
}

/// Checks the limit `F(a1, a2; b | z) / Gamma(b) -> (a1)_{n+1} (a2)_{n+1} / (n+1)! z^{n+1} F(a1+n+1, a2+n+1; n+2 | z)`
/// as `b -> -n`, coefficientwise to `order`.
///
/// On the left, `1 / ((b)_k Gamma(b)) = 1 / Gamma(b + k)`, which at `b = -n`
/// vanishes for `k <= n` and equals `1 / (k - n - 1)!` otherwise.
pub fn limit_b_to_negint_check(a1: &Rat, a2: &Rat, n: usize, order: usize) -> Result<bool> {
    let mut lhs = vec![Rat::zero(); order + 1];
    for (k, v) in lhs.iter_mut().enumerate() {
        if k > n {
            *v = pochhammer(a1, k) * pochhammer(a2, k)
                / rbig(crate::rat::factorial(k))
                / rbig(crate::rat::factorial(k - n - 1));
        }
    }
    let m = ri(n as i64 + 1);
    let inner = HGParams::new(vec![a1 + &m, a2 + &m], vec![ri(n as i64 + 2)]);
    let pref = pochhammer(a1, n + 1) * pochhammer(a2, n + 1) / rbig(crate::rat::factorial(n + 1));
    let rhs = pfq(&inner, order)?.scale(&pref).shift(n + 1);
    Ok(Series1::from_coeffs(lhs) == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rq;

    #[test]
    fn gauss_coefficients() {
        let f = pfq(&HGParams::gauss(rq(1, 6), rq(5, 6)), 2).unwrap();
        assert_eq!(f.coeff(1), &rq(5, 36));
        assert_eq!(f.coeff(2), &rq(385, 5184));
        let g = pfq_scaled(&HGParams::gauss(rq(5, 6), rq(1, 6)), &ri(432), 2).unwrap();
        assert_eq!(g, Series1::from_ints(&[1, 60, 13860]));
    }

    #[test]
    fn bad_lower_parameter() {
        assert!(pfq(&HGParams::new(vec![ri(1)], vec![ri(-2)]), 3).is_err());
    }

    #[test]
    fn log_companion_first_term() {
        let g = log_companion(&[rq(1, 2), rq(1, 2)], 3).unwrap();
        assert!(g.coeff(0).is_zero());
        assert_eq!(g.coeff(1), &rq(1, 2));
    }

    #[test]
    fn printed_gauss_operator() {
        let l = gauss_operator(&HGParams::gauss(rq(5, 6), rq(1, 6)));
        assert_eq!(l, ShiftOp::parse(1, "T1^2 - z1 (T1 + 5/6)(T1 + 1/6)").unwrap());
    }

    #[test]
    fn binomial_case() {
        let p = HGParams::new(vec![rq(2, 3)], vec![]);
        let l = gauss_operator(&p);
        let f = Series1::from_ints(&[1, -1, 0, 0, 0, 0, 0]).pow_rational(&rq(-2, 3)).unwrap();
        assert!(l.annihilates1(&f).unwrap().is_ok());
        assert_eq!(pfq(&p, 6).unwrap(), f);
    }

    #[test]
    fn limit_identity() {
        assert!(limit_b_to_negint_check(&rq(1, 2), &rq(1, 2), 0, 3).unwrap());
        assert!(limit_b_to_negint_check(&rq(1, 3), &rq(2, 3), 1, 3).unwrap());
    }
}
