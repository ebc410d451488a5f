use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Series1;
use crate::error::{Error, Result};
use crate::rat::{ri, rq, Rat};

/// Modular weight tag. Metadata only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weight {
    Definite(i32),
    Mixed,
}

impl Weight {
    fn add(self, o: Weight) -> Weight {
        match (self, o) {
            (Weight::Definite(a), Weight::Definite(b)) => Weight::Definite(a + b),
            _ => Weight::Mixed,
        }
    }

    fn join(self, o: Weight) -> Weight {
        if self == o {
            self
        } else {
            Weight::Mixed
        }
    }
}

/// Laurent series in `q^(1/b)`, `b` in `{1, 2}`.
///
/// Coefficients are stored for numerators `min_exp..=cap`; the series is known
/// exactly up to and including `q^(cap/b)`.
#[derive(Clone, PartialEq, Eq)]
pub struct QExp {
    pub weight: Weight,
    base_den: u32,
    min_exp: i64,
    cap: i64,
    c: Vec<Rat>,
}

impl QExp {
    pub fn new(weight: Weight, base_den: u32, min_exp: i64, c: Vec<Rat>) -> Result<Self> {
        if base_den != 1 && base_den != 2 {
            return Err(Error::Precondition(format!("base denominator {base_den} not in {{1,2}}")));
        }
        if c.is_empty() {
            return Err(Error::Precondition("empty q-expansion".into()));
        }
        let cap = min_exp + c.len() as i64 - 1;
        Ok(Self { weight, base_den, min_exp, cap, c })
    }

    /// Power series `sum c_k q^k` from a univariate series.
    pub fn from_series(s: &Series1, weight: Weight) -> Self {
        Self { weight, base_den: 1, min_exp: 0, cap: s.cap() as i64, c: s.coeffs() }
    }

    pub fn from_ints(c: &[i64], weight: Weight) -> Self {
        Self::from_series(&Series1::from_ints(c), weight)
    }

    pub fn base_den(&self) -> u32 {
        self.base_den
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    /// Coefficient of `q^(e/base_den)`; zero below `min_exp`, `None` beyond the cap.
    pub fn coeff(&self, e: i64) -> Option<Rat> {
        if e > self.cap {
            None
        } else if e < self.min_exp {
            Some(Rat::zero())
        } else {
            Some(self.c[(e - self.min_exp) as usize].clone())
        }
    }

    /// Coefficient of `q^x` for rational `x`.
    pub fn coeff_at(&self, x: &Rat) -> Option<Rat> {
        let e = x * ri(self.base_den as i64);
        if !e.denom().is_one() {
            return Some(Rat::zero());
        }
        self.coeff(crate::rat::to_i64(&e)?)
    }

    /// `(exponent, coefficient)` for nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (Rat, &Rat)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (rq(self.min_exp + k as i64, self.base_den as i64), v))
    }

    /// Re-expresses with base denominator 2.
    pub fn with_base_den(&self, b: u32) -> Result<Self> {
        if b == self.base_den {
            return Ok(self.clone());
        }
        if !(self.base_den == 1 && b == 2) {
            return Err(Error::Unsupported(format!("base change {} -> {b}", self.base_den)));
        }
        let mut c = vec![Rat::zero(); 2 * self.c.len() - 1];
        for (k, v) in self.c.iter().enumerate() {
            c[2 * k] = v.clone();
        }
        Ok(Self { weight: self.weight, base_den: 2, min_exp: 2 * self.min_exp, cap: 2 * self.cap, c })
    }

    /// Drops leading zeros and, when possible, returns to base denominator 1.
    pub fn normalize(&self) -> Self {
        let lead = self.c.iter().position(|v| !v.is_zero());
        let mut r = match lead {
            Some(k) if k > 0 => Self {
                weight: self.weight,
                base_den: self.base_den,
                min_exp: self.min_exp + k as i64,
                cap: self.cap,
                c: self.c[k..].to_vec(),
            },
            _ => self.clone(),
        };
        if r.base_den == 2 {
            let odd = r.c.iter().enumerate().any(|(k, v)| (r.min_exp + k as i64) % 2 != 0 && !v.is_zero());
            if !odd {
                let start = if r.min_exp % 2 == 0 { 0 } else { 1 };
                let c: Vec<Rat> = r.c.iter().skip(start).step_by(2).cloned().collect();
                let min_exp = (r.min_exp + start as i64) / 2;
                let cap = r.cap.div_euclid(2);
                if !c.is_empty() {
                    let c: Vec<Rat> = c.into_iter().take((cap - min_exp + 1).max(1) as usize).collect();
                    r = Self { weight: r.weight, base_den: 1, min_exp, cap, c };
                }
            }
        }
        r
    }

    fn aligned(&self, o: &Self) -> Result<(Self, Self)> {
        let b = self.base_den.max(o.base_den);
        Ok((self.with_base_den(b)?, o.with_base_den(b)?))
    }

    fn rebuild(weight: Weight, base_den: u32, min_exp: i64, cap: i64, f: impl Fn(i64) -> Rat) -> Self {
        let c = (min_exp..=cap).map(f).collect();
        Self { weight, base_den, min_exp, cap, c }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let (a, b) = self.aligned(o)?;
        let lo = a.min_exp.min(b.min_exp);
        let cap = a.cap.min(b.cap);
        Ok(Self::rebuild(a.weight.join(b.weight), a.base_den, lo, cap.max(lo), |e| {
            a.coeff(e).unwrap_or_else(Rat::zero) + b.coeff(e).unwrap_or_else(Rat::zero)
        }))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self { c: self.c.iter().map(|v| v * k).collect(), ..self.clone() }
    }

    /// Product; exact to `min(cap_a + min_b, cap_b + min_a)`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let (a, b) = self.aligned(o)?;
        let lo = a.min_exp + b.min_exp;
        let cap = (a.cap + b.min_exp).min(b.cap + a.min_exp);
        let mut c = vec![Rat::zero(); (cap - lo + 1).max(1) as usize];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                let e = lo + (i + j) as i64;
                if e > cap {
                    break;
                }
                if !y.is_zero() {
                    c[(e - lo) as usize] += x * y;
                }
            }
        }
        Ok(Self { weight: a.weight.add(b.weight), base_den: a.base_den, min_exp: lo, cap, c })
    }

    /// Inverse of a series with a nonzero leading coefficient.
    pub fn inv(&self) -> Result<Self> {
        let s = self.normalize();
        if s.c[0].is_zero() {
            return Err(Error::NonUnit);
        }
        let n = (s.cap - s.min_exp) as usize;
        let ic = s.c[0].recip();
        let mut r = vec![Rat::zero(); n + 1];
        r[0] = ic.clone();
        for k in 1..=n {
            let mut acc = Rat::zero();
            for j in 1..=k {
                acc -= &s.c[j] * &r[k - j];
            }
            r[k] = acc * &ic;
        }
        let weight = match s.weight {
            Weight::Definite(w) => Weight::Definite(-w),
            Weight::Mixed => Weight::Mixed,
        };
        Ok(Self { weight, base_den: s.base_den, min_exp: -s.min_exp, cap: n as i64 - s.min_exp, c: r })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut r = Self { weight: Weight::Definite(0), base_den: self.base_den, min_exp: 0, cap: self.cap - self.min_exp, c: vec![Rat::one()] };
        r.c.resize((r.cap + 1) as usize, Rat::zero());
        for _ in 0..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    /// Multiplies by `q^(e/base_den)`.
    pub fn shift(&self, e: i64) -> Self {
        Self { min_exp: self.min_exp + e, cap: self.cap + e, ..self.clone() }
    }

    /// `q d/dq`. Raises the weight by 2.
    pub fn theta(&self) -> Self {
        let weight = match self.weight {
            Weight::Definite(w) => Weight::Definite(w + 2),
            Weight::Mixed => Weight::Mixed,
        };
        Self {
            weight,
            c: self.c.iter().enumerate().map(|(k, v)| v * rq(self.min_exp + k as i64, self.base_den as i64)).collect(),
            ..self.clone()
        }
    }

    pub fn truncate(&self, cap: i64) -> Self {
        let cap = cap.min(self.cap).max(self.min_exp);
        Self { cap, c: self.c[..=(cap - self.min_exp) as usize].to_vec(), ..self.clone() }
    }

    pub fn with_weight(mut self, w: Weight) -> Self {
        self.weight = w;
        self
    }

    /// The power-series part as `Series1` when `min_exp >= 0` and `base_den = 1`.
    pub fn to_series(&self) -> Result<Series1> {
        let s = self.normalize();
        if s.base_den != 1 || s.min_exp < 0 {
            return Err(Error::Precondition("not an ordinary power series".into()));
        }
        let mut c = vec![Rat::zero(); (s.cap + 1) as usize];
        for (k, v) in s.c.iter().enumerate() {
            c[s.min_exp as usize + k] = v.clone();
        }
        Ok(Series1::from_coeffs(c))
    }

    /// Structural equality on the common range of validity.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let Ok((a, b)) = self.aligned(o) else { return false };
        let lo = a.min_exp.min(b.min_exp);
        let hi = a.cap.min(b.cap);
        (lo..=hi).all(|e| a.coeff(e) == b.coeff(e))
    }
}

impl fmt::Debug for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QExp({:?})[{}]", self.weight, self)
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, v) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if x.is_zero() {
                write!(f, "{v}")?;
            } else if x.is_one() {
                write!(f, "{v}*q")?;
            } else {
                write!(f, "{v}*q^({x})")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^({}))", rq(self.cap + 1, self.base_den as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_inverse() {
        let q = QExp::new(Weight::Definite(0), 1, 1, vec![ri(1), ri(-24), ri(252), ri(-1472)]).unwrap();
        let iq = q.inv().unwrap();
        assert_eq!(iq.min_exp(), -1);
        let one = q.mul(&iq).unwrap();
        assert_eq!(one.coeff(0), Some(ri(1)));
        assert_eq!(one.coeff(1), Some(ri(0)));
        assert_eq!(one.coeff(2), Some(ri(0)));
    }

    #[test]
    fn half_integer_alignment() {
        let a = QExp::from_ints(&[1, 1, 1], Weight::Definite(0));
        let b = QExp::new(Weight::Definite(0), 2, 1, vec![ri(1), ri(0), ri(0), ri(0)]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.base_den(), 2);
        assert_eq!(s.coeff_at(&rq(1, 2)), Some(ri(1)));
        assert_eq!(s.coeff_at(&ri(1)), Some(ri(1)));
        assert_eq!(s.coeff_at(&rq(3, 2)), Some(ri(0)));
    }

    #[test]
    fn normalize_restores_integral() {
        let a = QExp::from_ints(&[3, 0, 5], Weight::Definite(4));
        let b = a.with_base_den(2).unwrap().normalize();
        assert_eq!(a, b);
    }
}
