use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, ri, Rat};
use crate::series::Series2;

/// Polynomial in `z1, z2` over `Q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2(BTreeMap<(u32, u32), Rat>);

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(i: u32, j: u32, c: Rat) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((i, j), c);
        }
        Self(m)
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `sum_k c[k] z1^k`.
    pub fn in_z1(c: &[i64]) -> Self {
        let mut p = Self::zero();
        for (k, &v) in c.iter().enumerate() {
            p = p.add(&Self::monomial(k as u32, 0, ri(v)));
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.0.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.0.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, v) in &o.0 {
            let e = m.entry(*k).or_insert_with(Rat::zero);
            *e += v;
            if e.is_zero() {
                m.remove(k);
            }
        }
        Self(m)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self(self.0.iter().map(|(e, v)| (*e, v * k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for ((a, b), x) in &self.0 {
            for ((c, d), y) in &o.0 {
                r = r.add(&Self::monomial(a + c, b + d, x * y));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    /// Largest monomial `z1^a z2^b` dividing every term.
    pub fn monomial_content(&self) -> (u32, u32) {
        let a = self.0.keys().map(|k| k.0).min().unwrap_or(0);
        let b = self.0.keys().map(|k| k.1).min().unwrap_or(0);
        (a, b)
    }

    /// Divides by `z1^a z2^b`; fails unless exact.
    pub fn div_monomial(&self, a: u32, b: u32) -> Result<Self> {
        let mut m = BTreeMap::new();
        for ((i, j), v) in &self.0 {
            if *i < a || *j < b {
                return Err(Error::Precondition(format!("z1^{a} z2^{b} does not divide the polynomial")));
            }
            m.insert((i - a, j - b), v.clone());
        }
        Ok(Self(m))
    }

    pub fn to_series(&self, d1: usize, d2: usize) -> Series2 {
        Series2::from_terms(
            d1,
            d2,
            self.0.iter().filter(|((i, j), _)| (*i as usize) <= d1 && (*j as usize) <= d2).map(|((i, j), v)| (*i as usize, *j as usize, v.clone())),
        )
    }

    /// Exact polynomial from a series whose terms all lie inside the caps.
    pub fn from_series(s: &Series2) -> Self {
        let mut p = Self::zero();
        for (i, j, v) in s.terms() {
            p = p.add(&Self::monomial(i as u32, j as u32, v.clone()));
        }
        p
    }

    pub fn total_degree(&self) -> u32 {
        self.0.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, ((i, j), v)) in self.0.iter().enumerate() {
            let neg = v < &Rat::zero();
            let a = if neg { -v.clone() } else { v.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            if !a.is_one() || (*i == 0 && *j == 0) {
                parts.push(fmt_rat(&a));
            }
            for (name, e) in [("z1", i), ("z2", j)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// `num / den` in `Q(z1, z2)`, with the monomial content shared by both sides cancelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn2 {
    num: Poly2,
    den: Poly2,
}

impl RationalFn2 {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        let (a, b) = num.monomial_content();
        let (c, d) = den.monomial_content();
        let (m1, m2) = (a.min(c), b.min(d));
        let num = if num.is_zero() { num } else { num.div_monomial(m1, m2)? };
        let den = den.div_monomial(m1, m2)?;
        Ok(Self { num, den })
    }

    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    /// `z1^a z2^b * self` as a power series; fails when a pole remains.
    pub fn times_monomial_series(&self, a: u32, b: u32, d1: usize, d2: usize) -> Result<Series2> {
        let (c, d) = self.den.monomial_content();
        let unit = self.den.div_monomial(c, d)?;
        if unit.coeff(0, 0).is_zero() {
            return Err(Error::NonUnit);
        }
        let lifted = self.num.mul(&Poly2::monomial(a, b, Rat::one()));
        let num = lifted.div_monomial(c, d).map_err(|_| {
            Error::Precondition(format!("z1^{a} z2^{b} does not cancel the pole z1^{c} z2^{d}"))
        })?;
        num.to_series(d1, d2).div(&unit.to_series(d1, d2))
    }

    /// The series of `self` when it has no pole at the origin.
    pub fn to_series(&self, d1: usize, d2: usize) -> Result<Series2> {
        self.times_monomial_series(0, 0, d1, d2)
    }

    /// Adds `c z1^i z2^j` to the numerator.
    pub fn perturb_numerator(&self, i: u32, j: u32, c: Rat) -> Self {
        Self { num: self.num.add(&Poly2::monomial(i, j, c)), den: self.den.clone() }
    }
}

impl fmt::Display for RationalFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        // 1 / (z1 (1 - z1)) times z1
        let r = RationalFn2::new(Poly2::constant(ri(1)), Poly2::in_z1(&[0, 1, -1])).unwrap();
        let s = r.times_monomial_series(1, 0, 4, 0).unwrap();
        assert_eq!(s, Series2::from_terms(4, 0, (0..=4).map(|k| (k, 0, ri(1)))));
        assert!(r.to_series(4, 0).is_err());
    }

    #[test]
    fn content_cancels() {
        let r = RationalFn2::new(Poly2::monomial(2, 1, ri(3)), Poly2::monomial(1, 1, ri(1)).mul(&Poly2::in_z1(&[1, 1]))).unwrap();
        assert_eq!(r.numerator(), &Poly2::monomial(1, 0, ri(3)));
        assert_eq!(r.to_string(), "(3*z1) / (1 + z1)");
    }
}
