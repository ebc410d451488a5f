use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::Series2;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Truncated power series in one variable, exact up to `z^cap`.
#[derive(Clone, PartialEq, Eq)]
pub struct Series1(Series2);

impl Series1 {
    pub fn zero(cap: usize) -> Self {
        Self(Series2::zero(cap, 0))
    }

    pub fn one(cap: usize) -> Self {
        Self(Series2::one(cap, 0))
    }

    pub fn constant(v: Rat, cap: usize) -> Self {
        Self(Series2::constant(v, cap, 0))
    }

    pub fn var(cap: usize) -> Self {
        Self(Series2::monomial(1, 0, Rat::from_integer(1.into()), cap, 0))
    }

    pub fn from_coeffs(c: Vec<Rat>) -> Self {
        assert!(!c.is_empty(), "series needs at least one coefficient");
        let cap = c.len() - 1;
        Self(Series2::from_terms(cap, 0, c.into_iter().enumerate().map(|(i, v)| (i, 0, v))))
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| crate::rat::ri(v)).collect())
    }

    pub fn cap(&self) -> usize {
        self.0.caps().0
    }

    pub fn coeff(&self, k: usize) -> &Rat {
        self.0.get(k, 0)
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        (0..=self.cap()).map(|k| self.coeff(k).clone()).collect()
    }

    pub fn set(&mut self, k: usize, v: Rat) {
        self.0.set(k, 0, v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        (0..=self.cap()).find(|&k| !self.coeff(k).is_zero())
    }

    pub fn truncate(&self, cap: usize) -> Self {
        Self(self.0.truncate(cap, 0))
    }

    /// As a two-variable series independent of `z2`.
    pub fn as_series2(&self) -> &Series2 {
        &self.0
    }

    /// Embeds into `Series2` with caps `(cap, d2)`.
    pub fn lift(&self, d2: usize) -> Series2 {
        Series2::from_terms(self.cap(), d2, (0..=self.cap()).map(|k| (k, 0, self.coeff(k).clone())))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self(self.0.scale(k))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self(self.0.inv()?))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(Self(self.0.div(&o.0)?))
    }

    pub fn theta(&self) -> Self {
        Self(self.0.theta(0))
    }

    /// Ordinary derivative `d/dz`, exact to `cap - 1`.
    pub fn derivative(&self) -> Self {
        let cap = self.cap();
        Self::from_coeffs(
            (0..cap.max(1))
                .map(|k| if k < cap { self.coeff(k + 1) * Rat::from_integer((k as i64 + 1).into()) } else { Rat::zero() })
                .collect(),
        )
    }

    pub fn log_unit(&self) -> Result<Self> {
        Ok(Self(self.0.log_unit()?))
    }

    pub fn exp_nilconst(&self) -> Result<Self> {
        Ok(Self(self.0.exp_nilconst()?))
    }

    pub fn pow_rational(&self, r: &Rat) -> Result<Self> {
        Ok(Self(self.0.pow_rational(r)?))
    }

    pub fn pow_int(&self, e: u32) -> Self {
        Self(self.0.pow_int(e))
    }

    /// Multiplies by `z^a`, dropping terms beyond the cap.
    pub fn shift(&self, a: usize) -> Self {
        Self(self.0.shift(a, 0))
    }

    /// Compositional inverse of `c1 z + c2 z^2 + ...`, `c1 != 0`, to the same cap.
    pub fn invert(&self) -> Result<Self> {
        let n = self.cap();
        if n == 0 || !self.coeff(0).is_zero() || self.coeff(1).is_zero() {
            return Err(Error::NonUnit);
        }
        let u = self.unshift(1)?;
        let mut c = vec![Rat::zero(); n + 1];
        c[1] = self.coeff(1).recip();
        let mut z = Self::from_coeffs(c);
        // z = q / u(z), one order per step
        for _ in 0..n {
            let w = u.compose1(&z.truncate(n - 1))?.inv()?;
            let mut c = w.coeffs();
            c.insert(0, Rat::zero());
            z = Self::from_coeffs(c);
        }
        Ok(z)
    }

    /// Divides by `z^a`, lowering the cap by `a`.
    pub fn unshift(&self, a: usize) -> Result<Self> {
        Ok(Self(self.0.unshift(a, 0)?))
    }

    /// `f(g)` for a two-variable `g` with zero constant term.
    ///
    /// Exact to `(min(cap, D1g), D2g)` when `g` is divisible by `z1`; otherwise to
    /// `(c1, min(D2g, cap - c1))` with `c1 = min(cap, D1g)`.
    pub fn compose(&self, g: &Series2) -> Result<Series2> {
        Series2::from_terms(self.cap(), 0, (0..=self.cap()).map(|k| (k, 0, self.coeff(k).clone())))
            .substitute_univariate(g)
    }

    /// `f(g)` for univariate `g` with zero constant term, exact to `min(cap, cap_g)`.
    pub fn compose1(&self, g: &Series1) -> Result<Series1> {
        let r = self.compose(&g.0)?;
        Ok(Self(r))
    }
}

impl Series2 {
    pub(crate) fn substitute_univariate(&self, g: &Series2) -> Result<Series2> {
        if !g.constant_term().is_zero() {
            return Err(crate::error::Error::Precondition("substitution needs zero constant term".into()));
        }
        let cap = self.caps().0;
        let (gd1, gd2) = g.caps();
        let c1 = gd1.min(cap);
        let c2 = if g.is_multiple_of_z1() { gd2 } else { gd2.min(cap - c1) };
        Ok(self.subst_raw(g, None, c1, c2))
    }
}

impl fmt::Debug for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series1(cap {})[{}]", self.cap(), self)
    }
}

impl fmt::Display for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in 0..=self.cap() {
            let v = self.coeff(k);
            if v.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{v}")?,
                1 => write!(f, "{v}*z")?,
                _ => write!(f, "{v}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.cap() + 1)
    }
}

impl Add for &Series1 {
    type Output = Series1;
    fn add(self, o: &Series1) -> Series1 {
        Series1(&self.0 + &o.0)
    }
}

impl Sub for &Series1 {
    type Output = Series1;
    fn sub(self, o: &Series1) -> Series1 {
        Series1(&self.0 - &o.0)
    }
}

impl Mul for &Series1 {
    type Output = Series1;
    fn mul(self, o: &Series1) -> Series1 {
        Series1(&self.0 * &o.0)
    }
}

impl Neg for &Series1 {
    type Output = Series1;
    fn neg(self) -> Series1 {
        Series1(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{ri, rq};

    #[test]
    fn cube_of_cube_root() {
        let f = Series1::from_ints(&[1, -1, 0, 0, 0, 0]);
        let g = f.pow_rational(&rq(1, 3)).unwrap();
        assert_eq!(g.pow_int(3), f);
    }

    #[test]
    fn compose_with_sum_of_vars() {
        let f = Series1::from_ints(&[1, 1, 0]);
        let g = Series2::from_terms(1, 1, vec![(1, 0, ri(1)), (0, 1, ri(1))]);
        let r = f.compose(&g).unwrap();
        assert_eq!(r, Series2::from_terms(1, 1, vec![(0, 0, ri(1)), (1, 0, ri(1)), (0, 1, ri(1))]));
    }

    #[test]
    fn derivative_drops_one_order() {
        let f = Series1::from_ints(&[5, 1, 3]);
        assert_eq!(f.derivative(), Series1::from_ints(&[1, 6]));
    }
}
