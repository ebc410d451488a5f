use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{ri, Rat};

/// Truncated power series in `z1, z2`, dense up to caps `(d1, d2)` inclusive.
///
/// Binary operations truncate to the common caps. Every coefficient stored is
/// exact at the stored caps.
#[derive(Clone, PartialEq, Eq)]
pub struct Series2 {
    d1: usize,
    d2: usize,
    c: Vec<Rat>,
}

impl Series2 {
    pub fn zero(d1: usize, d2: usize) -> Self {
        Self { d1, d2, c: vec![Rat::zero(); (d1 + 1) * (d2 + 1)] }
    }

    pub fn one(d1: usize, d2: usize) -> Self {
        Self::constant(Rat::one(), d1, d2)
    }

    pub fn constant(v: Rat, d1: usize, d2: usize) -> Self {
        let mut s = Self::zero(d1, d2);
        s.c[0] = v;
        s
    }

    /// `coef * z1^i z2^j`, zero if outside the caps.
    pub fn monomial(i: usize, j: usize, coef: Rat, d1: usize, d2: usize) -> Self {
        let mut s = Self::zero(d1, d2);
        if i <= d1 && j <= d2 {
            s.set(i, j, coef);
        }
        s
    }

    /// Builds from `(i, j, c)` triples; terms beyond the caps are dropped.
    pub fn from_terms<I: IntoIterator<Item = (usize, usize, Rat)>>(d1: usize, d2: usize, terms: I) -> Self {
        let mut s = Self::zero(d1, d2);
        for (i, j, v) in terms {
            if i <= d1 && j <= d2 {
                let k = s.idx(i, j);
                s.c[k] += v;
            }
        }
        s
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.d2 + 1) + j
    }

    pub fn caps(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.c[self.idx(i, j)]
    }

    /// Like [`get`](Self::get) but `None` beyond the caps.
    pub fn coeff(&self, i: usize, j: usize) -> Option<&Rat> {
        (i <= self.d1 && j <= self.d2).then(|| self.get(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        let k = self.idx(i, j);
        self.c[k] = v;
    }

    pub fn constant_term(&self) -> &Rat {
        &self.c[0]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    /// Nonzero terms in `(i, j)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rat)> + '_ {
        (0..=self.d1)
            .flat_map(move |i| (0..=self.d2).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, self.get(i, j)))
            .filter(|(_, _, v)| !v.is_zero())
    }

    pub fn truncate(&self, d1: usize, d2: usize) -> Self {
        let (d1, d2) = (d1.min(self.d1), d2.min(self.d2));
        let mut s = Self::zero(d1, d2);
        for i in 0..=d1 {
            for j in 0..=d2 {
                s.set(i, j, self.get(i, j).clone());
            }
        }
        s
    }

    fn common(&self, o: &Self) -> (usize, usize) {
        (self.d1.min(o.d1), self.d2.min(o.d2))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self { d1: self.d1, d2: self.d2, c: self.c.iter().map(|v| v * k).collect() }
    }

    pub fn add_scaled(&self, o: &Self, k: &Rat) -> Self {
        let (d1, d2) = self.common(o);
        let mut s = self.truncate(d1, d2);
        for i in 0..=d1 {
            for j in 0..=d2 {
                let v = o.get(i, j);
                if !v.is_zero() {
                    let t = s.idx(i, j);
                    s.c[t] += v * k;
                }
            }
        }
        s
    }

    /// Product truncated to the common caps.
    pub fn mul_series(&self, o: &Self) -> Self {
        let (d1, d2) = self.common(o);
        let mut r = Self::zero(d1, d2);
        for i in 0..=d1 {
            for j in 0..=d2 {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..=(d1 - i) {
                    for l in 0..=(d2 - j) {
                        let y = o.get(k, l);
                        if !y.is_zero() {
                            let t = r.idx(i + k, j + l);
                            r.c[t] += x * y;
                        }
                    }
                }
            }
        }
        r
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.c[0].clone();
        if c0.is_zero() {
            return Err(Error::NonUnit);
        }
        let ic = c0.recip();
        let mut r = Self::zero(self.d1, self.d2);
        for i in 0..=self.d1 {
            for j in 0..=self.d2 {
                let mut s = if i == 0 && j == 0 { Rat::one() } else { Rat::zero() };
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        let a = self.get(k, l);
                        if !a.is_zero() {
                            s -= a * r.get(i - k, j - l);
                        }
                    }
                }
                r.set(i, j, s * &ic);
            }
        }
        Ok(r)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul_series(&o.inv()?))
    }

    /// `theta_axis = z_axis d/dz_axis`, axis 0 or 1.
    pub fn theta(&self, axis: usize) -> Self {
        let mut r = self.clone();
        for i in 0..=self.d1 {
            for j in 0..=self.d2 {
                let e = if axis == 0 { i } else { j };
                let t = r.idx(i, j);
                r.c[t] = &self.c[t] * ri(e as i64);
            }
        }
        r
    }

    /// Euler operator `theta1 + theta2`.
    fn theta_total(&self) -> Self {
        let mut r = self.clone();
        for i in 0..=self.d1 {
            for j in 0..=self.d2 {
                let t = r.idx(i, j);
                r.c[t] = &self.c[t] * ri((i + j) as i64);
            }
        }
        r
    }

    /// `log f` for `f(0,0) = 1`.
    pub fn log_unit(&self) -> Result<Self> {
        if !self.c[0].is_one() {
            return Err(Error::Precondition("log needs constant term 1".into()));
        }
        let g = self.theta_total().mul_series(&self.inv()?);
        let mut r = Self::zero(self.d1, self.d2);
        for i in 0..=self.d1 {
            for j in 0..=self.d2 {
                if i + j > 0 {
                    r.set(i, j, g.get(i, j) / ri((i + j) as i64));
                }
            }
        }
        Ok(r)
    }

    /// `exp g` for `g(0,0) = 0`, by the recursion `E(h) = h E(g)` in total degree.
    pub fn exp_nilconst(&self) -> Result<Self> {
        if !self.c[0].is_zero() {
            return Err(Error::Precondition("exp needs zero constant term".into()));
        }
        let tg = self.theta_total();
        let mut h = Self::zero(self.d1, self.d2);
        h.c[0] = Rat::one();
        for m in 1..=(self.d1 + self.d2) {
            for i in 0..=m.min(self.d1) {
                let j = m - i;
                if j > self.d2 {
                    continue;
                }
                let mut s = Rat::zero();
                for k in 0..=i {
                    for l in 0..=j {
                        if k + l == 0 {
                            continue;
                        }
                        let a = tg.get(k, l);
                        if !a.is_zero() {
                            s += a * h.get(i - k, j - l);
                        }
                    }
                }
                h.set(i, j, s / ri(m as i64));
            }
        }
        Ok(h)
    }

    /// `f^r` for `f(0,0) = 1`.
    pub fn pow_rational(&self, r: &Rat) -> Result<Self> {
        if !self.c[0].is_one() {
            return Err(Error::NonUnit);
        }
        self.log_unit()?.scale(r).exp_nilconst()
    }

    pub fn pow_int(&self, e: u32) -> Self {
        let mut r = Self::one(self.d1, self.d2);
        for _ in 0..e {
            r = r.mul_series(self);
        }
        r
    }

    /// Multiplies by `z1^a z2^b`, dropping terms pushed beyond the caps.
    pub fn shift(&self, a: usize, b: usize) -> Self {
        let mut r = Self::zero(self.d1, self.d2);
        for i in 0..=self.d1.saturating_sub(a) {
            for j in 0..=self.d2.saturating_sub(b) {
                if i + a <= self.d1 && j + b <= self.d2 {
                    r.set(i + a, j + b, self.get(i, j).clone());
                }
            }
        }
        r
    }

    /// Divides by `z1^a z2^b`; the result has caps reduced by `(a, b)`.
    pub fn unshift(&self, a: usize, b: usize) -> Result<Self> {
        if a > self.d1 || b > self.d2 {
            return Err(Error::TruncationLoss(format!("cannot divide by z1^{a} z2^{b} at caps {:?}", self.caps())));
        }
        for (i, j, v) in self.terms() {
            if i < a || j < b {
                return Err(Error::Precondition(format!("term {v} z1^{i} z2^{j} not divisible by z1^{a} z2^{b}")));
            }
        }
        let mut r = Self::zero(self.d1 - a, self.d2 - b);
        for i in 0..=r.d1 {
            for j in 0..=r.d2 {
                r.set(i, j, self.get(i + a, j + b).clone());
            }
        }
        Ok(r)
    }

    /// Coefficient of `z2^j` as a series in `z1`.
    pub fn slice_z2(&self, j: usize) -> Result<super::Series1> {
        if j > self.d2 {
            return Err(Error::OutOfRange(format!("z2 slice {j} beyond cap {}", self.d2)));
        }
        Ok(super::Series1::from_coeffs((0..=self.d1).map(|i| self.get(i, j).clone()).collect()))
    }

    fn is_multiple_of_var(&self, axis: usize) -> bool {
        self.terms().all(|(i, j, _)| if axis == 0 { i > 0 } else { j > 0 })
    }

    /// `f(g1, g2)`.
    ///
    /// If `g1` is divisible by `z1`, powers `x1^i` only reach `z1`-degree `i`
    /// and the result needs `c1 <= D1f`; otherwise they reach total degree `i`
    /// and the result needs `c1 + c2 <= D1f`. Likewise for `g2`. Within these
    /// bounds and the caps of `g` the caps are chosen with `c2` at most half of
    /// any total-degree budget.
    pub fn substitute(&self, g1: &Self, g2: &Self) -> Result<Self> {
        if !g1.constant_term().is_zero() || !g2.constant_term().is_zero() {
            return Err(Error::Precondition("substitution needs zero constant terms".into()));
        }
        let (gd1, gd2) = g1.common(g2);
        let (mut c1, mut c2) = (gd1, gd2);
        let mut budget = usize::MAX;
        if g1.is_multiple_of_var(0) {
            c1 = c1.min(self.d1);
        } else {
            budget = budget.min(self.d1);
        }
        if g2.is_zero() || g2.is_multiple_of_var(1) {
            c2 = c2.min(self.d2);
        } else {
            budget = budget.min(self.d2);
        }
        if budget != usize::MAX {
            c2 = c2.min(budget / 2);
            c1 = c1.min(budget - c2);
        }
        Ok(self.subst_raw(g1, Some(g2), c1, c2))
    }

    /// Horner evaluation at caps `(c1, c2)`; `g2 = None` means `f` has no `x2` dependence.
    pub(crate) fn subst_raw(&self, g1: &Self, g2: Option<&Self>, c1: usize, c2: usize) -> Self {
        let g1 = g1.truncate(c1, c2);
        let g2 = g2.map(|g| g.truncate(c1, c2));
        let mut res = Self::zero(c1, c2);
        let mut p2 = Self::one(c1, c2);
        let jmax = if g2.is_some() { self.d2 } else { 0 };
        for j in 0..=jmax {
            let mut acc = Self::zero(c1, c2);
            for i in (0..=self.d1).rev() {
                acc = acc.mul_series(&g1);
                acc.c[0] += self.get(i, j);
            }
            res = &res + &acc.mul_series(&p2);
            if let Some(g2) = &g2 {
                p2 = p2.mul_series(g2);
                if p2.is_zero() {
                    break;
                }
            }
        }
        res
    }

    pub(crate) fn is_multiple_of_z1(&self) -> bool {
        self.is_multiple_of_var(0)
    }

    /// Inverts `(z1, z2) -> (z1 u1, z2 u2)`: returns `(v1, v2)` with `z_a = q_a v_a(q)`.
    pub fn invert_map(u1: &Self, u2: &Self) -> Result<(Self, Self)> {
        if u1.constant_term().is_zero() || u2.constant_term().is_zero() {
            return Err(Error::NonUnit);
        }
        let (d1, d2) = u1.common(u2);
        let (u1, u2) = (u1.truncate(d1, d2), u2.truncate(d1, d2));
        let mut v1 = Self::constant(u1.constant_term().recip(), d1, d2);
        let mut v2 = Self::constant(u2.constant_term().recip(), d1, d2);
        for _ in 0..=(d1 + d2 + 1) {
            let g1 = v1.shift(1, 0);
            let g2 = v2.shift(0, 1);
            let n1 = u1.substitute(&g1, &g2)?.inv()?;
            let n2 = u2.substitute(&g1, &g2)?.inv()?;
            if n1 == v1 && n2 == v2 {
                break;
            }
            v1 = n1;
            v2 = n2;
        }
        Ok((v1, v2))
    }
}

impl fmt::Debug for Series2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series2{:?}[{}]", self.caps(), self)
    }
}

impl fmt::Display for Series2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, v) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{v}")?;
            if i > 0 {
                write!(f, "*z1^{i}")?;
            }
            if j > 0 {
                write!(f, "*z2^{j}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &Series2 {
    type Output = Series2;
    fn add(self, o: &Series2) -> Series2 {
        self.add_scaled(o, &Rat::one())
    }
}

impl Sub for &Series2 {
    type Output = Series2;
    fn sub(self, o: &Series2) -> Series2 {
        self.add_scaled(o, &-Rat::one())
    }
}

impl Mul for &Series2 {
    type Output = Series2;
    fn mul(self, o: &Series2) -> Series2 {
        self.mul_series(o)
    }
}

impl Neg for &Series2 {
    type Output = Series2;
    fn neg(self) -> Series2 {
        self.scale(&-Rat::one())
    }
}

impl Mul<&Rat> for &Series2 {
    type Output = Series2;
    fn mul(self, k: &Rat) -> Series2 {
        self.scale(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rq;

    fn s(d1: usize, d2: usize, t: &[(usize, usize, i64)]) -> Series2 {
        Series2::from_terms(d1, d2, t.iter().map(|&(i, j, v)| (i, j, ri(v))))
    }

    #[test]
    fn difference_of_squares() {
        let a = s(3, 0, &[(0, 0, 1), (1, 0, 1)]);
        let b = s(3, 0, &[(0, 0, 1), (1, 0, -1)]);
        assert_eq!(&a * &b, s(3, 0, &[(0, 0, 1), (2, 0, -1)]));
    }

    #[test]
    fn square_matches_schoolbook() {
        let a = s(4, 1, &[(0, 0, 1), (1, 0, 60)]);
        assert_eq!(&a * &a, s(4, 1, &[(0, 0, 1), (1, 0, 120), (2, 0, 3600)]));
    }

    #[test]
    fn division_by_non_unit_fails() {
        let a = s(3, 1, &[(1, 0, 1)]);
        assert_eq!(a.inv(), Err(Error::NonUnit));
    }

    #[test]
    fn caps_truncate_to_common() {
        let a = s(5, 2, &[(0, 0, 1), (5, 2, 1)]);
        let b = s(3, 3, &[(0, 0, 1)]);
        assert_eq!((&a + &b).caps(), (3, 2));
    }

    #[test]
    fn sqrt_binomial() {
        let f = s(3, 0, &[(0, 0, 1), (1, 0, -432)]);
        let g = f.pow_rational(&rq(1, 2)).unwrap();
        assert_eq!(g.get(1, 0), &ri(-216));
        assert_eq!(g.get(2, 0), &ri(-23328));
    }

    #[test]
    fn mercator() {
        let f = s(3, 0, &[(0, 0, 1), (1, 0, 1)]);
        let l = f.log_unit().unwrap();
        assert_eq!(l, Series2::from_terms(3, 0, vec![(1, 0, ri(1)), (2, 0, rq(-1, 2)), (3, 0, rq(1, 3))]));
    }

    #[test]
    fn substitute_examples() {
        let g = s(3, 3, &[(1, 0, 1), (0, 1, 1)]);
        let f = s(4, 4, &[(2, 0, 1)]);
        let r = f.substitute(&g, &Series2::zero(3, 3)).unwrap();
        assert_eq!(r.caps(), (2, 2));
        assert_eq!(r.get(2, 0), &ri(1));
        assert_eq!(r.get(1, 1), &ri(2));
        assert_eq!(r.get(0, 2), &ri(1));
    }

    #[test]
    fn lagrange_inversion() {
        // q = z(1+z): z = q - q^2 + 2q^3 - 5q^4 + 14q^5 (Catalan numbers, alternating)
        let u1 = s(6, 0, &[(0, 0, 1), (1, 0, 1)]);
        let u2 = Series2::one(6, 0);
        let (v1, v2) = Series2::invert_map(&u1, &u2).unwrap();
        let want = [1, -1, 2, -5, 14, -42, 132];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(v1.get(k, 0), &ri(*w));
        }
        assert_eq!(v2, Series2::one(6, 0));
    }

    #[test]
    fn unshift_checks_divisibility() {
        let a = s(3, 2, &[(1, 1, 3)]);
        assert_eq!(a.unshift(0, 1).unwrap().get(1, 0), &ri(3));
        assert!(s(3, 2, &[(1, 0, 3)]).unshift(0, 1).is_err());
    }
}
