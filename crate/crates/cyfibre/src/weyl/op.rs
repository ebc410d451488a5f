use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{ri, Rat};
use crate::series::{LogSeries, Series1, Series2};

/// Exponent pair `(alpha, beta)` of a normal-form monomial `z^alpha theta^beta`.
pub type Mono = (Vec<u32>, Vec<u32>);

/// Element of the shift algebra `Q[z, theta]` with `theta_i z_i = z_i (theta_i + 1)`,
/// stored in normal form (every `z` left of every `theta`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ShiftOp {
    h: usize,
    terms: BTreeMap<Mono, Rat>,
}

fn binom(n: u32, k: u32) -> Rat {
    let mut r = Rat::one();
    for j in 0..k {
        r = r * ri((n - j) as i64) / ri((j + 1) as i64);
    }
    r
}

impl ShiftOp {
    pub fn zero(h: usize) -> Self {
        Self { h, terms: BTreeMap::new() }
    }

    pub fn constant(h: usize, c: Rat) -> Self {
        Self::monomial(h, vec![0; h], vec![0; h], c)
    }

    pub fn one(h: usize) -> Self {
        Self::constant(h, Rat::one())
    }

    pub fn monomial(h: usize, alpha: Vec<u32>, beta: Vec<u32>, c: Rat) -> Self {
        assert!(alpha.len() == h && beta.len() == h, "exponent length must equal variable count");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((alpha, beta), c);
        }
        Self { h, terms }
    }

    /// `z_i` (0-based).
    pub fn z(h: usize, i: usize) -> Self {
        let mut a = vec![0; h];
        a[i] = 1;
        Self::monomial(h, a, vec![0; h], Rat::one())
    }

    /// `theta_i` (0-based).
    pub fn theta(h: usize, i: usize) -> Self {
        let mut b = vec![0; h];
        b[i] = 1;
        Self::monomial(h, vec![0; h], b, Rat::one())
    }

    /// `sum_i coeffs[i] theta_i + c`.
    pub fn linear(h: usize, coeffs: &[Rat], c: Rat) -> Self {
        let mut r = Self::constant(h, c);
        for (i, k) in coeffs.iter().enumerate() {
            r = r.add(&Self::theta(h, i).scale(k));
        }
        r
    }

    pub fn nvars(&self) -> usize {
        self.h
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &[u32], beta: &[u32]) -> Rat {
        self.terms.get(&(alpha.to_vec(), beta.to_vec())).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        let key = m.clone();
        let e = self.terms.entry(m).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.h, o.h, "variable count mismatch");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.insert_add(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero(self.h);
        }
        Self { h: self.h, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    /// Normal form of `self * o`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.h != o.h {
            return Err(Error::VarMismatch(self.h, o.h));
        }
        let mut r = Self::zero(self.h);
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &o.terms {
                // theta^b z^c = z^c (theta + c)^b
                let mut partial: Vec<(Vec<u32>, Rat)> = vec![(d.clone(), x * y)];
                for i in 0..self.h {
                    let mut next = Vec::new();
                    for (beta, coef) in &partial {
                        for k in 0..=b[i] {
                            let shift = ri(c[i] as i64);
                            let co = binom(b[i], k) * num_traits::pow(shift, (b[i] - k) as usize);
                            if co.is_zero() {
                                continue;
                            }
                            let mut nb = beta.clone();
                            nb[i] += k;
                            next.push((nb, coef * &co));
                        }
                    }
                    partial = next;
                }
                let alpha: Vec<u32> = a.iter().zip(c).map(|(p, q)| p + q).collect();
                for (beta, coef) in partial {
                    r.insert_add((alpha.clone(), beta), coef);
                }
            }
        }
        Ok(r)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.h), |acc, _| acc.mul(self).expect("same h"))
    }

    /// Product of many operators, left to right.
    pub fn product(h: usize, ops: &[ShiftOp]) -> Result<Self> {
        ops.iter().try_fold(Self::one(h), |acc, o| acc.mul(o))
    }

    /// Largest total `theta` degree.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(_, b)| b.iter().sum()).max().unwrap_or(0)
    }

    /// Largest exponent of `z_axis`.
    pub fn z_degree(&self, axis: usize) -> u32 {
        self.terms.keys().map(|(a, _)| a[axis]).max().unwrap_or(0)
    }

    /// Keeps the terms free of both `z_k` and `theta_k`.
    pub fn restrict(&self, k: usize) -> Self {
        Self {
            h: self.h,
            terms: self.terms.iter().filter(|((a, b), _)| a[k] == 0 && b[k] == 0).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Restricts every variable except `keep` and returns the one-variable operator in `z_keep`.
    pub fn limit_in(&self, keep: usize) -> Self {
        let mut r = self.clone();
        for k in 0..self.h {
            if k != keep {
                r = r.restrict(k);
            }
        }
        r.project(keep)
    }

    /// One-variable operator from the `keep` exponents; other exponents must vanish.
    pub fn project(&self, keep: usize) -> Self {
        let mut r = Self::zero(1);
        for ((a, b), c) in &self.terms {
            debug_assert!((0..self.h).all(|k| k == keep || (a[k] == 0 && b[k] == 0)));
            r.insert_add((vec![a[keep]], vec![b[keep]]), c.clone());
        }
        r
    }

    /// Formal derivative of the normal form with respect to `theta_axis`.
    pub fn d_theta(&self, axis: usize) -> Self {
        let mut r = Self::zero(self.h);
        for ((a, b), c) in &self.terms {
            if b[axis] > 0 {
                let mut nb = b.clone();
                nb[axis] -= 1;
                r.insert_add((a.clone(), nb), c * ri(b[axis] as i64));
            }
        }
        r
    }

    /// Replaces `theta_axis` by `theta_axis + s` in the normal form.
    pub fn shift_theta(&self, axis: usize, s: &Rat) -> Self {
        let mut r = Self::zero(self.h);
        for ((a, b), c) in &self.terms {
            for k in 0..=b[axis] {
                let co = binom(b[axis], k) * num_traits::pow(s.clone(), (b[axis] - k) as usize);
                let mut nb = b.clone();
                nb[axis] = k;
                r.insert_add((a.clone(), nb), c * co);
            }
        }
        r
    }

    /// Divides by the leading coefficient so that equality up to scale is plain equality.
    pub fn monic(&self) -> Self {
        match self.terms.iter().next_back() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn equal_up_to_scale(&self, o: &Self) -> bool {
        self.h == o.h && self.monic() == o.monic()
    }

    /// `z`-shift groups: `alpha -> polynomial in theta` as `beta -> c`.
    pub fn by_shift(&self) -> BTreeMap<Vec<u32>, Vec<(Vec<u32>, Rat)>> {
        let mut g: BTreeMap<Vec<u32>, Vec<(Vec<u32>, Rat)>> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            g.entry(a.clone()).or_default().push((b.clone(), c.clone()));
        }
        g
    }

    /// Evaluates a theta-polynomial `sum c theta^beta` at `theta = point`.
    pub fn eval_poly(poly: &[(Vec<u32>, Rat)], point: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (b, c) in poly {
            let mut t = c.clone();
            for (e, p) in b.iter().zip(point) {
                if *e > 0 {
                    t *= num_traits::pow(p.clone(), *e as usize);
                }
            }
            s += t;
        }
        s
    }

    fn check_caps(&self, caps: &[usize]) -> Result<()> {
        for (i, &c) in caps.iter().enumerate() {
            if self.z_degree(i) as usize > c {
                return Err(Error::TruncationLoss(format!("operator z{}-degree {} exceeds cap {c}", i + 1, self.z_degree(i))));
            }
        }
        Ok(())
    }

    /// Action on a two-variable series.
    pub fn apply_series2(&self, f: &Series2) -> Result<Series2> {
        if self.h != 2 {
            return Err(Error::VarMismatch(self.h, 2));
        }
        let (d1, d2) = f.caps();
        self.check_caps(&[d1, d2])?;
        let groups = self.by_shift();
        let mut r = Series2::zero(d1, d2);
        for i in 0..=d1 {
            for j in 0..=d2 {
                let mut s = Rat::zero();
                for (a, poly) in &groups {
                    let (a1, a2) = (a[0] as usize, a[1] as usize);
                    if a1 > i || a2 > j {
                        continue;
                    }
                    let v = f.get(i - a1, j - a2);
                    if v.is_zero() {
                        continue;
                    }
                    s += Self::eval_poly(poly, &[ri((i - a1) as i64), ri((j - a2) as i64)]) * v;
                }
                r.set(i, j, s);
            }
        }
        Ok(r)
    }

    /// Action on a one-variable series (operator with `h = 1`).
    pub fn apply_series1(&self, f: &Series1) -> Result<Series1> {
        if self.h != 1 {
            return Err(Error::VarMismatch(self.h, 1));
        }
        self.check_caps(&[f.cap()])?;
        let groups = self.by_shift();
        let mut out = vec![Rat::zero(); f.cap() + 1];
        for (i, o) in out.iter_mut().enumerate() {
            for (a, poly) in &groups {
                let a = a[0] as usize;
                if a > i || f.coeff(i - a).is_zero() {
                    continue;
                }
                *o += Self::eval_poly(poly, &[ri((i - a) as i64)]) * f.coeff(i - a);
            }
        }
        Ok(Series1::from_coeffs(out))
    }

    /// Action on a log series.
    pub fn apply(&self, f: &LogSeries) -> Result<LogSeries> {
        if self.h != 2 {
            return Err(Error::VarMismatch(self.h, 2));
        }
        let (d1, d2) = f.caps();
        self.check_caps(&[d1, d2])?;
        let mut cache: BTreeMap<Vec<u32>, LogSeries> = BTreeMap::new();
        let mut r = LogSeries::zero(d1, d2);
        for ((a, b), c) in &self.terms {
            if !cache.contains_key(b) {
                let t = f.theta_pow(0, b[0]).theta_pow(1, b[1]);
                cache.insert(b.clone(), t);
            }
            let t = cache[b].shift(a[0] as usize, a[1] as usize).scale(c);
            r = r.add(&t);
        }
        Ok(r)
    }

    /// Checks `A f = 0`; on failure returns the first nonzero residual.
    pub fn annihilates(&self, f: &LogSeries) -> Result<std::result::Result<(), Residual>> {
        let r = self.apply(f)?;
        Ok(first_residual(&r))
    }

    /// One-variable variant of [`annihilates`](Self::annihilates).
    pub fn annihilates1(&self, f: &Series1) -> Result<std::result::Result<(), Residual>> {
        let r = self.apply_series1(f)?;
        Ok(match (0..=r.cap()).find(|&k| !r.coeff(k).is_zero()) {
            None => Ok(()),
            Some(k) => Err(Residual { log_part: (0, 0), at: (k, 0), value: r.coeff(k).clone() }),
        })
    }

    /// Holomorphic solution `1 + O(z)` of a one-variable operator, by the
    /// coefficient recursion `p_0(d) c_d = -sum_{a>0} p_a(d-a) c_{d-a}`.
    /// Resonant orders (`p_0(d) = 0`) get `c_d = 0` and must have zero right side.
    pub fn holomorphic_solution(&self, order: usize) -> Result<Series1> {
        if self.h != 1 {
            return Err(Error::VarMismatch(self.h, 1));
        }
        let groups = self.by_shift();
        let p0 = groups.get(&vec![0]).cloned().unwrap_or_default();
        if !Self::eval_poly(&p0, &[Rat::zero()]).is_zero() {
            return Err(Error::Precondition("indicial polynomial does not vanish at 0".into()));
        }
        let mut c = vec![Rat::zero(); order + 1];
        c[0] = Rat::one();
        for d in 1..=order {
            let mut rhs = Rat::zero();
            for (a, poly) in &groups {
                let a = a[0] as usize;
                if a == 0 || a > d {
                    continue;
                }
                rhs -= Self::eval_poly(poly, &[ri((d - a) as i64)]) * &c[d - a];
            }
            let lead = Self::eval_poly(&p0, &[ri(d as i64)]);
            if lead.is_zero() {
                if !rhs.is_zero() {
                    return Err(Error::Inconsistent(format!("resonance at order {d}")));
                }
            } else {
                c[d] = rhs / lead;
            }
        }
        Ok(Series1::from_coeffs(c))
    }
}

/// First nonzero coefficient of a residual `A f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub log_part: (usize, usize),
    pub at: (usize, usize),
    pub value: Rat,
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "residual {} at z1^{} z2^{} (log part {:?})", self.value, self.at.0, self.at.1, self.log_part)
    }
}

pub(crate) fn first_residual(r: &LogSeries) -> std::result::Result<(), Residual> {
    let (d1, d2) = r.caps();
    let mut best: Option<Residual> = None;
    for p in 0..2 {
        for q in 0..2 {
            let s = r.part(p, q).expect("log part");
            for i in 0..=d1 {
                for j in 0..=d2 {
                    let v = s.get(i, j);
                    if !v.is_zero() {
                        let cand = Residual { log_part: (p, q), at: (i, j), value: v.clone() };
                        let better = match &best {
                            None => true,
                            Some(b) => (i + j, i) < (b.at.0 + b.at.1, b.at.0),
                        };
                        if better {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
    }
    match best {
        None => Ok(()),
        Some(b) => Err(b),
    }
}

impl fmt::Debug for ShiftOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShiftOp[{self}]")
    }
}
