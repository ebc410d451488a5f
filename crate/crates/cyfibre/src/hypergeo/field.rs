use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{pfq_scaled, HGParams};
use crate::error::{Error, Result};
use crate::rat::{ri, Rat};
use crate::series::Series1;

/// Polynomial over `Q` in `Z`, `F`, `T`, keyed by exponents `[z, f, t]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly3(BTreeMap<[u32; 3], Rat>);

impl Poly3 {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: [u32; 3], c: Rat) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Self(m)
    }

    /// `sum c_k Z^k`.
    pub fn in_z(c: &[Rat]) -> Self {
        let mut p = Self::zero();
        for (k, v) in c.iter().enumerate() {
            p.add_term([k as u32, 0, 0], v.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Rat)> {
        self.0.iter()
    }

    pub fn coeff(&self, e: [u32; 3]) -> Rat {
        self.0.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, e: [u32; 3], c: Rat) {
        if c.is_zero() {
            return;
        }
        let v = self.0.entry(e).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.0 {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self(self.0.iter().map(|(e, c)| (*e, c * k)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                r.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    /// Smallest exponent of variable `v` over all terms.
    fn min_exp(&self, v: usize) -> u32 {
        self.0.keys().map(|e| e[v]).min().unwrap_or(0)
    }

    fn lower(&self, v: usize, k: u32) -> Self {
        Self(
            self.0
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e[v] -= k;
                    (e, c.clone())
                })
                .collect(),
        )
    }

    /// Exact division by `1 - a0 Z`, if possible.
    fn div_linear(&self, a0: &Rat) -> Option<Self> {
        // group by (f, t) and divide each Z-polynomial
        let mut groups: BTreeMap<[u32; 2], BTreeMap<u32, Rat>> = BTreeMap::new();
        for (e, c) in &self.0 {
            groups.entry([e[1], e[2]]).or_default().insert(e[0], c.clone());
        }
        let mut out = Self::zero();
        for ([f, t], zs) in groups {
            let deg = *zs.keys().next_back().unwrap();
            // p = (1 - a0 Z) q: q_k = p_k + a0 q_{k-1}, with remainder q_deg = 0
            let mut prev = Rat::zero();
            for k in 0..=deg {
                let q = zs.get(&k).cloned().unwrap_or_else(Rat::zero) + a0 * &prev;
                if k == deg {
                    if !q.is_zero() {
                        return None;
                    }
                } else {
                    out.add_term([k, f, t], q.clone());
                }
                prev = q;
            }
        }
        Some(out)
    }

    /// Evaluates with `Z -> z`, `F -> f`, `T -> t` as series.
    pub fn eval(&self, f: &Series1, t: &Series1) -> Series1 {
        let cap = f.cap().min(t.cap());
        let mut r = Series1::zero(cap);
        let mut fp: Vec<Series1> = vec![Series1::one(cap)];
        let mut tp: Vec<Series1> = vec![Series1::one(cap)];
        for (e, c) in &self.0 {
            while fp.len() <= e[1] as usize {
                let n = &fp[fp.len() - 1] * f;
                fp.push(n);
            }
            while tp.len() <= e[2] as usize {
                let n = &tp[tp.len() - 1] * t;
                tp.push(n);
            }
            let m = (&fp[e[1] as usize] * &tp[e[2] as usize]).shift(e[0] as usize).scale(c);
            r = &r + &m;
        }
        r
    }
}

/// Parameters of `F = 2F1(a1, a2; 1 | a0 z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldParams {
    pub a0: Rat,
    pub a1: Rat,
    pub a2: Rat,
}

impl FieldParams {
    pub fn new(a0: Rat, a1: Rat, a2: Rat) -> Self {
        Self { a0, a1, a2 }
    }

    pub fn hg(&self) -> HGParams {
        HGParams::gauss(self.a1.clone(), self.a2.clone())
    }
}

/// Element `N / ((1 - a0 Z)^a F^b Z^c)` of `Q(z, F, theta F)`, with `N` a
/// polynomial in `Z`, `F`, `T = theta F`.
///
/// Only these denominators are supported; they are the ones the slice formulas
/// produce. Fractions are kept reduced: no factor of the denominator divides `N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffFieldElem {
    params: FieldParams,
    num: Poly3,
    // exponents of (1 - a0 Z), F, Z
    den: [u32; 3],
}

impl DiffFieldElem {
    pub fn new(params: &FieldParams, num: Poly3, den: [u32; 3]) -> Self {
        Self { params: params.clone(), num, den }.reduced()
    }

    pub fn zero(params: &FieldParams) -> Self {
        Self::new(params, Poly3::zero(), [0, 0, 0])
    }

    pub fn constant(params: &FieldParams, c: Rat) -> Self {
        Self::new(params, Poly3::constant(c), [0, 0, 0])
    }

    pub fn z(params: &FieldParams) -> Self {
        Self::new(params, Poly3::monomial([1, 0, 0], Rat::one()), [0, 0, 0])
    }

    pub fn f(params: &FieldParams) -> Self {
        Self::new(params, Poly3::monomial([0, 1, 0], Rat::one()), [0, 0, 0])
    }

    pub fn t(params: &FieldParams) -> Self {
        Self::new(params, Poly3::monomial([0, 0, 1], Rat::one()), [0, 0, 0])
    }

    /// `1 - a0 Z`.
    pub fn disc(params: &FieldParams) -> Self {
        Self::new(params, Poly3::in_z(&[Rat::one(), -params.a0.clone()]), [0, 0, 0])
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn numerator(&self) -> &Poly3 {
        &self.num
    }

    /// Exponents of `(1 - a0 Z)`, `F`, `Z` in the denominator.
    pub fn denominator(&self) -> [u32; 3] {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            self.den = [0, 0, 0];
            return self;
        }
        for (slot, var) in [(1usize, 1usize), (2, 0)] {
            let k = self.num.min_exp(var).min(self.den[slot]);
            if k > 0 {
                self.num = self.num.lower(var, k);
                self.den[slot] -= k;
            }
        }
        while self.den[0] > 0 {
            match self.num.div_linear(&self.params.a0) {
                Some(q) => {
                    self.num = q;
                    self.den[0] -= 1;
                }
                None => break,
            }
        }
        self
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.params != o.params {
            return Err(Error::Precondition("field elements over different parameters".into()));
        }
        Ok(())
    }

    /// `(1 - a0 Z)^a F^b Z^c` as a polynomial.
    fn den_poly(&self, e: [u32; 3]) -> Poly3 {
        Poly3::in_z(&[Rat::one(), -self.params.a0.clone()])
            .pow(e[0])
            .mul(&Poly3::monomial([e[2], e[1], 0], Rat::one()))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let d: [u32; 3] = std::array::from_fn(|k| self.den[k].max(o.den[k]));
        let ls: [u32; 3] = std::array::from_fn(|k| d[k] - self.den[k]);
        let lo: [u32; 3] = std::array::from_fn(|k| d[k] - o.den[k]);
        let n = self.num.mul(&self.den_poly(ls)).add(&o.num.mul(&self.den_poly(lo)));
        Ok(Self::new(&self.params, n, d))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::new(&self.params, self.num.scale(k), self.den)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let d = std::array::from_fn(|k| self.den[k] + o.den[k]);
        Ok(Self::new(&self.params, self.num.mul(&o.num), d))
    }

    /// Inverse; the numerator must itself be a product of denominator factors.
    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::NonUnit);
        }
        // peel off Z, F and (1 - a0 Z) factors
        let mut num = self.num.clone();
        let mut e = [0u32; 3];
        e[2] = num.min_exp(0);
        num = num.lower(0, e[2]);
        e[1] = num.min_exp(1);
        num = num.lower(1, e[1]);
        while let Some(q) = num.div_linear(&self.params.a0) {
            if q.is_zero() {
                break;
            }
            num = q;
            e[0] += 1;
        }
        if num.0.len() != 1 || num.0.keys().next() != Some(&[0, 0, 0]) {
            return Err(Error::Unsupported("inverse of a numerator outside the denominator monoid".into()));
        }
        let c = num.coeff([0, 0, 0]);
        Ok(Self::new(&self.params, self.den_poly(self.den).scale(&c.recip()), e))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::constant(&self.params, Rat::one());
        for _ in 0..e {
            r = r.mul(self).unwrap();
        }
        r
    }

    /// `theta N` as `(P, Q)` meaning `P + Q / (1 - a0 Z)`.
    fn theta_poly(&self, n: &Poly3) -> (Poly3, Poly3) {
        let p = &self.params;
        // theta T = (a0 (a1 + a2) Z T + a0 a1 a2 Z F) / (1 - a0 Z)
        let tt = Poly3::monomial([1, 0, 1], &p.a0 * (&p.a1 + &p.a2)).add(&Poly3::monomial([1, 1, 0], &p.a0 * &p.a1 * &p.a2));
        let mut a = Poly3::zero();
        let mut b = Poly3::zero();
        for (e, c) in &n.0 {
            if e[0] > 0 {
                a.add_term(*e, c * ri(e[0] as i64));
            }
            if e[1] > 0 {
                a.add_term([e[0], e[1] - 1, e[2] + 1], c * ri(e[1] as i64));
            }
            if e[2] > 0 {
                let rest = Poly3::monomial([e[0], e[1], e[2] - 1], c * ri(e[2] as i64));
                b = b.add(&rest.mul(&tt));
            }
        }
        (a, b)
    }

    /// The derivation `theta = z d/dz`.
    pub fn theta(&self) -> Self {
        let p = &self.params;
        let n = &self.num;
        let (na, nb) = self.theta_poly(n);
        let l = Poly3::in_z(&[Rat::one(), -p.a0.clone()]);
        let f = Poly3::monomial([0, 1, 0], Rat::one());
        let t = Poly3::monomial([0, 0, 1], Rat::one());
        let [a, b, c] = self.den;
        // theta(N / D) = (theta N - N theta D / D) / D, all over (1 - a0 Z) F
        let mut top = na.mul(&l).mul(&f).add(&nb.mul(&f));
        top = top.add(&n.mul(&f).mul(&Poly3::monomial([1, 0, 0], &p.a0 * ri(a as i64))));
        top = top.sub(&n.mul(&t).mul(&l).scale(&ri(b as i64)));
        top = top.sub(&n.mul(&l).mul(&f).scale(&ri(c as i64)));
        Self::new(p, top, [a + 1, b + 1, c])
    }

    /// Series expansion with `F` the hypergeometric series, exact to `z^order`.
    pub fn eval(&self, order: usize) -> Result<Series1> {
        let p = &self.params;
        let [a, b, c] = self.den;
        let cap = order + c as usize;
        let fser = pfq_scaled(&p.hg(), &p.a0, cap)?;
        let tser = fser.theta();
        let mut r = self.num.eval(&fser, &tser).unshift(c as usize)?;
        let mut lc = vec![Rat::zero(); order.max(1) + 1];
        lc[0] = Rat::one();
        lc[1] = -p.a0.clone();
        let mut d = Series1::from_coeffs(lc).truncate(order).pow_int(a);
        if b > 0 {
            d = &d * &fser.truncate(order).pow_int(b);
        }
        r = r.div(&d.truncate(order))?;
        Ok(r.truncate(order))
    }
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.0.iter().enumerate() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut vars = Vec::new();
            for (name, p) in ["z", "F", "TF"].iter().zip(e) {
                match p {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    _ => vars.push(format!("{name}^{p}")),
                }
            }
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for DiffFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        write!(f, "[a0={}, a1={}, a2={}] ({})", p.a0, p.a1, p.a2, self.num)?;
        let [a, b, c] = self.den;
        let mut parts = Vec::new();
        for (name, e) in [(format!("(1 - {}*z)", p.a0), a), ("F".to_string(), b), ("z".to_string(), c)] {
            match e {
                0 => {}
                1 => parts.push(name),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if !parts.is_empty() {
            write!(f, " / ({})", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rq;

    fn main() -> FieldParams {
        FieldParams::new(ri(432), rq(5, 6), rq(1, 6))
    }

    #[test]
    fn theta_of_generators() {
        let p = main();
        assert_eq!(DiffFieldElem::z(&p).theta(), DiffFieldElem::z(&p));
        assert_eq!(DiffFieldElem::f(&p).theta(), DiffFieldElem::t(&p));
        let want = Poly3::monomial([1, 0, 1], ri(432)).add(&Poly3::monomial([1, 1, 0], ri(60)));
        assert_eq!(DiffFieldElem::t(&p).theta(), DiffFieldElem::new(&p, want, [1, 0, 0]));
    }

    #[test]
    fn reduction_cancels_factors() {
        let p = main();
        let x = DiffFieldElem::disc(&p).mul(&DiffFieldElem::f(&p)).unwrap();
        let y = x.div(&DiffFieldElem::disc(&p)).unwrap();
        assert_eq!(y, DiffFieldElem::f(&p));
        assert_eq!(x.inv().unwrap().mul(&x).unwrap(), DiffFieldElem::constant(&p, ri(1)));
    }

    #[test]
    fn evaluation() {
        let p = main();
        assert_eq!(DiffFieldElem::f(&p).eval(2).unwrap(), Series1::from_ints(&[1, 60, 13860]));
        let g = DiffFieldElem::disc(&p).inv().unwrap().eval(3).unwrap();
        assert_eq!(g, Series1::from_ints(&[1, 432, 186624, 80621568]));
    }

    #[test]
    fn theta_commutes_with_eval() {
        let p = main();
        let e = DiffFieldElem::t(&p)
            .mul(&DiffFieldElem::z(&p))
            .unwrap()
            .add(&DiffFieldElem::f(&p).pow(2))
            .unwrap()
            .div(&DiffFieldElem::disc(&p).pow(2).mul(&DiffFieldElem::f(&p)).unwrap())
            .unwrap();
        assert_eq!(e.theta().eval(6).unwrap(), e.eval(7).unwrap().theta().truncate(6));
    }
}
