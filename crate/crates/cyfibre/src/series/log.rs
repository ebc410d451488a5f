use super::Series2;
use crate::error::{Error, Result};
use crate::rat::{ri, Rat};

/// `sum S_pq(z1, z2) (log z1)^p (log z2)^q` with `p, q` in `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    // indexed by p + 2q
    parts: [Series2; 4],
}

impl LogSeries {
    pub fn zero(d1: usize, d2: usize) -> Self {
        Self { parts: std::array::from_fn(|_| Series2::zero(d1, d2)) }
    }

    pub fn from_series(s: Series2) -> Self {
        let (d1, d2) = s.caps();
        let mut r = Self::zero(d1, d2);
        r.parts[0] = s;
        r
    }

    /// `pi0 * log z_axis + s`.
    pub fn with_log(axis: usize, pi0: &Series2, s: &Series2) -> Self {
        let mut r = Self::from_series(s.clone());
        let (d1, d2) = s.caps();
        r = r.truncate(d1.min(pi0.caps().0), d2.min(pi0.caps().1));
        r.parts[1 << axis] = pi0.truncate(r.caps().0, r.caps().1);
        r
    }

    /// `log z_axis` itself.
    pub fn log_var(axis: usize, d1: usize, d2: usize) -> Self {
        Self::with_log(axis, &Series2::one(d1, d2), &Series2::zero(d1, d2))
    }

    pub fn caps(&self) -> (usize, usize) {
        self.parts[0].caps()
    }

    /// Coefficient of `(log z1)^p (log z2)^q`.
    pub fn part(&self, p: usize, q: usize) -> Result<&Series2> {
        if p > 1 || q > 1 {
            return Err(Error::OutOfRange(format!("log degree ({p},{q})")));
        }
        Ok(&self.parts[p + 2 * q])
    }

    /// Highest log power present, as `(p, q)` maxima.
    pub fn log_degree(&self) -> (usize, usize) {
        let mut d = (0, 0);
        for p in 0..2 {
            for q in 0..2 {
                if !self.parts[p + 2 * q].is_zero() {
                    d.0 = d.0.max(p);
                    d.1 = d.1.max(q);
                }
            }
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Series2::is_zero)
    }

    pub fn truncate(&self, d1: usize, d2: usize) -> Self {
        Self { parts: std::array::from_fn(|k| self.parts[k].truncate(d1, d2)) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { parts: std::array::from_fn(|k| &self.parts[k] + &o.parts[k]) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { parts: std::array::from_fn(|k| &self.parts[k] - &o.parts[k]) }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self { parts: std::array::from_fn(|k| self.parts[k].scale(c)) }
    }

    /// Product with a log-free series.
    pub fn mul_series(&self, s: &Series2) -> Self {
        Self { parts: std::array::from_fn(|k| &self.parts[k] * s) }
    }

    /// Product of two log series; fails if a log power would exceed one.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let (d1, d2) = (self.caps().0.min(o.caps().0), self.caps().1.min(o.caps().1));
        let mut r = Self::zero(d1, d2);
        for a in 0..4 {
            if self.parts[a].is_zero() {
                continue;
            }
            for b in 0..4 {
                if o.parts[b].is_zero() {
                    continue;
                }
                let (p, q) = ((a & 1) + (b & 1), (a >> 1) + (b >> 1));
                if p > 1 || q > 1 {
                    return Err(Error::Unsupported("log degree above one".into()));
                }
                let k = p + 2 * q;
                r.parts[k] = &r.parts[k] + &(&self.parts[a] * &o.parts[b]);
            }
        }
        Ok(r)
    }

    /// `theta_axis`, with `theta_i log z_j = delta_ij`.
    pub fn theta(&self, axis: usize) -> Self {
        let mut r = Self { parts: std::array::from_fn(|k| self.parts[k].theta(axis)) };
        let bit = 1 << axis;
        for k in 0..4 {
            if k & bit != 0 {
                let lower = k & !bit;
                r.parts[lower] = &r.parts[lower] + &self.parts[k];
            }
        }
        r
    }

    /// Multiplies by `z1^a z2^b` (dropping beyond caps).
    pub fn shift(&self, a: usize, b: usize) -> Self {
        Self { parts: std::array::from_fn(|k| self.parts[k].shift(a, b)) }
    }

    /// Multiplies by the polynomial `p(theta1, theta2)` evaluated termwise is not
    /// meaningful with logs; use repeated [`theta`](Self::theta) instead.
    pub fn theta_pow(&self, axis: usize, e: u32) -> Self {
        (0..e).fold(self.clone(), |acc, _| acc.theta(axis))
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&ri(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_of_log() {
        let l = LogSeries::log_var(0, 3, 1);
        assert_eq!(l.theta(0), LogSeries::from_series(Series2::one(3, 1)));
        assert!(l.theta(1).is_zero());
    }

    #[test]
    fn log_squared_is_rejected() {
        let l = LogSeries::log_var(0, 3, 1);
        assert!(l.mul(&l).is_err());
        let m = LogSeries::log_var(1, 3, 1);
        assert_eq!(l.mul(&m).unwrap().log_degree(), (1, 1));
    }
}
