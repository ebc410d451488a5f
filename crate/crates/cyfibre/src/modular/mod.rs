//! Eisenstein, eta and theta series, the generators of the four levels, the
//! `j`-function description of the mirror map, and a recognizer for
//! quasi-modular forms.

mod denominators;
mod fit;

pub use denominators::{denominator_report, DenominatorReport};
pub use fit::{anomaly_decompose, fit, fit_search, FitResult, FitSpec, Monomial};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hypergeo::{pfq_scaled, HGParams};
use crate::rat::{ri, rq, Rat};
use crate::series::{QExp, Series1, Weight};
pub use crate::weyl::Level;

fn sigma(k: u32, m: u64) -> BigInt {
    (1..=m).filter(|d| m % d == 0).map(|d| BigInt::from(d).pow(k)).sum()
}

/// `E_k` for `k` in `{2, 4, 6}`, known through `q^order`.
pub fn eisenstein(k: u32, order: usize) -> Result<QExp> {
    let c = match k {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => return Err(Error::Unsupported(format!("E_{k}"))),
    };
    let mut v = vec![Rat::one()];
    for m in 1..=order as u64 {
        v.push(Rat::from_integer(sigma(k - 1, m) * c));
    }
    Ok(QExp::from_series(&Series1::from_coeffs(v), Weight::Definite(k as i32)))
}

/// `prod_{k >= 1} (1 - q^k)`, from the pentagonal number theorem.
fn euler_product(order: usize) -> Series1 {
    let mut c = vec![Rat::zero(); order + 1];
    for k in 0i64.. {
        let mut any = false;
        for j in [k, -k] {
            let e = j * (3 * j - 1) / 2;
            if (e as usize) <= order {
                any = true;
                c[e as usize] = if j % 2 == 0 { ri(1) } else { ri(-1) };
            }
        }
        if !any {
            break;
        }
    }
    Series1::from_coeffs(c)
}

/// `eta^m = q^{m/24} prod (1 - q^k)^m` for `m` divisible by 12.
pub fn eta_pow(m: i64, order: usize) -> Result<QExp> {
    if m % 12 != 0 {
        return Err(Error::Unsupported(format!("eta^{m} has exponents outside (1/2)Z")));
    }
    let p = euler_product(order);
    let p = if m >= 0 { p.pow_int(m as u32) } else { p.pow_int((-m) as u32).inv()? };
    let q = QExp::from_series(&p, Weight::Definite((m / 2) as i32));
    if m % 24 == 0 {
        Ok(q.shift(m / 24))
    } else {
        Ok(q.with_base_den(2)?.shift(m / 12))
    }
}

/// `f(q^m)`.
pub fn dilate(f: &QExp, m: u32) -> Result<QExp> {
    let s = f.to_series()?;
    let cap = s.cap() * m as usize;
    let mut c = vec![Rat::zero(); cap + 1];
    for k in 0..=s.cap() {
        c[k * m as usize] = s.coeff(k).clone();
    }
    Ok(QExp::from_series(&Series1::from_coeffs(c), f.weight))
}

fn theta_sum(order: usize, offset: bool) -> Series1 {
    // sum_n q^{n^2}, or sum_n q^{n^2 + n}
    let mut c = vec![Rat::zero(); order + 1];
    for n in -(order as i64) - 1..=order as i64 + 1 {
        let e = n * n + if offset { n } else { 0 };
        if e >= 0 && (e as usize) <= order {
            c[e as usize] += ri(1);
        }
    }
    Series1::from_coeffs(c)
}

/// `theta3^4 = sum r4(n) q^n`.
pub fn theta3_4(order: usize) -> QExp {
    QExp::from_series(&theta_sum(order, false).pow_int(4), Weight::Definite(2))
}

/// `theta2^4 = q (sum q^{n^2 + n})^4`, the same nome as [`theta3_4`].
pub fn theta2_4(order: usize) -> QExp {
    let s = theta_sum(order, true).pow_int(4).truncate(order.saturating_sub(1));
    QExp::from_series(&s, Weight::Definite(2)).shift(1)
}

/// A named generator of weight `weight`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
    pub q: QExp,
}

/// The generators of a level; `E2` is kept apart as the quasi-modular one.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub level: Level,
    pub gens: Vec<Generator>,
    pub e2: QExp,
}

pub fn level_generators(level: Level, order: usize) -> Result<GeneratorSet> {
    let g = |name: &str, weight: u32, q: QExp| Generator { name: name.into(), weight, q };
    let e2 = eisenstein(2, order)?;
    let e4 = eisenstein(4, order)?;
    let e6 = eisenstein(6, order)?;
    let gens = match level {
        Level::SL2Z => vec![g("E4", 4, e4), g("E6", 6, e6)],
        Level::Gamma0_2 => {
            let a = e2.sub(&dilate(&e2, 2)?.scale(&ri(2)))?.truncate(order as i64);
            vec![g("(E2-2E2(2t))", 2, a), g("E4", 4, e4)]
        }
        Level::Gamma0_3 => {
            let b = e2.sub(&dilate(&e2, 3)?.scale(&ri(3)))?.truncate(order as i64);
            vec![g("(E2-3E2(3t))", 2, b), g("E4", 4, e4), g("E6", 6, e6)]
        }
        Level::Gamma2 => vec![g("th2^4", 2, theta2_4(order)), g("th3^4", 2, theta3_4(order))],
    };
    Ok(GeneratorSet { level, gens, e2 })
}

/// `z(q) = (1 - sqrt(1 - 1728 / J)) / 864` with `1 / J = eta^24 / E4^3`.
pub fn z_of_q(order: usize) -> Result<Series1> {
    let e4 = eisenstein(4, order)?.to_series()?;
    let d = eta_pow(24, order)?.to_series()?;
    let x = d.div(&e4.pow_int(3))?.scale(&ri(1728));
    let s = (&Series1::one(order) - &x).pow_rational(&rq(1, 2))?;
    Ok((&Series1::one(order) - &s).scale(&rq(1, 864)))
}

/// Checks `F(z(q))^4 = E4`, `4 theta(F^4 o z) = theta E4` and
/// `6 (Phi^6 + E6) (theta F) o z = Phi (E2 E4 - E6)` with `Phi = F o z`.
pub fn verify_j_inversion(order: usize) -> Result<bool> {
    let z = z_of_q(order)?;
    let f = pfq_scaled(&HGParams::gauss(rq(5, 6), rq(1, 6)), &ri(432), order)?;
    let phi = f.compose1(&z)?;
    let tf = f.theta().compose1(&z)?;
    let e2 = eisenstein(2, order)?.to_series()?;
    let e4 = eisenstein(4, order)?.to_series()?;
    let e6 = eisenstein(6, order)?.to_series()?;
    let phi4 = phi.pow_int(4);
    let a = phi4 == e4;
    let b = phi4.theta().scale(&ri(4)) == e4.theta().scale(&ri(4));
    let lhs = &(&(&phi4 * &phi.pow_int(2)) + &e6) * &tf;
    let rhs = &phi * &(&(&e2 * &e4) - &e6);
    Ok(a && b && lhs.scale(&ri(6)) == rhs && z.coeff(0).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_oracle(k: u32, m: u64) -> i64 {
        (1..=m as i64).filter(|d| m as i64 % d == 0).map(|d| d.pow(k)).sum()
    }

    #[test]
    fn eisenstein_series() {
        let e4 = eisenstein(4, 5).unwrap();
        assert_eq!(e4.to_series().unwrap(), Series1::from_ints(&[1, 240, 2160, 6720, 17520, 30240]));
        let e2 = eisenstein(2, 3).unwrap();
        assert_eq!(e2.coeff(2), Some(ri(-24 * sigma_oracle(1, 2))));
        let e6 = eisenstein(6, 3).unwrap();
        assert_eq!(e6.coeff(2), Some(ri(-504 * sigma_oracle(5, 2))));
        assert!(eisenstein(8, 3).is_err());
    }

    #[test]
    fn eta_powers() {
        let d = eta_pow(24, 6).unwrap();
        assert_eq!(d.to_series().unwrap().truncate(4), Series1::from_ints(&[0, 1, -24, 252, -1472]));
        assert_eq!(eta_pow(0, 4).unwrap().to_series().unwrap(), Series1::one(4));
        let e48 = eta_pow(48, 8).unwrap();
        assert!(e48.agrees_with(&d.mul(&d).unwrap()));
        let e12 = eta_pow(12, 4).unwrap();
        assert_eq!(e12.base_den(), 2);
        assert!(e12.mul(&e12).unwrap().agrees_with(&d));
        assert!(eta_pow(8, 4).is_err());
    }

    #[test]
    fn discriminant_identity() {
        let n = 12;
        let e4 = eisenstein(4, n).unwrap();
        let e6 = eisenstein(6, n).unwrap();
        let d = eta_pow(24, n + 1).unwrap();
        let lhs = e4.pow(3).unwrap().div(&d).unwrap().sub(&e6.pow(2).unwrap().div(&d).unwrap()).unwrap();
        let want = QExp::from_ints(&[1728], Weight::Definite(0));
        assert!(lhs.truncate(n as i64 - 1).agrees_with(&want.with_base_den(1).unwrap()));
        for e in lhs.min_exp()..=lhs.cap().min(n as i64 - 1) {
            assert_eq!(lhs.coeff(e).unwrap(), if e == 0 { ri(1728) } else { ri(0) });
        }
    }

    #[test]
    fn theta_constants() {
        // r4(n) = 8 sum_{d | n, 4 !| d} d
        let r4 = |n: i64| if n == 0 { 1 } else { 8 * (1..=n).filter(|d| n % d == 0 && d % 4 != 0).sum::<i64>() };
        let t3 = theta3_4(10);
        for n in 0..=10 {
            assert_eq!(t3.coeff(n), Some(ri(r4(n))));
        }
        let t2 = theta2_4(10);
        assert_eq!(t2.to_series().unwrap().truncate(5), Series1::from_ints(&[0, 16, 0, 64, 0, 96]));
        // Jacobi: theta3^4 = theta2^4 + theta4^4 with theta4(q) = theta3(-q)
        let t4: Vec<Rat> = (0..=10).map(|n| t3.coeff(n).unwrap() * ri(if n % 2 == 0 { 1 } else { -1 })).collect();
        for n in 0..=10 {
            assert_eq!(t3.coeff(n).unwrap(), t2.coeff(n).unwrap() + &t4[n as usize]);
        }
    }

    #[test]
    fn level_constant_terms() {
        let g2 = level_generators(Level::Gamma0_2, 6).unwrap();
        assert_eq!(g2.gens[0].q.coeff(0), Some(ri(-1)));
        let g3 = level_generators(Level::Gamma0_3, 6).unwrap();
        assert_eq!(g3.gens[0].q.coeff(0), Some(ri(-2)));
        assert_eq!(level_generators(Level::Gamma2, 6).unwrap().gens.len(), 2);
    }

    #[test]
    fn j_inversion() {
        // (1 - sqrt(1 - 1728 x)) / 864 = x + 432 x^2 + 373248 x^3 + ..., x = 1/J = q - 744 q^2 + 356652 q^3
        let x = Series1::from_ints(&[0, 1, -744, 356652]);
        let want = &(&x + &x.pow_int(2).scale(&ri(432))) + &x.pow_int(3).scale(&ri(373248));
        assert_eq!(z_of_q(6).unwrap().truncate(3), want);
        assert!(verify_j_inversion(12).unwrap());
    }
}
