//! Truncated power series over exact rationals.
//!
//! [`Series2`] is the workhorse: dense, two variables, caps `(D1, D2)`.
//! [`Series1`] is the one-variable case, [`LogSeries`] adds one power of
//! `log z1` and `log z2`, and [`QExp`] holds Laurent series in `q^(1/2)`.

mod log;
mod qexp;
mod series1;
mod series2;

pub use log::LogSeries;
pub use qexp::{QExp, Weight};
pub use series1::Series1;
pub use series2::Series2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, parse_rat};

/// JSON form `{caps, terms: [[i, j, "n/d"], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series2Json {
    pub caps: (usize, usize),
    pub terms: Vec<(usize, usize, String)>,
}

impl From<&Series2> for Series2Json {
    fn from(s: &Series2) -> Self {
        Self { caps: s.caps(), terms: s.terms().map(|(i, j, v)| (i, j, fmt_rat(v))).collect() }
    }
}

impl TryFrom<&Series2Json> for Series2 {
    type Error = Error;
    fn try_from(j: &Series2Json) -> Result<Self> {
        let mut out = Vec::with_capacity(j.terms.len());
        for (a, b, v) in &j.terms {
            if *a > j.caps.0 || *b > j.caps.1 {
                return Err(Error::Parse(format!("term ({a},{b}) beyond caps {:?}", j.caps)));
            }
            out.push((*a, *b, parse_rat(v)?));
        }
        Ok(Series2::from_terms(j.caps.0, j.caps.1, out))
    }
}

/// JSON form `{base_den, min_exp, cap, weight, terms: [[e, "n/d"], ...]}`,
/// exponent `e / base_den`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QExpJson {
    pub base_den: u32,
    pub min_exp: i64,
    pub cap: i64,
    pub weight: Weight,
    pub terms: Vec<(i64, String)>,
}

impl From<&QExp> for QExpJson {
    fn from(q: &QExp) -> Self {
        let terms = (q.min_exp()..=q.cap())
            .filter_map(|e| {
                let v = q.coeff(e)?;
                (!num_traits::Zero::is_zero(&v)).then(|| (e, fmt_rat(&v)))
            })
            .collect();
        Self { base_den: q.base_den(), min_exp: q.min_exp(), cap: q.cap(), weight: q.weight, terms }
    }
}

impl TryFrom<&QExpJson> for QExp {
    type Error = Error;
    fn try_from(j: &QExpJson) -> Result<Self> {
        if j.cap < j.min_exp {
            return Err(Error::Parse("cap below min_exp".into()));
        }
        let mut c = vec![crate::rat::zero(); (j.cap - j.min_exp + 1) as usize];
        for (e, v) in &j.terms {
            if *e < j.min_exp || *e > j.cap {
                return Err(Error::Parse(format!("exponent {e} outside [{}, {}]", j.min_exp, j.cap)));
            }
            c[(e - j.min_exp) as usize] = parse_rat(v)?;
        }
        QExp::new(j.weight, j.base_den, j.min_exp, c)
    }
}

pub fn series2_to_json(s: &Series2) -> String {
    serde_json::to_string(&Series2Json::from(s)).expect("series json")
}

pub fn series2_from_json(s: &str) -> Result<Series2> {
    let j: Series2Json = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Series2::try_from(&j)
}

pub fn qexp_to_json(q: &QExp) -> String {
    serde_json::to_string(&QExpJson::from(q)).expect("qexp json")
}

pub fn qexp_from_json(s: &str) -> Result<QExp> {
    let j: QExpJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    QExp::try_from(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{ri, rq};

    #[test]
    fn series_json_roundtrip() {
        let s = Series2::from_terms(3, 1, vec![(0, 0, ri(1)), (2, 1, rq(-5, 6))]);
        let j = series2_to_json(&s);
        assert_eq!(j, r#"{"caps":[3,1],"terms":[[0,0,"1"],[2,1,"-5/6"]]}"#);
        assert_eq!(series2_from_json(&j).unwrap(), s);
    }

    #[test]
    fn qexp_json_roundtrip() {
        let q = QExp::new(Weight::Mixed, 2, -3, vec![ri(1), ri(0), rq(1, 2)]).unwrap();
        assert_eq!(qexp_from_json(&qexp_to_json(&q)).unwrap(), q);
    }
}
