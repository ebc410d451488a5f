//! Parameter families and the shipped table of Picard-Fuchs systems.

use serde::{Deserialize, Serialize};

use super::ShiftOp;
use crate::error::{Error, Result};
use crate::rat::{ri, rq, Rat};

/// Parameters `(n, a0, a1, a2)` of the two-operator system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u32,
    #[serde(with = "crate::rat::serde_rat")]
    pub a0: Rat,
    #[serde(with = "crate::rat::serde_rat")]
    pub a1: Rat,
    #[serde(with = "crate::rat::serde_rat")]
    pub a2: Rat,
}

impl ModelParams {
    pub fn new(n: u32, a0: Rat, a1: Rat, a2: Rat) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        Ok(Self { n, a0, a1, a2 })
    }

    /// The `E8` row with `n = 4`.
    pub fn main() -> Self {
        Self { n: 4, a0: ri(432), a1: rq(5, 6), a2: rq(1, 6) }
    }

    pub fn balanced(&self) -> bool {
        &self.a1 + &self.a2 == ri(1)
    }

    pub fn require_balanced(&self) -> Result<()> {
        if self.balanced() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("a1 + a2 = {} but 1 is required", &self.a1 + &self.a2)))
        }
    }

    /// `n/2` as a rational.
    pub fn half_n(&self) -> Rat {
        rq(self.n as i64, 2)
    }

    pub fn l1(&self) -> ShiftOp {
        make_l1(self.n, &self.a0, &self.a1, &self.a2)
    }

    pub fn l2(&self) -> ShiftOp {
        make_l2(self.n)
    }
}

/// Modular group attached to a row of the parameter table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    SL2Z,
    Gamma0_2,
    Gamma0_3,
    Gamma2,
}

/// `(a0, a1, a2)` rows with their modular group.
pub fn level_rows() -> Vec<(Level, Rat, Rat, Rat)> {
    vec![
        (Level::SL2Z, ri(432), rq(5, 6), rq(1, 6)),
        (Level::Gamma0_2, ri(64), rq(3, 4), rq(1, 4)),
        (Level::Gamma0_3, ri(27), rq(2, 3), rq(1, 3)),
        (Level::Gamma2, ri(16), rq(1, 2), rq(1, 2)),
    ]
}

fn level_tag(l: Level) -> &'static str {
    match l {
        Level::SL2Z => "sl2z",
        Level::Gamma0_2 => "g0_2",
        Level::Gamma0_3 => "g0_3",
        Level::Gamma2 => "g2",
    }
}

/// Named presets: every table row for `n` in `{3, 4}`, plus `main3`/`main4`.
pub fn model_presets() -> Vec<(String, Level, ModelParams)> {
    let mut out = Vec::new();
    for n in [3u32, 4] {
        for (lvl, a0, a1, a2) in level_rows() {
            out.push((format!("{}_n{n}", level_tag(lvl)), lvl, ModelParams { n, a0, a1, a2 }));
        }
    }
    out.push(("main3".into(), Level::SL2Z, ModelParams { n: 3, ..ModelParams::main() }));
    out.push(("main4".into(), Level::SL2Z, ModelParams::main()));
    out
}

pub fn model_preset(name: &str) -> Result<(Level, ModelParams)> {
    model_presets()
        .into_iter()
        .find(|(k, _, _)| k == name)
        .map(|(_, l, p)| (l, p))
        .ok_or_else(|| Error::Precondition(format!("unknown preset `{name}`")))
}

/// `-n theta1 theta2 + theta1^2 - a0 z1 (theta1 + a1)(theta1 + a2)`.
pub fn make_l1(n: u32, a0: &Rat, a1: &Rat, a2: &Rat) -> ShiftOp {
    let h = 2;
    let t1 = ShiftOp::theta(h, 0);
    let t2 = ShiftOp::theta(h, 1);
    let lead = t1.mul(&t1).unwrap().sub(&t1.mul(&t2).unwrap().scale(&ri(n as i64)));
    let f1 = ShiftOp::linear(h, &[ri(1), ri(0)], a1.clone());
    let f2 = ShiftOp::linear(h, &[ri(1), ri(0)], a2.clone());
    let tail = ShiftOp::product(h, &[ShiftOp::z(h, 0), f1, f2]).unwrap().scale(a0);
    lead.sub(&tail)
}

/// `theta2^n - (-1)^n z2 prod_{k<n} (n theta2 - theta1 + k)`.
pub fn make_l2(n: u32) -> ShiftOp {
    let h = 2;
    let mut q = ShiftOp::one(h);
    for k in 0..n {
        q = q.mul(&ShiftOp::linear(h, &[ri(-1), ri(n as i64)], ri(k as i64))).unwrap();
    }
    let sign = if n % 2 == 0 { ri(1) } else { ri(-1) };
    ShiftOp::theta(h, 1).pow(n).sub(&ShiftOp::z(h, 1).mul(&q).unwrap().scale(&sign))
}

/// `theta^2 - a0 z (theta + a1)(theta + a2)`, the `z2 = 0` restriction of `L1`.
pub fn make_l(a0: &Rat, a1: &Rat, a2: &Rat) -> ShiftOp {
    let h = 1;
    let t = ShiftOp::theta(h, 0);
    let f1 = ShiftOp::linear(h, &[ri(1)], a1.clone());
    let f2 = ShiftOp::linear(h, &[ri(1)], a2.clone());
    t.pow(2).sub(&ShiftOp::product(h, &[ShiftOp::z(h, 0), f1, f2]).unwrap().scale(a0))
}

/// `L - m theta`, the operator of the inhomogeneous slice equations.
pub fn make_lm(a0: &Rat, a1: &Rat, a2: &Rat, m: &Rat) -> ShiftOp {
    make_l(a0, a1, a2).sub(&ShiftOp::theta(1, 0).scale(m))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Generator {
    name: String,
    op: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Limit {
    var: usize,
    generator: usize,
    printed: String,
    #[serde(default)]
    defect: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SystemRow {
    no: usize,
    cy: String,
    base: String,
    fibre: String,
    h: usize,
    generators: Vec<Generator>,
    limits: Vec<Limit>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SystemFile {
    version: u32,
    systems: Vec<SystemRow>,
}

/// A printed limit operator and the generator it should come from.
#[derive(Clone, Debug)]
pub struct LimitClaim {
    /// 0-based variable kept in the limit.
    pub var: usize,
    pub generator: usize,
    /// One-variable operator as printed.
    pub printed: ShiftOp,
    pub known_defect: Option<String>,
}

/// One row of the shipped table of Picard-Fuchs systems.
#[derive(Clone, Debug)]
pub struct PFSystemPreset {
    pub name: String,
    pub no: usize,
    pub description: String,
    pub h: usize,
    pub generators: Vec<(String, ShiftOp)>,
    pub limits: Vec<LimitClaim>,
}

const SYSTEMS_JSON: &str = include_str!("../../presets/pf_systems.json");

/// The embedded table, rows 0 to 8.
pub fn pf_system_presets() -> Result<Vec<PFSystemPreset>> {
    let file: SystemFile = serde_json::from_str(SYSTEMS_JSON).map_err(|e| Error::Parse(e.to_string()))?;
    if file.version != 1 {
        return Err(Error::Unsupported(format!("preset file version {}", file.version)));
    }
    let mut out = Vec::new();
    for row in file.systems {
        let mut gens = Vec::new();
        for g in &row.generators {
            gens.push((g.name.clone(), ShiftOp::parse(row.h, &g.op)?));
        }
        let mut limits = Vec::new();
        for l in &row.limits {
            let full = ShiftOp::parse(row.h, &l.printed)?;
            limits.push(LimitClaim { var: l.var - 1, generator: l.generator, printed: full.project(l.var - 1), known_defect: l.defect.clone() });
        }
        out.push(PFSystemPreset {
            name: format!("row{}", row.no),
            no: row.no,
            description: format!("{} over {}, {} fibre", row.cy, row.base, row.fibre),
            h: row.h,
            generators: gens,
            limits,
        });
    }
    Ok(out)
}

/// Outcome of checking one printed limit operator.
#[derive(Clone, Debug)]
pub struct LimitCheck {
    pub row: usize,
    pub var: usize,
    pub restricted: ShiftOp,
    pub printed: ShiftOp,
    /// Restriction equals the printed operator up to scale.
    pub matches_printed: bool,
    /// The restricted operator annihilates its holomorphic solution.
    pub annihilates: bool,
    pub known_defect: Option<String>,
}

impl PFSystemPreset {
    /// Restricts each claimed generator to its variable and compares with the printed limit.
    pub fn check_limits(&self, order: usize) -> Result<Vec<LimitCheck>> {
        let mut out = Vec::new();
        for l in &self.limits {
            let g = &self.generators[l.generator].1;
            let restricted = g.limit_in(l.var);
            let sol = restricted.holomorphic_solution(order)?;
            let ann = restricted.annihilates1(&sol)?.is_ok();
            out.push(LimitCheck {
                row: self.no,
                var: l.var,
                matches_printed: restricted.equal_up_to_scale(&l.printed),
                restricted,
                printed: l.printed.clone(),
                annihilates: ann,
                known_defect: l.known_defect.clone(),
            });
        }
        Ok(out)
    }
}
