use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::json;

use cyfibre::coupling::{genus_zero, main_example_yukawa_corrected, verify_pf_constraints, SeedSet, YukawaSet};
use cyfibre::mirror::{build_mirror, tau_derivations, x_direct, x_recursive, TExpansion};
use cyfibre::modular::{fit as fit_series, verify_j_inversion, FitSpec, Level};
use cyfibre::periods::{frobenius_solve, nonhom_slice_check, slice_constants, wronskian_check, ModelParams};
use cyfibre::rat::ri;
use cyfibre::series::{qexp_from_json, QExp, Series1};
use cyfibre::weyl::pf_system_presets;

use crate::config::{Format, RunConfig};
use crate::CliError;

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn no_csv(cmd: &str) -> CliError {
    CliError::Usage(format!("`{cmd}` has no csv output"))
}

#[derive(Args, Debug)]
pub struct PeriodsArgs {
    /// Only the constants of this slice.
    #[arg(long)]
    slice_constants: Option<usize>,
}

pub fn periods(cfg: &RunConfig, args: &PeriodsArgs) -> Result<String, CliError> {
    let p = cfg.model()?;
    let ps = frobenius_solve(p, cfg.d1, cfg.d2)?;
    let slices = match args.slice_constants {
        Some(i) => vec![slice_constants(&ps, i)?],
        None => (0..=cfg.d2)
            .take_while(|&i| p.n as usize * i <= cfg.d1)
            .map(|i| slice_constants(&ps, i))
            .collect::<Result<_, _>>()?,
    };
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = if args.slice_constants.is_some() { json!({ "params": p }) } else { ps.to_json() };
            v["slices"] = slices.iter().map(|s| s.to_json()).collect();
            Ok(pretty(&v))
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "n = {}, a0 = {}, a1 = {}, a2 = {}", p.n, p.a0, p.a1, p.a2);
            if args.slice_constants.is_none() {
                let row = ps.slice(0, 0)?;
                let cs: Vec<String> = (0..=row.cap()).map(|k| row.coeff(k).to_string()).collect();
                let _ = writeln!(s, "Pi0(z1, 0) = {}", cs.join(", "));
            }
            for sd in &slices {
                let _ = writeln!(s, "slice {}: c0 = {}, c1 = {}, ct1 = {}", sd.i, sd.c0, sd.c1, sd.ct1);
                let _ = writeln!(s, "  A = {}", sd.a);
                let _ = writeln!(s, "  B = {}", sd.b);
            }
            Ok(s)
        }
        Format::Csv => Err(no_csv("periods")),
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Invariants {
    /// BPS numbers `n`.
    Bps,
    /// Gromov-Witten invariants `N`.
    Gw,
}

#[derive(Args, Debug)]
pub struct GwArgs {
    #[arg(long, value_enum, default_value = "bps")]
    invariants: Invariants,
}

pub fn gw(cfg: &RunConfig, args: &GwArgs) -> Result<String, CliError> {
    cfg.require_main()?;
    let gz = genus_zero(cfg.d1, cfg.d2)?;
    let table = gz.invariants(cfg.gamma, cfg.d1 as u32, cfg.d2 as u32)?;
    let seeds = SeedSet::main();
    let seed = seeds.get(0, cfg.gamma - 1)?;
    let note = format!("d2 = 0 column from the seed C_11 = {} + {} E4: {}", seed.constant, seed.e4, seed.source);
    let bps = matches!(args.invariants, Invariants::Bps);
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(format!("{}# {note}\n", table.to_csv(bps))),
        Format::Json => {
            let mut v = table.to_json();
            v["seed"] = json!(note);
            Ok(pretty(&v))
        }
        Format::Text => {
            let csv = table.to_csv(bps);
            let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
            let w = rows.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
            let mut s = format!("{} gamma{}\n", if bps { "n" } else { "N" }, cfg.gamma);
            for r in rows {
                let cells: Vec<String> = r.iter().map(|c| format!("{c:>w$}")).collect();
                let _ = writeln!(s, "{}", cells.join(" "));
            }
            let _ = writeln!(s, "{note}");
            Ok(s)
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Adds `z1^I z2^J` to the numerator of `W^(4-K,K)` before checking, as `K,I,J`.
    #[arg(long, value_parser = parse_triple)]
    perturb: Option<(usize, u32, u32)>,
}

fn parse_triple(s: &str) -> Result<(usize, u32, u32), String> {
    let v: Vec<&str> = s.split(',').collect();
    if v.len() != 3 {
        return Err("expected K,I,J".into());
    }
    let k: usize = v[0].trim().parse().map_err(|e| format!("{e}"))?;
    if k > 4 {
        return Err("K must be in 0..=4".into());
    }
    Ok((k, v[1].trim().parse().map_err(|e| format!("{e}"))?, v[2].trim().parse().map_err(|e| format!("{e}"))?))
}

#[derive(Default)]
struct Report {
    rows: Vec<(&'static str, String, String)>,
}

impl Report {
    fn check(&mut self, name: impl Into<String>, r: Result<bool, cyfibre::Error>, detail: &str) {
        let name = name.into();
        match r {
            Ok(true) => self.rows.push(("PASS", name, String::new())),
            Ok(false) => self.rows.push(("FAIL", name, detail.to_string())),
            Err(e) => self.rows.push(("FAIL", name, e.to_string())),
        }
    }

    fn note(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.rows.push(("NOTE", name.into(), detail.into()));
    }

    fn failures(&self) -> Vec<&str> {
        self.rows.iter().filter(|r| r.0 == "FAIL").map(|r| r.1.as_str()).collect()
    }
}

fn model_checks(rep: &mut Report, p: &ModelParams, cfg: &RunConfig, perturb: Option<(usize, u32, u32)>) {
    let ps = match frobenius_solve(p, cfg.d1, cfg.d2) {
        Ok(ps) => ps,
        Err(e) => return rep.check("periods", Err(e), ""),
    };
    rep.check("periods annihilated by L1, L2", ps.check_annihilation().map(|r| r.is_ok()), "nonzero residual");
    rep.check("Wronskian closed form", wronskian_check(&ps), "differs");
    for i in (0..=cfg.d2).take_while(|&i| p.n as usize * i <= cfg.d1) {
        rep.check(format!("slice {i} equations"), nonhom_slice_check(&ps, i), "differs");
        rep.check(format!("slice {i} closed form"), slice_constants(&ps, i).map(|_| true), "");
    }
    let mm = match build_mirror(&ps) {
        Ok(mm) => mm,
        Err(e) => return rep.check("mirror map", Err(e), ""),
    };
    rep.check("mirror map round trip", mm.round_trip(), "z(q(z)) differs from z");
    if p.balanced() {
        let r = tau_derivations(&ps).and_then(|td| Ok(x_recursive(&ps, &td)? == x_direct(&ps, &mm)?));
        rep.check("X recursion vs direct", r, "differs");
    }
    if p == &ModelParams::main() {
        rep.check("modular mirror identity to q^12", verify_j_inversion(12), "fails");
        let mut set = main_example_yukawa_corrected();
        if let Some((k, i, j)) = perturb {
            set = YukawaSet { w: set.w.iter().enumerate().map(|(m, w)| if m == k { w.perturb_numerator(i, j, ri(1)) } else { w.clone() }).collect() };
            rep.note("perturbation", format!("z1^{i} z2^{j} added to the numerator of W^({},{k})", 4 - k));
        }
        let r = set.hat_series(cfg.d1, cfg.d2).and_then(|h| verify_pf_constraints(&h, p));
        match r {
            Ok(rep2) => match &rep2.first_residual {
                None => rep.check(format!("{} Yukawa constraints", rep2.constraints), Ok(true), ""),
                Some((d, label)) => rep.check(
                    format!("{} Yukawa constraints", rep2.constraints),
                    Ok(false),
                    &format!("first residual at total degree {d} in {label}"),
                ),
            },
            Err(e) => rep.check("Yukawa constraints", Err(e), ""),
        }
        if perturb.is_none() {
            match genus_zero(cfg.d1, cfg.d2) {
                Ok(gz) => {
                    rep.check("three-point identities", Ok(true), "");
                    for g in 1..=2 {
                        let r = gz.invariants(g, cfg.d1 as u32, cfg.d2 as u32).map(|t| t.round_trip());
                        rep.check(format!("multicover round trip gamma{g}"), r, "differs");
                    }
                }
                Err(e) => rep.check("three-point identities", Err(e), ""),
            }
        }
    }
}

fn limit_checks(rep: &mut Report, only: Option<usize>) {
    let rows = match pf_system_presets() {
        Ok(r) => r,
        Err(e) => return rep.check("Picard-Fuchs table", Err(e), ""),
    };
    for row in rows.iter().filter(|r| only.map_or(true, |n| r.no == n)) {
        match row.check_limits(8) {
            Ok(cs) => {
                for c in cs {
                    let name = format!("row{} z{}-limit", c.row, c.var + 1);
                    rep.check(name.clone() + " annihilates", Ok(c.annihilates), "restriction does not annihilate its solution");
                    match (c.matches_printed, &c.known_defect) {
                        (true, _) => rep.check(name + " matches printed", Ok(true), ""),
                        (false, Some(d)) => rep.note(name, format!("known misprint: {d}")),
                        (false, None) => rep.check(name + " matches printed", Ok(false), &format!("{} vs {}", c.restricted, c.printed)),
                    }
                }
            }
            Err(e) => rep.check(format!("row{}", row.no), Err(e), ""),
        }
    }
}

pub fn verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<(String, Result<(), CliError>), CliError> {
    let mut rep = Report::default();
    let row = cfg.preset.as_deref().and_then(|p| p.strip_prefix("row"));
    match row {
        Some(n) => {
            let n: usize = n.parse().map_err(|_| CliError::Usage(format!("unknown preset `row{n}`")))?;
            if n > 8 {
                return Err(CliError::Usage(format!("unknown preset `row{n}`")));
            }
            if args.perturb.is_some() {
                return Err(CliError::Usage("--perturb needs the main example".into()));
            }
            limit_checks(&mut rep, Some(n));
        }
        None => {
            let p = cfg.model()?.clone();
            if args.perturb.is_some() {
                cfg.require_main()?;
            }
            model_checks(&mut rep, &p, cfg, args.perturb);
            limit_checks(&mut rep, None);
        }
    }
    let failed = rep.failures();
    let verdict = if failed.is_empty() { Ok(()) } else { Err(CliError::Verify(failed.join("; "))) };
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = String::new();
            for (st, name, d) in &rep.rows {
                if d.is_empty() {
                    let _ = writeln!(s, "{st} {name}");
                } else {
                    let _ = writeln!(s, "{st} {name}: {d}");
                }
            }
            let _ = writeln!(s, "{} checks, {} failed", rep.rows.iter().filter(|r| r.0 != "NOTE").count(), failed.len());
            s
        }
        Format::Json => {
            let rows: Vec<_> = rep.rows.iter().map(|(st, n, d)| json!({ "status": st, "check": n, "detail": d })).collect();
            pretty(&json!({ "passed": failed.is_empty(), "checks": rows }))
        }
        Format::Csv => return Err(no_csv("verify")),
    };
    Ok((text, verdict))
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Source {
    /// `C_2222` of the main example.
    C2222,
    /// `F(gamma1)`.
    FGamma1,
    /// `F(gamma2)`.
    FGamma2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LevelArg {
    Sl2z,
    G0_2,
    G0_3,
    G2,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Sl2z => Level::SL2Z,
            LevelArg::G0_2 => Level::Gamma0_2,
            LevelArg::G0_3 => Level::Gamma0_3,
            LevelArg::G2 => Level::Gamma2,
        }
    }
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// q-series as JSON (`base_den`, `min_exp`, `cap`, `weight`, `terms`).
    #[arg(long, conflicts_with = "source", required_unless_present = "source")]
    input: Option<PathBuf>,
    /// Computed series of the main example; the `t^part` coefficient is fitted.
    #[arg(long, value_enum)]
    source: Option<Source>,
    #[arg(long, default_value_t = 1)]
    part: usize,
    #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
    weight: i64,
    /// Further weights allowed in the fit.
    #[arg(long, allow_hyphen_values = true)]
    extra_weight: Vec<i64>,
    #[arg(long, value_enum, default_value = "sl2z")]
    level: LevelArg,
    /// Defaults to `48 part` with `--source`, else 0.
    #[arg(long, allow_hyphen_values = true)]
    eta_power: Option<i64>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    q_shift: i64,
    /// Defaults to 1 with `--source`, else 0.
    #[arg(long)]
    max_e2: Option<u32>,
}

fn source_series(cfg: &RunConfig, src: Source, part: usize) -> Result<QExp, CliError> {
    cfg.require_main()?;
    if part > cfg.t_order {
        return Err(CliError::Usage(format!("part {part} beyond --t-order {}", cfg.t_order)));
    }
    let d2 = cfg.d2.max(cfg.t_order);
    let gz = genus_zero(cfg.d1, d2)?;
    let te = match src {
        Source::C2222 => {
            let slices: Vec<Series1> = (0..=d2).map(|k| gz.couplings[4].slice_z2(k)).collect::<Result<_, _>>()?;
            TExpansion::from_q2_slices(&slices, 4)?
        }
        Source::FGamma1 => gz.potential(1)?.t_expansion(4)?,
        Source::FGamma2 => gz.potential(2)?.t_expansion(4)?,
    };
    te.parts.get(part).cloned().ok_or_else(|| CliError::Usage(format!("part {part} not computed")))
}

pub fn fit(cfg: &RunConfig, args: &FitArgs) -> Result<String, CliError> {
    let (f, from_source) = match (&args.input, args.source) {
        (Some(p), _) => {
            let s = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            (qexp_from_json(&s).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?, false)
        }
        (None, Some(src)) => (source_series(cfg, src, args.part)?, true),
        (None, None) => return Err(CliError::Usage("give --input or --source".into())),
    };
    let spec = FitSpec {
        weight: args.weight,
        extra_weights: args.extra_weight.clone(),
        level: args.level.into(),
        eta_power: args.eta_power.unwrap_or(if from_source { 48 * args.part as i64 } else { 0 }),
        q_shift: args.q_shift,
        max_e2: args.max_e2.unwrap_or(u32::from(from_source)),
    };
    let r = fit_series(&f, &spec)?;
    match cfg.format.unwrap_or(Format::Text) {
        Format::Text => Ok(format!("{r}\n")),
        Format::Json => Ok(pretty(&r.to_json())),
        Format::Csv => Err(no_csv("fit")),
    }
}
