use std::path::{Path, PathBuf};

use serde::Deserialize;

use cyfibre::rat::parse_rat;
use cyfibre::weyl::{model_preset, ModelParams};
use cyfibre::Rat;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Settings read from `--config`; every field may be overridden by a flag.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub n: Option<u32>,
    pub a0: Option<String>,
    pub a1: Option<String>,
    pub a2: Option<String>,
    pub d1: Option<usize>,
    pub d2: Option<usize>,
    pub t_order: Option<usize>,
    pub gamma: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let s = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&s).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Resolved settings of one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub params: Option<ModelParams>,
    pub d1: usize,
    pub d2: usize,
    pub t_order: usize,
    pub gamma: usize,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

fn rat(name: &str, s: &Option<String>) -> Result<Option<Rat>, CliError> {
    s.as_deref().map(|v| parse_rat(v).map_err(|e| CliError::Usage(format!("--{name}: {e}")))).transpose()
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: &crate::Global) -> Result<Self, CliError> {
        let pick = |a: &Option<String>, b: &Option<String>| a.clone().or_else(|| b.clone());
        let preset = pick(&flags.preset, &file.preset);
        let n = flags.n.or(file.n);
        let a = [pick(&flags.a0, &file.a0), pick(&flags.a1, &file.a1), pick(&flags.a2, &file.a2)];
        let inline = n.is_some() || a.iter().any(Option::is_some);
        let params = match (&preset, inline) {
            (Some(_), true) => return Err(CliError::Usage("give either --preset or --n/--a0/--a1/--a2, not both".into())),
            (Some(p), false) if p.starts_with("row") => None,
            (Some(p), false) => {
                Some(model_preset(p).map_err(|e| CliError::Usage(e.to_string()))?.1)
            }
            (None, true) => {
                let n = n.ok_or_else(|| CliError::Usage("--n is required with inline parameters".into()))?;
                let [a0, a1, a2] = [rat("a0", &a[0])?, rat("a1", &a[1])?, rat("a2", &a[2])?];
                match (a0, a1, a2) {
                    (Some(a0), Some(a1), Some(a2)) => {
                        Some(ModelParams::new(n, a0, a1, a2).map_err(|e| CliError::Usage(e.to_string()))?)
                    }
                    _ => return Err(CliError::Usage("--a0, --a1 and --a2 are all required".into())),
                }
            }
            (None, false) => Some(ModelParams::main()),
        };
        let d1 = flags.d1.or(file.d1).unwrap_or(10);
        let d2 = flags.d2.or(file.d2).unwrap_or(2);
        let t_order = flags.t_order.or(file.t_order).unwrap_or(2);
        if d1 == 0 || d2 == 0 || t_order == 0 {
            return Err(CliError::Usage("caps must be positive".into()));
        }
        let gamma = flags.gamma.or(file.gamma).unwrap_or(1);
        if !(1..=2).contains(&gamma) {
            return Err(CliError::Usage(format!("--gamma must be 1 or 2, got {gamma}")));
        }
        Ok(Self {
            preset,
            params,
            d1,
            d2,
            t_order,
            gamma,
            format: flags.format.or(file.format),
            out: flags.out.clone().or(file.out),
        })
    }

    pub fn model(&self) -> Result<&ModelParams, CliError> {
        self.params.as_ref().ok_or_else(|| {
            CliError::Usage(format!("`{}` is a Picard-Fuchs table row; this command needs model parameters", self.preset.as_deref().unwrap_or("")))
        })
    }

    /// The main example, the only model with coupling data.
    pub fn require_main(&self) -> Result<(), CliError> {
        if self.model()? != &ModelParams::main() {
            return Err(CliError::Usage("couplings are only available for the main example (preset main4)".into()));
        }
        Ok(())
    }
}
