//! Run configuration: command-line flags over an optional TOML file over
//! built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::assort::AssortType;
use crate::community::ModularityVariant;
use crate::error::{Error, Result};
use crate::iot::DEFAULT_TOL_BALANCE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn ext(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Strengths,
    Assort,
    Pagerank,
    Hits,
    Communities,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Strengths,
        Measure::Assort,
        Measure::Pagerank,
        Measure::Hits,
        Measure::Communities,
    ];
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Input files or directories (every .csv/.json inside).
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Reject sector codes outside the 44-sector STAN registry.
    #[arg(long)]
    pub strict_registry: bool,
    /// TOML file with defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Relative tolerance for the row/column balance identities.
    #[arg(long)]
    pub tol_balance: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct IterArgs {
    /// L1 convergence tolerance for power iterations.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap for power iterations
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RankArgs {
    /// Rows kept in each rank table
    #[arg(long)]
    pub top_k: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PagerankArgs {
    /// Damping factor; repeat for a sensitivity run.
    #[arg(long = "gamma")]
    pub gamma: Vec<f64>,
    /// Auxiliary importance: `uniform`, a table column (`value_added`,
    /// `total_output`, any aux column), or `file:<path>` with `node,value`.
    #[arg(long)]
    pub aux: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct AssortArgs {
    /// Coefficient types (default: all five).
    #[arg(long = "type", value_parser = parse_assort_type)]
    pub types: Vec<AssortType>,
    /// Add delete-one standard errors
    #[arg(long)]
    pub jackknife: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommunityArgs {
    /// Modularity null model: `symmetrized` or `directed`
    #[arg(long, value_parser = parse_variant)]
    pub variant: Option<ModularityVariant>,
}

fn parse_assort_type(s: &str) -> std::result::Result<AssortType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> std::result::Result<ModularityVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Keys accepted in a `--config` TOML file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    strict_registry: Option<bool>,
    tol_balance: Option<f64>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    top_k: Option<usize>,
    gamma: Option<Vec<f64>>,
    aux: Option<String>,
    types: Option<Vec<String>>,
    jackknife: Option<bool>,
    variant: Option<String>,
    measures: Option<Vec<Measure>>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::NoSuchInput(path.to_path_buf())
            } else {
                Error::io(format!("reading {}", path.display()), e)
            }
        })?;
        toml::from_str(&text).map_err(|e| Error::Parameter(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub strict_registry: bool,
    pub tol_balance: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub top_k: usize,
    pub gammas: Vec<f64>,
    pub aux: String,
    pub types: Vec<AssortType>,
    pub jackknife: bool,
    pub variant: ModularityVariant,
    pub measures: Vec<Measure>,
}

#[derive(Debug, Default)]
pub struct Overrides {
    pub iter: IterArgs,
    pub rank: RankArgs,
    pub pagerank: PagerankArgs,
    pub assort: AssortArgs,
    pub community: CommunityArgs,
    pub measures: Vec<Measure>,
}

impl RunConfig {
    pub fn resolve(common: &CommonArgs, o: Overrides) -> Result<Self> {
        let file = match &common.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let types = if !o.assort.types.is_empty() {
            o.assort.types
        } else if let Some(names) = file.types {
            names.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?
        } else {
            AssortType::ALL.to_vec()
        };
        let variant = match (o.community.variant, file.variant) {
            (Some(v), _) => v,
            (None, Some(s)) => s.parse()?,
            (None, None) => ModularityVariant::default(),
        };
        let cfg = RunConfig {
            inputs: common.inputs.clone(),
            out: common.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            format: common.format.or(file.format).unwrap_or(OutputFormat::Csv),
            strict_registry: common.strict_registry || file.strict_registry.unwrap_or(false),
            tol_balance: common.tol_balance.or(file.tol_balance).unwrap_or(DEFAULT_TOL_BALANCE),
            tol: o.iter.tol.or(file.tol).unwrap_or(1e-12),
            max_iter: o.iter.max_iter.or(file.max_iter).unwrap_or(100_000),
            top_k: o.rank.top_k.or(file.top_k).unwrap_or(5),
            gammas: if o.pagerank.gamma.is_empty() {
                file.gamma.unwrap_or_else(|| vec![0.85])
            } else {
                o.pagerank.gamma
            },
            aux: o.pagerank.aux.or(file.aux).unwrap_or_else(|| "value_added".into()),
            types,
            jackknife: o.assort.jackknife || file.jackknife.unwrap_or(false),
            variant,
            measures: if !o.measures.is_empty() {
                o.measures
            } else {
                file.measures.unwrap_or_else(|| Measure::ALL.to_vec())
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if !(self.tol_balance > 0.0) {
            return bad(format!("tol-balance must be positive, got {}", self.tol_balance));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return bad("max-iter must be at least 1".into());
        }
        if self.top_k == 0 {
            return bad("top-k must be at least 1".into());
        }
        if let Some(g) = self.gammas.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return bad(format!("gamma must lie in [0, 1], got {g}"));
        }
        if self.aux.is_empty() || self.aux == "file:" {
            return bad("empty aux source".into());
        }
        Ok(())
    }
}
