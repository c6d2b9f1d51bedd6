//! Command-line flags, the optional TOML config file, and their merge into a
//! validated [`RunConfig`]. Flags win over the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use timemap_core::{AnnulusProblem, Branch, Interval, ProblemKind};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "timemap", version, about = "Time-map solutions of Emden and Gelfand problems on intervals and annuli")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandName {
    Norms,
    Profile,
    Bifurcation,
    Converge,
    Residual,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Peak values and L^q norms of the Emden solution, with a shooting check.
    Norms(Flags),
    /// A solution against its limit profile on a grid.
    Profile(Flags),
    /// The λ(μ) curve of the Gelfand problem and its fold.
    Bifurcation(Flags),
    /// Sup-distance to the limit profile along a parameter sweep.
    Converge(Flags),
    /// Finite-difference PDE residual of a radial solution.
    Residual(Flags),
}

impl Command {
    pub fn split(self) -> (CommandName, Flags) {
        match self {
            Command::Norms(f) => (CommandName::Norms, f),
            Command::Profile(f) => (CommandName::Profile, f),
            Command::Bifurcation(f) => (CommandName::Bifurcation, f),
            Command::Converge(f) => (CommandName::Converge, f),
            Command::Residual(f) => (CommandName::Residual, f),
        }
    }
}

/// Problem family. `interval` is the bare 1-D problem on `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Kind {
    Interval,
    PowerPlanar,
    PowerHigher,
    HardyHenon,
    ExpPlanar,
    ExpHigher,
}

impl Kind {
    pub fn annulus(self) -> Option<ProblemKind> {
        Some(match self {
            Kind::Interval => return None,
            Kind::PowerPlanar => ProblemKind::PowerPlanar,
            Kind::PowerHigher => ProblemKind::PowerHigher,
            Kind::HardyHenon => ProblemKind::HardyHenon,
            Kind::ExpPlanar => ProblemKind::ExpPlanar,
            Kind::ExpHigher => ProblemKind::ExpHigher,
        })
    }

    pub fn is_exp(self) -> bool {
        matches!(self, Kind::ExpPlanar | Kind::ExpHigher)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum BranchArg {
    Minimal,
    Unstable,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Minimal => Branch::Minimal,
            BranchArg::Unstable => Branch::Unstable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum RegimeArg {
    /// p → ∞, global tent profile.
    PInfty,
    /// p ↘ 1, sine profile of u/ξ.
    POne,
    /// p → ∞, rescaled profile against the Liouville profile.
    Local,
    /// λ → 0 on the unstable branch, δu against 2√2 G.
    LambdaZero,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Structured config file (TOML); flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Space dimension.
    #[arg(long = "N")]
    pub dim: Option<u32>,
    /// Inner radius (or left end of the interval).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Outer radius (or right end of the interval).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Peak value of a Gelfand solution (instead of --lambda/--branch).
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Norm exponents, comma separated; `p` stands for the exponent itself.
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<String>>,
    /// Parameter values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sweep: Option<Vec<f64>>,
    /// Grid size `N`, or `lo:hi:N` for an explicit range.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Window `lo:hi` for the local comparison.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    fn into_text(self) -> String {
        match self {
            Scalar::Number(x) => x.to_string(),
            Scalar::Text(t) => t,
        }
    }
}

/// Config file contents; every entry optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    kind: Option<Kind>,
    #[serde(rename = "N")]
    dim: Option<u32>,
    a: Option<f64>,
    b: Option<f64>,
    p: Option<f64>,
    lambda: Option<f64>,
    mu: Option<f64>,
    branch: Option<BranchArg>,
    q: Option<Vec<Scalar>>,
    sweep: Option<Vec<f64>>,
    grid: Option<Scalar>,
    window: Option<String>,
    regime: Option<RegimeArg>,
    out: Option<PathBuf>,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

/// Norm exponent: a number or the solution's own exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QSpec {
    Value(f64),
    P,
}

/// Grid request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    Count(usize),
    Range { lo: f64, hi: f64, n: usize },
}

/// Merged and validated settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandName,
    pub kind: Kind,
    pub dim: Option<u32>,
    pub a: f64,
    pub b: f64,
    pub p: Option<f64>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub branch: Option<Branch>,
    pub q: Vec<QSpec>,
    pub sweep: Option<Vec<f64>>,
    pub grid: Option<Grid>,
    pub window: (f64, f64),
    pub regime: Option<RegimeArg>,
    pub out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_q(items: Vec<String>) -> Result<Vec<QSpec>, CliError> {
    items
        .into_iter()
        .map(|s| {
            let s = s.trim();
            if s == "p" {
                return Ok(QSpec::P);
            }
            let q: f64 = s.parse().map_err(|_| usage(format!("bad norm exponent `{s}`")))?;
            if q > 0.0 && q.is_finite() {
                Ok(QSpec::Value(q))
            } else {
                Err(usage(format!("norm exponent q must be positive, got {q}")))
            }
        })
        .collect()
}

fn parse_grid(text: &str) -> Result<Grid, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let count = |s: &str| -> Result<usize, CliError> {
        let n: usize = s.trim().parse().map_err(|_| usage(format!("bad grid size `{s}`")))?;
        if n < 2 {
            return Err(usage("grid needs at least 2 points"));
        }
        Ok(n)
    };
    match parts.as_slice() {
        [n] => Ok(Grid::Count(count(n)?)),
        [lo, hi, n] => {
            let lo: f64 = lo.trim().parse().map_err(|_| usage(format!("bad grid start `{lo}`")))?;
            let hi: f64 = hi.trim().parse().map_err(|_| usage(format!("bad grid end `{hi}`")))?;
            if !(lo < hi) {
                return Err(usage("grid range needs lo < hi"));
            }
            Ok(Grid::Range { lo, hi, n: count(n)? })
        }
        _ => Err(usage(format!("grid must be `N` or `lo:hi:N`, got `{text}`"))),
    }
}

fn parse_window(text: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi] = parts.as_slice() else {
        return Err(usage(format!("window must be `lo:hi`, got `{text}`")));
    };
    let lo: f64 = lo.trim().parse().map_err(|_| usage(format!("bad window start `{lo}`")))?;
    let hi: f64 = hi.trim().parse().map_err(|_| usage(format!("bad window end `{hi}`")))?;
    if !(lo < hi) {
        return Err(usage("window needs lo < hi"));
    }
    Ok((lo, hi))
}

impl RunConfig {
    pub fn resolve(command: CommandName, flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let kind = flags.kind.or(file.kind).unwrap_or(Kind::Interval);
        let a = flags.a.or(file.a).ok_or_else(|| usage("missing --a"))?;
        let b = flags.b.or(file.b).ok_or_else(|| usage("missing --b"))?;
        let q = match flags.q {
            Some(q) => Some(q),
            None => file.q.map(|v| v.into_iter().map(Scalar::into_text).collect()),
        };
        let grid = match flags.grid.or_else(|| file.grid.map(Scalar::into_text)) {
            Some(text) => Some(parse_grid(&text)?),
            None => None,
        };
        let window = match flags.window.or(file.window) {
            Some(text) => parse_window(&text)?,
            None => (-4.0, 4.0),
        };
        let config = RunConfig {
            command,
            kind,
            dim: flags.dim.or(file.dim),
            a,
            b,
            p: flags.p.or(file.p),
            lambda: flags.lambda.or(file.lambda),
            mu: flags.mu.or(file.mu),
            branch: flags.branch.or(file.branch).map(Branch::from),
            q: parse_q(q.unwrap_or_default())?,
            sweep: flags.sweep.or(file.sweep),
            grid,
            window,
            regime: flags.regime.or(file.regime),
            out: flags.out.or(file.out),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(usage(format!("need finite a < b, got a={} b={}", self.a, self.b)));
        }
        if let Some(kind) = self.kind.annulus() {
            let dim = self.dim().ok_or_else(|| usage("missing --N for an annulus kind"))?;
            // Validates dimension and radii; the parameter is checked per command.
            let probe = if kind.is_power() { 2.0 } else { 1.0 };
            AnnulusProblem::new(kind, dim, self.a, self.b, probe).map_err(|e| usage(e.to_string()))?;
        }
        if let Some(p) = self.p {
            if !(p > 1.0 && p.is_finite()) {
                return Err(usage(format!("exponent p must exceed 1, got {p}")));
            }
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(usage(format!("lambda must be positive, got {l}")));
            }
        }
        if let Some(mu) = self.mu {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(usage(format!("mu must be positive, got {mu}")));
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.is_empty() {
                return Err(usage("empty sweep list"));
            }
            if sweep.iter().any(|x| !x.is_finite()) {
                return Err(usage("sweep values must be finite"));
            }
        }
        Ok(())
    }

    /// `N`, defaulting to 2 for the planar kinds.
    pub fn dim(&self) -> Option<u32> {
        match self.kind {
            Kind::PowerPlanar | Kind::ExpPlanar => Some(self.dim.unwrap_or(2)),
            _ => self.dim,
        }
    }

    /// The 1-D interval the computation reduces to.
    pub fn reduced_interval(&self) -> Result<Interval, CliError> {
        match self.annulus(if self.kind.is_exp() { 1.0 } else { 2.0 })? {
            Some(problem) => Ok(problem.reduce_interval()),
            None => Interval::new(self.a, self.b).map_err(|e| usage(e.to_string())),
        }
    }

    /// The annulus problem with the given parameter, or `None` for `interval`.
    pub fn annulus(&self, parameter: f64) -> Result<Option<AnnulusProblem>, CliError> {
        let Some(kind) = self.kind.annulus() else {
            return Ok(None);
        };
        let dim = self.dim().ok_or_else(|| usage("missing --N for an annulus kind"))?;
        AnnulusProblem::new(kind, dim, self.a, self.b, parameter)
            .map(Some)
            .map_err(|e| usage(e.to_string()))
    }
}
