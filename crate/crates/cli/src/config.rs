use std::path::PathBuf;

use ccr_core::algebra::{Lambda, RepresentationKind};
use ccr_core::weyl::MAX_WEYL_PARAMETER;
use serde::Serialize;

use crate::args::{FormatArg, KindArg, KindArgs, PrecisionArg, SweepArgs, VerifyArgs};
use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Extended,
    F64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginPolicy {
    Auto,
    Fixed(usize),
}

impl MarginPolicy {
    /// Margin for exponential (Weyl-type) checks.
    pub fn weyl(self, dim: usize) -> usize {
        match self {
            Self::Auto => dim.div_ceil(4),
            Self::Fixed(m) => m,
        }
    }

    /// Margin for algebraic identities, which break only at the corner.
    pub fn identity(self) -> usize {
        match self {
            Self::Auto => 1,
            Self::Fixed(m) => m,
        }
    }

    /// `"auto"` or the fixed margin as a number.
    fn echo(self) -> serde_json::Value {
        match self {
            Self::Auto => "auto".into(),
            Self::Fixed(m) => m.into(),
        }
    }
}

/// Validated configuration shared by `verify` and `sweep`.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: &'static str,
    pub kind: RepresentationKind,
    pub dims: Vec<usize>,
    pub margin: MarginPolicy,
    pub grid: Vec<(f64, f64)>,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub precision: Precision,
    pub bits: u32,
}

/// The part of the configuration echoed into reports. The output path is left
/// out: it decides where the bytes go, not what they are.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub kind: String,
    pub lambda: Option<String>,
    pub dims: Vec<usize>,
    pub margin: serde_json::Value,
    pub grid: Vec<[f64; 2]>,
    pub tol: Option<f64>,
    pub format: Format,
    pub seed: Option<u64>,
    pub precision: Option<Precision>,
    pub bits: Option<u32>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn parse_kind(kind: KindArg, lambda: Option<&str>) -> CliResult<RepresentationKind> {
    match (kind, lambda) {
        (KindArg::Lambda, Some(l)) => {
            let l: Lambda = l.parse().map_err(|e| config_err(format!("--lambda: {e}")))?;
            Ok(RepresentationKind::Lambda(l))
        }
        (KindArg::Lambda, None) => Err(config_err("--kind lambda requires --lambda <p/q>")),
        (_, Some(_)) => Err(config_err("--lambda is only meaningful with --kind lambda")),
        (KindArg::Fock, None) => Ok(RepresentationKind::Fock),
        (KindArg::Antifock, None) => Ok(RepresentationKind::AntiFock),
    }
}

fn kind_from(args: &KindArgs) -> CliResult<RepresentationKind> {
    parse_kind(args.kind, args.lambda.as_deref())
}

pub fn parse_margin(text: &str) -> CliResult<MarginPolicy> {
    match text.trim() {
        "auto" => Ok(MarginPolicy::Auto),
        m => m
            .parse()
            .map(MarginPolicy::Fixed)
            .map_err(|_| config_err(format!("--margin: expected an integer or `auto`, got `{m}`"))),
    }
}

/// Parses `s,t;s,t;...`.
pub fn parse_grid(text: &str) -> CliResult<Vec<(f64, f64)>> {
    let mut grid = Vec::new();
    for (i, pair) in text.split(';').map(str::trim).filter(|p| !p.is_empty()).enumerate() {
        let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
        let bad = || config_err(format!("--grid: point {} `{pair}` is not of the form `s,t`", i + 1));
        let [s, t] = parts.as_slice() else { return Err(bad()) };
        let (s, t): (f64, f64) = (s.parse().map_err(|_| bad())?, t.parse().map_err(|_| bad())?);
        for x in [s, t] {
            if !x.is_finite() || x.abs() > MAX_WEYL_PARAMETER {
                return Err(config_err(format!(
                    "--grid: parameter {x} outside [-{MAX_WEYL_PARAMETER}, {MAX_WEYL_PARAMETER}]"
                )));
            }
        }
        grid.push((s, t));
    }
    if grid.is_empty() {
        return Err(config_err("--grid: at least one (s,t) point is required"));
    }
    Ok(grid)
}

pub fn default_grid() -> Vec<(f64, f64)> {
    let values = [-0.5, -0.3, -0.1, 0.1, 0.3, 0.5];
    values.iter().flat_map(|&s| values.iter().map(move |&t| (s, t))).collect()
}

fn parse_dims(text: &str) -> CliResult<Vec<usize>> {
    let mut dims = text
        .split(',')
        .map(str::trim)
        .filter(|d| !d.is_empty())
        .map(|d| d.parse::<usize>().map_err(|_| config_err(format!("--dims: `{d}` is not a dimension"))))
        .collect::<CliResult<Vec<_>>>()?;
    dims.sort_unstable();
    dims.dedup();
    Ok(dims)
}

fn check_tol(tol: Option<f64>) -> CliResult<Option<f64>> {
    match tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(config_err("--tol must be a positive number")),
        t => Ok(t),
    }
}

fn check_dim(kind: &RepresentationKind, dim: usize, margin: MarginPolicy) -> CliResult<()> {
    if dim < 2 {
        return Err(config_err(format!("dimension must be at least 2, got {dim}")));
    }
    let lambda = matches!(kind, RepresentationKind::Lambda(_));
    if lambda && dim % 2 == 0 {
        return Err(config_err(format!("the Λ window {{-K..K}} needs an odd dimension 2K+1, got {dim}")));
    }
    for m in [margin.weyl(dim), margin.identity()] {
        let used = if lambda { 2 * m } else { m };
        if used >= dim {
            return Err(config_err(format!("margin {m} leaves no interior at dimension {dim}")));
        }
    }
    Ok(())
}

fn format_from(f: FormatArg) -> Format {
    match f {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    }
}

impl RunConfig {
    pub fn from_verify(a: &VerifyArgs) -> CliResult<Self> {
        let kind = kind_from(&a.kind)?;
        let margin = parse_margin(&a.margin)?;
        check_dim(&kind, a.dim, margin)?;
        let grid = match &a.grid {
            Some(g) => parse_grid(g)?,
            None => default_grid(),
        };
        Ok(Self {
            command: "verify",
            kind,
            dims: vec![a.dim],
            margin,
            grid,
            tol: check_tol(a.tol)?,
            format: format_from(a.output.format),
            out: a.output.out.clone(),
            seed: a.seed,
            precision: Precision::F64,
            bits: 0,
        })
    }

    pub fn from_sweep(a: &SweepArgs) -> CliResult<Self> {
        let kind = kind_from(&a.kind)?;
        let margin = parse_margin(&a.margin)?;
        let dims = parse_dims(&a.dims)?;
        if dims.len() < 2 {
            return Err(config_err("--dims: a sweep needs at least two distinct dimensions"));
        }
        for &d in &dims {
            check_dim(&kind, d, margin)?;
        }
        if a.bits < 64 {
            return Err(config_err("--bits must be at least 64"));
        }
        Ok(Self {
            command: "sweep",
            kind,
            dims,
            margin,
            grid: parse_grid(&a.grid)?,
            tol: check_tol(a.tol)?,
            format: format_from(a.output.format),
            out: a.output.out.clone(),
            seed: 0,
            precision: match a.precision {
                PrecisionArg::Extended => Precision::Extended,
                PrecisionArg::F64 => Precision::F64,
            },
            bits: a.bits,
        })
    }

    pub fn echo(&self) -> ConfigEcho {
        let sweep = self.command == "sweep";
        ConfigEcho {
            kind: self.kind.short_name().into(),
            lambda: match &self.kind {
                RepresentationKind::Lambda(l) => Some(l.value().to_string()),
                _ => None,
            },
            dims: self.dims.clone(),
            margin: self.margin.echo(),
            grid: self.grid.iter().map(|&(s, t)| [s, t]).collect(),
            tol: self.tol,
            format: self.format,
            seed: (!sweep).then_some(self.seed),
            precision: sweep.then_some(self.precision),
            bits: (sweep && self.precision == Precision::Extended).then_some(self.bits),
        }
    }
}
