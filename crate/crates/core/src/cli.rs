//! Declarative run configurations and their CSV output.
//!
//! A [`RunConfig`] fully determines an output file: there is no seed and
//! no timestamp, and the configuration itself is written into the
//! `#`-prefixed header, so identical configurations produce identical
//! bytes.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::eigen::{ConvergenceOptions, DEFAULT_CAP, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::overlap::{
    self, classify_zeros, find_partition, format_significant, format_table, OverlapMatrix,
    PartitionResult,
};
use crate::perturb;
use crate::scan::{self, linear_grid, ScanGrid, ScanOptions};
use crate::spectra::{self, SweepOptions, SweptParam};

pub const DEFAULT_PRECISION: usize = 6;
pub const FULL_PRECISION: usize = 17;
/// Environment variable overriding the truncation cap.
pub const MAX_FOCK_ENV: &str = "QRM_MAX_FOCK";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub param: SweptParam,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Sweep {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if self.hi < self.lo {
            return Err(Error::Usage(format!(
                "descending range {}:{} for {}",
                self.lo,
                self.hi,
                self.param.name()
            )));
        }
        linear_grid((self.lo, self.hi), self.step)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Task {
    Spectrum {
        params: ModelParams,
        sweep: Sweep,
        levels: usize,
    },
    Gapcurve {
        params: ModelParams,
        sweep: Sweep,
        /// 1-based lower level of the pair.
        k: usize,
    },
    Crossing {
        params: ModelParams,
        swept: SweptParam,
        bracket: (f64, f64),
        /// 1-based lower level; `None` picks the pair automatically.
        pair: Option<usize>,
        search_levels: usize,
    },
    Overlap {
        rows: ModelParams,
        cols: ModelParams,
        levels: usize,
        threshold: f64,
        partition: bool,
    },
    Partition {
        rows: ModelParams,
        cols: ModelParams,
        levels: usize,
        threshold: f64,
    },
    Perturb {
        params: ModelParams,
        m: usize,
        n: usize,
        sweep: Sweep,
    },
    Scan {
        epsilons: Vec<f64>,
        grid: ScanGrid,
        levels: usize,
    },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Spectrum { .. } => "spectrum",
            Task::Gapcurve { .. } => "gapcurve",
            Task::Crossing { .. } => "crossing",
            Task::Overlap { .. } => "overlap",
            Task::Partition { .. } => "partition",
            Task::Perturb { .. } => "perturb",
            Task::Scan { .. } => "scan",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub output: Option<PathBuf>,
    /// Significant digits of every number written.
    pub precision: usize,
    pub task: Task,
}

impl RunConfig {
    pub fn new(task: Task) -> Self {
        RunConfig {
            output: None,
            precision: DEFAULT_PRECISION,
            task,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configurations serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Usage(format!("bad run configuration: {e}")))
    }
}

/// Result of executing a configuration: the file body and the exit code
/// the command line should report.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NoScaleSeparation { .. } => EXIT_UNCERTIFIED,
        e if e.is_numerical() => EXIT_NUMERICAL,
        Error::Io(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// Truncation cap from [`MAX_FOCK_ENV`], if set and valid.
pub fn cap_from_env() -> Result<usize> {
    match std::env::var(MAX_FOCK_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|&n: &usize| n >= 4)
            .ok_or_else(|| Error::Usage(format!("{MAX_FOCK_ENV}={v} is not a truncation >= 4"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

struct Writer {
    digits: usize,
    text: String,
}

impl Writer {
    fn num(&self, x: f64) -> String {
        format_significant(x, self.digits)
    }

    fn line(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    fn comment(&mut self, s: &str) {
        for l in s.lines() {
            if l.is_empty() {
                self.text.push_str("#\n");
            } else {
                let _ = writeln!(self.text, "# {l}");
            }
        }
    }
}

fn header(w: &mut Writer, cfg: &RunConfig) {
    w.comment(&format!("qrm {}", env!("CARGO_PKG_VERSION")));
    w.comment(&format!("command: {}", cfg.task.name()));
    // the output path is not part of the content
    let body = RunConfig {
        output: None,
        ..cfg.clone()
    };
    w.comment(&body.to_toml());
}

fn truncation_note(w: &mut Writer, used: impl IntoIterator<Item = usize>) {
    let used: Vec<usize> = used.into_iter().collect();
    let lo = used.iter().min().copied().unwrap_or(0);
    let hi = used.iter().max().copied().unwrap_or(0);
    if lo == hi {
        w.comment(&format!("n_fock: {hi}"));
    } else {
        w.comment(&format!("n_fock: {lo}..{hi}"));
    }
}

pub fn execute(cfg: &RunConfig, cap: usize) -> Result<Output> {
    let convergence = ConvergenceOptions::default().with_cap(cap);
    let sweep_opts = SweepOptions {
        tol: DEFAULT_TOL,
        convergence,
    };
    let mut w = Writer {
        digits: cfg.precision.clamp(1, FULL_PRECISION),
        text: String::new(),
    };
    header(&mut w, cfg);
    let mut exit_code = EXIT_OK;

    match &cfg.task {
        Task::Spectrum {
            params,
            sweep,
            levels,
        } => {
            let grid = sweep.grid()?;
            let s = spectra::sweep_levels_with(params, sweep.param, &grid, *levels, &sweep_opts)?;
            truncation_note(&mut w, s.n_fock.iter().copied());
            let mut cols = vec!["swept_value".to_string()];
            cols.extend((1..=*levels).map(|k| format!("E{k}_rel")));
            w.line(&cols);
            for (x, row) in s.grid.iter().zip(&s.levels) {
                let mut cells = vec![w.num(*x)];
                cells.extend(row.iter().map(|e| w.num(*e)));
                w.line(&cells);
            }
        }
        Task::Gapcurve { params, sweep, k } => {
            let grid = sweep.grid()?;
            let gaps = spectra::gap_curve_with(params, sweep.param, &grid, *k, &sweep_opts)?;
            w.comment(&format!("gap: E{} - E{}", k + 1, k));
            w.line(&["swept_value".into(), "gap".into()]);
            for (x, g) in grid.iter().zip(&gaps) {
                let cells = [w.num(*x), w.num(*g)];
                w.line(&cells);
            }
        }
        Task::Crossing {
            params,
            swept,
            bracket,
            pair,
            search_levels,
        } => {
            let k = match pair {
                Some(k) => *k,
                None => spectra::closest_pair_with(
                    params,
                    *swept,
                    *bracket,
                    *search_levels,
                    &sweep_opts,
                )?,
            };
            let r = spectra::refine_crossing_with(params, *swept, *bracket, k, &sweep_opts)?;
            truncation_note(&mut w, [r.n_fock]);
            w.line(
                &[
                    "level_k",
                    "level_k1",
                    "param_star",
                    "gap_at_star",
                    "relative_energy",
                    "certified",
                    "n_fock",
                ]
                .map(String::from),
            );
            let cells = [
                r.level_pair.0.to_string(),
                r.level_pair.1.to_string(),
                w.num(r.param_star),
                w.num(r.gap_at_star),
                w.num(r.relative_energy),
                r.certified.to_string(),
                r.n_fock.to_string(),
            ];
            w.line(&cells);
        }
        Task::Overlap {
            rows,
            cols,
            levels,
            threshold,
            partition,
        } => {
            let m = overlap_for(rows, cols, *levels, *threshold, convergence)?;
            certificate_note(&mut w, &m);
            w.text.push_str(&format_table(&m, w.digits));
            if !m.is_valid() {
                exit_code = EXIT_UNCERTIFIED;
            } else if *partition {
                let p = find_partition(&m)?;
                w.text.push('\n');
                partition_block(&mut w, &p);
            }
        }
        Task::Partition {
            rows,
            cols,
            levels,
            threshold,
        } => {
            let m = overlap_for(rows, cols, *levels, *threshold, convergence)?;
            certificate_note(&mut w, &m);
            let p = find_partition(&m)?;
            partition_block(&mut w, &p);
        }
        Task::Perturb {
            params,
            m,
            n,
            sweep,
        } => {
            if sweep.param != SweptParam::G {
                return Err(Error::Usage("perturb sweeps g".into()));
            }
            let grid = sweep.grid()?;
            let (lo, hi) = perturb::level_pair(*m, *n)?;
            let exact = spectra::gap_curve_with(params, SweptParam::G, &grid, lo, &sweep_opts)?;
            w.comment(&format!("pair (m, n) = ({m}, {n}) -> levels {lo}, {hi}"));
            w.line(
                &[
                    "g",
                    "exact_gap",
                    "effective_splitting",
                    "dtilde",
                    "deviation",
                ]
                .map(String::from),
            );
            for (g, ex) in grid.iter().zip(&exact) {
                let eff = perturb::effective_splitting(&params.with_g(*g), *m, *n)?;
                let cells = [
                    w.num(*g),
                    w.num(*ex),
                    w.num(eff.splitting),
                    w.num(eff.dtilde),
                    w.num(ex - eff.splitting),
                ];
                w.line(&cells);
            }
        }
        Task::Scan {
            epsilons,
            grid,
            levels,
        } => {
            let opts = ScanOptions {
                tol: DEFAULT_TOL,
                convergence,
            };
            let results = scan::epsilon_sweep_with(epsilons, grid, *levels, &opts)?;
            truncation_note(&mut w, results.iter().map(|r| r.max_n_fock));
            w.line(
                &[
                    "epsilon_over_omega",
                    "min_gap",
                    "argmin_delta",
                    "argmin_g",
                    "argmin_k",
                ]
                .map(String::from),
            );
            for r in &results {
                let cells = [
                    w.num(r.epsilon_over_omega),
                    w.num(r.min_gap),
                    w.num(r.argmin.delta),
                    w.num(r.argmin.g),
                    r.argmin.k.to_string(),
                ];
                w.line(&cells);
            }
        }
    }
    Ok(Output {
        text: w.text,
        exit_code,
    })
}

fn overlap_for(
    rows: &ModelParams,
    cols: &ModelParams,
    levels: usize,
    threshold: f64,
    convergence: ConvergenceOptions,
) -> Result<OverlapMatrix> {
    if !(threshold > 0.0) {
        return Err(Error::Usage(format!(
            "zero threshold must be positive, got {threshold}"
        )));
    }
    let e1 = crate::eigen::diagonalize_converged_with(rows, levels, DEFAULT_TOL, convergence)?;
    let e2 = crate::eigen::diagonalize_converged_with(cols, levels, DEFAULT_TOL, convergence)?;
    let (e1, e2) = overlap::align_truncation(&e1, &e2)?;
    let m = overlap::overlap_matrix(&e1, &e2, levels)?;
    Ok(classify_zeros(m, threshold))
}

fn certificate_note(w: &mut Writer, m: &OverlapMatrix) {
    let ignored = format_significant(m.largest_ignored, 2);
    let retained = format_significant(m.smallest_retained, 2);
    let status = if m.is_valid() { "valid" } else { "INVALID" };
    w.comment(&format!(
        "zero threshold {}: largest ignored {ignored}, smallest retained {retained} ({status})",
        format_significant(m.zero_threshold, 2)
    ));
}

fn one_based(v: &[usize]) -> String {
    v.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// `partition,NONE`, or the groups and block-diagonalizing orders with
/// 1-based state indices.
fn partition_block(w: &mut Writer, p: &PartitionResult) {
    if !p.found {
        w.text.push_str("partition,NONE\n");
        return;
    }
    let kind = if p.trivial { " (trivial)" } else { "" };
    let _ = writeln!(w.text, "partition,{} groups{kind}", p.groups_row.len());
    for (i, (r, c)) in p.groups_row.iter().zip(&p.groups_col).enumerate() {
        let _ = writeln!(w.text, "row_group_{},{}", i + 1, one_based(r));
        let _ = writeln!(w.text, "col_group_{},{}", i + 1, one_based(c));
    }
    let _ = writeln!(w.text, "row_order,{}", one_based(&p.row_permutation));
    let _ = writeln!(w.text, "col_order,{}", one_based(&p.col_permutation));
}

/// Parses a number, accepting `pi` and powers of it such as `pi^-1/3`.
pub fn parse_value(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Usage(format!("cannot parse number '{s}'"));
    if let Some(rest) = s.strip_prefix("pi") {
        let pi = std::f64::consts::PI;
        if rest.is_empty() {
            return Ok(pi);
        }
        let exp = rest.strip_prefix('^').ok_or_else(bad)?;
        let power = match exp.split_once('/') {
            Some((num, den)) => {
                let num: f64 = num.parse().map_err(|_| bad())?;
                let den: f64 = den.parse().map_err(|_| bad())?;
                num / den
            }
            None => exp.parse().map_err(|_| bad())?,
        };
        return Ok(pi.powf(power));
    }
    let v: f64 = s.parse().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// A scalar `v` or a range `lo:hi[:step]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueOrRange {
    Value(f64),
    Range { lo: f64, hi: f64, step: Option<f64> },
}

pub fn parse_value_or_range(s: &str) -> Result<ValueOrRange> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(ValueOrRange::Value(parse_value(v)?)),
        [lo, hi] => Ok(ValueOrRange::Range {
            lo: parse_value(lo)?,
            hi: parse_value(hi)?,
            step: None,
        }),
        [lo, hi, step] => Ok(ValueOrRange::Range {
            lo: parse_value(lo)?,
            hi: parse_value(hi)?,
            step: Some(parse_value(step)?),
        }),
        _ => Err(Error::Usage(format!("cannot parse range '{s}'"))),
    }
}

#[derive(Debug, Parser)]
#[command(name = "qrm", version, about = "Asymmetric quantum Rabi model toolkit")]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Emit 17 significant digits instead of 6.
    #[arg(long, global = true)]
    pub full_precision: bool,
    /// Print the run configuration as TOML and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// ε/ω, a value or lo:hi:step
    #[arg(long, default_value = "0")]
    pub eps: String,
    /// Δ/ω, a value (pi^-1/3 accepted) or lo:hi:step
    #[arg(long, default_value = "pi^-1/3")]
    pub delta: String,
    /// g/ω, a value or lo:hi:step
    #[arg(long, default_value = "0:3:0.01")]
    pub g: String,
    #[arg(long, default_value = "1")]
    pub omega: String,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Row parameters as eps,delta,g
    #[arg(long)]
    pub rows: String,
    /// Column parameters as eps,delta,g
    #[arg(long)]
    pub cols: String,
    #[arg(long, default_value_t = overlap::DEFAULT_LEVELS)]
    pub levels: usize,
    #[arg(long, default_value = "1e-8")]
    pub threshold: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest levels relative to the ground state along a sweep.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10)]
        levels: usize,
    },
    /// E_{k+1} - E_k along a sweep.
    Gapcurve {
        #[arg(long, default_value = "1")]
        eps: String,
        #[arg(long, default_value = "0.1")]
        delta: String,
        #[arg(long, default_value = "0:2:0.01")]
        g: String,
        #[arg(long, default_value = "1")]
        omega: String,
        /// 1-based lower level of the pair.
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Refine an avoided or true crossing inside a bracket.
    Crossing {
        #[arg(long, default_value = "5")]
        eps: String,
        #[arg(long, default_value = "pi^-1/3")]
        delta: String,
        /// Fixed g/ω when another parameter is bracketed.
        #[arg(long, default_value = "0")]
        g: String,
        #[arg(long, default_value = "1")]
        omega: String,
        /// Parameter being refined: g, delta or eps.
        #[arg(long, default_value = "g")]
        swept: String,
        #[arg(long, default_value = "1.2127:1.2129")]
        bracket: String,
        /// 1-based lower level, or auto.
        #[arg(long, default_value = "auto")]
        pair: String,
        /// Levels searched by --pair auto.
        #[arg(long, default_value_t = 10)]
        k_max: usize,
    },
    /// Overlap magnitudes between two eigenbases.
    Overlap {
        #[command(flatten)]
        pair: PairArgs,
        /// Append the block partition, or NONE.
        #[arg(long)]
        partition: bool,
    },
    /// Block partition of the overlap matrix.
    Partition {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Exact gap against the two-level effective model.
    Perturb {
        #[arg(long, default_value = "1")]
        eps: String,
        #[arg(long, default_value = "0.1")]
        delta: String,
        #[arg(long, default_value = "0:2:0.01")]
        g: String,
        #[arg(long, default_value = "1")]
        omega: String,
        /// Resonant pair as m,n.
        #[arg(long, default_value = "2,1")]
        pair: String,
    },
    /// Minimum adjacent gap over the (Δ/ω, g/ω) mesh per ε/ω.
    Scan {
        /// ε/ω, a value or lo:hi:step
        #[arg(long, default_value = "0:2:0.25")]
        eps: String,
        #[arg(long, default_value = "0.05")]
        step: String,
        #[arg(long, default_value = "0.1:3.1")]
        delta_range: String,
        #[arg(long, default_value = "0.1:3.1")]
        g_range: String,
        #[arg(long, default_value_t = 10)]
        levels: usize,
    },
    /// Execute a TOML run configuration.
    Run { config: PathBuf },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn bounds(s: &str) -> Result<(f64, f64)> {
    match parse_value_or_range(s)? {
        ValueOrRange::Range { lo, hi, step: None } => {
            if hi < lo {
                return Err(usage(format!("descending range '{s}'")));
            }
            Ok((lo, hi))
        }
        _ => Err(usage(format!("expected lo:hi, got '{s}'"))),
    }
}

/// Fixed parameters plus the single swept one, if any.
fn params_and_sweep(
    eps: &str,
    delta: &str,
    g: &str,
    omega: &str,
) -> Result<(ModelParams, Option<Sweep>)> {
    let omega = parse_value(omega)?;
    let mut values = [0.0; 3];
    let mut sweep = None;
    for (i, (name, text)) in [("eps", eps), ("delta", delta), ("g", g)]
        .into_iter()
        .enumerate()
    {
        match parse_value_or_range(text)? {
            ValueOrRange::Value(v) => values[i] = v * omega,
            ValueOrRange::Range { lo, hi, step } => {
                let step = step.ok_or_else(|| usage(format!("--{name} range needs a step")))?;
                if sweep.is_some() {
                    return Err(usage("only one parameter can be swept"));
                }
                let param: SweptParam = name.parse()?;
                let s = Sweep {
                    param,
                    lo: lo * omega,
                    hi: hi * omega,
                    step: step * omega,
                };
                s.grid()?;
                values[i] = s.lo;
                sweep = Some(s);
            }
        }
    }
    let p = ModelParams::new(values[1], values[0], omega, values[2])
        .map_err(|e| usage(e.to_string()))?;
    Ok((p, sweep))
}

fn swept_params(eps: &str, delta: &str, g: &str, omega: &str) -> Result<(ModelParams, Sweep)> {
    let (p, sweep) = params_and_sweep(eps, delta, g, omega)?;
    let sweep =
        sweep.ok_or_else(|| usage("one of --eps, --delta, --g must be a lo:hi:step range"))?;
    Ok((p, sweep))
}

fn triple(s: &str) -> Result<ModelParams> {
    let parts: Vec<&str> = s.split(',').collect();
    let [eps, delta, g] = parts.as_slice() else {
        return Err(usage(format!("expected eps,delta,g, got '{s}'")));
    };
    ModelParams::unit(parse_value(delta)?, parse_value(eps)?, parse_value(g)?)
        .map_err(|e| usage(e.to_string()))
}

fn scalar_or_grid(s: &str) -> Result<Vec<f64>> {
    match parse_value_or_range(s)? {
        ValueOrRange::Value(v) => Ok(vec![v]),
        ValueOrRange::Range {
            lo,
            hi,
            step: Some(step),
        } => {
            if hi < lo {
                return Err(usage(format!("descending range '{s}'")));
            }
            linear_grid((lo, hi), step).map_err(|e| usage(e.to_string()))
        }
        ValueOrRange::Range { .. } => Err(usage(format!("range '{s}' needs a step"))),
    }
}

impl Cli {
    /// Builds the run configuration described by the arguments.
    pub fn to_config(&self) -> Result<RunConfig> {
        let task = match &self.command {
            Command::Run { config } => {
                let text = std::fs::read_to_string(config)
                    .map_err(|e| usage(format!("{}: {e}", config.display())))?;
                let mut cfg = RunConfig::from_toml(&text)?;
                if self.output.is_some() {
                    cfg.output = self.output.clone();
                }
                if self.full_precision {
                    cfg.precision = FULL_PRECISION;
                }
                return Ok(cfg);
            }
            Command::Spectrum { params, levels } => {
                let (params, sweep) =
                    swept_params(&params.eps, &params.delta, &params.g, &params.omega)?;
                Task::Spectrum {
                    params,
                    sweep,
                    levels: *levels,
                }
            }
            Command::Gapcurve {
                eps,
                delta,
                g,
                omega,
                k,
            } => {
                let (params, sweep) = swept_params(eps, delta, g, omega)?;
                Task::Gapcurve {
                    params,
                    sweep,
                    k: *k,
                }
            }
            Command::Crossing {
                eps,
                delta,
                g,
                omega,
                swept,
                bracket,
                pair,
                k_max,
            } => {
                let (params, sweep) = params_and_sweep(eps, delta, g, omega)?;
                if sweep.is_some() {
                    return Err(usage("crossing takes its range from --bracket"));
                }
                let pair = match pair.as_str() {
                    "auto" => None,
                    k => Some(k.parse().map_err(|_| usage(format!("bad --pair '{k}'")))?),
                };
                let (lo, hi) = bounds(bracket)?;
                Task::Crossing {
                    params,
                    swept: swept.parse()?,
                    bracket: (lo * params.omega, hi * params.omega),
                    pair,
                    search_levels: *k_max,
                }
            }
            Command::Overlap { pair, partition } => Task::Overlap {
                rows: triple(&pair.rows)?,
                cols: triple(&pair.cols)?,
                levels: pair.levels,
                threshold: parse_value(&pair.threshold)?,
                partition: *partition,
            },
            Command::Partition { pair } => Task::Partition {
                rows: triple(&pair.rows)?,
                cols: triple(&pair.cols)?,
                levels: pair.levels,
                threshold: parse_value(&pair.threshold)?,
            },
            Command::Perturb {
                eps,
                delta,
                g,
                omega,
                pair,
            } => {
                let (params, sweep) = swept_params(eps, delta, g, omega)?;
                let (m, n) = pair
                    .split_once(',')
                    .and_then(|(m, n)| Some((m.trim().parse().ok()?, n.trim().parse().ok()?)))
                    .ok_or_else(|| usage(format!("expected --pair m,n, got '{pair}'")))?;
                Task::Perturb {
                    params,
                    m,
                    n,
                    sweep,
                }
            }
            Command::Scan {
                eps,
                step,
                delta_range,
                g_range,
                levels,
            } => Task::Scan {
                epsilons: scalar_or_grid(eps)?,
                grid: ScanGrid {
                    delta_range: bounds(delta_range)?,
                    g_range: bounds(g_range)?,
                    step: parse_value(step)?,
                },
                levels: *levels,
            },
        };
        Ok(RunConfig {
            output: self.output.clone(),
            precision: if self.full_precision {
                FULL_PRECISION
            } else {
                DEFAULT_PRECISION
            },
            task,
        })
    }
}

/// Runs a configuration, writing to its output path or stdout. Only the
/// scan fans out across threads.
pub fn run_config(cfg: &RunConfig) -> Result<i32> {
    let cap = cap_from_env()?;
    let out = if matches!(cfg.task, Task::Scan { .. }) {
        execute(cfg, cap)?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .map_err(|e| Error::Usage(e.to_string()))?;
        pool.install(|| execute(cfg, cap))?
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, &out.text)?,
        None => print!("{}", out.text),
    }
    if out.exit_code == EXIT_UNCERTIFIED {
        eprintln!("qrm: zero classification is not certified (scale separation below 1e3)");
    }
    Ok(out.exit_code)
}

/// Entry point of the `qrm` binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let result = cli.to_config().and_then(|cfg| {
        if cli.print_config {
            print!("{}", cfg.to_toml());
            Ok(EXIT_OK)
        } else {
            run_config(&cfg)
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qrm: {}", error_chain(&e));
            exit_code_for(&e)
        }
    }
}

fn error_chain(e: &Error) -> String {
    let mut msg = e.to_string();
    let mut source = std::error::Error::source(e);
    while let Some(s) = source {
        msg.push_str(": ");
        msg.push_str(&s.to_string());
        source = s.source();
    }
    msg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_delta() {
        let v = parse_value("pi^-1/3").unwrap();
        assert_eq!(v, std::f64::consts::PI.powf(-1.0 / 3.0));
        assert_eq!(parse_value("0.7").unwrap(), 0.7);
        assert!(parse_value("pie").is_err());
        assert!(parse_value("inf").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(
            parse_value_or_range("0:3:0.01").unwrap(),
            ValueOrRange::Range {
                lo: 0.0,
                hi: 3.0,
                step: Some(0.01)
            }
        );
        assert_eq!(parse_value_or_range("2").unwrap(), ValueOrRange::Value(2.0));
        assert!(parse_value_or_range("1:2:3:4").is_err());
    }

    #[test]
    fn descending_sweep_is_usage_error() {
        let s = Sweep {
            param: SweptParam::G,
            lo: 2.0,
            hi: 1.0,
            step: 0.1,
        };
        let err = s.grid().unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_USAGE);
    }

    #[test]
    fn config_round_trips() {
        let cli = Cli::parse_from(["qrm", "crossing", "--pair", "auto"]);
        let cfg = cli.to_config().unwrap();
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        let cli = Cli::parse_from([
            "qrm",
            "--full-precision",
            "overlap",
            "--rows",
            "0,1,2.6",
            "--cols",
            "0,1,0.5",
            "--partition",
        ]);
        let cfg = cli.to_config().unwrap();
        assert_eq!(cfg.precision, FULL_PRECISION);
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        let cli = Cli::parse_from(["qrm", "scan", "--eps", "0.5"]);
        let cfg = cli.to_config().unwrap();
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn argument_errors() {
        for argv in [
            &["qrm", "spectrum", "--g", "2:1:0.1"][..],
            &[
                "qrm", "spectrum", "--g", "1", "--eps", "0:1:0.5", "--delta", "0:1:0.5",
            ],
            &["qrm", "spectrum", "--g", "0:1"],
            &["qrm", "overlap", "--rows", "0,1", "--cols", "0,1,1"],
            &["qrm", "perturb", "--pair", "2"],
            &["qrm", "scan", "--delta-range", "3:1"],
        ] {
            let err = Cli::parse_from(argv).to_config().unwrap_err();
            assert_eq!(exit_code_for(&err), EXIT_USAGE, "{argv:?}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            exit_code_for(&Error::NoScaleSeparation {
                ratio: 1.0,
                required: 1e3
            }),
            EXIT_UNCERTIFIED
        );
        let nested = Error::TruncationCap {
            n_fock: 64,
            residual: 1.0,
        }
        .at("g", 3.0);
        assert_eq!(exit_code_for(&nested), EXIT_NUMERICAL);
        assert_eq!(exit_code_for(&Error::InvalidGrid("x".into())), EXIT_USAGE);
    }
}
