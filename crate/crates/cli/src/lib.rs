//! Command implementations behind the `digitlab` binary.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use digitlab_core::bounds::IntervalPartition;
use digitlab_core::constants::{contradiction_threshold, nz_ratio_scan, theorem_constants};
use digitlab_core::forcing::{check_forcing, scaled_consistency_gap};
use digitlab_core::report::{self, Summary};
use digitlab_core::suite::{identity_suite, random_properties, IdentityCheck, IdentityLimits};
use digitlab_core::{cache, expand_sqrt, Analysis, BoundReport, Convolution, DigitSequence};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Digits,
    Verify,
    Bounds,
    Intervals,
    Parity,
    Forcing,
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub radicand: u64,
    pub bits: u64,
    pub cache_dir: PathBuf,
    pub format: Format,
    /// Packed convolution on/off.
    pub fast: bool,
    pub out: Option<PathBuf>,
    pub no_compute: bool,
    pub seed: u64,
    pub cases: usize,
    /// `intervals`: interval counts for uniform partitions.
    pub interval_counts: Vec<u64>,
    /// `intervals`: explicit breakpoints, overriding `interval_counts`.
    pub breakpoints: Option<Vec<u64>>,
    /// `ratio`: the `N` values to tabulate.
    pub n_list: Option<Vec<u64>>,
    pub dump_r: Option<PathBuf>,
    pub dump_t: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, radicand: u64, bits: u64, cache_dir: PathBuf) -> Self {
        RunConfig {
            command,
            radicand,
            bits,
            cache_dir,
            format: Format::Csv,
            fast: true,
            out: None,
            no_compute: false,
            seed: digitlab_core::suite::DEFAULT_SEED,
            cases: 100,
            interval_counts: digitlab_core::suite::INTERVAL_COUNTS.to_vec(),
            breakpoints: None,
            n_list: None,
            dump_r: None,
            dump_t: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cache at {path}: {source}")]
    Cache {
        path: PathBuf,
        source: digitlab_core::Error,
    },
    #[error(transparent)]
    Core(#[from] digitlab_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Error = 2,
}

/// Digits of `√d` to at least `frac_bits` places, from the cache when it is
/// long enough, otherwise recomputed and written back (unless `no_compute`).
pub fn load_digits(
    cache_dir: &Path,
    d: u64,
    frac_bits: u64,
    no_compute: bool,
) -> Result<DigitSequence, CliError> {
    let path = cache::cache_path(cache_dir, d);
    if path.exists() {
        let cached = cache::read(&path).map_err(|source| CliError::Cache {
            path: path.clone(),
            source,
        })?;
        if cached.frac_bits() >= frac_bits {
            return Ok(cached.truncated(frac_bits)?);
        }
        if no_compute {
            return Err(digitlab_core::Error::PrecisionExceeded {
                requested: frac_bits,
                available: cached.frac_bits(),
            }
            .into());
        }
    } else if no_compute {
        return Err(CliError::Usage(format!(
            "no cached digits at {} and --no-compute is set",
            path.display()
        )));
    }
    let seq = expand_sqrt(d, frac_bits)?;
    cache::write_atomic(&path, &seq).map_err(|source| CliError::Cache {
        path: path.clone(),
        source,
    })?;
    Ok(seq)
}

fn method(cfg: &RunConfig) -> Convolution {
    if cfg.fast {
        Convolution::Auto
    } else {
        Convolution::Naive
    }
}

fn analysis(cfg: &RunConfig, frac_bits: u64) -> Result<Analysis, CliError> {
    let seq = load_digits(&cfg.cache_dir, cfg.radicand, frac_bits, cfg.no_compute)?;
    Ok(Analysis::new(seq, method(cfg))?)
}

fn write_reports(
    cfg: &RunConfig,
    reports: &[BoundReport],
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    match cfg.format {
        Format::Csv => report::write_csv(reports, &mut *out)?,
        Format::Json => report::write_json(reports, &mut *out)?,
    }
    let summary: Summary = reports.iter().collect();
    for (name, fam) in &summary.families {
        eprintln!(
            "{name}: {} checked, {} failed, min margin {} at N={}",
            fam.checked, fam.failed, fam.min_margin, fam.min_margin_at
        );
    }
    Ok(if summary.all_pass() {
        Status::Pass
    } else {
        Status::Fail
    })
}

#[derive(Serialize)]
struct DigitsOut<'a> {
    radicand: u64,
    int_bits: u8,
    frac_bits: u64,
    integer_part: String,
    fractional: &'a str,
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|b| char::from(b'0' + b)).collect()
}

fn run_digits(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let seq = load_digits(&cfg.cache_dir, cfg.radicand, cfg.bits, cfg.no_compute)?;
    let fractional = bit_string(seq.fractional());
    match cfg.format {
        Format::Csv => writeln!(out, "{fractional}")?,
        Format::Json => {
            let body = DigitsOut {
                radicand: seq.radicand(),
                int_bits: seq.int_bits(),
                frac_bits: seq.frac_bits(),
                integer_part: bit_string(&seq.bits()[..seq.int_bits() as usize]),
                fractional: &fractional,
            };
            serde_json::to_writer_pretty(&mut *out, &body)?;
            writeln!(out)?;
        }
    }
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct CheckOut<'a> {
    name: &'a str,
    checked: u64,
    failures: u64,
    first_failure: Option<u64>,
    pass: bool,
}

fn run_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let a = analysis(cfg, cfg.bits)?;
    let mut checks = identity_suite(&a, IdentityLimits::default())?;
    checks.extend(random_properties(cfg.seed, cfg.cases, 1024)?);

    if let Some(path) = &cfg.dump_r {
        a.r.write_csv(fs::File::create(path)?)?;
    }
    if let Some(path) = &cfg.dump_t {
        a.t.write_csv(&a.r, a.profile.digits(), fs::File::create(path)?)?;
    }

    match cfg.format {
        Format::Csv => {
            writeln!(out, "name,checked,failures,first_failure,pass")?;
            for c in &checks {
                let first = c.first_failure.map(|v| v.to_string()).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{first},{}",
                    c.name,
                    c.checked,
                    c.failures,
                    c.pass()
                )?;
            }
        }
        Format::Json => {
            let rows: Vec<CheckOut> = checks
                .iter()
                .map(|c| CheckOut {
                    name: c.name,
                    checked: c.checked,
                    failures: c.failures,
                    first_failure: c.first_failure,
                    pass: c.pass(),
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out)?;
        }
    }
    for c in &checks {
        eprintln!("{c}");
    }
    Ok(if checks.iter().all(IdentityCheck::pass) {
        Status::Pass
    } else {
        Status::Fail
    })
}

fn run_bounds(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let a = analysis(cfg, cfg.bits)?;
    let mut reports = Vec::new();
    for n in 1..=cfg.bits {
        reports.extend(a.inequality_reports(n, &cfg.interval_counts)?);
    }
    write_reports(cfg, &reports, out)
}

fn run_intervals(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let a = analysis(cfg, cfg.bits)?;
    let reports = match &cfg.breakpoints {
        Some(bps) => {
            let p = IntervalPartition::new(bps.clone())?;
            if p.n() > cfg.bits {
                return Err(CliError::Usage(format!(
                    "last breakpoint {} exceeds --bits {}",
                    p.n(),
                    cfg.bits
                )));
            }
            vec![digitlab_core::bounds::interval_upper_bound(
                &a.r, &a.profile, &p,
            )?]
        }
        None => {
            if let Some(&m) = cfg
                .interval_counts
                .iter()
                .find(|&&m| m == 0 || m > cfg.bits)
            {
                return Err(CliError::Usage(format!(
                    "cannot split [0, {}] into {m} intervals",
                    cfg.bits
                )));
            }
            a.interval_reports(cfg.bits, &cfg.interval_counts)?
        }
    };
    write_reports(cfg, &reports, out)
}

fn run_parity(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let a = analysis(cfg, cfg.bits)?;
    let mut reports = Vec::new();
    for n in 0..=a.max_parity_n() {
        reports.extend(a.parity_reports(n)?);
    }
    write_reports(cfg, &reports, out)
}

fn run_forcing(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let sqrt2 = load_digits(&cfg.cache_dir, 2, cfg.bits + 3, cfg.no_compute)?;
    let sqrt18 = load_digits(&cfg.cache_dir, 18, cfg.bits + 3, cfg.no_compute)?;
    let gap = scaled_consistency_gap(&sqrt2, &sqrt18)?;
    eprintln!("consistency: floor(3·sqrt2·2^N) - 3·floor(sqrt2·2^N) = {gap}");
    let rep = check_forcing(&sqrt2, &sqrt18, cfg.bits)?;
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rep)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(&mut *out);
            wtr.write_record(["n", "b_n", "b_n1"])?;
            for v in &rep.violations {
                wtr.serialize(v)?;
            }
            wtr.flush()?;
        }
    }
    eprintln!(
        "pattern {}: {} occurrences up to N={}, {} violations",
        rep.pattern,
        rep.occurrences,
        rep.n,
        rep.violations.len()
    );
    Ok(if rep.holds() && gap <= 2 {
        Status::Pass
    } else {
        Status::Fail
    })
}

#[derive(Serialize)]
struct ConstantOut {
    name: &'static str,
    expression: &'static str,
    value: String,
}

#[derive(Serialize)]
struct RatioOut<'a> {
    constants: Vec<ConstantOut>,
    threshold_residual: f64,
    rows: &'a [digitlab_core::constants::RatioRow],
}

fn default_n_list(bits: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(10u64), |n| n.checked_mul(10))
        .take_while(|&n| n <= bits)
        .collect();
    if out.last() != Some(&bits) {
        out.push(bits);
    }
    out
}

fn run_ratio(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let n_list = cfg
        .n_list
        .clone()
        .unwrap_or_else(|| default_n_list(cfg.bits));
    let top = n_list.iter().copied().max().unwrap_or(0);
    let seq = load_digits(
        &cfg.cache_dir,
        cfg.radicand,
        top.max(cfg.bits),
        cfg.no_compute,
    )?;
    let rows = nz_ratio_scan(&seq, &n_list)?;
    let c = theorem_constants();
    let threshold = contradiction_threshold();
    match cfg.format {
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(&mut *out);
            for row in &rows {
                wtr.serialize(row)?;
            }
            wtr.flush()?;
        }
        Format::Json => {
            let body = RatioOut {
                constants: [&c.c1, &c.c2, &c.c3]
                    .into_iter()
                    .map(|k| ConstantOut {
                        name: k.name,
                        expression: k.expression,
                        value: k.decimal(20),
                    })
                    .collect(),
                threshold_residual: threshold.residual,
                rows: &rows,
            };
            serde_json::to_writer_pretty(&mut *out, &body)?;
            writeln!(out)?;
        }
    }
    for k in [&c.c1, &c.c2, &c.c3] {
        eprintln!("{} = {} ≈ {}", k.name, k.expression, k.decimal(12));
    }
    Ok(Status::Pass)
}

pub fn run(cfg: &RunConfig) -> Result<Status, CliError> {
    if cfg.bits == 0 {
        return Err(CliError::Usage("--bits must be at least 1".into()));
    }
    let mut sink: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(io::BufWriter::new(fs::File::create(path)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    let status = match cfg.command {
        Command::Digits => run_digits(cfg, &mut *sink),
        Command::Verify => run_verify(cfg, &mut *sink),
        Command::Bounds => run_bounds(cfg, &mut *sink),
        Command::Intervals => run_intervals(cfg, &mut *sink),
        Command::Parity => run_parity(cfg, &mut *sink),
        Command::Forcing => run_forcing(cfg, &mut *sink),
        Command::Ratio => run_ratio(cfg, &mut *sink),
    }?;
    sink.flush()?;
    Ok(status)
}
