use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use catcodes::concat::DEFAULT_MAX_CONFIGURATIONS;
use catcodes::degradable::{degradability_verdict, kraus_from_pauli};
use catcodes::oracle::self_check;
use catcodes::search::{best_length_scan, best_threshold, threshold, Code, ThresholdOptions, ThresholdRow};
use catcodes::{Basis, CatCodeSpec, ConcatLimits, ConcatSpec};

use crate::error::CliError;
use crate::grid::{LengthSet, NoiseGrid};
use crate::spec::{parse_code, ChannelSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "catcodes", version, about = "Rates and thresholds of repetition codes on Pauli channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads; defaults to the available cores
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Emit a JSON record instead of plain text or CSV
    #[arg(long, global = true)]
    pub json: bool,
    /// Write CSV or JSON output to a file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cap on enumerated configurations of a concatenated code
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CONFIGURATIONS as u64)]
    pub max_compositions: u64,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SearchArgs {
    /// Width of the final threshold bracket
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// First probe of the bracket search
    #[arg(long, default_value_t = 0.01)]
    pub initial_step: f64,
    /// Coarse grid points checked for extra sign changes (0 disables)
    #[arg(long, default_value_t = 64)]
    pub grid_points: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate of one code on one channel
    Rate {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        code: String,
        /// Noise level, overriding the channel's own p
        #[arg(long)]
        p: Option<f64>,
    },
    /// Zero-rate noise level of a code along a channel family
    Threshold {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        code: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Cat-code rates over lengths at fixed p, or thresholds over lengths without p
    ScanM {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value = "1..=60")]
        m_range: LengthSet,
        #[arg(long, default_value = "Z")]
        basis: Basis,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Z-cat rates over a noise grid and a set of lengths (columns p, m, rate)
    Figure1 {
        #[arg(long, default_value = "indep:ratio=9")]
        channel: String,
        #[arg(long, default_value = "0.2:0.32:0.0025")]
        p_grid: NoiseGrid,
        #[arg(long, default_value = "1..=60")]
        m_range: LengthSet,
    },
    /// Thresholds of 3-in-m and 5-in-m codes plus reference codes
    /// (columns outer_m, inner_spec, threshold)
    Figure2 {
        #[arg(long, default_value = "depolarizing")]
        channel: String,
        /// Outer lengths for the 3-cat inner code
        #[arg(long, default_value = "1..=25")]
        m_range: LengthSet,
        /// Outer lengths for the 5-cat inner code
        #[arg(long, default_value = "1..=16")]
        m_range_five: LengthSet,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Degradability verdict from the solved degrading map
    Degradability {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Compare the closed forms against brute-force enumeration
    Verify {
        #[arg(long, default_value_t = 2008)]
        seed: u64,
    },
}

impl Cli {
    fn limits(&self) -> ConcatLimits {
        ConcatLimits {
            max_configurations: self.max_compositions as u128,
        }
    }
}

impl SearchArgs {
    fn options(&self, limits: ConcatLimits) -> Result<ThresholdOptions, CliError> {
        if !(self.tol > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(ThresholdOptions {
            tol: self.tol,
            initial_step: self.initial_step,
            grid_points: self.grid_points,
            limits,
        })
    }

    fn echo(&self) -> String {
        format!(
            "tol={:?} initial-step={:?} grid-points={}",
            self.tol, self.initial_step, self.grid_points
        )
    }
}

/// Twelve significant digits, shortest form.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x:?}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

fn family_spec(text: &str) -> Result<ChannelSpec, CliError> {
    let spec: ChannelSpec = text.parse()?;
    if spec.p.is_some() {
        return Err(CliError::Usage(format!(
            "'{text}' fixes p; searches run over p, so give the family only"
        )));
    }
    Ok(spec)
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs:?} workers: {e}")))
}

struct Sink<'a> {
    out: Option<PathBuf>,
    stdout: &'a mut dyn Write,
}

impl Sink<'_> {
    fn emit(&mut self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, bytes)?,
            None => self.stdout.write_all(bytes)?,
        }
        Ok(())
    }

    fn json(&mut self, value: &serde_json::Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.emit(text.as_bytes())
    }
}

/// CSV with a leading `# catcodes <kind> schema=N <config>` line.
fn csv_table(kind: &str, config: &str, header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut buf = format!("# catcodes {kind} schema={SCHEMA_VERSION} {config}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    Ok(buf)
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let limits = cli.limits();
    let json_mode = cli.json;
    let workers = pool(cli.jobs)?;
    let mut sink = Sink {
        out: cli.out.clone(),
        stdout,
    };
    match &cli.command {
        Command::Rate { channel, code, p } => {
            let spec: ChannelSpec = channel.parse()?;
            let code = parse_code(code)?;
            let ch = spec.channel(*p)?;
            let rate = code.rate(&ch, limits)?;
            if json_mode {
                sink.json(&json!({
                    "channel": spec.to_string(),
                    "p": p.or(spec.p),
                    "code": code.to_string(),
                    "rate": rate,
                }))?;
            } else {
                sink.emit(format!("{}\n", sig12(rate)).as_bytes())?;
            }
        }
        Command::Threshold { channel, code, search } => {
            let spec = family_spec(channel)?;
            let code = parse_code(code)?;
            let res = threshold(&spec.family, &code, &search.options(limits)?)?;
            if res.non_monotone {
                writeln!(stderr, "warning: rate changes sign more than once; reporting the largest crossing")?;
            }
            if json_mode {
                sink.json(&json!({
                    "channel": spec.to_string(),
                    "code": code.to_string(),
                    "threshold": res.p_star,
                    "bracket": [res.bracket.0, res.bracket.1],
                    "evaluations": res.evaluations,
                    "non_monotone": res.non_monotone,
                    "tol": search.tol,
                }))?;
            } else {
                sink.emit(format!("{}\n", sig12(res.p_star)).as_bytes())?;
            }
        }
        Command::ScanM {
            channel,
            p,
            m_range,
            basis,
            search,
        } => {
            let spec: ChannelSpec = channel.parse()?;
            let fixed = p.or(spec.p);
            let config = format!("channel={spec} basis={basis} m-range={m_range}");
            if let Some(p) = fixed {
                let ch = spec.channel(Some(p))?;
                let scan = best_length_scan(&ch, *basis, m_range.values().iter().copied())?;
                if json_mode {
                    sink.json(&json!({
                        "channel": spec.to_string(),
                        "p": p,
                        "basis": basis.to_string(),
                        "rows": scan.rows,
                        "best_m": scan.best_m,
                        "best_rate": scan.best_rate,
                        "inverse_p_z": scan.inverse_p_z,
                        "inverse_q_z": scan.inverse_q_z,
                    }))?;
                } else {
                    let rows: Vec<Vec<String>> = scan
                        .rows
                        .iter()
                        .map(|r| vec![r.m.to_string(), r.rate.to_string()])
                        .collect();
                    sink.emit(&csv_table("scan-m", &format!("{config} p={p}"), &["m", "rate"], &rows)?)?;
                    writeln!(
                        stderr,
                        "best m={} rate={} (1/p_z={:.1}, 1/q_z={:.1})",
                        scan.best_m,
                        sig12(scan.best_rate),
                        scan.inverse_p_z,
                        scan.inverse_q_z
                    )?;
                }
            } else {
                let opts = search.options(limits)?;
                let rows: Vec<ThresholdRow> = workers.install(|| {
                    m_range
                        .values()
                        .par_iter()
                        .map(|&m| {
                            let code = Code::Cat(CatCodeSpec::new(m, *basis)?);
                            Ok(ThresholdRow {
                                m,
                                threshold: threshold(&spec.family, &code, &opts)?,
                            })
                        })
                        .collect::<catcodes::Result<Vec<_>>>()
                })?;
                let best = best_threshold(&rows).expect("nonempty length set");
                if json_mode {
                    sink.json(&json!({
                        "channel": spec.to_string(),
                        "basis": basis.to_string(),
                        "tol": search.tol,
                        "rows": rows.iter().map(|r| json!({"m": r.m, "threshold": r.threshold.p_star})).collect::<Vec<_>>(),
                        "best_m": best.m,
                        "best_threshold": best.threshold.p_star,
                    }))?;
                } else {
                    let table: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| vec![r.m.to_string(), sig12(r.threshold.p_star)])
                        .collect();
                    let config = format!("{config} {}", search.echo());
                    sink.emit(&csv_table("scan-m", &config, &["m", "threshold"], &table)?)?;
                    writeln!(stderr, "best m={} threshold={}", best.m, sig12(best.threshold.p_star))?;
                }
            }
        }
        Command::Figure1 { channel, p_grid, m_range } => {
            let spec = family_spec(channel)?;
            let cells: Vec<(f64, usize)> = p_grid
                .points()
                .iter()
                .flat_map(|&p| m_range.values().iter().map(move |&m| (p, m)))
                .collect();
            let rows = workers.install(|| {
                cells
                    .par_iter()
                    .map(|&(p, m)| {
                        let rate = catcodes::cat_rate(&spec.family.evaluate(p)?, CatCodeSpec::z(m)?)?;
                        Ok(vec![p.to_string(), m.to_string(), rate.to_string()])
                    })
                    .collect::<catcodes::Result<Vec<_>>>()
            })?;
            let config = format!("channel={spec} basis=Z p-grid={p_grid} m-range={m_range}");
            sink.emit(&csv_table("figure1", &config, &["p", "m", "rate"], &rows)?)?;
        }
        Command::Figure2 {
            channel,
            m_range,
            m_range_five,
            search,
        } => {
            let spec = family_spec(channel)?;
            let opts = search.options(limits)?;
            let cat = |m| CatCodeSpec::new(m, Basis::Z);
            let outer = |m| CatCodeSpec::new(m, Basis::X);
            let mut tasks: Vec<(String, String, Code)> = vec![
                (String::new(), "hashing".into(), Code::Cat(cat(1)?)),
                (String::new(), "cat5".into(), Code::Cat(cat(5)?)),
                (String::new(), "5in5".into(), Code::Concat(ConcatSpec::new(cat(5)?, outer(5)?))),
            ];
            for (inner, set) in [(3, m_range), (5, m_range_five)] {
                for &m in set.values() {
                    let code = Code::Concat(ConcatSpec::new(cat(inner)?, outer(m)?));
                    tasks.push((m.to_string(), format!("{inner}Z"), code));
                }
            }
            let rows = workers.install(|| {
                tasks
                    .par_iter()
                    .map(|(m, inner, code)| {
                        let t = threshold(&spec.family, code, &opts)?;
                        Ok(vec![m.clone(), inner.clone(), sig12(t.p_star)])
                    })
                    .collect::<catcodes::Result<Vec<_>>>()
            })?;
            let config = format!(
                "channel={spec} outer-basis=X m-range={m_range} m-range-five={m_range_five} {}",
                search.echo()
            );
            sink.emit(&csv_table("figure2", &config, &["outer_m", "inner_spec", "threshold"], &rows)?)?;
        }
        Command::Degradability { channel, p } => {
            let spec: ChannelSpec = channel.parse()?;
            let ch = spec.channel(*p)?;
            let verdict = degradability_verdict(&kraus_from_pauli(&ch))?;
            if json_mode {
                let mut record = serde_json::to_value(&verdict)?;
                record["channel"] = json!(spec.to_string());
                sink.json(&record)?;
            } else {
                let status = serde_json::to_value(verdict.status)?;
                let mut text = format!(
                    "status: {}\nresidual: {:e}\nmin_choi_eigenvalue: {}\ncondition_number: {}\n",
                    status.as_str().unwrap_or_default(),
                    verdict.residual,
                    sig12(verdict.min_choi_eigenvalue),
                    sig12(verdict.condition_number),
                );
                if let Some(note) = &verdict.note {
                    text.push_str(&format!("note: {note}\n"));
                }
                sink.emit(text.as_bytes())?;
            }
        }
        Command::Verify { seed } => {
            let report = self_check(*seed)?;
            if json_mode {
                sink.json(&serde_json::to_value(&report)?)?;
            } else {
                let mut text = String::new();
                for c in &report.checks {
                    text.push_str(&format!(
                        "{} {} max_error={:e} tol={:e}\n",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.max_error,
                        c.tolerance
                    ));
                }
                sink.emit(text.as_bytes())?;
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::VerifyMismatch {
                    failed,
                    total: report.checks.len(),
                });
            }
        }
    }
    Ok(())
}
