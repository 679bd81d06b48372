mod octic;
mod record;
mod reproduce;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use diffset::adsearch::{existence_grid, render_grid, search_ads, AdsOptions, GridCell};
use diffset::extend::{extension_report, scan_database};
use diffset::families::{family, sporadic, FamilyKind};
use diffset::mgr::{search_mgr, spectrum, MgrOptions};
use diffset::search::with_jobs;
use diffset::{Budget, Classification, SearchMode, SearchStatus, Subset};
use serde::Serialize;

use record::{parse_elements, parse_group, read_database, read_record, SetRecord};

#[derive(Parser)]
#[command(name = "diffset", version, about = "Difference sets, almost difference sets and modular Golomb rulers")]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "DIFFSET_JOBS")]
    jobs: Option<usize>,
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a set record read from a file or stdin.
    Verify {
        /// JSON set record; `-` for stdin.
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Build a residue family or a Singer set.
    Family {
        /// paley, quartic (b), quartic-b0, octic (o), octic-o0, singer.
        name: FamilyKind,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        with_zero: bool,
    },
    /// Addable and removable elements of a difference set.
    Extend(ExtendArgs),
    /// Modular Golomb rulers.
    #[command(subcommand)]
    Mgr(MgrCommand),
    /// Exhaustive almost difference set search.
    #[command(subcommand)]
    Ads(AdsCommand),
    /// Cyclotomic numbers and octic residue sets.
    #[command(subcommand)]
    Octic(octic::OcticCommand),
    /// Regenerate a published table and compare with the embedded values.
    Reproduce(reproduce::ReproduceArgs),
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct ExtendArgs {
    #[command(subcommand)]
    scan: Option<ExtendCommand>,
    #[command(flatten)]
    input: SetInput,
}

#[derive(Subcommand)]
enum ExtendCommand {
    /// Report every record of a JSON array that admits a change.
    Scan {
        #[arg(long)]
        db: PathBuf,
    },
}

#[derive(Args, Default)]
struct SetInput {
    /// Group as `v` or `n1xn2x...`.
    #[arg(long, requires = "set")]
    group: Option<String>,
    /// Elements: `1,2,4` for cyclic groups, `(0,0);(1,0)` otherwise.
    #[arg(long, requires = "group")]
    set: Option<String>,
    /// JSON set record; `-` for stdin.
    #[arg(long, conflicts_with_all = ["group", "sporadic"])]
    record: Option<PathBuf>,
    /// An embedded sporadic set by id.
    #[arg(long, conflicts_with = "group")]
    sporadic: Option<String>,
}

impl SetInput {
    fn subset(&self) -> Result<Subset> {
        if let Some(id) = &self.sporadic {
            return Ok(sporadic(id)?.set);
        }
        if let Some(path) = &self.record {
            return read_record(path)?.to_subset();
        }
        let (Some(g), Some(s)) = (&self.group, &self.set) else {
            bail!("give --group with --set, --record or --sporadic");
        };
        let group = parse_group(g)?;
        let set = parse_elements(s, &group)?;
        SetRecord { group: group.orders().to_vec(), set, label: None, provenance: None, classification: None }
            .to_subset()
    }
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Node limit.
    #[arg(long)]
    max_nodes: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_nodes: self.max_nodes,
            timeout: self.timeout.map(std::time::Duration::from_secs_f64),
        }
    }
}

#[derive(Args, Clone, Copy)]
struct ModeArgs {
    /// Keep every representative.
    #[arg(long, conflicts_with = "count")]
    all: bool,
    /// Count representatives.
    #[arg(long)]
    count: bool,
}

impl ModeArgs {
    fn mode(&self) -> SearchMode {
        if self.all {
            SearchMode::All
        } else if self.count {
            SearchMode::Count
        } else {
            SearchMode::Exists
        }
    }
}

#[derive(Subcommand)]
enum MgrCommand {
    /// Search for a (v,k)-MGR.
    Search {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        mode: ModeArgs,
        /// Only factor out translations.
        #[arg(long)]
        no_prune: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// MGR(k) below the constructive bound.
    Spectrum {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        no_prune: bool,
        /// Budget per modulus.
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum AdsCommand {
    /// Search Z_v for an ADS with the forced parameters.
    Search {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Existence grid as CSV (v,k,lambda,t,t_hat,status,witness).
    Grid {
        #[arg(long, default_value_t = 4)]
        vmin: u64,
        #[arg(long)]
        vmax: u64,
        #[arg(long, default_value_t = 2)]
        kmin: u64,
        #[arg(long)]
        kmax: Option<u64>,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the text rendering to stderr.
        #[arg(long)]
        render: bool,
        /// Budget per cell.
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// Outcome classes mapped onto exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Pass,
    Negative,
    Budget,
}

impl Verdict {
    fn code(self) -> ExitCode {
        match self {
            Verdict::Pass => ExitCode::SUCCESS,
            Verdict::Negative => ExitCode::from(2),
            Verdict::Budget => ExitCode::from(3),
        }
    }

    fn of_status(s: SearchStatus) -> Self {
        match s {
            SearchStatus::Exists => Verdict::Pass,
            SearchStatus::DsOnly | SearchStatus::None => Verdict::Negative,
            SearchStatus::Timeout => Verdict::Budget,
        }
    }

    fn of_classification(c: &Classification) -> Self {
        if c.is_none() {
            Verdict::Negative
        } else {
            Verdict::Pass
        }
    }
}

fn emit<T: Serialize>(value: &T, pretty: bool) -> Result<()> {
    let text = if pretty { serde_json::to_string_pretty(value)? } else { serde_json::to_string(value)? };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    v: u64,
    k: u64,
    lambda: u64,
    t: u64,
    t_hat: u64,
    status: SearchStatus,
    witness: &'a str,
}

fn write_grid_csv<W: Write>(cells: &[GridCell], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for c in cells {
        let witness = c
            .witness
            .as_ref()
            .map(|w| w.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        w.serialize(CsvRow {
            v: c.v,
            k: c.k,
            lambda: c.lambda,
            t: c.t,
            t_hat: c.t_hat,
            status: c.status,
            witness: &witness,
        })?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<Verdict> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Verify { input } => {
            let c = diffset::classify(&read_record(&input)?.to_subset()?);
            emit(&c, pretty)?;
            Ok(Verdict::of_classification(&c))
        }
        Command::Family { name, p, with_zero } => {
            let set = family(name, p, with_zero)?;
            let label = format!("{name}-{p}{}", if with_zero { "-0" } else { "" });
            let rec = SetRecord::from_subset(&set, Some(label), Some(format!("family {name}"))).classified()?;
            emit(&rec, pretty)?;
            Ok(Verdict::Pass)
        }
        Command::Extend(args) => match args.scan {
            Some(ExtendCommand::Scan { db }) => {
                let sets = read_database(&db)?
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r.to_subset().with_context(|| format!("record {i}")))
                    .collect::<Result<Vec<_>>>()?;
                let out = scan_database(&sets);
                emit(&out, pretty)?;
                Ok(if out.hits.is_empty() { Verdict::Negative } else { Verdict::Pass })
            }
            None => {
                let report = extension_report(&args.input.subset()?)?;
                emit(&report, pretty)?;
                Ok(if report.is_empty() { Verdict::Negative } else { Verdict::Pass })
            }
        },
        Command::Mgr(MgrCommand::Search { v, k, mode, no_prune, budget }) => {
            let opts = MgrOptions { mode: mode.mode(), pruning: !no_prune, jobs: None, budget: budget.budget() };
            let r = search_mgr(v, k, opts)?;
            emit(&r, pretty)?;
            Ok(match (mode.mode(), r.status) {
                (SearchMode::Exists, s) => Verdict::of_status(s),
                (_, SearchStatus::Timeout) => Verdict::Budget,
                (_, _) if r.count > 0 => Verdict::Pass,
                _ => Verdict::Negative,
            })
        }
        Command::Mgr(MgrCommand::Spectrum { k, no_prune, budget }) => {
            let opts = MgrOptions { pruning: !no_prune, budget: budget.budget(), ..MgrOptions::default() };
            let s = spectrum(k, opts)?;
            eprintln!("{s}");
            emit(&s, pretty)?;
            Ok(if s.is_complete() { Verdict::Pass } else { Verdict::Budget })
        }
        Command::Ads(AdsCommand::Search { v, k, mode, budget }) => {
            let opts = AdsOptions { mode: mode.mode(), jobs: None, budget: budget.budget() };
            let r = search_ads(v, k, opts)?;
            emit(&r, pretty)?;
            Ok(Verdict::of_status(r.status))
        }
        Command::Ads(AdsCommand::Grid { vmin, vmax, kmin, kmax, out, render, budget }) => {
            let opts = AdsOptions { budget: budget.budget(), ..AdsOptions::default() };
            let cells = existence_grid(vmin, vmax, kmin..=kmax.unwrap_or(u64::MAX), opts)?;
            match out {
                Some(path) => {
                    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_grid_csv(&cells, file)?;
                }
                None => write_grid_csv(&cells, std::io::stdout().lock())?,
            }
            if render {
                eprint!("{}", render_grid(&cells));
            }
            let timeouts = cells.iter().any(|c| c.status == SearchStatus::Timeout);
            Ok(if timeouts { Verdict::Budget } else { Verdict::Pass })
        }
        Command::Octic(cmd) => octic::run(cmd, pretty),
        Command::Reproduce(args) => reproduce::run(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let jobs = cli.jobs;
    match with_jobs(jobs, move || run(cli)) {
        Ok(v) => v.code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
