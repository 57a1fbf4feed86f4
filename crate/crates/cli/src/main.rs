//! `sarnak`: schedules, sequence evaluation, verification suites and
//! average reproductions for the Toeplitz construction.
//!
//! Exit codes: 0 on success or a passing verification, 1 on a runtime error
//! or a failing verification, 2 on invalid input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toeplitz_sarnak::analysis::report::{append_csv, to_csv_string, write_csv, CsvRows};
use toeplitz_sarnak::analysis::{self, PolySpec};
use toeplitz_sarnak::numtheory::{verify_residue_lemma, ArithFn};
use toeplitz_sarnak::parallel::Jobs;
use toeplitz_sarnak::schedule::{generate_schedule, parse_rational};
use toeplitz_sarnak::{Error, MemoryBudget, MobiusSieve, ParamSchedule, SeqIndex, Toeplitz};

/// Sieves smaller than this are never worth sizing precisely.
const MIN_SIEVE: u64 = 1 << 16;
/// Averages beyond this `N` require `--long`.
const LONG_AVERAGE_N: u64 = 1 << 24;

#[derive(Parser)]
#[command(
    name = "sarnak",
    version,
    about = "Toeplitz sequences correlated with μ along the squares"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a parameter schedule and print its period table.
    Schedule {
        #[arg(long, default_value = "1/2")]
        epsilon0: String,
        #[arg(long, default_value_t = 5)]
        stages: usize,
        /// Write the schedule to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the limit sequence (or one stage) at indices.
    Eval(EvalArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Compute S1, S2 and the squarefree baseline at one N.
    Average(AverageArgs),
}

#[derive(Args)]
struct ScheduleSource {
    /// Schedule file written by `sarnak schedule --out`.
    #[arg(long, conflicts_with_all = ["epsilon0", "stages"])]
    schedule: Option<PathBuf>,
    /// Generate the schedule from ε₀ (default 1/2).
    #[arg(long)]
    epsilon0: Option<String>,
    /// Number of stages of a generated schedule (default 5).
    #[arg(long)]
    stages: Option<usize>,
}

impl ScheduleSource {
    fn load(&self) -> toeplitz_sarnak::Result<ParamSchedule> {
        if let Some(path) = &self.schedule {
            return ParamSchedule::load(path)?.validated();
        }
        let eps = parse_rational(self.epsilon0.as_deref().unwrap_or("1/2"))?;
        generate_schedule(&eps, self.stages.unwrap_or(5))
    }
}

#[derive(Args)]
struct RunOptions {
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Override the automatically chosen sieve limit.
    #[arg(long)]
    sieve_limit: Option<u64>,
}

impl RunOptions {
    fn jobs(&self) -> Jobs {
        Jobs(self.jobs)
    }

    fn sieve(&self, needed: u64) -> toeplitz_sarnak::Result<MobiusSieve> {
        let limit = self.sieve_limit.unwrap_or(needed.max(MIN_SIEVE));
        MobiusSieve::new(limit, &MemoryBudget::from_env()?)
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: ScheduleSource,
    #[command(flatten)]
    run: RunOptions,
    /// Indices to evaluate (repeatable).
    #[arg(long, allow_negative_numbers = true)]
    index: Vec<SeqIndex>,
    /// Inclusive range `a:b`.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    /// Evaluate `a^(M)` instead of the limit.
    #[arg(long)]
    stage: Option<usize>,
    #[arg(long, default_value = "mobius")]
    weight: String,
    /// Print the resolution trace of every index to stderr.
    #[arg(long)]
    trace: bool,
    /// Write `n,value` rows here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Residues,
    Oracle,
    Toeplitz,
    Discrepancy,
    Distance,
    Decomposition,
    Complexity,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    #[command(flatten)]
    source: ScheduleSource,
    #[command(flatten)]
    run: RunOptions,
    /// Largest exponent for the residue suite.
    #[arg(long, default_value_t = 16)]
    nmax: u32,
    /// Stage (default depends on the suite).
    #[arg(long = "M")]
    stage: Option<usize>,
    /// Inclusive range `a:b` (oracle, decomposition, complexity).
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    imax: u64,
    #[arg(long, default_value_t = -50, allow_negative_numbers = true)]
    tmin: i64,
    #[arg(long, default_value_t = 50, allow_negative_numbers = true)]
    tmax: i64,
    /// Averaging lengths for the distance suite (repeatable).
    #[arg(long = "N")]
    n: Vec<u64>,
    /// Word lengths for the complexity suite (repeatable).
    #[arg(long = "m")]
    word: Vec<u64>,
    /// Write the detailed CSV report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Allow long-running cases.
    #[arg(long)]
    long: bool,
}

#[derive(Args)]
struct AverageArgs {
    #[command(flatten)]
    source: ScheduleSource,
    #[command(flatten)]
    run: RunOptions,
    #[arg(
        long = "N",
        conflicts_with = "at_km",
        required_unless_present = "at_km"
    )]
    n: Option<u64>,
    /// Use N = K_M.
    #[arg(long = "at-KM")]
    at_km: Option<usize>,
    #[arg(long, default_value = "mobius")]
    weight: String,
    /// Append the CSV row to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow long-running cases.
    #[arg(long)]
    long: bool,
}

/// Why a command did not succeed.
enum Failure {
    Error(Error),
    /// Verification ran and found a counterexample.
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type CmdResult = Result<(), Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Error(Error::Domain(msg.into()))
}

fn parse_range(raw: &str) -> toeplitz_sarnak::Result<(SeqIndex, SeqIndex)> {
    let bad = || Error::Parse(format!("range '{raw}' is not of the form a:b"));
    let (a, b) = raw.split_once(':').ok_or_else(bad)?;
    let lo: SeqIndex = a.trim().parse().map_err(|_| bad())?;
    let hi: SeqIndex = b.trim().parse().map_err(|_| bad())?;
    if hi < lo {
        return Err(Error::Domain(format!("range {lo}:{hi} is empty")));
    }
    Ok((lo, hi))
}

/// Sieve size needed to evaluate the base sequence at indices up to `|n|`.
fn sieve_for_index(n: SeqIndex) -> u64 {
    (n.unsigned_abs().isqrt() as u64).saturating_add(1)
}

fn emit<T: CsvRows>(reports: &[T], path: Option<&Path>) -> toeplitz_sarnak::Result<()> {
    if let Some(p) = path {
        write_csv(p, reports)?;
    }
    Ok(())
}

fn verdict(label: &str, passed: bool) -> CmdResult {
    println!("{label}: {}", if passed { "PASS" } else { "FAIL" });
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn print_trace(t: &Toeplitz<'_>, stage: usize, n: SeqIndex) {
    eprintln!("  trace of a^({stage})_{n}:");
    match t.resolve_trace(stage, n) {
        Ok(steps) => {
            for (m, idx) in steps {
                eprintln!("    after stage {m}: index {idx}");
            }
            match t.resolve(stage, n) {
                Ok(src) => eprintln!("    source: {src:?}"),
                Err(e) => eprintln!("    source: {e}"),
            }
        }
        Err(e) => eprintln!("    {e}"),
    }
}

fn cmd_schedule(epsilon0: &str, stages: usize, out: Option<&Path>) -> CmdResult {
    let eps = parse_rational(epsilon0)?;
    let s = generate_schedule(&eps, stages)?;
    println!(
        "{:>2} {:>12} {:>4} {:>34} {:>20}",
        "i", "epsilon_i", "n_i", "l_i", "K_i"
    );
    for i in 0..=s.m_max() {
        let k = if i == 0 {
            "-".to_string()
        } else {
            s.k_bound(i)
                .map(|k| k.to_string())
                .unwrap_or_else(|e| e.to_string())
        };
        println!(
            "{:>2} {:>12} {:>4} {:>34} {:>20}",
            i,
            s.epsilon(i).to_string(),
            s.exponent(i),
            s.length(i),
            k
        );
    }
    if let Some(p) = out {
        s.save(p)?;
        eprintln!("schedule written to {}", p.display());
    }
    Ok(())
}

struct EvalRow {
    n: SeqIndex,
    value: i8,
}

impl CsvRows for EvalRow {
    fn header() -> &'static [&'static str] {
        &["n", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.n.to_string(), self.value.to_string()]]
    }
}

fn cmd_eval(a: &EvalArgs) -> CmdResult {
    let schedule = a.source.load()?;
    let weight: ArithFn = a.weight.parse()?;
    let mut indices = a.index.clone();
    if let Some(r) = &a.range {
        let (lo, hi) = parse_range(r)?;
        if hi - lo >= 10_000_000 {
            return Err(Failure::Error(Error::Capacity(format!(
                "range {lo}:{hi} has more than 10^7 entries"
            ))));
        }
        indices.extend(lo..=hi);
    }
    if indices.is_empty() {
        return Err(invalid("nothing to evaluate: pass --index or --range"));
    }
    if let Some(m) = a.stage {
        if m > schedule.m_max() {
            return Err(invalid(format!(
                "--stage {m} exceeds M_max = {}",
                schedule.m_max()
            )));
        }
    }

    // Resolve first: the sieve only has to cover the source indices.
    let probe_sieve = MobiusSieve::new(1, &MemoryBudget::default())?;
    let probe = Toeplitz::new(&schedule, &probe_sieve)?;
    let mut needed = 1;
    for &n in &indices {
        let stage = match a.stage {
            Some(m) => m,
            None => probe.limit_stage(n)?,
        };
        if let toeplitz_sarnak::construction::Source::Base(idx) = probe.resolve(stage, n)? {
            needed = needed.max(sieve_for_index(idx));
        }
    }
    let sieve = a.run.sieve(needed)?;
    let t = Toeplitz::new(&schedule, &sieve)?.with_base(weight);

    let mut rows = Vec::with_capacity(indices.len());
    for &n in &indices {
        let stage = match a.stage {
            Some(m) => m,
            None => t.limit_stage(n)?,
        };
        if a.trace {
            print_trace(&t, stage, n);
        }
        rows.push(EvalRow {
            n,
            value: t.stage_value(stage, n)?.value(),
        });
    }
    match &a.out {
        Some(p) => write_csv(p, &rows)?,
        None => print!("{}", to_csv_string(&rows)?),
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    if let Suite::Residues = a.suite {
        let report = verify_residue_lemma(a.nmax)?;
        println!(
            "residue classes: n ≤ {}, {} classes checked",
            report.n_max, report.classes_checked
        );
        if let Some(f) = &report.first_failure {
            eprintln!("first counterexample: {f}");
        }
        emit(std::slice::from_ref(&report), a.report.as_deref())?;
        return verdict("residues", report.passed());
    }

    let schedule = a.source.load()?;
    let jobs = a.run.jobs();
    let m_max = schedule.m_max();
    let stage_or = |default: usize| a.stage.unwrap_or(default);
    let range_or = |lo: SeqIndex, hi: SeqIndex| -> toeplitz_sarnak::Result<(SeqIndex, SeqIndex)> {
        a.range.as_deref().map(parse_range).unwrap_or(Ok((lo, hi)))
    };

    match a.suite {
        Suite::Residues => unreachable!(),
        Suite::Oracle | Suite::Decomposition => {
            let stage = stage_or(3);
            let (lo, hi) = range_or(-100_000, 100_000)?;
            if stage > m_max {
                return Err(invalid(format!("--M {stage} exceeds M_max = {m_max}")));
            }
            let reach = lo
                .abs()
                .max(hi.abs())
                .max(schedule.length(stage.saturating_sub(1)));
            let sieve = a.run.sieve(sieve_for_index(reach))?;
            let t = Toeplitz::new(&schedule, &sieve)?;
            let report = if let Suite::Oracle = a.suite {
                analysis::oracle_equivalence(&t, stage, lo, hi, jobs)?
            } else {
                analysis::decomposition_check(&t, stage, lo, hi, jobs)?
            };
            println!(
                "{}: [{lo}, {hi}], {} positions",
                report.name, report.checked
            );
            if let Some(f) = &report.first_failure {
                eprintln!("first counterexample at n = {}: {}", f.n, f.detail);
                print_trace(&t, stage, f.n);
            }
            emit(std::slice::from_ref(&report), a.report.as_deref())?;
            verdict(&report.name, report.passed())
        }
        Suite::Toeplitz => {
            let sieve = a.run.sieve(sieve_for_index(a.imax as SeqIndex))?;
            let t = Toeplitz::new(&schedule, &sieve)?;
            let report = analysis::toeplitz_recurrence_check(&t, a.imax, a.tmin, a.tmax, jobs)?;
            println!(
                "recurrence: |i| ≤ {}, t ∈ [{}, {}], {} comparisons",
                a.imax, a.tmin, a.tmax, report.checked
            );
            if let Some(f) = &report.first_failure {
                let n = f.i + f.t as SeqIndex * f.period;
                eprintln!(
                    "first counterexample: b_{} = {} but b_{n} = {} (period {})",
                    f.i, f.expected, f.found, f.period
                );
                if let Ok(stage) = t.limit_stage(n) {
                    print_trace(&t, stage, n);
                }
            }
            emit(std::slice::from_ref(&report), a.report.as_deref())?;
            verdict("toeplitz", report.passed())
        }
        Suite::Discrepancy => {
            let stages: Vec<usize> = match a.stage {
                Some(m) => vec![m],
                None => vec![2, 3],
            };
            let mut reports = Vec::new();
            for &m in &stages {
                if m < 2 || m > m_max {
                    return Err(invalid(format!("--M {m} must lie in 2..={m_max}")));
                }
                if m >= 4 && !a.long {
                    return Err(invalid(format!("--M {m} is long-running; pass --long")));
                }
                let k = schedule.k_bound(m)?;
                let sieve = a.run.sieve(k as u64)?;
                let t = Toeplitz::new(&schedule, &sieve)?;
                if m >= 4 {
                    eprintln!("discrepancy M={m}: {k} membership tests…");
                }
                let r = analysis::discrepancy_ratio(&t, m, jobs)?;
                println!(
                    "discrepancy M={}: K_M = {}, count = {}, ratio = {} < bound {} = {} (proof bound {})",
                    r.stage,
                    r.k_m,
                    r.count,
                    r.ratio(),
                    r.bound,
                    r.bound_f64(),
                    r.proof_bound
                );
                reports.push(r);
            }
            emit(&reports, a.report.as_deref())?;
            verdict("discrepancy", reports.iter().all(|r| r.passed()))
        }
        Suite::Distance => {
            let stages: Vec<usize> = match a.stage {
                Some(m) => vec![m],
                None => (1..=4.min(m_max)).collect(),
            };
            let ns = if a.n.is_empty() {
                vec![1_000, 10_000, 100_000, 1_000_000]
            } else {
                a.n.clone()
            };
            let n_max = ns.iter().copied().max().unwrap_or(1);
            let sieve = a.run.sieve(sieve_for_index(n_max as SeqIndex))?;
            let t = Toeplitz::new(&schedule, &sieve)?;
            let mut reports = Vec::new();
            for &m in &stages {
                for &n in &ns {
                    let r = analysis::stage_distance(&t, m, n, jobs)?;
                    println!(
                        "distance M={} N={}: {}/{} = {} < ε_M = {}",
                        r.stage,
                        r.n,
                        r.total,
                        r.n,
                        r.value(),
                        r.epsilon
                    );
                    reports.push(r);
                }
            }
            emit(&reports, a.report.as_deref())?;
            verdict("distance", reports.iter().all(|r| r.passed()))
        }
        Suite::Complexity => {
            let (lo, hi) = range_or(-1_000_000, 1_000_000)?;
            let words = if a.word.is_empty() {
                vec![8, 16, 32]
            } else {
                a.word.clone()
            };
            let sieve = a.run.sieve(sieve_for_index(lo.abs().max(hi.abs())))?;
            let t = Toeplitz::new(&schedule, &sieve)?;
            let rows = analysis::entropy_bound_check(&t, &words, lo, hi, jobs)?;
            for r in &rows {
                println!(
                    "complexity m={}: sampled p_b = {} ≤ {} (aligned {}, log p/m = {})",
                    r.report.m, r.report.sampled_p, r.report.bound, r.report.aligned_p, r.log_rate
                );
            }
            let ratio_stages: Vec<usize> = (1..=m_max)
                .filter(|&m| schedule.length(m) <= (hi - lo + 1) / 4)
                .collect();
            if !ratio_stages.is_empty() {
                let ratios = analysis::sequential_ratio_report(
                    &t,
                    &PolySpec::square(),
                    &ratio_stages,
                    lo,
                    hi,
                    jobs,
                )?;
                for r in &ratios {
                    println!(
                        "P(n) = n², M={}: β = {}, log p_b(l_M)/β = {}{}",
                        r.stage,
                        r.beta,
                        r.ratio,
                        if r.aligned { " (aligned count)" } else { "" }
                    );
                }
            }
            emit(&rows, a.report.as_deref())?;
            verdict("complexity", rows.iter().all(|r| r.passed()))
        }
    }
}

fn cmd_average(a: &AverageArgs) -> CmdResult {
    let schedule = a.source.load()?;
    let weight: ArithFn = a.weight.parse()?;
    let n = match (a.n, a.at_km) {
        (Some(n), _) => n,
        (None, Some(m)) => {
            if m == 0 || m > schedule.m_max() {
                return Err(invalid(format!(
                    "--at-KM {m} must lie in 1..={}",
                    schedule.m_max()
                )));
            }
            schedule.k_bound(m)? as u64
        }
        (None, None) => return Err(invalid("pass --N or --at-KM")),
    };
    if n == 0 {
        return Err(invalid("--N must be at least 1"));
    }
    if n > LONG_AVERAGE_N && !a.long {
        return Err(invalid(format!("N = {n} is long-running; pass --long")));
    }
    let sieve = a.run.sieve(n)?;
    let t = Toeplitz::new(&schedule, &sieve)?;
    if a.long {
        eprintln!("averaging over N = {n} with weight {}…", weight.name());
    }
    let report = analysis::average_report(&t, weight, n, a.run.jobs())?;
    print!("{}", to_csv_string(std::slice::from_ref(&report))?);
    if let Some(p) = &a.out {
        append_csv(p, std::slice::from_ref(&report))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Schedule {
            epsilon0,
            stages,
            out,
        } => cmd_schedule(epsilon0, *stages, out.as_deref()),
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Average(a) => cmd_average(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let _ = std::io::stdout().flush();
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            if e.is_invalid_input() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
