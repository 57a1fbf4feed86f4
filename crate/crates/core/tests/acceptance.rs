//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every threshold and time budget is pinned below.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use toeplitz_sarnak::analysis::complexity::{count_words, quadratic_bound, DEFAULT_WORD_CAP};
use toeplitz_sarnak::analysis::report::to_csv_string;
use toeplitz_sarnak::analysis::{
    average_gap, average_report, baseline_squarefree, decomposition_check, discrepancy_ratio,
    entropy_bound_check, mobius_average, oracle_equivalence, periodic_weight_average,
    stage_distance, toeplitz_recurrence_check, weighted_square_average,
};
use toeplitz_sarnak::construction::Level;
use toeplitz_sarnak::numtheory::{verify_residue_lemma, ArithFn};
use toeplitz_sarnak::parallel::{map_range, Jobs};
use toeplitz_sarnak::{MemoryBudget, MobiusSieve, ParamSchedule, Result, SymbolSequence, Toeplitz};

const RESIDUE_N_MAX: u32 = 16;
const ORACLE_RANGE: i128 = 100_000;
const RECURRENCE_I_MAX: u64 = 10_000;
const RECURRENCE_T: i64 = 50;
const AVERAGE_MARGIN: f64 = 0.02;
const BASELINE_N: u64 = 1_000_000;
const BASELINE_TOLERANCE: f64 = 0.002;
const SARNAK_N: u64 = 1_000_000;
const S2_TOLERANCE: f64 = 0.005;
const PERIODIC_TOLERANCE: f64 = 0.01;
const DISTANCE_NS: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];
const COMPLEXITY_WINDOW: i128 = 1_000_000;
const COMPLEXITY_A_MAX_M: u64 = 64;
const COMPLEXITY_B_MS: [u64; 3] = [8, 16, 32];
const DECOMPOSITION_RANGE: i128 = 100_000;
const LIOUVILLE_FLOOR: f64 = 0.3;
const DETERMINISM_JOBS: [usize; 2] = [1, 8];
const JOBS: Jobs = Jobs(0);

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn squarefree_density() -> f64 {
    6.0 / (PI * PI)
}

/// ε = (1, 12/25, 23/100, 11/100), n = (0, 4, 9, 19): short periods, so that
/// windows of every stage fall inside the tested range many times.
fn toy_schedule() -> ParamSchedule {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    ParamSchedule::from_parts(
        vec![q(1, 1), q(12, 25), q(23, 100), q(11, 100)],
        vec![0, 4, 9, 19],
    )
    .unwrap()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

struct Ctx {
    schedule: ParamSchedule,
    sieve: MobiusSieve,
}

impl Ctx {
    fn toeplitz(&self) -> Toeplitz<'_> {
        Toeplitz::new(&self.schedule, &self.sieve).unwrap()
    }
}

fn residues(_: &Ctx) -> Result<Outcome> {
    let r = verify_residue_lemma(RESIDUE_N_MAX)?;
    let coverage_ok = r
        .coverage
        .iter()
        .all(|&(_, covered, nonzero)| covered == nonzero);
    outcome(
        r.passed() && coverage_ok,
        format!(
            "n ≤ {RESIDUE_N_MAX}: {} classes; size formula, 2^(r+2) bound, disjointness, coverage{}",
            r.classes_checked,
            r.first_failure.map(|f| format!("; {f}")).unwrap_or_default()
        ),
    )
}

fn oracle(ctx: &Ctx) -> Result<Outcome> {
    let toy = toy_schedule();
    let schedules = [("default", &ctx.schedule), ("toy", &toy)];
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, s) in schedules {
        let t = Toeplitz::new(s, &ctx.sieve)?;
        for stage in 1..=3 {
            let r = oracle_equivalence(&t, stage, -ORACLE_RANGE, ORACLE_RANGE, JOBS)?;
            ok &= r.passed() && r.checked == 2 * ORACLE_RANGE as u64 + 1;
            if let Some(f) = r.first_failure {
                notes.push(format!("{name} M={stage} n={}: {}", f.n, f.detail));
            }
        }
    }
    outcome(
        ok,
        format!(
            "[-{ORACLE_RANGE}, {ORACLE_RANGE}], M ∈ {{1,2,3}}, default and toy schedules{}",
            notes.iter().map(|n| format!("; {n}")).collect::<String>()
        ),
    )
}

fn recurrence(ctx: &Ctx) -> Result<Outcome> {
    let r = toeplitz_recurrence_check(
        &ctx.toeplitz(),
        RECURRENCE_I_MAX,
        -RECURRENCE_T,
        RECURRENCE_T,
        JOBS,
    )?;
    outcome(
        r.passed(),
        format!(
            "|i| ≤ {RECURRENCE_I_MAX}, t ∈ [-{RECURRENCE_T}, {RECURRENCE_T}]: {} comparisons{}",
            r.checked,
            r.first_failure
                .map(|f| format!(", fails at i={} t={}", f.i, f.t))
                .unwrap_or_default()
        ),
    )
}

/// CSV of the discrepancy reports for M = 2, 3, 4.
fn discrepancy_csv(ctx: &Ctx, jobs: Jobs) -> Result<(bool, String, String)> {
    let t = ctx.toeplitz();
    let reports = (2..=4)
        .map(|m| discrepancy_ratio(&t, m, jobs))
        .collect::<Result<Vec<_>>>()?;
    let summary = reports
        .iter()
        .map(|r| format!("M={}: {}/{} < {}", r.stage, r.count, r.k_m, r.bound))
        .collect::<Vec<_>>()
        .join(", ");
    Ok((
        reports.iter().all(|r| r.passed()),
        summary,
        to_csv_string(&reports)?,
    ))
}

fn discrepancy(ctx: &Ctx) -> Result<Outcome> {
    let (ok, summary, _) = discrepancy_csv(ctx, JOBS)?;
    outcome(ok, summary)
}

/// CSV of S1/S2/baseline and the term-by-term gap at K_3 and K_4.
fn average_csv(ctx: &Ctx, jobs: Jobs) -> Result<(bool, String, String)> {
    let t = ctx.toeplitz();
    let s = &ctx.schedule;
    let threshold = squarefree_density()
        - (1..=3).map(|i| s.epsilon(i).to_f64().unwrap()).sum::<f64>()
        - AVERAGE_MARGIN;
    let mut ok = true;
    let mut notes = Vec::new();
    let mut reports = Vec::new();
    let mut gaps = Vec::new();
    for m in [3, 4] {
        let k = s.k_bound(m)? as u64;
        let report = average_report(&t, ArithFn::Mobius, k, jobs)?;
        let gap = average_gap(&t, m, jobs)?;
        let s1 = report.s1.value.re;
        ok &=
            s1 > threshold && gap.passed() && report.s1.real_numerator() == Some(gap.s1_numerator);
        notes.push(format!(
            "S1(K_{m}={k}) = {s1:.6} > {threshold:.6}, |{} - {}| ≤ 2·{}",
            gap.s1_numerator, gap.baseline_numerator, gap.count
        ));
        reports.push(report);
        gaps.push(gap);
    }
    let csv = to_csv_string(&reports)? + &to_csv_string(&gaps)?;
    Ok((ok, notes.join("; "), csv))
}

fn main_average(ctx: &Ctx) -> Result<Outcome> {
    let (ok, notes, _) = average_csv(ctx, JOBS)?;
    outcome(ok, notes)
}

fn baseline(ctx: &Ctx) -> Result<Outcome> {
    let b = baseline_squarefree(&ctx.sieve, BASELINE_N)?;
    let diff = (b.value() - squarefree_density()).abs();
    outcome(
        diff < BASELINE_TOLERANCE,
        format!(
            "{}/{BASELINE_N}, |value - 6/π²| = {diff:.2e} < {BASELINE_TOLERANCE}",
            b.numerator
        ),
    )
}

fn sarnak(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.toeplitz();
    let s2 = mobius_average(&t, SARNAK_N, JOBS)?;
    let mut ok = s2.value().abs() < S2_TOLERANCE;
    let mut notes = vec![format!("S2 = {}/{SARNAK_N}", s2.numerator)];
    for m in [1, 2] {
        let p = periodic_weight_average(&t, m, 4, SARNAK_N, JOBS)?;
        ok &= p.value().abs() < PERIODIC_TOLERANCE;
        notes.push(format!("μ·c^({m}) = {}/{SARNAK_N}", p.numerator));
    }
    outcome(
        ok,
        format!(
            "{} (tolerances {S2_TOLERANCE}, {PERIODIC_TOLERANCE})",
            notes.join(", ")
        ),
    )
}

fn distance(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.toeplitz();
    let mut ok = true;
    let mut worst = (0.0f64, 0, 0);
    for m in 1..=4 {
        for n in DISTANCE_NS {
            let r = stage_distance(&t, m, n, JOBS)?;
            ok &= r.passed();
            let rel = r.value() / r.epsilon.to_f64().unwrap();
            if rel >= worst.0 {
                worst = (rel, m, n);
            }
        }
    }
    outcome(
        ok,
        format!(
            "M ≤ 4, N ∈ {DISTANCE_NS:?}; largest distance/ε_M = {:.4} at M={} N={}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn complexity(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.toeplitz();
    let base = t.sequence(Level::Base);
    let symbols = map_range(-COMPLEXITY_WINDOW, COMPLEXITY_WINDOW, JOBS, |n| {
        base.symbol_at(n)
    })?;
    let mut ok = true;
    let mut worst = (0u64, 0u64);
    for m in 1..=COMPLEXITY_A_MAX_M {
        let (p, _) = count_words(&symbols, -COMPLEXITY_WINDOW, m, DEFAULT_WORD_CAP)?;
        ok &= p as u128 <= quadratic_bound(m);
        if m == COMPLEXITY_A_MAX_M {
            worst = (p, m);
        }
    }
    let rows = entropy_bound_check(
        &t,
        &COMPLEXITY_B_MS,
        -COMPLEXITY_WINDOW,
        COMPLEXITY_WINDOW,
        JOBS,
    )?;
    ok &= rows.iter().all(|r| r.passed());
    let b = rows
        .iter()
        .map(|r| {
            format!(
                "p_b({}) = {} ≤ {}",
                r.report.m, r.report.sampled_p, r.report.bound
            )
        })
        .collect::<Vec<_>>()
        .join(", ");
    outcome(
        ok,
        format!(
            "p_a(m) ≤ m²+2m for m ≤ {COMPLEXITY_A_MAX_M} (p_a({}) = {}); {b}",
            worst.1, worst.0
        ),
    )
}

fn decomposition(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.toeplitz();
    let mut ok = true;
    for stage in 0..=3 {
        ok &= decomposition_check(&t, stage, -DECOMPOSITION_RANGE, DECOMPOSITION_RANGE, JOBS)?
            .passed();
    }
    outcome(ok, format!("|n| ≤ {DECOMPOSITION_RANGE}, M ∈ 0..=3"))
}

fn liouville(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.toeplitz().with_base(ArithFn::Liouville);
    let k = ctx.schedule.k_bound(3)? as u64;
    let s1 = weighted_square_average(&t, &ArithFn::Liouville, k, JOBS)?;
    let v = s1.value.re;
    outcome(
        v.abs() > LIOUVILLE_FLOOR,
        format!(
            "S1(K_3) with ω = λ: {}/{k} = {v:.6}, |S1| > {LIOUVILLE_FLOOR}",
            s1.real_numerator().unwrap_or_default()
        ),
    )
}

fn determinism(ctx: &Ctx) -> Result<Outcome> {
    let mut texts = Vec::new();
    for jobs in DETERMINISM_JOBS {
        let (_, _, d) = discrepancy_csv(ctx, Jobs(jobs))?;
        let (_, _, a) = average_csv(ctx, Jobs(jobs))?;
        texts.push(d + &a);
    }
    let same = texts.windows(2).all(|w| w[0] == w[1]);
    outcome(
        same,
        format!(
            "discrepancy and average reports at jobs {DETERMINISM_JOBS:?}: {} bytes each",
            texts[0].len()
        ),
    )
}

type Check = fn(&Ctx) -> Result<Outcome>;

fn main() -> ExitCode {
    let budget = MemoryBudget::from_env().expect("memory budget");
    let schedule = ParamSchedule::default_tower();
    let k4 = schedule.k_bound(4).expect("K_4") as u64;
    let sieve = MobiusSieve::new(k4.max(SARNAK_N), &budget).expect("sieve");
    let ctx = Ctx { schedule, sieve };

    let criteria: [(u32, &str, Duration, Check); 12] = [
        (1, "residue classes mod 2^n", secs(5), residues),
        (2, "oracle equivalence", secs(30), oracle),
        (3, "regular recurrence", secs(60), recurrence),
        (4, "discrepancy density", secs(15 * 60), discrepancy),
        (5, "square average vs baseline", secs(10 * 60), main_average),
        (6, "squarefree baseline", secs(5), baseline),
        (7, "Möbius disjointness", secs(60), sarnak),
        (8, "stage distance", secs(60), distance),
        (9, "complexity bounds", secs(120), complexity),
        (10, "decomposition identity", secs(30), decomposition),
        (11, "Liouville weight", secs(60), liouville),
        (
            12,
            "determinism across job counts",
            secs(30 * 60),
            determinism,
        ),
    ];

    let mut failures = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check(&ctx);
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && elapsed <= limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {id:>2} {}: {name}: {detail} [{:.2} s, budget {} s]",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
