//! The `tandem` command: generate, verify, analyze, and certify round
//! robin schedules for a two-division league run in tandem.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tandem_core::{
    build_schedule, c_max, check_balance, check_bound_lemmas, check_common_orientation,
    common_fixtures, document_from_schedule, exhaustive_max_common, expand_double_round_robin,
    random_draw, schedule_from_document, to_csv, to_text, Division, Draw, FixtureReport, Mode,
    OracleResult, OrientedFixture, OrientedRound, Schedule, ScheduleDocument,
};

#[derive(Parser)]
#[command(
    name = "tandem",
    version,
    about = "Round robin schedules for a two-division league run in tandem",
    long_about = "Builds seasons for a first division of 2n clubs and a second division \
                  with the same clubs plus two more, maximising the fixtures where a \
                  club's two teams host the same opponent club on the same date."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an optimal season and print or save it
    Generate(GenerateArgs),
    /// Check a schedule document; exit 0 iff it is structurally sound
    Verify(VerifyArgs),
    /// Report common fixtures, bounds, and balance for a document
    Analyze(AnalyzeArgs),
    /// Certify the optimum exhaustively (n <= 3), or fuzz the bounds
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Division one plays each opponent twice, division two once
    Double,
    /// Both divisions play each opponent once
    Single,
}

impl From<ModeArg> for Mode {
    fn from(value: ModeArg) -> Mode {
        match value {
            ModeArg::Double => Mode::Double,
            ModeArg::Single => Mode::Single,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct GenerateArgs {
    /// Half the number of division-one clubs
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=5_000))]
    n: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Double)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Club names, one per line, in label order (text format only)
    #[arg(long)]
    names: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// A schedule document in JSON format
    path: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// A schedule document in JSON format
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Club names, one per line, in label order (text format only)
    #[arg(long)]
    names: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Problem size; exhaustive search supports 1..=3
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Double)]
    mode: ModeArg,
    /// Worker threads for the search; 0 uses all processors
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Where to write the witness schedule (exhaustive search only)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Check this many random draw pairs against the proved bounds
    /// instead of searching; works for any n
    #[arg(long, value_name = "COUNT")]
    fuzz: Option<u64>,
    /// Base seed for --fuzz
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A problem with the invocation or an unreadable input; exits 2. Genuine
/// verification failures print their findings and exit 1 instead.
struct UsageError(String);

impl UsageError {
    fn new(message: impl ToString) -> UsageError {
        UsageError(message.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match result {
        Ok(code) => code,
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Append a line to a report buffer; infallible for strings.
macro_rules! outln {
    ($buf:expr, $($arg:tt)*) => {{
        let _ = writeln!($buf, $($arg)*);
    }};
}

/// Write a finished report to stdout. A closed pipe (for example `head`
/// downstream) is not an error.
fn print_stdout(content: &str) -> Result<(), UsageError> {
    match io::stdout().write_all(content.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(UsageError::new(format!("stdout: {e}"))),
    }
}

fn read_to_string(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError::new(format!("{}: {e}", path.display())))
}

fn read_document(path: &Path) -> Result<ScheduleDocument, UsageError> {
    let data = read_to_string(path)?;
    serde_json::from_str(&data).map_err(|e| UsageError::new(format!("{}: {e}", path.display())))
}

fn load_names(path: Option<&Path>) -> Result<Option<Vec<String>>, UsageError> {
    let Some(path) = path else { return Ok(None) };
    let data = read_to_string(path)?;
    Ok(Some(data.lines().map(|s| s.trim().to_string()).collect()))
}

fn emit(path: Option<&Path>, content: &str) -> Result<(), UsageError> {
    match path {
        None => print_stdout(content),
        Some(path) => fs::write(path, content)
            .map_err(|e| UsageError::new(format!("{}: {e}", path.display()))),
    }
}

fn render(
    doc: &ScheduleDocument,
    format: FormatArg,
    names: Option<&[String]>,
) -> Result<String, UsageError> {
    Ok(match format {
        FormatArg::Json => {
            let mut json = serde_json::to_string_pretty(doc).map_err(UsageError::new)?;
            json.push('\n');
            json
        }
        FormatArg::Csv => to_csv(doc),
        FormatArg::Text => to_text(doc, names),
    })
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, UsageError> {
    let mode = Mode::from(args.mode);
    let schedule = build_schedule(args.n, mode).map_err(UsageError::new)?;
    let doc = document_from_schedule(&schedule).map_err(UsageError::new)?;

    let mut problems: Vec<String> = schedule.validate().iter().map(|v| v.to_string()).collect();
    problems.extend(
        check_common_orientation(&schedule)
            .iter()
            .map(|v| v.to_string()),
    );
    let optimum = c_max(args.n, mode).map_err(UsageError::new)?;
    if doc.summary.total_common != optimum {
        problems.push(format!(
            "total common fixtures {} misses the optimum {optimum}",
            doc.summary.total_common
        ));
    }
    if !problems.is_empty() {
        for p in &problems {
            eprintln!("self-check failed: {p}");
        }
        return Ok(ExitCode::FAILURE);
    }

    let names = load_names(args.names.as_deref())?;
    let rendered = render(&doc, args.format, names.as_deref())?;
    emit(args.output.as_deref(), &rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn report_lines(report: &FixtureReport, n: u32, mode: Mode) -> Vec<String> {
    let optimum = c_max(n, mode).map(|o| o.to_string());
    let optimum = optimum.as_deref().unwrap_or("?");
    let counts: Vec<String> = report
        .per_round_counts
        .iter()
        .map(|c| c.to_string())
        .collect();
    vec![
        format!(
            "common fixtures: {} (optimum {optimum}); extra clubs' game in round {}",
            report.total, report.q
        ),
        format!("  per round: {}", counts.join(" ")),
    ]
}

struct BalanceSummary {
    description: String,
    balanced: bool,
}

fn balance_summary(schedule: &Schedule) -> BalanceSummary {
    let n = schedule.n;
    let div2 = check_balance(&schedule.div2_rounds, 2 * n + 2);
    let (description, balanced) = match schedule.mode {
        Mode::Double => {
            let split = (2 * n as usize - 1).min(schedule.div1_rounds.len());
            let first = check_balance(&schedule.div1_rounds[..split], 2 * n);
            let second = check_balance(&schedule.div1_rounds[split..], 2 * n);
            (
                format!(
                    "division one legs spread {} and {}, division two spread {}",
                    first.max_spread, second.max_spread, div2.max_spread
                ),
                first.balanced && second.balanced && div2.balanced,
            )
        }
        Mode::Single => {
            let first = check_balance(&schedule.div1_rounds, 2 * n);
            (
                format!(
                    "division one spread {}, division two spread {}",
                    first.max_spread, div2.max_spread
                ),
                first.balanced && div2.balanced,
            )
        }
    };
    BalanceSummary {
        description,
        balanced,
    }
}

fn stale_flag_count(doc: &ScheduleDocument, schedule: &Schedule) -> usize {
    let Ok(fresh) = document_from_schedule(schedule) else {
        return 0;
    };
    doc.divisions
        .iter()
        .zip(&fresh.divisions)
        .flat_map(|(a, b)| a.rounds.iter().zip(&b.rounds))
        .flat_map(|(a, b)| a.fixtures.iter().zip(&b.fixtures))
        .filter(|(a, b)| a.common != b.common)
        .count()
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, UsageError> {
    let doc = read_document(&args.path)?;
    let schedule = schedule_from_document(&doc).map_err(UsageError::new)?;
    let n = schedule.n;
    let mut out = String::new();
    outln!(
        out,
        "schedule: n = {n}, {} mode; division one {} rounds, division two {} rounds",
        schedule.mode,
        schedule.div1_rounds.len(),
        schedule.div2_rounds.len()
    );

    let structure = schedule.validate();
    if structure.is_empty() {
        outln!(out, "structure: ok");
    } else {
        outln!(out, "structure: FAIL");
        for v in &structure {
            outln!(out, "  - {v}");
        }
    }

    match common_fixtures(
        &schedule.draw(Division::One),
        &schedule.draw(Division::Two),
        schedule.mode,
    ) {
        Ok(report) => {
            for line in report_lines(&report, n, schedule.mode) {
                outln!(out, "{line}");
            }
            let lemmas = check_bound_lemmas(&report);
            if lemmas.is_empty() {
                outln!(out, "bound lemmas: ok");
            } else {
                outln!(
                    out,
                    "bound lemmas: {} violation(s) (reported only)",
                    lemmas.len()
                );
                for v in &lemmas {
                    outln!(out, "  - {v}");
                }
            }
        }
        Err(e) => outln!(out, "common fixtures: unavailable ({e})"),
    }

    let balance = balance_summary(&schedule);
    outln!(
        out,
        "balance: {} ({})",
        if balance.balanced { "ok" } else { "uneven" },
        balance.description
    );

    let orientation = check_common_orientation(&schedule);
    if orientation.is_empty() {
        outln!(out, "orientation: ok");
    } else {
        outln!(out, "orientation: {} mismatch(es)", orientation.len());
        for v in &orientation {
            outln!(out, "  - {v}");
        }
    }

    let stale = stale_flag_count(&doc, &schedule);
    if stale == 0 {
        outln!(out, "stored flags: fresh");
    } else {
        outln!(
            out,
            "stored flags: STALE ({stale} fixtures flagged wrongly)"
        );
    }

    let code = if structure.is_empty() {
        outln!(out, "result: VALID");
        ExitCode::SUCCESS
    } else {
        outln!(out, "result: INVALID");
        ExitCode::FAILURE
    };
    print_stdout(&out)?;
    Ok(code)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, UsageError> {
    let doc = read_document(&args.path)?;
    let schedule = schedule_from_document(&doc).map_err(UsageError::new)?;
    let n = schedule.n;
    let report = common_fixtures(
        &schedule.draw(Division::One),
        &schedule.draw(Division::Two),
        schedule.mode,
    )
    .map_err(UsageError::new)?;
    let structure = schedule.validate();
    let lemmas = check_bound_lemmas(&report);
    let orientation = check_common_orientation(&schedule);
    let balance = balance_summary(&schedule);

    if args.format == FormatArg::Json {
        let value = serde_json::json!({
            "n": n,
            "mode": schedule.mode.to_string(),
            "total_common": report.total,
            "optimum": c_max(n, schedule.mode).ok(),
            "q": report.q,
            "per_round_counts": report.per_round_counts,
            "fixtures": report
                .fixtures
                .iter()
                .map(|(r, f)| serde_json::json!({
                    "round": r,
                    "clubs": [f.a().label(), f.b().label()],
                }))
                .collect::<Vec<_>>(),
            "balanced": balance.balanced,
            "structure_violations": structure.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "lemma_violations": lemmas.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "orientation_violations": orientation.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "stale_flags": stale_flag_count(&doc, &schedule),
        });
        let mut json = serde_json::to_string_pretty(&value).map_err(UsageError::new)?;
        json.push('\n');
        print_stdout(&json)?;
        return Ok(ExitCode::SUCCESS);
    }

    let names = load_names(args.names.as_deref())?;
    let name = |label: u32| -> String {
        names
            .as_deref()
            .and_then(|ns| ns.get(label as usize))
            .filter(|s| !s.is_empty())
            .cloned()
            .unwrap_or_else(|| label.to_string())
    };

    let mut out = String::new();
    outln!(out, "n = {n}, {} mode", schedule.mode);
    for line in report_lines(&report, n, schedule.mode) {
        outln!(out, "{line}");
    }
    for (r, f) in &report.fixtures {
        outln!(
            out,
            "  round {r:>2}: {} v {}",
            name(f.a().label()),
            name(f.b().label())
        );
    }
    outln!(
        out,
        "balance: {} ({})",
        if balance.balanced { "ok" } else { "uneven" },
        balance.description
    );
    if !structure.is_empty() {
        outln!(
            out,
            "note: schedule is structurally invalid ({} finding(s)); run verify for details",
            structure.len()
        );
    }
    if !lemmas.is_empty() {
        outln!(
            out,
            "note: {} bound violation(s); run verify for details",
            lemmas.len()
        );
    }
    if !orientation.is_empty() {
        outln!(
            out,
            "note: {} orientation mismatch(es); run verify for details",
            orientation.len()
        );
    }
    print_stdout(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn witness_schedule(result: &OracleResult) -> Schedule {
    let lex = |draw: &Draw| -> Vec<OrientedRound> {
        draw.rounds()
            .iter()
            .map(|factor| {
                factor
                    .iter()
                    .map(|f| OrientedFixture::new(f.a(), f.b()))
                    .collect()
            })
            .collect()
    };
    let mut div1 = lex(&result.witness.0);
    if result.mode == Mode::Double {
        // With both divisions at lower-label-home, common fixtures whose
        // shared date falls in division one's second leg would be played
        // reversed there. Flipping their first-leg games restores the
        // agreement; each pair has at most one shared date, so no flip
        // conflicts with another.
        let mut col2 = std::collections::HashMap::new();
        for (i, factor) in result.witness.1.rounds().iter().enumerate() {
            for f in factor.iter() {
                col2.entry(f).or_insert(i as u32 + 1);
            }
        }
        let leg = 2 * result.n - 1;
        for (i, round) in div1.iter_mut().enumerate() {
            let c1 = i as u32 + 1;
            for of in round.iter_mut() {
                if let Some(f) = of.unoriented() {
                    if col2.get(&f) == Some(&(c1 + leg)) {
                        *of = of.reversed();
                    }
                }
            }
        }
        div1 = expand_double_round_robin(&div1);
    }
    Schedule {
        n: result.n,
        mode: result.mode,
        div1_rounds: div1,
        div2_rounds: lex(&result.witness.1),
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode, UsageError> {
    let mode = Mode::from(args.mode);
    if let Some(count) = args.fuzz {
        return fuzz_bounds(args.n, mode, count, args.seed);
    }
    if args.n > 3 {
        return Err(UsageError::new(format!(
            "exhaustive search supports --n 1..=3 (got {}); use --fuzz COUNT to spot-check larger sizes",
            args.n
        )));
    }

    let clock = Instant::now();
    let result = exhaustive_max_common(args.n, mode, args.jobs).map_err(UsageError::new)?;
    let elapsed = clock.elapsed();
    let optimum = c_max(args.n, mode).map_err(UsageError::new)?;

    let witness_path = args
        .output
        .unwrap_or_else(|| PathBuf::from(format!("tandem-witness-n{}-{mode}.json", args.n)));
    let witness = document_from_schedule(&witness_schedule(&result)).map_err(UsageError::new)?;
    let mut json = serde_json::to_string_pretty(&witness).map_err(UsageError::new)?;
    json.push('\n');
    emit(Some(&witness_path), &json)?;

    match args.format {
        FormatArg::Json => {
            let value = serde_json::json!({
                "n": args.n,
                "mode": mode.to_string(),
                "maximum": result.maximum,
                "optimum": optimum,
                "matches_optimum": result.maximum == optimum,
                "witness_file": witness_path.display().to_string(),
                "states_explored": result.states_explored,
                "symmetry_reduced": result.symmetry_reduced,
                "wall_time_seconds": elapsed.as_secs_f64(),
            });
            let mut json = serde_json::to_string_pretty(&value).map_err(UsageError::new)?;
            json.push('\n');
            print_stdout(&json)?;
        }
        _ => {
            let mut out = String::new();
            outln!(
                out,
                "maximum common fixtures: {} (expected optimum {optimum})",
                result.maximum
            );
            outln!(out, "witness file: {}", witness_path.display());
            outln!(out, "states explored: {}", result.states_explored);
            outln!(
                out,
                "symmetry reduction: {}",
                if result.symmetry_reduced {
                    "division one pinned to one draw (relabelling action verified transitive)"
                } else {
                    "none"
                }
            );
            outln!(out, "wall time: {elapsed:?}");
            print_stdout(&out)?;
        }
    }
    Ok(if result.maximum == optimum {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn fuzz_bounds(n: u32, mode: Mode, count: u64, seed: u64) -> Result<ExitCode, UsageError> {
    let clock = Instant::now();
    let mut out = String::new();
    let mut violations = 0u64;
    for i in 0..count {
        let base = seed.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let d1 = random_draw(Division::One, n, base).map_err(UsageError::new)?;
        let d2 =
            random_draw(Division::Two, n, base ^ 0x5555_5555_5555_5555).map_err(UsageError::new)?;
        let report = common_fixtures(&d1, &d2, mode).map_err(UsageError::new)?;
        for v in check_bound_lemmas(&report) {
            violations += 1;
            outln!(out, "pair {i} (seed {base}): {v}");
        }
    }
    outln!(
        out,
        "checked {count} random draw pairs at n = {n} ({mode}): {violations} violations in {:?}",
        clock.elapsed()
    );
    print_stdout(&out)?;
    Ok(if violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
