//! Batch verification driver: selects a suite, runs its checks on a worker
//! pool, and emits a deterministic certificate.

mod cache;
mod certificate;
mod suites;

use cache::FileCache;
use certificate::{check_from_record, exit_code, to_json, to_text, Certificate, Environment, Params};
use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use std::path::PathBuf;
use suites::{build_tasks, filter_records, run_tasks, Grid, Suite};

/// Bound above which a run must carry the explicit override token: the
/// exact-arithmetic expression swell grows super-exponentially in m.
const GUARD_BOUND: usize = 8;
const OVERRIDE_TOKEN: &str = "accept-blowup";
const CACHE_ENV_VAR: &str = "VERIFY_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Sigma,
    G,
    Orders,
    Eta,
    Charts,
    Z,
    Elimination,
    Strata,
    Scrolls,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Sigma => Suite::Sigma,
            SuiteArg::G => Suite::G,
            SuiteArg::Orders => Suite::Orders,
            SuiteArg::Eta => Suite::Eta,
            SuiteArg::Charts => Suite::Charts,
            SuiteArg::Z => Suite::Z,
            SuiteArg::Elimination => Suite::Elimination,
            SuiteArg::Strata => Suite::Strata,
            SuiteArg::Scrolls => Suite::Scrolls,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "verify",
    version,
    about = "Run a verification suite and emit a machine-readable certificate"
)]
struct Args {
    /// Suite to run.
    #[arg(value_enum)]
    suite: SuiteArg,
    /// Replace every m-type upper bound of the suite's grid.
    #[arg(long)]
    m: Option<usize>,
    /// Replace every n-type upper bound of the suite's grid.
    #[arg(long)]
    n: Option<usize>,
    /// Keep only checks whose id carries this j index.
    #[arg(long)]
    j: Option<usize>,
    /// Keep only checks whose id carries this k index.
    #[arg(long)]
    k: Option<usize>,
    /// Include the slow-gated checks (heavy elimination sizes).
    #[arg(long)]
    slow: bool,
    /// Worker count (pool default when omitted).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the certificate to this path instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Basis cache directory (takes precedence over VERIFY_CACHE_DIR).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Global time budget in seconds; overruns are recorded as skipped.
    #[arg(long)]
    timeout: Option<u64>,
    /// Report real durations, thread count, and cache hits instead of the
    /// deterministic zero placeholders.
    #[arg(long)]
    timings: bool,
    /// Acknowledge a bound above the guard (token: accept-blowup).
    #[arg(long, value_name = "TOKEN")]
    override_limit: Option<String>,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return code;
        }
    };

    if let Some(token) = args.override_limit.as_deref() {
        if token != OVERRIDE_TOKEN {
            eprintln!("error: unrecognized override token {token:?} (expected {OVERRIDE_TOKEN:?})");
            return 3;
        }
    }
    let over_guard = args.m.is_some_and(|m| m > GUARD_BOUND)
        || args.n.is_some_and(|n| n > GUARD_BOUND);
    if over_guard && args.override_limit.is_none() {
        eprintln!(
            "error: bounds above {GUARD_BOUND} need --override-limit {OVERRIDE_TOKEN}; \
             expression swell past that point is super-exponential"
        );
        return 3;
    }

    let cache_dir = args
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from));
    let file_cache = match cache_dir {
        Some(dir) => match FileCache::new(dir) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("error: cannot open cache directory: {e}");
                return 3;
            }
        },
        None => None,
    };

    let suite: Suite = args.suite.into();
    let grid = Grid {
        m: args.m,
        n: args.n,
        slow: args.slow,
    };
    let tasks = build_tasks(suite, grid);
    let (records, threads) = run_tasks(tasks, args.jobs, args.timeout, file_cache.as_ref());
    let records = filter_records(records, args.j, args.k);

    let cert = Certificate {
        version: cyclemap_core::ENGINE_VERSION.to_string(),
        suite: suite.name().to_string(),
        params: Params {
            m: args.m,
            n: args.n,
            j: args.j,
            k: args.k,
            slow: args.slow,
            timeout: args.timeout,
        },
        checks: records
            .iter()
            .map(|(r, ms)| check_from_record(r, if args.timings { *ms } else { 0 }))
            .collect(),
        environment: Environment {
            threads: if args.timings { threads } else { 0 },
            cache_hits: if args.timings {
                file_cache.as_ref().map_or(0, |c| c.hits())
            } else {
                0
            },
        },
    };

    let rendered = match args.format {
        FormatArg::Json => to_json(&cert),
        FormatArg::Text => to_text(&cert),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 3;
            }
        }
        None => print!("{rendered}"),
    }

    exit_code(&records)
}
