//! Suite grids and the parallel task runner.
//!
//! Each suite expands to a list of independent tasks (one call into the core
//! engine, typically one size of the parameter grid). Tasks run on a work
//! pool; the flattened records are sorted by stable check id afterwards, so
//! the emitted certificate does not depend on scheduling or worker count.

use crate::cache::FileCache;
use cyclemap_core::groebner::{GbCache, GbConfig};
use cyclemap_core::report::{anchors, Anchor, CheckRecord, CheckReport, Detail, Status};
use cyclemap_core::{charts, elim, fibres, scroll, symfun, vdm};
use rayon::prelude::*;
use std::time::{Duration, Instant};

/// Marker text used by the basis engine when a time budget runs out; task
/// errors carrying it are recorded as skipped rather than failed.
const TIMEOUT_MARKER: &str = "time budget exhausted";

/// Extra per-task budget for the heavy elimination sizes behind `--slow`.
const SLOW_ELIMINATION_BUDGET: Duration = Duration::from_secs(900);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
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

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Sigma => "sigma",
            Suite::G => "g",
            Suite::Orders => "orders",
            Suite::Eta => "eta",
            Suite::Charts => "charts",
            Suite::Z => "z",
            Suite::Elimination => "elimination",
            Suite::Strata => "strata",
            Suite::Scrolls => "scrolls",
            Suite::All => "all",
        }
    }
}

type TaskFn = Box<dyn for<'a> FnOnce(GbConfig<'a>) -> Result<CheckReport, String> + Send>;

pub struct Task {
    /// Stable key; doubles as the record id if the whole task errors out.
    pub key: String,
    pub anchor: Anchor,
    /// Per-task time budget on top of any global deadline.
    pub budget: Option<Duration>,
    pub run: TaskFn,
}

impl Task {
    fn new(
        key: impl Into<String>,
        anchor: Anchor,
        run: impl for<'a> FnOnce(GbConfig<'a>) -> Result<CheckReport, String> + Send + 'static,
    ) -> Task {
        Task {
            key: key.into(),
            anchor,
            budget: None,
            run: Box::new(run),
        }
    }
}

/// Requested parameter overrides, already bounds-checked by the caller.
#[derive(Debug, Clone, Copy, Default)]
pub struct Grid {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub slow: bool,
}

impl Grid {
    fn m_up_to(&self, default: usize) -> std::ops::RangeInclusive<usize> {
        1..=self.m.unwrap_or(default)
    }

    fn n_up_to(&self, default: usize) -> std::ops::RangeInclusive<usize> {
        1..=self.n.unwrap_or(default)
    }
}

/// Expand a suite into its task list at the given bounds.
pub fn build_tasks(suite: Suite, grid: Grid) -> Vec<Task> {
    let mut tasks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Sigma {
        for m in grid.m_up_to(6) {
            tasks.push(Task::new(
                format!("sigma/m={m}"),
                anchors::SIGMA_RELATIONS,
                move |_| symfun::verify_sigma_relations(m).map_err(|e| e.to_string()),
            ));
        }
    }
    if all || suite == Suite::G {
        for m in grid.m_up_to(6) {
            tasks.push(Task::new(
                format!("g/m={m}"),
                anchors::G_DEFINITION,
                move |_| vdm::g_suite(m).map_err(|e| e.to_string()),
            ));
        }
        for m in grid.m_up_to(5) {
            tasks.push(Task::new(
                format!("g/m={m}/loc"),
                anchors::LOCALIZATION,
                move |_| vdm::localization_suite(m).map_err(|e| e.to_string()),
            ));
        }
    }
    if all || suite == Suite::Orders {
        for m in grid.m_up_to(6).filter(|&m| m >= 2) {
            tasks.push(Task::new(
                format!("orders/m={m}"),
                anchors::BOUNDARY_ORDERS,
                move |_| vdm::theta_suite(m).map_err(|e| e.to_string()),
            ));
        }
    }
    if all || suite == Suite::Eta {
        for m in grid.m_up_to(5) {
            tasks.push(Task::new(
                format!("eta/m={m}"),
                anchors::ETA_POLYNOMIAL,
                move |_| vdm::eta_suite(m).map_err(|e| e.to_string()),
            ));
        }
    }
    if all || suite == Suite::Charts {
        for m in grid.m_up_to(4) {
            tasks.push(Task::new(
                format!("charts/m={m}"),
                anchors::CHART_FLATNESS,
                move |cfg| charts::chart_suite(m, cfg).map_err(|e| e.to_string()),
            ));
            tasks.push(Task::new(
                format!("charts/m={m}/frel"),
                anchors::F_RELATIONS,
                move |cfg| charts::f_relation_suite(m, cfg).map_err(|e| e.to_string()),
            ));
        }
    }
    if all || suite == Suite::Z {
        let g_bound = grid.m.unwrap_or(5);
        for m in grid.m_up_to(6) {
            tasks.push(Task::new(
                format!("z/m={m}"),
                anchors::CHAIN_QUADRICS,
                move |cfg| elim::z_suite(m, g_bound, cfg).map_err(|e| e.to_string()),
            ));
        }
    }
    if all || suite == Suite::Elimination {
        let top = grid.m.unwrap_or(if grid.slow { 3 } else { 2 });
        for m in 1..=top {
            let mut task = Task::new(format!("elim/m={m}"), anchors::ELIMINATION, move |cfg| {
                Ok(vec![elim::elimination_check(m, cfg)])
            });
            if m >= 3 {
                task.budget = Some(SLOW_ELIMINATION_BUDGET);
            }
            tasks.push(task);
        }
    }
    if all || suite == Suite::Strata {
        for m in grid.m_up_to(6) {
            tasks.push(Task::new(
                format!("strata/m={m}"),
                anchors::STRATA_FIBRES,
                move |cfg| fibres::strata_suite(m, cfg).map_err(|e| e.to_string()),
            ));
            tasks.push(Task::new(
                format!("fibre/punctual/m={m}"),
                anchors::PUNCTUAL_IDEALS,
                move |cfg| fibres::punctual_suite(m, cfg).map_err(|e| e.to_string()),
            ));
        }
        for n in grid.n_up_to(5) {
            tasks.push(Task::new(
                format!("fibre/interp/n={n}"),
                anchors::INTERPOLATING_SECTION,
                move |cfg| fibres::interpolation_suite(n, cfg).map_err(|e| e.to_string()),
            ));
        }
    }
    if all || suite == Suite::Scrolls {
        let n_max = grid.n.unwrap_or(8) as u32;
        let m_max = grid.m.unwrap_or(12) as u32;
        tasks.push(Task::new("scrolls", anchors::NODE_SCROLL, move |_| {
            scroll::scroll_suite(n_max, m_max).map_err(|e| e.to_string())
        }));
        for m in grid.m_up_to(5) {
            tasks.push(Task::new(
                format!("restriction/m={m}"),
                anchors::RESTRICTION,
                move |_| vdm::restriction_suite(m).map_err(|e| e.to_string()),
            ));
        }
    }
    tasks
}

/// Execute tasks on a pool of `jobs` workers (pool default when `None`) and
/// return the flattened records, each paired with its task's elapsed wall
/// time in milliseconds, sorted by check id.
pub fn run_tasks(
    tasks: Vec<Task>,
    jobs: Option<usize>,
    timeout_secs: Option<u64>,
    cache: Option<&FileCache>,
) -> (Vec<(CheckRecord, u64)>, usize) {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .expect("worker pool construction cannot fail for a fresh pool");
    let threads = pool.current_num_threads();
    let global_deadline = timeout_secs.map(|s| Instant::now() + Duration::from_secs(s));
    let shared_cache: Option<&dyn GbCache> = cache.map(|c| c as &dyn GbCache);
    let mut flat: Vec<(CheckRecord, u64)> = pool.install(|| {
        tasks
            .into_par_iter()
            .map(|task| {
                let start = Instant::now();
                let task_deadline = task.budget.map(|b| start + b);
                let deadline = match (global_deadline, task_deadline) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                let cfg = GbConfig {
                    deadline,
                    cache: shared_cache,
                };
                let outcome = (task.run)(cfg);
                let millis = start.elapsed().as_millis() as u64;
                let records = match outcome {
                    Ok(report) => report,
                    Err(message) if message.contains(TIMEOUT_MARKER) => {
                        vec![CheckRecord::new(task.key, task.anchor, Status::Skipped)
                            .with("reason", Detail::text(TIMEOUT_MARKER))]
                    }
                    Err(message) => {
                        vec![CheckRecord::new(task.key, task.anchor, Status::Failed)
                            .with("error", Detail::text(message))]
                    }
                };
                records
                    .into_iter()
                    .map(|r| (r, millis))
                    .collect::<Vec<_>>()
            })
            .flatten()
            .collect()
    });
    flat.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    (flat, threads)
}

/// Keep only records whose id carries the requested `j=`/`k=` path segment.
pub fn filter_records(
    records: Vec<(CheckRecord, u64)>,
    j: Option<usize>,
    k: Option<usize>,
) -> Vec<(CheckRecord, u64)> {
    records
        .into_iter()
        .filter(|(r, _)| {
            let seg_match = |tag: &str, want: Option<usize>| match want {
                None => true,
                Some(v) => r.id.split('/').any(|seg| seg == format!("{tag}={v}")),
            };
            seg_match("j", j) && seg_match("k", k)
        })
        .collect()
}
