//! Depth-first branch-and-bound over mission choices.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::greedy::greedy_order;
use super::{gain, Placement};
use crate::error::SolveError;
use crate::formulation::{check_prep, ObjectiveKind};
use crate::instance::{normalize_and_clip, SchedulingInstance};
use crate::interval::EPS;
use crate::schedule::{Assignment, Schedule};
use crate::windowing::PreprocessResult;

pub const SOLVE_SCHEMA: &str = "satsched/solve/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveLimits {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub threads: usize,
}

impl Default for SolveLimits {
    fn default() -> Self {
        Self {
            time_limit: None,
            node_limit: None,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: String,
    pub objective: ObjectiveKind,
    pub best: Schedule,
    pub best_objective: u64,
    /// Combinatorial bound at the root node.
    pub root_bound: u64,
    /// Best bound proven when the search stopped.
    pub upper_bound: u64,
    pub gap: f64,
    pub proven_optimal: bool,
    pub nodes: u64,
    pub elapsed: f64,
    pub bound_kind: String,
    pub threads: usize,
}

impl SolveReport {
    fn new(
        method: &str,
        objective: ObjectiveKind,
        best: Schedule,
        root_bound: u64,
        upper_bound: u64,
        nodes: u64,
        elapsed: f64,
        threads: usize,
    ) -> Self {
        let best_objective = match objective {
            ObjectiveKind::Count => best.objective_count,
            ObjectiveKind::Weight => best.objective_weight,
        };
        let upper_bound = upper_bound.max(best_objective);
        let gap = if upper_bound > 0 {
            (upper_bound - best_objective) as f64 / upper_bound as f64
        } else {
            0.0
        };
        Self {
            method: method.into(),
            objective,
            best,
            best_objective,
            root_bound: root_bound.max(best_objective),
            upper_bound,
            gap,
            proven_optimal: upper_bound == best_objective,
            nodes,
            elapsed,
            bound_kind: "combinatorial".into(),
            threads,
        }
    }

    /// Report for a schedule known to be optimal, e.g. from the exhaustive oracle.
    pub fn optimal(method: &str, objective: ObjectiveKind, best: Schedule, elapsed: f64) -> Self {
        let value = match objective {
            ObjectiveKind::Count => best.objective_count,
            ObjectiveKind::Weight => best.objective_weight,
        };
        Self::new(method, objective, best, value, value, 0, elapsed, 1)
    }

    pub fn to_value(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["schema"] = SOLVE_SCHEMA.into();
        v
    }
}

/// One line of a results table: bounds, best value, gap and runtime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub objective: ObjectiveKind,
    pub root_bound: u64,
    pub final_bound: u64,
    pub best: u64,
    pub gap: f64,
    pub runtime: f64,
    pub proven_optimal: bool,
}

impl ReportRow {
    pub const HEADER: [&'static str; 8] = [
        "instance",
        "objective",
        "root_bound",
        "final_bound",
        "best",
        "gap",
        "runtime",
        "proven_optimal",
    ];

    pub fn from_report(instance: impl Into<String>, report: &SolveReport) -> Self {
        Self {
            instance: instance.into(),
            objective: report.objective,
            root_bound: report.root_bound,
            final_bound: report.upper_bound,
            best: report.best_objective,
            gap: report.gap,
            runtime: report.elapsed,
            proven_optimal: report.proven_optimal,
        }
    }
}

/// Data fixed for the whole search.
struct Ctx<'a> {
    inst: &'a SchedulingInstance,
    order: Vec<usize>,
    gain: Vec<u64>,
    options: Vec<Vec<usize>>,
    /// Subinterval holding every window of the mission, if any.
    captive: Vec<Option<usize>>,
    /// Captive missions of each subinterval, best gain first.
    members: Vec<Vec<usize>>,
    capacity: Vec<usize>,
    /// Subintervals listing each window as a candidate.
    win_subs: Vec<Vec<usize>>,
}

impl<'a> Ctx<'a> {
    fn new(inst: &'a SchedulingInstance, prep: &PreprocessResult, objective: ObjectiveKind) -> Self {
        let n = inst.mission_count();
        let options: Vec<Vec<usize>> = (0..n).map(|i| inst.windows_of(i)).collect();
        let gain_v: Vec<u64> = (0..n).map(|i| gain(inst, i, objective)).collect();
        let mut win_subs = vec![Vec::new(); inst.windows().len()];
        for (s, sub) in prep.subintervals.iter().enumerate() {
            for &w in &sub.candidate_windows {
                win_subs[w].push(s);
            }
        }
        let mut captive = vec![None; n];
        let mut members = vec![Vec::new(); prep.subintervals.len()];
        for i in 0..n {
            let Some(&first) = options[i].first() else { continue };
            let shared = win_subs[first]
                .iter()
                .copied()
                .filter(|s| options[i].iter().all(|w| win_subs[*w].contains(s)))
                .min_by_key(|&s| (prep.subintervals[s].capacity, s));
            if let Some(s) = shared {
                captive[i] = Some(s);
                members[s].push(i);
            }
        }
        for list in &mut members {
            list.sort_by(|&a, &b| gain_v[b].cmp(&gain_v[a]).then(a.cmp(&b)));
        }
        let capacity = prep.subintervals.iter().map(|s| s.capacity).collect();
        Self {
            order: branching_order(inst, &options),
            inst,
            gain: gain_v,
            options,
            captive,
            members,
            capacity,
            win_subs,
        }
    }
}

/// Missions with windows, most contended first, ties by position.
fn branching_order(inst: &SchedulingInstance, options: &[Vec<usize>]) -> Vec<usize> {
    let n = inst.mission_count();
    let mut rivals = vec![std::collections::BTreeSet::new(); n];
    for j in 0..inst.resources().len() {
        let setup = inst.resources()[j].setup_bound();
        let mut ws = inst.windows_on(j);
        ws.sort_by(|&a, &b| inst.windows()[a].begin.total_cmp(&inst.windows()[b].begin).then(a.cmp(&b)));
        for (k, &a) in ws.iter().enumerate() {
            let reach = inst.windows()[a].end + setup - EPS;
            for &b in &ws[k + 1..] {
                if inst.windows()[b].begin >= reach {
                    break;
                }
                let (ia, ib) = (inst.window_mission(a), inst.window_mission(b));
                if ia != ib {
                    rivals[ia].insert(ib);
                    rivals[ib].insert(ia);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| !options[i].is_empty()).collect();
    order.sort_by(|&a, &b| rivals[b].len().cmp(&rivals[a].len()).then(a.cmp(&b)));
    order
}

/// State shared by all workers.
struct Shared {
    best: AtomicU64,
    incumbent: Mutex<(u64, Vec<Assignment>)>,
    nodes: AtomicU64,
    abort: AtomicBool,
    open_bound: AtomicU64,
    start: Instant,
    limits: SolveLimits,
}

impl Shared {
    fn offer(&self, value: u64, placement: &Placement<'_>) {
        if value <= self.best.load(Ordering::Acquire) {
            return;
        }
        let mut inc = self.incumbent.lock().expect("incumbent lock");
        if value > inc.0 {
            *inc = (value, placement.assignments());
            self.best.store(value, Ordering::Release);
        }
    }

    /// Count a node; false once a limit has been hit.
    fn enter(&self) -> bool {
        if self.abort.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.limits.node_limit.is_some_and(|lim| n > lim);
        let over_time = self.limits.time_limit.is_some_and(|lim| self.start.elapsed() >= lim);
        if over_nodes || over_time {
            self.nodes.fetch_sub(1, Ordering::Relaxed);
            self.abort.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Mutable search state of one worker.
#[derive(Clone)]
struct Node<'a> {
    placement: Placement<'a>,
    decided: Vec<bool>,
    sub_used: Vec<usize>,
    value: u64,
}

impl<'a> Node<'a> {
    fn root(ctx: &Ctx<'a>) -> Self {
        Self {
            placement: Placement::new(ctx.inst),
            decided: vec![false; ctx.inst.mission_count()],
            sub_used: vec![0; ctx.capacity.len()],
            value: 0,
        }
    }

    fn alive(&self, ctx: &Ctx<'_>, i: usize) -> bool {
        !self.decided[i] && ctx.options[i].iter().any(|&w| self.placement.usage_allows(w))
    }

    /// Committed value plus the best any completion could add.
    fn bound(&self, ctx: &Ctx<'_>, depth: usize) -> u64 {
        let mut total = self.value;
        for &i in &ctx.order[depth..] {
            if ctx.captive[i].is_none() && self.alive(ctx, i) {
                total += ctx.gain[i];
            }
        }
        for (s, list) in ctx.members.iter().enumerate() {
            let room = ctx.capacity[s].saturating_sub(self.sub_used[s]);
            total += list
                .iter()
                .filter(|&&i| self.alive(ctx, i))
                .take(room)
                .map(|&i| ctx.gain[i])
                .sum::<u64>();
        }
        total
    }

    fn choose(&mut self, ctx: &Ctx<'_>, i: usize, w: Option<usize>) {
        self.decided[i] = true;
        if let Some(w) = w {
            self.placement.add(w);
            self.value += ctx.gain[i];
            for &s in &ctx.win_subs[w] {
                self.sub_used[s] += 1;
            }
        }
    }

    fn unchoose(&mut self, ctx: &Ctx<'_>, i: usize, w: Option<usize>) {
        self.decided[i] = false;
        if let Some(w) = w {
            self.placement.pop(w);
            self.value -= ctx.gain[i];
            for &s in &ctx.win_subs[w] {
                self.sub_used[s] -= 1;
            }
        }
    }

    /// Viable choices for mission `i`: its feasible windows, then skip.
    fn children(&self, ctx: &Ctx<'_>, i: usize) -> Vec<Option<usize>> {
        let mut out: Vec<Option<usize>> = ctx.options[i]
            .iter()
            .copied()
            .filter(|&w| self.placement.can_add(w))
            .map(Some)
            .collect();
        out.push(None);
        out
    }

    fn search(&mut self, ctx: &Ctx<'_>, shared: &Shared, depth: usize, parent_bound: u64) {
        if !shared.enter() {
            shared.open_bound.fetch_max(parent_bound, Ordering::Relaxed);
            return;
        }
        shared.offer(self.value, &self.placement);
        let bound = self.bound(ctx, depth).min(parent_bound);
        if bound <= shared.best.load(Ordering::Acquire) || depth == ctx.order.len() {
            return;
        }
        let i = ctx.order[depth];
        for w in self.children(ctx, i) {
            self.choose(ctx, i, w);
            self.search(ctx, shared, depth + 1, bound);
            self.unchoose(ctx, i, w);
        }
    }
}

/// Exact search on `prep.reduced_instance`; preassigned missions are added
/// to the result. Limits stop the search early without error.
pub fn solve_exact(
    instance: &SchedulingInstance,
    prep: &PreprocessResult,
    objective: ObjectiveKind,
    limits: SolveLimits,
) -> Result<SolveReport, SolveError> {
    check_prep(instance, prep).map_err(|e| SolveError::InconsistentPrep(e.to_string()))?;
    let start = Instant::now();
    let base = normalize_and_clip(instance);
    let inst = &prep.reduced_instance;
    let fixed_value: u64 = prep
        .preassigned
        .iter()
        .filter_map(|a| base.mission_idx(&a.mission))
        .map(|i| gain(&base, i, objective))
        .sum();
    let ctx = Ctx::new(inst, prep, objective);

    // warm start
    let mut warm = Placement::new(inst);
    let mut warm_value = 0;
    for i in greedy_order(inst, objective) {
        if let Some(w) = ctx.options[i].iter().copied().find(|&w| warm.can_add(w)) {
            warm.add(w);
            warm_value += ctx.gain[i];
        }
    }
    let shared = Shared {
        best: AtomicU64::new(warm_value),
        incumbent: Mutex::new((warm_value, warm.assignments())),
        nodes: AtomicU64::new(0),
        abort: AtomicBool::new(false),
        open_bound: AtomicU64::new(0),
        start,
        limits,
    };

    let mut root = Node::root(&ctx);
    let root_bound = root.bound(&ctx, 0);
    let threads = limits.threads.max(1);
    if threads == 1 || ctx.order.is_empty() {
        root.search(&ctx, &shared, 0, root_bound);
    } else if shared.enter() {
        let bound = root_bound;
        if bound > shared.best.load(Ordering::Acquire) {
            let i = ctx.order[0];
            let children = root.children(&ctx, i);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool");
            pool.install(|| {
                children.par_iter().for_each(|&w| {
                    let mut node = root.clone();
                    node.choose(&ctx, i, w);
                    node.search(&ctx, &shared, 1, bound);
                });
            });
        }
    } else {
        shared.open_bound.fetch_max(root_bound, Ordering::Relaxed);
    }

    let (value, assignments) = shared.incumbent.into_inner().expect("incumbent lock");
    let aborted = shared.abort.load(Ordering::Relaxed);
    let upper = if aborted {
        value.max(shared.open_bound.load(Ordering::Relaxed))
    } else {
        value
    };
    let mut all = prep.preassigned.clone();
    all.extend(assignments);
    let best = Schedule::from_assignments(&base, all);
    Ok(SolveReport::new(
        "branch_and_bound",
        objective,
        best,
        root_bound + fixed_value,
        upper + fixed_value,
        shared.nodes.load(Ordering::Relaxed),
        start.elapsed().as_secs_f64(),
        threads,
    ))
}
