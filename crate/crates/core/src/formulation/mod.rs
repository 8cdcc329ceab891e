//! MILP formulations of the scheduling problem over a preprocessed
//! instance: the Big-M baseline and the improved per-window model.

mod baseline;
mod embed;
mod improved;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use baseline::build_baseline;
pub use embed::{extract_schedule, schedule_values};
pub use improved::build_improved;

use crate::error::FormulationError;
use crate::instance::{normalize_and_clip, SchedulingInstance, VisibleTimeWindow};
use crate::interval::EPS;
use crate::model::{model_stats, LinearModel, ModelStats, Sense, VarKind};
use crate::windowing::PreprocessResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    Count,
    Weight,
}

impl ObjectiveKind {
    pub fn coefficient(self, weight: u32) -> f64 {
        match self {
            ObjectiveKind::Count => 1.0,
            ObjectiveKind::Weight => f64::from(weight),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveKind::Count => "count",
            ObjectiveKind::Weight => "weight",
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectiveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "count" => Ok(ObjectiveKind::Count),
            "weight" => Ok(ObjectiveKind::Weight),
            other => Err(format!("unknown objective `{other}` (expected count or weight)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    Baseline,
    Improved,
}

impl Formulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::Baseline => "baseline",
            Formulation::Improved => "improved",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Formulation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(Formulation::Baseline),
            "improved" => Ok(Formulation::Improved),
            other => Err(format!("unknown formulation `{other}` (expected baseline or improved)")),
        }
    }
}

/// Build either formulation.
pub fn build(
    formulation: Formulation,
    instance: &SchedulingInstance,
    prep: &PreprocessResult,
    objective: ObjectiveKind,
) -> Result<LinearModel, FormulationError> {
    match formulation {
        Formulation::Baseline => build_baseline(instance, prep, objective),
        Formulation::Improved => build_improved(instance, prep, objective),
    }
}

/// Relation between two windows of different missions on one resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    /// Disjoint, first window earlier, gap shorter than the setup bound.
    OrderedFirstSecond,
    /// Disjoint, second window earlier, gap shorter than the setup bound.
    OrderedSecondFirst,
    /// Positive-measure intersection.
    Overlapping,
    /// Disjoint with a gap of at least the setup bound: no constraint needed.
    Independent,
}

/// Classify the window pair `(a, b)` under setup bound `setup`. Overlap
/// takes precedence over ordering. For disjoint windows the order is forced
/// and the durations cancel out of the vacuity test `gap >= setup`.
pub fn classify_pair(
    a: &VisibleTimeWindow,
    b: &VisibleTimeWindow,
    _da: f64,
    _db: f64,
    setup: f64,
) -> Result<PairClass, FormulationError> {
    if a.mission == b.mission {
        return Err(FormulationError::SameMission(a.mission.clone()));
    }
    let (sa, sb) = (a.span(), b.span());
    if sa.overlaps(&sb) {
        return Ok(PairClass::Overlapping);
    }
    if sa.end <= sb.begin + EPS {
        if sb.begin - sa.end >= setup - EPS {
            Ok(PairClass::Independent)
        } else {
            Ok(PairClass::OrderedFirstSecond)
        }
    } else if sa.begin - sb.end >= setup - EPS {
        Ok(PairClass::Independent)
    } else {
        Ok(PairClass::OrderedSecondFirst)
    }
}

/// U = period length + longest duration + largest setup bound.
pub fn big_m(instance: &SchedulingInstance) -> f64 {
    let max_d = instance.missions().iter().map(|m| m.duration).fold(0.0, f64::max);
    let max_setup = instance
        .resources()
        .iter()
        .map(|r| r.setup_bound())
        .fold(0.0, f64::max);
    instance.period().len() + max_d + max_setup
}

pub fn report_model(model: &LinearModel) -> ModelStats {
    model_stats(model)
}

/// Check that `prep` was derived from `instance`.
pub(crate) fn check_prep(instance: &SchedulingInstance, prep: &PreprocessResult) -> Result<(), FormulationError> {
    let base = normalize_and_clip(instance);
    let red = &prep.reduced_instance;
    let mismatch = |what: String| Err(FormulationError::PrepMismatch(what));
    if red.period() != base.period() {
        return mismatch("scheduling periods differ".into());
    }
    if prep.n_prime != prep.preassigned.len() {
        return mismatch("n_prime differs from the number of preassigned missions".into());
    }
    if red.mission_count() + prep.n_prime != base.mission_count() {
        return mismatch(format!(
            "{} remaining + {} preassigned missions, instance has {}",
            red.mission_count(),
            prep.n_prime,
            base.mission_count()
        ));
    }
    for m in red.missions() {
        if base.mission_idx(&m.id).is_none() {
            return mismatch(format!("unknown mission `{}`", m.id));
        }
    }
    for a in &prep.preassigned {
        if base.mission_idx(&a.mission).is_none() || red.mission_idx(&a.mission).is_some() {
            return mismatch(format!("preassigned mission `{}` is unknown or still open", a.mission));
        }
    }
    for r in red.resources() {
        if base.resource_idx(&r.id).is_none() {
            return mismatch(format!("unknown resource `{}`", r.id));
        }
    }
    let windows = red.windows().len();
    for s in &prep.subintervals {
        if red.resource_idx(&s.resource).is_none() || s.candidate_windows.iter().any(|&w| w >= windows) {
            return mismatch(format!("subinterval [{}, {}] references unknown windows", s.begin, s.end));
        }
    }
    Ok(())
}

/// 1-based index of every window within its (mission, resource) pair.
pub(crate) fn window_ranks(instance: &SchedulingInstance) -> Vec<usize> {
    let l = instance.resources().len();
    let mut counter = vec![0usize; instance.mission_count() * l.max(1)];
    (0..instance.windows().len())
        .map(|w| {
            let slot = instance.window_mission(w) * l + instance.window_resource(w);
            counter[slot] += 1;
            counter[slot]
        })
        .collect()
}

pub(crate) fn x_name(instance: &SchedulingInstance, w: usize, rank: usize) -> String {
    let win = &instance.windows()[w];
    format!("x_{}_{}_{}", win.mission, win.resource, rank)
}

pub(crate) fn add_unique(
    model: &mut LinearModel,
    name: String,
    kind: VarKind,
    lower: f64,
    upper: f64,
) -> Result<usize, FormulationError> {
    if model.var(&name).is_some() {
        return Err(FormulationError::NameClash(name));
    }
    Ok(model.add_var(name, kind, lower, upper))
}

/// Rows shared by both formulations: one selection per mission, resource
/// usage, and the two inequalities of every effective subinterval. `x`
/// maps window index to its binary variable.
pub(crate) fn shared_rows(model: &mut LinearModel, prep: &PreprocessResult, x: &[usize]) {
    let inst = &prep.reduced_instance;
    for (i, m) in inst.missions().iter().enumerate() {
        let ws = inst.windows_of(i);
        if ws.is_empty() {
            continue;
        }
        let terms = ws.iter().map(|&w| (x[w], 1.0)).collect();
        model.add_constraint(format!("mission_{}", m.id), terms, Sense::Le, 1.0);
    }
    for (j, r) in inst.resources().iter().enumerate() {
        let ws = inst.windows_on(j);
        if ws.is_empty() {
            continue;
        }
        let terms = ws
            .iter()
            .map(|&w| (x[w], inst.missions()[inst.window_mission(w)].duration))
            .collect();
        model.add_constraint(format!("usage_{}", r.id), terms, Sense::Le, r.max_usage);
    }
    let mut per_resource: Vec<usize> = vec![0; inst.resources().len()];
    for s in &prep.subintervals {
        let j = inst.resource_idx(&s.resource).expect("checked by check_prep");
        per_resource[j] += 1;
        let l = per_resource[j];
        let delta = inst.resources()[j].stabilize;
        let count = s.candidate_windows.iter().map(|&w| (x[w], 1.0)).collect();
        model.add_constraint(format!("cap_{}_{}", s.resource, l), count, Sense::Le, s.capacity as f64);
        let fill = s
            .candidate_windows
            .iter()
            .map(|&w| (x[w], inst.missions()[inst.window_mission(w)].duration + delta))
            .collect();
        model.add_constraint(format!("fill_{}_{}", s.resource, l), fill, Sense::Le, s.len() + delta);
    }
}

/// Objective over the selection binaries.
pub(crate) fn objective_terms(inst: &SchedulingInstance, x: &[usize], objective: ObjectiveKind) -> Vec<(usize, f64)> {
    (0..inst.windows().len())
        .map(|w| {
            let m = &inst.missions()[inst.window_mission(w)];
            (x[w], objective.coefficient(m.weight))
        })
        .collect()
}
