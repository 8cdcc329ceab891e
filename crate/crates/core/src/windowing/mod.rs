//! Conflict analysis on visible windows: feasible time intervals, conflict
//! profiles, pre-assignment, subinterval capacities and statistics.

mod capacity;
mod fti;
mod preassign;
mod stats;

use serde_json::json;

pub use capacity::{effective_subintervals, max_assignable, EffectiveSubinterval};
pub use fti::{
    build_feasible_intervals, conflict_profile, degree_profile, feasible_intervals, ConflictSegment,
    FeasibleTimeInterval,
};
pub use stats::{contention_degree, resource_stats, InstanceStats, ResourceStats};

use crate::instance::{normalize_and_clip, Mission, Resource, SchedulingInstance, VisibleTimeWindow};
use crate::interval::{Span, EPS};
use crate::schedule::Assignment;

pub const PREPROCESS_SCHEMA: &str = "satsched/preprocess/v1";

/// Output of preprocessing: missions fixed up front, the instance left for
/// the model, and the resource-feasibility subintervals of that instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessResult {
    /// Fixed observations, in the time frame of `reduced_instance`.
    pub preassigned: Vec<Assignment>,
    /// Normalized instance without the preassigned missions. Resource
    /// usage limits are reduced by the time already spent.
    pub reduced_instance: SchedulingInstance,
    /// Candidate windows index into `reduced_instance`.
    pub subintervals: Vec<EffectiveSubinterval>,
    pub n_prime: usize,
}

impl PreprocessResult {
    /// No preprocessing at all: the normalized instance, nothing fixed, no
    /// subintervals.
    pub fn identity(instance: &SchedulingInstance) -> Self {
        Self {
            preassigned: Vec::new(),
            reduced_instance: normalize_and_clip(instance),
            subintervals: Vec::new(),
            n_prime: 0,
        }
    }

    pub fn preassigned_weight(&self, base: &SchedulingInstance) -> u64 {
        self.preassigned
            .iter()
            .filter_map(|a| base.mission_idx(&a.mission))
            .map(|i| u64::from(base.missions()[i].weight))
            .sum()
    }

    pub fn to_value(&self) -> serde_json::Value {
        json!({
            "schema": PREPROCESS_SCHEMA,
            "n_prime": self.n_prime,
            "preassigned": self.preassigned,
            "subintervals": self.subintervals,
            "reduced_instance": self.reduced_instance.to_value(),
        })
    }
}

/// Mutable bookkeeping while missions are fixed one after another.
pub(crate) struct Reduction<'a> {
    base: &'a SchedulingInstance,
    removed: Vec<bool>,
    fixed_on: Vec<Vec<Span>>,
    fixed_usage: Vec<f64>,
    preassigned: Vec<Assignment>,
}

impl<'a> Reduction<'a> {
    fn new(base: &'a SchedulingInstance) -> Self {
        let l = base.resources().len();
        Self {
            base,
            removed: vec![false; base.mission_count()],
            fixed_on: vec![Vec::new(); l],
            fixed_usage: vec![0.0; l],
            preassigned: Vec::new(),
        }
    }

    /// True when every active mission of resource `j` fits into what is
    /// left of its usage limit.
    fn usage_is_slack(&self, j: usize) -> bool {
        let active: f64 = self
            .base
            .missions_of_resource(j)
            .into_iter()
            .filter(|&i| !self.removed[i])
            .map(|i| self.base.missions()[i].duration)
            .sum();
        self.fixed_usage[j] + active <= self.base.resources()[j].max_usage + EPS
    }

    /// Fix the mission of base window `w` at `start`.
    fn fix(&mut self, w: usize, start: f64) {
        let base = self.base;
        let i = base.window_mission(w);
        let j = base.window_resource(w);
        let win = &base.windows()[w];
        let duration = base.missions()[i].duration;
        self.removed[i] = true;
        self.fixed_on[j].push(Span::new(start, start + duration));
        self.fixed_usage[j] += duration;
        self.preassigned.push(Assignment {
            mission: win.mission.clone(),
            resource: win.resource.clone(),
            window_begin: win.begin,
            window_end: win.end,
            start,
            duration,
        });
    }

    /// Fix an assignment expressed on the reduced instance.
    fn fix_assignment(&mut self, a: &Assignment) {
        let base = self.base;
        let i = base.mission_idx(&a.mission).expect("mission of reduced instance");
        let w = base
            .windows_of(i)
            .into_iter()
            .find(|&w| {
                let win = &base.windows()[w];
                win.resource == a.resource
                    && (win.begin - a.window_begin).abs() <= EPS
                    && (win.end - a.window_end).abs() <= EPS
            })
            .expect("window of reduced instance");
        self.fix(w, a.start);
    }

    fn reduced(&self) -> SchedulingInstance {
        let base = self.base;
        let missions: Vec<Mission> = base
            .missions()
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.removed[*i])
            .map(|(_, m)| m.clone())
            .collect();
        let resources: Vec<Resource> = base
            .resources()
            .iter()
            .zip(&self.fixed_usage)
            .map(|(r, used)| Resource {
                max_usage: (r.max_usage - used).max(0.0),
                ..r.clone()
            })
            .collect();
        let windows: Vec<VisibleTimeWindow> = base
            .windows()
            .iter()
            .enumerate()
            .filter(|(w, _)| !self.removed[base.window_mission(*w)])
            .map(|(_, w)| w.clone())
            .collect();
        SchedulingInstance::with_offset(*base.period(), missions, resources, windows, base.time_offset())
            .expect("reduction keeps instance invariants")
    }

    fn finish(self, subintervals: Vec<EffectiveSubinterval>) -> PreprocessResult {
        let reduced_instance = self.reduced();
        let mut preassigned = self.preassigned;
        preassigned.sort_by_key(|a| self.base.mission_idx(&a.mission));
        PreprocessResult {
            n_prime: preassigned.len(),
            preassigned,
            reduced_instance,
            subintervals,
        }
    }
}

/// Fix every mission owning a free window, to a fixpoint. The instance is
/// normalized first; no subintervals are produced.
pub fn preassign_free_windows(instance: &SchedulingInstance) -> PreprocessResult {
    let base = normalize_and_clip(instance);
    let mut red = Reduction::new(&base);
    red.assign_free_windows();
    red.finish(Vec::new())
}

/// Full preprocessing: free-window pre-assignment and direct assignment of
/// FTIs that fit, repeated until neither fixes anything, followed by the
/// effective subintervals of what is left.
pub fn preprocess(instance: &SchedulingInstance) -> PreprocessResult {
    let base = normalize_and_clip(instance);
    let mut red = Reduction::new(&base);
    loop {
        red.assign_free_windows();
        let current = red.reduced();
        let mut subintervals = Vec::new();
        let mut fixed: Vec<Assignment> = Vec::new();
        'resources: for j in 0..current.resources().len() {
            let res = &current.resources()[j];
            let (delta, setup) = (res.stabilize, res.setup_bound());
            for fti in feasible_intervals(&current, j) {
                let profile = conflict_profile(&current, &fti);
                let (assigned, subs) = effective_subintervals(&current, &fti, &profile, delta, setup);
                if !assigned.is_empty() {
                    fixed = assigned;
                    break 'resources;
                }
                subintervals.extend(subs);
            }
        }
        if fixed.is_empty() {
            return red.finish(subintervals);
        }
        for a in &fixed {
            red.fix_assignment(a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::SchedulingPeriod;

    fn build(windows: &[(&str, f64, f64)], duration: f64, stabilize: f64) -> SchedulingInstance {
        let mut missions: Vec<Mission> = Vec::new();
        for &(m, _, _) in windows {
            if !missions.iter().any(|x| x.id == m) {
                missions.push(Mission {
                    id: m.into(),
                    earliest: 0.0,
                    latest: 1000.0,
                    duration,
                    weight: 1,
                });
            }
        }
        SchedulingInstance::new(
            SchedulingPeriod { begin: 0.0, end: 1000.0 },
            missions,
            vec![Resource {
                id: "R".into(),
                max_usage: 1000.0,
                max_swing: 0.0,
                swing_rate: 1.0,
                rotation_rate: 1e12,
                stabilize,
            }],
            windows
                .iter()
                .map(|&(m, b, e)| VisibleTimeWindow {
                    mission: m.into(),
                    resource: "R".into(),
                    begin: b,
                    end: e,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn fitting_fti_is_assigned_directly() {
        let inst = build(&[("A", 0.0, 10.0), ("B", 0.0, 10.0)], 4.0, 2.0);
        let prep = preprocess(&inst);
        assert_eq!(prep.n_prime, 2);
        assert!(prep.subintervals.is_empty());
        assert!(prep.reduced_instance.windows().is_empty());
        assert!(prep.reduced_instance.missions().is_empty());
    }

    #[test]
    fn crowded_fti_keeps_subinterval() {
        let inst = build(&[("A", 0.0, 6.0), ("B", 0.0, 6.0), ("C", 0.0, 6.0)], 4.0, 2.0);
        let prep = preprocess(&inst);
        assert_eq!(prep.n_prime, 0);
        assert_eq!(prep.subintervals.len(), 1);
        assert_eq!(prep.subintervals[0].capacity, 1);
    }

    #[test]
    fn usage_is_charged_to_reduced_resource() {
        let inst = build(&[("A", 0.0, 100.0), ("B", 200.0, 210.0), ("C", 200.0, 210.0)], 10.0, 0.0);
        let prep = preprocess(&inst);
        assert_eq!(prep.preassigned[0].mission, "A");
        let r = &prep.reduced_instance.resources()[0];
        assert_eq!(r.max_usage, 1000.0 - 10.0 * prep.n_prime as f64);
    }

    #[test]
    fn identity_fixes_nothing() {
        let inst = build(&[("A", 0.0, 100.0)], 10.0, 0.0);
        let prep = PreprocessResult::identity(&inst);
        assert_eq!(prep.n_prime, 0);
        assert_eq!(prep.reduced_instance.windows().len(), 1);
    }
}
