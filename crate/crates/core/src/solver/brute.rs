//! Exhaustive reference solver for tiny instances.

use super::gain;
use crate::error::SolveError;
use crate::formulation::ObjectiveKind;
use crate::instance::{normalize_and_clip, SchedulingInstance};
use crate::interval::EPS;
use crate::schedule::{Assignment, Schedule};

pub const BRUTE_FORCE_MAX_MISSIONS: usize = 10;
pub const BRUTE_FORCE_MAX_WINDOWS: usize = 20;

/// (begin, end, duration) of a chosen window.
type Job = (f64, f64, f64);

/// Try every order of `jobs`, placing each as early as possible. Returns
/// the starts of the first order that fits, aligned with `jobs`.
fn any_order(jobs: &[Job], setup: f64) -> Option<Vec<f64>> {
    fn extend(jobs: &[Job], setup: f64, used: &mut Vec<bool>, starts: &mut Vec<f64>, free_at: Option<f64>, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        for k in 0..jobs.len() {
            if used[k] {
                continue;
            }
            let (begin, end, d) = jobs[k];
            let s = free_at.map_or(begin, |f| begin.max(f + setup));
            if s + d > end + EPS {
                continue;
            }
            used[k] = true;
            starts[k] = s;
            if extend(jobs, setup, used, starts, Some(s + d), left - 1) {
                return true;
            }
            used[k] = false;
        }
        false
    }
    let mut used = vec![false; jobs.len()];
    let mut starts = vec![0.0; jobs.len()];
    extend(jobs, setup, &mut used, &mut starts, None, jobs.len()).then_some(starts)
}

struct Search<'a> {
    inst: &'a SchedulingInstance,
    objective: ObjectiveKind,
    per_resource: Vec<Vec<(usize, Job)>>,
    usage: Vec<f64>,
    value: u64,
    best_value: u64,
    best: Vec<Vec<(usize, Job)>>,
}

impl Search<'_> {
    fn run(&mut self, i: usize) {
        if i == self.inst.mission_count() {
            if self.value > self.best_value {
                self.best_value = self.value;
                self.best = self.per_resource.clone();
            }
            return;
        }
        let d = self.inst.missions()[i].duration;
        for w in self.inst.windows_of(i) {
            let j = self.inst.window_resource(w);
            let res = &self.inst.resources()[j];
            if self.usage[j] + d > res.max_usage + EPS {
                continue;
            }
            let win = &self.inst.windows()[w];
            self.per_resource[j].push((w, (win.begin, win.end, d)));
            let jobs: Vec<Job> = self.per_resource[j].iter().map(|x| x.1).collect();
            if any_order(&jobs, res.setup_bound()).is_some() {
                self.usage[j] += d;
                self.value += gain(self.inst, i, self.objective);
                self.run(i + 1);
                self.value -= gain(self.inst, i, self.objective);
                self.usage[j] -= d;
            }
            self.per_resource[j].pop();
        }
        self.run(i + 1);
    }
}

/// Best schedule over every mission-to-window mapping. Only for instances
/// with at most 10 missions and 20 windows.
pub fn brute_force(instance: &SchedulingInstance, objective: ObjectiveKind) -> Result<Schedule, SolveError> {
    let (missions, windows) = (instance.mission_count(), instance.windows().len());
    if missions > BRUTE_FORCE_MAX_MISSIONS || windows > BRUTE_FORCE_MAX_WINDOWS {
        return Err(SolveError::TooLarge { missions, windows });
    }
    let inst = normalize_and_clip(instance);
    let l = inst.resources().len();
    let mut search = Search {
        inst: &inst,
        objective,
        per_resource: vec![Vec::new(); l],
        usage: vec![0.0; l],
        value: 0,
        best_value: 0,
        best: vec![Vec::new(); l],
    };
    search.run(0);
    let mut assignments = Vec::new();
    for (j, list) in search.best.iter().enumerate() {
        let jobs: Vec<Job> = list.iter().map(|x| x.1).collect();
        let starts = any_order(&jobs, inst.resources()[j].setup_bound()).expect("stored selections fit");
        for (&(w, (_, _, d)), start) in list.iter().zip(starts) {
            let win = &inst.windows()[w];
            assignments.push(Assignment {
                mission: win.mission.clone(),
                resource: win.resource.clone(),
                window_begin: win.begin,
                window_end: win.end,
                start,
                duration: d,
            });
        }
    }
    Ok(Schedule::from_assignments(&inst, assignments))
}
