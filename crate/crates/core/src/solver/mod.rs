//! Sequencing, heuristics and exact search over mission-to-window choices.

mod bnb;
mod brute;
mod greedy;
pub mod sequence;

pub use bnb::{solve_exact, ReportRow, SolveLimits, SolveReport, SOLVE_SCHEMA};
pub use brute::{brute_force, BRUTE_FORCE_MAX_MISSIONS, BRUTE_FORCE_MAX_WINDOWS};
pub use greedy::greedy;
pub use sequence::{sequence_feasible, SeqItem};

use crate::formulation::ObjectiveKind;
use crate::instance::SchedulingInstance;
use crate::interval::EPS;
use crate::schedule::Assignment;

/// Integer objective contribution of mission `i`.
pub(crate) fn gain(inst: &SchedulingInstance, i: usize, objective: ObjectiveKind) -> u64 {
    match objective {
        ObjectiveKind::Count => 1,
        ObjectiveKind::Weight => u64::from(inst.missions()[i].weight),
    }
}

/// Windows chosen so far on every resource, with their usage.
#[derive(Debug, Clone)]
pub(crate) struct Placement<'a> {
    inst: &'a SchedulingInstance,
    items: Vec<Vec<(usize, SeqItem)>>,
    usage: Vec<f64>,
}

impl<'a> Placement<'a> {
    pub(crate) fn new(inst: &'a SchedulingInstance) -> Self {
        let l = inst.resources().len();
        Self {
            inst,
            items: vec![Vec::new(); l],
            usage: vec![0.0; l],
        }
    }

    fn item(&self, w: usize) -> SeqItem {
        let d = self.inst.missions()[self.inst.window_mission(w)].duration;
        SeqItem::new(self.inst.windows()[w].span(), d)
    }

    pub(crate) fn usage_allows(&self, w: usize) -> bool {
        let j = self.inst.window_resource(w);
        self.usage[j] + self.item(w).duration <= self.inst.resources()[j].max_usage + EPS
    }

    /// Whether window `w` can join the current selection.
    pub(crate) fn can_add(&self, w: usize) -> bool {
        if !self.usage_allows(w) {
            return false;
        }
        let j = self.inst.window_resource(w);
        let mut items: Vec<SeqItem> = self.items[j].iter().map(|x| x.1).collect();
        items.push(self.item(w));
        sequence_feasible(&items, self.inst.resources()[j].setup_bound()).is_some()
    }

    pub(crate) fn add(&mut self, w: usize) {
        let j = self.inst.window_resource(w);
        let item = self.item(w);
        self.usage[j] += item.duration;
        self.items[j].push((w, item));
    }

    /// Undo the latest [`add`](Self::add) of window `w`.
    pub(crate) fn pop(&mut self, w: usize) {
        let j = self.inst.window_resource(w);
        let (last, item) = self.items[j].pop().expect("pop after add");
        debug_assert_eq!(last, w);
        self.usage[j] -= item.duration;
    }

    /// Concrete assignments at earliest starts.
    pub(crate) fn assignments(&self) -> Vec<Assignment> {
        let mut out = Vec::new();
        for (j, list) in self.items.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            let items: Vec<SeqItem> = list.iter().map(|x| x.1).collect();
            let starts = sequence_feasible(&items, self.inst.resources()[j].setup_bound())
                .expect("selection was checked when built");
            for (&(w, item), start) in list.iter().zip(starts) {
                let win = &self.inst.windows()[w];
                out.push(Assignment {
                    mission: win.mission.clone(),
                    resource: win.resource.clone(),
                    window_begin: win.begin,
                    window_end: win.end,
                    start,
                    duration: item.duration,
                });
            }
        }
        out
    }
}
