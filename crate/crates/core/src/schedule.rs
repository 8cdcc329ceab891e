//! Solver output: which mission is observed by which resource, when.

use serde::{Deserialize, Serialize};

use crate::instance::SchedulingInstance;
use crate::interval::Span;

/// One observation: mission `mission` on `resource` inside the window
/// `[window_begin, window_end]`, starting at `start`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub mission: String,
    pub resource: String,
    pub window_begin: f64,
    pub window_end: f64,
    pub start: f64,
    pub duration: f64,
}

impl Assignment {
    pub fn window(&self) -> Span {
        Span::new(self.window_begin, self.window_end)
    }

    pub fn observation(&self) -> Span {
        Span::new(self.start, self.start + self.duration)
    }

    /// Same assignment with all times moved by `dt`.
    pub fn shifted(&self, dt: f64) -> Assignment {
        Assignment {
            window_begin: self.window_begin + dt,
            window_end: self.window_end + dt,
            start: self.start + dt,
            ..self.clone()
        }
    }
}

/// A set of assignments plus its objective values under both objectives.
///
/// Times are local to an instance whose zero sits at `time_offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub assignments: Vec<Assignment>,
    pub objective_count: u64,
    pub objective_weight: u64,
    #[serde(default)]
    pub time_offset: f64,
}

impl Schedule {
    pub fn empty(time_offset: f64) -> Self {
        Self {
            assignments: Vec::new(),
            objective_count: 0,
            objective_weight: 0,
            time_offset,
        }
    }

    /// Build a schedule, taking mission weights from `instance`. Missions
    /// unknown to the instance count with weight 0.
    pub fn from_assignments(instance: &SchedulingInstance, mut assignments: Vec<Assignment>) -> Self {
        assignments.sort_by(|a, b| {
            let ka = instance.mission_idx(&a.mission).unwrap_or(usize::MAX);
            let kb = instance.mission_idx(&b.mission).unwrap_or(usize::MAX);
            ka.cmp(&kb).then(a.start.total_cmp(&b.start))
        });
        let objective_weight = assignments
            .iter()
            .filter_map(|a| instance.mission_idx(&a.mission))
            .map(|i| u64::from(instance.missions()[i].weight))
            .sum();
        Self {
            objective_count: assignments.len() as u64,
            objective_weight,
            assignments,
            time_offset: instance.time_offset(),
        }
    }

    /// Assignments in absolute time (offset removed).
    pub fn absolute(&self) -> Schedule {
        Schedule {
            assignments: self.assignments.iter().map(|a| a.shifted(self.time_offset)).collect(),
            time_offset: 0.0,
            ..self.clone()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}
