use super::{Placement, ObjectiveKind};
use crate::instance::{normalize_and_clip, SchedulingInstance};
use crate::schedule::Schedule;
use crate::windowing::PreprocessResult;

/// Insertion order used by [`greedy`]: weight per second of observation
/// for the weight objective, fewest windows first for the count objective.
pub(crate) fn greedy_order(inst: &SchedulingInstance, objective: ObjectiveKind) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.mission_count()).collect();
    let ms = inst.missions();
    match objective {
        ObjectiveKind::Weight => order.sort_by(|&a, &b| {
            let ra = f64::from(ms[a].weight) / ms[a].duration;
            let rb = f64::from(ms[b].weight) / ms[b].duration;
            rb.total_cmp(&ra).then(a.cmp(&b))
        }),
        ObjectiveKind::Count => {
            let counts: Vec<usize> = order.iter().map(|&i| inst.windows_of(i).len()).collect();
            order.sort_by(|&a, &b| {
                counts[a]
                    .cmp(&counts[b])
                    .then(ms[a].duration.total_cmp(&ms[b].duration))
                    .then(a.cmp(&b))
            });
        }
    }
    order
}

/// Insert missions one at a time into the first window that keeps every
/// resource sequenceable. Works on the reduced instance and adds the
/// preassigned missions.
pub fn greedy(instance: &SchedulingInstance, prep: &PreprocessResult, objective: ObjectiveKind) -> Schedule {
    let inst = &prep.reduced_instance;
    let mut placement = Placement::new(inst);
    for i in greedy_order(inst, objective) {
        if let Some(w) = inst.windows_of(i).into_iter().find(|&w| placement.can_add(w)) {
            placement.add(w);
        }
    }
    let mut assignments = prep.preassigned.clone();
    assignments.extend(placement.assignments());
    Schedule::from_assignments(&normalize_and_clip(instance), assignments)
}
