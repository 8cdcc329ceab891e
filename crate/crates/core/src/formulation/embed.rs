//! Moving between schedules and model assignments.

use std::collections::HashMap;

use super::{window_ranks, x_name};
use crate::error::FormulationError;
use crate::instance::{normalize_and_clip, SchedulingInstance};
use crate::interval::FEAS_TOL;
use crate::model::LinearModel;
use crate::schedule::{Assignment, Schedule};
use crate::windowing::PreprocessResult;

fn is_improved(model: &LinearModel) -> bool {
    model.meta().formulation == "improved"
}

/// Dense variable values that encode `schedule` in `model`, a model built
/// from `prep`. Assignments of preassigned missions are skipped; every other
/// assignment must use a window of the reduced instance.
pub fn schedule_values(
    model: &LinearModel,
    prep: &PreprocessResult,
    schedule: &Schedule,
) -> Result<Vec<f64>, FormulationError> {
    let inst = &prep.reduced_instance;
    let ranks = window_ranks(inst);
    let improved = is_improved(model);
    let mut values = vec![0.0; model.variables().len()];
    let set = |values: &mut Vec<f64>, name: &str, v: f64| -> Result<(), FormulationError> {
        let idx = model
            .var(name)
            .ok_or_else(|| FormulationError::PrepMismatch(format!("model has no variable `{name}`")))?;
        values[idx] = v;
        Ok(())
    };
    // chosen (window, start) per resource
    let mut chosen: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
    for a in &schedule.assignments {
        let Some(i) = inst.mission_idx(&a.mission) else {
            if prep.preassigned.iter().any(|p| p.mission == a.mission) {
                continue;
            }
            return Err(FormulationError::PrepMismatch(format!("unknown mission `{}`", a.mission)));
        };
        let w = inst
            .windows_of(i)
            .into_iter()
            .find(|&w| {
                let win = &inst.windows()[w];
                win.resource == a.resource
                    && (win.begin - a.window_begin).abs() <= FEAS_TOL
                    && (win.end - a.window_end).abs() <= FEAS_TOL
            })
            .ok_or_else(|| {
                FormulationError::PrepMismatch(format!("assignment of `{}` uses no window of the model", a.mission))
            })?;
        let name = x_name(inst, w, ranks[w]);
        set(&mut values, &name, 1.0)?;
        if improved {
            set(&mut values, &format!("t_{}", &name[2..]), a.start)?;
        } else {
            set(&mut values, &format!("t_{}", a.mission), a.start)?;
        }
        chosen.entry(inst.window_resource(w)).or_default().push((w, a.start));
    }
    for (j, list) in chosen {
        let r = &inst.resources()[j].id;
        for (k, &(p, sp)) in list.iter().enumerate() {
            for &(q, sq) in &list[k + 1..] {
                let (later, earlier) = if sp > sq { (p, q) } else { (q, p) };
                let (wl, we) = (&inst.windows()[later], &inst.windows()[earlier]);
                let name = if improved {
                    format!("f_{r}_{}_{}_{}_{}", wl.mission, ranks[later], we.mission, ranks[earlier])
                } else {
                    format!("f_{}_{}_{r}", wl.mission, we.mission)
                };
                // the improved model has ordering binaries only for overlapping windows
                if let Some(idx) = model.var(&name) {
                    values[idx] = 1.0;
                }
            }
        }
    }
    Ok(values)
}

/// Turn an integral model solution into a schedule of the normalized
/// `instance`, preassigned missions included.
pub fn extract_schedule(
    instance: &SchedulingInstance,
    prep: &PreprocessResult,
    model: &LinearModel,
    values: &[f64],
) -> Result<Schedule, FormulationError> {
    let inst = &prep.reduced_instance;
    let ranks = window_ranks(inst);
    let improved = is_improved(model);
    let get = |name: &str| -> Result<f64, FormulationError> {
        model
            .var(name)
            .map(|v| values[v])
            .ok_or_else(|| FormulationError::PrepMismatch(format!("model has no variable `{name}`")))
    };
    let mut assignments: Vec<Assignment> = prep.preassigned.clone();
    for w in 0..inst.windows().len() {
        let name = x_name(inst, w, ranks[w]);
        if get(&name)? < 0.5 {
            continue;
        }
        let win = &inst.windows()[w];
        let start = if improved {
            get(&format!("t_{}", &name[2..]))?
        } else {
            get(&format!("t_{}", win.mission))?
        };
        assignments.push(Assignment {
            mission: win.mission.clone(),
            resource: win.resource.clone(),
            window_begin: win.begin,
            window_end: win.end,
            start,
            duration: inst.missions()[inst.window_mission(w)].duration,
        });
    }
    Ok(Schedule::from_assignments(&normalize_and_clip(instance), assignments))
}
