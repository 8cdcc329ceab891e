//! Big-M formulation: one start time per mission, ordering binaries per
//! mission pair and resource.

use std::collections::BTreeMap;

use super::{add_unique, big_m, check_prep, objective_terms, shared_rows, window_ranks, x_name, ObjectiveKind};
use crate::error::FormulationError;
use crate::instance::SchedulingInstance;
use crate::model::{LinearModel, ModelMeta, Sense, VarKind};
use crate::windowing::PreprocessResult;

/// Baseline model over `prep.reduced_instance`. Preassigned missions are
/// not part of the model.
///
/// Variables: `x_{m}_{r}_{k}` per window, `t_{m}` per mission and
/// `f_{m}_{m'}_{r}` (m observed after m' on r) per mission pair sharing a
/// resource.
pub fn build_baseline(
    instance: &SchedulingInstance,
    prep: &PreprocessResult,
    objective: ObjectiveKind,
) -> Result<LinearModel, FormulationError> {
    check_prep(instance, prep)?;
    let inst = &prep.reduced_instance;
    let u = big_m(instance);
    let mut model = LinearModel::new(ModelMeta {
        formulation: "baseline".into(),
        objective: objective.as_str().into(),
        big_m: Some(u),
    });
    let horizon = inst.period().end;
    let ranks = window_ranks(inst);
    let mut x = Vec::with_capacity(inst.windows().len());
    for w in 0..inst.windows().len() {
        x.push(add_unique(&mut model, x_name(inst, w, ranks[w]), VarKind::Binary, 0.0, 1.0)?);
    }
    let mut t = Vec::with_capacity(inst.mission_count());
    for m in inst.missions() {
        let upper = (horizon - m.duration).max(0.0);
        t.push(add_unique(&mut model, format!("t_{}", m.id), VarKind::Continuous, 0.0, upper)?);
    }
    model.set_objective(objective_terms(inst, &x, objective));
    shared_rows(&mut model, prep, &x);

    for w in 0..inst.windows().len() {
        let i = inst.window_mission(w);
        let win = &inst.windows()[w];
        let d = inst.missions()[i].duration;
        let label = &x_name(inst, w, ranks[w])[2..];
        model.add_constraint(
            format!("win_lo_{label}"),
            vec![(t[i], 1.0), (x[w], -win.begin)],
            Sense::Ge,
            0.0,
        );
        // t - (End - D) x - U (1 - x) <= 0
        model.add_constraint(
            format!("win_hi_{label}"),
            vec![(t[i], 1.0), (x[w], u - win.end + d)],
            Sense::Le,
            u,
        );
    }

    let mut pair_f: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (j, res) in inst.resources().iter().enumerate() {
        let setup = res.setup_bound();
        let missions = inst.missions_of_resource(j);
        let on_j: Vec<Vec<usize>> = missions
            .iter()
            .map(|&i| inst.windows_of(i).into_iter().filter(|&w| inst.window_resource(w) == j).collect())
            .collect();
        for a in 0..missions.len() {
            for b in a + 1..missions.len() {
                let (ia, ib) = (missions[a], missions[b]);
                let (ma, mb) = (&inst.missions()[ia], &inst.missions()[ib]);
                let f_ab = add_unique(&mut model, format!("f_{}_{}_{}", ma.id, mb.id, res.id), VarKind::Binary, 0.0, 1.0)?;
                let f_ba = add_unique(&mut model, format!("f_{}_{}_{}", mb.id, ma.id, res.id), VarKind::Binary, 0.0, 1.0)?;
                // t_a - t_b >= (D_b + setup) f_ab - (U - D_b)(1 - f_ab)
                model.add_constraint(
                    format!("setup_{}_{}_{}", ma.id, mb.id, res.id),
                    vec![(t[ia], 1.0), (t[ib], -1.0), (f_ab, -(u + setup))],
                    Sense::Ge,
                    -(u - mb.duration),
                );
                model.add_constraint(
                    format!("setup_{}_{}_{}", mb.id, ma.id, res.id),
                    vec![(t[ib], 1.0), (t[ia], -1.0), (f_ba, -(u + setup))],
                    Sense::Ge,
                    -(u - ma.duration),
                );
                let both = [(f_ab, 1.0), (f_ba, 1.0)];
                let xa: Vec<(usize, f64)> = on_j[a].iter().map(|&w| (x[w], -1.0)).collect();
                let xb: Vec<(usize, f64)> = on_j[b].iter().map(|&w| (x[w], -1.0)).collect();
                let tag = format!("{}_{}_{}", ma.id, mb.id, res.id);
                model.add_constraint(format!("cons_a_{tag}"), [&both[..], &xa].concat(), Sense::Le, 0.0);
                model.add_constraint(format!("cons_b_{tag}"), [&both[..], &xb].concat(), Sense::Le, 0.0);
                model.add_constraint(format!("cons_c_{tag}"), [&both[..], &xa, &xb].concat(), Sense::Ge, -1.0);
                pair_f.entry((ia.min(ib), ia.max(ib))).or_default().extend([f_ab, f_ba]);
            }
        }
    }
    for ((ia, ib), fs) in pair_f {
        let (ma, mb) = (&inst.missions()[ia].id, &inst.missions()[ib].id);
        model.add_constraint(
            format!("pair_{ma}_{mb}"),
            fs.into_iter().map(|f| (f, 1.0)).collect(),
            Sense::Le,
            1.0,
        );
    }
    Ok(model)
}
