//! Formulation without Big-M: one start variable per window, ordering
//! binaries only for overlapping window pairs.

use std::collections::BTreeMap;

use super::{
    add_unique, check_prep, classify_pair, objective_terms, shared_rows, window_ranks, x_name, ObjectiveKind,
    PairClass,
};
use crate::error::FormulationError;
use crate::instance::SchedulingInstance;
use crate::interval::EPS;
use crate::model::{LinearModel, ModelMeta, Sense, VarKind};
use crate::windowing::PreprocessResult;

/// Same-resource window pairs of different missions that are not
/// independent, as `(lower index, higher index)`, sorted.
fn interacting_pairs(inst: &SchedulingInstance, j: usize, setup: f64) -> Vec<(usize, usize)> {
    let mut ws = inst.windows_on(j);
    ws.sort_by(|&a, &b| inst.windows()[a].begin.total_cmp(&inst.windows()[b].begin).then(a.cmp(&b)));
    let mut pairs = Vec::new();
    for (k, &a) in ws.iter().enumerate() {
        let reach = inst.windows()[a].end + setup - EPS;
        for &b in &ws[k + 1..] {
            if inst.windows()[b].begin >= reach {
                break;
            }
            if inst.window_mission(a) != inst.window_mission(b) {
                pairs.push((a.min(b), a.max(b)));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Improved model over `prep.reduced_instance`, which must start at time 0.
///
/// Variables: `x_{m}_{r}_{k}` and `t_{m}_{r}_{k}` per window, and
/// `f_{r}_{m}_{k}_{m'}_{k'}` (window k of m observed after window k' of m')
/// per overlapping window pair.
pub fn build_improved(
    instance: &SchedulingInstance,
    prep: &PreprocessResult,
    objective: ObjectiveKind,
) -> Result<LinearModel, FormulationError> {
    check_prep(instance, prep)?;
    let inst = &prep.reduced_instance;
    if !inst.is_normalized() {
        return Err(FormulationError::NotNormalized);
    }
    let mut model = LinearModel::new(ModelMeta {
        formulation: "improved".into(),
        objective: objective.as_str().into(),
        big_m: None,
    });
    let horizon = inst.period().end;
    let ranks = window_ranks(inst);
    let labels: Vec<String> = (0..inst.windows().len())
        .map(|w| x_name(inst, w, ranks[w])[2..].to_string())
        .collect();
    let mut x = Vec::with_capacity(labels.len());
    for label in &labels {
        x.push(add_unique(&mut model, format!("x_{label}"), VarKind::Binary, 0.0, 1.0)?);
    }
    let mut t = Vec::with_capacity(labels.len());
    for (w, label) in labels.iter().enumerate() {
        let d = inst.missions()[inst.window_mission(w)].duration;
        t.push(add_unique(&mut model, format!("t_{label}"), VarKind::Continuous, 0.0, horizon - d)?);
    }
    model.set_objective(objective_terms(inst, &x, objective));
    shared_rows(&mut model, prep, &x);

    let dur = |w: usize| inst.missions()[inst.window_mission(w)].duration;
    for (w, label) in labels.iter().enumerate() {
        let win = &inst.windows()[w];
        model.add_constraint(format!("win_lo_{label}"), vec![(t[w], 1.0), (x[w], -win.begin)], Sense::Ge, 0.0);
        model.add_constraint(
            format!("win_hi_{label}"),
            vec![(t[w], 1.0), (x[w], -(win.end - dur(w)))],
            Sense::Le,
            0.0,
        );
    }

    // f label of "p observed after q" on resource r
    let f_label = |r: &str, p: usize, q: usize| {
        let (wp, wq) = (&inst.windows()[p], &inst.windows()[q]);
        format!("{r}_{}_{}_{}_{}", wp.mission, ranks[p], wq.mission, ranks[q])
    };
    let mut pair_f: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (j, res) in inst.resources().iter().enumerate() {
        let setup = res.setup_bound();
        for (p, q) in interacting_pairs(inst, j, setup) {
            let (wp, wq) = (&inst.windows()[p], &inst.windows()[q]);
            match classify_pair(wp, wq, dur(p), dur(q), setup)? {
                PairClass::Independent => {}
                PairClass::OrderedFirstSecond => ordered_row(&mut model, f_label(&res.id, q, p), (t[p], x[p], wp.end, dur(p)), (t[q], x[q]), setup),
                PairClass::OrderedSecondFirst => ordered_row(&mut model, f_label(&res.id, p, q), (t[q], x[q], wq.end, dur(q)), (t[p], x[p]), setup),
                PairClass::Overlapping => {
                    let pq = f_label(&res.id, p, q);
                    let qp = f_label(&res.id, q, p);
                    let f_pq = add_unique(&mut model, format!("f_{pq}"), VarKind::Binary, 0.0, 1.0)?;
                    let f_qp = add_unique(&mut model, format!("f_{qp}"), VarKind::Binary, 0.0, 1.0)?;
                    // t_p - t_q >= (End_q + setup) f_pq + Beg_p f_qp - (End_q - D_q)
                    model.add_constraint(
                        format!("disj_{pq}"),
                        vec![(t[p], 1.0), (t[q], -1.0), (f_pq, -(wq.end + setup)), (f_qp, -wp.begin)],
                        Sense::Ge,
                        -(wq.end - dur(q)),
                    );
                    model.add_constraint(
                        format!("disj_{qp}"),
                        vec![(t[q], 1.0), (t[p], -1.0), (f_qp, -(wp.end + setup)), (f_pq, -wq.begin)],
                        Sense::Ge,
                        -(wp.end - dur(p)),
                    );
                    let both = [(f_pq, 1.0), (f_qp, 1.0)];
                    model.add_constraint(format!("cons_a_{pq}"), [&both[..], &[(x[p], -1.0)]].concat(), Sense::Le, 0.0);
                    model.add_constraint(format!("cons_b_{pq}"), [&both[..], &[(x[q], -1.0)]].concat(), Sense::Le, 0.0);
                    model.add_constraint(
                        format!("cons_c_{pq}"),
                        [&both[..], &[(x[p], -1.0), (x[q], -1.0)]].concat(),
                        Sense::Ge,
                        -1.0,
                    );
                    let (ip, iq) = (inst.window_mission(p), inst.window_mission(q));
                    pair_f.entry((ip.min(iq), ip.max(iq))).or_default().extend([f_pq, f_qp]);
                }
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

/// Window `first` (start, select, end, duration) always precedes `second`
/// (start, select) when both are used:
/// `t2 - t1 >= (D1 + setup) x1 - (End1 + setup)(1 - x2)`.
fn ordered_row(model: &mut LinearModel, label: String, first: (usize, usize, f64, f64), second: (usize, usize), setup: f64) {
    let (t1, x1, end1, d1) = first;
    let (t2, x2) = second;
    model.add_constraint(
        format!("order_{label}"),
        vec![(t2, 1.0), (t1, -1.0), (x1, -(d1 + setup)), (x2, -(end1 + setup))],
        Sense::Ge,
        -(end1 + setup),
    );
}
