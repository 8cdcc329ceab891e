//! Shared helpers for integration tests: random tiny instances and an
//! exhaustive optimizer for the exported linear models.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satsched_core::model::{LinearModel, Sense, VarKind};
use satsched_core::{Mission, Resource, SchedulingInstance, SchedulingPeriod, VisibleTimeWindow};

#[derive(Debug, Clone, Copy)]
pub struct TinyShape {
    pub max_missions: usize,
    pub max_resources: usize,
    pub max_windows_per_mission: usize,
}

/// Crowded random instance: short horizon, small setup bounds, sometimes a
/// shifted period, tight mission deadlines or binding usage limits.
pub fn tiny_instance(seed: u64, shape: TinyShape) -> SchedulingInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let begin = if rng.random_bool(0.3) { 100.0 } else { 0.0 };
    let horizon = f64::from(rng.random_range(40..=110u32));
    let end = begin + horizon;
    let l = rng.random_range(1..=shape.max_resources);
    let n = rng.random_range(1..=shape.max_missions);
    let resources: Vec<Resource> = (0..l)
        .map(|j| Resource {
            id: format!("R{}", j + 1),
            max_usage: if rng.random_bool(0.2) {
                f64::from(rng.random_range(8..=25u32))
            } else {
                horizon
            },
            max_swing: 0.1,
            swing_rate: 0.05,
            rotation_rate: std::f64::consts::PI / 2.0,
            stabilize: f64::from(rng.random_range(4..=20u32)),
        })
        .collect();
    let mut missions = Vec::with_capacity(n);
    let mut windows = Vec::new();
    for i in 0..n {
        let id = format!("M{}", i + 1);
        let duration = f64::from(rng.random_range(3..=10u32));
        let latest = if rng.random_bool(0.15) {
            begin + f64::from(rng.random_range(20..=60u32))
        } else {
            end
        };
        missions.push(Mission {
            id: id.clone(),
            earliest: begin,
            latest,
            duration,
            weight: rng.random_range(1..=10),
        });
        // keep the total within the exhaustive oracle's 20-window guard
        let budget = 20 - windows.len() - (n - i - 1);
        let k = rng.random_range(1..=shape.max_windows_per_mission).min(budget);
        for _ in 0..k {
            let len = duration + f64::from(rng.random_range(0..=40u32));
            let start = begin + f64::from(rng.random_range(0..=(horizon - len).max(0.0) as u32));
            windows.push(VisibleTimeWindow {
                mission: id.clone(),
                resource: resources[rng.random_range(0..l)].id.clone(),
                begin: start,
                end: (start + len).min(end),
            });
        }
    }
    SchedulingInstance::new(SchedulingPeriod { begin, end }, missions, resources, windows).expect("valid random instance")
}

/// Difference-constraint system over the continuous variables of a model
/// with all binaries fixed. Node `z` (the last) stands for zero.
struct DiffSystem {
    nodes: usize,
    /// (from, to, weight) meaning t_to - t_from <= weight.
    edges: Vec<(usize, usize, f64)>,
}

impl DiffSystem {
    /// Potentials satisfying every edge, or `None` on a negative cycle.
    fn solve(&self) -> Option<Vec<f64>> {
        let mut dist = vec![0.0; self.nodes];
        for _ in 0..=self.nodes {
            let mut changed = false;
            for &(u, v, w) in &self.edges {
                if dist[u] + w < dist[v] - 1e-9 {
                    dist[v] = dist[u] + w;
                    changed = true;
                }
            }
            if !changed {
                let z = dist[self.nodes - 1];
                return Some(dist.iter().map(|d| d - z).collect());
            }
        }
        None
    }
}

/// Best objective over every integral assignment of `model`'s binaries,
/// with the continuous part settled exactly by a shortest-path check and
/// the final point confirmed by the model's own evaluator.
///
/// Selection binaries (`x_` prefix) are enumerated first, best objective
/// first; the remaining binaries are enumerated for each selection, pruning
/// on rows whose variables are all binary and already fixed.
pub fn model_optimum(model: &LinearModel) -> f64 {
    let vars = model.variables();
    let binaries: Vec<usize> = (0..vars.len()).filter(|&v| vars[v].kind == VarKind::Binary).collect();
    let xs: Vec<usize> = binaries.iter().copied().filter(|&v| vars[v].name.starts_with("x_")).collect();
    let fs: Vec<usize> = binaries.iter().copied().filter(|&v| !vars[v].name.starts_with("x_")).collect();
    let continuous: Vec<usize> = (0..vars.len()).filter(|&v| vars[v].kind == VarKind::Continuous).collect();
    let cont_pos: HashMap<usize, usize> = continuous.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let obj: HashMap<usize, f64> = model.objective().iter().copied().collect();

    // rows touching only binaries, indexed by their last binary in the enumeration order
    let order: Vec<usize> = xs.iter().chain(&fs).copied().collect();
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut binary_rows: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    let mut mixed_rows = Vec::new();
    for (r, row) in model.constraints().iter().enumerate() {
        if row.terms.iter().all(|(v, _)| pos.contains_key(v)) {
            if let Some(last) = row.terms.iter().map(|(v, _)| pos[v]).max() {
                binary_rows[last].push(r);
            }
        } else {
            mixed_rows.push(r);
        }
    }
    let row_ok = |values: &[f64], r: usize| {
        let row = &model.constraints()[r];
        let act: f64 = row.terms.iter().map(|&(v, c)| c * values[v]).sum();
        match row.sense {
            Sense::Le => act <= row.rhs + 1e-6,
            Sense::Ge => act >= row.rhs - 1e-6,
            Sense::Eq => (act - row.rhs).abs() <= 1e-6,
        }
    };

    // all selections consistent with the binary-only rows on x
    let mut selections: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut values = vec![0.0; vars.len()];
    fn enum_x(
        k: usize,
        xs: &[usize],
        values: &mut Vec<f64>,
        binary_rows: &[Vec<usize>],
        row_ok: &dyn Fn(&[f64], usize) -> bool,
        obj: &HashMap<usize, f64>,
        out: &mut Vec<(f64, Vec<f64>)>,
    ) {
        if k == xs.len() {
            let value = xs.iter().map(|v| obj.get(v).copied().unwrap_or(0.0) * values[*v]).sum();
            out.push((value, values.clone()));
            return;
        }
        for bit in [0.0, 1.0] {
            values[xs[k]] = bit;
            if binary_rows[k].iter().all(|&r| row_ok(values, r)) {
                enum_x(k + 1, xs, values, binary_rows, row_ok, obj, out);
            }
        }
        values[xs[k]] = 0.0;
    }
    enum_x(0, &xs, &mut values, &binary_rows, &row_ok, &obj, &mut selections);
    selections.sort_by(|a, b| b.0.total_cmp(&a.0));

    let solve_continuous = |values: &[f64]| -> Option<Vec<f64>> {
        let z = continuous.len();
        let mut edges = Vec::new();
        for (k, &v) in continuous.iter().enumerate() {
            edges.push((z, k, vars[v].upper));
            edges.push((k, z, -vars[v].lower));
        }
        for &r in &mixed_rows {
            let row = &model.constraints()[r];
            let mut rhs = row.rhs;
            let mut cont = Vec::new();
            for &(v, c) in &row.terms {
                match cont_pos.get(&v) {
                    Some(&k) => cont.push((k, c)),
                    None => rhs -= c * values[v],
                }
            }
            let senses: &[f64] = match row.sense {
                Sense::Le => &[1.0],
                Sense::Ge => &[-1.0],
                Sense::Eq => &[1.0, -1.0],
            };
            for &sign in senses {
                // sign * (sum c t) <= sign * rhs
                let terms: Vec<(usize, f64)> = cont.iter().map(|&(k, c)| (k, sign * c)).collect();
                let bound = sign * rhs;
                match terms.as_slice() {
                    [(k, c)] if (c.abs() - 1.0).abs() < 1e-12 => {
                        if *c > 0.0 {
                            edges.push((z, *k, bound));
                        } else {
                            edges.push((*k, z, bound));
                        }
                    }
                    [(a, ca), (b, cb)] if *ca == 1.0 && *cb == -1.0 => edges.push((*b, *a, bound)),
                    [(a, ca), (b, cb)] if *ca == -1.0 && *cb == 1.0 => edges.push((*a, *b, bound)),
                    other => panic!("row `{}` is not a difference constraint: {other:?}", row.name),
                }
            }
        }
        DiffSystem { nodes: z + 1, edges }.solve()
    };

    let mut best: Option<f64> = None;
    for (value, sel) in selections {
        if best.is_some_and(|b| value <= b + 1e-9) {
            break;
        }
        let mut values = sel;
        let mut found = false;
        let mut stack: Vec<(usize, f64)> = vec![(0, 0.0), (0, 1.0)];
        // depth-first over the remaining binaries
        while let Some((k, bit)) = stack.pop() {
            if k == fs.len() {
                continue;
            }
            let slot = xs.len() + k;
            values[fs[k]] = bit;
            for later in &fs[k + 1..] {
                values[*later] = 0.0;
            }
            if !binary_rows[slot].iter().all(|&r| row_ok(&values, r)) {
                continue;
            }
            if k + 1 == fs.len() {
                if let Some(t) = solve_continuous(&values) {
                    for (kk, &v) in continuous.iter().enumerate() {
                        values[v] = t[kk];
                    }
                    let eval = model.evaluate_dense(&values);
                    assert!(eval.feasible(), "difference solution rejected: {:?}", eval.violations);
                    found = true;
                    break;
                }
            } else {
                stack.push((k + 1, 0.0));
                stack.push((k + 1, 1.0));
            }
        }
        if fs.is_empty() && !found {
            if let Some(t) = solve_continuous(&values) {
                for (kk, &v) in continuous.iter().enumerate() {
                    values[v] = t[kk];
                }
                let eval = model.evaluate_dense(&values);
                assert!(eval.feasible(), "difference solution rejected: {:?}", eval.violations);
                found = true;
            }
        }
        if found {
            best = Some(value);
        }
    }
    best.unwrap_or(0.0)
}
