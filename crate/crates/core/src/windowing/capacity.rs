//! Capacity of a time span and effective feasible time subintervals.

use serde::{Deserialize, Serialize};

use super::fti::{ConflictSegment, FeasibleTimeInterval};
use crate::instance::SchedulingInstance;
use crate::interval::{Span, EPS};
use crate::schedule::Assignment;
use crate::solver::sequence::{sequence_feasible, SeqItem};

/// A high-contention piece of an FTI whose contained windows cannot all be
/// served. Each one yields a pair of resource-feasibility inequalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveSubinterval {
    pub resource: String,
    pub begin: f64,
    pub end: f64,
    /// Windows fully inside `[begin, end]`, ascending.
    pub candidate_windows: Vec<usize>,
    /// Most missions that fit, with `delta` between consecutive observations.
    pub capacity: usize,
}

impl EffectiveSubinterval {
    pub fn span(&self) -> Span {
        Span::new(self.begin, self.end)
    }

    pub fn len(&self) -> f64 {
        self.end - self.begin
    }
}

/// Largest number of observations with the given durations that fit into
/// `length` seconds when consecutive observations are `delta` apart.
///
/// Equal durations use the closed form `floor((length + delta) / (d + delta))`;
/// otherwise shortest observations are packed first. Never exceeds the
/// number of candidates.
pub fn max_assignable(length: f64, durations: &[f64], delta: f64) -> usize {
    if durations.is_empty() {
        return 0;
    }
    let first = durations[0];
    if durations.iter().all(|d| (d - first).abs() <= EPS) {
        let k = ((length + delta) / (first + delta) + EPS).floor();
        return (k.max(0.0) as usize).min(durations.len());
    }
    let mut sorted = durations.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut used = 0.0;
    let mut count = 0;
    for d in sorted {
        let need = if count == 0 { d } else { used + delta + d };
        if need > length + EPS {
            break;
        }
        used = need;
        count += 1;
    }
    count
}

/// Distinct missions among `windows` with their durations, in window order.
fn distinct_missions(instance: &SchedulingInstance, windows: &[usize]) -> (Vec<usize>, Vec<f64>) {
    let mut missions: Vec<usize> = Vec::new();
    for &w in windows {
        let m = instance.window_mission(w);
        if !missions.contains(&m) {
            missions.push(m);
        }
    }
    let durations = missions
        .iter()
        .map(|&m| instance.missions()[m].duration)
        .collect();
    (missions, durations)
}

/// Whether the usage limit of resource `j` can never bind: every mission it
/// could serve fits into `max_usage` at once.
pub(crate) fn usage_is_slack(instance: &SchedulingInstance, j: usize) -> bool {
    let total: f64 = instance
        .missions_of_resource(j)
        .iter()
        .map(|&i| instance.missions()[i].duration)
        .sum();
    total <= instance.resources()[j].max_usage + EPS
}

/// Try to serve every window of `group` (one per mission) on resource `j`
/// at fixed starts that keep `setup` away from all windows of missions
/// outside the group. Such a placement can replace the group's missions in
/// any schedule without loss, so it is safe to commit during preprocessing.
fn place_isolated_group(
    instance: &SchedulingInstance,
    j: usize,
    group: &[usize],
    delta: f64,
    setup: f64,
) -> Option<Vec<Assignment>> {
    if group.is_empty() || !usage_is_slack(instance, j) {
        return None;
    }
    let (missions, durations) = distinct_missions(instance, group);
    if missions.len() != group.len() {
        return None;
    }
    let begin = group
        .iter()
        .map(|&w| instance.windows()[w].begin)
        .fold(f64::INFINITY, f64::min);
    let end = group
        .iter()
        .map(|&w| instance.windows()[w].end)
        .fold(f64::NEG_INFINITY, f64::max);
    if missions.len() > max_assignable(end - begin, &durations, delta) {
        return None;
    }
    let items: Vec<SeqItem> = group
        .iter()
        .zip(&durations)
        .map(|(&w, &d)| SeqItem::new(instance.windows()[w].span(), d))
        .collect();
    let starts = sequence_feasible(&items, setup)?;
    let outsiders: Vec<Span> = instance
        .windows_on(j)
        .into_iter()
        .filter(|w| !missions.contains(&instance.window_mission(*w)))
        .map(|w| instance.windows()[w].span())
        .collect();
    for (s, d) in starts.iter().zip(&durations) {
        for b in &outsiders {
            let clear = *s >= b.end + setup - EPS || s + d + setup <= b.begin + EPS;
            if !clear {
                return None;
            }
        }
    }
    Some(
        group
            .iter()
            .zip(starts)
            .map(|(&w, start)| {
                let win = &instance.windows()[w];
                Assignment {
                    mission: win.mission.clone(),
                    resource: win.resource.clone(),
                    window_begin: win.begin,
                    window_end: win.end,
                    start,
                    duration: instance.missions()[instance.window_mission(w)].duration,
                }
            })
            .collect(),
    )
}

/// Windows of `members` fully inside `span`.
fn contained(instance: &SchedulingInstance, members: &[usize], span: Span) -> Vec<usize> {
    let mut out: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&w| span.contains(&instance.windows()[w].span()))
        .collect();
    out.sort_unstable();
    out
}

/// Split one FTI of `instance` into preprocessing assignments and effective
/// subintervals.
///
/// First the FTI, and then what remains after repeatedly dropping its
/// lowest-degree piece, is offered for direct assignment; the first group
/// that fits within its capacity and can be placed clear of all other
/// windows is returned as assignments. Otherwise subintervals are generated
/// by stripping pieces from the front, from the back, and by splitting at
/// the longest piece. Only spans holding more candidate missions than
/// their capacity are kept.
pub fn effective_subintervals(
    instance: &SchedulingInstance,
    fti: &FeasibleTimeInterval,
    profile: &[ConflictSegment],
    delta: f64,
    setup: f64,
) -> (Vec<Assignment>, Vec<EffectiveSubinterval>) {
    if fti.member_windows.is_empty() || profile.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let Some(j) = instance.resource_idx(&fti.resource) else {
        return (Vec::new(), Vec::new());
    };
    let members = &fti.member_windows;

    // direct assignment, largest group first
    let mut removed: Vec<Span> = Vec::new();
    let mut remaining: Vec<ConflictSegment> = profile.to_vec();
    let mut group: Vec<usize> = members.clone();
    loop {
        if let Some(assigned) = place_isolated_group(instance, j, &group, delta, setup) {
            return (assigned, Vec::new());
        }
        let Some(pos) = (0..remaining.len()).min_by(|&a, &b| {
            remaining[a]
                .degree
                .cmp(&remaining[b].degree)
                .then(remaining[a].begin.total_cmp(&remaining[b].begin))
        }) else {
            break;
        };
        removed.push(remaining.remove(pos).span());
        group.retain(|&w| {
            let s = instance.windows()[w].span();
            removed.iter().all(|r| !r.overlaps(&s))
        });
        if group.is_empty() {
            break;
        }
    }

    let mut spans: Vec<Span> = vec![fti.span()];
    let n = profile.len();
    for k in 1..n {
        spans.push(Span::new(profile[k].begin, fti.end));
        spans.push(Span::new(fti.begin, profile[n - 1 - k].end));
    }
    split_at_longest(profile, 0, n, &mut spans);

    let mut out: Vec<EffectiveSubinterval> = Vec::new();
    for span in spans {
        if out
            .iter()
            .any(|e| (e.begin - span.begin).abs() <= EPS && (e.end - span.end).abs() <= EPS)
        {
            continue;
        }
        let candidates = contained(instance, members, span);
        let (missions, durations) = distinct_missions(instance, &candidates);
        let capacity = max_assignable(span.len(), &durations, delta);
        if missions.len() > capacity {
            out.push(EffectiveSubinterval {
                resource: fti.resource.clone(),
                begin: span.begin,
                end: span.end,
                candidate_windows: candidates,
                capacity,
            });
        }
    }
    out.sort_by(|a, b| a.begin.total_cmp(&b.begin).then(a.end.total_cmp(&b.end)));
    (Vec::new(), out)
}

fn split_at_longest(profile: &[ConflictSegment], lo: usize, hi: usize, spans: &mut Vec<Span>) {
    if hi <= lo {
        return;
    }
    spans.push(Span::new(profile[lo].begin, profile[hi - 1].end));
    if hi - lo == 1 {
        return;
    }
    let longest = (lo..hi)
        .max_by(|&a, &b| {
            let la = profile[a].end - profile[a].begin;
            let lb = profile[b].end - profile[b].begin;
            la.total_cmp(&lb).then(b.cmp(&a))
        })
        .expect("non-empty range");
    split_at_longest(profile, lo, longest, spans);
    split_at_longest(profile, longest + 1, hi, spans);
}
