//! Free-window pre-assignment.
//!
//! A window is free when some placement inside it keeps the resource's
//! setup bound away from every window of every other mission on the same
//! resource (and from observations fixed earlier). Such a placement can be
//! swapped into any schedule without breaking it, so the mission is fixed
//! there and its other windows are dropped.

use super::Reduction;
use crate::interval::{Span, EPS};

/// Earliest start for an observation of length `duration` inside `window`
/// that stays `setup` clear of every span in `blockers`.
pub(crate) fn earliest_clear_start(window: Span, duration: f64, setup: f64, blockers: &[Span]) -> Option<f64> {
    let mut forbidden: Vec<(f64, f64)> = blockers
        .iter()
        .map(|b| (b.begin - duration - setup, b.end + setup))
        .collect();
    forbidden.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut s = window.begin;
    for (lo, hi) in forbidden {
        if lo + EPS >= s {
            break;
        }
        if s < hi - EPS {
            s = hi;
        }
    }
    (s + duration <= window.end + EPS).then_some(s)
}

impl Reduction<'_> {
    /// Fix every mission that owns a free window, repeating until no more
    /// windows become free. Returns whether anything was fixed.
    pub(crate) fn assign_free_windows(&mut self) -> bool {
        let mut any = false;
        loop {
            let mut fixed_now = false;
            for i in 0..self.base.mission_count() {
                if self.removed[i] {
                    continue;
                }
                if let Some((w, start)) = self.free_placement(i) {
                    self.fix(w, start);
                    fixed_now = true;
                }
            }
            if !fixed_now {
                return any;
            }
            any = true;
        }
    }

    fn free_placement(&self, i: usize) -> Option<(usize, f64)> {
        let base = self.base;
        let duration = base.missions()[i].duration;
        for w in base.windows_of(i) {
            let j = base.window_resource(w);
            if !self.usage_is_slack(j) {
                continue;
            }
            let setup = base.resources()[j].setup_bound();
            let mut blockers: Vec<Span> = self.fixed_on[j].clone();
            blockers.extend(
                base.windows_on(j)
                    .into_iter()
                    .filter(|&v| {
                        let m = base.window_mission(v);
                        m != i && !self.removed[m]
                    })
                    .map(|v| base.windows()[v].span()),
            );
            if let Some(start) = earliest_clear_start(base.windows()[w].span(), duration, setup, &blockers) {
                return Some((w, start));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Mission, Resource, SchedulingInstance, SchedulingPeriod, VisibleTimeWindow};
    use crate::windowing::preassign_free_windows;

    fn build(windows: &[(&str, f64, f64, f64)], stabilize: f64) -> SchedulingInstance {
        let mut missions: Vec<Mission> = Vec::new();
        for &(m, _, _, d) in windows {
            if !missions.iter().any(|x| x.id == m) {
                missions.push(Mission {
                    id: m.into(),
                    earliest: 0.0,
                    latest: 1000.0,
                    duration: d,
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
                .map(|&(m, b, e, _)| VisibleTimeWindow {
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
    fn clear_start_skips_blockers() {
        let w = Span::new(0.0, 100.0);
        assert_eq!(earliest_clear_start(w, 10.0, 0.0, &[]), Some(0.0));
        // blocker [0,20] with setup 5 forbids starts in (-15, 25)
        assert_eq!(earliest_clear_start(w, 10.0, 5.0, &[Span::new(0.0, 20.0)]), Some(25.0));
        // touching is allowed: start exactly at blocker end + setup
        assert_eq!(
            earliest_clear_start(w, 10.0, 5.0, &[Span::new(0.0, 20.0), Span::new(40.0, 50.0)]),
            Some(25.0)
        );
        assert_eq!(
            earliest_clear_start(w, 10.0, 5.0, &[Span::new(0.0, 20.0), Span::new(30.0, 95.0)]),
            None
        );
    }

    #[test]
    fn sole_window_is_preassigned() {
        let inst = build(&[("A", 0.0, 100.0, 10.0)], 0.0);
        let prep = preassign_free_windows(&inst);
        assert_eq!(prep.n_prime, 1);
        assert_eq!(prep.preassigned[0].start, 0.0);
        assert!(prep.reduced_instance.windows().is_empty());
        assert!(prep.subintervals.is_empty());
    }

    #[test]
    fn full_mutual_overlap_stays() {
        let inst = build(&[("A", 0.0, 10.0, 5.0), ("B", 0.0, 10.0, 5.0)], 0.0);
        let prep = preassign_free_windows(&inst);
        assert_eq!(prep.n_prime, 0);
        assert_eq!(prep.reduced_instance.windows().len(), 2);
    }

    #[test]
    fn freeing_cascades() {
        // A's window has the free part [0,25]; once A is fixed at 0..10,
        // B's window [25,40] is clear of it and becomes free too
        let inst = build(&[("A", 0.0, 30.0, 10.0), ("B", 25.0, 40.0, 10.0)], 0.0);
        let prep = preassign_free_windows(&inst);
        assert_eq!(prep.n_prime, 2);
        let starts: Vec<(&str, f64)> = prep
            .preassigned
            .iter()
            .map(|a| (a.mission.as_str(), a.start))
            .collect();
        assert_eq!(starts, vec![("A", 0.0), ("B", 25.0)]);
    }

    #[test]
    fn setup_gap_blocks_free_placement() {
        // with a 20 s setup bound, A must end by 5 to stay clear of B: impossible
        let inst = build(&[("A", 0.0, 30.0, 10.0), ("B", 25.0, 40.0, 10.0)], 20.0);
        let prep = preassign_free_windows(&inst);
        assert_eq!(prep.n_prime, 0);
    }

    #[test]
    fn survivors_are_crowded() {
        let inst = build(
            &[
                ("A", 0.0, 12.0, 5.0),
                ("B", 4.0, 14.0, 5.0),
                ("C", 30.0, 90.0, 5.0),
                ("D", 100.0, 110.0, 8.0),
                ("E", 104.0, 112.0, 8.0),
            ],
            1.0,
        );
        let prep = preassign_free_windows(&inst);
        let red = &prep.reduced_instance;
        assert_eq!(prep.n_prime, 1);
        for w in 0..red.windows().len() {
            let s = red.windows()[w].span();
            let crowded = (0..red.windows().len()).any(|v| {
                v != w && red.window_mission(v) != red.window_mission(w) && red.windows()[v].span().overlaps(&s)
            });
            assert!(crowded, "window {w} survived without an overlapping neighbour");
        }
    }
}
