//! Feasible time intervals and their conflict-degree profiles.

use serde::{Deserialize, Serialize};

use crate::instance::SchedulingInstance;
use crate::interval::{Span, EPS};

/// Maximal union of chain-overlapping windows on one resource.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibleTimeInterval {
    pub resource: String,
    pub begin: f64,
    pub end: f64,
    /// Window indices, sorted by window begin.
    pub member_windows: Vec<usize>,
}

impl FeasibleTimeInterval {
    pub fn span(&self) -> Span {
        Span::new(self.begin, self.end)
    }

    pub fn len(&self) -> f64 {
        self.end - self.begin
    }
}

/// A maximal piece of an FTI covered by a constant number of windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConflictSegment {
    pub begin: f64,
    pub end: f64,
    pub degree: usize,
}

impl ConflictSegment {
    pub fn span(&self) -> Span {
        Span::new(self.begin, self.end)
    }
}

/// Merge the windows `(index, span)` of one resource into feasible time
/// intervals, sorted by begin. Windows that only touch stay apart.
pub fn build_feasible_intervals(resource: &str, windows: &[(usize, Span)]) -> Vec<FeasibleTimeInterval> {
    let mut sorted: Vec<(usize, Span)> = windows.to_vec();
    sorted.sort_by(|a, b| a.1.begin.total_cmp(&b.1.begin).then(a.0.cmp(&b.0)));
    let mut out: Vec<FeasibleTimeInterval> = Vec::new();
    for (w, s) in sorted {
        match out.last_mut() {
            Some(cur) if s.begin < cur.end - EPS => {
                cur.end = cur.end.max(s.end);
                cur.member_windows.push(w);
            }
            _ => out.push(FeasibleTimeInterval {
                resource: resource.to_string(),
                begin: s.begin,
                end: s.end,
                member_windows: vec![w],
            }),
        }
    }
    out
}

/// Feasible time intervals of resource `j` in `instance`.
pub fn feasible_intervals(instance: &SchedulingInstance, j: usize) -> Vec<FeasibleTimeInterval> {
    let spans: Vec<(usize, Span)> = instance
        .windows_on(j)
        .into_iter()
        .map(|w| (w, instance.windows()[w].span()))
        .collect();
    build_feasible_intervals(&instance.resources()[j].id, &spans)
}

/// Conflict-degree profile over `spans` (typically the members of one FTI).
///
/// Segments partition the covered range; adjacent segments always differ in
/// degree.
pub fn degree_profile(spans: &[Span]) -> Vec<ConflictSegment> {
    let mut events: Vec<(f64, i64)> = Vec::with_capacity(spans.len() * 2);
    for s in spans {
        events.push((s.begin, 1));
        events.push((s.end, -1));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    // collapse event times closer than EPS
    let mut points: Vec<(f64, i64)> = Vec::new();
    for (t, d) in events {
        match points.last_mut() {
            Some(last) if t - last.0 <= EPS => last.1 += d,
            _ => points.push((t, d)),
        }
    }
    let mut segments: Vec<ConflictSegment> = Vec::new();
    let mut depth: i64 = 0;
    for pair in points.windows(2) {
        depth += pair[0].1;
        if depth <= 0 {
            continue;
        }
        let degree = depth as usize;
        match segments.last_mut() {
            Some(last) if last.degree == degree && (last.end - pair[0].0).abs() <= EPS => {
                last.end = pair[1].0;
            }
            _ => segments.push(ConflictSegment {
                begin: pair[0].0,
                end: pair[1].0,
                degree,
            }),
        }
    }
    segments
}

/// Conflict profile of an FTI of `instance`.
pub fn conflict_profile(instance: &SchedulingInstance, fti: &FeasibleTimeInterval) -> Vec<ConflictSegment> {
    let spans: Vec<Span> = fti
        .member_windows
        .iter()
        .map(|&w| instance.windows()[w].span())
        .collect();
    degree_profile(&spans)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spans(raw: &[(f64, f64)]) -> Vec<(usize, Span)> {
        raw.iter()
            .enumerate()
            .map(|(i, &(b, e))| (i, Span::new(b, e)))
            .collect()
    }

    fn bounds(ftis: &[FeasibleTimeInterval]) -> Vec<(f64, f64)> {
        ftis.iter().map(|f| (f.begin, f.end)).collect()
    }

    #[test]
    fn overlapping_windows_merge() {
        let f = build_feasible_intervals("R", &spans(&[(0.0, 10.0), (5.0, 15.0)]));
        assert_eq!(bounds(&f), vec![(0.0, 15.0)]);
        assert_eq!(f[0].member_windows, vec![0, 1]);
    }

    #[test]
    fn disjoint_windows_stay_apart() {
        let f = build_feasible_intervals("R", &spans(&[(0.0, 10.0), (20.0, 30.0)]));
        assert_eq!(bounds(&f), vec![(0.0, 10.0), (20.0, 30.0)]);
        let touching = build_feasible_intervals("R", &spans(&[(0.0, 10.0), (10.0, 30.0)]));
        assert_eq!(touching.len(), 2);
    }

    #[test]
    fn chained_windows() {
        // union computed by hand with a sweep: [0,10]+[8,20]+[19,25] chain, [40,50] alone
        let f = build_feasible_intervals(
            "R",
            &spans(&[(0.0, 10.0), (8.0, 20.0), (19.0, 25.0), (40.0, 50.0)]),
        );
        assert_eq!(bounds(&f), vec![(0.0, 25.0), (40.0, 50.0)]);
    }

    fn segs(raw: &[(f64, f64)]) -> Vec<(f64, f64, usize)> {
        let s: Vec<Span> = raw.iter().map(|&(b, e)| Span::new(b, e)).collect();
        degree_profile(&s)
            .iter()
            .map(|c| (c.begin, c.end, c.degree))
            .collect()
    }

    #[test]
    fn two_window_profile() {
        assert_eq!(
            segs(&[(0.0, 10.0), (5.0, 15.0)]),
            vec![(0.0, 5.0, 1), (5.0, 10.0, 2), (10.0, 15.0, 1)]
        );
        assert_eq!(segs(&[(3.0, 9.0)]), vec![(3.0, 9.0, 1)]);
    }

    #[test]
    fn nested_profile_matches_point_sampling() {
        let raw = [(0.0, 12.0), (4.0, 8.0), (6.0, 10.0)];
        let got = segs(&raw);
        assert_eq!(
            got,
            vec![
                (0.0, 4.0, 1),
                (4.0, 6.0, 2),
                (6.0, 8.0, 3),
                (8.0, 10.0, 2),
                (10.0, 12.0, 1)
            ]
        );
        // point-sample oracle at segment midpoints
        for (b, e, d) in got {
            let mid = (b + e) / 2.0;
            let count = raw.iter().filter(|&&(wb, we)| wb < mid && mid < we).count();
            assert_eq!(count, d);
        }
    }

    #[test]
    fn equal_degree_neighbours_merge() {
        // [5,10) is covered by {0,1}, [10,15) by {1,2}: same degree, one segment
        assert_eq!(
            segs(&[(0.0, 10.0), (5.0, 15.0), (10.0, 20.0)]),
            vec![(0.0, 5.0, 1), (5.0, 15.0, 2), (15.0, 20.0, 1)]
        );
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn profile_invariants(raw in proptest::collection::vec((0u32..100, 1u32..30), 1..12)) {
            let input: Vec<(usize, Span)> = raw.iter().enumerate()
                .map(|(i, &(b, l))| (i, Span::new(b as f64, (b + l) as f64)))
                .collect();
            let ftis = build_feasible_intervals("R", &input);
            // union measure preserved
            let all: Vec<Span> = input.iter().map(|x| x.1).collect();
            let total: f64 = ftis.iter().map(|f| f.len()).sum();
            prop_assert!((total - crate::interval::union_measure(&all)).abs() < 1e-9);
            // disjoint, sorted, each window in exactly one FTI
            for pair in ftis.windows(2) {
                prop_assert!(pair[0].end <= pair[1].begin + EPS);
            }
            let mut seen: Vec<usize> = ftis.iter().flat_map(|f| f.member_windows.clone()).collect();
            seen.sort();
            prop_assert_eq!(seen, (0..input.len()).collect::<Vec<_>>());
            for f in &ftis {
                let member: Vec<Span> = f.member_windows.iter().map(|&w| input[w].1).collect();
                let profile = degree_profile(&member);
                prop_assert!((profile[0].begin - f.begin).abs() < EPS);
                prop_assert!((profile.last().unwrap().end - f.end).abs() < EPS);
                for p in profile.windows(2) {
                    prop_assert!((p[0].end - p[1].begin).abs() < EPS);
                    prop_assert!(p[0].degree != p[1].degree);
                }
                let weighted: f64 = profile.iter().map(|s| (s.end - s.begin) * s.degree as f64).sum();
                let lengths: f64 = member.iter().map(|s| s.len()).sum();
                prop_assert!((weighted - lengths).abs() < 1e-9);
            }
        }
    }
}
