//! Per-resource contention indicators and per-instance averages.

use serde::{Deserialize, Serialize};

use super::capacity::max_assignable;
use super::fti::feasible_intervals;
use crate::instance::SchedulingInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceStats {
    pub resource: String,
    /// Stabilization time of the resource.
    pub delta: f64,
    /// N: number of visible windows.
    pub window_count: usize,
    /// T: summed window length.
    pub total_visible: f64,
    /// F: summed FTI length.
    pub feasible_time: f64,
    /// rn: summed FTI capacities.
    pub capacity: usize,
    /// conf = (T - F) / F, absent when F = 0.
    pub contention: Option<f64>,
}

/// `(T - F) / F`, or `None` when there is no feasible time.
pub fn contention_degree(total_visible: f64, feasible_time: f64) -> Option<f64> {
    (feasible_time > 0.0).then(|| (total_visible - feasible_time) / feasible_time)
}

impl ResourceStats {
    pub fn from_totals(
        resource: impl Into<String>,
        delta: f64,
        window_count: usize,
        total_visible: f64,
        feasible_time: f64,
        capacity: usize,
    ) -> Self {
        Self {
            resource: resource.into(),
            delta,
            window_count,
            total_visible,
            feasible_time,
            capacity,
            contention: contention_degree(total_visible, feasible_time),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceStats {
    pub mission_count: usize,
    pub per_resource: Vec<ResourceStats>,
    /// Average number of windows per mission.
    pub paon: f64,
    /// Average visible time per mission.
    pub paot: f64,
}

impl InstanceStats {
    pub fn from_resources(mission_count: usize, per_resource: Vec<ResourceStats>) -> Self {
        let (paon, paot) = if mission_count == 0 {
            (0.0, 0.0)
        } else {
            let n = mission_count as f64;
            let windows: usize = per_resource.iter().map(|r| r.window_count).sum();
            let visible: f64 = per_resource.iter().map(|r| r.total_visible).sum();
            (windows as f64 / n, visible / n)
        };
        Self {
            mission_count,
            per_resource,
            paon,
            paot,
        }
    }
}

/// Contention statistics of every resource, in declaration order.
pub fn resource_stats(instance: &SchedulingInstance) -> InstanceStats {
    let per_resource = (0..instance.resources().len())
        .map(|j| {
            let res = &instance.resources()[j];
            let windows = instance.windows_on(j);
            let total: f64 = windows.iter().map(|&w| instance.windows()[w].span().len()).sum();
            let ftis = feasible_intervals(instance, j);
            let feasible: f64 = ftis.iter().map(|f| f.len()).sum();
            let capacity = ftis
                .iter()
                .map(|f| {
                    let mut missions: Vec<usize> =
                        f.member_windows.iter().map(|&w| instance.window_mission(w)).collect();
                    missions.sort_unstable();
                    missions.dedup();
                    let durations: Vec<f64> = missions.iter().map(|&i| instance.missions()[i].duration).collect();
                    max_assignable(f.len(), &durations, res.stabilize)
                })
                .sum();
            ResourceStats::from_totals(res.id.clone(), res.stabilize, windows.len(), total, feasible, capacity)
        })
        .collect();
    InstanceStats::from_resources(instance.mission_count(), per_resource)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Mission, Resource, SchedulingPeriod, VisibleTimeWindow};

    #[test]
    fn contention_formula() {
        let c = contention_degree(5401.56, 309.74).unwrap();
        assert!((c - 16.44).abs() < 0.01);
        assert_eq!(contention_degree(116.99, 116.99), Some(0.0));
        assert_eq!(contention_degree(0.0, 0.0), None);
    }

    #[test]
    fn instance_averages() {
        let rows = vec![
            ResourceStats::from_totals("HIS", 30.0, 44, 5401.56, 309.74, 11),
            ResourceStats::from_totals("IRS", 30.0, 45, 4347.99, 370.57, 12),
            ResourceStats::from_totals("SAR2", 30.0, 11, 157.16, 76.81, 3),
        ];
        let s = InstanceStats::from_resources(100, rows);
        assert!((s.paon - 1.00).abs() < 1e-12);
        assert!((s.paot - 99.07).abs() < 0.01);
        assert!((s.per_resource[1].contention.unwrap() - 10.73).abs() < 0.01);
    }

    #[test]
    fn stats_of_small_instance() {
        let inst = SchedulingInstance::new(
            SchedulingPeriod { begin: 0.0, end: 100.0 },
            ["A", "B"]
                .iter()
                .map(|id| Mission {
                    id: id.to_string(),
                    earliest: 0.0,
                    latest: 100.0,
                    duration: 5.0,
                    weight: 1,
                })
                .collect(),
            vec![Resource {
                id: "R".into(),
                max_usage: 100.0,
                max_swing: 0.0,
                swing_rate: 1.0,
                rotation_rate: 1.0,
                stabilize: 5.0,
            }],
            vec![
                VisibleTimeWindow { mission: "A".into(), resource: "R".into(), begin: 0.0, end: 10.0 },
                VisibleTimeWindow { mission: "B".into(), resource: "R".into(), begin: 5.0, end: 15.0 },
                VisibleTimeWindow { mission: "A".into(), resource: "R".into(), begin: 50.0, end: 60.0 },
            ],
        )
        .unwrap();
        let s = resource_stats(&inst);
        let r = &s.per_resource[0];
        assert_eq!(r.window_count, 3);
        assert_eq!(r.total_visible, 30.0);
        assert_eq!(r.feasible_time, 25.0);
        assert!((r.contention.unwrap() - 0.2).abs() < 1e-12);
        // [0,15]: floor(20/10) = 2; [50,60]: 1
        assert_eq!(r.capacity, 3);
        assert_eq!(s.paon, 1.5);
        assert_eq!(s.paot, 15.0);
    }
}
