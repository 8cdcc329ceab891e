//! Independent feasibility check of a schedule against an instance.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::instance::SchedulingInstance;
use crate::interval::FEAS_TOL;
use crate::schedule::Schedule;

pub const VALIDATION_SCHEMA: &str = "satsched/validation/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FindingCode {
    DupMission,
    UsageExceeded,
    WindowViolation,
    SetupViolation,
    PeriodViolation,
    ReferenceError,
}

impl FindingCode {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingCode::DupMission => "DUP_MISSION",
            FindingCode::UsageExceeded => "USAGE_EXCEEDED",
            FindingCode::WindowViolation => "WINDOW_VIOLATION",
            FindingCode::SetupViolation => "SETUP_VIOLATION",
            FindingCode::PeriodViolation => "PERIOD_VIOLATION",
            FindingCode::ReferenceError => "REFERENCE_ERROR",
        }
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub code: FindingCode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mission: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resource: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn codes(&self) -> Vec<FindingCode> {
        let mut codes: Vec<FindingCode> = self.findings.iter().map(|f| f.code).collect();
        codes.sort();
        codes.dedup();
        codes
    }

    pub fn to_value(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["schema"] = VALIDATION_SCHEMA.into();
        v
    }
}

/// Check `schedule` against the unreduced `instance`. Times on both sides
/// are compared in absolute terms using their offsets. Durations are taken
/// from the instance.
pub fn validate(instance: &SchedulingInstance, schedule: &Schedule) -> ValidationReport {
    let mut findings = Vec::new();
    let to_abs = |t: f64| t + schedule.time_offset;
    let inst_abs = |t: f64| t + instance.time_offset();
    let period = instance.period();
    let (p_begin, p_end) = (inst_abs(period.begin), inst_abs(period.end));
    let mut seen: HashMap<usize, usize> = HashMap::new();
    // (absolute start, duration, mission) per resource
    let mut on_resource: Vec<Vec<(f64, f64, usize)>> = vec![Vec::new(); instance.resources().len()];

    for a in &schedule.assignments {
        let mut finding = |code, detail: String| {
            findings.push(Finding {
                code,
                mission: Some(a.mission.clone()),
                resource: Some(a.resource.clone()),
                detail,
            })
        };
        let (Some(i), Some(j)) = (instance.mission_idx(&a.mission), instance.resource_idx(&a.resource)) else {
            finding(FindingCode::ReferenceError, "unknown mission or resource".into());
            continue;
        };
        let m = &instance.missions()[i];
        if (a.duration - m.duration).abs() > FEAS_TOL {
            finding(
                FindingCode::ReferenceError,
                format!("duration {} differs from the mission's {}", a.duration, m.duration),
            );
            continue;
        }
        let (wb, we) = (to_abs(a.window_begin), to_abs(a.window_end));
        let known = instance.windows_of(i).into_iter().any(|w| {
            let win = &instance.windows()[w];
            win.resource == a.resource && inst_abs(win.begin) <= wb + FEAS_TOL && we <= inst_abs(win.end) + FEAS_TOL
        });
        if !known {
            finding(
                FindingCode::ReferenceError,
                format!("no visible window of the mission on this resource covers [{wb}, {we}]"),
            );
            continue;
        }
        let (s, e) = (to_abs(a.start), to_abs(a.start) + m.duration);
        let lo = wb.max(inst_abs(m.earliest));
        let hi = we.min(inst_abs(m.latest));
        if s < lo - FEAS_TOL || e > hi + FEAS_TOL {
            finding(
                FindingCode::WindowViolation,
                format!("observation [{s}, {e}] leaves the usable window [{lo}, {hi}]"),
            );
        }
        if s < p_begin - FEAS_TOL || e > p_end + FEAS_TOL {
            finding(
                FindingCode::PeriodViolation,
                format!("observation [{s}, {e}] leaves the period [{p_begin}, {p_end}]"),
            );
        }
        let count = seen.entry(i).or_insert(0);
        *count += 1;
        if *count == 2 {
            finding(FindingCode::DupMission, "mission observed more than once".into());
        }
        on_resource[j].push((s, m.duration, i));
    }

    for (j, obs) in on_resource.iter_mut().enumerate() {
        let res = &instance.resources()[j];
        let used: f64 = obs.iter().map(|o| o.1).sum();
        if used > res.max_usage + FEAS_TOL {
            findings.push(Finding {
                code: FindingCode::UsageExceeded,
                mission: None,
                resource: Some(res.id.clone()),
                detail: format!("usage {used} exceeds {}", res.max_usage),
            });
        }
        obs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        let setup = res.setup_bound();
        for pair in obs.windows(2) {
            let (prev, next) = (pair[0], pair[1]);
            let ready = prev.0 + prev.1 + setup;
            if next.0 < ready - FEAS_TOL {
                findings.push(Finding {
                    code: FindingCode::SetupViolation,
                    mission: Some(instance.missions()[next.2].id.clone()),
                    resource: Some(res.id.clone()),
                    detail: format!(
                        "starts at {} but `{}` frees the resource at {ready}",
                        next.0,
                        instance.missions()[prev.2].id
                    ),
                });
            }
        }
    }
    ValidationReport {
        ok: findings.is_empty(),
        findings,
    }
}
