//! Problem input: missions, resources, visible time windows and the
//! scheduling period, plus the JSON instance format and setup-time formulas.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::InstanceError;
use crate::interval::{Span, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchedulingPeriod {
    pub begin: f64,
    pub end: f64,
}

impl SchedulingPeriod {
    pub fn span(&self) -> Span {
        Span::new(self.begin, self.end)
    }

    pub fn len(&self) -> f64 {
        self.end - self.begin
    }
}

/// An observation request for one point target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mission {
    pub id: String,
    pub earliest: f64,
    pub latest: f64,
    pub duration: f64,
    pub weight: u32,
}

/// An imaging resource (sensor or camera) on board a satellite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resource {
    pub id: String,
    /// Maximum total observation time over the period.
    pub max_usage: f64,
    /// Maximum swing angle, radians.
    pub max_swing: f64,
    /// Swing speed, radians per second.
    pub swing_rate: f64,
    /// Rotation speed, radians per second.
    pub rotation_rate: f64,
    /// Stabilization time after re-pointing, seconds.
    pub stabilize: f64,
}

impl Resource {
    /// Upper bound on the setup time between any two observations on this
    /// resource: full swing travel plus a half turn plus stabilization.
    pub fn setup_bound(&self) -> f64 {
        setup_time_bound(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VisibleTimeWindow {
    pub mission: String,
    pub resource: String,
    pub begin: f64,
    pub end: f64,
}

impl VisibleTimeWindow {
    pub fn span(&self) -> Span {
        Span::new(self.begin, self.end)
    }
}

/// Pointing angles of a resource at an observation start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSample {
    pub swing: f64,
    pub rotation: f64,
}

impl AngleSample {
    pub fn is_valid_for(&self, resource: &Resource) -> bool {
        self.swing.abs() <= resource.max_swing + EPS && (0.0..2.0 * PI).contains(&self.rotation)
    }
}

/// Time needed to re-point `resource` from one observation to the next.
///
/// Swing and rotation are adjusted one after the other. Rotation travels the
/// shorter way around the circle, so it never takes more than half a turn.
pub fn setup_time_exact(from: AngleSample, to: AngleSample, resource: &Resource) -> f64 {
    let swing = (to.swing - from.swing).abs();
    let mut rotation = (to.rotation - from.rotation).abs() % (2.0 * PI);
    if rotation > PI {
        rotation = 2.0 * PI - rotation;
    }
    swing / resource.swing_rate + rotation / resource.rotation_rate + resource.stabilize
}

pub fn setup_time_bound(resource: &Resource) -> f64 {
    2.0 * resource.max_swing / resource.swing_rate + PI / resource.rotation_rate + resource.stabilize
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResourceDoc {
    id: String,
    #[serde(default)]
    max_usage: Option<f64>,
    max_swing: f64,
    swing_rate: f64,
    rotation_rate: f64,
    stabilize: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(default)]
    #[allow(dead_code)]
    schema: Option<String>,
    #[serde(default)]
    #[allow(dead_code)]
    manifest_digest: Option<String>,
    period: SchedulingPeriod,
    missions: Vec<Mission>,
    resources: Vec<ResourceDoc>,
    windows: Vec<VisibleTimeWindow>,
    #[serde(default)]
    time_offset: f64,
}

#[derive(Serialize)]
struct InstanceOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    schema: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    manifest_digest: Option<&'a str>,
    period: &'a SchedulingPeriod,
    missions: &'a [Mission],
    resources: &'a [Resource],
    windows: &'a [VisibleTimeWindow],
    #[serde(skip_serializing_if = "is_zero")]
    time_offset: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

pub const INSTANCE_SCHEMA: &str = "satsched/instance/v1";

/// A validated scheduling instance. Immutable once built.
///
/// Times are seconds. `time_offset` is the absolute time of the local zero;
/// it is nonzero only after [`normalize_and_clip`] shifted the period.
#[derive(Debug, Clone, PartialEq)]
pub struct SchedulingInstance {
    period: SchedulingPeriod,
    missions: Vec<Mission>,
    resources: Vec<Resource>,
    windows: Vec<VisibleTimeWindow>,
    time_offset: f64,
    mission_index: HashMap<String, usize>,
    resource_index: HashMap<String, usize>,
    window_mission: Vec<usize>,
    window_resource: Vec<usize>,
}

impl SchedulingInstance {
    pub fn new(
        period: SchedulingPeriod,
        missions: Vec<Mission>,
        resources: Vec<Resource>,
        windows: Vec<VisibleTimeWindow>,
    ) -> Result<Self, InstanceError> {
        Self::with_offset(period, missions, resources, windows, 0.0)
    }

    pub fn with_offset(
        period: SchedulingPeriod,
        missions: Vec<Mission>,
        resources: Vec<Resource>,
        windows: Vec<VisibleTimeWindow>,
        time_offset: f64,
    ) -> Result<Self, InstanceError> {
        if !(period.begin >= 0.0 && period.end > period.begin && period.end.is_finite()) {
            return Err(InstanceError::invariant(
                "period",
                format!("need 0 <= begin < end, got [{}, {}]", period.begin, period.end),
            ));
        }
        let mut mission_index = HashMap::with_capacity(missions.len());
        for (i, m) in missions.iter().enumerate() {
            if !(m.earliest <= m.latest) {
                return Err(InstanceError::invariant(
                    format!("mission `{}`", m.id),
                    "earliest must not exceed latest",
                ));
            }
            if !(m.duration > 0.0 && m.duration.is_finite()) {
                return Err(InstanceError::invariant(
                    format!("mission `{}`", m.id),
                    "duration must be positive",
                ));
            }
            if m.weight < 1 {
                return Err(InstanceError::invariant(
                    format!("mission `{}`", m.id),
                    "weight must be at least 1",
                ));
            }
            if mission_index.insert(m.id.clone(), i).is_some() {
                return Err(InstanceError::DuplicateId {
                    kind: "mission",
                    id: m.id.clone(),
                });
            }
        }
        let mut resource_index = HashMap::with_capacity(resources.len());
        for (j, r) in resources.iter().enumerate() {
            let ok = r.swing_rate > 0.0
                && r.rotation_rate > 0.0
                && r.stabilize >= 0.0
                && r.max_usage >= 0.0
                && r.max_swing >= 0.0;
            if !ok {
                return Err(InstanceError::invariant(
                    format!("resource `{}`", r.id),
                    "rates must be positive, max_usage, stabilize and max_swing nonnegative",
                ));
            }
            if resource_index.insert(r.id.clone(), j).is_some() {
                return Err(InstanceError::DuplicateId {
                    kind: "resource",
                    id: r.id.clone(),
                });
            }
        }
        let mut window_mission = Vec::with_capacity(windows.len());
        let mut window_resource = Vec::with_capacity(windows.len());
        for (k, w) in windows.iter().enumerate() {
            let mi = *mission_index
                .get(&w.mission)
                .ok_or_else(|| InstanceError::UnknownReference {
                    window: k,
                    kind: "mission",
                    id: w.mission.clone(),
                })?;
            let rj = *resource_index
                .get(&w.resource)
                .ok_or_else(|| InstanceError::UnknownReference {
                    window: k,
                    kind: "resource",
                    id: w.resource.clone(),
                })?;
            if !(w.begin < w.end) {
                return Err(InstanceError::invariant(
                    format!("window #{k}"),
                    format!("begin {} must be before end {}", w.begin, w.end),
                ));
            }
            window_mission.push(mi);
            window_resource.push(rj);
        }
        Ok(Self {
            period,
            missions,
            resources,
            windows,
            time_offset,
            mission_index,
            resource_index,
            window_mission,
            window_resource,
        })
    }

    pub fn period(&self) -> &SchedulingPeriod {
        &self.period
    }

    pub fn missions(&self) -> &[Mission] {
        &self.missions
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn windows(&self) -> &[VisibleTimeWindow] {
        &self.windows
    }

    pub fn time_offset(&self) -> f64 {
        self.time_offset
    }

    pub fn mission_count(&self) -> usize {
        self.missions.len()
    }

    pub fn mission_idx(&self, id: &str) -> Option<usize> {
        self.mission_index.get(id).copied()
    }

    pub fn resource_idx(&self, id: &str) -> Option<usize> {
        self.resource_index.get(id).copied()
    }

    /// Mission index of window `w`.
    pub fn window_mission(&self, w: usize) -> usize {
        self.window_mission[w]
    }

    /// Resource index of window `w`.
    pub fn window_resource(&self, w: usize) -> usize {
        self.window_resource[w]
    }

    /// Indices of the windows on resource `j`, in input order.
    pub fn windows_on(&self, j: usize) -> Vec<usize> {
        (0..self.windows.len())
            .filter(|&w| self.window_resource[w] == j)
            .collect()
    }

    /// Indices of the windows of mission `i`, in input order.
    pub fn windows_of(&self, i: usize) -> Vec<usize> {
        (0..self.windows.len())
            .filter(|&w| self.window_mission[w] == i)
            .collect()
    }

    /// R(M_i): resources that can serve mission `i`, in resource order.
    pub fn resources_of_mission(&self, i: usize) -> Vec<usize> {
        let mut seen = vec![false; self.resources.len()];
        for (w, &m) in self.window_mission.iter().enumerate() {
            if m == i {
                seen[self.window_resource[w]] = true;
            }
        }
        (0..seen.len()).filter(|&j| seen[j]).collect()
    }

    /// M(R_j): missions the resource can serve, in mission order.
    pub fn missions_of_resource(&self, j: usize) -> Vec<usize> {
        let mut seen = vec![false; self.missions.len()];
        for (w, &r) in self.window_resource.iter().enumerate() {
            if r == j {
                seen[self.window_mission[w]] = true;
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    pub fn is_normalized(&self) -> bool {
        self.period.begin == 0.0
    }

    /// Parse an instance document. See [`to_json`](Self::to_json) for the layout.
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_doc(doc)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self, InstanceError> {
        let doc: InstanceDoc = serde_json::from_value(value).map_err(|e| InstanceError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: InstanceDoc) -> Result<Self, InstanceError> {
        let period_len = doc.period.end - doc.period.begin;
        if let Some(r) = doc.resources.iter().find(|r| matches!(r.max_usage, Some(a) if !(a > 0.0))) {
            return Err(InstanceError::invariant(
                format!("resource `{}`", r.id),
                "max_usage must be positive",
            ));
        }
        let resources = doc
            .resources
            .into_iter()
            .map(|r| Resource {
                id: r.id,
                max_usage: r.max_usage.unwrap_or(period_len),
                max_swing: r.max_swing,
                swing_rate: r.swing_rate,
                rotation_rate: r.rotation_rate,
                stabilize: r.stabilize,
            })
            .collect();
        Self::with_offset(doc.period, doc.missions, resources, doc.windows, doc.time_offset)
    }

    pub fn to_json(&self) -> String {
        self.to_json_with(None)
    }

    /// Pretty JSON with the schema tag and an optional manifest digest.
    pub fn to_json_with(&self, manifest_digest: Option<&str>) -> String {
        let out = InstanceOut {
            schema: Some(INSTANCE_SCHEMA),
            manifest_digest,
            period: &self.period,
            missions: &self.missions,
            resources: &self.resources,
            windows: &self.windows,
            time_offset: self.time_offset,
        };
        serde_json::to_string_pretty(&out).expect("instance serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_json()).expect("instance serializes")
    }
}

/// Clip every window to its mission's `[earliest, latest]` and to the
/// period, drop windows too short to host the observation, and shift all
/// times so the period starts at zero.
pub fn normalize_and_clip(instance: &SchedulingInstance) -> SchedulingInstance {
    let period = instance.period;
    let shift = period.begin;
    let mut windows = Vec::with_capacity(instance.windows.len());
    for (w, win) in instance.windows.iter().enumerate() {
        let m = &instance.missions[instance.window_mission[w]];
        let begin = win.begin.max(m.earliest).max(period.begin);
        let end = win.end.min(m.latest).min(period.end);
        if end - begin + EPS < m.duration {
            continue;
        }
        windows.push(VisibleTimeWindow {
            mission: win.mission.clone(),
            resource: win.resource.clone(),
            begin: begin - shift,
            end: end - shift,
        });
    }
    let missions = instance
        .missions
        .iter()
        .map(|m| Mission {
            earliest: m.earliest - shift,
            latest: m.latest - shift,
            ..m.clone()
        })
        .collect();
    SchedulingInstance::with_offset(
        SchedulingPeriod {
            begin: 0.0,
            end: period.end - shift,
        },
        missions,
        instance.resources.clone(),
        windows,
        instance.time_offset + shift,
    )
    .expect("clipping preserves instance invariants")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(max_swing: f64, swing_rate: f64, rotation_rate: f64, stabilize: f64) -> Resource {
        Resource {
            id: "R".into(),
            max_usage: 1000.0,
            max_swing,
            swing_rate,
            rotation_rate,
            stabilize,
        }
    }

    const ONE: &str = r#"{
        "period": {"begin": 0, "end": 100},
        "missions": [{"id": "A", "earliest": 0, "latest": 100, "duration": 10, "weight": 1}],
        "resources": [{"id": "R", "max_swing": 0.5, "swing_rate": 0.1, "rotation_rate": 0.2, "stabilize": 30}],
        "windows": [{"mission": "A", "resource": "R", "begin": 0, "end": 100}]
    }"#;

    #[test]
    fn smallest_document() {
        let inst = SchedulingInstance::from_json(ONE).unwrap();
        assert_eq!(inst.mission_count(), 1);
        assert_eq!(inst.resources().len(), 1);
        // A_j defaults to the period length
        assert_eq!(inst.resources()[0].max_usage, 100.0);
    }

    #[test]
    fn dangling_mission_reference() {
        let text = ONE.replace(r#""mission": "A""#, r#""mission": "X""#);
        match SchedulingInstance::from_json(&text) {
            Err(InstanceError::UnknownReference { kind, id, .. }) => {
                assert_eq!(kind, "mission");
                assert_eq!(id, "X");
            }
            other => panic!("expected reference error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = SchedulingInstance::from_json("{\n  \"period\": [,\n}").unwrap_err();
        match err {
            InstanceError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = ONE.replace(r#""weight": 1"#, r#""weight": 1, "priority": 3"#);
        assert!(matches!(
            SchedulingInstance::from_json(&text),
            Err(InstanceError::Syntax { .. })
        ));
    }

    #[test]
    fn inverted_window_rejected() {
        let text = ONE.replace(r#""begin": 0, "end": 100}]"#, r#""begin": 50, "end": 50}]"#);
        assert!(matches!(
            SchedulingInstance::from_json(&text),
            Err(InstanceError::Invariant { .. })
        ));
    }

    #[test]
    fn derived_sets_follow_window_list() {
        let text = r#"{
            "period": {"begin": 0, "end": 100},
            "missions": [
                {"id": "M1", "earliest": 0, "latest": 100, "duration": 5, "weight": 1},
                {"id": "M2", "earliest": 0, "latest": 100, "duration": 5, "weight": 2}
            ],
            "resources": [
                {"id": "R1", "max_swing": 0, "swing_rate": 1, "rotation_rate": 1, "stabilize": 0},
                {"id": "R2", "max_swing": 0, "swing_rate": 1, "rotation_rate": 1, "stabilize": 0}
            ],
            "windows": [
                {"mission": "M1", "resource": "R2", "begin": 0, "end": 10},
                {"mission": "M2", "resource": "R1", "begin": 5, "end": 20},
                {"mission": "M1", "resource": "R1", "begin": 30, "end": 40}
            ]
        }"#;
        let inst = SchedulingInstance::from_json(text).unwrap();
        // recompute by scanning the raw window list
        let mut expect: Vec<usize> = inst
            .windows()
            .iter()
            .filter(|w| w.mission == "M1")
            .map(|w| inst.resource_idx(&w.resource).unwrap())
            .collect();
        expect.sort();
        expect.dedup();
        assert_eq!(inst.resources_of_mission(0), expect);
        assert_eq!(inst.missions_of_resource(0), vec![0, 1]);
        assert_eq!(inst.missions_of_resource(1), vec![0]);
    }

    fn single(period: (f64, f64), el: (f64, f64), dur: f64, win: (f64, f64)) -> SchedulingInstance {
        SchedulingInstance::new(
            SchedulingPeriod {
                begin: period.0,
                end: period.1,
            },
            vec![Mission {
                id: "A".into(),
                earliest: el.0,
                latest: el.1,
                duration: dur,
                weight: 1,
            }],
            vec![res(0.5, 0.1, 0.2, 30.0)],
            vec![VisibleTimeWindow {
                mission: "A".into(),
                resource: "R".into(),
                begin: win.0,
                end: win.1,
            }],
        )
        .unwrap()
    }

    #[test]
    fn clip_to_mission_interval() {
        let n = normalize_and_clip(&single((0.0, 300.0), (0.0, 150.0), 10.0, (50.0, 200.0)));
        assert_eq!(n.windows()[0].span(), Span::new(50.0, 150.0));
    }

    #[test]
    fn short_window_dropped() {
        let n = normalize_and_clip(&single((0.0, 300.0), (0.0, 300.0), 20.0, (50.0, 60.0)));
        assert!(n.windows().is_empty());
        assert_eq!(n.mission_count(), 1);
    }

    #[test]
    fn shift_to_zero() {
        let n = normalize_and_clip(&single((100.0, 500.0), (100.0, 500.0), 10.0, (150.0, 300.0)));
        assert_eq!(n.period().begin, 0.0);
        assert_eq!(n.period().end, 400.0);
        assert_eq!(n.windows()[0].span(), Span::new(50.0, 200.0));
        assert_eq!(n.time_offset(), 100.0);
    }

    #[test]
    fn exact_setup_examples() {
        let r = res(1.0, 0.1, 0.5, 30.0);
        let mu = setup_time_exact(
            AngleSample { swing: 0.2, rotation: 1.0 },
            AngleSample { swing: 0.5, rotation: 1.5 },
            &r,
        );
        assert!((mu - 34.0).abs() < 1e-9);
        let same = AngleSample { swing: 0.3, rotation: 2.0 };
        assert!((setup_time_exact(same, same, &r) - 30.0).abs() < 1e-12);
        let r = res(1.0, 0.1, PI / 10.0, 0.0);
        let mu = setup_time_exact(
            AngleSample { swing: -0.5, rotation: 0.0 },
            AngleSample { swing: 0.5, rotation: PI },
            &r,
        );
        assert!((mu - 20.0).abs() < 1e-9);
    }

    #[test]
    fn setup_bound_examples() {
        let d = setup_time_bound(&res(0.5, 0.1, 0.2, 30.0));
        assert!((d - (10.0 + PI / 0.2 + 30.0)).abs() < 1e-12);
        assert!((d - 55.7080).abs() < 1e-4);
        let d = setup_time_bound(&res(0.0, 1.0, PI, 25.0));
        assert!((d - 26.0).abs() < 1e-12);
        // with no swing and very fast rotation the bound collapses to the stabilization time
        for delta in [25.0, 30.0, 40.0] {
            let d = setup_time_bound(&res(0.0, 1.0, 1e12, delta));
            assert!((d - delta).abs() < 1e-9);
        }
    }
}
