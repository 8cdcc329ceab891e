//! Small instance builders for unit tests.

use crate::instance::{Mission, Resource, SchedulingInstance, SchedulingPeriod, VisibleTimeWindow};

/// Resource whose setup bound is `stabilize` up to rounding.
pub(crate) fn resource(id: &str, max_usage: f64, stabilize: f64) -> Resource {
    Resource {
        id: id.into(),
        max_usage,
        max_swing: 0.0,
        swing_rate: 1.0,
        rotation_rate: 1e12,
        stabilize,
    }
}

/// One resource `R` over `[0, horizon]`; missions are `(id, D, weight)`,
/// windows `(mission, begin, end)`.
pub(crate) fn one_resource(
    horizon: f64,
    stabilize: f64,
    missions: &[(&str, f64, u32)],
    windows: &[(&str, f64, f64)],
) -> SchedulingInstance {
    SchedulingInstance::new(
        SchedulingPeriod { begin: 0.0, end: horizon },
        missions
            .iter()
            .map(|&(id, duration, weight)| Mission {
                id: id.into(),
                earliest: 0.0,
                latest: horizon,
                duration,
                weight,
            })
            .collect(),
        vec![resource("R", horizon, stabilize)],
        windows
            .iter()
            .map(|&(m, begin, end)| VisibleTimeWindow {
                mission: m.into(),
                resource: "R".into(),
                begin,
                end,
            })
            .collect(),
    )
    .expect("valid test instance")
}
