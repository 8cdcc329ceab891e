//! Seeded synthetic instances with R/C/M-like window overlap.
//!
//! There is no orbit model. Every resource sees the ground in periodic
//! passes; windows are cut out of those passes. R scatters windows over
//! passes independently, C draws missions from clusters that share a pass
//! position, and M uses fewer, larger and tighter clusters.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use crate::instance::{Mission, Resource, SchedulingInstance, SchedulingPeriod, VisibleTimeWindow};

/// Stabilization times assigned to resources in turn.
pub const STABILIZE_CYCLE: [f64; 3] = [25.0, 30.0, 40.0];
pub const MIN_DURATION: u32 = 3;
pub const MAX_DURATION: u32 = 10;
pub const MIN_WEIGHT: u32 = 1;
pub const MAX_WEIGHT: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Style {
    R,
    C,
    M,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::R => "R",
            Style::C => "C",
            Style::M => "M",
        })
    }
}

impl FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" | "r" => Ok(Style::R),
            "C" | "c" => Ok(Style::C),
            "M" | "m" => Ok(Style::M),
            other => Err(format!("unknown style `{other}` (expected R, C or M)")),
        }
    }
}

/// Pass layout and window shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowModel {
    pub passes_per_day: f64,
    pub pass_length: f64,
    /// Median window length, seconds.
    pub mean_window: f64,
    /// Log-normal shape parameter of window lengths.
    pub spread: f64,
}

impl WindowModel {
    pub fn for_style(style: Style) -> Self {
        let mean_window = match style {
            Style::R => 90.0,
            Style::C => 110.0,
            Style::M => 120.0,
        };
        Self {
            passes_per_day: 14.0,
            pass_length: 600.0,
            mean_window,
            spread: 0.35,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub style: Style,
    pub mission_count: usize,
    pub resource_count: usize,
    pub horizon: f64,
    pub seed: u64,
    pub window_model: WindowModel,
}

impl GenSpec {
    pub fn new(style: Style, mission_count: usize, resource_count: usize, horizon: f64, seed: u64) -> Self {
        Self {
            style,
            mission_count,
            resource_count,
            horizon,
            seed,
            window_model: WindowModel::for_style(style),
        }
    }

    pub fn check(&self) -> Result<(), String> {
        if self.mission_count == 0 || self.resource_count == 0 {
            return Err("mission and resource counts must be positive".into());
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(format!("horizon must be positive, got {}", self.horizon));
        }
        let wm = &self.window_model;
        if !(wm.passes_per_day > 0.0 && wm.pass_length > 0.0 && wm.mean_window > 0.0 && wm.spread >= 0.0) {
            return Err("window model parameters must be positive".into());
        }
        Ok(())
    }
}

/// One visibility pass of a resource.
#[derive(Debug, Clone, Copy)]
struct Pass {
    resource: usize,
    begin: f64,
    end: f64,
}

fn passes(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Vec<Pass> {
    let wm = &spec.window_model;
    let gap = 86_400.0 / wm.passes_per_day;
    let len = wm.pass_length.min(spec.horizon);
    let mut out = Vec::new();
    for j in 0..spec.resource_count {
        let phase = rng.random_range(0.0..gap.min(spec.horizon - len + 1e-9).max(1e-9));
        let mut k = 0.0;
        loop {
            let begin = floor_ms(phase + k * gap);
            if begin + len > spec.horizon {
                break;
            }
            out.push(Pass {
                resource: j,
                begin,
                end: begin + len,
            });
            k += 1.0;
        }
    }
    if out.is_empty() {
        out.push(Pass {
            resource: 0,
            begin: 0.0,
            end: len,
        });
    }
    out
}

/// Windows per mission by style: R spreads a few, C and M use more.
fn windows_per_mission(style: Style, rng: &mut ChaCha8Rng) -> usize {
    match style {
        Style::R => rng.random_range(1..=2),
        Style::C => rng.random_range(1..=4),
        Style::M => rng.random_range(2..=4),
    }
}

/// Cluster size and jitter (seconds) around the cluster's anchor.
fn cluster_shape(style: Style) -> Option<(usize, f64)> {
    match style {
        Style::R => None,
        Style::C => Some((6, 150.0)),
        Style::M => Some((15, 40.0)),
    }
}

/// Deterministic instance for `spec`. Panics if the spec fails [`GenSpec::check`].
pub fn generate(spec: &GenSpec) -> SchedulingInstance {
    spec.check().expect("invalid generator spec");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let wm = spec.window_model;
    let all_passes = passes(spec, &mut rng);
    let len_dist = LogNormal::new(wm.mean_window.ln(), wm.spread).expect("log-normal parameters");
    let width = spec.mission_count.to_string().len().max(3);

    let resources: Vec<Resource> = (0..spec.resource_count)
        .map(|j| Resource {
            id: format!("R{}", j + 1),
            max_usage: spec.horizon,
            max_swing: std::f64::consts::FRAC_PI_6,
            swing_rate: 0.035,
            rotation_rate: std::f64::consts::PI / 30.0,
            stabilize: STABILIZE_CYCLE[j % STABILIZE_CYCLE.len()],
        })
        .collect();

    let mut missions = Vec::with_capacity(spec.mission_count);
    let mut windows = Vec::new();
    // anchors of the current cluster: (pass, centre)
    let mut anchors: Vec<(usize, f64)> = Vec::new();
    let mut left_in_cluster = 0usize;
    for i in 0..spec.mission_count {
        let id = format!("M{:0width$}", i + 1);
        missions.push(Mission {
            id: id.clone(),
            earliest: 0.0,
            latest: spec.horizon,
            duration: f64::from(rng.random_range(MIN_DURATION..=MAX_DURATION)),
            weight: rng.random_range(MIN_WEIGHT..=MAX_WEIGHT),
        });
        let k = windows_per_mission(spec.style, &mut rng);
        let shape = cluster_shape(spec.style);
        if let Some((size, _)) = shape {
            if left_in_cluster == 0 {
                anchors = (0..4)
                    .map(|_| {
                        let p = rng.random_range(0..all_passes.len());
                        let pass = all_passes[p];
                        (p, rng.random_range(pass.begin..=pass.end))
                    })
                    .collect();
                left_in_cluster = size;
            }
            left_in_cluster -= 1;
        }
        let mut used_passes: Vec<usize> = Vec::with_capacity(k);
        for _ in 0..k {
            let (p, centre) = match shape {
                None => {
                    let p = rng.random_range(0..all_passes.len());
                    let pass = all_passes[p];
                    (p, rng.random_range(pass.begin..=pass.end))
                }
                Some((_, jitter)) => {
                    let &(p, c) = anchors.choose(&mut rng).expect("anchors are drawn first");
                    (p, c + rng.random_range(-jitter..=jitter))
                }
            };
            // one window per pass and mission
            if used_passes.contains(&p) {
                continue;
            }
            used_passes.push(p);
            let pass = all_passes[p];
            let room = pass.end - pass.begin;
            let len = ceil_ms(len_dist.sample(&mut rng)).clamp(f64::from(MAX_DURATION).min(room), room);
            let begin = floor_ms((centre - len / 2.0).clamp(pass.begin, pass.end - len)).max(pass.begin);
            windows.push(VisibleTimeWindow {
                mission: id.clone(),
                resource: resources[pass.resource].id.clone(),
                begin,
                end: (begin + len).min(pass.end),
            });
        }
    }
    SchedulingInstance::new(
        SchedulingPeriod {
            begin: 0.0,
            end: spec.horizon,
        },
        missions,
        resources,
        windows,
    )
    .expect("generated instances are valid")
}

// generated times sit on a millisecond grid
fn floor_ms(t: f64) -> f64 {
    (t * 1000.0).floor() / 1000.0
}

fn ceil_ms(t: f64) -> f64 {
    (t * 1000.0).ceil() / 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let spec = GenSpec::new(Style::R, 10, 2, 86_400.0, 7);
        assert_eq!(generate(&spec).to_json(), generate(&spec).to_json());
        let other = GenSpec { seed: 8, ..spec.clone() };
        assert_ne!(generate(&spec).to_json(), generate(&other).to_json());
    }

    #[test]
    fn parameters_in_range() {
        for style in [Style::R, Style::C, Style::M] {
            let inst = generate(&GenSpec::new(style, 60, 3, 172_800.0, 3));
            for m in inst.missions() {
                assert!(m.duration.fract() == 0.0 && (3.0..=10.0).contains(&m.duration));
                assert!((1..=10).contains(&m.weight));
                assert_eq!((m.earliest, m.latest), (0.0, 172_800.0));
            }
            for w in inst.windows() {
                assert!(w.begin >= 0.0 && w.end <= 172_800.0 && w.end - w.begin >= 10.0 - 1e-9);
            }
            let stab: Vec<f64> = inst.resources().iter().map(|r| r.stabilize).collect();
            assert_eq!(stab, vec![25.0, 30.0, 40.0]);
        }
    }

    #[test]
    fn short_horizon_still_valid() {
        let inst = generate(&GenSpec::new(Style::M, 5, 1, 300.0, 1));
        assert!(inst.windows().iter().all(|w| w.end <= 300.0));
        assert!(!inst.windows().is_empty());
    }
}
