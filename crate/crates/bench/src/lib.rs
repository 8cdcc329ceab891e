//! Fixtures shared by the benchmarks in `benches/`.

use satsched_core::{generate, GenSpec, SchedulingInstance, Style};

/// Generated instances of increasing size: `(label, instance)`.
pub fn fixtures(style: Style, sizes: &[usize], resources: usize) -> Vec<(String, SchedulingInstance)> {
    sizes
        .iter()
        .map(|&n| (format!("{style}-{n}"), generate(&GenSpec::new(style, n, resources, 86_400.0, 1))))
        .collect()
}
