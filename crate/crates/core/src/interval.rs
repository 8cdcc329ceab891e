//! Closed time spans and the shared comparison tolerance.

use serde::{Deserialize, Serialize};

/// Absolute tolerance for interval comparisons, in seconds.
pub const EPS: f64 = 1e-9;

/// Feasibility tolerance used by the validator and the model evaluator.
pub const FEAS_TOL: f64 = 1e-6;

/// A closed interval `[begin, end]` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub begin: f64,
    pub end: f64,
}

impl Span {
    pub fn new(begin: f64, end: f64) -> Self {
        Self { begin, end }
    }

    pub fn len(&self) -> f64 {
        self.end - self.begin
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= EPS
    }

    /// Positive-measure overlap. Spans touching at a single point do not overlap.
    pub fn overlaps(&self, other: &Span) -> bool {
        self.intersection_len(other) > EPS
    }

    pub fn intersection_len(&self, other: &Span) -> f64 {
        (self.end.min(other.end) - self.begin.max(other.begin)).max(0.0)
    }

    pub fn intersect(&self, other: &Span) -> Option<Span> {
        let s = Span::new(self.begin.max(other.begin), self.end.min(other.end));
        (s.end >= s.begin).then_some(s)
    }

    pub fn contains(&self, other: &Span) -> bool {
        other.begin >= self.begin - EPS && other.end <= self.end + EPS
    }

    pub fn contains_point(&self, t: f64) -> bool {
        t >= self.begin - EPS && t <= self.end + EPS
    }
}

/// Total measure of the union of `spans`.
pub fn union_measure(spans: &[Span]) -> f64 {
    let mut sorted: Vec<Span> = spans.to_vec();
    sorted.sort_by(|a, b| a.begin.total_cmp(&b.begin));
    let mut total = 0.0;
    let mut current: Option<Span> = None;
    for s in sorted {
        match current.as_mut() {
            Some(c) if s.begin <= c.end => c.end = c.end.max(s.end),
            _ => {
                if let Some(c) = current {
                    total += c.len();
                }
                current = Some(s);
            }
        }
    }
    if let Some(c) = current {
        total += c.len();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn touching_spans_do_not_overlap() {
        let a = Span::new(0.0, 10.0);
        let b = Span::new(10.0, 20.0);
        assert!(!a.overlaps(&b));
        assert!(a.overlaps(&Span::new(9.0, 12.0)));
    }

    #[test]
    fn union_of_chained_spans() {
        let spans = [
            Span::new(0.0, 10.0),
            Span::new(8.0, 20.0),
            Span::new(19.0, 25.0),
            Span::new(40.0, 50.0),
        ];
        assert!((union_measure(&spans) - 35.0).abs() < EPS);
    }
}
