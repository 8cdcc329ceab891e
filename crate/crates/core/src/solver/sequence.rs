//! Single-resource sequencing: can a set of observations, each bound to its
//! own window, be ordered so consecutive ones are separated by the setup time?

use std::collections::HashMap;

use crate::interval::{Span, EPS};

/// One observation to place: its window and its duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeqItem {
    pub window: Span,
    pub duration: f64,
}

impl SeqItem {
    pub fn new(window: Span, duration: f64) -> Self {
        Self { window, duration }
    }

    fn latest_start(&self) -> f64 {
        self.window.end - self.duration
    }
}

/// Start times (aligned with `items`) satisfying window containment and
/// `setup` spacing, or `None` when no order works.
///
/// Observations are placed at their earliest start given the order. Items
/// whose windows are separated by at least `setup` from everything before
/// them form independent groups and are searched separately.
pub fn sequence_feasible(items: &[SeqItem], setup: f64) -> Option<Vec<f64>> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        items[a]
            .window
            .begin
            .total_cmp(&items[b].window.begin)
            .then(a.cmp(&b))
    });
    let mut starts = vec![0.0; items.len()];
    let mut group: Vec<usize> = Vec::new();
    let mut group_end = f64::NEG_INFINITY;
    for &i in &order {
        if items[i].latest_start() < items[i].window.begin - EPS {
            return None;
        }
        if !group.is_empty() && items[i].window.begin >= group_end + setup - EPS {
            place_group(items, &group, setup, &mut starts)?;
            group.clear();
            group_end = f64::NEG_INFINITY;
        }
        group.push(i);
        group_end = group_end.max(items[i].window.end);
    }
    if !group.is_empty() {
        place_group(items, &group, setup, &mut starts)?;
    }
    Some(starts)
}

fn place_group(items: &[SeqItem], group: &[usize], setup: f64, starts: &mut [f64]) -> Option<()> {
    if group.len() == 1 {
        starts[group[0]] = items[group[0]].window.begin;
        return Some(());
    }
    // earliest-deadline candidates are tried first
    let mut local: Vec<SeqItem> = group.iter().map(|&i| items[i]).collect();
    let mut perm: Vec<usize> = (0..local.len()).collect();
    perm.sort_by(|&a, &b| local[a].latest_start().total_cmp(&local[b].latest_start()));
    local = perm.iter().map(|&p| local[p]).collect();

    let mut search = GroupSearch {
        items: &local,
        setup,
        failed: HashMap::new(),
        placed: vec![false; local.len()],
        start: vec![0.0; local.len()],
    };
    if !search.dfs(0, f64::NEG_INFINITY, 0) {
        return None;
    }
    for (slot, &p) in perm.iter().enumerate() {
        starts[group[p]] = search.start[slot];
    }
    Some(())
}

struct GroupSearch<'a> {
    items: &'a [SeqItem],
    setup: f64,
    /// lowest ready time known to fail for a placed-set mask
    failed: HashMap<u128, f64>,
    placed: Vec<bool>,
    start: Vec<f64>,
}

impl GroupSearch<'_> {
    fn dfs(&mut self, mask: u128, ready: f64, depth: usize) -> bool {
        let n = self.items.len();
        if depth == n {
            return true;
        }
        let memo = n <= 128;
        if memo {
            if let Some(&r) = self.failed.get(&mask) {
                if ready >= r - EPS {
                    return false;
                }
            }
        }
        for j in 0..n {
            if !self.placed[j] {
                let it = &self.items[j];
                if ready.max(it.window.begin) > it.latest_start() + EPS {
                    self.fail(memo, mask, ready);
                    return false;
                }
            }
        }
        for j in 0..n {
            if self.placed[j] {
                continue;
            }
            let it = self.items[j];
            let s = ready.max(it.window.begin);
            self.placed[j] = true;
            self.start[j] = s;
            let bit = if memo { 1u128 << j } else { 0 };
            if self.dfs(mask | bit, s + it.duration + self.setup, depth + 1) {
                return true;
            }
            self.placed[j] = false;
        }
        self.fail(memo, mask, ready);
        false
    }

    fn fail(&mut self, memo: bool, mask: u128, ready: f64) {
        if memo {
            let e = self.failed.entry(mask).or_insert(f64::INFINITY);
            *e = e.min(ready);
        }
    }
}
