//! Solver-agnostic linear model: variables, rows, objective, plus an
//! evaluator and LP/MPS text formats.

mod lp;
mod mps;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use lp::{parse_lp, write_lp};
pub use mps::{read_mps, write_mps, MpsOutput};

use crate::error::ModelError;
use crate::interval::FEAS_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// A row `Σ coef · var (sense) rhs`. Terms hold variable indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// How far the row is from holding; zero or negative when it holds.
    pub fn excess(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => lhs - self.rhs,
            Sense::Ge => self.rhs - lhs,
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub formulation: String,
    pub objective: String,
    /// The Big-M constant, when the model uses one.
    pub big_m: Option<f64>,
}

/// A maximization model. Variable names are unique.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearModel {
    variables: Vec<Variable>,
    constraints: Vec<LinearConstraint>,
    objective: Vec<(usize, f64)>,
    meta: ModelMeta,
    index: HashMap<String, usize>,
}

impl LinearModel {
    pub fn new(meta: ModelMeta) -> Self {
        Self {
            meta,
            ..Self::default()
        }
    }

    /// Declare a variable and return its index.
    ///
    /// # Panics
    /// On a duplicate name, or bounds with `lower > upper`.
    pub fn add_var(&mut self, name: impl Into<String>, kind: VarKind, lower: f64, upper: f64) -> usize {
        let name = name.into();
        assert!(lower <= upper, "variable `{name}` has lower bound above upper bound");
        let idx = self.variables.len();
        let prev = self.index.insert(name.clone(), idx);
        assert!(prev.is_none(), "duplicate variable `{name}`");
        self.variables.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        idx
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> usize {
        self.add_var(name, VarKind::Binary, 0.0, 1.0)
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> usize {
        self.add_var(name, VarKind::Continuous, lower, upper)
    }

    /// Append a row. Zero coefficients are dropped and repeated variables
    /// merged, keeping the first occurrence's position.
    pub fn add_constraint(&mut self, name: impl Into<String>, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for (v, c) in terms {
            assert!(v < self.variables.len(), "term references undeclared variable #{v}");
            assert!(c.is_finite(), "non-finite coefficient");
            match merged.iter_mut().find(|(u, _)| *u == v) {
                Some(slot) => slot.1 += c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        self.constraints.push(LinearConstraint {
            name: name.into(),
            terms: merged,
            sense,
            rhs,
        });
    }

    pub fn set_objective(&mut self, terms: Vec<(usize, f64)>) {
        self.objective = terms.into_iter().filter(|&(_, c)| c != 0.0).collect();
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(usize, f64)] {
        &self.objective
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn stats(&self) -> ModelStats {
        model_stats(self)
    }

    /// Sparse coefficient matrix keyed by (row name, variable name), plus
    /// the objective under the row name `""`. Used to compare models.
    pub fn coefficient_map(&self) -> HashMap<(String, String), f64> {
        let mut out = HashMap::new();
        for &(v, c) in &self.objective {
            out.insert((String::new(), self.variables[v].name.clone()), c);
        }
        for row in &self.constraints {
            for &(v, c) in &row.terms {
                out.insert((row.name.clone(), self.variables[v].name.clone()), c);
            }
        }
        out
    }

    /// Objective and violations for a dense value vector in variable order.
    pub fn evaluate_dense(&self, values: &[f64]) -> Evaluation {
        assert_eq!(values.len(), self.variables.len(), "one value per variable");
        let objective = self.objective.iter().map(|&(v, c)| c * values[v]).sum();
        let mut violations = Vec::new();
        for (var, &x) in self.variables.iter().zip(values) {
            let amount = (var.lower - x).max(x - var.upper);
            if amount > FEAS_TOL {
                violations.push(Violation {
                    name: format!("bound:{}", var.name),
                    amount,
                });
            }
            if var.kind == VarKind::Binary {
                let off = (x - x.round()).abs();
                if off > FEAS_TOL {
                    violations.push(Violation {
                        name: format!("integrality:{}", var.name),
                        amount: off,
                    });
                }
            }
        }
        for row in &self.constraints {
            let amount = row.excess(values);
            if amount > FEAS_TOL {
                violations.push(Violation {
                    name: row.name.clone(),
                    amount,
                });
            }
        }
        Evaluation { objective, violations }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelStats {
    /// mVC
    pub continuous_count: usize,
    /// mVB
    pub binary_count: usize,
    /// mC
    pub constraint_count: usize,
}

pub fn model_stats(model: &LinearModel) -> ModelStats {
    let binary_count = model
        .variables
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .count();
    ModelStats {
        continuous_count: model.variables.len() - binary_count,
        binary_count,
        constraint_count: model.constraints.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Row name, or `bound:<var>` / `integrality:<var>`.
    pub name: String,
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub objective: f64,
    pub violations: Vec<Violation>,
}

impl Evaluation {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluate `model` at a named assignment. Every variable needs a value;
/// names not in the model are rejected.
pub fn evaluate(model: &LinearModel, assignment: &HashMap<String, f64>) -> Result<Evaluation, ModelError> {
    if let Some(extra) = assignment.keys().find(|k| model.var(k).is_none()) {
        return Err(ModelError::UnknownVariable(extra.clone()));
    }
    let values = model
        .variables
        .iter()
        .map(|v| {
            assignment
                .get(&v.name)
                .copied()
                .ok_or_else(|| ModelError::MissingValue(v.name.clone()))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(model.evaluate_dense(&values))
}

/// Shortest text that parses back to exactly `v`.
pub(crate) fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}
