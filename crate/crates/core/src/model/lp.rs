//! CPLEX LP text format.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{fmt_num, LinearModel, ModelMeta, Sense, VarKind};
use crate::error::ModelError;

const TERMS_PER_LINE: usize = 8;
const SPECIAL: &str = "!\"#$%&()/,.;?@_`'{}|~";

pub(crate) fn check_lp_name(name: &str) -> Result<(), ModelError> {
    let first_ok = name
        .chars()
        .next()
        .is_some_and(|c| !c.is_ascii_digit() && c != '.');
    let chars_ok = name
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || SPECIAL.contains(c));
    if !first_ok || !chars_ok || name.len() > 255 || name.parse::<f64>().is_ok() {
        return Err(ModelError::ForbiddenName(name.to_string()));
    }
    Ok(())
}

fn write_terms(out: &mut String, model: &LinearModel, terms: &[(usize, f64)]) {
    for (k, &(v, c)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let name = &model.variables[v].name;
        let sign = if c < 0.0 { "-" } else { "+" };
        let mag = c.abs();
        if k == 0 && c >= 0.0 {
            if mag == 1.0 {
                let _ = write!(out, " {name}");
            } else {
                let _ = write!(out, " {} {name}", fmt_num(mag));
            }
        } else if mag == 1.0 {
            let _ = write!(out, " {sign} {name}");
        } else {
            let _ = write!(out, " {sign} {} {name}", fmt_num(mag));
        }
    }
}

fn fmt_bound(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        fmt_num(v)
    }
}

/// Render `model` as LP text. Output depends only on the model.
pub fn write_lp(model: &LinearModel) -> Result<String, ModelError> {
    for v in &model.variables {
        check_lp_name(&v.name)?;
    }
    for c in &model.constraints {
        check_lp_name(&c.name)?;
    }
    let mut out = String::new();
    let meta = &model.meta;
    let _ = write!(out, "\\ satsched formulation={} objective={}", meta.formulation, meta.objective);
    if let Some(u) = meta.big_m {
        let _ = write!(out, " U={}", fmt_num(u));
    }
    out.push_str("\nMaximize\n obj:");
    write_terms(&mut out, model, &model.objective);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        if c.terms.is_empty() {
            // a row needs at least one term; a zero coefficient is dropped again on reading
            match model.variables.first() {
                Some(v) => {
                    let _ = write!(out, " 0 {}", v.name);
                }
                None => continue,
            }
        }
        write_terms(&mut out, model, &c.terms);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), fmt_num(c.rhs));
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        if v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0 {
            continue;
        }
        if v.lower == v.upper {
            let _ = writeln!(out, " {} = {}", v.name, fmt_num(v.lower));
        } else if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
            let _ = writeln!(out, " {} free", v.name);
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", fmt_bound(v.lower), v.name, fmt_bound(v.upper));
        }
    }
    out.push_str("Binaries\n");
    for v in model.variables.iter().filter(|v| v.kind == VarKind::Binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("End\n");
    Ok(out)
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    End,
}

fn section_of(line: &str) -> Option<Section> {
    match line.to_ascii_lowercase().as_str() {
        "maximize" | "maximise" | "maximum" | "max" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" | "bound" => Some(Section::Bounds),
        "binaries" | "binary" | "bin" => Some(Section::Binaries),
        "end" => Some(Section::End),
        _ => None,
    }
}

fn parse_value(tok: &str) -> Option<f64> {
    match tok.to_ascii_lowercase().as_str() {
        "+inf" | "inf" | "+infinity" | "infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        _ => tok.parse().ok(),
    }
}

fn parse_sense(tok: &str) -> Option<Sense> {
    match tok {
        "<=" | "=<" | "<" => Some(Sense::Le),
        ">=" | "=>" | ">" => Some(Sense::Ge),
        "=" => Some(Sense::Eq),
        _ => None,
    }
}

/// Incremental reader state.
#[derive(Default)]
struct Reader {
    order: Vec<String>,
    seen: HashMap<String, usize>,
    bounds: HashMap<String, (f64, f64)>,
    binaries: Vec<String>,
    objective: Vec<(String, f64)>,
    rows: Vec<(String, Vec<(String, f64)>, Sense, f64)>,
}

impl Reader {
    fn touch(&mut self, name: &str) {
        if !self.seen.contains_key(name) {
            self.seen.insert(name.to_string(), self.order.len());
            self.order.push(name.to_string());
        }
    }
}

/// Parse a linear expression; returns the terms and how many tokens were used.
fn parse_expr(tokens: &[(usize, &str)], reader: &mut Reader) -> Result<(Vec<(String, f64)>, usize), ModelError> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    let mut used: usize = 0;
    for &(line, tok) in tokens {
        if parse_sense(tok).is_some() {
            break;
        }
        used += 1;
        match tok {
            "+" => {}
            "-" => sign = -sign,
            _ => {
                if let Ok(v) = tok.parse::<f64>() {
                    if coef.is_some() {
                        return Err(ModelError::Parse {
                            line,
                            message: format!("two coefficients in a row at `{tok}`"),
                        });
                    }
                    coef = Some(v);
                } else {
                    check_lp_name(tok).map_err(|_| ModelError::Parse {
                        line,
                        message: format!("bad variable name `{tok}`"),
                    })?;
                    reader.touch(tok);
                    terms.push((tok.to_string(), sign * coef.unwrap_or(1.0)));
                    sign = 1.0;
                    coef = None;
                }
            }
        }
    }
    if let Some(&(line, _)) = tokens.get(used.saturating_sub(1)) {
        if coef.is_some() {
            return Err(ModelError::Parse {
                line,
                message: "coefficient without variable".into(),
            });
        }
    }
    Ok((terms, used))
}

fn parse_bound_line(line_no: usize, toks: &[&str], reader: &mut Reader) -> Result<(), ModelError> {
    let err = || ModelError::Parse {
        line: line_no,
        message: format!("unsupported bound `{}`", toks.join(" ")),
    };
    let (name, lo, up) = match toks {
        [name, free] if free.eq_ignore_ascii_case("free") => (*name, f64::NEG_INFINITY, f64::INFINITY),
        [lo, "<=", name, "<=", up] => (*name, parse_value(lo).ok_or_else(err)?, parse_value(up).ok_or_else(err)?),
        [name, "=", v] => {
            let v = parse_value(v).ok_or_else(err)?;
            (*name, v, v)
        }
        [name, op, v] => {
            let v = parse_value(v).ok_or_else(err)?;
            let (lo, up) = reader.bounds.get(*name).copied().unwrap_or((0.0, f64::INFINITY));
            match parse_sense(op).ok_or_else(err)? {
                Sense::Le => (*name, lo, v),
                Sense::Ge => (*name, v, up),
                Sense::Eq => (*name, v, v),
            }
        }
        _ => return Err(err()),
    };
    reader.touch(name);
    reader.bounds.insert(name.to_string(), (lo, up));
    Ok(())
}

/// Read LP text produced by [`write_lp`] (and the common subset of the
/// format it uses) back into a model. Variables are declared in order of
/// first appearance.
pub fn parse_lp(text: &str) -> Result<LinearModel, ModelError> {
    let mut reader = Reader::default();
    let mut meta = ModelMeta::default();
    let mut section = Section::Preamble;
    let mut objective_tokens: Vec<(usize, String)> = Vec::new();
    let mut row_tokens: Vec<(usize, String)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('\\') {
            if let Some(rest) = comment.trim().strip_prefix("satsched") {
                for field in rest.split_whitespace() {
                    match field.split_once('=') {
                        Some(("formulation", v)) => meta.formulation = v.to_string(),
                        Some(("objective", v)) => meta.objective = v.to_string(),
                        Some(("U", v)) => meta.big_m = v.parse().ok(),
                        _ => {}
                    }
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if let Some(s) = section_of(line) {
            section = s;
            continue;
        }
        if line.to_ascii_lowercase().starts_with("minimi") {
            return Err(ModelError::Parse {
                line: line_no,
                message: "only maximization models are supported".into(),
            });
        }
        let toks = line.split_whitespace().map(|t| (line_no, t.to_string()));
        match section {
            Section::Objective => objective_tokens.extend(toks),
            Section::Constraints => row_tokens.extend(toks),
            Section::Bounds => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                parse_bound_line(line_no, &parts, &mut reader)?;
            }
            Section::Binaries => {
                for t in line.split_whitespace() {
                    reader.touch(t);
                    reader.binaries.push(t.to_string());
                }
            }
            Section::Preamble | Section::End => {
                return Err(ModelError::Parse {
                    line: line_no,
                    message: format!("unexpected text `{line}`"),
                })
            }
        }
    }

    // objective: optional label, then an expression
    let obj: Vec<(usize, &str)> = objective_tokens.iter().map(|(l, t)| (*l, t.as_str())).collect();
    let start = usize::from(obj.first().is_some_and(|(_, t)| t.ends_with(':')));
    let (terms, used) = parse_expr(&obj[start..], &mut reader)?;
    if start + used != obj.len() {
        return Err(ModelError::Parse {
            line: obj[start + used].0,
            message: "objective cannot contain a relation".into(),
        });
    }
    reader.objective = terms;

    let toks: Vec<(usize, &str)> = row_tokens.iter().map(|(l, t)| (*l, t.as_str())).collect();
    let mut pos = 0;
    while pos < toks.len() {
        let (line, first) = toks[pos];
        let name = match first.strip_suffix(':') {
            Some(n) => {
                pos += 1;
                n.to_string()
            }
            None => format!("R{}", reader.rows.len() + 1),
        };
        let (terms, used) = parse_expr(&toks[pos..], &mut reader)?;
        pos += used;
        let sense = toks
            .get(pos)
            .and_then(|(_, t)| parse_sense(t))
            .ok_or(ModelError::Parse {
                line,
                message: format!("row `{name}` has no relation"),
            })?;
        pos += 1;
        let mut rhs_tok = toks.get(pos).map(|(_, t)| t.to_string());
        if rhs_tok.as_deref() == Some("-") {
            pos += 1;
            rhs_tok = toks.get(pos).map(|(_, t)| format!("-{t}"));
        }
        let rhs = rhs_tok
            .as_deref()
            .and_then(parse_value)
            .ok_or(ModelError::Parse {
                line,
                message: format!("row `{name}` has no right-hand side"),
            })?;
        pos += 1;
        reader.rows.push((name, terms, sense, rhs));
    }

    let mut model = LinearModel::new(meta);
    for name in &reader.order {
        let binary = reader.binaries.contains(name);
        let (lo, up) = reader
            .bounds
            .get(name)
            .copied()
            .unwrap_or(if binary { (0.0, 1.0) } else { (0.0, f64::INFINITY) });
        if lo > up {
            return Err(ModelError::Parse {
                line: 0,
                message: format!("variable `{name}` has empty bounds"),
            });
        }
        let kind = if binary { VarKind::Binary } else { VarKind::Continuous };
        model.add_var(name.clone(), kind, lo, up);
    }
    let idx = |m: &LinearModel, terms: Vec<(String, f64)>| -> Vec<(usize, f64)> {
        terms
            .into_iter()
            .map(|(n, c)| (m.var(&n).expect("touched"), c))
            .collect()
    };
    let objective = idx(&model, std::mem::take(&mut reader.objective));
    model.set_objective(objective);
    for (name, terms, sense, rhs) in std::mem::take(&mut reader.rows) {
        let terms = idx(&model, terms);
        model.add_constraint(name, terms, sense, rhs);
    }
    Ok(model)
}
