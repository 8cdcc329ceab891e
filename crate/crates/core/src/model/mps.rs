//! Fixed-format MPS.
//!
//! Names longer than eight characters do not fit the format and are
//! replaced by generated ones (`C0000001` for columns, `R0000001` for rows);
//! the replacements are returned as a name map.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::{fmt_num, LinearModel, ModelMeta, Sense, VarKind};
use crate::error::ModelError;

const OBJ_ROW: &str = "OBJ";
const BOUND_SET: &str = "BND";
const RHS_SET: &str = "RHS";

#[derive(Debug, Clone, PartialEq)]
pub struct MpsOutput {
    pub text: String,
    /// `(mps name, original name)` for every renamed row or column.
    pub name_map: Vec<(String, String)>,
}

struct Namer {
    taken: HashSet<String>,
    next: usize,
    map: Vec<(String, String)>,
}

impl Namer {
    fn assign(&mut self, prefix: char, original: &str, reserved: bool) -> String {
        if !reserved
            && original.len() <= 8 && !original.contains(char::is_whitespace) && !original.is_empty() {
            return original.to_string();
        }
        loop {
            self.next += 1;
            let candidate = format!("{prefix}{:07}", self.next);
            if self.taken.insert(candidate.clone()) {
                self.map.push((candidate.clone(), original.to_string()));
                return candidate;
            }
        }
    }
}

/// One data line: 2-char code at column 2, then name/value pairs at the
/// standard field positions. Values wider than the field push later fields
/// right; readers that split on whitespace are unaffected.
fn line(out: &mut String, code: &str, name: &str, pairs: &[(&str, String)]) {
    let mut s = format!(" {code:<2} {name:<8}");
    for (k, (n, v)) in pairs.iter().enumerate() {
        if k == 0 {
            let _ = write!(s, "  {n:<8}  {v:>12}");
        } else {
            let _ = write!(s, "   {n:<8}  {v:>12}");
        }
    }
    out.push_str(s.trim_end());
    out.push('\n');
}

/// Render `model` as fixed-format MPS with `OBJSENSE MAX`. Binaries are
/// declared with `BV` bounds. Output depends only on the model.
pub fn write_mps(model: &LinearModel) -> MpsOutput {
    let short: HashSet<String> = model
        .variables
        .iter()
        .map(|v| v.name.clone())
        .chain(model.constraints.iter().map(|c| c.name.clone()))
        .filter(|n| n.len() <= 8)
        .chain([OBJ_ROW.to_string()])
        .collect();
    let mut namer = Namer {
        taken: short,
        next: 0,
        map: Vec::new(),
    };
    let rows: Vec<String> = model
        .constraints
        .iter()
        .map(|c| namer.assign('R', &c.name, c.name == OBJ_ROW))
        .collect();
    let cols: Vec<String> = model.variables.iter().map(|v| namer.assign('C', &v.name, false)).collect();

    let mut out = String::new();
    let name = if model.meta.formulation.is_empty() {
        "SATSCHED".to_string()
    } else {
        model.meta.formulation.to_uppercase()
    };
    let _ = writeln!(out, "NAME          {name}");
    out.push_str("OBJSENSE\n    MAX\nROWS\n");
    let _ = writeln!(out, " N  {OBJ_ROW}");
    for (c, r) in model.constraints.iter().zip(&rows) {
        let code = match c.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        let _ = writeln!(out, " {code}  {r}");
    }

    // column-major entries
    let mut entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.variables.len()];
    for (r, c) in model.constraints.iter().enumerate() {
        for &(v, coef) in &c.terms {
            entries[v].push((r, coef));
        }
    }
    let mut objective: Vec<Option<f64>> = vec![None; model.variables.len()];
    for &(v, c) in &model.objective {
        objective[v] = Some(c);
    }
    out.push_str("COLUMNS\n");
    for (v, col) in cols.iter().enumerate() {
        let mut wrote = false;
        if let Some(c) = objective[v] {
            line(&mut out, "", col, &[(OBJ_ROW, fmt_num(c))]);
            wrote = true;
        }
        for &(r, c) in &entries[v] {
            line(&mut out, "", col, &[(rows[r].as_str(), fmt_num(c))]);
            wrote = true;
        }
        if !wrote {
            line(&mut out, "", col, &[(OBJ_ROW, "0".into())]);
        }
    }
    out.push_str("RHS\n");
    for (c, r) in model.constraints.iter().zip(&rows) {
        if c.rhs != 0.0 {
            line(&mut out, "", RHS_SET, &[(r.as_str(), fmt_num(c.rhs))]);
        }
    }
    out.push_str("BOUNDS\n");
    for (v, col) in model.variables.iter().zip(&cols) {
        if v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0 {
            let _ = writeln!(out, " BV {BOUND_SET:<8}  {col}");
            continue;
        }
        if v.kind == VarKind::Binary {
            let _ = writeln!(out, " BV {BOUND_SET:<8}  {col}");
        }
        if v.lower == v.upper {
            line(&mut out, "FX", BOUND_SET, &[(col.as_str(), fmt_num(v.lower))]);
            continue;
        }
        if v.lower == f64::NEG_INFINITY {
            if v.upper == f64::INFINITY {
                let _ = writeln!(out, " FR {BOUND_SET:<8}  {col}");
                continue;
            }
            let _ = writeln!(out, " MI {BOUND_SET:<8}  {col}");
        } else if v.lower != 0.0 {
            line(&mut out, "LO", BOUND_SET, &[(col.as_str(), fmt_num(v.lower))]);
        }
        if v.upper != f64::INFINITY {
            line(&mut out, "UP", BOUND_SET, &[(col.as_str(), fmt_num(v.upper))]);
        }
    }
    out.push_str("ENDATA\n");
    MpsOutput {
        text: out,
        name_map: namer.map,
    }
}

fn perr(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Parse {
        line,
        message: message.into(),
    }
}

/// Read MPS produced by [`write_mps`], restoring original names through
/// `name_map`. Rows and columns appear in file order.
pub fn read_mps(text: &str, name_map: &[(String, String)]) -> Result<LinearModel, ModelError> {
    let rename: HashMap<&str, &str> = name_map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let real = |n: &str| rename.get(n).copied().unwrap_or(n).to_string();

    let mut section = String::new();
    let mut maximize = false;
    let mut obj_row = String::new();
    let mut row_order: Vec<(String, Sense)> = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut col_order: Vec<String> = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut col_entries: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut objective: Vec<(usize, f64)> = Vec::new();
    let mut rhs: HashMap<usize, f64> = HashMap::new();
    let mut bounds: HashMap<usize, (f64, f64)> = HashMap::new();
    let mut binary: HashSet<usize> = HashSet::new();
    let mut name = String::new();

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = toks[0].to_ascii_uppercase();
            if section == "NAME" {
                name = toks.get(1).unwrap_or(&"").to_string();
            }
            if section == "OBJSENSE" && toks.get(1).is_some_and(|s| s.eq_ignore_ascii_case("MAX")) {
                maximize = true;
            }
            continue;
        }
        match section.as_str() {
            "OBJSENSE" => maximize = toks[0].eq_ignore_ascii_case("MAX") || toks[0].eq_ignore_ascii_case("MAXIMIZE"),
            "ROWS" => {
                let [code, row] = toks[..] else {
                    return Err(perr(ln, "ROWS line needs a type and a name"));
                };
                let sense = match code {
                    "N" => {
                        if obj_row.is_empty() {
                            obj_row = row.to_string();
                        }
                        continue;
                    }
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    _ => return Err(perr(ln, format!("unknown row type `{code}`"))),
                };
                row_index.insert(row.to_string(), row_order.len());
                row_order.push((row.to_string(), sense));
            }
            "COLUMNS" => {
                if toks.len() < 3 || toks.len() % 2 == 0 {
                    return Err(perr(ln, "COLUMNS line needs a column and row/value pairs"));
                }
                let col = toks[0];
                let c = *col_index.entry(col.to_string()).or_insert_with(|| {
                    col_order.push(col.to_string());
                    col_entries.push(Vec::new());
                    col_order.len() - 1
                });
                for pair in toks[1..].chunks(2) {
                    let v: f64 = pair[1].parse().map_err(|_| perr(ln, format!("bad number `{}`", pair[1])))?;
                    if pair[0] == obj_row {
                        objective.push((c, v));
                    } else {
                        let r = *row_index
                            .get(pair[0])
                            .ok_or_else(|| perr(ln, format!("unknown row `{}`", pair[0])))?;
                        col_entries[c].push((r, v));
                    }
                }
            }
            "RHS" => {
                if toks.len() < 3 || toks.len() % 2 == 0 {
                    return Err(perr(ln, "RHS line needs a set name and row/value pairs"));
                }
                for pair in toks[1..].chunks(2) {
                    let v: f64 = pair[1].parse().map_err(|_| perr(ln, format!("bad number `{}`", pair[1])))?;
                    let r = *row_index
                        .get(pair[0])
                        .ok_or_else(|| perr(ln, format!("unknown row `{}`", pair[0])))?;
                    rhs.insert(r, v);
                }
            }
            "BOUNDS" => {
                if toks.len() < 3 {
                    return Err(perr(ln, "BOUNDS line too short"));
                }
                let c = *col_index
                    .get(toks[2])
                    .ok_or_else(|| perr(ln, format!("unknown column `{}`", toks[2])))?;
                let value = || -> Result<f64, ModelError> {
                    toks.get(3)
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| perr(ln, "bound needs a value"))
                };
                let entry = bounds.entry(c).or_insert((0.0, f64::INFINITY));
                match toks[0] {
                    "BV" => {
                        binary.insert(c);
                        *entry = (0.0, 1.0);
                    }
                    "LO" => entry.0 = value()?,
                    "UP" => entry.1 = value()?,
                    "FX" => {
                        let v = value()?;
                        *entry = (v, v);
                    }
                    "MI" => entry.0 = f64::NEG_INFINITY,
                    "PL" => entry.1 = f64::INFINITY,
                    "FR" => *entry = (f64::NEG_INFINITY, f64::INFINITY),
                    other => return Err(perr(ln, format!("unsupported bound type `{other}`"))),
                }
            }
            "ENDATA" => {}
            other => return Err(perr(ln, format!("data outside a known section ({other})"))),
        }
    }
    if !maximize {
        return Err(perr(0, "only maximization models are supported"));
    }

    let formulation = if name == "SATSCHED" { String::new() } else { name.to_lowercase() };
    let mut model = LinearModel::new(ModelMeta {
        formulation,
        ..ModelMeta::default()
    });
    for (c, col) in col_order.iter().enumerate() {
        let (lo, up) = bounds.get(&c).copied().unwrap_or((0.0, f64::INFINITY));
        let kind = if binary.contains(&c) { VarKind::Binary } else { VarKind::Continuous };
        if lo > up {
            return Err(perr(0, format!("column `{col}` has empty bounds")));
        }
        model.add_var(real(col), kind, lo, up);
    }
    model.set_objective(objective);
    let mut row_terms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); row_order.len()];
    for (c, entries) in col_entries.iter().enumerate() {
        for &(r, v) in entries {
            row_terms[r].push((c, v));
        }
    }
    for (r, ((row, sense), terms)) in row_order.iter().zip(row_terms).enumerate() {
        model.add_constraint(real(row), terms, *sense, rhs.get(&r).copied().unwrap_or(0.0));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable_model() {
        let mut m = LinearModel::default();
        let x = m.add_binary("x");
        m.add_constraint("c1", vec![(x, 1.0)], Sense::Le, 1.0);
        m.set_objective(vec![(x, 1.0)]);
        let out = write_mps(&m);
        for s in ["ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"] {
            assert!(out.text.contains(s), "{s}");
        }
        assert_eq!(out.text.matches(" BV ").count(), 1);
        assert!(out.name_map.is_empty());
    }

    #[test]
    fn long_names_are_mapped() {
        let mut m = LinearModel::default();
        let x = m.add_binary("x_MISSION_R_1");
        let y = m.add_binary("C0000001");
        m.add_constraint("mission_accomplishment", vec![(x, 1.0), (y, 1.0)], Sense::Le, 1.0);
        m.add_constraint("OBJ", vec![(x, 1.0)], Sense::Ge, 0.0);
        let out = write_mps(&m);
        let originals: Vec<&str> = out.name_map.iter().map(|(_, o)| o.as_str()).collect();
        assert!(originals.contains(&"mission_accomplishment"));
        assert!(originals.contains(&"x_MISSION_R_1"));
        assert!(originals.contains(&"OBJ"));
        // the generated column name skips the one already in use
        assert!(out.name_map.iter().all(|(n, _)| n != "C0000001" && n.len() <= 8));
        let back = read_mps(&out.text, &out.name_map).unwrap();
        assert_eq!(back.coefficient_map(), m.coefficient_map());
    }

    #[test]
    fn round_trip() {
        let mut m = LinearModel::new(ModelMeta {
            formulation: "improved".into(),
            ..ModelMeta::default()
        });
        let x = m.add_binary("x");
        let t = m.add_continuous("t_A_R_1", 0.0, 86400.0 - 7.0);
        let lonely = m.add_continuous("lonely", -2.5, f64::INFINITY);
        let free = m.add_continuous("free", f64::NEG_INFINITY, f64::INFINITY);
        let neg = m.add_continuous("neg", f64::NEG_INFINITY, 4.0);
        let fix = m.add_continuous("fix", 3.0, 3.0);
        m.add_constraint("a", vec![(t, 1.0), (x, -86465.70796326795)], Sense::Le, 0.0);
        m.add_constraint("b", vec![(t, 1.0), (free, 0.1), (neg, 1.0), (fix, 2.0)], Sense::Ge, -1e-9);
        m.add_constraint("c", vec![(x, 1.0)], Sense::Eq, 1.0);
        m.set_objective(vec![(x, 5.0)]);
        let out = write_mps(&m);
        let back = read_mps(&out.text, &out.name_map).unwrap();
        assert_eq!(back.coefficient_map(), m.coefficient_map());
        assert_eq!(back.variables(), m.variables());
        for (a, b) in back.constraints().iter().zip(m.constraints()) {
            assert_eq!((&a.name, a.sense, a.rhs), (&b.name, b.sense, b.rhs));
        }
        assert_eq!(back.meta().formulation, "improved");
        let _ = lonely;
        assert_eq!(write_mps(&back), out);
    }
}
