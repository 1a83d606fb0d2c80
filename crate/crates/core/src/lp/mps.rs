//! Fixed-format MPS reading and writing.
//!
//! Fields sit at the classic column positions (2, 5, 15, 25, 40, 50), names
//! are limited to 8 characters and numbers to 12. Output is deterministic:
//! columns appear in insertion order and, within a column, the objective entry
//! precedes constraint entries in row order. A maximization problem gets an
//! `OBJSENSE` section. The objective constant is written as the negated
//! right-hand side of the objective row.
//!
//! The reader tokenizes on whitespace, so names may not contain blanks.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::program::{LinearProgram, LpError, Relation, Sense, VarId};

pub const NAME_LIMIT: usize = 8;
pub const NUMBER_WIDTH: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MpsError {
    #[error("{kind} name `{name}` is longer than {NAME_LIMIT} characters")]
    NameTooLong { kind: &'static str, name: String },
    #[error("{kind} name `{name}` contains whitespace or is empty")]
    BadName { kind: &'static str, name: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Lp(#[from] LpError),
}

fn check_name(kind: &'static str, name: &str) -> Result<(), MpsError> {
    if name.is_empty() || name.chars().any(char::is_whitespace) || !name.is_ascii() {
        return Err(MpsError::BadName { kind, name: name.to_owned() });
    }
    if name.len() > NAME_LIMIT {
        return Err(MpsError::NameTooLong { kind, name: name.to_owned() });
    }
    Ok(())
}

fn format_once(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let plain = format!("{x}");
    if plain.len() <= NUMBER_WIDTH {
        return plain;
    }
    // Most accurate candidate that fits, shortest on ties.
    let mut best: Option<(f64, String)> = None;
    let mut consider = |s: String| {
        if s.len() > NUMBER_WIDTH {
            return;
        }
        let err = (s.parse::<f64>().unwrap_or(f64::INFINITY) - x).abs();
        let better = match &best {
            None => true,
            Some((e, b)) => err < *e || (err == *e && s.len() < b.len()),
        };
        if better {
            best = Some((err, s));
        }
    };
    consider(format!("{x:e}"));
    for precision in 0..NUMBER_WIDTH {
        consider(format!("{x:.precision$e}"));
        consider(format!("{x:.precision$}"));
    }
    best.map(|(_, s)| s)
        .expect("any finite f64 fits in 12 characters at precision 0")
}

/// Formats a finite number into at most 12 characters.
///
/// The result is a fixed point: formatting the parsed value again yields the
/// same text, which makes write-read-write cycles byte-identical.
pub fn format_number(x: f64) -> String {
    let mut s = format_once(x);
    for _ in 0..8 {
        let y: f64 = s.parse().expect("formatted number parses");
        let next = format_once(y);
        if next == s {
            break;
        }
        s = next;
    }
    s
}

fn fixed_line(fields: [&str; 6]) -> String {
    const STARTS: [usize; 6] = [1, 4, 14, 24, 39, 49];
    let mut line = String::new();
    for (field, start) in fields.iter().zip(STARTS) {
        if field.is_empty() {
            continue;
        }
        while line.len() < start {
            line.push(' ');
        }
        if line.len() > start {
            line.push(' ');
        }
        line.push_str(field);
    }
    line
}

pub fn emit_mps(lp: &LinearProgram) -> Result<String, MpsError> {
    check_name("objective", &lp.objective_name)?;
    for v in lp.variables() {
        check_name("variable", &v.name)?;
    }
    for c in lp.constraints() {
        check_name("constraint", &c.name)?;
    }

    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lp.num_variables()];
    for (r, c) in lp.constraints().iter().enumerate() {
        for (v, a) in &c.terms {
            columns[v.0].push((r, *a));
        }
    }

    let mut out = String::new();
    let problem_name: String = lp.name.chars().filter(|c| !c.is_whitespace()).collect();
    writeln!(out, "NAME          {problem_name}").unwrap();
    if lp.sense == Sense::Maximize {
        out.push_str("OBJSENSE\n    MAX\n");
    }
    out.push_str("ROWS\n");
    out.push_str(&fixed_line(["N", &lp.objective_name, "", "", "", ""]));
    out.push('\n');
    for c in lp.constraints() {
        let kind = match c.relation {
            Relation::Le => "L",
            Relation::Eq => "E",
            Relation::Ge => "G",
        };
        out.push_str(&fixed_line([kind, &c.name, "", "", "", ""]));
        out.push('\n');
    }

    out.push_str("COLUMNS\n");
    for (j, var) in lp.variables().iter().enumerate() {
        let cost = lp.costs()[j];
        if cost != 0.0 || columns[j].is_empty() {
            out.push_str(&fixed_line(["", &var.name, &lp.objective_name, &format_number(cost), "", ""]));
            out.push('\n');
        }
        for (r, a) in &columns[j] {
            let row = &lp.constraints()[*r].name;
            out.push_str(&fixed_line(["", &var.name, row, &format_number(*a), "", ""]));
            out.push('\n');
        }
    }

    out.push_str("RHS\n");
    if lp.objective_constant != 0.0 {
        let v = format_number(-lp.objective_constant);
        out.push_str(&fixed_line(["", "RHS", &lp.objective_name, &v, "", ""]));
        out.push('\n');
    }
    for c in lp.constraints() {
        if c.rhs != 0.0 {
            out.push_str(&fixed_line(["", "RHS", &c.name, &format_number(c.rhs), "", ""]));
            out.push('\n');
        }
    }

    out.push_str("BOUNDS\n");
    for var in lp.variables() {
        let (lo, hi) = (var.lower, var.upper);
        let mut bound = |kind: &str, value: Option<f64>| {
            let v = value.map(format_number).unwrap_or_default();
            out.push_str(&fixed_line([kind, "BND", &var.name, &v, "", ""]));
            out.push('\n');
        };
        if lo == hi {
            bound("FX", Some(lo));
        } else if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            bound("FR", None);
        } else if lo == f64::NEG_INFINITY {
            bound("MI", None);
            bound("UP", Some(hi));
        } else {
            // An explicit LO keeps a negative UP from being read as MI.
            if lo != 0.0 || hi < 0.0 {
                bound("LO", Some(lo));
            }
            if hi != f64::INFINITY {
                bound("UP", Some(hi));
            }
        }
    }
    out.push_str("ENDATA\n");
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Bounds,
    ObjSense,
}

fn parse_err(line: usize, message: impl Into<String>) -> MpsError {
    MpsError::Parse { line, message: message.into() }
}

fn parse_value(line: usize, token: &str) -> Result<f64, MpsError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| !v.is_nan())
        .ok_or_else(|| parse_err(line, format!("`{token}` is not a number")))
}

pub fn parse_mps(text: &str) -> Result<LinearProgram, MpsError> {
    let mut name = String::new();
    let mut sense = Sense::Minimize;
    let mut objective_name: Option<String> = None;
    let mut rows: Vec<(String, Relation)> = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut col_names: Vec<String> = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut costs: Vec<f64> = Vec::new();
    let mut entries: Vec<Vec<(VarId, f64)>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut objective_constant = 0.0;
    let mut bounds: Vec<(f64, f64, bool)> = Vec::new();
    let mut section = Section::None;
    let mut finished = false;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        if finished {
            if raw.trim().is_empty() {
                continue;
            }
            return Err(parse_err(line_no, "content after ENDATA"));
        }
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            section = match tokens[0] {
                "NAME" => {
                    name = tokens.get(1..).map(|t| t.join(" ")).unwrap_or_default();
                    Section::None
                }
                "OBJSENSE" => {
                    if let Some(s) = tokens.get(1) {
                        sense = parse_sense(line_no, s)?;
                        Section::None
                    } else {
                        Section::ObjSense
                    }
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "RANGES" => return Err(parse_err(line_no, "RANGES section is not supported")),
                "ENDATA" => {
                    finished = true;
                    Section::None
                }
                other => return Err(parse_err(line_no, format!("unknown section `{other}`"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(parse_err(line_no, "data line outside of a section")),
            Section::ObjSense => {
                sense = parse_sense(line_no, tokens[0])?;
                section = Section::None;
            }
            Section::Rows => {
                if tokens.len() != 2 {
                    return Err(parse_err(line_no, "ROWS entry needs a type and a name"));
                }
                let (kind, row) = (tokens[0], tokens[1].to_owned());
                let relation = match kind {
                    "N" => {
                        if objective_name.is_some() {
                            return Err(parse_err(line_no, "more than one objective row"));
                        }
                        objective_name = Some(row);
                        continue;
                    }
                    "E" => Relation::Eq,
                    "L" => Relation::Le,
                    "G" => Relation::Ge,
                    other => return Err(parse_err(line_no, format!("unknown row type `{other}`"))),
                };
                if row_index.insert(row.clone(), rows.len()).is_some() || Some(&row) == objective_name.as_ref() {
                    return Err(parse_err(line_no, format!("duplicate row `{row}`")));
                }
                rows.push((row, relation));
                rhs.push(0.0);
            }
            Section::Columns => {
                if tokens.iter().any(|t| *t == "'MARKER'") {
                    return Err(parse_err(line_no, "integer markers are not supported"));
                }
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(parse_err(line_no, "COLUMNS entry needs a column and 1 or 2 row/value pairs"));
                }
                let col = tokens[0];
                let j = match col_names.last() {
                    Some(last) if last == col => col_names.len() - 1,
                    _ => {
                        if col_index.contains_key(col) {
                            return Err(parse_err(line_no, format!("column `{col}` is not contiguous")));
                        }
                        col_index.insert(col.to_owned(), col_names.len());
                        col_names.push(col.to_owned());
                        costs.push(0.0);
                        bounds.push((0.0, f64::INFINITY, false));
                        col_names.len() - 1
                    }
                };
                for pair in tokens[1..].chunks(2) {
                    let value = parse_value(line_no, pair[1])?;
                    if Some(pair[0]) == objective_name.as_deref() {
                        costs[j] = value;
                    } else {
                        let r = *row_index
                            .get(pair[0])
                            .ok_or_else(|| parse_err(line_no, format!("unknown row `{}`", pair[0])))?;
                        entries.resize_with(rows.len(), Vec::new);
                        entries[r].push((VarId(j), value));
                    }
                }
            }
            Section::Rhs => {
                let pairs = if tokens.len() % 2 == 1 { &tokens[1..] } else { &tokens[..] };
                if pairs.is_empty() || pairs.len() > 4 {
                    return Err(parse_err(line_no, "RHS entry needs 1 or 2 row/value pairs"));
                }
                for pair in pairs.chunks(2) {
                    let value = parse_value(line_no, pair[1])?;
                    if Some(pair[0]) == objective_name.as_deref() {
                        objective_constant = -value;
                    } else {
                        let r = *row_index
                            .get(pair[0])
                            .ok_or_else(|| parse_err(line_no, format!("RHS for unknown row `{}`", pair[0])))?;
                        rhs[r] = value;
                    }
                }
            }
            Section::Bounds => {
                let kind = tokens[0];
                let needs_value = matches!(kind, "UP" | "LO" | "FX");
                if !needs_value && !matches!(kind, "FR" | "MI" | "PL") {
                    return Err(parse_err(line_no, format!("unsupported bound type `{kind}`")));
                }
                let expected = if needs_value { [3, 4] } else { [2, 3] };
                if !expected.contains(&tokens.len()) {
                    return Err(parse_err(line_no, format!("malformed {kind} bound")));
                }
                let with_set = tokens.len() == expected[1];
                let col = if with_set { tokens[2] } else { tokens[1] };
                let j = *col_index
                    .get(col)
                    .ok_or_else(|| parse_err(line_no, format!("bound on unknown column `{col}`")))?;
                let value = if needs_value {
                    Some(parse_value(line_no, tokens[tokens.len() - 1])?)
                } else {
                    None
                };
                let b = &mut bounds[j];
                match (kind, value) {
                    ("UP", Some(v)) => {
                        if v < 0.0 && b.0 == 0.0 && !b.2 {
                            b.0 = f64::NEG_INFINITY;
                        }
                        b.1 = v;
                    }
                    ("LO", Some(v)) => {
                        b.0 = v;
                        b.2 = true;
                    }
                    ("FX", Some(v)) => {
                        *b = (v, v, true);
                    }
                    ("FR", None) => {
                        b.0 = f64::NEG_INFINITY;
                        b.1 = f64::INFINITY;
                    }
                    ("MI", None) => b.0 = f64::NEG_INFINITY,
                    ("PL", None) => b.1 = f64::INFINITY,
                    _ => unreachable!(),
                }
            }
        }
    }
    if !finished {
        return Err(parse_err(last_line.max(1), "missing ENDATA"));
    }
    let objective_name =
        objective_name.ok_or_else(|| parse_err(last_line, "no objective (N) row declared"))?;

    let mut lp = LinearProgram::new(name, sense);
    lp.objective_name = objective_name;
    lp.objective_constant = objective_constant;
    for (j, col) in col_names.iter().enumerate() {
        let (lo, hi, _) = bounds[j];
        let v = lp.add_variable(col.clone(), lo, hi)?;
        lp.set_cost(v, costs[j])?;
    }
    entries.resize_with(rows.len(), Vec::new);
    for (((row, relation), terms), b) in rows.into_iter().zip(entries).zip(rhs) {
        lp.add_constraint(row, terms, relation, b)?;
    }
    Ok(lp)
}

fn parse_sense(line: usize, token: &str) -> Result<Sense, MpsError> {
    match token {
        "MAX" | "MAXIMIZE" => Ok(Sense::Maximize),
        "MIN" | "MINIMIZE" => Ok(Sense::Minimize),
        other => Err(parse_err(line, format!("unknown objective sense `{other}`"))),
    }
}
