//! The line-oriented `.qdtmc` format.
//!
//! ```text
//! qdtmc 1
//! states <n>
//! init <i>
//! aps <name> ...
//! label <state> <ap>=<T|F|?> [<ap>=<T|F|?> ...]
//! trans <from> <to> <prob>
//! ```
//!
//! `#` starts a comment. Every (state, proposition) pair must be labeled
//! exactly once; there is no default truth value.

use std::fmt::Write as _;

use super::{Diagnostic, IoError};
use crate::model::{is_identifier, QDtmc};
use crate::truth::Tri;

const FORMAT_VERSION: &str = "1";

struct Header {
    states: Option<(usize, usize)>,
    init: Option<(usize, usize)>,
    aps: Option<(usize, Vec<String>)>,
}

fn diag(line: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        line: Some(line),
        message: message.into(),
    }
}

/// Parses a model and checks that it is well formed.
pub fn parse_model(text: &str) -> Result<QDtmc, IoError> {
    let m = parse_model_unvalidated(text)?;
    let report = m.validate();
    if report.is_empty() {
        Ok(m)
    } else {
        Err(IoError::Invalid(report))
    }
}

/// Parses a model, reporting syntax and totality problems but not semantic
/// ones such as row sums. Use [`QDtmc::validate`] on the result.
pub fn parse_model_unvalidated(text: &str) -> Result<QDtmc, IoError> {
    let mut errors = Vec::new();
    let mut seen_header = false;
    let mut header = Header {
        states: None,
        init: None,
        aps: None,
    };
    let mut labels: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut trans: Vec<(usize, Vec<&str>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some((&directive, args)) = words.split_first() else {
            continue;
        };
        if !seen_header {
            if directive != "qdtmc" {
                errors.push(diag(line, "expected header \"qdtmc 1\""));
                return Err(IoError::Syntax(errors));
            }
            if args != [FORMAT_VERSION] {
                errors.push(diag(
                    line,
                    format!("unsupported format version {:?}", args.join(" ")),
                ));
                return Err(IoError::Syntax(errors));
            }
            seen_header = true;
            continue;
        }
        match directive {
            "qdtmc" => errors.push(diag(line, "repeated header")),
            "states" | "init" => {
                let slot = if directive == "states" {
                    &mut header.states
                } else {
                    &mut header.init
                };
                if slot.is_some() {
                    errors.push(diag(line, format!("repeated \"{directive}\" directive")));
                    continue;
                }
                match args {
                    [value] => match value.parse::<usize>() {
                        Ok(v) => *slot = Some((line, v)),
                        Err(_) => {
                            errors.push(diag(line, format!("invalid {directive} value {value:?}")))
                        }
                    },
                    _ => errors.push(diag(
                        line,
                        format!("\"{directive}\" takes exactly one argument"),
                    )),
                }
            }
            "aps" => {
                if header.aps.is_some() {
                    errors.push(diag(line, "repeated \"aps\" directive"));
                    continue;
                }
                let mut names = Vec::new();
                for &name in args {
                    if !is_identifier(name) {
                        errors.push(diag(line, format!("invalid proposition name {name:?}")));
                    } else if names.iter().any(|n| n == name) {
                        errors.push(diag(line, format!("duplicate proposition {name:?}")));
                    } else {
                        names.push(name.to_string());
                    }
                }
                header.aps = Some((line, names));
            }
            "label" => labels.push((line, args.to_vec())),
            "trans" => trans.push((line, args.to_vec())),
            other => errors.push(diag(line, format!("unknown directive {other:?}"))),
        }
    }

    if !seen_header {
        errors.push(Diagnostic {
            line: None,
            message: "missing header \"qdtmc 1\"".into(),
        });
        return Err(IoError::Syntax(errors));
    }
    let missing = |what: &str| Diagnostic {
        line: None,
        message: format!("missing \"{what}\" directive"),
    };
    let (Some((_, n)), Some((_, init)), Some((_, aps))) =
        (header.states, header.init, header.aps.clone())
    else {
        if header.states.is_none() {
            errors.push(missing("states"));
        }
        if header.init.is_none() {
            errors.push(missing("init"));
        }
        if header.aps.is_none() {
            errors.push(missing("aps"));
        }
        return Err(IoError::Syntax(errors));
    };
    if let Some((line, _)) = header.init.filter(|&(_, i)| i >= n) {
        errors.push(diag(line, format!("initial state {init} out of range")));
    }

    let mut grid: Vec<Vec<Option<Tri>>> = vec![vec![None; aps.len()]; n];
    for (line, args) in &labels {
        let line = *line;
        let Some((state, assignments)) = args.split_first() else {
            errors.push(diag(
                line,
                "\"label\" needs a state and at least one assignment",
            ));
            continue;
        };
        let state = match state.parse::<usize>() {
            Ok(s) if s < n => s,
            _ => {
                errors.push(diag(line, format!("invalid state {state:?}")));
                continue;
            }
        };
        if assignments.is_empty() {
            errors.push(diag(line, "\"label\" needs at least one assignment"));
        }
        for assignment in assignments {
            let Some((name, value)) = assignment.split_once('=') else {
                errors.push(diag(
                    line,
                    format!("expected <ap>=<T|F|?>, found {assignment:?}"),
                ));
                continue;
            };
            let Some(ap) = aps.iter().position(|a| a == name) else {
                errors.push(diag(line, format!("unknown proposition {name:?}")));
                continue;
            };
            let value: Tri = match value.parse() {
                Ok(v) => v,
                Err(e) => {
                    errors.push(diag(line, e.to_string()));
                    continue;
                }
            };
            if grid[state][ap].replace(value).is_some() {
                errors.push(diag(line, format!("({state},{name}) labeled twice")));
            }
        }
    }

    let mut transitions = Vec::new();
    let mut seen_pairs = std::collections::BTreeMap::new();
    for (line, args) in &trans {
        let line = *line;
        let [from, to, prob] = args.as_slice() else {
            errors.push(diag(line, "\"trans\" takes <from> <to> <prob>"));
            continue;
        };
        let index = |s: &str| s.parse::<usize>().ok().filter(|&v| v < n);
        let (Some(from), Some(to)) = (index(from), index(to)) else {
            errors.push(diag(
                line,
                format!("state index out of range in {from} -> {to}"),
            ));
            continue;
        };
        let prob = match prob.parse::<f64>() {
            Ok(p) if p.is_finite() => p,
            _ => {
                errors.push(diag(line, format!("invalid probability {prob:?}")));
                continue;
            }
        };
        if let Some(first) = seen_pairs.insert((from, to), line) {
            errors.push(diag(
                line,
                format!("duplicate transition {from} -> {to} (first given on line {first})"),
            ));
            continue;
        }
        transitions.push((from, to, prob));
    }

    for (s, row) in grid.iter().enumerate() {
        for (a, cell) in row.iter().enumerate() {
            if cell.is_none() {
                errors.push(Diagnostic {
                    line: None,
                    message: format!("unlabeled ({s},{})", aps[a]),
                });
            }
        }
    }

    if !errors.is_empty() {
        return Err(IoError::Syntax(errors));
    }
    let labels = grid
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.unwrap_or(Tri::U)).collect())
        .collect();
    Ok(QDtmc::from_parts(init, aps, labels, transitions)?)
}

/// Canonical rendering: states ascending, propositions in declaration
/// order, transitions by (from, to).
pub fn render_model(m: &QDtmc) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qdtmc {FORMAT_VERSION}");
    let _ = writeln!(out, "states {}", m.num_states());
    let _ = writeln!(out, "init {}", m.init());
    let _ = writeln!(out, "aps {}", m.aps().join(" "));
    for s in 0..m.num_states() {
        let _ = write!(out, "label {s}");
        for (name, value) in m.aps().iter().zip(m.labels_of(s)) {
            let _ = write!(out, " {name}={value}");
        }
        out.push('\n');
    }
    for (from, to, p) in m.transitions() {
        let _ = writeln!(out, "trans {from} {to} {p}");
    }
    out
}
