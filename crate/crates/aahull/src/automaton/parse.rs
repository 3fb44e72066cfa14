//! Line-oriented `.aaut` reader.
//!
//! ```text
//! # comment
//! basis 2
//! dim 1
//! initial q0
//! accepting qd              # weak form, or: muller { q1 q2 } { q3 }
//! trans q0 0 qs
//! trans qs * qi
//! ```
//!
//! State names match `[A-Za-z0-9_-]+` and are declared implicitly by
//! appearing in `initial` or `trans` lines; acceptance lines may only use
//! declared names, so they are resolved after the whole file is read.

use std::collections::BTreeSet;

use super::{ArithmeticAutomaton, AutomatonBuilder, AutomatonError, Label};
use crate::digits::DigitContext;

fn valid_name(tok: &str) -> bool {
    !tok.is_empty()
        && tok
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn parse_err(line: usize, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Parse { line, message: message.into() }
}

enum PendingAcceptance {
    None,
    Weak { line: usize, names: Vec<String> },
    Muller { line: usize, sets: Vec<Vec<String>> },
}

pub fn parse_automaton(text: &str) -> Result<ArithmeticAutomaton, AutomatonError> {
    let mut basis: Option<(u32, usize)> = None;
    let mut dim: Option<(usize, usize)> = None;
    let mut initial_names: Vec<(usize, String)> = Vec::new();
    let mut trans_lines: Vec<(usize, String, String, String)> = Vec::new();
    let mut pending = PendingAcceptance::None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "basis" => {
                if basis.is_some() {
                    return Err(parse_err(line, "duplicate `basis` directive"));
                }
                let &[value] = &tokens[1..] else {
                    return Err(parse_err(line, "expected `basis <r>`"));
                };
                let r: u32 = value
                    .parse()
                    .map_err(|_| parse_err(line, "basis must be an integer"))?;
                if r < 2 {
                    return Err(parse_err(line, "basis must be at least 2"));
                }
                basis = Some((r, line));
            }
            "dim" => {
                if dim.is_some() {
                    return Err(parse_err(line, "duplicate `dim` directive"));
                }
                let &[value] = &tokens[1..] else {
                    return Err(parse_err(line, "expected `dim <m>`"));
                };
                let m: usize = value
                    .parse()
                    .map_err(|_| parse_err(line, "dimension must be an integer"))?;
                if m < 1 {
                    return Err(parse_err(line, "dimension must be at least 1"));
                }
                dim = Some((m, line));
            }
            "initial" => {
                if tokens.len() < 2 {
                    return Err(parse_err(line, "expected `initial <state>...`"));
                }
                for tok in &tokens[1..] {
                    if !valid_name(tok) {
                        return Err(parse_err(line, format!("invalid state name `{tok}`")));
                    }
                    initial_names.push((line, tok.to_string()));
                }
            }
            "accepting" => {
                if !matches!(pending, PendingAcceptance::None) {
                    return Err(parse_err(line, "acceptance already declared"));
                }
                let names: Vec<String> = tokens[1..].iter().map(|t| t.to_string()).collect();
                for n in &names {
                    if !valid_name(n) {
                        return Err(parse_err(line, format!("invalid state name `{n}`")));
                    }
                }
                pending = PendingAcceptance::Weak { line, names };
            }
            "muller" => {
                if !matches!(pending, PendingAcceptance::None) {
                    return Err(parse_err(line, "acceptance already declared"));
                }
                let mut sets: Vec<Vec<String>> = Vec::new();
                let mut current: Option<Vec<String>> = None;
                for tok in &tokens[1..] {
                    match *tok {
                        "{" => {
                            if current.is_some() {
                                return Err(parse_err(line, "nested `{` in muller sets"));
                            }
                            current = Some(Vec::new());
                        }
                        "}" => match current.take() {
                            Some(set) => sets.push(set),
                            None => return Err(parse_err(line, "unmatched `}`")),
                        },
                        name => match &mut current {
                            Some(set) => {
                                if !valid_name(name) {
                                    return Err(parse_err(
                                        line,
                                        format!("invalid state name `{name}`"),
                                    ));
                                }
                                set.push(name.to_string());
                            }
                            None => {
                                return Err(parse_err(line, "muller sets must be braced"))
                            }
                        },
                    }
                }
                if current.is_some() {
                    return Err(parse_err(line, "unterminated muller set"));
                }
                pending = PendingAcceptance::Muller { line, sets };
            }
            "trans" => {
                let &[src, label, dst] = &tokens[1..] else {
                    return Err(parse_err(line, "expected `trans <src> <label> <dst>`"));
                };
                if !valid_name(src) || !valid_name(dst) {
                    return Err(parse_err(line, "invalid state name in transition"));
                }
                trans_lines.push((line, src.to_string(), label.to_string(), dst.to_string()));
            }
            other => {
                return Err(parse_err(line, format!("unknown directive `{other}`")));
            }
        }
    }

    let (r, _) = basis.ok_or_else(|| parse_err(0, "missing `basis` directive"))?;
    let (m, _) = dim.ok_or_else(|| parse_err(0, "missing `dim` directive"))?;
    let ctx = DigitContext::new(r, m);
    let mut builder = AutomatonBuilder::new(ctx);

    for (_, name) in &initial_names {
        let q = builder.state(name);
        builder.mark_initial(q);
    }
    for (line, src, label, dst) in &trans_lines {
        let s = builder.state(src);
        let d = builder.state(dst);
        let lab = if label == "*" {
            Label::Star
        } else {
            let digit: u32 = label
                .parse()
                .map_err(|_| parse_err(*line, format!("bad transition label `{label}`")))?;
            if !ctx.is_digit(digit) {
                return Err(AutomatonError::BadDigit { line: *line, digit, basis: r });
            }
            Label::Digit(digit)
        };
        if !builder.transition(s, lab, d) {
            return Err(AutomatonError::DuplicateTransition { line: *line });
        }
    }

    match pending {
        PendingAcceptance::None => {}
        PendingAcceptance::Weak { line, names } => {
            let mut set = BTreeSet::new();
            for name in names {
                let q = builder
                    .lookup(&name)
                    .ok_or(AutomatonError::UnknownState { line, name })?;
                set.insert(q);
            }
            builder.set_weak_acceptance(set);
        }
        PendingAcceptance::Muller { line, sets } => {
            let mut table = Vec::new();
            for set in sets {
                let mut resolved = BTreeSet::new();
                for name in set {
                    let q = builder
                        .lookup(&name)
                        .ok_or(AutomatonError::UnknownState { line, name })?;
                    resolved.insert(q);
                }
                table.push(resolved);
            }
            builder.set_muller_acceptance(table);
        }
    }

    Ok(builder.build())
}
