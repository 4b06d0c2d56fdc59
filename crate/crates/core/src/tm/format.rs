//! Plain-text machine format.
//!
//! ```text
//! # two-state busy beaver
//! states: A B H
//! blank: _
//! symbols: 1
//! input:
//! start: A
//! halt: H
//! A _ -> B 1 R
//! A 1 -> B 1 L
//! B _ -> A 1 L
//! B 1 -> H 1 R
//! ```
//!
//! Header lines are `key: values` with whitespace-separated values. `blank`
//! defaults to `_`; `symbols`, `input` and `halt` may be empty. Every other
//! non-empty, non-comment line is one transition.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use super::{MachineError, MachineParts, Move, RuleSpec, TuringMachine};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    Machine(MachineError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 when the error is not tied to a line.
    pub line: usize,
    /// 1-based column of the offending token.
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => f.write_str(m),
            ParseErrorKind::Machine(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ParseError {}

fn single_char(tok: &str) -> Option<char> {
    let mut it = tok.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

pub fn parse_tm(text: &str) -> Result<TuringMachine, ParseError> {
    let syntax = |line: usize, column: usize, msg: String| ParseError { line, column, kind: ParseErrorKind::Syntax(msg) };
    let mut parts = MachineParts { blank: '_', ..MachineParts::default() };
    let mut rule_pos = Vec::new();
    let mut header_pos: Vec<(usize, usize)> = Vec::new();
    let mut seen_keys: Vec<&str> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some(colon) = line.find(':').filter(|_| !line.contains("->")) {
            let key = line[..colon].trim();
            let values: Vec<(usize, &str)> = tokens(&line[colon + 1..])
                .into_iter()
                .map(|(c, t)| (c + line[..=colon].chars().count(), t))
                .collect();
            if seen_keys.contains(&key) {
                return Err(syntax(ln, 1, alloc::format!("header {key:?} given twice")));
            }
            let chars = |values: &[(usize, &str)]| -> Result<Vec<char>, ParseError> {
                values
                    .iter()
                    .map(|&(c, t)| single_char(t).ok_or_else(|| syntax(ln, c, alloc::format!("symbol {t:?} is not a single character"))))
                    .collect()
            };
            match key {
                "states" => parts.states = values.iter().map(|(_, t)| t.to_string()).collect(),
                "blank" => {
                    let c = chars(&values)?;
                    if c.len() != 1 {
                        return Err(syntax(ln, colon + 2, "blank takes exactly one symbol".into()));
                    }
                    parts.blank = c[0];
                }
                "symbols" => parts.symbols = chars(&values)?,
                "input" => parts.input_alphabet = chars(&values)?,
                "start" => {
                    if values.len() != 1 {
                        return Err(syntax(ln, colon + 2, "start takes exactly one state".into()));
                    }
                    header_pos.push((ln, values[0].0));
                    parts.start = Some(values[0].1.to_string());
                }
                "halt" => {
                    parts.halt = values.iter().map(|(_, t)| t.to_string()).collect();
                    header_pos.push((ln, values.first().map_or(1, |v| v.0)));
                }
                other => return Err(syntax(ln, 1, alloc::format!("unknown header {other:?}"))),
            }
            seen_keys.push(key);
            continue;
        }
        let toks = tokens(line);
        let [(c0, state), (c1, read), (c2, arrow), (c3, next), (c4, write), (c5, mv)] = toks[..] else {
            return Err(syntax(ln, 1, "expected `state symbol -> state symbol L|R`".into()));
        };
        if arrow != "->" {
            return Err(syntax(ln, c2, alloc::format!("expected `->`, found {arrow:?}")));
        }
        let read = single_char(read).ok_or_else(|| syntax(ln, c1, alloc::format!("symbol {read:?} is not a single character")))?;
        let write =
            single_char(write).ok_or_else(|| syntax(ln, c4, alloc::format!("symbol {write:?} is not a single character")))?;
        let movement = match mv {
            "L" => Move::L,
            "R" => Move::R,
            _ => return Err(syntax(ln, c5, alloc::format!("move must be L or R, found {mv:?}"))),
        };
        rule_pos.push((ln, [c0, c1, c3, c4]));
        parts.rules.push(RuleSpec { state: state.to_string(), read, next: next.to_string(), write, movement });
    }

    TuringMachine::from_parts(parts.clone()).map_err(|e| {
        let (line, column) = match (&e, e.rule()) {
            (MachineError::UndeclaredState { name, .. }, Some(r)) => {
                let (ln, cols) = rule_pos[r];
                let col = if parts.rules[r].state == *name { cols[0] } else { cols[2] };
                (ln, col)
            }
            (MachineError::UndeclaredSymbol { symbol, .. }, Some(r)) => {
                let (ln, cols) = rule_pos[r];
                let col = if parts.rules[r].read == *symbol { cols[1] } else { cols[3] };
                (ln, col)
            }
            (_, Some(r)) => (rule_pos[r].0, rule_pos[r].1[0]),
            (MachineError::UndeclaredState { .. }, None) => header_pos.first().copied().unwrap_or((0, 0)),
            _ => (0, 0),
        };
        ParseError { line, column, kind: ParseErrorKind::Machine(e) }
    })
}

/// Canonical text form; `parse_tm(&to_text(m)) == m`.
pub fn to_text(tm: &TuringMachine) -> String {
    let p = tm.to_parts();
    let mut s = String::new();
    let join_chars = |cs: &[char]| cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "states: {}", p.states.join(" "));
    let _ = writeln!(s, "blank: {}", p.blank);
    let _ = writeln!(s, "symbols: {}", join_chars(&p.symbols));
    let _ = writeln!(s, "input: {}", join_chars(&p.input_alphabet));
    let _ = writeln!(s, "start: {}", p.start.unwrap_or_default());
    let _ = writeln!(s, "halt: {}", p.halt.join(" "));
    for r in p.rules {
        let m = match r.movement {
            Move::L => 'L',
            Move::R => 'R',
        };
        let _ = writeln!(s, "{} {} -> {} {} {}", r.state, r.read, r.next, r.write, m);
    }
    s
}
