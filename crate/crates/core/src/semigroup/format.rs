//! Cayley table text format.
//!
//! ```text
//! 3
//! 0 0 0
//! 0 1 1
//! 0 1 2
//! # labels: z a e
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{FiniteSemigroup, SemigroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error(transparent)]
    Algebra(#[from] SemigroupError),
    #[error(transparent)]
    Band(#[from] crate::band::BandError),
    #[error(transparent)]
    Colour(#[from] crate::colour::ColourError),
}

pub(crate) fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

/// Non-blank lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub(crate) fn parse_numbers(line: usize, s: &str) -> Result<Vec<usize>, ParseError> {
    s.split_whitespace()
        .map(|tok| tok.parse::<usize>().map_err(|_| syntax(line, format!("expected a non-negative integer, got {tok:?}"))))
        .collect()
}

/// Parses and validates a Cayley table.
pub fn parse_cayley(text: &str) -> Result<FiniteSemigroup, ParseError> {
    let mut lines = content_lines(text);
    let (l0, header) = lines.next().ok_or_else(|| ParseError::Truncated("missing order line".into()))?;
    let order = match parse_numbers(l0, header)?.as_slice() {
        [n] if *n > 0 => *n,
        _ => return Err(syntax(l0, "first line must be the positive order n")),
    };
    let mut rows = Vec::with_capacity(order);
    let mut labels = None;
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(l) = rest.trim_start().strip_prefix("labels:") {
                labels = Some(l.split_whitespace().map(str::to_string).collect::<Vec<_>>());
            }
            continue;
        }
        if rows.len() == order {
            return Err(syntax(ln, "extra table row"));
        }
        let row = parse_numbers(ln, line)?;
        if row.len() != order {
            return Err(syntax(ln, format!("expected {order} entries, got {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != order {
        return Err(ParseError::Truncated(format!("expected {order} rows, got {}", rows.len())));
    }
    Ok(FiniteSemigroup::new(rows, labels)?)
}

pub fn write_cayley(s: &FiniteSemigroup) -> String {
    let mut out = format!("{}\n", s.order());
    for a in s.elements() {
        let row: Vec<String> = s.row(a).map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    if let Some(labels) = s.labels() {
        // labels are whitespace separated, so spaces inside a label are dropped
        let cleaned: Vec<String> = labels.iter().map(|l| l.split_whitespace().collect::<String>()).collect();
        let _ = writeln!(out, "# labels: {}", cleaned.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_labels() {
        let s = parse_cayley("3\n0 0 0\n0 1 1\n0 1 2\n# labels: z a e\n").unwrap();
        assert_eq!(s.order(), 3);
        assert_eq!(s.label(2), "e");
        assert_eq!(parse_cayley(&write_cayley(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_short_row() {
        let err = parse_cayley("2\n0 1\n1\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }));
    }

    #[test]
    fn rejects_out_of_range_entry() {
        let err = parse_cayley("2\n0 2\n1 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Algebra(SemigroupError::EntryOutOfRange { .. })));
    }

    #[test]
    fn rejects_missing_rows() {
        assert!(matches!(parse_cayley("2\n0 0\n"), Err(ParseError::Truncated(_))));
    }
}
