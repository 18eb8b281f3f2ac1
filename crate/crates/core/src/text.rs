//! The `.rack` text format: the order `n` on the first line, then `n` rows of
//! `n` space-separated entries, row `x` listing `x▷0 … x▷(n−1)`.

use crate::error::ParseError;
use crate::rack::{rack_from_table, Rack};

/// Parses the table without checking the rack axioms.
pub fn parse_table(text: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (line_no, first) = lines.next().ok_or(ParseError::Line {
        line: 1,
        message: "missing order line".into(),
    })?;
    let n: usize = first.trim().parse().map_err(|_| ParseError::Line {
        line: line_no,
        message: format!("expected the order n, found {:?}", first.trim()),
    })?;
    if n == 0 {
        return Err(ParseError::Line {
            line: line_no,
            message: "order must be positive".into(),
        });
    }
    let mut rows = Vec::with_capacity(n);
    for (line, content) in lines {
        if rows.len() == n {
            if content.trim().is_empty() {
                continue;
            }
            return Err(ParseError::Line {
                line,
                message: format!("unexpected content after {n} rows"),
            });
        }
        let mut row = Vec::with_capacity(n);
        for (idx, tok) in content.split_whitespace().enumerate() {
            let column = idx + 1;
            let v: usize = tok.parse().map_err(|_| ParseError::Entry {
                line,
                column,
                message: format!("{tok:?} is not a non-negative integer"),
            })?;
            if v >= n {
                return Err(ParseError::Entry {
                    line,
                    column,
                    message: format!("{v} is outside 0..{n}"),
                });
            }
            row.push(v);
        }
        if row.len() != n {
            return Err(ParseError::Line {
                line,
                message: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(ParseError::RowCount {
            expected: n,
            found: rows.len(),
        });
    }
    Ok(rows)
}

/// Parses and validates a rack.
pub fn parse_rack(text: &str) -> Result<Rack, ParseError> {
    Ok(rack_from_table(&parse_table(text)?)?)
}

pub fn format_rack(rack: &Rack) -> String {
    format_table(rack.order(), rack.table())
}

/// Formats a flat row-major table.
pub fn format_table(n: usize, table: &[usize]) -> String {
    let mut out = format!("{n}\n");
    for row in table.chunks(n) {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
