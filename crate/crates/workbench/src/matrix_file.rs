//! Binary matrices as lines of `0`/`1` characters. Blank lines and lines
//! starting with `#` are skipped.

use pi_core::order_regular::OrderRegularMatrix;

use crate::error::{FormatError, Result};

pub fn parse_matrix(text: &str) -> Result<OrderRegularMatrix> {
    let mut rows: Vec<Vec<bool>> = Vec::new();
    let mut width: Option<(usize, usize)> = None;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let offset = line.len() - line.trim_start().len();
        let mut row = Vec::with_capacity(trimmed.len());
        for (c, ch) in trimmed.chars().enumerate() {
            match ch {
                '0' => row.push(false),
                '1' => row.push(true),
                other => {
                    return Err(FormatError::Syntax {
                        line: line_no,
                        column: offset + c + 1,
                        message: format!("expected 0 or 1, found {other:?}"),
                    })
                }
            }
        }
        match width {
            None => width = Some((row.len(), line_no)),
            Some((w, first)) if w != row.len() => {
                return Err(FormatError::Content {
                    line: line_no,
                    message: format!("ragged rows: {} columns here, {w} on line {first}", row.len()),
                })
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FormatError::Content { line: 0, message: "matrix has no rows".into() });
    }
    Ok(OrderRegularMatrix::from_bit_rows(&rows)?)
}

pub fn write_matrix(m: &OrderRegularMatrix) -> String {
    m.to_string()
}
