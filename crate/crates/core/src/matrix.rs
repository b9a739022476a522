//! Encoding-matrix text format: one row per encoding rule, one column per
//! source state, cells holding the message set `e(s)`.
//!
//! ```text
//! # comment
//! messages 1 2 3 4 5 6 7 8 9   (or `v 9` for labels 0..8)
//! c 2                          (optional; every cell must then have c messages)
//! rule s_1   s_2
//! e_1  {1,2} {3,5}
//! e_2  {2,3} {4,6}
//! ```
//!
//! The `rule` line names the columns and must come before any row. A row is
//! a rule name followed by exactly one brace-delimited, comma-separated cell
//! per column. Message order inside a cell is free on input; output lists
//! messages in the order of the `messages` line.

use std::fmt;

use crate::code::AuthCode;
use crate::design::Labels;
use crate::design_file::is_label_char;
use crate::error::{ParseError, Result};

/// Borrowed tabular view of a code.
#[derive(Debug, Clone, Copy)]
pub struct EncodingMatrix<'a> {
    code: &'a AuthCode,
}

impl<'a> EncodingMatrix<'a> {
    pub fn new(code: &'a AuthCode) -> Self {
        EncodingMatrix { code }
    }

    pub fn rows(&self) -> usize {
        self.code.rule_count()
    }

    pub fn columns(&self) -> usize {
        self.code.source_count()
    }

    pub fn cell(&self, rule: usize, source: usize) -> &'a [u32] {
        self.code.rules()[rule].cell(source)
    }
}

impl fmt::Display for EncodingMatrix<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = self.code;
        writeln!(f, "messages {}", code.messages().names().join(" "))?;
        if let Some(c) = code.uniform_split() {
            writeln!(f, "c {c}")?;
        }
        let mut grid: Vec<Vec<String>> = Vec::with_capacity(code.rule_count() + 1);
        let mut header = vec!["rule".to_string()];
        header.extend(code.source_names().iter().cloned());
        grid.push(header);
        for (name, rule) in code.rule_names().iter().zip(code.rules()) {
            let mut row = vec![name.clone()];
            row.extend(rule.cells().iter().map(|cell| code.display_cell(cell)));
            grid.push(row);
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|j| grid.iter().map(|r| r[j].len()).max().unwrap_or(0))
            .collect();
        for row in &grid {
            let last = row.len() - 1;
            for (j, cell) in row.iter().enumerate() {
                if j == last {
                    writeln!(f, "{cell}")?;
                } else {
                    write!(f, "{cell:<w$} ", w = widths[j])?;
                }
            }
        }
        Ok(())
    }
}

pub fn store_matrix(code: &AuthCode) -> String {
    EncodingMatrix::new(code).to_string()
}

fn parse_cells(
    line: usize,
    row: usize,
    text: &str,
    labels: &Labels,
) -> Result<Vec<Vec<u32>>, ParseError> {
    let mut cells = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let col = cells.len();
        let Some(body) = rest.strip_prefix('{') else {
            return Err(ParseError::cell(line, row, col, "expected `{`"));
        };
        let close = body
            .find('}')
            .ok_or_else(|| ParseError::cell(line, row, col, "unterminated cell"))?;
        let mut cell = Vec::new();
        for word in body[..close].split(',') {
            let word = word.trim();
            if word.is_empty() || !word.chars().all(is_label_char) {
                return Err(ParseError::cell(
                    line,
                    row,
                    col,
                    format!("bad message label `{word}`"),
                ));
            }
            let m = labels.lookup(word).ok_or_else(|| {
                ParseError::cell(line, row, col, format!("unknown message `{word}`"))
            })?;
            if cell.contains(&m) {
                return Err(ParseError::cell(
                    line,
                    row,
                    col,
                    format!("message `{word}` repeated"),
                ));
            }
            cell.push(m);
        }
        cells.push(cell);
        rest = body[close + 1..].trim_start();
    }
    Ok(cells)
}

pub fn load_matrix(text: &str) -> Result<AuthCode> {
    let mut labels: Option<Labels> = None;
    let mut c: Option<usize> = None;
    let mut sources: Option<Vec<String>> = None;
    let mut names = Vec::new();
    let mut rows: Vec<Vec<Vec<u32>>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        match (key, &sources) {
            ("messages", None) | ("v", None) if labels.is_some() => {
                return Err(ParseError::at(line, "message set declared twice").into());
            }
            ("messages", None) => {
                let words: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if let Some(bad) = words.iter().find(|w| !w.chars().all(is_label_char)) {
                    return Err(
                        ParseError::at(line, format!("invalid message label `{bad}`")).into(),
                    );
                }
                labels = Some(Labels::new(words).map_err(|e| ParseError::at(line, e.to_string()))?);
            }
            ("v", None) => {
                let v: usize = rest
                    .parse()
                    .map_err(|_| ParseError::at(line, "`v` expects a positive integer"))?;
                labels = Some(Labels::numeric(v));
            }
            ("c", None) => {
                let n: usize = rest
                    .parse()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| ParseError::at(line, "`c` expects a positive integer"))?;
                c = Some(n);
            }
            ("rule", None) => {
                let cols: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if cols.is_empty() {
                    return Err(ParseError::at(line, "no source columns").into());
                }
                sources = Some(cols);
            }
            (_, None) => {
                return Err(
                    ParseError::at(line, format!("expected a header line, found `{key}`")).into(),
                );
            }
            (name, Some(cols)) => {
                let Some(labels) = &labels else {
                    return Err(ParseError::at(line, "rows before the message set").into());
                };
                let row = rows.len();
                if !name.chars().all(is_label_char) {
                    return Err(ParseError::at(line, format!("invalid rule name `{name}`")).into());
                }
                let cells = parse_cells(line, row, rest, labels)?;
                if cells.len() != cols.len() {
                    return Err(ParseError::cell(
                        line,
                        row,
                        cells.len().min(cols.len()),
                        format!("row has {} cells, expected {}", cells.len(), cols.len()),
                    )
                    .into());
                }
                let mut owner = vec![usize::MAX; labels.len()];
                for (col, cell) in cells.iter().enumerate() {
                    if let Some(want) = c {
                        if cell.len() != want {
                            return Err(ParseError::cell(
                                line,
                                row,
                                col,
                                format!("cell has {} messages, expected {want}", cell.len()),
                            )
                            .into());
                        }
                    }
                    for &m in cell {
                        if owner[m as usize] != usize::MAX {
                            return Err(ParseError::cell(
                                line,
                                row,
                                col,
                                format!(
                                    "message `{}` also in column {}",
                                    labels.name(m),
                                    owner[m as usize] + 1
                                ),
                            )
                            .into());
                        }
                        owner[m as usize] = col;
                    }
                }
                names.push(name.to_string());
                rows.push(cells);
            }
        }
    }
    let end = text.lines().count().max(1);
    let labels = labels.ok_or_else(|| ParseError::at(end, "missing `messages` line"))?;
    let sources = sources.ok_or_else(|| ParseError::at(end, "missing `rule` header line"))?;
    if rows.is_empty() {
        return Err(ParseError::at(end, "no encoding rules").into());
    }
    AuthCode::with_names(labels, sources, names, rows)
}
