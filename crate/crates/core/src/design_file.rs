//! Text format for splitting designs.
//!
//! ```text
//! # comment
//! t 2
//! v 9
//! b 9                       (optional; checked against the block count)
//! lambda 1
//! c 2
//! u 2
//! points 1 2 3 4 5 6 7 8 9  (optional; default labels are 0..v-1)
//! [[1,2],[3,5]]
//! [[2,3],[4,6]]
//! ```
//!
//! Header lines are `key value...` and must precede the first block. Each
//! block is one line holding `u` bracketed groups of `c` labels. Labels are
//! runs of ASCII letters, digits, `_`, `-` or `.`; whitespace around brackets
//! and commas is ignored. The `points` line fixes the dense order of labels.

use std::fmt::Write as _;

use crate::design::{check_block, Block, DesignParams, Labels, SplittingDesign};
use crate::error::{ParseError, Result};

/// A parsed design file: the declared parameters plus the blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignFile {
    pub params: DesignParams,
    pub design: SplittingDesign,
}

pub(crate) fn is_label_char(ch: char) -> bool {
    ch.is_ascii_alphanumeric() || matches!(ch, '_' | '-' | '.')
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor {
            chars: text.char_indices().peekable(),
            line,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.chars.next() {
            Some((_, c)) if c == want => Ok(()),
            Some((_, c)) => Err(ParseError::at(
                self.line,
                format!("expected `{want}`, found `{c}`"),
            )),
            None => Err(ParseError::at(
                self.line,
                format!("expected `{want}`, found end of line"),
            )),
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn label(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let mut s = String::new();
        while let Some((_, c)) = self.chars.next_if(|&(_, c)| is_label_char(c)) {
            s.push(c);
        }
        if s.is_empty() {
            return Err(ParseError::at(self.line, "expected a point label"));
        }
        Ok(s)
    }

    /// `[` item (`,` item)* `]`
    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.expect('[')?;
        let mut out = vec![item(self)?];
        loop {
            match self.peek() {
                Some(',') => {
                    self.chars.next();
                    out.push(item(self)?);
                }
                Some(']') => {
                    self.chars.next();
                    return Ok(out);
                }
                Some(c) => return Err(ParseError::at(self.line, format!("unexpected `{c}`"))),
                None => return Err(ParseError::at(self.line, "unterminated list")),
            }
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(ParseError::at(
                self.line,
                format!("trailing `{c}` after block"),
            )),
        }
    }
}

fn header_value(line: usize, key: &str, rest: &[&str]) -> Result<u64, ParseError> {
    match rest {
        [one] => one
            .parse::<u64>()
            .map_err(|_| ParseError::at(line, format!("`{key}` expects a non-negative integer"))),
        _ => Err(ParseError::at(
            line,
            format!("`{key}` expects exactly one value"),
        )),
    }
}

struct Header {
    fields: [Option<u64>; 6],
    point_names: Option<Vec<String>>,
    raw_blocks: Vec<(usize, Vec<Vec<String>>)>,
    end: usize,
}

const KEYS: [&str; 6] = ["t", "v", "b", "lambda", "c", "u"];

impl Header {
    fn need(&self, i: usize) -> Result<u64, ParseError> {
        self.fields[i]
            .ok_or_else(|| ParseError::at(self.end, format!("missing header `{}`", KEYS[i])))
    }

    fn params(&self) -> Result<DesignParams> {
        let (t, v, lambda, c, u) = (
            self.need(0)?,
            self.need(1)?,
            self.need(3)?,
            self.need(4)?,
            self.need(5)?,
        );
        DesignParams::new(t, v, c, u, lambda)
            .map_err(|e| ParseError::at(self.end, e.to_string()).into())
    }
}

/// Reads the `key value` header of a design file. Block lines must be
/// well formed but are not checked against the header. `b` is carried
/// through when present.
pub fn parse_params(text: &str) -> Result<DesignParams> {
    let header = scan(text)?;
    let params = header.params()?;
    match header.fields[2] {
        Some(b) => params.with_blocks(b),
        None => Ok(params),
    }
}

fn scan(text: &str) -> Result<Header> {
    let mut fields: [Option<u64>; 6] = [None; 6];
    let mut point_names: Option<Vec<String>> = None;
    let mut raw_blocks: Vec<(usize, Vec<Vec<String>>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        if body.starts_with('[') {
            let mut cur = Cursor::new(body, line);
            let groups = cur.list(|c| c.list(|c| c.label()))?;
            cur.finish()?;
            raw_blocks.push((line, groups));
            continue;
        }
        if !raw_blocks.is_empty() {
            return Err(ParseError::at(line, "header line after the first block").into());
        }
        let mut words = body.split_whitespace();
        let key = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();
        if key == "points" {
            if point_names.is_some() {
                return Err(ParseError::at(line, "duplicate `points` line").into());
            }
            if let Some(bad) = rest.iter().find(|w| !w.chars().all(is_label_char)) {
                return Err(ParseError::at(line, format!("invalid label `{bad}`")).into());
            }
            point_names = Some(rest.iter().map(|s| s.to_string()).collect());
            continue;
        }
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| ParseError::at(line, format!("unknown header key `{key}`")))?;
        if fields[slot].is_some() {
            return Err(ParseError::at(line, format!("duplicate `{key}`")).into());
        }
        fields[slot] = Some(header_value(line, key, &rest)?);
    }

    let end = text.lines().count().max(1);
    Ok(Header {
        fields,
        point_names,
        raw_blocks,
        end,
    })
}

pub fn parse_design(text: &str) -> Result<DesignFile> {
    let header = scan(text)?;
    let params = header.params()?;
    let Header {
        fields,
        point_names,
        raw_blocks,
        end,
    } = header;
    let (v, c, u) = (params.v, params.c, params.u);

    let labels = match point_names {
        Some(names) => {
            if names.len() as u64 != v {
                return Err(ParseError::at(
                    end,
                    format!("`points` lists {} labels but v = {v}", names.len()),
                )
                .into());
            }
            Labels::new(names).map_err(|e| ParseError::at(end, e.to_string()))?
        }
        None => Labels::numeric(v as usize),
    };

    let mut blocks = Vec::with_capacity(raw_blocks.len());
    for (line, groups) in raw_blocks {
        let mut sub_blocks = Vec::with_capacity(groups.len());
        for g in &groups {
            let pts = labels
                .resolve(g)
                .map_err(|e| ParseError::at(line, e.to_string()))?;
            sub_blocks.push(pts);
        }
        let block = Block::new(sub_blocks);
        check_block(&block, &labels, c as usize, u as usize)
            .map_err(|m| ParseError::at(line, m))?;
        blocks.push(block);
    }
    if blocks.is_empty() {
        return Err(ParseError::at(end, "no blocks").into());
    }
    let params = match fields[2] {
        Some(b) if b != blocks.len() as u64 => {
            return Err(ParseError::at(
                end,
                format!(
                    "header declares b = {b} but file has {} blocks",
                    blocks.len()
                ),
            )
            .into());
        }
        _ => params.with_blocks(blocks.len() as u64)?,
    };
    let design = SplittingDesign::with_labels(labels, c as usize, u as usize, blocks)?;
    Ok(DesignFile { params, design })
}

/// Writes a design file. `params.b` is replaced by the actual block count.
pub fn format_design(design: &SplittingDesign, t: u64, lambda: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "t {t}");
    let _ = writeln!(out, "v {}", design.v());
    let _ = writeln!(out, "b {}", design.b());
    let _ = writeln!(out, "lambda {lambda}");
    let _ = writeln!(out, "c {}", design.c());
    let _ = writeln!(out, "u {}", design.u());
    if !design.labels().is_numeric() {
        let _ = writeln!(out, "points {}", design.labels().names().join(" "));
    }
    for block in design.blocks() {
        out.push_str(&design.display_block(block));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const SMALL: &str = "t 2\nv 9\nlambda 1\nc 2\nu 2\npoints 1 2 3 4 5 6 7 8 9\n[[1,2],[3,5]]\n[ [ 2 , 3 ] , [4,6] ]\n";

    #[test]
    fn parses_labels_and_whitespace() {
        let f = parse_design(SMALL).unwrap();
        assert_eq!(f.params.b, Some(2));
        assert_eq!(f.design.blocks()[1].sub_blocks(), &[vec![1, 2], vec![3, 5]]);
        assert_eq!(f.design.labels().name(0), "1");
    }

    fn err_line(text: &str) -> usize {
        match parse_design(text) {
            Err(Error::Parse(p)) => p.line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(err_line("t 2\nv 9\nlambda 1\nc 2\nu 2\n[[0,1],[0,2]]\n"), 6);
        assert_eq!(err_line("t 2\nv 9\nlambda 1\nc 2\nu 2\n[[0,1],[2,3]\n"), 6);
        assert_eq!(err_line("t 2\nv 9\nlambda 1\nc 2\nu 2\n[[0,1],[2,9]]\n"), 6);
        assert_eq!(
            err_line("t 2\nv 9\nlambda 1\nc 2\nu 2\n[[0,1],[2,3,4]]\n"),
            6
        );
        assert_eq!(err_line("t 2\nv 9\nlambda 1\nc 2\n[[0,1],[2,3]]\n"), 5);
        assert_eq!(
            err_line("t 2\nv 9\nb 3\nlambda 1\nc 2\nu 2\n[[0,1],[2,3]]\n"),
            7
        );
        assert_eq!(
            err_line("t 2\nv 9\nlambda 1\nc 2\nu 2\n[[0,1],[2,3]]\nt 3\n"),
            7
        );
        assert_eq!(
            err_line("t 2\nv 9\nlambda 1\nc 2\nu 2\n[[0,1],[2,3]] x\n"),
            6
        );
    }

    #[test]
    fn format_then_parse_is_identity() {
        let f = parse_design(SMALL).unwrap();
        let text = format_design(&f.design, 2, 1);
        let g = parse_design(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(format_design(&g.design, 2, 1), text);
    }

    #[test]
    fn params_from_header_only() {
        let p = parse_params("t 3\nv 10\nb 15\nlambda 1\nc 2\nu 3\n[[1,2],[3,4],[5,6]]\n").unwrap();
        assert_eq!(p.to_string(), "3-(10,15,6=2x3,1)");
        let p = parse_params("t 2\nv 9\nlambda 1\nc 2\nu 2\n").unwrap();
        assert_eq!(p.b, None);
        assert!(parse_params("t 2\nv 9\nc 2\n").is_err());
    }
}
