use serde::{Deserialize, Serialize};

use super::comment::strip_comments;
use super::label::{label_loop, LabelSet};
use super::pragma::{parse_pragma, Pragma};
use super::token::{tokenize, Token, TokenKind};
use super::CfrontError;

/// An extracted outermost for-loop.
#[derive(Debug, Clone)]
pub struct SourceLoop {
    /// File path plus ordinal, e.g. "kernels.c#2".
    pub id: String,
    /// Comment-stripped loop source including the body.
    pub text: String,
    pub pragma: Option<Pragma>,
    pub labels: LabelSet,
    pub has_function_call: bool,
    pub is_nested: bool,
    /// Non-blank lines of the loop text.
    pub loc: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopDiagnostic {
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Default)]
pub struct Extraction {
    pub loops: Vec<SourceLoop>,
    pub diagnostics: Vec<LoopDiagnostic>,
}

/// JSONL schema for extracted loops, shared across the pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoopRecord {
    pub id: String,
    pub text: String,
    pub pragma_raw: Option<String>,
    pub labels: LabelSet,
    pub has_function_call: bool,
    pub is_nested: bool,
    pub loc: u32,
}

impl From<&SourceLoop> for LoopRecord {
    fn from(l: &SourceLoop) -> Self {
        LoopRecord {
            id: l.id.clone(),
            text: l.text.clone(),
            pragma_raw: l.pragma.as_ref().map(|p| p.raw.clone()),
            labels: l.labels,
            has_function_call: l.has_function_call,
            is_nested: l.is_nested,
            loc: l.loc,
        }
    }
}

struct PragmaLine {
    /// Byte offset of the start of the pragma's line.
    line_start: usize,
    raw: String,
}

/// Extract every outermost for-loop of a source file, in file order, with
/// any immediately preceding `#pragma omp` line attached. Nested for-loops
/// are folded into their outermost loop (`is_nested`) rather than emitted.
/// Loops with unbalanced delimiters are skipped with a diagnostic.
pub fn extract_loops(source: &str, file_id: &str) -> Result<Extraction, CfrontError> {
    let stripped = strip_comments(source)?;
    let (blanked, pragmas) = blank_directives(&stripped);
    let tokens = tokenize(&blanked)?;
    let line_starts = line_start_offsets(&blanked);
    let offset_of = |t: &Token| -> usize {
        let line_start = line_starts[(t.line - 1) as usize];
        // Columns count characters; directive blanking keeps them ASCII-safe
        // only where the original was ASCII, so walk chars to be exact.
        blanked[line_start..]
            .char_indices()
            .nth((t.col - 1) as usize)
            .map(|(i, _)| line_start + i)
            .unwrap_or(line_start)
    };

    let mut out = Extraction::default();
    let mut i = 0usize;
    while i < tokens.len() {
        let t = &tokens[i];
        if !(t.kind == TokenKind::Keyword && t.text == "for") {
            i += 1;
            continue;
        }
        match for_statement_extent(&tokens, i) {
            Err(message) => {
                out.diagnostics.push(LoopDiagnostic {
                    line: t.line,
                    message,
                });
                i += 1;
            }
            Ok(end) => {
                let start_byte = offset_of(&tokens[i]);
                let end_tok = &tokens[end];
                let end_byte = offset_of(end_tok) + end_tok.text.chars().count();
                let text = blanked[start_byte..end_byte].to_string();

                let pragma = attach_pragma(&pragmas, &blanked, start_byte, &mut out.diagnostics);
                let labels = label_loop(pragma.as_ref());
                let span = &tokens[i..=end];
                let is_nested = span[1..]
                    .iter()
                    .any(|t| t.kind == TokenKind::Keyword && t.text == "for");
                let has_function_call = span
                    .windows(2)
                    .any(|w| w[0].kind == TokenKind::Identifier && w[1].text == "(");
                let loc = text.lines().filter(|l| !l.trim().is_empty()).count().max(1) as u32;

                out.loops.push(SourceLoop {
                    id: format!("{file_id}#{}", out.loops.len()),
                    text,
                    pragma,
                    labels,
                    has_function_call,
                    is_nested,
                    loc,
                });
                i = end + 1;
            }
        }
    }
    Ok(out)
}

/// The closest preceding pragma line binds to the loop if only whitespace
/// separates them (directive lines are blanked, so they scan as whitespace).
fn attach_pragma(
    pragmas: &[PragmaLine],
    blanked: &str,
    loop_start: usize,
    diagnostics: &mut Vec<LoopDiagnostic>,
) -> Option<Pragma> {
    let candidate = pragmas.iter().rfind(|p| {
        p.line_start < loop_start
            && blanked[p.line_start..loop_start]
                .chars()
                .all(char::is_whitespace)
    })?;
    match parse_pragma(&candidate.raw) {
        Ok(p) => Some(p),
        Err(e) => {
            let line = blanked[..candidate.line_start].matches('\n').count() as u32 + 1;
            diagnostics.push(LoopDiagnostic {
                line,
                message: e.to_string(),
            });
            None
        }
    }
}

/// Replace preprocessor directive lines with spaces, recording OpenMP pragma
/// lines. Offsets and line numbers are preserved exactly.
fn blank_directives(stripped: &str) -> (String, Vec<PragmaLine>) {
    let mut blanked = String::with_capacity(stripped.len());
    let mut pragmas = Vec::new();
    let mut line_start = 0usize;

    for line in stripped.split_inclusive('\n') {
        let body = line.strip_suffix('\n').unwrap_or(line);
        if body.trim_start().starts_with('#') {
            let trimmed = body.trim();
            let mut words = trimmed[1..].split_whitespace();
            if words.next() == Some("pragma") && words.next() == Some("omp") {
                pragmas.push(PragmaLine {
                    line_start,
                    raw: trimmed.to_string(),
                });
            }
            for c in body.chars() {
                blanked.push(if c == '\t' { '\t' } else { ' ' });
            }
            if line.ends_with('\n') {
                blanked.push('\n');
            }
        } else {
            blanked.push_str(line);
        }
        line_start += line.len();
    }
    (blanked, pragmas)
}

fn line_start_offsets(text: &str) -> Vec<usize> {
    let mut starts = vec![0usize];
    for (i, b) in text.bytes().enumerate() {
        if b == b'\n' {
            starts.push(i + 1);
        }
    }
    starts
}

/// Index of the last token of the for-statement starting at `start`
/// (which must be the `for` keyword).
fn for_statement_extent(tokens: &[Token], start: usize) -> Result<usize, String> {
    let after_header = match_paren_group(tokens, start + 1)?;
    statement_extent(tokens, after_header)
}

/// Expects `tokens[open]` to be `(`; returns the index just past the
/// matching `)`.
fn match_paren_group(tokens: &[Token], open: usize) -> Result<usize, String> {
    if tokens.get(open).map(|t| t.text.as_str()) != Some("(") {
        return Err("expected '(' after loop keyword".into());
    }
    let mut depth = 0i32;
    for (k, t) in tokens.iter().enumerate().skip(open) {
        match t.text.as_str() {
            "(" => depth += 1,
            ")" => {
                depth -= 1;
                if depth == 0 {
                    return Ok(k + 1);
                }
            }
            _ => {}
        }
    }
    Err("unbalanced parentheses in loop header".into())
}

/// Index of the last token of the statement starting at `start`.
fn statement_extent(tokens: &[Token], start: usize) -> Result<usize, String> {
    let t = tokens
        .get(start)
        .ok_or("unexpected end of file in statement")?;
    match (t.kind, t.text.as_str()) {
        (TokenKind::Separator, "{") => {
            let mut depth = 0i32;
            for (k, t) in tokens.iter().enumerate().skip(start) {
                match t.text.as_str() {
                    "{" => depth += 1,
                    "}" => {
                        depth -= 1;
                        if depth == 0 {
                            return Ok(k);
                        }
                    }
                    _ => {}
                }
            }
            Err("unbalanced braces".into())
        }
        (TokenKind::Separator, ";") => Ok(start),
        (TokenKind::Keyword, "for") | (TokenKind::Keyword, "while") => {
            let after = match_paren_group(tokens, start + 1)?;
            statement_extent(tokens, after)
        }
        (TokenKind::Keyword, "if") => {
            let after = match_paren_group(tokens, start + 1)?;
            let then_end = statement_extent(tokens, after)?;
            match tokens.get(then_end + 1) {
                Some(t) if t.kind == TokenKind::Keyword && t.text == "else" => {
                    statement_extent(tokens, then_end + 2)
                }
                _ => Ok(then_end),
            }
        }
        _ => {
            // Expression or declaration: runs to the first ';' outside any
            // bracketing.
            let mut depth = 0i32;
            for (k, t) in tokens.iter().enumerate().skip(start) {
                match t.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        depth -= 1;
                        if depth < 0 {
                            return Err("unbalanced delimiters in statement".into());
                        }
                    }
                    ";" if depth == 0 => return Ok(k),
                    _ => {}
                }
            }
            Err("statement not terminated by ';'".into())
        }
    }
}
