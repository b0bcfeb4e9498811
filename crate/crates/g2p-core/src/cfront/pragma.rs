use serde::{Deserialize, Serialize};

use super::CfrontError;

/// Words that can form the directive part of a loop-related OpenMP pragma.
/// Anything after the directive prefix is treated as a clause.
const DIRECTIVE_WORDS: [&str; 7] = [
    "parallel",
    "for",
    "simd",
    "target",
    "teams",
    "distribute",
    "loop",
];

/// Clause names we recognize; anything else is retained under "unknown".
const KNOWN_CLAUSES: [&str; 22] = [
    "private",
    "firstprivate",
    "lastprivate",
    "shared",
    "reduction",
    "schedule",
    "collapse",
    "num_threads",
    "default",
    "nowait",
    "ordered",
    "if",
    "map",
    "device",
    "simdlen",
    "safelen",
    "linear",
    "aligned",
    "copyin",
    "copyprivate",
    "proc_bind",
    "untied",
];

const REDUCTION_OPS: [&str; 10] = ["+", "*", "-", "&", "|", "^", "&&", "||", "min", "max"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directive {
    OmpFor,
    OmpParallelFor,
    OmpSimd,
    OmpTarget,
    OtherOmp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseArg {
    pub operator: Option<String>,
    pub variable: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    /// Lowercased clause name; "unknown" for unrecognized clauses.
    pub name: String,
    pub args: Vec<ClauseArg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pragma {
    pub raw: String,
    pub directive: Directive,
    /// The directive words as written, e.g. ["parallel", "for", "simd"].
    pub directive_words: Vec<String>,
    pub clauses: Vec<Clause>,
}

/// Parse one `#pragma omp ...` line.
pub fn parse_pragma(raw: &str) -> Result<Pragma, CfrontError> {
    let words = split_words(raw);
    let not_omp = || CfrontError::NotOmpPragma {
        raw: raw.trim().to_string(),
    };

    let mut iter = words.iter().peekable();
    if iter.next().map(String::as_str) != Some("#") {
        return Err(not_omp());
    }
    if iter.next().map(|w| w.to_lowercase()).as_deref() != Some("pragma") {
        return Err(not_omp());
    }
    if iter.next().map(|w| w.to_lowercase()).as_deref() != Some("omp") {
        return Err(not_omp());
    }

    let mut directive_words = Vec::new();
    while let Some(word) = iter.peek() {
        let lower = word.to_lowercase();
        if DIRECTIVE_WORDS.contains(&lower.as_str()) {
            directive_words.push(lower);
            iter.next();
        } else {
            break;
        }
    }

    let mut clauses = Vec::new();
    while let Some(word) = iter.next() {
        if word == "(" || word == ")" {
            // Stray parenthesis; skip rather than fail on odd formatting.
            continue;
        }
        let name = word.to_lowercase();
        let mut body = Vec::new();
        if iter.peek().map(|w| w.as_str()) == Some("(") {
            iter.next();
            let mut depth = 1usize;
            for inner in iter.by_ref() {
                match inner.as_str() {
                    "(" => depth += 1,
                    ")" => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                if depth > 0 {
                    body.push(inner.clone());
                }
            }
        }
        clauses.push(build_clause(&name, &body)?);
    }

    let directive = classify_directive(&directive_words);
    Ok(Pragma {
        raw: raw.trim().to_string(),
        directive,
        directive_words,
        clauses,
    })
}

fn classify_directive(words: &[String]) -> Directive {
    let has = |w: &str| words.iter().any(|x| x == w);
    if has("parallel") && has("for") {
        Directive::OmpParallelFor
    } else if has("for") {
        Directive::OmpFor
    } else if has("simd") {
        Directive::OmpSimd
    } else if has("target") {
        Directive::OmpTarget
    } else {
        Directive::OtherOmp
    }
}

fn build_clause(name: &str, body: &[String]) -> Result<Clause, CfrontError> {
    if name == "reduction" {
        let colon =
            body.iter()
                .position(|w| w == ":")
                .ok_or_else(|| CfrontError::BadReductionClause {
                    detail: "missing ':' separator".into(),
                })?;
        let op_words = &body[..colon];
        if op_words.len() != 1 || !REDUCTION_OPS.contains(&op_words[0].as_str()) {
            return Err(CfrontError::BadReductionClause {
                detail: format!("expected one operator, got {:?}", op_words.join(" ")),
            });
        }
        let vars: Vec<&String> = body[colon + 1..].iter().filter(|w| *w != ",").collect();
        if vars.is_empty() {
            return Err(CfrontError::BadReductionClause {
                detail: "no variables listed".into(),
            });
        }
        let args = vars
            .into_iter()
            .map(|v| ClauseArg {
                operator: Some(op_words[0].clone()),
                variable: v.clone(),
            })
            .collect();
        return Ok(Clause {
            name: name.into(),
            args,
        });
    }

    if KNOWN_CLAUSES.contains(&name) {
        let args = body
            .split(|w| w == ",")
            .filter(|group| !group.is_empty())
            .map(|group| ClauseArg {
                operator: None,
                variable: group.join(" "),
            })
            .collect();
        return Ok(Clause {
            name: name.into(),
            args,
        });
    }

    // Unknown clause: retained verbatim.
    let verbatim = if body.is_empty() {
        name.to_string()
    } else {
        format!("{}({})", name, body.join(" "))
    };
    Ok(Clause {
        name: "unknown".into(),
        args: vec![ClauseArg {
            operator: None,
            variable: verbatim,
        }],
    })
}

/// Split a pragma line into words, keeping parentheses, colons, commas and
/// operator glyphs as their own words.
fn split_words(raw: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut chars = raw.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut word = String::new();
            word.push(c);
            while let Some(&n) = chars.peek() {
                if n.is_ascii_alphanumeric() || n == '_' {
                    word.push(n);
                    chars.next();
                } else {
                    break;
                }
            }
            words.push(word);
        } else if (c == '&' && chars.peek() == Some(&'&'))
            || (c == '|' && chars.peek() == Some(&'|'))
        {
            chars.next();
            words.push([c, c].iter().collect());
        } else {
            words.push(c.to_string());
        }
    }
    words
}

impl Pragma {
    pub fn has_clause(&self, name: &str) -> bool {
        self.clauses.iter().any(|c| c.name == name)
    }

    pub fn any_clause_contains(&self, needle: &str) -> bool {
        self.clauses.iter().any(|c| c.name.contains(needle))
    }
}
