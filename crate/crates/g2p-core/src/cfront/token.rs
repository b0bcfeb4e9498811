use serde::{Deserialize, Serialize};

use super::CfrontError;

/// Reserved words of the restricted subset.
pub const KEYWORDS: [&str; 13] = [
    "break", "char", "continue", "double", "else", "float", "for", "if", "int", "long", "return",
    "unsigned", "while",
];

/// Type keywords, the subset of [`KEYWORDS`] that can open a declaration.
pub const TYPE_KEYWORDS: [&str; 6] = ["char", "double", "float", "int", "long", "unsigned"];

/// Multi-character operators, matched greedily before single characters.
const MULTI_OPS: [&str; 13] = [
    "++", "--", "+=", "-=", "*=", "/=", "==", "!=", "<=", ">=", "&&", "||", "->",
];

const SINGLE_OPS: &str = "+-*/%=<>!&|^~?:.";
const SEPARATORS: &str = "(){}[];,#";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Identifier,
    Keyword,
    IntConstant,
    FloatConstant,
    StringLiteral,
    Operator,
    Separator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based source line.
    pub line: u32,
    /// 1-based column, in characters.
    pub col: u32,
}

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

struct Scanner<'a> {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    source: std::marker::PhantomData<&'a str>,
}

impl Scanner<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

/// Greedy maximal-munch tokenization. Comments must already be stripped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, CfrontError> {
    let mut s = Scanner {
        chars: source.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
        source: std::marker::PhantomData,
    };
    let mut tokens = Vec::new();

    while let Some(c) = s.peek() {
        if c.is_whitespace() {
            s.bump();
            continue;
        }
        let (line, col) = (s.line, s.col);

        if c.is_ascii_alphabetic() || c == '_' {
            let mut text = String::new();
            while let Some(c) = s.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    text.push(c);
                    s.bump();
                } else {
                    break;
                }
            }
            let kind = if is_keyword(&text) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            tokens.push(Token {
                kind,
                text,
                line,
                col,
            });
            continue;
        }

        if c.is_ascii_digit() || (c == '.' && s.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
            tokens.push(scan_number(&mut s, line, col));
            continue;
        }

        if c == '"' || c == '\'' {
            tokens.push(scan_literal(&mut s, c, line, col)?);
            continue;
        }

        // Multi-character operators first: maximal munch.
        if let Some(next) = s.peek_at(1) {
            let pair: String = [c, next].iter().collect();
            if MULTI_OPS.contains(&pair.as_str()) {
                s.bump();
                s.bump();
                tokens.push(Token {
                    kind: TokenKind::Operator,
                    text: pair,
                    line,
                    col,
                });
                continue;
            }
        }

        if SINGLE_OPS.contains(c) {
            s.bump();
            tokens.push(Token {
                kind: TokenKind::Operator,
                text: c.to_string(),
                line,
                col,
            });
            continue;
        }
        if SEPARATORS.contains(c) {
            s.bump();
            tokens.push(Token {
                kind: TokenKind::Separator,
                text: c.to_string(),
                line,
                col,
            });
            continue;
        }

        return Err(CfrontError::UnrecognizedByte { ch: c, line, col });
    }
    Ok(tokens)
}

fn scan_number(s: &mut Scanner, line: u32, col: u32) -> Token {
    let mut text = String::new();
    let mut is_float = false;

    // Hex constants: no fractional part in this subset.
    if s.peek() == Some('0') && matches!(s.peek_at(1), Some('x') | Some('X')) {
        text.push(s.bump().unwrap());
        text.push(s.bump().unwrap());
        while let Some(c) = s.peek() {
            if c.is_ascii_hexdigit() {
                text.push(c);
                s.bump();
            } else {
                break;
            }
        }
    } else {
        while let Some(c) = s.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                s.bump();
            } else {
                break;
            }
        }
        if s.peek() == Some('.') {
            is_float = true;
            text.push('.');
            s.bump();
            while let Some(c) = s.peek() {
                if c.is_ascii_digit() {
                    text.push(c);
                    s.bump();
                } else {
                    break;
                }
            }
        }
        if matches!(s.peek(), Some('e') | Some('E')) {
            let mut lookahead = 1;
            if matches!(s.peek_at(1), Some('+') | Some('-')) {
                lookahead = 2;
            }
            if s.peek_at(lookahead).is_some_and(|c| c.is_ascii_digit()) {
                is_float = true;
                for _ in 0..lookahead {
                    text.push(s.bump().unwrap());
                }
                while let Some(c) = s.peek() {
                    if c.is_ascii_digit() {
                        text.push(c);
                        s.bump();
                    } else {
                        break;
                    }
                }
            }
        }
    }

    // Literal suffixes stay attached to the constant.
    while let Some(c) = s.peek() {
        if matches!(c, 'f' | 'F' | 'l' | 'L' | 'u' | 'U') {
            if matches!(c, 'f' | 'F') {
                is_float = true;
            }
            text.push(c);
            s.bump();
        } else {
            break;
        }
    }

    let kind = if is_float {
        TokenKind::FloatConstant
    } else {
        TokenKind::IntConstant
    };
    Token {
        kind,
        text,
        line,
        col,
    }
}

fn scan_literal(s: &mut Scanner, quote: char, line: u32, col: u32) -> Result<Token, CfrontError> {
    let mut text = String::new();
    text.push(s.bump().unwrap());
    loop {
        match s.bump() {
            None => return Err(CfrontError::UnterminatedString { line, col }),
            Some('\n') => return Err(CfrontError::UnterminatedString { line, col }),
            Some('\\') => {
                text.push('\\');
                match s.bump() {
                    Some(escaped) => text.push(escaped),
                    None => return Err(CfrontError::UnterminatedString { line, col }),
                }
            }
            Some(c) => {
                text.push(c);
                if c == quote {
                    break;
                }
            }
        }
    }
    Ok(Token {
        kind: TokenKind::StringLiteral,
        text,
        line,
        col,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text.as_str()).collect()
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").unwrap().is_empty());
    }

    #[test]
    fn hand_counted_for_loop_has_20_tokens() {
        let tokens = tokenize("for (i = 0; i < 10; i++) sum += a[i];").unwrap();
        assert_eq!(tokens.len(), 20);
        assert_eq!(tokens[0].kind, TokenKind::Keyword);
        assert_eq!(tokens[11].text, "++");
        assert_eq!(tokens[14].text, "+=");
    }

    #[test]
    fn maximal_munch() {
        let tokens = tokenize("x-->y").unwrap();
        assert_eq!(texts(&tokens), vec!["x", "--", ">", "y"]);
    }

    #[test]
    fn arrow_and_member() {
        let tokens = tokenize("p->q.r").unwrap();
        assert_eq!(texts(&tokens), vec!["p", "->", "q", ".", "r"]);
    }

    #[test]
    fn numbers() {
        let tokens = tokenize("1 2.5 .5 1e3 1.0f 0x1F 10.").unwrap();
        let kinds: Vec<TokenKind> = tokens.iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            vec![
                TokenKind::IntConstant,
                TokenKind::FloatConstant,
                TokenKind::FloatConstant,
                TokenKind::FloatConstant,
                TokenKind::FloatConstant,
                TokenKind::IntConstant,
                TokenKind::FloatConstant,
            ]
        );
    }

    #[test]
    fn unrecognized_byte_reports_position() {
        let err = tokenize("a = b;\n  @").unwrap_err();
        match err {
            CfrontError::UnrecognizedByte { ch, line, col } => {
                assert_eq!(ch, '@');
                assert_eq!((line, col), (2, 3));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn positions_strictly_increase() {
        let tokens = tokenize("a = 1;\nb = a + 2;").unwrap();
        for pair in tokens.windows(2) {
            assert!((pair[0].line, pair[0].col) < (pair[1].line, pair[1].col));
        }
    }

    #[test]
    fn rejoin_round_trip() {
        let original = tokenize("for (i = 0; i < 10; i++) s += \"a b\";").unwrap();
        let joined: Vec<String> = original.iter().map(|t| t.text.clone()).collect();
        let again = tokenize(&joined.join(" ")).unwrap();
        let pairs = |ts: &[Token]| {
            ts.iter()
                .map(|t| (t.kind, t.text.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(pairs(&original), pairs(&again));
    }
}
