use super::CfrontError;

/// Remove C comments. Block comments become a single space so adjacent
/// tokens cannot fuse; line comments are dropped outright (the newline that
/// ends them is kept, so line counts survive). String and character
/// literals are never altered.
pub fn strip_comments(source: &str) -> Result<String, CfrontError> {
    let mut out = String::with_capacity(source.len());
    let mut chars = source.chars().peekable();
    let mut line: u32 = 1;

    while let Some(c) = chars.next() {
        match c {
            '/' if chars.peek() == Some(&'/') => {
                chars.next();
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '/' if chars.peek() == Some(&'*') => {
                chars.next();
                let open_line = line;
                let mut closed = false;
                while let Some(c) = chars.next() {
                    if c == '\n' {
                        line += 1;
                    } else if c == '*' && chars.peek() == Some(&'/') {
                        chars.next();
                        closed = true;
                        break;
                    }
                }
                if !closed {
                    return Err(CfrontError::UnterminatedComment { line: open_line });
                }
                out.push(' ');
            }
            '"' | '\'' => {
                let quote = c;
                out.push(c);
                while let Some(c) = chars.next() {
                    out.push(c);
                    match c {
                        '\\' => {
                            if let Some(escaped) = chars.next() {
                                out.push(escaped);
                                if escaped == '\n' {
                                    line += 1;
                                }
                            }
                        }
                        '\n' => {
                            // A raw newline ends the literal in C; stop so a
                            // stray quote cannot swallow the rest of the file.
                            line += 1;
                            break;
                        }
                        _ if c == quote => break,
                        _ => {}
                    }
                }
            }
            '\n' => {
                line += 1;
                out.push(c);
            }
            _ => out.push(c),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_comment_removed() {
        assert_eq!(strip_comments("a; // x").unwrap(), "a; ");
    }

    #[test]
    fn block_comment_becomes_space() {
        assert_eq!(strip_comments("a;/*b*/c;").unwrap(), "a; c;");
    }

    #[test]
    fn string_literals_protected() {
        let src = "s = \"/*not a comment*/\";";
        assert_eq!(strip_comments(src).unwrap(), src);
        let src2 = "s = \"// nope\"; t = 1;";
        assert_eq!(strip_comments(src2).unwrap(), src2);
    }

    #[test]
    fn line_comment_keeps_newline() {
        let src = "a; // x\nb;";
        assert_eq!(strip_comments(src).unwrap(), "a; \nb;");
    }

    #[test]
    fn multiline_block_comment() {
        assert_eq!(strip_comments("a;/* x\n y */b;").unwrap(), "a; b;");
    }

    #[test]
    fn unterminated_block_comment_names_line() {
        let err = strip_comments("a;\nb; /* open").unwrap_err();
        match err {
            CfrontError::UnterminatedComment { line } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn escaped_quote_inside_string() {
        let src = r#"s = "a\"/*x*/"; t;"#;
        assert_eq!(strip_comments(src).unwrap(), src);
    }
}
