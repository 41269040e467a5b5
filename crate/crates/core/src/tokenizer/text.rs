use super::{DecodeError, Token, TokenStream, Vocabulary};
use crate::num::format_number;

/// Text form: markers written as `<|name|>` with no separator, consecutive
/// literals separated by one space, text literals as JSON strings.
pub fn render_text(tokens: &[Token]) -> String {
    let mut out = String::new();
    let mut prev_literal = false;
    for token in tokens {
        let literal = token.is_literal();
        if literal && prev_literal {
            out.push(' ');
        }
        match token {
            Token::Structural(name) => {
                out.push_str("<|");
                out.push_str(name);
                out.push_str("|>");
            }
            Token::Numeric(x) => out.push_str(&format_number(*x)),
            Token::Text(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        }
        prev_literal = literal;
    }
    out
}

/// Inverse of [`render_text`]; accepts any whitespace between tokens.
pub fn parse_text(text: &str) -> Result<TokenStream, DecodeError> {
    let vocab = Vocabulary::get();
    let mut tokens = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let malformed = |message: String| DecodeError::Malformed {
            position: tokens.len(),
            message,
        };
        if let Some(body) = rest.strip_prefix("<|") {
            let end = body.find("|>").ok_or_else(|| malformed("unterminated marker".into()))?;
            let name = &body[..end];
            let interned = vocab
                .intern(name)
                .ok_or_else(|| malformed(format!("unknown marker <|{name}|>")))?;
            tokens.push(Token::Structural(interned));
            rest = &body[end + 2..];
        } else if rest.starts_with('"') {
            let end = string_end(rest).ok_or_else(|| malformed("unterminated string".into()))?;
            let s: String = serde_json::from_str(&rest[..end]).map_err(|e| malformed(format!("bad string: {e}")))?;
            tokens.push(Token::Text(s));
            rest = &rest[end..];
        } else {
            let end = rest
                .find(|c: char| c.is_whitespace() || c == '<' || c == '"')
                .unwrap_or(rest.len());
            let word = &rest[..end];
            match word.parse::<f64>() {
                Ok(x) if x.is_finite() && word.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) => {
                    tokens.push(Token::Numeric(x))
                }
                _ => return Err(malformed(format!("unexpected literal {word:?}"))),
            }
            rest = &rest[end..];
        }
        rest = rest.trim_start();
    }
    Ok(tokens)
}

/// Byte offset just past the closing quote of the JSON string at the
/// start of `text`.
fn string_end(text: &str) -> Option<usize> {
    let mut escaped = false;
    for (i, c) in text.char_indices().skip(1) {
        match (escaped, c) {
            (true, _) => escaped = false,
            (false, '\\') => escaped = true,
            (false, '"') => return Some(i + 1),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    const META: &str = r#"<|M|><|v|>"5.9.5"<|fr|>30<|ip|>0<|op|>90<|w|>512<|h|>512<|ddd|>0"#;
    const PATH: &str = "<|ITEM_sh|><|KS_STATIC|><|i|>0 0 -10 5<|o|>0 0 10 -5<|v|>100 50 150 75<|c|>";

    #[test]
    fn empty_roundtrip() {
        assert_eq!(render_text(&[]), "");
        assert!(parse_text("").unwrap().is_empty());
        assert!(parse_text("  \n ").unwrap().is_empty());
    }

    #[test]
    fn reproduces_printed_examples() {
        for text in [META, PATH] {
            let tokens = parse_text(text).unwrap();
            assert_eq!(render_text(&tokens), text);
        }
        let tokens = parse_text(META).unwrap();
        assert_eq!(tokens[2], Token::Text("5.9.5".into()));
        assert_eq!(tokens[4], Token::Numeric(30.0));
    }

    #[test]
    fn accepts_spaced_form() {
        let spaced = r#"<|M|> <|v|> "5.9.5" <|fr|> 30 <|ip|> 0 <|op|> 90 <|w|> 512 <|h|> 512 <|ddd|> 0"#;
        assert_eq!(parse_text(spaced).unwrap(), parse_text(META).unwrap());
    }

    #[test]
    fn rejects_unknown_markers_and_words() {
        assert!(matches!(parse_text("<|bogus|>"), Err(DecodeError::Malformed { .. })));
        assert!(matches!(parse_text("<|PAD_0|>"), Err(DecodeError::Malformed { .. })));
        assert!(matches!(parse_text("<|t|>abc"), Err(DecodeError::Malformed { .. })));
        assert!(matches!(parse_text("<|t|>inf"), Err(DecodeError::Malformed { .. })));
        assert!(matches!(parse_text("<|v|>\"open"), Err(DecodeError::Malformed { .. })));
        assert!(matches!(parse_text("<|M"), Err(DecodeError::Malformed { .. })));
    }

    #[test]
    fn escapes_text() {
        let tokens = vec![Token::Text("say \"hi\"\n<|M|>".into()), Token::Numeric(-0.25), Token::Numeric(1e-7)];
        let text = render_text(&tokens);
        assert_eq!(parse_text(&text).unwrap(), tokens);
    }
}
