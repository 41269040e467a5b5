//! Compact token stream for Lottie documents.
//!
//! A document is written depth-first as structural markers (`<|LAYER|>`,
//! `<|p|>`, `<|PROP_ANIMATED|>`, ...) interleaved with numeric and text
//! literals. Animated properties store only their keyframes, so the stream
//! length depends on keyframe count and never on animation duration.
//! [`detokenize`] inverts [`tokenize`] up to canonical equality; the grammar
//! is described in `docs/format.md`.

mod decode;
mod encode;
mod text;
mod vocab;

use thiserror::Error;

use crate::model::Document;
use crate::num::format_number;

pub use crate::easing::ease_preset_lookup;
pub use decode::detokenize;
pub use encode::{tokenize, tokenize_with};
pub use text::{parse_text, render_text};
pub use vocab::{Vocabulary, PADDING_SIZE, PRESET_SLOTS, STRUCTURAL_SIZE};

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    /// Marker from the vocabulary.
    Structural(&'static str),
    Numeric(f64),
    Text(String),
}

impl Token {
    /// Structural token for `name`. Panics on names outside the vocabulary.
    pub fn tag(name: &str) -> Token {
        match Vocabulary::get().intern(name) {
            Some(n) => Token::Structural(n),
            None => panic!("`{name}` is not a structural token"),
        }
    }

    pub fn is_literal(&self) -> bool {
        !matches!(self, Token::Structural(_))
    }

    pub fn is_tag(&self, name: &str) -> bool {
        matches!(self, Token::Structural(n) if *n == name)
    }
}

pub type TokenStream = Vec<Token>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Round float literals to 4 significant digits.
    pub quantize: bool,
    /// Replace easing curves close to a catalog preset with one token.
    /// Lossy by up to the preset tolerance.
    pub presets: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TokenizeError {
    #[error("unsupported feature at {path}: {feature}")]
    Unsupported { path: String, feature: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("malformed stream at token {position}: {message}")]
    Malformed { position: usize, message: String },
    #[error("stream truncated at token {position}")]
    Truncated { position: usize },
}

/// How numeric literals are counted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CountMode {
    /// Every token, literals included, counts once.
    #[default]
    Literal,
    /// Numeric literals cost one token per character of their shortest
    /// decimal form (digits, sign, point, exponent), as a digit-level
    /// tokenizer would spend.
    Digits,
}

pub fn count_tokens(tokens: &[Token], mode: CountMode) -> usize {
    match mode {
        CountMode::Literal => tokens.len(),
        CountMode::Digits => tokens
            .iter()
            .map(|t| match t {
                Token::Numeric(x) => format_number(*x).len(),
                _ => 1,
            })
            .sum(),
    }
}

pub fn token_count(doc: &Document, quantize: bool) -> Result<usize, TokenizeError> {
    token_count_with(doc, EncodeOptions { quantize, presets: false }, CountMode::Literal)
}

pub fn token_count_with(doc: &Document, options: EncodeOptions, mode: CountMode) -> Result<usize, TokenizeError> {
    Ok(count_tokens(&tokenize_with(doc, options)?, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonical_equal, parse};

    #[test]
    fn digit_counting() {
        let tokens = vec![Token::tag("t"), Token::Numeric(-113.4), Token::Numeric(30.0), Token::Text("x".into())];
        assert_eq!(count_tokens(&tokens, CountMode::Literal), 4);
        assert_eq!(count_tokens(&tokens, CountMode::Digits), 1 + 6 + 2 + 1);
    }

    const MINIMAL: &str = r#"{"v":"5.9.5","fr":30,"ip":0,"op":90,"w":512,"h":512,"ddd":0,"layers":[]}"#;

    const SAMPLE: &str = r##"{"v":"5.9.5","fr":30,"ip":0,"op":90,"w":512,"h":512,"ddd":0,"nm":"s",
        "assets":[{"id":"comp_0","layers":[]},{"id":"img","w":10,"p":"a.png"}],
        "layers":[{"ty":4,"ind":1,"ip":0,"op":90,"st":0,"bm":0,"nm":"shape",
          "ks":{"r":{"a":1,"k":[
            {"t":30,"s":[-113.4],"o":{"x":[0.3],"y":[-2.79]},"i":{"x":[0.78],"y":[-1.79]}},
            {"t":46,"s":[-109.5]}]},
            "p":{"a":1,"k":[
              {"t":0,"s":[0,0],"o":{"x":0.333,"y":0},"i":{"x":0.667,"y":1}},
              {"t":10,"s":[5,5],"h":1},
              {"t":20,"s":[9,1],"o":{"x":[0.1,0.2],"y":[0,0]},"i":{"x":[0.9,0.8],"y":[1,1]}},
              {"t":30,"s":[0,0]}]}},
          "shapes":[{"ty":"gr","nm":"g","it":[
            {"ty":"sh","ks":{"a":0,"k":{"i":[[0,0],[-10,5]],"o":[[0,0],[10,-5]],"v":[[100,50],[150,75]],"c":true}}},
            {"ty":"sh","ks":{"a":1,"k":[
              {"t":0,"s":[{"i":[[0,0]],"o":[[0,0]],"v":[[1,2]],"c":false}],"o":{"x":0.5,"y":0.5},"i":{"x":0.5,"y":0.5}},
              {"t":5,"s":[{"i":[[0,0]],"o":[[0,0]],"v":[[3,4]],"c":false}]}]}},
            {"ty":"fl","c":{"a":0,"k":[0.2,0.4,0.6,1]},"o":{"a":0,"k":100},"r":1},
            {"ty":"st","c":{"a":0,"k":[0.123,0.5,0.9]},"o":{"a":0,"k":100},"w":{"a":0,"k":2},"lc":2,"lj":1,"ml":4},
            {"ty":"gf","o":{"a":0,"k":100},"s":{"a":0,"k":[0,0]},"e":{"a":0,"k":[10,0]},"t":1,
             "g":{"p":2,"k":{"a":0,"k":[0,1,0,0,1,0,0,1]}}},
            {"ty":"tr","p":{"a":0,"k":[0,0]},"a":{"a":0,"k":[0,0]},"s":{"a":0,"k":[100,100]},
             "r":{"a":0,"k":0,"x":"time*2"},"o":{"a":0,"k":100},"nm":"Transform"}]}]},
         {"ty":3,"ip":0,"op":90,"st":0,"bm":0,"ks":{},"meta":{"a":[1,2.5,null,true,"x"]}}]}"##;

    fn roundtrip(text: &str, options: EncodeOptions) {
        let doc = parse(text).unwrap();
        let tokens = tokenize_with(&doc, options).unwrap();
        let back = detokenize(&tokens).unwrap();
        assert!(canonical_equal(&doc, &back), "{}", render_text(&tokens));
        assert_eq!(parse_text(&render_text(&tokens)).unwrap(), tokens);
    }

    #[test]
    fn meta_block_matches_printed_form() {
        let doc = parse(MINIMAL).unwrap();
        let text = render_text(&tokenize(&doc, false).unwrap());
        assert_eq!(text, r#"<|M|><|v|>"5.9.5"<|fr|>30<|ip|>0<|op|>90<|w|>512<|h|>512<|ddd|>0<|M_END|>"#);
        assert!(!text.contains("<|LAYER|>"));
        assert_eq!(token_count(&doc, false).unwrap(), 16);
    }

    #[test]
    fn static_path_matches_printed_form() {
        let doc = parse(SAMPLE).unwrap();
        let text = render_text(&tokenize(&doc, false).unwrap());
        assert!(text.contains("<|ITEM_sh|><|KS_STATIC|><|i|>0 0 -10 5<|o|>0 0 10 -5<|v|>100 50 150 75<|c|>"));
    }

    #[test]
    fn keyframes_carry_easing_except_the_last() {
        let doc = parse(SAMPLE).unwrap();
        let text = render_text(&tokenize(&doc, false).unwrap());
        assert!(text.contains(
            "<|r|><|PROP_ANIMATED|><|PROP_KF_START|><|t|>30 -113.4<|ease|>0.78 -1.79 0.3 -2.79<|t|>46 -109.5<|PROP_KF_END|>"
        ));
        assert!(text.contains("<|t|>0 0 0<|ease|><|t|>10 5 5<|h|><|t|>20 9 1<|ease|>0.9 1 0.1 0 0.8 1 0.2 0<|t|>30 0 0<|PROP_KF_END|>"));
        assert!(text.contains("\"#336699\""));
    }

    #[test]
    fn roundtrips_sample() {
        roundtrip(MINIMAL, EncodeOptions::default());
        roundtrip(SAMPLE, EncodeOptions::default());
        roundtrip(SAMPLE, EncodeOptions { quantize: true, presets: false });
    }

    #[test]
    fn every_strict_prefix_is_truncated() {
        let tokens = tokenize(&parse(SAMPLE).unwrap(), false).unwrap();
        for len in 0..tokens.len() {
            assert!(
                matches!(detokenize(&tokens[..len]), Err(DecodeError::Truncated { .. })),
                "prefix of {len} tokens"
            );
        }
    }

    #[test]
    fn text_in_coordinates_is_malformed() {
        let mut tokens = tokenize(&parse(SAMPLE).unwrap(), false).unwrap();
        let at = tokens.iter().position(|t| t.is_tag("v")).unwrap();
        let at = at + tokens[at..].iter().skip(1).position(|t| t.is_tag("v")).unwrap() + 2;
        tokens[at] = Token::Text("1O0".into());
        assert!(matches!(detokenize(&tokens), Err(DecodeError::Malformed { .. })));
        let mut extra = tokenize(&parse(MINIMAL).unwrap(), false).unwrap();
        extra.push(Token::tag("LAYER"));
        assert!(matches!(detokenize(&extra), Err(DecodeError::Malformed { .. })));
    }

    #[test]
    fn presets_replace_matching_curves() {
        let doc = parse(&SAMPLE.replace(r#""x":0.5,"y":0.5},"i":{"x":0.5,"y":0.5}"#, r#""x":0.167,"y":0},"i":{"x":0.833,"y":1}"#))
            .unwrap();
        let plain = tokenize(&doc, false).unwrap();
        let options = EncodeOptions { quantize: false, presets: true };
        let preset = tokenize_with(&doc, options).unwrap();
        assert!(preset.contains(&Token::tag("EASE_4")));
        assert_eq!(plain.len(), preset.len() + 3);
        assert!(canonical_equal(&doc, &detokenize(&preset).unwrap()));
    }

    #[test]
    fn quantization_rounds_literals() {
        let doc = parse(&MINIMAL.replace("\"fr\":30", "\"fr\":29.97002997")).unwrap();
        let q = tokenize(&doc, true).unwrap();
        assert_eq!(q[4], Token::Numeric(29.97));
        let plain = tokenize(&doc, false).unwrap();
        assert!(count_tokens(&q, CountMode::Digits) < count_tokens(&plain, CountMode::Digits));
        assert_eq!(q.len(), plain.len());
    }

    #[test]
    fn unsupported_shapes_fail() {
        let doc = parse(&SAMPLE.replace(r#"{"ty":"fl","#, r#"{"ty":"tm","s":{"a":0,"k":0}},{"ty":"fl","#)).unwrap();
        assert!(matches!(tokenize(&doc, false), Err(TokenizeError::Unsupported { .. })));
    }

    #[test]
    #[should_panic]
    fn unknown_tags_panic() {
        Token::tag("bogus");
    }
}
