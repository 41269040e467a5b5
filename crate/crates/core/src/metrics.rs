//! Structural similarity between two Lottie JSON documents.
//!
//! Both documents are flattened into maps from key paths
//! (`layers[0].shapes[1].ty`) to leaf values. Topology is scored by the F1
//! of the key sets, content by the share of common keys whose values match,
//! and the two are combined 7:3.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::model::{parse, ParseError};
use crate::num::{eq_sig, CANONICAL_DIGITS};

pub type FlatMap = BTreeMap<String, Value>;

pub const TOPOLOGY_WEIGHT: f64 = 0.7;
pub const CONTENT_WEIGHT: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("bad key path {0:?}")]
    Path(String),
}

pub fn flatten(json_text: &str) -> Result<FlatMap, MetricsError> {
    let value: Value = serde_json::from_str(json_text).map_err(|e| MetricsError::Syntax(e.to_string()))?;
    Ok(flatten_value(&value))
}

pub fn flatten_value(value: &Value) -> FlatMap {
    let mut out = FlatMap::new();
    match value {
        Value::Object(map) if map.is_empty() => {}
        _ => walk(value, String::new(), &mut out),
    }
    out
}

fn needs_quoting(key: &str) -> bool {
    key.is_empty() || !key.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '$')
}

fn key_segment(prefix: &str, key: &str) -> String {
    if needs_quoting(key) {
        format!("{prefix}[{}]", serde_json::to_string(key).expect("strings serialize"))
    } else if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn walk(value: &Value, path: String, out: &mut FlatMap) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                walk(v, key_segment(&path, k), out);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, v) in items.iter().enumerate() {
                walk(v, format!("{path}[{i}]"), out);
            }
        }
        _ => {
            out.insert(path, value.clone());
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Segment {
    Key(String),
    Index(usize),
}

fn parse_path(path: &str) -> Result<Vec<Segment>, MetricsError> {
    let bad = || MetricsError::Path(path.to_string());
    let mut segments = Vec::new();
    let mut rest = path;
    while !rest.is_empty() {
        if let Some(body) = rest.strip_prefix("[\"") {
            let mut escaped = false;
            let end = body
                .char_indices()
                .find(|&(_, c)| {
                    let hit = !escaped && c == '"';
                    escaped = !escaped && c == '\\';
                    hit
                })
                .map(|(i, _)| i)
                .ok_or_else(bad)?;
            let key: String = serde_json::from_str(&rest[1..end + 3]).map_err(|_| bad())?;
            segments.push(Segment::Key(key));
            rest = body[end + 1..].strip_prefix(']').ok_or_else(bad)?;
        } else if let Some(body) = rest.strip_prefix('[') {
            let end = body.find(']').ok_or_else(bad)?;
            segments.push(Segment::Index(body[..end].parse().map_err(|_| bad())?));
            rest = &body[end + 1..];
        } else {
            let body = rest.strip_prefix('.').unwrap_or(rest);
            if rest.len() != body.len() && segments.is_empty() {
                return Err(bad());
            }
            let end = body.find(['.', '[']).unwrap_or(body.len());
            if end == 0 {
                return Err(bad());
            }
            segments.push(Segment::Key(body[..end].to_string()));
            rest = &body[end..];
        }
    }
    Ok(segments)
}

/// Rebuilds the JSON value a [`FlatMap`] was produced from.
pub fn unflatten(flat: &FlatMap) -> Result<Value, MetricsError> {
    if flat.is_empty() {
        return Ok(Value::Object(Map::new()));
    }
    let mut root = Value::Null;
    for (path, leaf) in flat {
        let segments = parse_path(path)?;
        let mut slot = &mut root;
        for seg in segments {
            slot = match seg {
                Segment::Key(k) => {
                    if !slot.is_object() {
                        *slot = Value::Object(Map::new());
                    }
                    slot.as_object_mut().expect("object").entry(k).or_insert(Value::Null)
                }
                Segment::Index(i) => {
                    if !slot.is_array() {
                        *slot = Value::Array(Vec::new());
                    }
                    let items = slot.as_array_mut().expect("array");
                    if items.len() <= i {
                        items.resize(i + 1, Value::Null);
                    }
                    &mut items[i]
                }
            };
        }
        *slot = leaf.clone();
    }
    Ok(root)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructReport {
    pub common: usize,
    pub missing: usize,
    pub extra: usize,
    pub key_f1: f64,
    pub value_match: f64,
    pub numeric_mae: f64,
    pub json_struct_sim: f64,
    pub valid: bool,
}

impl fmt::Display for StructReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "valid={} key_f1={:.4} value_match={:.4} numeric_mae={:.4} json_struct_sim={:.4} (common={} missing={} extra={})",
            self.valid,
            self.key_f1,
            self.value_match,
            self.numeric_mae,
            self.json_struct_sim,
            self.common,
            self.missing,
            self.extra
        )
    }
}

/// Leaf equality: numbers at canonical precision, everything else exact.
pub fn leaf_match(a: &Value, b: &Value) -> bool {
    match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => eq_sig(x, y, CANONICAL_DIGITS),
        _ => a == b,
    }
}

/// Compares flattened documents. `value_match` is 0 when no key is shared;
/// two empty maps score as identical.
pub fn compare(gt: &FlatMap, pred: &FlatMap) -> StructReport {
    let mut common = 0;
    let mut matched = 0;
    let mut abs_err = 0.0;
    let mut numeric = 0;
    for (key, g) in gt {
        let Some(p) = pred.get(key) else { continue };
        common += 1;
        if leaf_match(g, p) {
            matched += 1;
        }
        if let (Some(x), Some(y)) = (g.as_f64(), p.as_f64()) {
            numeric += 1;
            abs_err += (x - y).abs();
        }
    }
    let total = gt.len() + pred.len();
    let (key_f1, value_match) = if total == 0 {
        (1.0, 1.0)
    } else if common == 0 {
        (0.0, 0.0)
    } else {
        (2.0 * common as f64 / total as f64, matched as f64 / common as f64)
    };
    StructReport {
        common,
        missing: gt.len() - common,
        extra: pred.len() - common,
        key_f1,
        value_match,
        numeric_mae: if numeric == 0 { 0.0 } else { abs_err / numeric as f64 },
        json_struct_sim: TOPOLOGY_WEIGHT * key_f1 + CONTENT_WEIGHT * value_match,
        valid: true,
    }
}

/// Scores a predicted document against ground truth. Unparseable
/// predictions flatten to nothing and are marked invalid.
pub fn score(gt_text: &str, pred_text: &str) -> Result<StructReport, MetricsError> {
    let gt = flatten(gt_text)?;
    let pred = flatten(pred_text).unwrap_or_default();
    let mut report = compare(&gt, &pred);
    report.valid = validity_check(pred_text).valid;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validity {
    pub valid: bool,
    /// First violation, `None` when valid.
    pub diagnostic: Option<String>,
}

pub fn validity_check(json_text: &str) -> Validity {
    match parse(json_text) {
        Ok(_) => Validity {
            valid: true,
            diagnostic: None,
        },
        Err(e) => {
            let kind = match e {
                ParseError::Syntax(_) => "SyntaxError",
                ParseError::Schema { .. } => "SchemaError",
                ParseError::Unsupported { .. } => "UnsupportedFeature",
            };
            Validity {
                valid: false,
                diagnostic: Some(format!("{kind}: {e}")),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Difficulty {
    Simple,
    Medium,
    Complex,
}

impl Difficulty {
    pub fn label(self) -> &'static str {
        match self {
            Difficulty::Simple => "simple",
            Difficulty::Medium => "medium",
            Difficulty::Complex => "complex",
        }
    }
}

/// Token-count bounds; buckets are half-open: `[0, medium)`,
/// `[medium, complex)`, `[complex, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thresholds {
    pub medium: usize,
    pub complex: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            medium: 2_000,
            complex: 10_000,
        }
    }
}

impl Thresholds {
    pub fn classify(&self, tokens: usize) -> Difficulty {
        if tokens < self.medium {
            Difficulty::Simple
        } else if tokens < self.complex {
            Difficulty::Medium
        } else {
            Difficulty::Complex
        }
    }
}

/// Partitions named token counts into difficulty buckets, keeping input order.
pub fn stratify<'a>(
    counts: impl IntoIterator<Item = (&'a str, usize)>,
    thresholds: Thresholds,
) -> BTreeMap<Difficulty, Vec<String>> {
    let mut out: BTreeMap<Difficulty, Vec<String>> =
        [Difficulty::Simple, Difficulty::Medium, Difficulty::Complex].into_iter().map(|d| (d, Vec::new())).collect();
    for (name, count) in counts {
        out.entry(thresholds.classify(count)).or_default().push(name.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn flat(v: Value) -> FlatMap {
        flatten_value(&v)
    }

    #[test]
    fn flattens_nested_values() {
        let f = flatten(r#"{"a":{"b":1},"c":[2,3]}"#).unwrap();
        let keys: Vec<&str> = f.keys().map(String::as_str).collect();
        assert_eq!(keys, ["a.b", "c[0]", "c[1]"]);
        assert_eq!(f["c[1]"], json!(3));
        assert!(flatten("{}").unwrap().is_empty());
        assert!(matches!(flatten("{"), Err(MetricsError::Syntax(_))));
    }

    #[test]
    fn quotes_awkward_keys() {
        let v = json!({"x.y": {"": [1, {"a[0]": true}]}, "e": {}, "f": []});
        let f = flat(v.clone());
        assert!(f.contains_key(r#"["x.y"][""][1]["a[0]"]"#), "{f:?}");
        assert_eq!(f["e"], json!({}));
        assert_eq!(unflatten(&f).unwrap(), v);
    }

    #[test]
    fn unflatten_inverts_flatten() {
        for v in [
            json!({"a": {"b": 1}, "c": [2, 3]}),
            json!({"layers": [{"ty": 4, "ks": {"p": {"a": 0, "k": [1.5, -2]}}}], "nm": "x \"q\""}),
            json!({}),
            json!([1, [2, []]]),
        ] {
            assert_eq!(unflatten(&flat(v.clone())).unwrap(), v);
        }
    }

    #[test]
    fn hand_computed_example() {
        let gt = flat(json!({"a": 1, "b": 2, "c": 3}));
        let pred = flat(json!({"a": 1, "b": 5, "d": 7}));
        let r = compare(&gt, &pred);
        assert_eq!((r.common, r.missing, r.extra), (2, 1, 1));
        assert!((r.key_f1 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.value_match, 0.5);
        assert_eq!(r.numeric_mae, 1.5);
        assert!((r.json_struct_sim - (0.7 * 2.0 / 3.0 + 0.15)).abs() < 1e-12);
    }

    #[test]
    fn identical_and_disjoint() {
        let a = flat(json!({"a": 1, "b": "x", "c": [true, null]}));
        let r = compare(&a, &a);
        assert_eq!((r.key_f1, r.value_match, r.numeric_mae, r.json_struct_sim), (1.0, 1.0, 0.0, 1.0));
        let r = compare(&a, &flat(json!({"z": 1})));
        assert_eq!((r.key_f1, r.value_match, r.json_struct_sim), (0.0, 0.0, 0.0));
    }

    #[test]
    fn numbers_match_at_four_digits() {
        let r = compare(&flat(json!({"a": 0.12344})), &flat(json!({"a": 0.1234})));
        assert_eq!(r.value_match, 1.0);
        let r = compare(&flat(json!({"a": "1"})), &flat(json!({"a": 1})));
        assert_eq!(r.value_match, 0.0);
    }

    #[test]
    fn validity_diagnostics() {
        let ok = r#"{"v":"5.9.5","fr":30,"ip":0,"op":90,"w":512,"h":512,"ddd":0,"layers":[]}"#;
        assert!(validity_check(ok).valid);
        let truncated = validity_check(&ok[..30]);
        assert!(!truncated.valid);
        assert!(truncated.diagnostic.unwrap().starts_with("SyntaxError"));
        let missing = validity_check(r#"{"fr":30,"ip":0,"op":90,"w":512,"h":512}"#);
        assert!(missing.diagnostic.unwrap().starts_with("SchemaError"));
    }

    #[test]
    fn invalid_predictions_score_zero_topology() {
        let ok = r#"{"v":"5.9.5","fr":30,"ip":0,"op":90,"w":512,"h":512,"ddd":0,"layers":[]}"#;
        let r = score(ok, "{not json").unwrap();
        assert!(!r.valid);
        assert_eq!(r.key_f1, 0.0);
    }

    #[test]
    fn stratifies_half_open() {
        let t = Thresholds::default();
        let buckets = stratify([("a", 100), ("b", 5_000), ("c", 30_000)], t);
        assert_eq!(buckets[&Difficulty::Simple], ["a"]);
        assert_eq!(buckets[&Difficulty::Medium], ["b"]);
        assert_eq!(buckets[&Difficulty::Complex], ["c"]);
        assert_eq!(t.classify(1_999), Difficulty::Simple);
        assert_eq!(t.classify(2_000), Difficulty::Medium);
        assert_eq!(t.classify(10_000), Difficulty::Complex);
    }
}
