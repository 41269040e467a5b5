use serde_json::Value;

use super::{to_value, BezierPath, Document, FieldType, PropValue, Property, Vector, Visitor};
use crate::num::{eq_sig, json_number, round_sig, CANONICAL_DIGITS};

/// JSON form used for equality: final-keyframe easing dropped, uniform
/// per-dimension easing collapsed, single keyframes made static, colors
/// padded to RGBA and every float rounded to canonical precision.
pub fn canonical_value(doc: &Document) -> Value {
    let mut doc = doc.clone();
    doc.hex_colors = false;
    doc.walk_mut(&mut Canonicalizer);
    let mut value = to_value(&doc);
    round_numbers(&mut value);
    value
}

pub fn canonical_equal(a: &Document, b: &Document) -> bool {
    values_equal_sig(&canonical_value(a), &canonical_value(b))
}

/// Structural JSON equality ignoring key order, with numbers compared at
/// canonical precision.
pub fn values_equal_sig(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => match (x.as_f64(), y.as_f64()) {
            (Some(x), Some(y)) => eq_sig(x, y, CANONICAL_DIGITS),
            _ => x == y,
        },
        (Value::Array(xs), Value::Array(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| values_equal_sig(x, y))
        }
        (Value::Object(xs), Value::Object(ys)) => {
            xs.len() == ys.len() && xs.iter().all(|(k, x)| ys.get(k).is_some_and(|y| values_equal_sig(x, y)))
        }
        _ => a == b,
    }
}

fn round_numbers(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let (None, Some(x)) = (n.as_i64(), n.as_f64()) {
                *value = json_number(round_sig(x, CANONICAL_DIGITS));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn canonical_keyframes<V>(prop: &mut Property<V>) {
    if let PropValue::Animated(kfs) = &mut prop.value {
        if kfs.len() == 1 {
            let only = kfs.pop().expect("one keyframe");
            prop.value = PropValue::Static(only.value);
            return;
        }
        for kf in kfs.iter_mut() {
            if let Some(easing) = &mut kf.easing {
                easing.normalize();
            }
        }
        if let Some(last) = kfs.last_mut() {
            last.easing = None;
        }
    }
}

fn pad_color(color: &mut Vector) {
    if color.len() == 3 {
        color.push(1.0);
    }
}

struct Canonicalizer;

impl Visitor for Canonicalizer {
    fn vector(&mut self, prop: &mut Property<Vector>, ty: FieldType) {
        canonical_keyframes(prop);
        if ty == FieldType::Color {
            match &mut prop.value {
                PropValue::Static(c) => pad_color(c),
                PropValue::Animated(kfs) => kfs.iter_mut().for_each(|kf| pad_color(&mut kf.value)),
            }
        }
    }

    fn path(&mut self, prop: &mut Property<BezierPath>) {
        canonical_keyframes(prop);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse;

    const DOC: &str = r#"{"v":"5.9.5","fr":30,"ip":0,"op":60,"w":100,"h":100,"ddd":0,"layers":[
        {"ty":4,"ip":0,"op":60,"st":0,"bm":0,"ks":{"r":{"a":1,"k":[
            {"t":0,"s":[0],"o":{"x":[0.3],"y":[0]},"i":{"x":[0.7],"y":[1]}},
            {"t":30,"s":[90],"o":{"x":[0.1],"y":[0]},"i":{"x":[0.2],"y":[1]}}]}},
         "shapes":[{"ty":"fl","c":{"a":0,"k":[1,0.5,0]},"o":{"a":0,"k":100}}]}]}"#;

    #[test]
    fn reflexive() {
        let doc = parse(DOC).unwrap();
        assert!(canonical_equal(&doc, &doc));
    }

    #[test]
    fn ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"a":1,"b":[1,{"c":2,"d":3}]}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"b":[1,{"d":3,"c":2}],"a":1}"#).unwrap();
        assert!(values_equal_sig(&a, &b));
        let reordered = DOC.replace(r#""ty":4,"ip":0,"op":60"#, r#""op":60,"ip":0,"ty":4"#);
        assert!(canonical_equal(&parse(DOC).unwrap(), &parse(&reordered).unwrap()));
    }

    #[test]
    fn detects_a_one_degree_change() {
        let turned = DOC.replace(r#""s":[90]"#, r#""s":[91]"#);
        assert!(!canonical_equal(&parse(DOC).unwrap(), &parse(&turned).unwrap()));
    }

    #[test]
    fn compares_at_four_significant_digits() {
        let a: Value = serde_json::json!([0.123449, 30, 1.0]);
        let b: Value = serde_json::json!([0.1234, 30.0, 1]);
        assert!(values_equal_sig(&a, &b));
        assert!(!values_equal_sig(&serde_json::json!(0.1234), &serde_json::json!(0.1235)));
    }

    #[test]
    fn normalizes_defaults() {
        let a = parse(DOC).unwrap();
        let stripped = DOC
            .replace(r#","o":{"x":[0.1],"y":[0]},"i":{"x":[0.2],"y":[1]}"#, "")
            .replace("[1,0.5,0]", "[1,0.5,0,1]");
        assert!(canonical_equal(&a, &parse(&stripped).unwrap()));
    }
}
