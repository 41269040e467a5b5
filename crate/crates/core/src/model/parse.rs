use std::collections::BTreeMap;

use serde_json::{Map, Value};
use thiserror::Error;

use super::{
    AnimationMeta, Asset, BezierPath, Document, Easing, Extras, FieldType, FieldValue, GradientColors, Keyframe,
    Layer, LayerType, Point, PropValue, Property, Presence, ShapeBody, ShapeItem, ShapeKind, Transform, Vector,
};
use crate::easing::EasingCurve;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject expressions and 3D documents.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported feature at {path}: {feature}")]
    Unsupported { path: String, feature: String },
}

type Result<T> = std::result::Result<T, ParseError>;

fn schema<T>(path: &str, message: impl Into<String>) -> Result<T> {
    Err(ParseError::Schema {
        path: display_path(path),
        message: message.into(),
    })
}

fn unsupported<T>(path: &str, feature: impl Into<String>) -> Result<T> {
    Err(ParseError::Unsupported {
        path: display_path(path),
        feature: feature.into(),
    })
}

fn display_path(path: &str) -> String {
    if path.is_empty() {
        "$".to_string()
    } else {
        path.to_string()
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub fn parse(text: &str) -> Result<Document> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, options: ParseOptions) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax(e.to_string()))?;
    parse_value(&value, options)
}

pub fn parse_value(value: &Value, options: ParseOptions) -> Result<Document> {
    Parser { options }.document(value)
}

fn object(value: &Value, path: &str) -> Result<Map<String, Value>> {
    match value {
        Value::Object(map) => Ok(map.clone()),
        _ => schema(path, "expected object"),
    }
}

fn array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    match value {
        Value::Array(items) => Ok(items),
        _ => schema(path, "expected array"),
    }
}

fn number(value: &Value, path: &str) -> Result<f64> {
    match value.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => schema(path, "expected number"),
    }
}

fn integer(value: &Value, path: &str) -> Result<i64> {
    if let Some(i) = value.as_i64() {
        return Ok(i);
    }
    match value {
        Value::Bool(b) => Ok(*b as i64),
        _ => match value.as_f64() {
            Some(x) if x.fract() == 0.0 && x.abs() < 9.0e15 => Ok(x as i64),
            _ => schema(path, "expected integer"),
        },
    }
}

fn required(obj: &mut Map<String, Value>, key: &str, path: &str) -> Result<Value> {
    match obj.shift_remove(key) {
        Some(v) => Ok(v),
        None => schema(path, format!("missing `{key}`")),
    }
}

fn required_number(obj: &mut Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    let v = required(obj, key, path)?;
    number(&v, &join(path, key))
}

fn optional_number(obj: &mut Map<String, Value>, key: &str, path: &str) -> Result<Option<f64>> {
    obj.shift_remove(key).map(|v| number(&v, &join(path, key))).transpose()
}

fn optional_integer(obj: &mut Map<String, Value>, key: &str, path: &str) -> Result<Option<i64>> {
    obj.shift_remove(key).map(|v| integer(&v, &join(path, key))).transpose()
}

/// Parses a `#RRGGBB` or `#RRGGBBAA` color into components in `[0, 1]`.
pub fn parse_hex_color(text: &str) -> Option<Vector> {
    let hex = text.strip_prefix('#')?;
    if !(hex.len() == 6 || hex.len() == 8) || !hex.is_ascii() {
        return None;
    }
    let mut out = Vec::with_capacity(4);
    for i in (0..hex.len()).step_by(2) {
        let byte = u8::from_str_radix(&hex[i..i + 2], 16).ok()?;
        out.push(byte as f64 / 255.0);
    }
    if out.len() == 3 {
        out.push(1.0);
    }
    Some(out)
}

trait FromJson: Sized {
    fn from_json(value: &Value, path: &str, color: bool) -> Result<Self>;
}

impl FromJson for Vector {
    fn from_json(value: &Value, path: &str, color: bool) -> Result<Self> {
        match value {
            Value::Array(items) if !items.is_empty() => items
                .iter()
                .enumerate()
                .map(|(i, v)| number(v, &format!("{path}[{i}]")))
                .collect(),
            Value::String(s) if color => match parse_hex_color(s) {
                Some(c) => Ok(c),
                None => schema(path, format!("bad hex color {s:?}")),
            },
            Value::Number(_) => Ok(vec![number(value, path)?]),
            _ => schema(path, "expected number or nonempty number array"),
        }
    }
}

fn points(value: Option<&Value>, path: &str) -> Result<Vec<Point>> {
    let Some(value) = value else {
        return schema(path, "missing path component");
    };
    array(value, path)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let here = format!("{path}[{i}]");
            match array(p, &here)?.as_slice() {
                [x, y, ..] => Ok(Point::new(number(x, &here)?, number(y, &here)?)),
                _ => schema(&here, "expected [x, y]"),
            }
        })
        .collect()
}

impl FromJson for BezierPath {
    fn from_json(value: &Value, path: &str, _color: bool) -> Result<Self> {
        let obj = match value {
            Value::Object(obj) => obj,
            Value::Array(items) if items.len() == 1 => match &items[0] {
                Value::Object(obj) => obj,
                _ => return schema(path, "expected path object"),
            },
            _ => return schema(path, "expected path object"),
        };
        let closed = match obj.get("c") {
            None => false,
            Some(c) => integer(c, &join(path, "c"))? != 0,
        };
        let shape = BezierPath {
            vertices: points(obj.get("v"), &join(path, "v"))?,
            in_tangents: points(obj.get("i"), &join(path, "i"))?,
            out_tangents: points(obj.get("o"), &join(path, "o"))?,
            closed,
        };
        if shape.in_tangents.len() != shape.len() || shape.out_tangents.len() != shape.len() {
            return schema(path, "vertex and tangent counts differ");
        }
        Ok(shape)
    }
}

/// Handle component as a list: scalars become one-element lists.
fn handle_component(handle: &Map<String, Value>, key: &str, path: &str) -> Result<Vec<f64>> {
    let here = join(path, key);
    match handle.get(key) {
        Some(v) => Vector::from_json(v, &here, false),
        None => schema(path, format!("missing handle component `{key}`")),
    }
}

fn broadcast(values: &[f64], i: usize) -> f64 {
    values[i.min(values.len() - 1)]
}

struct Parser {
    options: ParseOptions,
}

impl Parser {
    fn document(&self, value: &Value) -> Result<Document> {
        let mut obj = object(value, "")?;
        let version = match obj.shift_remove("v") {
            None => String::new(),
            Some(Value::String(s)) => s,
            Some(_) => return schema("v", "expected string"),
        };
        let meta = AnimationMeta {
            version,
            frame_rate: required_number(&mut obj, "fr", "")?,
            in_point: required_number(&mut obj, "ip", "")?,
            out_point: required_number(&mut obj, "op", "")?,
            width: required_number(&mut obj, "w", "")?,
            height: required_number(&mut obj, "h", "")?,
            three_d: optional_integer(&mut obj, "ddd", "")?.unwrap_or(0) != 0,
        };
        if meta.frame_rate <= 0.0 {
            return schema("fr", "frame rate must be positive");
        }
        if meta.out_point < meta.in_point {
            return schema("op", "out point before in point");
        }
        if meta.width <= 0.0 || meta.height <= 0.0 {
            return schema("w", "width and height must be positive");
        }
        if meta.three_d && self.options.strict {
            return unsupported("ddd", "3D layers");
        }

        let assets = match obj.shift_remove("assets") {
            None => Vec::new(),
            Some(v) => array(&v, "assets")?
                .iter()
                .enumerate()
                .map(|(i, a)| self.asset(a, &format!("assets[{i}]")))
                .collect::<Result<_>>()?,
        };
        let layers_value = required(&mut obj, "layers", "")?;
        let layers = self.layers(&layers_value, "layers")?;

        Ok(Document {
            meta,
            assets,
            layers,
            extras: obj,
            hex_colors: false,
        })
    }

    fn layers(&self, value: &Value, path: &str) -> Result<Vec<Layer>> {
        array(value, path)?
            .iter()
            .enumerate()
            .map(|(i, l)| self.layer(l, &format!("{path}[{i}]")))
            .collect()
    }

    fn asset(&self, value: &Value, path: &str) -> Result<Asset> {
        let mut obj = object(value, path)?;
        let id = match required(&mut obj, "id", path)? {
            Value::String(s) => s,
            Value::Number(n) => n.to_string(),
            _ => return schema(&join(path, "id"), "expected string"),
        };
        let layers = match obj.shift_remove("layers") {
            None => None,
            Some(v) => Some(self.layers(&v, &join(path, "layers"))?),
        };
        Ok(Asset {
            id,
            layers,
            extras: obj,
        })
    }

    fn layer(&self, value: &Value, path: &str) -> Result<Layer> {
        let mut obj = object(value, path)?;
        let code = integer(&required(&mut obj, "ty", path)?, &join(path, "ty"))?;
        let layer_type = match LayerType::from_code(code) {
            Some(t) => t,
            None if code == 5 => return unsupported(&join(path, "ty"), "text layer"),
            None => return unsupported(&join(path, "ty"), format!("layer type {code}")),
        };
        let in_point = required_number(&mut obj, "ip", path)?;
        let out_point = required_number(&mut obj, "op", path)?;
        if out_point < in_point {
            return schema(&join(path, "op"), "out point before in point");
        }
        let start_time = optional_number(&mut obj, "st", path)?.unwrap_or(0.0);
        let blend_mode = optional_integer(&mut obj, "bm", path)?.unwrap_or(0);
        let index = optional_integer(&mut obj, "ind", path)?;
        let parent_index = optional_integer(&mut obj, "parent", path)?;
        let transform = match obj.shift_remove("ks") {
            None => Transform::default(),
            Some(v) => {
                let ks = join(path, "ks");
                self.transform(object(&v, &ks)?, &ks)?
            }
        };

        let mut shapes = Vec::new();
        if layer_type == LayerType::Shape {
            if let Some(v) = obj.shift_remove("shapes") {
                shapes = self.shapes(&v, &join(path, "shapes"))?;
            }
        } else if let Some(v) = obj.get("shapes") {
            if !array(v, &join(path, "shapes"))?.is_empty() {
                return schema(&join(path, "shapes"), "shapes on a non-shape layer");
            }
        }

        Ok(Layer {
            layer_type,
            in_point,
            out_point,
            start_time,
            blend_mode,
            index,
            parent_index,
            transform,
            shapes,
            extras: obj,
        })
    }

    fn transform(&self, mut obj: Map<String, Value>, path: &str) -> Result<Transform> {
        let defaults = Transform::default();
        let mut prop = |key: &str, default: Property<Vector>| -> Result<Property<Vector>> {
            match obj.shift_remove(key) {
                None => Ok(default),
                Some(v) => {
                    let here = join(path, key);
                    if key == "p" && v.get("s").and_then(Value::as_bool) == Some(true) {
                        return unsupported(&here, "split position");
                    }
                    self.property(&v, &here, false)
                }
            }
        };
        let position = prop("p", defaults.position)?;
        let anchor = prop("a", defaults.anchor)?;
        let scale = prop("s", defaults.scale)?;
        let rotation = prop("r", defaults.rotation)?;
        let opacity = prop("o", defaults.opacity)?;
        let skew = obj.shift_remove("sk").map(|v| self.property(&v, &join(path, "sk"), false)).transpose()?;
        let skew_axis = obj.shift_remove("sa").map(|v| self.property(&v, &join(path, "sa"), false)).transpose()?;
        Ok(Transform {
            position,
            anchor,
            scale,
            rotation,
            opacity,
            skew,
            skew_axis,
            extras: obj,
        })
    }

    fn property<V: FromJson>(&self, value: &Value, path: &str, color: bool) -> Result<Property<V>> {
        let mut obj = object(value, path)?;
        let flag = optional_integer(&mut obj, "a", path)?;
        let k = required(&mut obj, "k", path)?;
        let expression = match obj.shift_remove("x") {
            None => None,
            Some(Value::String(s)) => {
                if self.options.strict {
                    return unsupported(&join(path, "x"), "expression");
                }
                Some(s)
            }
            Some(_) => return schema(&join(path, "x"), "expected expression string"),
        };

        let keyframed = matches!(&k, Value::Array(items)
            if !items.is_empty() && items.iter().all(|kf| kf.get("t").is_some()));
        let animated = flag.map_or(keyframed, |a| a != 0);
        let k_path = join(path, "k");
        let value = if animated {
            if !keyframed {
                return schema(&k_path, "animated property without keyframes");
            }
            let kfs = array(&k, &k_path)?
                .iter()
                .enumerate()
                .map(|(i, kf)| self.keyframe::<V>(kf, &format!("{k_path}[{i}]"), color))
                .collect::<Result<Vec<_>>>()?;
            if let Some(w) = kfs.windows(2).find(|w| w[1].time <= w[0].time) {
                return schema(&k_path, format!("keyframe times not increasing at t={}", w[1].time));
            }
            if kfs.len() == 1 {
                log::warn!("{path}: single-keyframe animated property treated as static");
                PropValue::Static(kfs.into_iter().next().expect("one keyframe").value)
            } else {
                PropValue::Animated(kfs)
            }
        } else {
            PropValue::Static(V::from_json(&k, &k_path, color)?)
        };

        Ok(Property {
            value,
            expression,
            extras: obj,
        })
    }

    fn keyframe<V: FromJson>(&self, value: &Value, path: &str, color: bool) -> Result<Keyframe<V>> {
        let mut obj = object(value, path)?;
        let time = required_number(&mut obj, "t", path)?;
        let start = required(&mut obj, "s", path)?;
        let value = V::from_json(&start, &join(path, "s"), color)?;
        let hold = optional_integer(&mut obj, "h", path)?.unwrap_or(0) != 0;
        let easing = match (obj.shift_remove("o"), obj.shift_remove("i")) {
            (None, None) => None,
            (Some(o), Some(i)) => Some(self.easing(&o, &i, path)?),
            _ => return schema(path, "easing handles `o` and `i` must appear together"),
        };
        Ok(Keyframe {
            time,
            value,
            easing,
            hold,
            extras: obj,
        })
    }

    fn easing(&self, out: &Value, inc: &Value, path: &str) -> Result<Easing> {
        let (o_path, i_path) = (join(path, "o"), join(path, "i"));
        let (out, inc) = (object(out, &o_path)?, object(inc, &i_path)?);
        let ox = handle_component(&out, "x", &o_path)?;
        let oy = handle_component(&out, "y", &o_path)?;
        let ix = handle_component(&inc, "x", &i_path)?;
        let iy = handle_component(&inc, "y", &i_path)?;
        for (xs, here) in [(&ox, &o_path), (&ix, &i_path)] {
            if xs.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return schema(&join(here, "x"), "handle x outside [0, 1]");
            }
        }
        let dims = [ox.len(), oy.len(), ix.len(), iy.len()].into_iter().max().unwrap_or(1);
        let curves = (0..dims)
            .map(|d| EasingCurve::new(broadcast(&ox, d), broadcast(&oy, d), broadcast(&ix, d), broadcast(&iy, d)))
            .collect();
        Ok(Easing::new(curves))
    }

    fn shapes(&self, value: &Value, path: &str) -> Result<Vec<ShapeItem>> {
        array(value, path)?
            .iter()
            .enumerate()
            .map(|(i, s)| self.shape(s, &format!("{path}[{i}]")))
            .collect()
    }

    fn shape(&self, value: &Value, path: &str) -> Result<ShapeItem> {
        let mut obj = object(value, path)?;
        let kind = match obj.shift_remove("ty") {
            Some(Value::String(code)) => ShapeKind::from_code(&code),
            _ => return schema(path, "missing shape type `ty`"),
        };
        let (body, extras) = match &kind {
            ShapeKind::Group => {
                let items = match obj.shift_remove("it") {
                    None => Vec::new(),
                    Some(v) => self.shapes(&v, &join(path, "it"))?,
                };
                (ShapeBody::Group(items), obj)
            }
            ShapeKind::Transform => (ShapeBody::Transform(self.transform(obj, path)?), Extras::new()),
            ShapeKind::Unsupported(_) => (ShapeBody::Raw(obj), Extras::new()),
            _ => {
                let fields = self.fields(&kind, &mut obj, path)?;
                (ShapeBody::Fields(fields), obj)
            }
        };
        Ok(ShapeItem { kind, body, extras })
    }

    fn fields(
        &self,
        kind: &ShapeKind,
        obj: &mut Map<String, Value>,
        path: &str,
    ) -> Result<BTreeMap<&'static str, FieldValue>> {
        let mut fields = BTreeMap::new();
        for spec in kind.fields() {
            let here = join(path, spec.key);
            let Some(v) = obj.shift_remove(spec.key) else {
                match spec.presence {
                    Presence::Required => return schema(path, format!("missing `{}`", spec.key)),
                    Presence::Default(d) => {
                        fields.insert(spec.key, FieldValue::Prop(Property::fixed(d.to_vec())));
                    }
                    Presence::Optional => {}
                }
                continue;
            };
            let value = match spec.ty {
                FieldType::Prop => FieldValue::Prop(self.property(&v, &here, false)?),
                FieldType::Color => {
                    let prop = self.property(&v, &here, true)?;
                    check_color(&prop, &here)?;
                    FieldValue::Color(prop)
                }
                FieldType::Path => FieldValue::Path(self.property(&v, &here, false)?),
                FieldType::Gradient => FieldValue::Gradient(self.gradient(&v, &here)?),
                FieldType::Int => FieldValue::Int(integer(&v, &here)?),
                FieldType::Number => FieldValue::Number(number(&v, &here)?),
            };
            fields.insert(spec.key, value);
        }
        Ok(fields)
    }

    fn gradient(&self, value: &Value, path: &str) -> Result<GradientColors> {
        let mut obj = object(value, path)?;
        let count = integer(&required(&mut obj, "p", path)?, &join(path, "p"))?;
        let colors = self.property(&required(&mut obj, "k", path)?, &join(path, "k"), false)?;
        Ok(GradientColors {
            count,
            colors,
            extras: obj,
        })
    }
}

fn check_color(prop: &Property<Vector>, path: &str) -> Result<()> {
    let ok = |c: &Vector| (3..=4).contains(&c.len()) && c.iter().all(|x| (0.0..=1.0).contains(x));
    let valid = match &prop.value {
        PropValue::Static(c) => ok(c),
        PropValue::Animated(kfs) => kfs.iter().all(|kf| ok(&kf.value)),
    };
    if valid {
        Ok(())
    } else {
        schema(path, "color must have 3 or 4 components in [0, 1]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"v":"5.9.5","fr":30,"ip":0,"op":90,"w":512,"h":512,"ddd":0,"layers":[]}"#;

    fn bounce_rotation() -> Value {
        serde_json::json!({
            "a": 1,
            "k": [
                {"t": 30, "s": [-113.4], "o": {"x": [0.3], "y": [-2.79]}, "i": {"x": [0.78], "y": [-1.79]}},
                {"t": 46, "s": [-109.5]}
            ]
        })
    }

    fn shape_layer(shapes: Value) -> String {
        serde_json::json!({
            "v": "5.9.5", "fr": 30, "ip": 0, "op": 60, "w": 100, "h": 100,
            "layers": [{"ty": 4, "ip": 0, "op": 60, "st": 0, "ks": {}, "shapes": shapes}]
        })
        .to_string()
    }

    #[test]
    fn parses_minimal_document() {
        let doc = parse(MINIMAL).unwrap();
        assert_eq!(doc.meta.frame_rate, 30.0);
        assert_eq!(doc.meta.out_point, 90.0);
        assert_eq!(doc.meta.version, "5.9.5");
        assert!(doc.layers.is_empty());
        assert!(doc.extras.is_empty());
    }

    #[test]
    fn empty_object_is_a_schema_error() {
        assert!(matches!(parse("{}"), Err(ParseError::Schema { .. })));
        assert!(matches!(parse("{\"fr\": 30"), Err(ParseError::Syntax(_))));
        assert!(matches!(parse("[]"), Err(ParseError::Schema { .. })));
    }

    #[test]
    fn checks_meta_invariants() {
        let bad = MINIMAL.replace("\"op\":90", "\"op\":-1");
        assert!(matches!(parse(&bad), Err(ParseError::Schema { .. })));
        let bad = MINIMAL.replace("\"fr\":30", "\"fr\":0");
        assert!(parse(&bad).is_err());
    }

    #[test]
    fn parses_bounce_property() {
        let prop: Property<Vector> = Parser { options: ParseOptions::default() }
            .property(&bounce_rotation(), "r", false)
            .unwrap();
        let kfs = prop.keyframes();
        assert_eq!(kfs.len(), 2);
        assert_eq!((kfs[0].time, kfs[1].time), (30.0, 46.0));
        assert_eq!(kfs[0].value, vec![-113.4]);
        assert_eq!(kfs[1].value, vec![-109.5]);
        let curve = kfs[0].easing.as_ref().unwrap().for_dim(0);
        assert_eq!(*curve, EasingCurve::new(0.3, -2.79, 0.78, -1.79));
        assert!(kfs[1].easing.is_none());
    }

    #[test]
    fn fills_transform_defaults() {
        let doc = parse(&shape_layer(serde_json::json!([]))).unwrap();
        assert_eq!(doc.layers[0].transform, Transform::default());
    }

    #[test]
    fn keeps_unknown_fields() {
        let text = shape_layer(serde_json::json!([
            {"ty": "gr", "nm": "Group 1", "it": [
                {"ty": "el", "p": {"a": 0, "k": [0, 0]}, "s": {"a": 0, "k": [10, 10]}, "mn": "ADBE"},
                {"ty": "fl", "c": {"a": 0, "k": [1, 0, 0, 1]}, "hd": false},
                {"ty": "tr", "nm": "Transform"}
            ]}
        ]));
        let doc = parse(&text).unwrap();
        let group = &doc.layers[0].shapes[0];
        assert_eq!(group.extras["nm"], "Group 1");
        assert_eq!(group.children()[0].extras["mn"], "ADBE");
        assert_eq!(group.children()[1].extras["hd"], false);
        assert!(group.children()[1].field("o").is_some(), "fill opacity defaulted");
    }

    #[test]
    fn single_keyframe_becomes_static() {
        let prop: Property<Vector> = Parser { options: ParseOptions::default() }
            .property(&serde_json::json!({"a": 1, "k": [{"t": 0, "s": [50]}]}), "o", false)
            .unwrap();
        assert_eq!(prop.value, PropValue::Static(vec![50.0]));
    }

    #[test]
    fn rejects_bad_keyframes() {
        let parser = Parser { options: ParseOptions::default() };
        let unordered = serde_json::json!({"a": 1, "k": [{"t": 5, "s": [0]}, {"t": 5, "s": [1]}]});
        assert!(parser.property::<Vector>(&unordered, "r", false).is_err());
        let wild = serde_json::json!({"a": 1, "k": [
            {"t": 0, "s": [0], "o": {"x": 1.5, "y": 0}, "i": {"x": 0.5, "y": 1}},
            {"t": 5, "s": [1]}
        ]});
        assert!(parser.property::<Vector>(&wild, "r", false).is_err());
        let lopsided = serde_json::json!({"a": 1, "k": [{"t": 0, "s": [0], "o": {"x": 0, "y": 0}}, {"t": 5, "s": [1]}]});
        assert!(parser.property::<Vector>(&lopsided, "r", false).is_err());
    }

    #[test]
    fn collapses_uniform_per_dimension_handles() {
        let prop = serde_json::json!({"a": 1, "k": [
            {"t": 0, "s": [0, 0], "o": {"x": [0.3, 0.3], "y": [0, 0]}, "i": {"x": [0.7, 0.7], "y": [1, 1]}},
            {"t": 5, "s": [1, 1]}
        ]});
        let prop: Property<Vector> = Parser { options: ParseOptions::default() }
            .property(&prop, "p", false)
            .unwrap();
        assert_eq!(prop.keyframes()[0].easing.as_ref().unwrap().curves().len(), 1);
    }

    #[test]
    fn strict_mode_rejects_expressions_and_3d() {
        let text = shape_layer(serde_json::json!([
            {"ty": "rd", "r": {"a": 0, "k": 4, "x": "wiggle(1, 2)"}}
        ]));
        assert!(parse(&text).is_ok());
        let strict = ParseOptions { strict: true };
        assert!(matches!(parse_with(&text, strict), Err(ParseError::Unsupported { .. })));
        let three_d = MINIMAL.replace("\"ddd\":0", "\"ddd\":1");
        assert!(parse(&three_d).is_ok());
        assert!(matches!(parse_with(&three_d, strict), Err(ParseError::Unsupported { .. })));
    }

    #[test]
    fn rejects_text_layers_and_stray_shapes() {
        let text = MINIMAL.replace("[]", r#"[{"ty":5,"ip":0,"op":10}]"#);
        assert!(matches!(parse(&text), Err(ParseError::Unsupported { .. })));
        let null = MINIMAL.replace("[]", r#"[{"ty":3,"ip":0,"op":10,"shapes":[{"ty":"gr","it":[]}]}]"#);
        assert!(matches!(parse(&null), Err(ParseError::Schema { .. })));
    }

    #[test]
    fn accepts_hex_colors() {
        let text = shape_layer(serde_json::json!([{"ty": "fl", "c": {"a": 0, "k": "#336699"}}]));
        let doc = parse(&text).unwrap();
        let Some(FieldValue::Color(c)) = doc.layers[0].shapes[0].field("c") else {
            panic!("fill color missing")
        };
        assert_eq!(c.value, PropValue::Static(vec![0.2, 0.4, 0.6, 1.0]));
    }

    #[test]
    fn keeps_unsupported_shapes_raw() {
        let text = shape_layer(serde_json::json!([{"ty": "tm", "s": {"a": 0, "k": 0}}]));
        let doc = parse(&text).unwrap();
        let item = &doc.layers[0].shapes[0];
        assert_eq!(item.kind, ShapeKind::Unsupported("tm".into()));
        assert!(matches!(item.body, ShapeBody::Raw(_)));
    }

    #[test]
    fn path_vertex_counts_must_agree() {
        let text = shape_layer(serde_json::json!([{"ty": "sh", "ks": {"a": 0, "k": {
            "i": [[0, 0]], "o": [[0, 0], [1, 1]], "v": [[0, 0], [5, 5]], "c": false
        }}}]));
        assert!(matches!(parse(&text), Err(ParseError::Schema { .. })));
    }
}
