use serde_json::{Map, Value};

use super::{
    Asset, BezierPath, Document, Easing, FieldValue, GradientColors, Keyframe, Layer, Point, PropValue, Property,
    ShapeBody, ShapeItem, Transform, Vector,
};
use crate::num::{json_number, round_sig, CANONICAL_DIGITS};

/// Compact Lottie JSON.
pub fn serialize(doc: &Document) -> String {
    to_value(doc).to_string()
}

pub fn serialize_pretty(doc: &Document) -> String {
    serde_json::to_string_pretty(&to_value(doc)).expect("JSON values always serialize")
}

pub fn to_value(doc: &Document) -> Value {
    Writer { hex: doc.hex_colors }.document(doc)
}

/// `#RRGGBB` (or `#RRGGBBAA` when alpha is not 1) when every channel is a
/// multiple of 1/255 at canonical precision.
pub fn hex_color(color: &[f64]) -> Option<String> {
    if !(3..=4).contains(&color.len()) {
        return None;
    }
    let mut bytes = Vec::with_capacity(4);
    for &c in color {
        if !(0.0..=1.0).contains(&c) {
            return None;
        }
        let byte = (c * 255.0).round();
        if round_sig(byte / 255.0, CANONICAL_DIGITS) != round_sig(c, CANONICAL_DIGITS) {
            return None;
        }
        bytes.push(byte as u8);
    }
    if bytes.len() == 4 && bytes[3] == 255 {
        bytes.pop();
    }
    Some(bytes.iter().fold(String::from("#"), |s, b| s + &format!("{b:02x}")))
}

#[derive(Clone, Copy, PartialEq)]
enum Shape {
    Scalar,
    Array,
    Color,
}

fn numbers(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&x| json_number(x)).collect())
}

fn point_list(points: &[Point]) -> Value {
    Value::Array(points.iter().map(|p| numbers(&[p.x, p.y])).collect())
}

fn bezier(path: &BezierPath) -> Value {
    let mut obj = Map::new();
    obj.insert("i".into(), point_list(&path.in_tangents));
    obj.insert("o".into(), point_list(&path.out_tangents));
    obj.insert("v".into(), point_list(&path.vertices));
    obj.insert("c".into(), Value::Bool(path.closed));
    Value::Object(obj)
}

fn handle(easing: &Easing, pick: impl Fn(&crate::easing::EasingCurve) -> Point) -> Value {
    let points: Vec<Point> = easing.curves().iter().map(pick).collect();
    let mut obj = Map::new();
    obj.insert("x".into(), numbers(&points.iter().map(|p| p.x).collect::<Vec<_>>()));
    obj.insert("y".into(), numbers(&points.iter().map(|p| p.y).collect::<Vec<_>>()));
    Value::Object(obj)
}

fn extend(obj: &mut Map<String, Value>, extras: &Map<String, Value>) {
    for (k, v) in extras {
        obj.insert(k.clone(), v.clone());
    }
}

trait ToJson {
    fn static_json(&self, writer: &Writer, shape: Shape) -> Value;
    fn keyframe_json(&self, writer: &Writer, shape: Shape) -> Value;
}

impl ToJson for Vector {
    fn static_json(&self, writer: &Writer, shape: Shape) -> Value {
        match shape {
            Shape::Scalar if self.len() == 1 => json_number(self[0]),
            _ => self.keyframe_json(writer, shape),
        }
    }

    fn keyframe_json(&self, writer: &Writer, shape: Shape) -> Value {
        if shape == Shape::Color && writer.hex {
            if let Some(hex) = hex_color(self) {
                return Value::String(hex);
            }
        }
        numbers(self)
    }
}

impl ToJson for BezierPath {
    fn static_json(&self, _: &Writer, _: Shape) -> Value {
        bezier(self)
    }

    fn keyframe_json(&self, _: &Writer, _: Shape) -> Value {
        Value::Array(vec![bezier(self)])
    }
}

struct Writer {
    hex: bool,
}

impl Writer {
    fn document(&self, doc: &Document) -> Value {
        let meta = &doc.meta;
        let mut obj = Map::new();
        obj.insert("v".into(), Value::String(meta.version.clone()));
        obj.insert("fr".into(), json_number(meta.frame_rate));
        obj.insert("ip".into(), json_number(meta.in_point));
        obj.insert("op".into(), json_number(meta.out_point));
        obj.insert("w".into(), json_number(meta.width));
        obj.insert("h".into(), json_number(meta.height));
        obj.insert("ddd".into(), Value::from(meta.three_d as i64));
        if !doc.assets.is_empty() {
            obj.insert("assets".into(), Value::Array(doc.assets.iter().map(|a| self.asset(a)).collect()));
        }
        obj.insert("layers".into(), self.layers(&doc.layers));
        extend(&mut obj, &doc.extras);
        Value::Object(obj)
    }

    fn layers(&self, layers: &[Layer]) -> Value {
        Value::Array(layers.iter().map(|l| self.layer(l)).collect())
    }

    fn asset(&self, asset: &Asset) -> Value {
        let mut obj = Map::new();
        obj.insert("id".into(), Value::String(asset.id.clone()));
        if let Some(layers) = &asset.layers {
            obj.insert("layers".into(), self.layers(layers));
        }
        extend(&mut obj, &asset.extras);
        Value::Object(obj)
    }

    fn layer(&self, layer: &Layer) -> Value {
        let mut obj = Map::new();
        obj.insert("ty".into(), Value::from(layer.layer_type.code()));
        if let Some(ind) = layer.index {
            obj.insert("ind".into(), Value::from(ind));
        }
        if let Some(parent) = layer.parent_index {
            obj.insert("parent".into(), Value::from(parent));
        }
        obj.insert("ks".into(), Value::Object(self.transform(&layer.transform)));
        if layer.layer_type == super::LayerType::Shape {
            obj.insert("shapes".into(), self.shapes(&layer.shapes));
        }
        obj.insert("ip".into(), json_number(layer.in_point));
        obj.insert("op".into(), json_number(layer.out_point));
        obj.insert("st".into(), json_number(layer.start_time));
        obj.insert("bm".into(), Value::from(layer.blend_mode));
        extend(&mut obj, &layer.extras);
        Value::Object(obj)
    }

    fn transform(&self, tr: &Transform) -> Map<String, Value> {
        let mut obj = Map::new();
        for (key, prop) in tr.properties() {
            obj.insert(key.into(), self.property(prop, Shape::Scalar));
        }
        extend(&mut obj, &tr.extras);
        obj
    }

    fn shapes(&self, items: &[ShapeItem]) -> Value {
        Value::Array(items.iter().map(|i| self.shape(i)).collect())
    }

    fn shape(&self, item: &ShapeItem) -> Value {
        let mut obj = Map::new();
        obj.insert("ty".into(), Value::String(item.kind.code().to_string()));
        match &item.body {
            ShapeBody::Group(children) => {
                obj.insert("it".into(), self.shapes(children));
            }
            ShapeBody::Transform(tr) => extend(&mut obj, &self.transform(tr)),
            ShapeBody::Raw(raw) => extend(&mut obj, raw),
            ShapeBody::Fields(fields) => {
                for spec in item.kind.fields() {
                    if let Some(value) = fields.get(spec.key) {
                        obj.insert(spec.key.into(), self.field(value));
                    }
                }
            }
        }
        extend(&mut obj, &item.extras);
        Value::Object(obj)
    }

    fn field(&self, value: &FieldValue) -> Value {
        match value {
            FieldValue::Prop(p) => self.property(p, Shape::Scalar),
            FieldValue::Color(p) => self.property(p, Shape::Color),
            FieldValue::Path(p) => self.property(p, Shape::Array),
            FieldValue::Gradient(g) => self.gradient(g),
            FieldValue::Int(i) => Value::from(*i),
            FieldValue::Number(x) => json_number(*x),
        }
    }

    fn gradient(&self, g: &GradientColors) -> Value {
        let mut obj = Map::new();
        obj.insert("p".into(), Value::from(g.count));
        obj.insert("k".into(), self.property(&g.colors, Shape::Array));
        extend(&mut obj, &g.extras);
        Value::Object(obj)
    }

    fn property<V: ToJson>(&self, prop: &Property<V>, shape: Shape) -> Value {
        let mut obj = Map::new();
        match &prop.value {
            PropValue::Static(v) => {
                obj.insert("a".into(), Value::from(0));
                obj.insert("k".into(), v.static_json(self, shape));
            }
            PropValue::Animated(kfs) => {
                obj.insert("a".into(), Value::from(1));
                let kfs = kfs.iter().map(|kf| self.keyframe(kf, shape)).collect();
                obj.insert("k".into(), Value::Array(kfs));
            }
        }
        if let Some(x) = &prop.expression {
            obj.insert("x".into(), Value::String(x.clone()));
        }
        extend(&mut obj, &prop.extras);
        Value::Object(obj)
    }

    fn keyframe<V: ToJson>(&self, kf: &Keyframe<V>, shape: Shape) -> Value {
        let mut obj = Map::new();
        obj.insert("t".into(), json_number(kf.time));
        obj.insert("s".into(), kf.value.keyframe_json(self, shape));
        if let Some(easing) = &kf.easing {
            obj.insert("o".into(), handle(easing, |c| c.p1));
            obj.insert("i".into(), handle(easing, |c| c.p2));
        }
        if kf.hold {
            obj.insert("h".into(), Value::from(1));
        }
        extend(&mut obj, &kf.extras);
        Value::Object(obj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonical_equal, parse, ShapeKind};

    #[test]
    fn minimal_document_serializes_in_schema_order() {
        let doc = Document::new(30.0, 0.0, 90.0, 512.0, 512.0);
        assert_eq!(
            serialize(&doc),
            r#"{"v":"5.9.5","fr":30,"ip":0,"op":90,"w":512,"h":512,"ddd":0,"layers":[]}"#
        );
    }

    #[test]
    fn hex_color_matches_byte_rounding() {
        // Oracle: round(channel * 255) per channel, 51 -> 0x33, 102 -> 0x66, 153 -> 0x99.
        assert_eq!(hex_color(&[0.2, 0.4, 0.6, 1.0]).as_deref(), Some("#336699"));
        assert_eq!(hex_color(&[1.0, 0.0, 0.0]).as_deref(), Some("#ff0000"));
        assert_eq!(hex_color(&[0.0, 0.0, 0.0, 0.5]), None);
        assert_eq!(hex_color(&[0.0, 0.0, 0.0, 0.2]).as_deref(), Some("#00000033"));
        assert_eq!(hex_color(&[0.123456, 0.0, 0.0, 1.0]), None);
    }

    #[test]
    fn hex_colors_roundtrip() {
        let mut doc = Document::new(30.0, 0.0, 10.0, 64.0, 64.0);
        let fill = ShapeItem::leaf(
            ShapeKind::Fill,
            vec![
                ("c", FieldValue::Color(Property::fixed(vec![0.2, 0.4, 0.6, 1.0]))),
                ("o", FieldValue::Prop(Property::fixed(vec![100.0]))),
            ],
        );
        doc.layers.push(Layer {
            layer_type: crate::model::LayerType::Shape,
            in_point: 0.0,
            out_point: 10.0,
            start_time: 0.0,
            blend_mode: 0,
            index: Some(1),
            parent_index: None,
            transform: Transform::default(),
            shapes: vec![ShapeItem::group(vec![fill])],
            extras: Map::new(),
        });
        doc.hex_colors = true;
        let text = serialize(&doc);
        assert!(text.contains("\"#336699\""), "{text}");
        assert!(canonical_equal(&parse(&text).unwrap(), &doc));
    }

    #[test]
    fn serialization_roundtrips_through_parse() {
        let text = r#"{"v":"5.7.1","fr":24,"ip":0,"op":48,"w":200,"h":100,"ddd":0,"nm":"demo",
            "layers":[{"ddd":0,"ind":1,"ty":4,"nm":"L","ks":{"r":{"a":1,"k":[
              {"t":0,"s":[0],"o":{"x":[0.3],"y":[-2.79]},"i":{"x":[0.78],"y":[-1.79]}},
              {"t":24,"s":[90],"h":1},{"t":48,"s":[180]}]}},
              "shapes":[{"ty":"rc","p":{"a":0,"k":[0,0]},"s":{"a":0,"k":[10,20]}}],
              "ip":0,"op":48,"st":0,"bm":0}]}"#;
        let doc = parse(text).unwrap();
        let again = parse(&serialize(&doc)).unwrap();
        assert_eq!(doc, again);
        let pretty = parse(&serialize_pretty(&doc)).unwrap();
        assert_eq!(doc, pretty);
    }
}
