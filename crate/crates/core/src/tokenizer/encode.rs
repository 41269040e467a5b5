use serde_json::Value;

use super::{EncodeOptions, Token, TokenStream, TokenizeError};
use crate::easing::{ease_preset_lookup, EasingCurve};
use crate::model::{
    hex_color, BezierPath, Document, Easing, Extras, FieldType, FieldValue, Keyframe, Layer, PropValue, Property,
    ShapeBody, ShapeItem, Transform, Vector,
};
use crate::num::{eq_sig, round_sig, CANONICAL_DIGITS};

pub fn tokenize(doc: &Document, quantize: bool) -> Result<TokenStream, TokenizeError> {
    tokenize_with(doc, EncodeOptions { quantize, presets: false })
}

pub fn tokenize_with(doc: &Document, options: EncodeOptions) -> Result<TokenStream, TokenizeError> {
    let mut enc = Encoder {
        out: Vec::new(),
        options,
    };
    enc.document(doc)?;
    Ok(enc.out)
}

/// True when `curve` is the default curve at canonical precision.
pub(super) fn is_default_ease(curve: &EasingCurve) -> bool {
    let d = EasingCurve::EASE_IN_OUT;
    [
        (curve.p1.x, d.p1.x),
        (curve.p1.y, d.p1.y),
        (curve.p2.x, d.p2.x),
        (curve.p2.y, d.p2.y),
    ]
    .iter()
    .all(|&(a, b)| eq_sig(a, b, CANONICAL_DIGITS))
}

struct Encoder {
    out: Vec<Token>,
    options: EncodeOptions,
}

impl Encoder {
    fn tag(&mut self, name: &str) {
        self.out.push(Token::tag(name));
    }

    fn num(&mut self, x: f64) {
        let x = if self.options.quantize {
            round_sig(x, CANONICAL_DIGITS)
        } else {
            x
        };
        self.out.push(Token::Numeric(x));
    }

    fn int(&mut self, i: i64) {
        self.out.push(Token::Numeric(i as f64));
    }

    fn text(&mut self, s: &str) {
        self.out.push(Token::Text(s.to_string()));
    }

    fn document(&mut self, doc: &Document) -> Result<(), TokenizeError> {
        let m = &doc.meta;
        self.tag("M");
        self.tag("v");
        self.text(&m.version);
        for (key, x) in [
            ("fr", m.frame_rate),
            ("ip", m.in_point),
            ("op", m.out_point),
            ("w", m.width),
            ("h", m.height),
        ] {
            self.tag(key);
            self.num(x);
        }
        self.tag("ddd");
        self.int(m.three_d as i64);
        self.extras(&doc.extras);

        for (i, asset) in doc.assets.iter().enumerate() {
            self.tag("ASSET");
            self.tag("id");
            self.text(&asset.id);
            self.extras(&asset.extras);
            if let Some(layers) = &asset.layers {
                self.tag("layers");
                for (j, layer) in layers.iter().enumerate() {
                    self.layer(layer, &format!("assets[{i}].layers[{j}]"))?;
                }
            }
            self.tag("ASSET_END");
        }
        for (i, layer) in doc.layers.iter().enumerate() {
            self.layer(layer, &format!("layers[{i}]"))?;
        }
        self.tag("M_END");
        Ok(())
    }

    fn layer(&mut self, layer: &Layer, path: &str) -> Result<(), TokenizeError> {
        self.tag("LAYER");
        self.tag("ty");
        self.int(layer.layer_type.code());
        self.tag("ip");
        self.num(layer.in_point);
        self.tag("op");
        self.num(layer.out_point);
        self.tag("st");
        self.num(layer.start_time);
        self.tag("bm");
        self.int(layer.blend_mode);
        if let Some(ind) = layer.index {
            self.tag("ind");
            self.int(ind);
        }
        if let Some(parent) = layer.parent_index {
            self.tag("parent");
            self.int(parent);
        }
        self.extras(&layer.extras);
        self.tag("LAYER_KS");
        self.transform(&layer.transform);
        self.items(&layer.shapes, &format!("{path}.shapes"))?;
        self.tag("LAYER_END");
        Ok(())
    }

    fn transform(&mut self, tr: &Transform) {
        self.extras(&tr.extras);
        for (key, prop) in tr.properties() {
            self.tag(key);
            self.vector_property(prop, FieldType::Prop);
        }
    }

    fn items(&mut self, items: &[ShapeItem], path: &str) -> Result<(), TokenizeError> {
        for (i, item) in items.iter().enumerate() {
            let here = format!("{path}[{i}]");
            match &item.body {
                ShapeBody::Raw(_) => {
                    return Err(TokenizeError::Unsupported {
                        path: here,
                        feature: format!("shape type `{}`", item.kind.code()),
                    })
                }
                ShapeBody::Group(children) => {
                    self.tag("ITEM_gr");
                    self.extras(&item.extras);
                    self.items(children, &format!("{here}.it"))?;
                    self.tag("GR_END");
                }
                ShapeBody::Transform(tr) => {
                    self.tag("ITEM_tr");
                    self.transform(tr);
                    self.extras(&item.extras);
                }
                ShapeBody::Fields(fields) => {
                    self.tag(&format!("ITEM_{}", item.kind.code()));
                    self.extras(&item.extras);
                    for spec in item.kind.fields() {
                        if let Some(value) = fields.get(spec.key) {
                            self.field(spec.key, value);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn field(&mut self, key: &str, value: &FieldValue) {
        match value {
            FieldValue::Path(p) => self.path_property(p),
            FieldValue::Prop(p) => {
                self.tag(key);
                self.vector_property(p, FieldType::Prop);
            }
            FieldValue::Color(p) => {
                self.tag(key);
                self.vector_property(p, FieldType::Color);
            }
            FieldValue::Gradient(g) => {
                self.tag(key);
                self.int(g.count);
                self.extras(&g.extras);
                self.vector_property(&g.colors, FieldType::Gradient);
            }
            FieldValue::Int(i) => {
                self.tag(key);
                self.int(*i);
            }
            FieldValue::Number(x) => {
                self.tag(key);
                self.num(*x);
            }
        }
    }

    fn property_head<V>(&mut self, prop: &Property<V>) {
        if let Some(x) = &prop.expression {
            self.tag("x");
            self.text(x);
        }
        self.extras(&prop.extras);
    }

    fn vector_property(&mut self, prop: &Property<Vector>, ty: FieldType) {
        let color = ty == FieldType::Color;
        match &prop.value {
            PropValue::Static(v) => {
                self.tag("PROP_STATIC");
                self.property_head(prop);
                self.vector(v, color);
            }
            PropValue::Animated(kfs) => {
                self.tag("PROP_ANIMATED");
                self.property_head(prop);
                self.keyframes(kfs, |enc, v| enc.vector(v, color));
            }
        }
    }

    fn path_property(&mut self, prop: &Property<BezierPath>) {
        match &prop.value {
            PropValue::Static(p) => {
                self.tag("KS_STATIC");
                self.property_head(prop);
                self.bezier(p);
            }
            PropValue::Animated(kfs) => {
                self.tag("KS_ANIMATED");
                self.property_head(prop);
                self.keyframes(kfs, |enc, p| enc.bezier(p));
            }
        }
    }

    fn keyframes<V>(&mut self, kfs: &[Keyframe<V>], value: impl Fn(&mut Self, &V)) {
        self.tag("PROP_KF_START");
        for (i, kf) in kfs.iter().enumerate() {
            self.tag("t");
            self.num(kf.time);
            value(self, &kf.value);
            if kf.hold {
                self.tag("h");
            }
            self.extras(&kf.extras);
            if let (Some(easing), true) = (&kf.easing, i + 1 < kfs.len()) {
                self.ease(easing);
            }
        }
        self.tag("PROP_KF_END");
    }

    fn ease(&mut self, easing: &Easing) {
        self.tag("ease");
        let curves = easing.curves();
        if curves.iter().all(is_default_ease) {
            return;
        }
        for curve in curves {
            let preset = if self.options.presets {
                ease_preset_lookup(curve.p1, curve.p2)
            } else {
                None
            };
            match preset {
                Some(id) => self.tag(&format!("EASE_{id}")),
                None => {
                    self.num(curve.p2.x);
                    self.num(curve.p2.y);
                    self.num(curve.p1.x);
                    self.num(curve.p1.y);
                }
            }
        }
    }

    fn vector(&mut self, v: &[f64], color: bool) {
        if color {
            if let Some(hex) = hex_color(v) {
                self.out.push(Token::Text(hex));
                return;
            }
        }
        for &x in v {
            self.num(x);
        }
    }

    fn bezier(&mut self, path: &BezierPath) {
        for (key, points) in [("i", &path.in_tangents), ("o", &path.out_tangents), ("v", &path.vertices)] {
            self.tag(key);
            for p in points {
                self.num(p.x);
                self.num(p.y);
            }
        }
        if path.closed {
            self.tag("c");
        }
    }

    fn extras(&mut self, extras: &Extras) {
        for (key, value) in extras {
            self.tag("EXTRA");
            self.text(key);
            self.json(value);
        }
    }

    fn json(&mut self, value: &Value) {
        match value {
            Value::Null => self.tag("null"),
            Value::Bool(true) => self.tag("true"),
            Value::Bool(false) => self.tag("false"),
            Value::Number(n) => match n.as_i64() {
                Some(i) => self.int(i),
                None => self.num(n.as_f64().unwrap_or(0.0)),
            },
            Value::String(s) => self.text(s),
            Value::Array(items) => {
                self.tag("J_ARR");
                items.iter().for_each(|v| self.json(v));
                self.tag("J_END");
            }
            Value::Object(map) => {
                self.tag("J_OBJ");
                for (k, v) in map {
                    self.text(k);
                    self.json(v);
                }
                self.tag("J_END");
            }
        }
    }
}
