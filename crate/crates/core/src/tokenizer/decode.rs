use std::collections::BTreeMap;

use serde_json::{Map, Value};

use super::{DecodeError, Token};
use crate::easing::{preset, EasingCurve};
use crate::model::{
    parse_hex_color, AnimationMeta, Asset, BezierPath, Document, Easing, Extras, FieldType, FieldValue,
    GradientColors, Keyframe, Layer, LayerType, Point, PropValue, Property, ShapeBody, ShapeItem, ShapeKind,
    Transform, Vector,
};
use crate::num::json_number;

type Result<T> = std::result::Result<T, DecodeError>;

/// Rebuilds a document from a token stream.
pub fn detokenize(tokens: &[Token]) -> Result<Document> {
    let mut dec = Decoder { tokens, pos: 0 };
    let doc = dec.document()?;
    if dec.pos != tokens.len() {
        return dec.malformed("tokens after end of document");
    }
    Ok(doc)
}

struct Decoder<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl Decoder<'_> {
    fn malformed<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(DecodeError::Malformed {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Result<&Token> {
        self.tokens.get(self.pos).ok_or(DecodeError::Truncated { position: self.pos })
    }

    fn next(&mut self) -> Result<Token> {
        let token = self.peek()?.clone();
        self.pos += 1;
        Ok(token)
    }

    fn at(&self, name: &str) -> Result<bool> {
        Ok(self.peek()?.is_tag(name))
    }

    /// Consumes `name` if it is next.
    fn eat(&mut self, name: &str) -> Result<bool> {
        let hit = self.at(name)?;
        if hit {
            self.pos += 1;
        }
        Ok(hit)
    }

    fn expect(&mut self, name: &str) -> Result<()> {
        if self.eat(name)? {
            Ok(())
        } else {
            self.malformed(format!("expected <|{name}|>, found {}", describe(self.peek()?)))
        }
    }

    fn number(&mut self) -> Result<f64> {
        match self.peek()? {
            Token::Numeric(x) => {
                let x = *x;
                self.pos += 1;
                Ok(x)
            }
            other => {
                let found = describe(other);
                self.malformed(format!("expected number, found {found}"))
            }
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let x = self.number()?;
        if x.fract() != 0.0 || x.abs() > 9.0e15 {
            self.pos -= 1;
            return self.malformed(format!("expected integer, found {x}"));
        }
        Ok(x as i64)
    }

    fn text(&mut self) -> Result<String> {
        match self.peek()? {
            Token::Text(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            other => {
                let found = describe(other);
                self.malformed(format!("expected text, found {found}"))
            }
        }
    }

    /// Every numeric literal up to the next non-numeric token.
    fn numbers(&mut self) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        while let Token::Numeric(x) = self.peek()? {
            out.push(*x);
            self.pos += 1;
        }
        Ok(out)
    }

    fn tagged_number(&mut self, name: &str) -> Result<f64> {
        self.expect(name)?;
        self.number()
    }

    fn tagged_integer(&mut self, name: &str) -> Result<i64> {
        self.expect(name)?;
        self.integer()
    }

    fn document(&mut self) -> Result<Document> {
        self.expect("M")?;
        self.expect("v")?;
        let version = self.text()?;
        let meta = AnimationMeta {
            version,
            frame_rate: self.tagged_number("fr")?,
            in_point: self.tagged_number("ip")?,
            out_point: self.tagged_number("op")?,
            width: self.tagged_number("w")?,
            height: self.tagged_number("h")?,
            three_d: self.tagged_integer("ddd")? != 0,
        };
        let extras = self.extras()?;

        let mut assets = Vec::new();
        while self.eat("ASSET")? {
            assets.push(self.asset()?);
        }
        let mut layers = Vec::new();
        while self.eat("LAYER")? {
            layers.push(self.layer()?);
        }
        self.expect("M_END")?;
        Ok(Document {
            meta,
            assets,
            layers,
            extras,
            hex_colors: false,
        })
    }

    fn asset(&mut self) -> Result<Asset> {
        self.expect("id")?;
        let id = self.text()?;
        let extras = self.extras()?;
        let layers = if self.eat("layers")? {
            let mut layers = Vec::new();
            while self.eat("LAYER")? {
                layers.push(self.layer()?);
            }
            Some(layers)
        } else {
            None
        };
        self.expect("ASSET_END")?;
        Ok(Asset { id, layers, extras })
    }

    fn layer(&mut self) -> Result<Layer> {
        let code = self.tagged_integer("ty")?;
        let Some(layer_type) = LayerType::from_code(code) else {
            return self.malformed(format!("unknown layer type {code}"));
        };
        let in_point = self.tagged_number("ip")?;
        let out_point = self.tagged_number("op")?;
        let start_time = self.tagged_number("st")?;
        let blend_mode = self.tagged_integer("bm")?;
        let index = if self.eat("ind")? { Some(self.integer()?) } else { None };
        let parent_index = if self.eat("parent")? { Some(self.integer()?) } else { None };
        let extras = self.extras()?;
        self.expect("LAYER_KS")?;
        let transform = self.transform()?;
        let shapes = self.items()?;
        if layer_type != LayerType::Shape && !shapes.is_empty() {
            return self.malformed("shapes on a non-shape layer");
        }
        self.expect("LAYER_END")?;
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
            extras,
        })
    }

    fn transform(&mut self) -> Result<Transform> {
        let mut extras = self.extras()?;
        let mut core = Vec::with_capacity(5);
        for key in ["p", "a", "s", "r", "o"] {
            self.expect(key)?;
            core.push(self.vector_property(FieldType::Prop)?);
        }
        let skew = if self.eat("sk")? {
            Some(self.vector_property(FieldType::Prop)?)
        } else {
            None
        };
        let skew_axis = if self.eat("sa")? {
            Some(self.vector_property(FieldType::Prop)?)
        } else {
            None
        };
        extras.extend(self.extras()?);
        let mut core = core.into_iter();
        let mut take = || core.next().expect("five core properties");
        Ok(Transform {
            position: take(),
            anchor: take(),
            scale: take(),
            rotation: take(),
            opacity: take(),
            skew,
            skew_axis,
            extras,
        })
    }

    /// Shape items up to the enclosing block's end marker.
    fn items(&mut self) -> Result<Vec<ShapeItem>> {
        let mut items = Vec::new();
        loop {
            let kind = match self.peek()? {
                Token::Structural(name) => match name.strip_prefix("ITEM_") {
                    Some(code) => ShapeKind::from_code(code),
                    None => return Ok(items),
                },
                _ => return Ok(items),
            };
            self.pos += 1;
            items.push(self.item(kind)?);
        }
    }

    fn item(&mut self, kind: ShapeKind) -> Result<ShapeItem> {
        match kind {
            ShapeKind::Group => {
                let extras = self.extras()?;
                let children = self.items()?;
                self.expect("GR_END")?;
                Ok(ShapeItem {
                    kind,
                    body: ShapeBody::Group(children),
                    extras,
                })
            }
            ShapeKind::Transform => Ok(ShapeItem::transform(self.transform()?)),
            ShapeKind::Unsupported(code) => self.malformed(format!("unknown shape type `{code}`")),
            _ => {
                let extras = self.extras()?;
                let fields = self.fields(&kind)?;
                Ok(ShapeItem {
                    kind,
                    body: ShapeBody::Fields(fields),
                    extras,
                })
            }
        }
    }

    fn fields(&mut self, kind: &ShapeKind) -> Result<BTreeMap<&'static str, FieldValue>> {
        let mut fields = BTreeMap::new();
        for spec in kind.fields() {
            let value = if spec.ty == FieldType::Path {
                match self.peek()? {
                    t if t.is_tag("KS_STATIC") || t.is_tag("KS_ANIMATED") => Some(FieldValue::Path(self.path_property()?)),
                    _ => None,
                }
            } else if self.eat(spec.key)? {
                Some(match spec.ty {
                    FieldType::Prop => FieldValue::Prop(self.vector_property(FieldType::Prop)?),
                    FieldType::Color => FieldValue::Color(self.vector_property(FieldType::Color)?),
                    FieldType::Gradient => {
                        let count = self.integer()?;
                        let extras = self.extras()?;
                        let colors = self.vector_property(FieldType::Gradient)?;
                        FieldValue::Gradient(GradientColors { count, colors, extras })
                    }
                    FieldType::Int => FieldValue::Int(self.integer()?),
                    FieldType::Number => FieldValue::Number(self.number()?),
                    FieldType::Path => unreachable!("handled above"),
                })
            } else {
                None
            };
            match value {
                Some(v) => {
                    fields.insert(spec.key, v);
                }
                None if spec.presence == crate::model::Presence::Required => {
                    return self.malformed(format!("`{}` item missing required `{}`", kind.code(), spec.key));
                }
                None => {}
            }
        }
        Ok(fields)
    }

    fn property_head(&mut self) -> Result<(Option<String>, Extras)> {
        let expression = if self.eat("x")? { Some(self.text()?) } else { None };
        Ok((expression, self.extras()?))
    }

    fn vector_property(&mut self, ty: FieldType) -> Result<Property<Vector>> {
        let color = ty == FieldType::Color;
        let animated = if self.eat("PROP_ANIMATED")? {
            true
        } else if self.eat("PROP_STATIC")? {
            false
        } else {
            let found = describe(self.peek()?);
            return self.malformed(format!("expected property, found {found}"));
        };
        let (expression, extras) = self.property_head()?;
        let value = if animated {
            PropValue::Animated(self.keyframes(|dec| dec.vector(color))?)
        } else {
            PropValue::Static(self.vector(color)?)
        };
        Ok(Property {
            value,
            expression,
            extras,
        })
    }

    fn path_property(&mut self) -> Result<Property<BezierPath>> {
        let animated = self.eat("KS_ANIMATED")?;
        if !animated {
            self.expect("KS_STATIC")?;
        }
        let (expression, extras) = self.property_head()?;
        let value = if animated {
            PropValue::Animated(self.keyframes(|dec| dec.bezier())?)
        } else {
            PropValue::Static(self.bezier()?)
        };
        Ok(Property {
            value,
            expression,
            extras,
        })
    }

    fn keyframes<V>(&mut self, value: impl Fn(&mut Self) -> Result<V>) -> Result<Vec<Keyframe<V>>> {
        self.expect("PROP_KF_START")?;
        let mut kfs = Vec::new();
        while self.eat("t")? {
            let time = self.number()?;
            let v = value(self)?;
            let hold = self.eat("h")?;
            let extras = self.extras()?;
            let easing = if self.eat("ease")? { Some(self.ease()?) } else { None };
            kfs.push(Keyframe {
                time,
                value: v,
                easing,
                hold,
                extras,
            });
        }
        self.expect("PROP_KF_END")?;
        if kfs.is_empty() {
            return self.malformed("animated property without keyframes");
        }
        Ok(kfs)
    }

    fn ease(&mut self) -> Result<Easing> {
        let mut curves = Vec::new();
        loop {
            match self.peek()? {
                Token::Structural(name) => match name.strip_prefix("EASE_").and_then(|id| id.parse::<u8>().ok()) {
                    Some(id) => match preset(id) {
                        Some(p) => {
                            curves.push(p.curve);
                            self.pos += 1;
                        }
                        None => return self.malformed(format!("easing preset {id} is not assigned")),
                    },
                    None => break,
                },
                Token::Numeric(_) => {
                    let start = self.pos;
                    let params = self.numbers()?;
                    if params.len() % 4 != 0 {
                        self.pos = start;
                        return self.malformed(format!("easing needs 4 numbers per dimension, found {}", params.len()));
                    }
                    for c in params.chunks(4) {
                        if !(0.0..=1.0).contains(&c[0]) || !(0.0..=1.0).contains(&c[2]) {
                            self.pos = start;
                            return self.malformed("easing handle x outside [0, 1]");
                        }
                        curves.push(EasingCurve::new(c[2], c[3], c[0], c[1]));
                    }
                }
                Token::Text(_) => return self.malformed("unexpected text in easing"),
            }
        }
        if curves.is_empty() {
            curves.push(EasingCurve::EASE_IN_OUT);
        }
        Ok(Easing::new(curves))
    }

    fn vector(&mut self, color: bool) -> Result<Vector> {
        if let Token::Text(s) = self.peek()? {
            if !color {
                return self.malformed("expected number, found text");
            }
            let Some(c) = parse_hex_color(s) else {
                return self.malformed(format!("bad hex color {s:?}"));
            };
            self.pos += 1;
            return Ok(c);
        }
        let values = self.numbers()?;
        if values.is_empty() {
            let found = describe(self.peek()?);
            return self.malformed(format!("expected number, found {found}"));
        }
        Ok(values)
    }

    fn points(&mut self, key: &str) -> Result<Vec<Point>> {
        self.expect(key)?;
        let values = self.numbers()?;
        if values.len() % 2 != 0 {
            return self.malformed(format!("odd coordinate count in `{key}`"));
        }
        Ok(values.chunks(2).map(|c| Point::new(c[0], c[1])).collect())
    }

    fn bezier(&mut self) -> Result<BezierPath> {
        let in_tangents = self.points("i")?;
        let out_tangents = self.points("o")?;
        let vertices = self.points("v")?;
        if in_tangents.len() != vertices.len() || out_tangents.len() != vertices.len() {
            return self.malformed("vertex and tangent counts differ");
        }
        let closed = self.eat("c")?;
        Ok(BezierPath {
            vertices,
            in_tangents,
            out_tangents,
            closed,
        })
    }

    fn extras(&mut self) -> Result<Extras> {
        let mut extras = Map::new();
        while self.eat("EXTRA")? {
            let key = self.text()?;
            let value = self.json()?;
            extras.insert(key, value);
        }
        Ok(extras)
    }

    fn json(&mut self) -> Result<Value> {
        let token = self.next()?;
        Ok(match token {
            Token::Numeric(x) => json_number(x),
            Token::Text(s) => Value::String(s),
            Token::Structural("null") => Value::Null,
            Token::Structural("true") => Value::Bool(true),
            Token::Structural("false") => Value::Bool(false),
            Token::Structural("J_ARR") => {
                let mut items = Vec::new();
                while !self.eat("J_END")? {
                    items.push(self.json()?);
                }
                Value::Array(items)
            }
            Token::Structural("J_OBJ") => {
                let mut map = Map::new();
                while !self.eat("J_END")? {
                    let key = self.text()?;
                    map.insert(key, self.json()?);
                }
                Value::Object(map)
            }
            Token::Structural(other) => {
                self.pos -= 1;
                return self.malformed(format!("unexpected <|{other}|> in value"));
            }
        })
    }
}

fn describe(token: &Token) -> String {
    match token {
        Token::Structural(name) => format!("<|{name}|>"),
        Token::Numeric(x) => format!("number {x}"),
        Token::Text(s) => format!("text {s:?}"),
    }
}
