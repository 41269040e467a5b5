use std::collections::BTreeMap;

use super::{BezierPath, Extras, GradientColors, Property, Transform, Vector};

/// Shape item kinds (`ty` codes).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Path,
    Ellipse,
    Rectangle,
    PolyStar,
    Fill,
    Stroke,
    GradientFill,
    GradientStroke,
    Group,
    RoundedCorners,
    Transform,
    /// Any other `ty` (trim paths, repeaters, merges, ...). Parsed and kept
    /// verbatim, rejected by the tokenizer.
    Unsupported(String),
}

impl ShapeKind {
    pub const SUPPORTED: [ShapeKind; 11] = [
        ShapeKind::Path,
        ShapeKind::Ellipse,
        ShapeKind::Rectangle,
        ShapeKind::PolyStar,
        ShapeKind::Fill,
        ShapeKind::Stroke,
        ShapeKind::GradientFill,
        ShapeKind::GradientStroke,
        ShapeKind::Group,
        ShapeKind::RoundedCorners,
        ShapeKind::Transform,
    ];

    pub fn code(&self) -> &str {
        match self {
            ShapeKind::Path => "sh",
            ShapeKind::Ellipse => "el",
            ShapeKind::Rectangle => "rc",
            ShapeKind::PolyStar => "sr",
            ShapeKind::Fill => "fl",
            ShapeKind::Stroke => "st",
            ShapeKind::GradientFill => "gf",
            ShapeKind::GradientStroke => "gs",
            ShapeKind::Group => "gr",
            ShapeKind::RoundedCorners => "rd",
            ShapeKind::Transform => "tr",
            ShapeKind::Unsupported(code) => code,
        }
    }

    pub fn from_code(code: &str) -> ShapeKind {
        Self::SUPPORTED
            .iter()
            .find(|k| k.code() == code)
            .cloned()
            .unwrap_or_else(|| ShapeKind::Unsupported(code.to_string()))
    }

    /// Typed fields of leaf kinds, in emission order. Empty for groups,
    /// transforms and unsupported kinds.
    pub fn fields(&self) -> &'static [FieldSpec] {
        match self {
            ShapeKind::Path => PATH,
            ShapeKind::Ellipse => ELLIPSE,
            ShapeKind::Rectangle => RECTANGLE,
            ShapeKind::PolyStar => POLYSTAR,
            ShapeKind::Fill => FILL,
            ShapeKind::Stroke => STROKE,
            ShapeKind::GradientFill => GRADIENT_FILL,
            ShapeKind::GradientStroke => GRADIENT_STROKE,
            ShapeKind::RoundedCorners => ROUNDED_CORNERS,
            ShapeKind::Group | ShapeKind::Transform | ShapeKind::Unsupported(_) => &[],
        }
    }

    pub fn field(&self, key: &str) -> Option<&'static FieldSpec> {
        self.fields().iter().find(|f| f.key == key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldType {
    /// Numeric property.
    Prop,
    /// Color property (RGB or RGBA in [0,1]).
    Color,
    /// Bezier path property.
    Path,
    /// Gradient stops (`{"p": n, "k": prop}`).
    Gradient,
    /// Plain integer enum/flag.
    Int,
    /// Plain number.
    Number,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Presence {
    Required,
    /// Filled with this static value when absent.
    Default(&'static [f64]),
    Optional,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    pub key: &'static str,
    pub ty: FieldType,
    pub presence: Presence,
}

const fn req(key: &'static str, ty: FieldType) -> FieldSpec {
    FieldSpec {
        key,
        ty,
        presence: Presence::Required,
    }
}

const fn opt(key: &'static str, ty: FieldType) -> FieldSpec {
    FieldSpec {
        key,
        ty,
        presence: Presence::Optional,
    }
}

const fn dflt(key: &'static str, value: &'static [f64]) -> FieldSpec {
    FieldSpec {
        key,
        ty: FieldType::Prop,
        presence: Presence::Default(value),
    }
}

use FieldType::{Color, Gradient, Int, Number, Path, Prop};

const PATH: &[FieldSpec] = &[req("ks", Path), opt("d", Int)];
const ELLIPSE: &[FieldSpec] = &[req("p", Prop), req("s", Prop), opt("d", Int)];
const RECTANGLE: &[FieldSpec] = &[req("p", Prop), req("s", Prop), dflt("r", &[0.0]), opt("d", Int)];
const POLYSTAR: &[FieldSpec] = &[
    req("p", Prop),
    req("or", Prop),
    dflt("os", &[0.0]),
    dflt("r", &[0.0]),
    req("pt", Prop),
    req("sy", Int),
    opt("ir", Prop),
    opt("is", Prop),
    opt("d", Int),
];
const FILL: &[FieldSpec] = &[req("c", Color), dflt("o", &[100.0]), opt("r", Int)];
const STROKE: &[FieldSpec] = &[
    req("c", Color),
    dflt("o", &[100.0]),
    req("w", Prop),
    opt("lc", Int),
    opt("lj", Int),
    opt("ml", Number),
];
const GRADIENT_FILL: &[FieldSpec] = &[
    dflt("o", &[100.0]),
    req("s", Prop),
    req("e", Prop),
    req("t", Int),
    req("g", Gradient),
    opt("h", Prop),
    opt("a", Prop),
    opt("r", Int),
];
const GRADIENT_STROKE: &[FieldSpec] = &[
    dflt("o", &[100.0]),
    req("s", Prop),
    req("e", Prop),
    req("t", Int),
    req("g", Gradient),
    opt("h", Prop),
    opt("a", Prop),
    req("w", Prop),
    opt("lc", Int),
    opt("lj", Int),
    opt("ml", Number),
];
const ROUNDED_CORNERS: &[FieldSpec] = &[req("r", Prop)];

#[derive(Debug, Clone, PartialEq)]
pub enum FieldValue {
    Prop(Property<Vector>),
    Color(Property<Vector>),
    Path(Property<BezierPath>),
    Gradient(GradientColors),
    Int(i64),
    Number(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeBody {
    Fields(BTreeMap<&'static str, FieldValue>),
    Group(Vec<ShapeItem>),
    Transform(Transform),
    /// Unsupported kind: the full JSON object minus `ty`.
    Raw(Extras),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeItem {
    pub kind: ShapeKind,
    pub body: ShapeBody,
    pub extras: Extras,
}

impl ShapeItem {
    pub fn group(items: Vec<ShapeItem>) -> Self {
        Self {
            kind: ShapeKind::Group,
            body: ShapeBody::Group(items),
            extras: Extras::new(),
        }
    }

    pub fn transform(tr: Transform) -> Self {
        Self {
            kind: ShapeKind::Transform,
            body: ShapeBody::Transform(tr),
            extras: Extras::new(),
        }
    }

    /// Leaf item from `(key, value)` pairs; keys must belong to `kind`.
    pub fn leaf(kind: ShapeKind, fields: Vec<(&'static str, FieldValue)>) -> Self {
        debug_assert!(fields.iter().all(|(k, _)| kind.field(k).is_some()));
        Self {
            kind,
            body: ShapeBody::Fields(fields.into_iter().collect()),
            extras: Extras::new(),
        }
    }

    pub fn field(&self, key: &str) -> Option<&FieldValue> {
        match &self.body {
            ShapeBody::Fields(fields) => fields.get(key),
            _ => None,
        }
    }

    pub fn children(&self) -> &[ShapeItem] {
        match &self.body {
            ShapeBody::Group(items) => items,
            _ => &[],
        }
    }
}
