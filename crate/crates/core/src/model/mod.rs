//! Typed in-memory Lottie document.
//!
//! The tree mirrors the bodymovin schema: animation meta, assets, layers,
//! shape items and (possibly animated) properties. Fields outside the typed
//! subset are kept verbatim in per-node [`Extras`] maps so that nothing is
//! silently dropped; the optimizer is the only place that removes data.

mod canonical;
mod parse;
mod serialize;
mod shape;

use serde_json::Value;

use crate::easing::EasingCurve;

pub use canonical::{canonical_equal, canonical_value, values_equal_sig};
pub use parse::{parse, parse_hex_color, parse_value, parse_with, ParseError, ParseOptions};
pub use serialize::{hex_color, serialize, serialize_pretty, to_value};
pub use shape::{FieldSpec, FieldType, FieldValue, Presence, ShapeBody, ShapeItem, ShapeKind};

/// Unknown JSON fields of a node, in source order.
pub type Extras = serde_json::Map<String, Value>;

/// Numeric property value; 1 to 4 components.
pub type Vector = Vec<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub meta: AnimationMeta,
    pub assets: Vec<Asset>,
    pub layers: Vec<Layer>,
    pub extras: Extras,
    /// Serialize colors whose channels are exact multiples of 1/255 as hex
    /// strings. Not part of canonical equality.
    pub hex_colors: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnimationMeta {
    pub version: String,
    pub frame_rate: f64,
    pub in_point: f64,
    pub out_point: f64,
    pub width: f64,
    pub height: f64,
    pub three_d: bool,
}

impl AnimationMeta {
    pub fn duration_frames(&self) -> f64 {
        self.out_point - self.in_point
    }

    pub fn duration_seconds(&self) -> f64 {
        self.duration_frames() / self.frame_rate
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Asset {
    pub id: String,
    /// `Some` for precompositions, `None` for image and other assets.
    pub layers: Option<Vec<Layer>>,
    pub extras: Extras,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerType {
    Precomp,
    Solid,
    Image,
    Null,
    Shape,
}

impl LayerType {
    pub fn code(self) -> i64 {
        match self {
            LayerType::Precomp => 0,
            LayerType::Solid => 1,
            LayerType::Image => 2,
            LayerType::Null => 3,
            LayerType::Shape => 4,
        }
    }

    pub fn from_code(code: i64) -> Option<Self> {
        Some(match code {
            0 => LayerType::Precomp,
            1 => LayerType::Solid,
            2 => LayerType::Image,
            3 => LayerType::Null,
            4 => LayerType::Shape,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub layer_type: LayerType,
    pub in_point: f64,
    pub out_point: f64,
    pub start_time: f64,
    pub blend_mode: i64,
    pub index: Option<i64>,
    pub parent_index: Option<i64>,
    pub transform: Transform,
    /// Always empty unless `layer_type` is [`LayerType::Shape`].
    pub shapes: Vec<ShapeItem>,
    pub extras: Extras,
}

/// Layer (`ks`) or group (`tr`) transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform {
    pub position: Property<Vector>,
    pub anchor: Property<Vector>,
    pub scale: Property<Vector>,
    pub rotation: Property<Vector>,
    pub opacity: Property<Vector>,
    pub skew: Option<Property<Vector>>,
    pub skew_axis: Option<Property<Vector>>,
    pub extras: Extras,
}

impl Default for Transform {
    fn default() -> Self {
        Self {
            position: Property::fixed(vec![0.0, 0.0]),
            anchor: Property::fixed(vec![0.0, 0.0]),
            scale: Property::fixed(vec![100.0, 100.0]),
            rotation: Property::fixed(vec![0.0]),
            opacity: Property::fixed(vec![100.0]),
            skew: None,
            skew_axis: None,
            extras: Extras::new(),
        }
    }
}

impl Transform {
    /// The five core properties with their JSON keys.
    pub fn core(&self) -> [(&'static str, &Property<Vector>); 5] {
        [
            ("p", &self.position),
            ("a", &self.anchor),
            ("s", &self.scale),
            ("r", &self.rotation),
            ("o", &self.opacity),
        ]
    }

    /// Every present property with its JSON key, in emission order.
    pub fn properties(&self) -> Vec<(&'static str, &Property<Vector>)> {
        let mut out = self.core().to_vec();
        if let Some(sk) = &self.skew {
            out.push(("sk", sk));
        }
        if let Some(sa) = &self.skew_axis {
            out.push(("sa", sa));
        }
        out
    }

    pub fn properties_mut(&mut self) -> Vec<(&'static str, &mut Property<Vector>)> {
        let mut out: Vec<(&'static str, &mut Property<Vector>)> = vec![
            ("p", &mut self.position),
            ("a", &mut self.anchor),
            ("s", &mut self.scale),
            ("r", &mut self.rotation),
            ("o", &mut self.opacity),
        ];
        if let Some(sk) = &mut self.skew {
            out.push(("sk", sk));
        }
        if let Some(sa) = &mut self.skew_axis {
            out.push(("sa", sa));
        }
        out
    }
}

/// Cubic bezier path: vertices with tangents relative to their vertex.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BezierPath {
    pub vertices: Vec<Point>,
    pub in_tangents: Vec<Point>,
    pub out_tangents: Vec<Point>,
    pub closed: bool,
}

impl BezierPath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Gradient stops (`g`): `count` color stops followed by optional opacity stops.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientColors {
    pub count: i64,
    pub colors: Property<Vector>,
    pub extras: Extras,
}

/// A value that is either fixed or keyframed.
#[derive(Debug, Clone, PartialEq)]
pub struct Property<V> {
    pub value: PropValue<V>,
    /// After Effects expression (`x`); ignored by players.
    pub expression: Option<String>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PropValue<V> {
    Static(V),
    Animated(Vec<Keyframe<V>>),
}

impl<V> Property<V> {
    pub fn fixed(value: V) -> Self {
        Self {
            value: PropValue::Static(value),
            expression: None,
            extras: Extras::new(),
        }
    }

    pub fn animated(keyframes: Vec<Keyframe<V>>) -> Self {
        Self {
            value: PropValue::Animated(keyframes),
            expression: None,
            extras: Extras::new(),
        }
    }

    pub fn is_animated(&self) -> bool {
        matches!(self.value, PropValue::Animated(_))
    }

    pub fn keyframes(&self) -> &[Keyframe<V>] {
        match &self.value {
            PropValue::Animated(kfs) => kfs,
            PropValue::Static(_) => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Keyframe<V> {
    pub time: f64,
    pub value: V,
    /// Outgoing easing towards the next keyframe; meaningless on the last one.
    pub easing: Option<Easing>,
    /// Hold (`h: 1`): the value jumps at the next keyframe.
    pub hold: bool,
    pub extras: Extras,
}

impl<V> Keyframe<V> {
    pub fn new(time: f64, value: V, easing: Option<Easing>) -> Self {
        Self {
            time,
            value,
            easing,
            hold: false,
            extras: Extras::new(),
        }
    }
}

/// Per-dimension easing curves of one keyframe segment. A single curve
/// applies to every dimension; shorter lists broadcast their last entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Easing {
    curves: Vec<EasingCurve>,
}

impl Easing {
    pub fn new(curves: Vec<EasingCurve>) -> Self {
        assert!(!curves.is_empty(), "easing needs at least one curve");
        let mut easing = Self { curves };
        easing.normalize();
        easing
    }

    pub fn uniform(curve: EasingCurve) -> Self {
        Self {
            curves: vec![curve],
        }
    }

    pub fn curves(&self) -> &[EasingCurve] {
        &self.curves
    }

    pub fn curves_mut(&mut self) -> &mut [EasingCurve] {
        &mut self.curves
    }

    /// Curve for dimension `dim`, broadcasting the last entry.
    pub fn for_dim(&self, dim: usize) -> &EasingCurve {
        &self.curves[dim.min(self.curves.len() - 1)]
    }

    /// Collapses identical per-dimension curves into one.
    pub fn normalize(&mut self) {
        if self.curves.windows(2).all(|w| w[0] == w[1]) {
            self.curves.truncate(1);
        }
    }
}

impl Document {
    /// Minimal empty animation.
    pub fn new(frame_rate: f64, in_point: f64, out_point: f64, width: f64, height: f64) -> Self {
        Self {
            meta: AnimationMeta {
                version: "5.9.5".to_string(),
                frame_rate,
                in_point,
                out_point,
                width,
                height,
                three_d: false,
            },
            assets: Vec::new(),
            layers: Vec::new(),
            extras: Extras::new(),
            hex_colors: false,
        }
    }

    /// Every numeric property in the document with its dotted key path
    /// (`layers[0].ks.r`, `layers[0].shapes[1].it[0].c`).
    pub fn vector_properties(&self) -> Vec<(String, &Property<Vector>)> {
        let mut out = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            collect_layer(&format!("layers[{i}]"), layer, &mut out);
        }
        for (i, asset) in self.assets.iter().enumerate() {
            if let Some(layers) = &asset.layers {
                for (j, layer) in layers.iter().enumerate() {
                    collect_layer(&format!("assets[{i}].layers[{j}]"), layer, &mut out);
                }
            }
        }
        out
    }

    pub fn find_property(&self, path: &str) -> Option<&Property<Vector>> {
        self.vector_properties()
            .into_iter()
            .find(|(p, _)| p == path)
            .map(|(_, prop)| prop)
    }
}

/// Mutable traversal hooks over every node of a [`Document`]. List hooks
/// run before their elements are visited, so they may drop elements.
pub trait Visitor {
    fn layers(&mut self, _layers: &mut Vec<Layer>) {}
    fn items(&mut self, _items: &mut Vec<ShapeItem>) {}
    fn vector(&mut self, _prop: &mut Property<Vector>, _ty: FieldType) {}
    fn path(&mut self, _prop: &mut Property<BezierPath>) {}
    fn extras(&mut self, _extras: &mut Extras) {}
}

impl Document {
    pub fn walk_mut(&mut self, visitor: &mut dyn Visitor) {
        visitor.extras(&mut self.extras);
        for asset in &mut self.assets {
            visitor.extras(&mut asset.extras);
            if let Some(layers) = &mut asset.layers {
                walk_layers(layers, visitor);
            }
        }
        walk_layers(&mut self.layers, visitor);
    }
}

fn walk_layers(layers: &mut Vec<Layer>, visitor: &mut dyn Visitor) {
    visitor.layers(layers);
    for layer in layers {
        visitor.extras(&mut layer.extras);
        walk_transform(&mut layer.transform, visitor);
        walk_items(&mut layer.shapes, visitor);
    }
}

fn walk_transform(tr: &mut Transform, visitor: &mut dyn Visitor) {
    visitor.extras(&mut tr.extras);
    for (_, prop) in tr.properties_mut() {
        walk_property(prop, visitor);
        visitor.vector(prop, FieldType::Prop);
    }
}

fn walk_property<V>(prop: &mut Property<V>, visitor: &mut dyn Visitor) {
    visitor.extras(&mut prop.extras);
    if let PropValue::Animated(kfs) = &mut prop.value {
        for kf in kfs {
            visitor.extras(&mut kf.extras);
        }
    }
}

fn walk_items(items: &mut Vec<ShapeItem>, visitor: &mut dyn Visitor) {
    visitor.items(items);
    for item in items {
        visitor.extras(&mut item.extras);
        match &mut item.body {
            ShapeBody::Group(children) => walk_items(children, visitor),
            ShapeBody::Transform(tr) => walk_transform(tr, visitor),
            ShapeBody::Raw(raw) => visitor.extras(raw),
            ShapeBody::Fields(fields) => {
                for value in fields.values_mut() {
                    match value {
                        FieldValue::Prop(p) => {
                            walk_property(p, visitor);
                            visitor.vector(p, FieldType::Prop);
                        }
                        FieldValue::Color(p) => {
                            walk_property(p, visitor);
                            visitor.vector(p, FieldType::Color);
                        }
                        FieldValue::Path(p) => {
                            walk_property(p, visitor);
                            visitor.path(p);
                        }
                        FieldValue::Gradient(g) => {
                            visitor.extras(&mut g.extras);
                            walk_property(&mut g.colors, visitor);
                            visitor.vector(&mut g.colors, FieldType::Gradient);
                        }
                        FieldValue::Int(_) | FieldValue::Number(_) => {}
                    }
                }
            }
        }
    }
}

fn collect_layer<'a>(prefix: &str, layer: &'a Layer, out: &mut Vec<(String, &'a Property<Vector>)>) {
    collect_transform(&format!("{prefix}.ks"), &layer.transform, out);
    collect_items(&format!("{prefix}.shapes"), &layer.shapes, out);
}

fn collect_transform<'a>(prefix: &str, tr: &'a Transform, out: &mut Vec<(String, &'a Property<Vector>)>) {
    for (key, prop) in tr.properties() {
        out.push((format!("{prefix}.{key}"), prop));
    }
}

fn collect_items<'a>(prefix: &str, items: &'a [ShapeItem], out: &mut Vec<(String, &'a Property<Vector>)>) {
    for (i, item) in items.iter().enumerate() {
        let here = format!("{prefix}[{i}]");
        match &item.body {
            ShapeBody::Group(children) => collect_items(&format!("{here}.it"), children, out),
            ShapeBody::Transform(tr) => collect_transform(&here, tr, out),
            ShapeBody::Fields(fields) => {
                for (key, value) in fields {
                    match value {
                        FieldValue::Prop(p) | FieldValue::Color(p) => {
                            out.push((format!("{here}.{key}"), p));
                        }
                        FieldValue::Gradient(g) => out.push((format!("{here}.{key}.k"), &g.colors)),
                        _ => {}
                    }
                }
            }
            ShapeBody::Raw(_) => {}
        }
    }
}
