//! Seeded generator of random, schema-valid documents.
//!
//! Output covers every supported shape kind, static and animated
//! properties, custom, preset, per-dimension and hold easing, assets,
//! precomp/null/solid/image layers and parenting. The same seed and
//! config always yield the same document.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::easing::{EasingCurve, PRESETS};
use crate::model::{
    Asset, BezierPath, Document, Easing, Extras, FieldValue, GradientColors, Keyframe, Layer, LayerType, Point,
    PropValue, Property, ShapeItem, ShapeKind, Transform, Vector,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub frame_rate: f64,
    /// `op - ip`.
    pub frames: f64,
    pub max_layers: usize,
    /// Items per group, excluding the trailing transform.
    pub max_items: usize,
    pub max_depth: usize,
    /// Keyframes per animated property, inclusive.
    pub keyframes: (usize, usize),
    pub animated_probability: f64,
    /// Keyframe times on whole frames.
    pub integer_times: bool,
    /// Decimal places kept on generated values; `None` keeps full precision.
    pub decimals: Option<i32>,
    /// Exporter bookkeeping fields (`nm`, `mn`, `ix`, ...) on every node.
    pub verbose: bool,
    pub expressions: bool,
    pub assets: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            frame_rate: 30.0,
            frames: 90.0,
            max_layers: 4,
            max_items: 4,
            max_depth: 2,
            keyframes: (2, 4),
            animated_probability: 0.4,
            integer_times: true,
            decimals: Some(3),
            verbose: false,
            expressions: false,
            assets: true,
        }
    }
}

const LEAF_KINDS: [ShapeKind; 9] = [
    ShapeKind::Path,
    ShapeKind::Ellipse,
    ShapeKind::Rectangle,
    ShapeKind::PolyStar,
    ShapeKind::Fill,
    ShapeKind::Stroke,
    ShapeKind::GradientFill,
    ShapeKind::GradientStroke,
    ShapeKind::RoundedCorners,
];

pub fn generate(seed: u64, config: &SynthConfig) -> Document {
    Synth {
        rng: StdRng::seed_from_u64(seed),
        cfg: config,
        counter: 0,
    }
    .document()
}

/// Documents for seeds `0..count`.
pub fn corpus(count: u64, config: &SynthConfig) -> Vec<Document> {
    (0..count).map(|seed| generate(seed, config)).collect()
}

struct Synth<'a> {
    rng: StdRng,
    cfg: &'a SynthConfig,
    counter: usize,
}

impl Synth<'_> {
    fn num(&mut self, lo: f64, hi: f64) -> f64 {
        let x = self.rng.gen_range(lo..=hi);
        match self.cfg.decimals {
            Some(d) => {
                let scale = 10f64.powi(d);
                (x * scale).round() / scale
            }
            None => x,
        }
    }

    fn vector(&mut self, ranges: &[(f64, f64)]) -> Vector {
        ranges.iter().map(|&(lo, hi)| self.num(lo, hi)).collect()
    }

    fn next_index(&mut self) -> usize {
        self.counter += 1;
        self.counter
    }

    fn name(&mut self, extras: &mut Extras, label: &str, match_name: &str) {
        if self.cfg.verbose {
            let n = self.next_index();
            extras.insert("nm".into(), json!(format!("{label} {n}")));
            extras.insert("mn".into(), json!(match_name));
            extras.insert("hd".into(), json!(false));
        }
    }

    fn curve(&mut self) -> EasingCurve {
        if self.rng.gen_bool(0.35) {
            return PRESETS.choose(&mut self.rng).expect("presets").curve;
        }
        let ox = self.num(0.0, 1.0);
        let oy = self.num(-1.0, 2.0);
        let ix = self.num(0.0, 1.0);
        let iy = self.num(-1.0, 2.0);
        EasingCurve::new(ox, oy, ix, iy)
    }

    fn easing(&mut self, dims: usize) -> Easing {
        if dims > 1 && self.rng.gen_bool(0.2) {
            Easing::new((0..dims).map(|_| self.curve()).collect())
        } else {
            Easing::uniform(self.curve())
        }
    }

    fn times(&mut self, count: usize) -> Vec<f64> {
        let (ip, frames) = (0.0, self.cfg.frames);
        let mut fractions: Vec<f64> = (0..count).map(|_| self.rng.gen::<f64>()).collect();
        fractions.sort_by(f64::total_cmp);
        let mut times: Vec<f64> = fractions.iter().map(|f| ip + f * frames).collect();
        if self.cfg.integer_times {
            for t in &mut times {
                *t = t.round();
            }
        }
        for i in 1..times.len() {
            if times[i] <= times[i - 1] {
                times[i] = if self.cfg.integer_times { times[i - 1] + 1.0 } else { times[i - 1] + 1e-3 };
            }
        }
        times
    }

    fn keyframe_count(&mut self) -> usize {
        let (lo, hi) = self.cfg.keyframes;
        self.rng.gen_range(lo.max(2)..=hi.max(lo.max(2)))
    }

    fn animate<V>(&mut self, dims: usize, mut value: impl FnMut(&mut Self) -> V) -> PropValue<V> {
        let count = self.keyframe_count();
        let times = self.times(count);
        let keyframes = times
            .into_iter()
            .enumerate()
            .map(|(i, time)| {
                let last = i + 1 == count;
                let mut kf = Keyframe::new(time, value(self), None);
                if !last {
                    if self.rng.gen_bool(0.1) {
                        kf.hold = true;
                    } else {
                        kf.easing = Some(self.easing(dims));
                    }
                }
                kf
            })
            .collect();
        PropValue::Animated(keyframes)
    }

    fn finish<V>(&mut self, value: PropValue<V>) -> Property<V> {
        let mut prop = Property {
            value,
            expression: None,
            extras: Extras::new(),
        };
        if self.cfg.expressions && self.rng.gen_bool(0.05) {
            prop.expression = Some("loopOut('cycle')".to_string());
        }
        if self.cfg.verbose {
            let ix = self.next_index();
            prop.extras.insert("ix".into(), json!(ix));
        }
        prop
    }

    fn prop(&mut self, ranges: &[(f64, f64)]) -> Property<Vector> {
        let value = if self.rng.gen_bool(self.cfg.animated_probability) {
            self.animate(ranges.len(), |s| s.vector(ranges))
        } else {
            PropValue::Static(self.vector(ranges))
        };
        self.finish(value)
    }

    fn color(&mut self) -> Property<Vector> {
        let dims = if self.rng.gen_bool(0.7) { 4 } else { 3 };
        let mut ranges = vec![(0.0, 1.0); dims];
        if dims == 4 {
            ranges[3] = (1.0, 1.0);
        }
        self.prop(&ranges)
    }

    fn bezier(&mut self, vertices: usize, closed: bool) -> BezierPath {
        let point = |s: &mut Self, lo: f64, hi: f64| Point::new(s.num(lo, hi), s.num(lo, hi));
        BezierPath {
            vertices: (0..vertices).map(|_| point(self, -200.0, 200.0)).collect(),
            in_tangents: (0..vertices).map(|_| point(self, -50.0, 50.0)).collect(),
            out_tangents: (0..vertices).map(|_| point(self, -50.0, 50.0)).collect(),
            closed,
        }
    }

    fn path(&mut self) -> Property<BezierPath> {
        let vertices = self.rng.gen_range(1..=6);
        let closed = self.rng.gen_bool(0.7);
        let value = if self.rng.gen_bool(self.cfg.animated_probability) {
            self.animate(1, |s| s.bezier(vertices, closed))
        } else {
            PropValue::Static(self.bezier(vertices, closed))
        };
        self.finish(value)
    }

    fn gradient(&mut self) -> GradientColors {
        let count = self.rng.gen_range(2..=4);
        let with_alpha = self.rng.gen_bool(0.3);
        let stops = |s: &mut Self| {
            let mut offsets: Vec<f64> = (0..count).map(|_| s.num(0.0, 1.0)).collect();
            offsets.sort_by(f64::total_cmp);
            let mut values: Vec<f64> = offsets
                .iter()
                .flat_map(|&o| [o, s.num(0.0, 1.0), s.num(0.0, 1.0), s.num(0.0, 1.0)])
                .collect();
            if with_alpha {
                values.extend(offsets.iter().flat_map(|&o| [o, s.num(0.0, 1.0)]));
            }
            values
        };
        let value = if self.rng.gen_bool(self.cfg.animated_probability) {
            self.animate(1, stops)
        } else {
            PropValue::Static(stops(self))
        };
        GradientColors {
            count: count as i64,
            colors: self.finish(value),
            extras: Extras::new(),
        }
    }

    fn transform(&mut self) -> Transform {
        let mut tr = Transform {
            position: self.prop(&[(0.0, 512.0), (0.0, 512.0)]),
            anchor: self.prop(&[(-50.0, 50.0), (-50.0, 50.0)]),
            scale: self.prop(&[(0.0, 200.0), (0.0, 200.0)]),
            rotation: self.prop(&[(-360.0, 360.0)]),
            opacity: self.prop(&[(0.0, 100.0)]),
            skew: None,
            skew_axis: None,
            extras: Extras::new(),
        };
        if self.rng.gen_bool(0.15) {
            tr.skew = Some(self.prop(&[(-45.0, 45.0)]));
            tr.skew_axis = Some(self.prop(&[(-90.0, 90.0)]));
        }
        tr
    }

    fn stroke_fields(&mut self, fields: &mut Vec<(&'static str, FieldValue)>) {
        fields.push(("w", FieldValue::Prop(self.prop(&[(0.0, 20.0)]))));
        fields.push(("lc", FieldValue::Int(self.rng.gen_range(1..=3))));
        fields.push(("lj", FieldValue::Int(self.rng.gen_range(1..=3))));
        if self.rng.gen_bool(0.5) {
            fields.push(("ml", FieldValue::Number(self.num(1.0, 10.0))));
        }
    }

    fn gradient_fields(&mut self) -> Vec<(&'static str, FieldValue)> {
        let radial = self.rng.gen_bool(0.4);
        let mut fields = vec![
            ("o", FieldValue::Prop(self.prop(&[(0.0, 100.0)]))),
            ("s", FieldValue::Prop(self.prop(&[(-100.0, 100.0), (-100.0, 100.0)]))),
            ("e", FieldValue::Prop(self.prop(&[(-100.0, 100.0), (-100.0, 100.0)]))),
            ("t", FieldValue::Int(if radial { 2 } else { 1 })),
            ("g", FieldValue::Gradient(self.gradient())),
        ];
        if radial {
            fields.push(("h", FieldValue::Prop(self.prop(&[(-100.0, 100.0)]))));
            fields.push(("a", FieldValue::Prop(self.prop(&[(-180.0, 180.0)]))));
        }
        fields
    }

    fn leaf(&mut self, kind: ShapeKind) -> ShapeItem {
        let direction = |s: &mut Self, fields: &mut Vec<(&'static str, FieldValue)>| {
            if s.rng.gen_bool(0.3) {
                fields.push(("d", FieldValue::Int(if s.rng.gen_bool(0.5) { 1 } else { 3 })));
            }
        };
        let mut fields: Vec<(&'static str, FieldValue)> = Vec::new();
        let match_name = match kind {
            ShapeKind::Path => {
                fields.push(("ks", FieldValue::Path(self.path())));
                direction(self, &mut fields);
                "ADBE Vector Shape - Group"
            }
            ShapeKind::Ellipse => {
                fields.push(("p", FieldValue::Prop(self.prop(&[(-100.0, 100.0), (-100.0, 100.0)]))));
                fields.push(("s", FieldValue::Prop(self.prop(&[(0.0, 300.0), (0.0, 300.0)]))));
                direction(self, &mut fields);
                "ADBE Vector Shape - Ellipse"
            }
            ShapeKind::Rectangle => {
                fields.push(("p", FieldValue::Prop(self.prop(&[(-100.0, 100.0), (-100.0, 100.0)]))));
                fields.push(("s", FieldValue::Prop(self.prop(&[(0.0, 300.0), (0.0, 300.0)]))));
                fields.push(("r", FieldValue::Prop(self.prop(&[(0.0, 40.0)]))));
                direction(self, &mut fields);
                "ADBE Vector Shape - Rect"
            }
            ShapeKind::PolyStar => {
                let star = self.rng.gen_bool(0.5);
                fields.push(("p", FieldValue::Prop(self.prop(&[(-100.0, 100.0), (-100.0, 100.0)]))));
                fields.push(("or", FieldValue::Prop(self.prop(&[(10.0, 150.0)]))));
                fields.push(("os", FieldValue::Prop(self.prop(&[(0.0, 100.0)]))));
                fields.push(("r", FieldValue::Prop(self.prop(&[(-180.0, 180.0)]))));
                fields.push(("pt", FieldValue::Prop(self.prop(&[(3.0, 12.0)]))));
                fields.push(("sy", FieldValue::Int(if star { 1 } else { 2 })));
                if star {
                    fields.push(("ir", FieldValue::Prop(self.prop(&[(1.0, 80.0)]))));
                    fields.push(("is", FieldValue::Prop(self.prop(&[(0.0, 100.0)]))));
                }
                direction(self, &mut fields);
                "ADBE Vector Shape - Star"
            }
            ShapeKind::Fill => {
                fields.push(("c", FieldValue::Color(self.color())));
                fields.push(("o", FieldValue::Prop(self.prop(&[(0.0, 100.0)]))));
                if self.rng.gen_bool(0.5) {
                    fields.push(("r", FieldValue::Int(self.rng.gen_range(1..=2))));
                }
                "ADBE Vector Graphic - Fill"
            }
            ShapeKind::Stroke => {
                fields.push(("c", FieldValue::Color(self.color())));
                fields.push(("o", FieldValue::Prop(self.prop(&[(0.0, 100.0)]))));
                self.stroke_fields(&mut fields);
                "ADBE Vector Graphic - Stroke"
            }
            ShapeKind::GradientFill => {
                fields = self.gradient_fields();
                if self.rng.gen_bool(0.5) {
                    fields.push(("r", FieldValue::Int(self.rng.gen_range(1..=2))));
                }
                "ADBE Vector Graphic - G-Fill"
            }
            ShapeKind::GradientStroke => {
                fields = self.gradient_fields();
                self.stroke_fields(&mut fields);
                "ADBE Vector Graphic - G-Stroke"
            }
            ShapeKind::RoundedCorners => {
                fields.push(("r", FieldValue::Prop(self.prop(&[(0.0, 50.0)]))));
                "ADBE Vector Filter - RC"
            }
            ShapeKind::Group | ShapeKind::Transform | ShapeKind::Unsupported(_) => unreachable!("not a leaf kind"),
        };
        let mut item = ShapeItem::leaf(kind, fields);
        self.name(&mut item.extras, "Shape", match_name);
        item
    }

    fn items(&mut self, depth: usize) -> Vec<ShapeItem> {
        let count = self.rng.gen_range(1..=self.cfg.max_items.max(1));
        (0..count)
            .map(|_| {
                if depth < self.cfg.max_depth && self.rng.gen_bool(0.3) {
                    self.group(depth + 1)
                } else {
                    let kind = LEAF_KINDS.choose(&mut self.rng).expect("kinds").clone();
                    self.leaf(kind)
                }
            })
            .collect()
    }

    fn group(&mut self, depth: usize) -> ShapeItem {
        let mut items = self.items(depth);
        let mut tr = ShapeItem::transform(self.transform());
        self.name(&mut tr.extras, "Transform", "ADBE Vector Transform Group");
        items.push(tr);
        let mut group = ShapeItem::group(items);
        self.name(&mut group.extras, "Group", "ADBE Vector Group");
        if self.cfg.verbose {
            group.extras.insert("np".into(), json!(group.children().len()));
            group.extras.insert("cix".into(), json!(2));
            group.extras.insert("bm".into(), json!(0));
        }
        group
    }

    fn layer(&mut self, index: i64, kind: LayerType, ref_id: Option<&str>) -> Layer {
        let ip = 0.0;
        let op = self.cfg.frames;
        let mut layer = Layer {
            layer_type: kind,
            in_point: ip,
            out_point: op,
            start_time: 0.0,
            blend_mode: 0,
            index: Some(index),
            parent_index: None,
            transform: self.transform(),
            shapes: Vec::new(),
            extras: Extras::new(),
        };
        match kind {
            LayerType::Shape => layer.shapes = self.items(0),
            LayerType::Solid => {
                let color = format!("#{:06x}", self.rng.gen_range(0..0x0100_0000u32));
                layer.extras.insert("sc".into(), json!(color));
                layer.extras.insert("sw".into(), json!(self.rng.gen_range(1..=512)));
                layer.extras.insert("sh".into(), json!(self.rng.gen_range(1..=512)));
            }
            LayerType::Precomp | LayerType::Image => {
                layer.extras.insert("refId".into(), json!(ref_id.expect("asset id")));
                if kind == LayerType::Precomp {
                    layer.extras.insert("w".into(), json!(512));
                    layer.extras.insert("h".into(), json!(512));
                }
            }
            LayerType::Null => {}
        }
        if self.cfg.verbose {
            let match_name = match kind {
                LayerType::Shape => "Shape Layer",
                LayerType::Solid => "Solid Layer",
                LayerType::Precomp => "Precomp Layer",
                LayerType::Image => "Image Layer",
                LayerType::Null => "Null",
            };
            self.name(&mut layer.extras, match_name, "ADBE Layer");
            layer.extras.insert("ddd".into(), json!(0));
            layer.extras.insert("ao".into(), json!(0));
            layer.extras.insert("sr".into(), json!(1));
        }
        layer
    }

    fn document(mut self) -> Document {
        let cfg = self.cfg;
        let mut doc = Document::new(cfg.frame_rate, 0.0, cfg.frames, 512.0, 512.0);
        let mut refs: Vec<(LayerType, String)> = Vec::new();
        if cfg.assets && self.rng.gen_bool(0.3) {
            let count = self.rng.gen_range(1..=2);
            let layers = (1..=count).map(|i| self.layer(i, LayerType::Shape, None)).collect();
            doc.assets.push(Asset {
                id: "comp_0".to_string(),
                layers: Some(layers),
                extras: Extras::new(),
            });
            refs.push((LayerType::Precomp, "comp_0".to_string()));
        }
        if cfg.assets && self.rng.gen_bool(0.2) {
            let mut extras = Extras::new();
            for (k, v) in [("w", json!(64)), ("h", json!(64)), ("u", json!("images/")), ("p", json!("img_0.png")), ("e", json!(0))] {
                extras.insert(k.into(), v);
            }
            doc.assets.push(Asset {
                id: "image_0".to_string(),
                layers: None,
                extras,
            });
            refs.push((LayerType::Image, "image_0".to_string()));
        }

        let count = self.rng.gen_range(1..=cfg.max_layers.max(1));
        for i in 0..count {
            let index = i as i64 + 1;
            let roll = self.rng.gen_range(0..10);
            let layer = match roll {
                0 if !refs.is_empty() => {
                    let (kind, id) = refs[self.rng.gen_range(0..refs.len())].clone();
                    self.layer(index, kind, Some(&id))
                }
                1 => self.layer(index, LayerType::Null, None),
                2 => self.layer(index, LayerType::Solid, None),
                _ => self.layer(index, LayerType::Shape, None),
            };
            doc.layers.push(layer);
        }
        for i in 1..doc.layers.len() {
            if self.rng.gen_bool(0.2) {
                doc.layers[i].parent_index = Some(self.rng.gen_range(1..=i as i64));
            }
        }
        if cfg.verbose {
            doc.extras.insert("nm".into(), json!(format!("Comp {}", self.rng.gen_range(1..100))));
            doc.extras.insert("markers".into(), Value::Array(Vec::new()));
            doc.extras.insert("meta".into(), json!({"g": "LottieFiles AE 3.5.2", "a": "", "k": "", "d": "", "tc": ""}));
        }
        doc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonical_equal, parse, serialize};
    use crate::tokenizer::{detokenize, tokenize};

    #[test]
    fn deterministic() {
        let cfg = SynthConfig::default();
        assert_eq!(generate(7, &cfg), generate(7, &cfg));
        assert_ne!(generate(7, &cfg), generate(8, &cfg));
    }

    #[test]
    fn generated_documents_are_valid() {
        let cfg = SynthConfig {
            verbose: true,
            expressions: true,
            decimals: None,
            ..SynthConfig::default()
        };
        for seed in 0..200 {
            let doc = generate(seed, &cfg);
            let reparsed = parse(&serialize(&doc)).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(canonical_equal(&doc, &reparsed), "seed {seed}");
            let back = detokenize(&tokenize(&doc, false).unwrap()).unwrap();
            assert!(canonical_equal(&doc, &back), "seed {seed}");
        }
    }

    #[test]
    fn covers_every_shape_kind() {
        let mut seen = std::collections::HashSet::new();
        fn visit(items: &[ShapeItem], seen: &mut std::collections::HashSet<String>) {
            for item in items {
                seen.insert(item.kind.code().to_string());
                visit(item.children(), seen);
            }
        }
        for doc in corpus(60, &SynthConfig::default()) {
            for layer in &doc.layers {
                visit(&layer.shapes, &mut seen);
            }
        }
        for kind in ShapeKind::SUPPORTED {
            assert!(seen.contains(kind.code()), "missing {}", kind.code());
        }
    }

    #[test]
    fn keyframe_count_is_fixed_by_config() {
        let cfg = SynthConfig {
            keyframes: (3, 3),
            animated_probability: 1.0,
            ..SynthConfig::default()
        };
        let doc = generate(1, &cfg);
        assert!(doc.vector_properties().iter().all(|(_, p)| p.keyframes().len() == 3));
    }
}
