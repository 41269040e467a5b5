//! Size reduction that leaves rendering unchanged: expression removal,
//! metadata-field pruning, significant-digit rounding and hex colors.

use serde_json::Value;

use crate::easing::{sample_property, Interpolate};
use crate::model::{
    BezierPath, Document, Extras, FieldType, FieldValue, Keyframe, Layer, Point, PropValue, Property, ShapeBody,
    ShapeItem, Vector, Visitor,
};
use crate::num::{json_number, round_sig};

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeConfig {
    pub remove_expressions: bool,
    /// Keys deleted from every object. `hd` additionally deletes the
    /// layers and shape items it marks as hidden.
    pub prune_fields: Vec<String>,
    pub significant_digits: u32,
    pub hex_colors: bool,
    pub update_metadata: bool,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            remove_expressions: true,
            prune_fields: ["nm", "mn", "hd", "ix", "cix"].iter().map(|s| s.to_string()).collect(),
            significant_digits: 4,
            hex_colors: true,
            update_metadata: true,
        }
    }
}

pub fn optimize(doc: &Document, cfg: &OptimizeConfig) -> Document {
    assert!(cfg.significant_digits >= 1, "significant_digits must be >= 1");
    let mut out = doc.clone();
    if cfg.prune_fields.iter().any(|f| f == "hd") {
        out = drop_hidden(&out);
    }
    out.walk_mut(&mut Optimizer { cfg });
    let digits = cfg.significant_digits;
    let m = &mut out.meta;
    for x in [&mut m.frame_rate, &mut m.width, &mut m.height] {
        *x = round_sig(*x, digits);
    }
    out.hex_colors = cfg.hex_colors;
    if cfg.update_metadata {
        if let Some(v) = normalize_version(&out.meta.version) {
            out.meta.version = v;
        }
        out.extras.shift_remove("meta");
    }
    out
}

/// `doc` without layers and shape items flagged `"hd": true`.
pub fn drop_hidden(doc: &Document) -> Document {
    struct Hidden;
    impl Visitor for Hidden {
        fn layers(&mut self, layers: &mut Vec<Layer>) {
            layers.retain(|l| !is_hidden(&l.extras));
        }

        fn items(&mut self, items: &mut Vec<ShapeItem>) {
            items.retain(|item| {
                let tr_hidden = matches!(&item.body, ShapeBody::Transform(tr) if is_hidden(&tr.extras));
                !is_hidden(&item.extras) && !tr_hidden
            });
        }
    }
    let mut out = doc.clone();
    out.walk_mut(&mut Hidden);
    out
}

fn is_hidden(extras: &Extras) -> bool {
    matches!(extras.get("hd"), Some(Value::Bool(true)))
}

/// `"5.7"` -> `"5.7.0"`, `"5.5.2.1"` -> `"5.5.2"`; `None` unless the
/// version starts with numeric components.
fn normalize_version(version: &str) -> Option<String> {
    let parts: Vec<u32> = version.split('.').map_while(|p| p.trim().parse().ok()).collect();
    if parts.is_empty() {
        return None;
    }
    let get = |i: usize| parts.get(i).copied().unwrap_or(0);
    Some(format!("{}.{}.{}", get(0), get(1), get(2)))
}

struct Optimizer<'a> {
    cfg: &'a OptimizeConfig,
}

impl Optimizer<'_> {
    fn round(&self, x: f64) -> f64 {
        round_sig(x, self.cfg.significant_digits)
    }

    fn round_point(&self, p: &mut Point) {
        p.x = self.round(p.x);
        p.y = self.round(p.y);
    }

    /// Rounds easing handles. Keyframe times stay exact: on short segments
    /// a rounded time moves every sample in between.
    fn round_timing<V>(&self, kfs: &mut [Keyframe<V>]) {
        for kf in kfs {
            if let Some(easing) = &mut kf.easing {
                for curve in easing.curves_mut() {
                    self.round_point(&mut curve.p1);
                    self.round_point(&mut curve.p2);
                }
                easing.normalize();
            }
        }
    }

    fn round_json(&self, value: &mut Value) {
        match value {
            Value::Number(n) if n.as_i64().is_none() => {
                if let Some(x) = n.as_f64() {
                    *value = json_number(self.round(x));
                }
            }
            Value::Array(items) => items.iter_mut().for_each(|v| self.round_json(v)),
            Value::Object(map) => map.values_mut().for_each(|v| self.round_json(v)),
            _ => {}
        }
    }

    fn prune_json(&self, value: &mut Value) {
        match value {
            Value::Array(items) => items.iter_mut().for_each(|v| self.prune_json(v)),
            Value::Object(map) => {
                map.retain(|k, _| !self.cfg.prune_fields.contains(k));
                map.values_mut().for_each(|v| self.prune_json(v));
            }
            _ => {}
        }
    }
}

impl Visitor for Optimizer<'_> {
    fn items(&mut self, items: &mut Vec<ShapeItem>) {
        for item in items {
            if let ShapeBody::Fields(fields) = &mut item.body {
                for value in fields.values_mut() {
                    if let FieldValue::Number(x) = value {
                        *x = self.round(*x);
                    }
                }
            }
        }
    }

    fn vector(&mut self, prop: &mut Property<Vector>, ty: FieldType) {
        if self.cfg.remove_expressions {
            prop.expression = None;
        }
        let round_values = ty == FieldType::Prop;
        match &mut prop.value {
            PropValue::Static(v) if round_values => v.iter_mut().for_each(|x| *x = self.round(*x)),
            PropValue::Static(_) => {}
            PropValue::Animated(kfs) => {
                self.round_timing(kfs);
                if round_values {
                    for kf in kfs {
                        kf.value.iter_mut().for_each(|x| *x = self.round(*x));
                    }
                }
            }
        }
    }

    fn path(&mut self, prop: &mut Property<BezierPath>) {
        if self.cfg.remove_expressions {
            prop.expression = None;
        }
        let round_path = |path: &mut BezierPath| {
            for list in [&mut path.vertices, &mut path.in_tangents, &mut path.out_tangents] {
                list.iter_mut().for_each(|p| self.round_point(p));
            }
        };
        match &mut prop.value {
            PropValue::Static(p) => round_path(p),
            PropValue::Animated(kfs) => {
                self.round_timing(kfs);
                kfs.iter_mut().for_each(|kf| round_path(&mut kf.value));
            }
        }
    }

    fn extras(&mut self, extras: &mut Extras) {
        extras.retain(|k, _| !self.cfg.prune_fields.contains(k));
        for value in extras.values_mut() {
            self.prune_json(value);
            self.round_json(value);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeReport {
    pub bytes_before: usize,
    pub bytes_after: usize,
    /// `after / before`.
    pub ratio: f64,
    /// `1 - ratio`.
    pub reduction: f64,
}

pub fn size_report(before: &str, after: &str) -> SizeReport {
    let (b, a) = (before.len(), after.len());
    let ratio = if b == 0 { 1.0 } else { a as f64 / b as f64 };
    SizeReport {
        bytes_before: b,
        bytes_after: a,
        ratio,
        reduction: 1.0 - ratio,
    }
}

/// Relative tolerance matching `significant_digits` of rounding.
pub fn sampling_tolerance(significant_digits: u32) -> f64 {
    10f64.powi(2 - significant_digits as i32)
}

/// Largest disagreement between two documents' properties, sampled at every
/// integer frame in `[ip, op]`. Each component's error is divided by
/// `max(1, m)`, where `m` is the largest magnitude that component takes at
/// any keyframe of the original property. Errors when the property sets
/// differ.
pub fn max_sampling_error(before: &Document, after: &Document) -> Result<f64, String> {
    let a = before.vector_properties();
    let b = after.vector_properties();
    if a.len() != b.len() {
        return Err(format!("property count {} vs {}", a.len(), b.len()));
    }
    let frames = frame_range(before);
    let mut worst: f64 = 0.0;
    for ((pa, x), (pb, y)) in a.iter().zip(&b) {
        if pa != pb {
            return Err(format!("property {pa} vs {pb}"));
        }
        worst = worst.max(property_error(x, y, &frames, |v: &Vector| v.clone()));
    }
    let pa = path_properties(before);
    let pb = path_properties(after);
    if pa.len() != pb.len() {
        return Err(format!("path count {} vs {}", pa.len(), pb.len()));
    }
    for (x, y) in pa.iter().zip(&pb) {
        worst = worst.max(property_error(x, y, &frames, flatten_path));
    }
    Ok(worst)
}

fn frame_range(doc: &Document) -> Vec<f64> {
    let (ip, op) = (doc.meta.in_point.floor() as i64, doc.meta.out_point.ceil() as i64);
    (ip..=op).map(|f| f as f64).collect()
}

fn property_error<V: Interpolate>(a: &Property<V>, b: &Property<V>, frames: &[f64], flat: impl Fn(&V) -> Vec<f64>) -> f64 {
    let stops: Vec<Vec<f64>> = match &a.value {
        PropValue::Static(v) => vec![flat(v)],
        PropValue::Animated(kfs) => kfs.iter().map(|kf| flat(&kf.value)).collect(),
    };
    let scale = |i: usize| stops.iter().filter_map(|s| s.get(i)).fold(1f64, |m, x| m.max(x.abs()));
    let mut worst: f64 = 0.0;
    for &f in frames {
        let (va, vb) = (flat(&sample_property(a, f)), flat(&sample_property(b, f)));
        if va.len() != vb.len() {
            return f64::INFINITY;
        }
        for (i, (x, y)) in va.iter().zip(&vb).enumerate() {
            worst = worst.max((x - y).abs() / scale(i));
        }
    }
    worst
}

fn flatten_path(p: &BezierPath) -> Vec<f64> {
    [&p.vertices, &p.in_tangents, &p.out_tangents]
        .iter()
        .flat_map(|l| l.iter().flat_map(|pt| [pt.x, pt.y]))
        .collect()
}

fn path_properties(doc: &Document) -> Vec<Property<BezierPath>> {
    struct Paths(Vec<Property<BezierPath>>);
    impl Visitor for Paths {
        fn path(&mut self, prop: &mut Property<BezierPath>) {
            self.0.push(prop.clone());
        }
    }
    let mut collector = Paths(Vec::new());
    doc.clone().walk_mut(&mut collector);
    collector.0
}
