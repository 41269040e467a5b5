use kurbo::{Affine, Rect, Shape};

use super::convert::to_kurbo_path;
use super::scene::{parse_scene, Geometry, SvgElement};
use super::SvgError;
use crate::model::{Document, FieldValue, PropValue, Property, ShapeBody, ShapeItem, ShapeKind, Transform};

/// Largest accepted per-edge bounding box deviation, in pixels.
pub const BBOX_TOLERANCE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    /// Analytic boxes of the SVG's drawable elements, in document order.
    pub expected: Vec<Rect>,
    /// Boxes of the Lottie shape groups, bottom to top.
    pub actual: Vec<Rect>,
    /// Largest edge deviation over matched pairs; infinite on count mismatch.
    pub max_deviation: f64,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.expected.len() == self.actual.len() && self.max_deviation <= BBOX_TOLERANCE
    }
}

/// Whether `doc` is a faithful conversion of `svg_text`: same element count
/// and per-element geometry boxes within [`BBOX_TOLERANCE`].
pub fn consistency_check(svg_text: &str, doc: &Document) -> bool {
    consistency_report(svg_text, doc).is_ok_and(|r| r.consistent())
}

pub fn consistency_report(svg_text: &str, doc: &Document) -> Result<ConsistencyReport, SvgError> {
    let scene = parse_scene(svg_text)?;
    let mut expected = Vec::new();
    for el in &scene.elements {
        svg_boxes(el, scene.viewport, &mut expected);
    }
    let mut actual = Vec::new();
    for layer in doc.layers.iter().rev() {
        lottie_boxes(&layer.shapes, transform_affine(&layer.transform), &mut actual);
    }
    let max_deviation = if expected.len() == actual.len() {
        expected.iter().zip(&actual).map(|(e, a)| edge_deviation(e, a)).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(ConsistencyReport {
        expected,
        actual,
        max_deviation,
    })
}

fn edge_deviation(a: &Rect, b: &Rect) -> f64 {
    [a.x0 - b.x0, a.y0 - b.y0, a.x1 - b.x1, a.y1 - b.y1]
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}

fn svg_boxes(el: &SvgElement, parent: Affine, out: &mut Vec<Rect>) {
    let m = parent * el.transform;
    match &el.geometry {
        Geometry::Group(children) => {
            for child in children {
                svg_boxes(child, m, out);
            }
        }
        Geometry::Ellipse { center, rx, ry } => {
            out.push((m * kurbo::Ellipse::new(*center, (*rx, *ry), 0.0)).bounding_box());
        }
        geometry => {
            let path = geometry.to_path(1e-4).expect("leaf geometry");
            out.push((m * path).bounding_box());
        }
    }
}

fn first_value<V: Clone>(prop: &Property<V>) -> V {
    match &prop.value {
        PropValue::Static(v) => v.clone(),
        PropValue::Animated(kfs) => kfs[0].value.clone(),
    }
}

fn component(values: &[f64], i: usize, default: f64) -> f64 {
    values.get(i).or(values.last()).copied().unwrap_or(default)
}

/// Layer or group transform at its first frame; skew is not modelled.
pub fn transform_affine(tr: &Transform) -> Affine {
    let p = first_value(&tr.position);
    let a = first_value(&tr.anchor);
    let s = first_value(&tr.scale);
    let r = first_value(&tr.rotation);
    Affine::translate((component(&p, 0, 0.0), component(&p, 1, 0.0)))
        * Affine::rotate(component(&r, 0, 0.0).to_radians())
        * Affine::scale_non_uniform(component(&s, 0, 100.0) / 100.0, component(&s, 1, 100.0) / 100.0)
        * Affine::translate((-component(&a, 0, 0.0), -component(&a, 1, 0.0)))
}

fn vector_field(item: &ShapeItem, key: &str) -> Vec<f64> {
    match item.field(key) {
        Some(FieldValue::Prop(p)) => first_value(p),
        _ => Vec::new(),
    }
}

fn geometry_box(item: &ShapeItem, m: Affine) -> Option<Rect> {
    let centered = |item: &ShapeItem| {
        let (p, s) = (vector_field(item, "p"), vector_field(item, "s"));
        let center = kurbo::Point::new(component(&p, 0, 0.0), component(&p, 1, 0.0));
        (center, component(&s, 0, 0.0), component(&s, 1, 0.0))
    };
    match item.kind {
        ShapeKind::Rectangle => {
            let (center, w, h) = centered(item);
            let r = component(&vector_field(item, "r"), 0, 0.0).clamp(0.0, w.min(h) / 2.0);
            let rect = Rect::from_center_size(center, (w, h));
            Some((m * rect.to_rounded_rect(r).to_path(1e-4)).bounding_box())
        }
        ShapeKind::Ellipse => {
            let (center, w, h) = centered(item);
            Some((m * kurbo::Ellipse::new(center, (w / 2.0, h / 2.0), 0.0)).bounding_box())
        }
        ShapeKind::Path => match item.field("ks") {
            Some(FieldValue::Path(p)) => Some((m * to_kurbo_path(&first_value(p))).bounding_box()),
            _ => None,
        },
        _ => None,
    }
}

/// One box per item list that holds geometry directly, then recurses into
/// groups. Lists are walked last-first so boxes come out bottom to top.
fn lottie_boxes(items: &[ShapeItem], m: Affine, out: &mut Vec<Rect>) {
    let own = items
        .iter()
        .filter_map(|item| geometry_box(item, m))
        .reduce(|a, b| a.union(b));
    let mut nested = Vec::new();
    for item in items.iter().rev() {
        if let ShapeBody::Group(children) = &item.body {
            let local = children
                .iter()
                .find_map(|c| match &c.body {
                    ShapeBody::Transform(tr) => Some(transform_affine(tr)),
                    _ => None,
                })
                .unwrap_or(Affine::IDENTITY);
            lottie_boxes(children, m * local, &mut nested);
        }
    }
    out.extend(own);
    out.extend(nested);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svg_bridge::convert;
    use kurbo::ParamCurve;

    fn svg(body: &str) -> String {
        format!(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">{body}</svg>"#)
    }

    const MIXED: &str = r##"<rect x="10" y="20" width="30" height="40" fill="#ff0000"/><circle cx="50" cy="50" r="10"/>
        <g transform="rotate(30 50 50)"><ellipse cx="50" cy="50" rx="20" ry="5"/><rect x="5" y="5" width="10" height="10" rx="3"/></g>
        <path d="M 10 90 C 30 50 70 130 90 90 S 120 60 95 40 A 10 20 15 0 1 80 30"/>"##;

    #[test]
    fn conversion_is_self_consistent() {
        let text = svg(MIXED);
        let doc = convert(&text).unwrap();
        let report = consistency_report(&text, &doc).unwrap();
        assert_eq!(report.expected.len(), 5);
        assert!(report.consistent(), "{report:?}");
        assert!(consistency_check(&text, &doc));
    }

    #[test]
    fn rect_and_circle_boxes() {
        let text = svg(r##"<rect x="10" y="20" width="30" height="40" fill="#ff0000"/><circle cx="50" cy="50" r="10"/>"##);
        let report = consistency_report(&text, &convert(&text).unwrap()).unwrap();
        assert_eq!(report.actual, [Rect::new(10.0, 20.0, 40.0, 60.0), Rect::new(40.0, 40.0, 60.0, 60.0)]);
        assert_eq!(report.max_deviation, 0.0);
    }

    #[test]
    fn deleted_shape_is_flagged() {
        let text = svg(MIXED);
        let mut doc = convert(&text).unwrap();
        doc.layers.remove(0);
        assert!(!consistency_check(&text, &doc));
    }

    #[test]
    fn moved_shape_is_flagged() {
        let text = svg(r#"<rect x="10" y="20" width="30" height="40"/>"#);
        let mut doc = convert(&text).unwrap();
        doc.layers[0].transform.position = Property::fixed(vec![0.6, 0.0]);
        assert!(!consistency_check(&text, &doc));
        doc.layers[0].transform.position = Property::fixed(vec![0.4, 0.0]);
        assert!(consistency_check(&text, &doc));
    }

    #[test]
    fn unparseable_svg_is_inconsistent() {
        let doc = convert(&svg("")).unwrap();
        assert!(!consistency_check("<svg", &doc));
    }

    #[test]
    fn cubic_box_matches_dense_sampling() {
        let text = svg(r#"<path d="M 10 90 C 30 -20 70 140 90 90 C 95 80 130 40 60 10"/>"#);
        let doc = convert(&text).unwrap();
        let report = consistency_report(&text, &doc).unwrap();
        assert!(report.consistent());

        let segments = [
            kurbo::CubicBez::new((10.0, 90.0), (30.0, -20.0), (70.0, 140.0), (90.0, 90.0)),
            kurbo::CubicBez::new((90.0, 90.0), (95.0, 80.0), (130.0, 40.0), (60.0, 10.0)),
        ];
        let mut sampled = Rect::from_points((10.0, 90.0), (10.0, 90.0));
        for seg in segments {
            for i in 0..=1000 {
                let p = seg.eval(i as f64 / 1000.0);
                sampled = sampled.union_pt(p);
            }
        }
        assert!(edge_deviation(&sampled, &report.actual[0]) < BBOX_TOLERANCE);
        // The control polygon hull strictly contains the curve here.
        let hull = segments
            .iter()
            .flat_map(|s| [s.p0, s.p1, s.p2, s.p3])
            .fold(sampled, |r, p| r.union_pt(p));
        assert!(edge_deviation(&hull, &report.actual[0]) > BBOX_TOLERANCE);
    }
}
