use kurbo::{Affine, BezPath, PathEl, Shape};
use serde_json::Value;

use super::scene::{parse_scene, Geometry, LinearGradient, PaintSource, Style, SvgElement, SvgScene};
use super::SvgError;
use crate::model::{
    BezierPath, Document, Extras, FieldValue, GradientColors, Layer, LayerType, Point as Vertex, Property, ShapeItem,
    ShapeKind, Transform,
};

/// Flattening tolerance for outlines that have no native Lottie primitive.
const OUTLINE_TOLERANCE: f64 = 0.01;
const FRAME_RATE: f64 = 30.0;

/// Converts a static SVG into a one-frame Lottie document with one shape
/// layer per top-level element.
pub fn convert(svg_text: &str) -> Result<Document, SvgError> {
    Ok(scene_to_document(&parse_scene(svg_text)?))
}

pub fn scene_to_document(scene: &SvgScene) -> Document {
    let mut doc = Document::new(FRAME_RATE, 0.0, 1.0, scene.width, scene.height);
    // Lottie paints the first layer on top, SVG the last element.
    for el in scene.elements.iter().rev() {
        let Some(item) = convert_element(el, scene.viewport) else { continue };
        doc.layers.push(Layer {
            layer_type: LayerType::Shape,
            in_point: 0.0,
            out_point: 1.0,
            start_time: 0.0,
            blend_mode: 0,
            index: Some(doc.layers.len() as i64 + 1),
            parent_index: None,
            transform: Transform::default(),
            shapes: vec![item],
            extras: name(el),
        });
    }
    doc
}

fn name(el: &SvgElement) -> Extras {
    let mut extras = Extras::new();
    extras.insert("nm".into(), Value::String(el.id.clone().unwrap_or_else(|| el.tag.clone())));
    extras
}

fn fixed(values: &[f64]) -> Property<Vec<f64>> {
    Property::fixed(values.to_vec())
}

fn group_transform(opacity: f64) -> ShapeItem {
    ShapeItem::transform(Transform {
        opacity: fixed(&[opacity * 100.0]),
        ..Transform::default()
    })
}

fn convert_element(el: &SvgElement, parent: Affine) -> Option<ShapeItem> {
    let m = parent * el.transform;
    let mut items = match &el.geometry {
        Geometry::Group(children) => children.iter().rev().filter_map(|c| convert_element(c, m)).collect(),
        geometry => {
            let mut items = geometry_items(geometry, m);
            if items.is_empty() {
                return None;
            }
            let local_bbox = geometry.to_path(OUTLINE_TOLERANCE).map(|p| p.bounding_box()).unwrap_or_default();
            let scale = m.determinant().abs().sqrt();
            if let Some(stroke) = &el.style.stroke {
                items.push(stroke_item(stroke, &el.style, m, local_bbox, scale));
            }
            if let Some(fill) = &el.style.fill {
                items.push(fill_item(fill, &el.style, m, local_bbox));
            }
            items
        }
    };
    if items.is_empty() {
        return None;
    }
    items.push(group_transform(el.opacity));
    let mut group = ShapeItem::group(items);
    group.extras = name(el);
    Some(group)
}

fn geometry_items(geometry: &Geometry, m: Affine) -> Vec<ShapeItem> {
    let [a, b, c, d, ..] = m.as_coeffs();
    let axis_aligned = b == 0.0 && c == 0.0;
    match geometry {
        Geometry::Rect { rect, rx, ry } if axis_aligned && (*rx == 0.0 || (rx == ry && a.abs() == d.abs())) => {
            let center = m * rect.center();
            vec![ShapeItem::leaf(
                ShapeKind::Rectangle,
                vec![
                    ("p", FieldValue::Prop(fixed(&[center.x, center.y]))),
                    ("s", FieldValue::Prop(fixed(&[rect.width() * a.abs(), rect.height() * d.abs()]))),
                    ("r", FieldValue::Prop(fixed(&[rx * a.abs()]))),
                ],
            )]
        }
        Geometry::Ellipse { center, rx, ry } if axis_aligned => {
            let center = m * *center;
            vec![ShapeItem::leaf(
                ShapeKind::Ellipse,
                vec![
                    ("p", FieldValue::Prop(fixed(&[center.x, center.y]))),
                    ("s", FieldValue::Prop(fixed(&[2.0 * rx * a.abs(), 2.0 * ry * d.abs()]))),
                ],
            )]
        }
        geometry => {
            let outline = geometry.to_path(OUTLINE_TOLERANCE).expect("leaf geometry");
            to_lottie_paths(&(m * outline))
                .into_iter()
                .map(|path| ShapeItem::leaf(ShapeKind::Path, vec![("ks", FieldValue::Path(Property::fixed(path)))]))
                .collect()
        }
    }
}

fn rgb(rgba: &[f64; 4]) -> Vec<f64> {
    rgba[..3].to_vec()
}

fn gradient_fields(g: &LinearGradient, m: Affine, local_bbox: kurbo::Rect, opacity: f64) -> Vec<(&'static str, FieldValue)> {
    let units = if g.object_bbox {
        Affine::new([local_bbox.width(), 0.0, 0.0, local_bbox.height(), local_bbox.x0, local_bbox.y0])
    } else {
        Affine::IDENTITY
    };
    let to_layer = m * units * g.transform;
    let (s, e) = (to_layer * g.start, to_layer * g.end);
    let mut stops: Vec<f64> = g.stops.iter().flat_map(|(off, c)| [*off, c[0], c[1], c[2]]).collect();
    if g.stops.iter().any(|(_, c)| c[3] < 1.0) {
        stops.extend(g.stops.iter().flat_map(|(off, c)| [*off, c[3]]));
    }
    vec![
        ("o", FieldValue::Prop(fixed(&[opacity * 100.0]))),
        ("s", FieldValue::Prop(fixed(&[s.x, s.y]))),
        ("e", FieldValue::Prop(fixed(&[e.x, e.y]))),
        ("t", FieldValue::Int(1)),
        (
            "g",
            FieldValue::Gradient(GradientColors {
                count: g.stops.len() as i64,
                colors: Property::fixed(stops),
                extras: Extras::new(),
            }),
        ),
    ]
}

fn fill_item(paint: &PaintSource, style: &Style, m: Affine, local_bbox: kurbo::Rect) -> ShapeItem {
    let rule = ("r", FieldValue::Int(if style.even_odd { 2 } else { 1 }));
    match paint {
        PaintSource::Color(c) => ShapeItem::leaf(
            ShapeKind::Fill,
            vec![
                ("c", FieldValue::Color(Property::fixed(rgb(c)))),
                ("o", FieldValue::Prop(fixed(&[c[3] * style.fill_opacity * 100.0]))),
                rule,
            ],
        ),
        PaintSource::Linear(g) => {
            let mut fields = gradient_fields(g, m, local_bbox, style.fill_opacity);
            fields.push(rule);
            ShapeItem::leaf(ShapeKind::GradientFill, fields)
        }
    }
}

fn stroke_item(paint: &PaintSource, style: &Style, m: Affine, local_bbox: kurbo::Rect, scale: f64) -> ShapeItem {
    let line = [
        ("w", FieldValue::Prop(fixed(&[style.stroke_width * scale]))),
        ("lc", FieldValue::Int(style.line_cap)),
        ("lj", FieldValue::Int(style.line_join)),
        ("ml", FieldValue::Number(style.miter_limit)),
    ];
    match paint {
        PaintSource::Color(c) => {
            let mut fields = vec![
                ("c", FieldValue::Color(Property::fixed(rgb(c)))),
                ("o", FieldValue::Prop(fixed(&[c[3] * style.stroke_opacity * 100.0]))),
            ];
            fields.extend(line);
            ShapeItem::leaf(ShapeKind::Stroke, fields)
        }
        PaintSource::Linear(g) => {
            let mut fields = gradient_fields(g, m, local_bbox, style.stroke_opacity);
            fields.extend(line);
            ShapeItem::leaf(ShapeKind::GradientStroke, fields)
        }
    }
}

fn vertex(p: kurbo::Point) -> Vertex {
    Vertex::new(p.x, p.y)
}

/// Splits a kurbo path into Lottie subpaths with vertex-relative tangents.
pub fn to_lottie_paths(path: &BezPath) -> Vec<BezierPath> {
    fn finish(current: &mut Option<BezierPath>, out: &mut Vec<BezierPath>) {
        if let Some(p) = current.take() {
            if p.len() > 1 {
                out.push(p);
            }
        }
    }
    let mut out = Vec::new();
    let mut current: Option<BezierPath> = None;
    let mut start = kurbo::Point::ZERO;
    let mut last = kurbo::Point::ZERO;
    for el in path.elements() {
        if !matches!(el, PathEl::MoveTo(_)) && current.is_none() {
            current = Some(BezierPath {
                vertices: vec![vertex(start)],
                in_tangents: vec![Vertex::default()],
                out_tangents: vec![Vertex::default()],
                closed: false,
            });
            last = start;
        }
        match *el {
            PathEl::MoveTo(p) => {
                finish(&mut current, &mut out);
                current = Some(BezierPath {
                    vertices: vec![vertex(p)],
                    in_tangents: vec![Vertex::default()],
                    out_tangents: vec![Vertex::default()],
                    closed: false,
                });
                start = p;
                last = p;
            }
            PathEl::LineTo(p) => {
                let sub = current.as_mut().expect("open subpath");
                sub.vertices.push(vertex(p));
                sub.in_tangents.push(Vertex::default());
                sub.out_tangents.push(Vertex::default());
                last = p;
            }
            PathEl::QuadTo(..) | PathEl::CurveTo(..) => {
                let cubic = match *el {
                    PathEl::QuadTo(c, p) => kurbo::QuadBez::new(last, c, p).raise(),
                    PathEl::CurveTo(c1, c2, p) => kurbo::CubicBez::new(last, c1, c2, p),
                    _ => unreachable!(),
                };
                let sub = current.as_mut().expect("open subpath");
                *sub.out_tangents.last_mut().expect("vertex") = vertex((cubic.p1 - cubic.p0).to_point());
                sub.vertices.push(vertex(cubic.p3));
                sub.in_tangents.push(vertex((cubic.p2 - cubic.p3).to_point()));
                sub.out_tangents.push(Vertex::default());
                last = cubic.p3;
            }
            PathEl::ClosePath => {
                let mut sub = current.take().expect("open subpath");
                sub.closed = true;
                let n = sub.len();
                let (first, end) = (sub.vertices[0], sub.vertices[n - 1]);
                if n > 1 && (first.x - end.x).abs() < 1e-9 && (first.y - end.y).abs() < 1e-9 {
                    sub.in_tangents[0] = sub.in_tangents[n - 1];
                    sub.vertices.pop();
                    sub.in_tangents.pop();
                    sub.out_tangents.pop();
                }
                current = Some(sub);
                finish(&mut current, &mut out);
                last = start;
            }
        }
    }
    finish(&mut current, &mut out);
    out
}

/// Inverse of [`to_lottie_paths`] for one subpath.
pub fn to_kurbo_path(path: &BezierPath) -> BezPath {
    let mut out = BezPath::new();
    let n = path.len();
    if n == 0 {
        return out;
    }
    let pt = |v: Vertex| kurbo::Point::new(v.x, v.y);
    out.move_to(pt(path.vertices[0]));
    let segments = if path.closed { n } else { n - 1 };
    for i in 0..segments {
        let j = (i + 1) % n;
        let (a, b) = (pt(path.vertices[i]), pt(path.vertices[j]));
        let c1 = a + pt(path.out_tangents[i]).to_vec2();
        let c2 = b + pt(path.in_tangents[j]).to_vec2();
        out.curve_to(c1, c2, b);
    }
    if path.closed {
        out.close_path();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonical_equal, parse, serialize, ShapeBody};
    use crate::tokenizer::{detokenize, tokenize};

    fn svg(body: &str) -> String {
        format!(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">{body}</svg>"#)
    }

    fn leaf<'a>(doc: &'a Document, layer: usize, kind: ShapeKind) -> &'a ShapeItem {
        doc.layers[layer].shapes[0].children().iter().find(|i| i.kind == kind).expect("item kind present")
    }

    fn static_vec(value: &FieldValue) -> Vec<f64> {
        match value {
            FieldValue::Prop(p) | FieldValue::Color(p) => match &p.value {
                crate::model::PropValue::Static(v) => v.clone(),
                _ => panic!("animated"),
            },
            _ => panic!("not a vector field"),
        }
    }

    #[test]
    fn rect_is_center_anchored() {
        let doc = convert(&svg(r##"<rect x="10" y="20" width="30" height="40" fill="#ff0000"/>"##)).unwrap();
        assert_eq!((doc.meta.in_point, doc.meta.out_point, doc.meta.frame_rate), (0.0, 1.0, 30.0));
        let rc = leaf(&doc, 0, ShapeKind::Rectangle);
        assert_eq!(static_vec(rc.field("p").unwrap()), [25.0, 40.0]);
        assert_eq!(static_vec(rc.field("s").unwrap()), [30.0, 40.0]);
        let fl = leaf(&doc, 0, ShapeKind::Fill);
        assert_eq!(static_vec(fl.field("c").unwrap()), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn circle_becomes_ellipse() {
        let doc = convert(&svg(r#"<circle cx="50" cy="50" r="10"/>"#)).unwrap();
        let el = leaf(&doc, 0, ShapeKind::Ellipse);
        assert_eq!(static_vec(el.field("p").unwrap()), [50.0, 50.0]);
        assert_eq!(static_vec(el.field("s").unwrap()), [20.0, 20.0]);
    }

    #[test]
    fn layers_run_top_to_bottom() {
        let doc = convert(&svg(r#"<rect id="a" width="1" height="1"/><circle id="b" r="1"/>"#)).unwrap();
        assert_eq!(doc.layers.len(), 2);
        assert_eq!(doc.layers[0].extras["nm"], "b");
        assert_eq!(doc.layers[1].index, Some(2));
    }

    #[test]
    fn transforms_are_baked() {
        let doc = convert(&svg(r#"<g transform="translate(10 5)"><rect width="10" height="4" transform="scale(2)"/></g>"#))
            .unwrap();
        let group = &doc.layers[0].shapes[0].children()[0];
        let rc = group.children().iter().find(|i| i.kind == ShapeKind::Rectangle).unwrap();
        assert_eq!(static_vec(rc.field("p").unwrap()), [20.0, 9.0]);
        assert_eq!(static_vec(rc.field("s").unwrap()), [20.0, 8.0]);

        let doc = convert(&svg(r#"<rect width="10" height="10" transform="rotate(45)"/>"#)).unwrap();
        let sh = leaf(&doc, 0, ShapeKind::Path);
        let ShapeBody::Fields(fields) = &sh.body else { panic!() };
        let FieldValue::Path(p) = &fields["ks"] else { panic!() };
        let crate::model::PropValue::Static(path) = &p.value else { panic!() };
        assert_eq!(path.len(), 4);
        assert!(path.closed);
    }

    #[test]
    fn strokes_scale_and_precede_fills() {
        let doc = convert(&svg(r#"<rect width="4" height="4" stroke="blue" stroke-width="2" transform="scale(3)"/>"#)).unwrap();
        let kinds: Vec<ShapeKind> = doc.layers[0].shapes[0].children().iter().map(|i| i.kind.clone()).collect();
        assert_eq!(kinds, [ShapeKind::Rectangle, ShapeKind::Stroke, ShapeKind::Fill, ShapeKind::Transform]);
        assert_eq!(static_vec(leaf(&doc, 0, ShapeKind::Stroke).field("w").unwrap()), [6.0]);
    }

    #[test]
    fn two_stop_gradient() {
        let doc = convert(&svg(
            r#"<defs><linearGradient id="g"><stop offset="0" stop-color="red"/><stop offset="1" stop-color="blue" stop-opacity="0.5"/></linearGradient></defs>
               <rect x="10" y="10" width="20" height="10" fill="url(#g)"/>"#,
        ))
        .unwrap();
        let gf = leaf(&doc, 0, ShapeKind::GradientFill);
        assert_eq!(static_vec(gf.field("s").unwrap()), [10.0, 10.0]);
        assert_eq!(static_vec(gf.field("e").unwrap()), [30.0, 10.0]);
        let Some(FieldValue::Gradient(g)) = gf.field("g") else { panic!() };
        assert_eq!(g.count, 2);
        assert_eq!(g.colors.value, crate::model::PropValue::Static(vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.5]));
    }

    #[test]
    fn output_validates_and_roundtrips() {
        let text = svg(
            r##"<g opacity="0.5"><path d="M10 10 Q 20 0 30 10 T 50 10 A 5 5 0 0 1 60 10 Z M 70 70 h 10 v 10"/>
               <polygon points="0,0 10,0 5,8" fill="#123456" stroke="#fff"/></g><line x1="0" y1="0" x2="9" y2="9" stroke="red"/>
               <ellipse cx="5" cy="5" rx="3" ry="2" transform="skewX(20)"/>"##,
        );
        let doc = convert(&text).unwrap();
        assert_eq!(convert(&text).unwrap(), doc);
        let reparsed = parse(&serialize(&doc)).unwrap();
        assert!(canonical_equal(&doc, &reparsed));
        let back = detokenize(&tokenize(&doc, false).unwrap()).unwrap();
        assert!(canonical_equal(&doc, &back));
    }

    #[test]
    fn subpaths_roundtrip_through_kurbo() {
        let mut path = BezPath::new();
        path.move_to((0.0, 0.0));
        path.curve_to((1.0, 2.0), (3.0, 2.0), (4.0, 0.0));
        path.line_to((4.0, -4.0));
        path.close_path();
        let lottie = to_lottie_paths(&path);
        assert_eq!(lottie.len(), 1);
        assert_eq!(lottie[0].out_tangents[0], Vertex::new(1.0, 2.0));
        assert_eq!(lottie[0].in_tangents[1], Vertex::new(-1.0, 2.0));
        let back = to_kurbo_path(&lottie[0]);
        assert_eq!(back.bounding_box(), path.bounding_box());
    }

    #[test]
    fn unsupported_input_fails() {
        assert!(matches!(convert(&svg(r#"<filter id="f"/><rect width="1" height="1"/>"#)), Err(SvgError::Unsupported(_))));
    }
}
