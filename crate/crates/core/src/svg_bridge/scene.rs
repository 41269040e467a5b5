use std::collections::HashMap;
use std::str::FromStr;

use kurbo::{Affine, BezPath, Point, Rect};
use roxmltree::Node;
use svgtypes::{Align, AspectRatio, Length, LengthUnit, Paint, PaintFallback, SimplePathSegment, SimplifyingPathParser};

use super::SvgError;

const SVG_NS: &str = "http://www.w3.org/2000/svg";

const DRAWABLE: &[&str] = &["g", "rect", "circle", "ellipse", "line", "polyline", "polygon", "path"];
const PASSIVE: &[&str] = &["defs", "linearGradient", "stop", "title", "desc", "metadata"];
const FORBIDDEN_ATTRS: &[&str] = &["filter", "mask", "clip-path", "marker-start", "marker-mid", "marker-end"];

/// Parsed SVG restricted to the supported primitive subset.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgScene {
    /// `min-x min-y width height`.
    pub viewbox: [f64; 4],
    /// Output canvas size.
    pub width: f64,
    pub height: f64,
    /// Maps viewBox coordinates onto the canvas.
    pub viewport: Affine,
    pub elements: Vec<SvgElement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgElement {
    pub tag: String,
    pub id: Option<String>,
    /// The element's own `transform` attribute.
    pub transform: Affine,
    pub opacity: f64,
    pub style: Style,
    pub geometry: Geometry,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Rect { rect: Rect, rx: f64, ry: f64 },
    Ellipse { center: Point, rx: f64, ry: f64 },
    Path(BezPath),
    Group(Vec<SvgElement>),
}

/// Inherited paint properties after cascading.
#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub fill: Option<PaintSource>,
    pub fill_opacity: f64,
    pub even_odd: bool,
    pub stroke: Option<PaintSource>,
    pub stroke_opacity: f64,
    pub stroke_width: f64,
    /// Lottie codes: butt 1, round 2, square 3.
    pub line_cap: i64,
    /// Lottie codes: miter 1, round 2, bevel 3.
    pub line_join: i64,
    pub miter_limit: f64,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            fill: Some(PaintSource::Color([0.0, 0.0, 0.0, 1.0])),
            fill_opacity: 1.0,
            even_odd: false,
            stroke: None,
            stroke_opacity: 1.0,
            stroke_width: 1.0,
            line_cap: 1,
            line_join: 1,
            miter_limit: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PaintSource {
    /// RGBA in [0,1].
    Color([f64; 4]),
    Linear(LinearGradient),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearGradient {
    pub start: Point,
    pub end: Point,
    /// `gradientUnits="objectBoundingBox"`: endpoints are fractions of the
    /// painted element's bounding box.
    pub object_bbox: bool,
    pub transform: Affine,
    /// `(offset, rgba)`, at most two.
    pub stops: Vec<(f64, [f64; 4])>,
}

impl Geometry {
    /// Outline in local coordinates; `None` for groups.
    pub fn to_path(&self, tolerance: f64) -> Option<BezPath> {
        use kurbo::Shape;
        Some(match self {
            Geometry::Rect { rect, rx, ry } if *rx > 0.0 && *ry > 0.0 => {
                let rounded = Affine::scale_non_uniform(1.0, ry / rx);
                let squashed = Rect::new(rect.x0, rect.y0 * rx / ry, rect.x1, rect.y1 * rx / ry);
                rounded * squashed.to_rounded_rect(*rx).to_path(tolerance)
            }
            Geometry::Rect { rect, .. } => rect.to_path(tolerance),
            Geometry::Ellipse { center, rx, ry } => kurbo::Ellipse::new(*center, (*rx, *ry), 0.0).to_path(tolerance),
            Geometry::Path(path) => path.clone(),
            Geometry::Group(_) => return None,
        })
    }
}

struct Parser {
    gradients: HashMap<String, LinearGradient>,
    viewbox: [f64; 4],
}

fn is_svg(node: &Node) -> bool {
    node.is_element() && matches!(node.tag_name().namespace(), None | Some(SVG_NS))
}

fn syntax(message: impl Into<String>) -> SvgError {
    SvgError::Syntax(message.into())
}

fn unsupported(feature: impl Into<String>) -> SvgError {
    SvgError::Unsupported(feature.into())
}

/// `style="a: b; c: d"` declarations.
fn declarations<'n>(node: &Node<'n, '_>) -> Vec<(&'n str, &'n str)> {
    node.attribute("style")
        .map(|s| {
            s.split(';')
                .filter_map(|d| d.split_once(':'))
                .map(|(k, v)| (k.trim(), v.trim()))
                .collect()
        })
        .unwrap_or_default()
}

/// Presentation attribute, `style` declarations taking precedence.
fn property<'n>(node: &Node<'n, '_>, name: &str) -> Option<&'n str> {
    declarations(node)
        .into_iter()
        .rev()
        .find(|(k, _)| *k == name)
        .map(|(_, v)| v)
        .or_else(|| node.attribute(name))
        .map(str::trim)
}

fn number(text: &str, what: &str) -> Result<f64, SvgError> {
    let n = svgtypes::Number::from_str(text).map_err(|e| syntax(format!("{what}: {e}")))?.0;
    if n.is_finite() {
        Ok(n)
    } else {
        Err(syntax(format!("{what}: non-finite value")))
    }
}

/// Number or percentage, percentages as fractions.
fn fraction(text: &str, what: &str) -> Result<f64, SvgError> {
    match text.trim().strip_suffix('%') {
        Some(p) => Ok(number(p, what)? / 100.0),
        None => number(text, what),
    }
}

fn length(text: &str, reference: f64, what: &str) -> Result<f64, SvgError> {
    let len = Length::from_str(text).map_err(|e| syntax(format!("{what}: {e}")))?;
    let n = len.number;
    Ok(match len.unit {
        LengthUnit::None | LengthUnit::Px => n,
        LengthUnit::In => n * 96.0,
        LengthUnit::Cm => n * 96.0 / 2.54,
        LengthUnit::Mm => n * 96.0 / 25.4,
        LengthUnit::Pt => n * 4.0 / 3.0,
        LengthUnit::Pc => n * 16.0,
        LengthUnit::Percent => n / 100.0 * reference,
        LengthUnit::Em | LengthUnit::Ex => return Err(unsupported(format!("font-relative length in {what}"))),
    })
}

fn color(text: &str) -> Result<[f64; 4], SvgError> {
    let c = svgtypes::Color::from_str(text).map_err(|e| syntax(format!("color {text:?}: {e}")))?;
    Ok([c.red, c.green, c.blue, c.alpha].map(|v| f64::from(v) / 255.0))
}

fn transform_attr(node: &Node, name: &str) -> Result<Affine, SvgError> {
    match node.attribute(name) {
        None => Ok(Affine::IDENTITY),
        Some(text) => {
            let t = svgtypes::Transform::from_str(text).map_err(|e| syntax(format!("{name}: {e}")))?;
            Ok(Affine::new([t.a, t.b, t.c, t.d, t.e, t.f]))
        }
    }
}

fn validate(root: Node) -> Result<(), SvgError> {
    for node in root.descendants().filter(is_svg) {
        let tag = node.tag_name().name();
        if node != root && !DRAWABLE.contains(&tag) && !PASSIVE.contains(&tag) {
            return Err(unsupported(format!("<{tag}>")));
        }
        for attr in FORBIDDEN_ATTRS {
            if property(&node, attr).is_some_and(|v| v != "none") {
                return Err(unsupported(format!("{attr} on <{tag}>")));
            }
        }
    }
    Ok(())
}

pub fn parse_scene(svg_text: &str) -> Result<SvgScene, SvgError> {
    let xml = roxmltree::Document::parse(svg_text).map_err(|e| syntax(e.to_string()))?;
    let root = xml.root_element();
    if !is_svg(&root) || root.tag_name().name() != "svg" {
        return Err(syntax("root element is not <svg>"));
    }
    validate(root)?;

    let viewbox = match root.attribute("viewBox") {
        Some(text) => {
            let vb = svgtypes::ViewBox::from_str(text).map_err(|e| syntax(format!("viewBox: {e}")))?;
            [vb.x, vb.y, vb.w, vb.h]
        }
        None => {
            let w = root.attribute("width").map(|t| length(t, 0.0, "width")).transpose()?;
            let h = root.attribute("height").map(|t| length(t, 0.0, "height")).transpose()?;
            match (w, h) {
                (Some(w), Some(h)) => [0.0, 0.0, w, h],
                _ => return Err(syntax("missing viewBox and width/height")),
            }
        }
    };
    if !(viewbox[2] > 0.0 && viewbox[3] > 0.0) {
        return Err(syntax("viewBox width and height must be positive"));
    }
    let size = |name: &str, fallback: f64| -> Result<f64, SvgError> {
        match root.attribute(name) {
            Some(t) if !t.trim().ends_with('%') => length(t, fallback, name),
            _ => Ok(fallback),
        }
    };
    let width = size("width", viewbox[2])?;
    let height = size("height", viewbox[3])?;
    if !(width > 0.0 && height > 0.0) {
        return Err(syntax("width and height must be positive"));
    }
    let aspect = match root.attribute("preserveAspectRatio") {
        Some(t) => AspectRatio::from_str(t).map_err(|e| syntax(format!("preserveAspectRatio: {e}")))?,
        None => AspectRatio::default(),
    };
    let viewport = viewport_transform(viewbox, width, height, aspect);

    let mut parser = Parser {
        gradients: HashMap::new(),
        viewbox,
    };
    for node in root.descendants().filter(|n| is_svg(n) && n.tag_name().name() == "linearGradient") {
        if let Some(id) = node.attribute("id") {
            let gradient = parser.gradient(node)?;
            parser.gradients.insert(id.to_string(), gradient);
        }
    }
    let style = parser.style(&root, &Style::default())?;
    let elements = parser.children(root, &style)?;
    Ok(SvgScene {
        viewbox,
        width,
        height,
        viewport,
        elements,
    })
}

fn viewport_transform(vb: [f64; 4], width: f64, height: f64, aspect: AspectRatio) -> Affine {
    let (sx, sy) = (width / vb[2], height / vb[3]);
    let (align_x, align_y) = match aspect.align {
        Align::None => return Affine::new([sx, 0.0, 0.0, sy, -vb[0] * sx, -vb[1] * sy]),
        Align::XMinYMin => (0.0, 0.0),
        Align::XMidYMin => (0.5, 0.0),
        Align::XMaxYMin => (1.0, 0.0),
        Align::XMinYMid => (0.0, 0.5),
        Align::XMidYMid => (0.5, 0.5),
        Align::XMaxYMid => (1.0, 0.5),
        Align::XMinYMax => (0.0, 1.0),
        Align::XMidYMax => (0.5, 1.0),
        Align::XMaxYMax => (1.0, 1.0),
    };
    let s = if aspect.slice { sx.max(sy) } else { sx.min(sy) };
    let tx = -vb[0] * s + align_x * (width - vb[2] * s);
    let ty = -vb[1] * s + align_y * (height - vb[3] * s);
    Affine::new([s, 0.0, 0.0, s, tx, ty])
}

impl Parser {
    fn diagonal(&self) -> f64 {
        ((self.viewbox[2].powi(2) + self.viewbox[3].powi(2)) / 2.0).sqrt()
    }

    fn gradient(&self, node: Node) -> Result<LinearGradient, SvgError> {
        if node.attribute("href").is_some() || node.attribute(("http://www.w3.org/1999/xlink", "href")).is_some() {
            return Err(unsupported("gradient href inheritance"));
        }
        if node.attribute("spreadMethod").is_some_and(|s| s != "pad") {
            return Err(unsupported("gradient spreadMethod"));
        }
        let object_bbox = match node.attribute("gradientUnits") {
            None | Some("objectBoundingBox") => true,
            Some("userSpaceOnUse") => false,
            Some(other) => return Err(syntax(format!("gradientUnits {other:?}"))),
        };
        let coord = |name: &str, default: f64, reference: f64| -> Result<f64, SvgError> {
            match node.attribute(name) {
                None => Ok(default * if object_bbox { 1.0 } else { reference }),
                Some(t) if object_bbox => fraction(t, name),
                Some(t) => length(t, reference, name),
            }
        };
        let (w, h) = (self.viewbox[2], self.viewbox[3]);
        let start = Point::new(coord("x1", 0.0, w)?, coord("y1", 0.0, h)?);
        let end = Point::new(coord("x2", 1.0, w)?, coord("y2", 0.0, h)?);
        let mut stops = Vec::new();
        let mut last = 0.0f64;
        for stop in node.children().filter(|n| is_svg(n) && n.tag_name().name() == "stop") {
            let offset = match stop.attribute("offset") {
                Some(t) => fraction(t, "offset")?.clamp(0.0, 1.0).max(last),
                None => last,
            };
            last = offset;
            let mut rgba = color(property(&stop, "stop-color").unwrap_or("black"))?;
            if let Some(o) = property(&stop, "stop-opacity") {
                rgba[3] *= fraction(o, "stop-opacity")?.clamp(0.0, 1.0);
            }
            stops.push((offset, rgba));
        }
        if stops.len() > 2 {
            return Err(unsupported(format!("linear gradient with {} stops", stops.len())));
        }
        Ok(LinearGradient {
            start,
            end,
            object_bbox,
            transform: transform_attr(&node, "gradientTransform")?,
            stops,
        })
    }

    fn paint(&self, text: &str, inherited: &Option<PaintSource>) -> Result<Option<PaintSource>, SvgError> {
        let paint = Paint::from_str(text).map_err(|e| syntax(format!("paint {text:?}: {e}")))?;
        Ok(match paint {
            Paint::None => None,
            Paint::Inherit => inherited.clone(),
            Paint::Color(c) => Some(PaintSource::Color([c.red, c.green, c.blue, c.alpha].map(|v| f64::from(v) / 255.0))),
            Paint::FuncIRI(id, fallback) => match self.gradients.get(id) {
                Some(g) => match g.stops.as_slice() {
                    [] => None,
                    [(_, only)] => Some(PaintSource::Color(*only)),
                    _ => Some(PaintSource::Linear(g.clone())),
                },
                None => match fallback {
                    Some(PaintFallback::Color(c)) => {
                        Some(PaintSource::Color([c.red, c.green, c.blue, c.alpha].map(|v| f64::from(v) / 255.0)))
                    }
                    _ => None,
                },
            },
            Paint::CurrentColor | Paint::ContextFill | Paint::ContextStroke => {
                return Err(unsupported(format!("paint {text:?}")))
            }
        })
    }

    fn style(&self, node: &Node, parent: &Style) -> Result<Style, SvgError> {
        let mut style = parent.clone();
        if let Some(v) = property(node, "fill") {
            style.fill = self.paint(v, &parent.fill)?;
        }
        if let Some(v) = property(node, "stroke") {
            style.stroke = self.paint(v, &parent.stroke)?;
        }
        if let Some(v) = property(node, "fill-opacity") {
            style.fill_opacity = fraction(v, "fill-opacity")?.clamp(0.0, 1.0);
        }
        if let Some(v) = property(node, "stroke-opacity") {
            style.stroke_opacity = fraction(v, "stroke-opacity")?.clamp(0.0, 1.0);
        }
        if let Some(v) = property(node, "stroke-width") {
            style.stroke_width = length(v, self.diagonal(), "stroke-width")?;
        }
        if let Some(v) = property(node, "stroke-miterlimit") {
            style.miter_limit = number(v, "stroke-miterlimit")?;
        }
        match property(node, "fill-rule") {
            Some("evenodd") => style.even_odd = true,
            Some("nonzero") => style.even_odd = false,
            _ => {}
        }
        match property(node, "stroke-linecap") {
            Some("butt") => style.line_cap = 1,
            Some("round") => style.line_cap = 2,
            Some("square") => style.line_cap = 3,
            _ => {}
        }
        match property(node, "stroke-linejoin") {
            Some("miter") | Some("miter-clip") => style.line_join = 1,
            Some("round") => style.line_join = 2,
            Some("bevel") => style.line_join = 3,
            _ => {}
        }
        if property(node, "stroke-dasharray").is_some_and(|v| v != "none") {
            return Err(unsupported("stroke-dasharray"));
        }
        Ok(style)
    }

    fn children(&self, node: Node, style: &Style) -> Result<Vec<SvgElement>, SvgError> {
        let mut out = Vec::new();
        for child in node.children().filter(is_svg) {
            if let Some(el) = self.element(child, style)? {
                out.push(el);
            }
        }
        Ok(out)
    }

    fn element(&self, node: Node, parent: &Style) -> Result<Option<SvgElement>, SvgError> {
        let tag = node.tag_name().name();
        if !DRAWABLE.contains(&tag) || property(&node, "display") == Some("none") {
            return Ok(None);
        }
        let style = self.style(&node, parent)?;
        let (w, h, d) = (self.viewbox[2], self.viewbox[3], self.diagonal());
        let attr = |name: &str, reference: f64| -> Result<f64, SvgError> {
            node.attribute(name).map_or(Ok(0.0), |t| length(t, reference, name))
        };
        let geometry = match tag {
            "g" => Geometry::Group(self.children(node, &style)?),
            "rect" => {
                let (x, y, rw, rh) = (attr("x", w)?, attr("y", h)?, attr("width", w)?, attr("height", h)?);
                if rw < 0.0 || rh < 0.0 {
                    return Err(syntax("negative rect size"));
                }
                if rw == 0.0 || rh == 0.0 {
                    return Ok(None);
                }
                let rx = node.attribute("rx").map(|t| length(t, w, "rx")).transpose()?;
                let ry = node.attribute("ry").map(|t| length(t, h, "ry")).transpose()?;
                let (rx, ry) = match (rx, ry) {
                    (Some(rx), Some(ry)) => (rx, ry),
                    (Some(r), None) | (None, Some(r)) => (r, r),
                    (None, None) => (0.0, 0.0),
                };
                Geometry::Rect {
                    rect: Rect::new(x, y, x + rw, y + rh),
                    rx: rx.clamp(0.0, rw / 2.0),
                    ry: ry.clamp(0.0, rh / 2.0),
                }
            }
            "circle" | "ellipse" => {
                let center = Point::new(attr("cx", w)?, attr("cy", h)?);
                let (rx, ry) = if tag == "circle" {
                    let r = attr("r", d)?;
                    (r, r)
                } else {
                    (attr("rx", w)?, attr("ry", h)?)
                };
                if rx < 0.0 || ry < 0.0 {
                    return Err(syntax(format!("negative radius on <{tag}>")));
                }
                if rx == 0.0 || ry == 0.0 {
                    return Ok(None);
                }
                Geometry::Ellipse { center, rx, ry }
            }
            "line" => {
                let mut path = BezPath::new();
                path.move_to((attr("x1", w)?, attr("y1", h)?));
                path.line_to((attr("x2", w)?, attr("y2", h)?));
                Geometry::Path(path)
            }
            "polyline" | "polygon" => {
                let points: Vec<(f64, f64)> = svgtypes::PointsParser::from(node.attribute("points").unwrap_or("")).collect();
                if points.len() < 2 {
                    return Ok(None);
                }
                let mut path = BezPath::new();
                path.move_to(points[0]);
                for p in &points[1..] {
                    path.line_to(*p);
                }
                if tag == "polygon" {
                    path.close_path();
                }
                Geometry::Path(path)
            }
            "path" => {
                let path = path_data(node.attribute("d").unwrap_or(""))?;
                if path.elements().len() < 2 {
                    return Ok(None);
                }
                Geometry::Path(path)
            }
            _ => unreachable!("filtered by DRAWABLE"),
        };
        if let Geometry::Group(children) = &geometry {
            if children.is_empty() {
                return Ok(None);
            }
        }
        let opacity = property(&node, "opacity").map_or(Ok(1.0), |v| fraction(v, "opacity"))?.clamp(0.0, 1.0);
        Ok(Some(SvgElement {
            tag: tag.to_string(),
            id: node.attribute("id").map(str::to_string),
            transform: transform_attr(&node, "transform")?,
            opacity,
            style,
            geometry,
        }))
    }
}

/// Path data with arcs approximated by cubics and quadratics kept as-is.
pub fn path_data(d: &str) -> Result<BezPath, SvgError> {
    let mut path = BezPath::new();
    for segment in SimplifyingPathParser::from(d) {
        match segment.map_err(|e| syntax(format!("path data: {e}")))? {
            SimplePathSegment::MoveTo { x, y } => path.move_to((x, y)),
            SimplePathSegment::LineTo { x, y } => path.line_to((x, y)),
            SimplePathSegment::CurveTo { x1, y1, x2, y2, x, y } => path.curve_to((x1, y1), (x2, y2), (x, y)),
            SimplePathSegment::Quadratic { x1, y1, x, y } => path.quad_to((x1, y1), (x, y)),
            SimplePathSegment::ClosePath => path.close_path(),
        }
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene(body: &str) -> Result<SvgScene, SvgError> {
        parse_scene(&format!(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">{body}</svg>"#))
    }

    #[test]
    fn reads_primitives() {
        let s = scene(r##"<rect x="10" y="20" width="30" height="40" fill="#ff0000"/><circle cx="50" cy="50" r="10"/>"##)
            .unwrap();
        assert_eq!(s.viewbox, [0.0, 0.0, 100.0, 100.0]);
        assert_eq!(s.elements.len(), 2);
        assert_eq!(
            s.elements[0].geometry,
            Geometry::Rect {
                rect: Rect::new(10.0, 20.0, 40.0, 60.0),
                rx: 0.0,
                ry: 0.0
            }
        );
        assert_eq!(s.elements[0].style.fill, Some(PaintSource::Color([1.0, 0.0, 0.0, 1.0])));
        assert!(matches!(s.elements[1].geometry, Geometry::Ellipse { rx: 10.0, ry: 10.0, .. }));
    }

    #[test]
    fn styles_cascade() {
        let s = scene(r#"<g fill="blue" stroke="red" stroke-width="3"><rect width="1" height="1" style="fill: none"/></g>"#)
            .unwrap();
        let Geometry::Group(children) = &s.elements[0].geometry else { panic!() };
        assert_eq!(children[0].style.fill, None);
        assert_eq!(children[0].style.stroke_width, 3.0);
        assert!(matches!(children[0].style.stroke, Some(PaintSource::Color(_))));
    }

    #[test]
    fn viewport_meets_and_centers() {
        let s = parse_scene(r#"<svg xmlns="http://www.w3.org/2000/svg" width="200" height="100" viewBox="10 10 50 50"/>"#)
            .unwrap();
        assert_eq!((s.width, s.height), (200.0, 100.0));
        assert_eq!(s.viewport * Point::new(10.0, 10.0), Point::new(50.0, 0.0));
        assert_eq!(s.viewport * Point::new(60.0, 60.0), Point::new(150.0, 100.0));
    }

    #[test]
    fn rejects_unsupported_features() {
        for body in [
            r#"<filter id="f"/>"#,
            r#"<text>hi</text>"#,
            r#"<rect width="1" height="1"><animate attributeName="x"/></rect>"#,
            r#"<mask id="m"/>"#,
            r#"<rect width="1" height="1" filter="url(#f)"/>"#,
            r#"<defs><radialGradient id="r"/></defs>"#,
            r#"<linearGradient id="l"><stop offset="0"/><stop offset="0.5"/><stop offset="1"/></linearGradient>"#,
        ] {
            assert!(matches!(scene(body), Err(SvgError::Unsupported(_))), "{body}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_scene("<svg"), Err(SvgError::Syntax(_))));
        assert!(matches!(parse_scene(r#"<svg viewBox="0 0 0 10"/>"#), Err(SvgError::Syntax(_))));
        assert!(matches!(scene(r#"<path d="M 0 0 L x"/>"#), Err(SvgError::Syntax(_))));
    }

    #[test]
    fn arcs_become_cubics() {
        let path = path_data("M 0 50 A 50 50 0 0 1 100 50").unwrap();
        assert!(path.elements().iter().skip(1).all(|el| matches!(el, kurbo::PathEl::CurveTo(..))));
    }
}
