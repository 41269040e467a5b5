//! Static SVG to Lottie conversion for basic primitives.
//!
//! Supported input: `rect`, `circle`, `ellipse`, `line`, `polyline`,
//! `polygon`, `path` and `g`, with fill, stroke, opacity and transform
//! attributes (inline `style` declarations included) and linear gradients
//! of at most two stops. Anything else fails with
//! [`SvgError::Unsupported`] instead of being approximated.
//!
//! Transforms are baked into geometry. Axis-aligned rects and ellipses stay
//! native primitives; rotated or skewed ones become bezier paths.

mod check;
mod convert;
mod scene;

use thiserror::Error;

pub use check::{consistency_check, consistency_report, transform_affine, ConsistencyReport, BBOX_TOLERANCE};
pub use convert::{convert, scene_to_document, to_kurbo_path, to_lottie_paths};
pub use scene::{parse_scene, path_data, Geometry, LinearGradient, PaintSource, Style, SvgElement, SvgScene};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvgError {
    #[error("SVG syntax error: {0}")]
    Syntax(String),
    #[error("unsupported SVG feature: {0}")]
    Unsupported(String),
}
