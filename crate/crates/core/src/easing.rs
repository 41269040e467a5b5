//! Cubic Bézier keyframe easing.
//!
//! An easing curve has fixed endpoints (0,0) and (1,1) and two control
//! points: `p1 = (o_x, o_y)` taken from the outgoing handle of the earlier
//! keyframe and `p2 = (i_x, i_y)` from its incoming handle. The curve is
//! parametric, so evaluating it at a normalized time means first solving
//! `x(u) = t_norm` for the curve parameter `u` and then computing `y(u)`.
//!
//! ```text
//! x(u) = 3(1-u)^2 u o_x + 3(1-u) u^2 i_x + u^3
//! y(u) = 3(1-u)^2 u o_y + 3(1-u) u^2 i_y + u^3
//! ```
//!
//! With `o_x, i_x` in `[0, 1]`, `x` is nondecreasing on `[0, 1]`, so the
//! solve always has a root. Newton-Raphson is tried first and bisection
//! takes over whenever a step would leave the unit interval.

use thiserror::Error;

use crate::model::{BezierPath, Keyframe, Point, PropValue, Property};

pub const NEWTON_MAX_ITERATIONS: usize = 12;
pub const SOLVE_TOLERANCE: f64 = 1e-9;
const MIN_SLOPE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("normalized time {0} outside [0, 1]")]
    TimeOutOfRange(f64),
    #[error("frame {frame} outside keyframe segment [{start}, {end}]")]
    FrameOutOfSegment { frame: f64, start: f64, end: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EasingCurve {
    /// Outgoing control point `(o_x, o_y)`.
    pub p1: Point,
    /// Incoming control point `(i_x, i_y)`.
    pub p2: Point,
}

impl EasingCurve {
    pub const LINEAR: EasingCurve = EasingCurve::new(0.0, 0.0, 1.0, 1.0);
    /// The default ease-in-out curve an empty `<|ease|>` tag stands for.
    pub const EASE_IN_OUT: EasingCurve = EasingCurve::new(0.333, 0.0, 0.667, 1.0);

    pub const fn new(out_x: f64, out_y: f64, in_x: f64, in_y: f64) -> Self {
        Self {
            p1: Point::new(out_x, out_y),
            p2: Point::new(in_x, in_y),
        }
    }

    /// Time-axis control components must lie in `[0, 1]`.
    pub fn is_monotone(&self) -> bool {
        (0.0..=1.0).contains(&self.p1.x) && (0.0..=1.0).contains(&self.p2.x)
    }

    pub fn x(&self, u: f64) -> f64 {
        bezier(self.p1.x, self.p2.x, u)
    }

    pub fn y(&self, u: f64) -> f64 {
        bezier(self.p1.y, self.p2.y, u)
    }

    pub fn dx(&self, u: f64) -> f64 {
        bezier_slope(self.p1.x, self.p2.x, u)
    }

    pub fn dy(&self, u: f64) -> f64 {
        bezier_slope(self.p1.y, self.p2.y, u)
    }
}

fn bezier(c1: f64, c2: f64, u: f64) -> f64 {
    let v = 1.0 - u;
    3.0 * v * v * u * c1 + 3.0 * v * u * u * c2 + u * u * u
}

fn bezier_slope(c1: f64, c2: f64, u: f64) -> f64 {
    let v = 1.0 - u;
    3.0 * v * v * c1 + 6.0 * v * u * (c2 - c1) + 3.0 * u * u * (1.0 - c2)
}

/// Outcome of one `x(u) = t` solve, with solver bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveTrace {
    pub u: f64,
    pub newton_iterations: usize,
    pub used_bisection: bool,
}

fn check_time(t_norm: f64) -> Result<(), DomainError> {
    if (0.0..=1.0).contains(&t_norm) {
        Ok(())
    } else {
        Err(DomainError::TimeOutOfRange(t_norm))
    }
}

pub fn solve_u(curve: &EasingCurve, t_norm: f64) -> Result<f64, DomainError> {
    solve_u_traced(curve, t_norm).map(|trace| trace.u)
}

pub fn solve_u_traced(curve: &EasingCurve, t_norm: f64) -> Result<SolveTrace, DomainError> {
    check_time(t_norm)?;
    if t_norm == 0.0 || t_norm == 1.0 {
        return Ok(SolveTrace {
            u: t_norm,
            newton_iterations: 0,
            used_bisection: false,
        });
    }

    let mut u = initial_guess(curve, t_norm);
    let mut iterations = 0;
    loop {
        let err = curve.x(u) - t_norm;
        if err.abs() < SOLVE_TOLERANCE {
            return Ok(SolveTrace {
                u,
                newton_iterations: iterations,
                used_bisection: false,
            });
        }
        if iterations == NEWTON_MAX_ITERATIONS {
            break;
        }
        let slope = curve.dx(u);
        if slope.abs() < MIN_SLOPE {
            break;
        }
        let next = u - err / slope;
        if !(0.0..=1.0).contains(&next) {
            break;
        }
        u = next;
        iterations += 1;
    }

    Ok(SolveTrace {
        u: bisect(curve, t_norm),
        newton_iterations: iterations,
        used_bisection: true,
    })
}

const GUESS_SAMPLES: usize = 16;

/// Linear interpolation inside the coarse sample interval that brackets `t_norm`.
fn initial_guess(curve: &EasingCurve, t_norm: f64) -> f64 {
    let step = 1.0 / GUESS_SAMPLES as f64;
    let mut lo = 0.0;
    let mut x_lo = 0.0;
    for k in 1..=GUESS_SAMPLES {
        let hi = k as f64 * step;
        let x_hi = curve.x(hi);
        if x_hi >= t_norm {
            let span = x_hi - x_lo;
            return if span > 0.0 { lo + step * (t_norm - x_lo) / span } else { lo };
        }
        lo = hi;
        x_lo = x_hi;
    }
    t_norm
}

fn bisect(curve: &EasingCurve, t_norm: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut mid = t_norm;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let err = curve.x(mid) - t_norm;
        if err.abs() < SOLVE_TOLERANCE || hi - lo < f64::EPSILON {
            break;
        }
        if err < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mid
}

/// Animation progress at normalized time `t_norm`; may leave `[0, 1]`.
pub fn eval_easing(curve: &EasingCurve, t_norm: f64) -> Result<f64, DomainError> {
    let u = solve_u(curve, t_norm)?;
    Ok(curve.y(u))
}

/// `d t_eased / d t_norm` at `t_norm`, from the parametric derivatives.
/// Infinite where the time axis is flat.
pub fn easing_slope(curve: &EasingCurve, t_norm: f64) -> Result<f64, DomainError> {
    let u = solve_u(curve, t_norm)?;
    Ok(curve.dy(u) / curve.dx(u))
}

/// Values that can be blended between two keyframes. `progress(dim)` is
/// the eased progress for component `dim`.
pub trait Interpolate: Clone {
    fn interpolate(from: &Self, to: &Self, progress: &dyn Fn(usize) -> f64) -> Self;
}

impl Interpolate for Vec<f64> {
    fn interpolate(from: &Self, to: &Self, progress: &dyn Fn(usize) -> f64) -> Self {
        from.iter()
            .enumerate()
            .map(|(i, &a)| match to.get(i) {
                Some(&b) => a + (b - a) * progress(i),
                None => a,
            })
            .collect()
    }
}

impl Interpolate for BezierPath {
    /// Per-vertex linear blend; paths with different vertex counts hold.
    fn interpolate(from: &Self, to: &Self, progress: &dyn Fn(usize) -> f64) -> Self {
        if from.len() != to.len() {
            return from.clone();
        }
        let t = progress(0);
        let mix = |a: &[Point], b: &[Point]| -> Vec<Point> {
            a.iter()
                .zip(b)
                .map(|(p, q)| Point::new(p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t))
                .collect()
        };
        BezierPath {
            vertices: mix(&from.vertices, &to.vertices),
            in_tangents: mix(&from.in_tangents, &to.in_tangents),
            out_tangents: mix(&from.out_tangents, &to.out_tangents),
            closed: from.closed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult<V> {
    pub t_norm: f64,
    pub u: f64,
    pub t_eased: f64,
    pub value: V,
}

/// Value between two keyframes at `frame`. The trace fields describe the
/// first dimension's curve.
pub fn interpolate_segment<V: Interpolate>(
    from: &Keyframe<V>,
    to: &Keyframe<V>,
    frame: f64,
) -> Result<SampleResult<V>, DomainError> {
    if !(from.time..=to.time).contains(&frame) {
        return Err(DomainError::FrameOutOfSegment {
            frame,
            start: from.time,
            end: to.time,
        });
    }
    let span = to.time - from.time;
    if span <= 0.0 || frame == to.time {
        return Ok(SampleResult {
            t_norm: 1.0,
            u: 1.0,
            t_eased: 1.0,
            value: to.value.clone(),
        });
    }
    let t_norm = ((frame - from.time) / span).clamp(0.0, 1.0);
    if from.hold {
        return Ok(SampleResult {
            t_norm,
            u: 0.0,
            t_eased: 0.0,
            value: from.value.clone(),
        });
    }

    let curve_for = |dim: usize| match &from.easing {
        Some(easing) => *easing.for_dim(dim),
        None => EasingCurve::LINEAR,
    };
    let first = curve_for(0);
    let u = solve_u(&first, t_norm)?;
    let t_eased = first.y(u);
    let progress = |dim: usize| {
        let curve = curve_for(dim);
        if curve == first {
            t_eased
        } else {
            eval_easing(&curve, t_norm).expect("t_norm within [0, 1]")
        }
    };
    Ok(SampleResult {
        t_norm,
        u,
        t_eased,
        value: V::interpolate(&from.value, &to.value, &progress),
    })
}

/// Property value at `frame`: holds the first keyframe before it starts and
/// the last keyframe after it ends.
pub fn sample_property<V: Interpolate>(prop: &Property<V>, frame: f64) -> V {
    sample_property_traced(prop, frame).value
}

pub fn sample_property_traced<V: Interpolate>(prop: &Property<V>, frame: f64) -> SampleResult<V> {
    let hold = |value: &V, t_norm: f64| SampleResult {
        t_norm,
        u: t_norm,
        t_eased: t_norm,
        value: value.clone(),
    };
    let keyframes = match &prop.value {
        PropValue::Static(v) => return hold(v, 0.0),
        PropValue::Animated(kfs) => kfs,
    };
    let (first, last) = match (keyframes.first(), keyframes.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => unreachable!("animated properties have keyframes"),
    };
    if frame <= first.time {
        return hold(&first.value, 0.0);
    }
    if frame >= last.time {
        return hold(&last.value, 1.0);
    }
    let idx = keyframes.partition_point(|kf| kf.time <= frame);
    interpolate_segment(&keyframes[idx - 1], &keyframes[idx], frame)
        .expect("frame lies inside the enclosing segment")
}

/// Most extreme point of a segment's progress curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremum<V> {
    pub frame: f64,
    pub t_norm: f64,
    pub t_eased: f64,
    pub value: V,
    /// Excursion beyond `[0, 1]` as a fraction of the segment's range
    /// (1.658 means 165.8%); zero for curves that stay inside.
    pub overshoot: f64,
}

impl<V> Extremum<V> {
    pub fn overshoot_percent(&self) -> f64 {
        self.overshoot * 100.0
    }
}

const EXTREMUM_SAMPLES: usize = 1000;

/// Locates the frame in `[from.time, to.time]` where eased progress peaks
/// furthest outside `[0, 1]`; returns the segment end for curves without
/// overshoot.
pub fn find_extremum<V: Interpolate>(from: &Keyframe<V>, to: &Keyframe<V>) -> Extremum<V> {
    let curve = match (&from.easing, from.hold) {
        (Some(easing), false) => *easing.for_dim(0),
        _ => EasingCurve::LINEAR,
    };
    let progress = |t: f64| eval_easing(&curve, t).expect("t within [0, 1]");

    let step = 1.0 / EXTREMUM_SAMPLES as f64;
    let (mut min_i, mut max_i) = (0, 0);
    let (mut min_v, mut max_v) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..=EXTREMUM_SAMPLES {
        let y = progress(i as f64 * step);
        if y < min_v {
            min_v = y;
            min_i = i;
        }
        if y > max_v {
            max_v = y;
            max_i = i;
        }
    }

    let below = (-min_v).max(0.0);
    let above = (max_v - 1.0).max(0.0);
    let span = to.time - from.time;
    let (t_norm, t_eased, overshoot) = if below == 0.0 && above == 0.0 {
        (1.0, 1.0, 0.0)
    } else if below >= above {
        let t = refine(&|t| progress(t), min_i, step);
        (t, progress(t), -progress(t))
    } else {
        let t = refine(&|t| -progress(t), max_i, step);
        (t, progress(t), progress(t) - 1.0)
    };
    let frame = from.time + span * t_norm;
    let value = interpolate_segment(from, to, frame.clamp(from.time, to.time))
        .map(|s| s.value)
        .unwrap_or_else(|_| to.value.clone());
    Extremum {
        frame,
        t_norm,
        t_eased,
        value,
        overshoot,
    }
}

/// Golden-section minimization of `f` around grid index `i`.
fn refine(f: &dyn Fn(f64) -> f64, i: usize, step: f64) -> f64 {
    let mut lo = (i as f64 - 1.0).max(0.0) * step;
    let mut hi = ((i as f64 + 1.0) * step).min(1.0);
    let ratio = (5.0_f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-10 {
        let a = hi - ratio * (hi - lo);
        let b = lo + ratio * (hi - lo);
        if f(a) <= f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub id: u8,
    pub name: &'static str,
    pub curve: EasingCurve,
}

/// The eight most frequent curves in exported animations, by rank.
pub const PRESETS: [Preset; 8] = [
    Preset { id: 1, name: "Linear", curve: EasingCurve::LINEAR },
    Preset { id: 2, name: "Ease In-Out", curve: EasingCurve::EASE_IN_OUT },
    Preset { id: 3, name: "Near-Linear", curve: EasingCurve::new(0.167, 0.167, 0.833, 0.833) },
    Preset { id: 4, name: "Smooth Stop", curve: EasingCurve::new(0.167, 0.0, 0.833, 1.0) },
    Preset { id: 5, name: "Soft Ease", curve: EasingCurve::new(0.167, 0.0, 0.667, 1.0) },
    Preset { id: 6, name: "Ease In Strong", curve: EasingCurve::new(0.66, 0.0, 0.34, 1.0) },
    Preset { id: 7, name: "Slow In", curve: EasingCurve::new(0.333, 0.0, 0.833, 1.0) },
    Preset { id: 8, name: "Slow Out", curve: EasingCurve::new(0.167, 0.167, 0.667, 1.0) },
];

pub const PRESET_TOLERANCE: f64 = 1e-3;

/// Preset whose control points match `(p1, p2)` within [`PRESET_TOLERANCE`]
/// per component.
pub fn ease_preset_lookup(p1: Point, p2: Point) -> Option<u8> {
    let close = |a: Point, b: Point| (a.x - b.x).abs() <= PRESET_TOLERANCE && (a.y - b.y).abs() <= PRESET_TOLERANCE;
    PRESETS
        .iter()
        .find(|p| close(p.curve.p1, p1) && close(p.curve.p2, p2))
        .map(|p| p.id)
}

pub fn preset(id: u8) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Easing;

    const BOUNCE: EasingCurve = EasingCurve::new(0.3, -2.79, 0.78, -1.79);

    fn bounce_keyframes() -> (Keyframe<Vec<f64>>, Keyframe<Vec<f64>>) {
        (
            Keyframe::new(30.0, vec![-113.4], Some(Easing::uniform(BOUNCE))),
            Keyframe::new(46.0, vec![-109.5], None),
        )
    }

    #[test]
    fn linear_curve_is_identity() {
        // x(u) = 3u^2 - 2u^3 for these handles; root by bisection on the closed form.
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if 3.0 * mid * mid - 2.0 * mid.powi(3) < 0.7 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = solve_u(&EasingCurve::LINEAR, 0.7).unwrap();
        assert!((u - lo).abs() < 1e-8);
        assert!((eval_easing(&EasingCurve::LINEAR, 0.7).unwrap() - 0.7).abs() < 1e-9);
    }

    #[test]
    fn endpoints_are_exact() {
        for curve in [BOUNCE, EasingCurve::EASE_IN_OUT, EasingCurve::new(1.0, 5.0, 0.0, -3.0)] {
            assert_eq!(solve_u(&curve, 0.0).unwrap(), 0.0);
            assert_eq!(solve_u(&curve, 1.0).unwrap(), 1.0);
            assert_eq!(eval_easing(&curve, 0.0).unwrap(), 0.0);
            assert_eq!(eval_easing(&curve, 1.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn rejects_time_outside_unit_interval() {
        assert_eq!(solve_u(&BOUNCE, 1.5), Err(DomainError::TimeOutOfRange(1.5)));
        assert!(eval_easing(&BOUNCE, -0.01).is_err());
        assert!(solve_u(&BOUNCE, f64::NAN).is_err());
    }

    #[test]
    fn bounce_solve_matches_root_of_x() {
        // Independent check: brute-force root of x(u) - t on a fine grid.
        let trace = solve_u_traced(&BOUNCE, 0.4375).unwrap();
        assert!((BOUNCE.x(trace.u) - 0.4375).abs() < SOLVE_TOLERANCE);
        assert!(!trace.used_bisection);
        assert!((trace.u - 0.417183).abs() < 1e-6);
        assert!((BOUNCE.y(trace.u) - -1.658183).abs() < 1e-6);
    }

    #[test]
    fn interpolates_bounce_segment() {
        let (a, b) = bounce_keyframes();
        // Reference values from an independent bracketing root finder.
        for (frame, rotation) in [
            (30.0, -113.4),
            (35.0, -119.454171),
            (37.0, -119.866912),
            (40.0, -118.863771),
            (43.6, -114.878446),
            (46.0, -109.5),
        ] {
            let got = interpolate_segment(&a, &b, frame).unwrap().value[0];
            assert!((got - rotation).abs() < 1e-4, "frame {frame}: {got} vs {rotation}");
        }
        assert!(interpolate_segment(&a, &b, 29.0).is_err());
        assert!(interpolate_segment(&a, &b, 46.5).is_err());
    }

    #[test]
    fn sampling_holds_outside_keyframes() {
        let (a, b) = bounce_keyframes();
        let prop = Property::animated(vec![a, b]);
        assert_eq!(sample_property(&prop, 20.0), vec![-113.4]);
        assert_eq!(sample_property(&prop, 100.0), vec![-109.5]);
        let fixed = Property::fixed(vec![100.0]);
        assert_eq!(sample_property(&fixed, 12.0), vec![100.0]);
    }

    #[test]
    fn hold_keyframes_jump() {
        let mut a = Keyframe::new(0.0, vec![0.0], None);
        a.hold = true;
        let prop = Property::animated(vec![a, Keyframe::new(10.0, vec![5.0], None)]);
        assert_eq!(sample_property(&prop, 9.99), vec![0.0]);
        assert_eq!(sample_property(&prop, 10.0), vec![5.0]);
    }

    #[test]
    fn per_dimension_curves_apply_per_component() {
        let easing = Easing::new(vec![EasingCurve::LINEAR, EasingCurve::EASE_IN_OUT]);
        let prop = Property::animated(vec![
            Keyframe::new(0.0, vec![0.0, 0.0], Some(easing)),
            Keyframe::new(10.0, vec![10.0, 10.0], None),
        ]);
        let v = sample_property(&prop, 2.5);
        assert!((v[0] - 2.5).abs() < 1e-9);
        let expected = eval_easing(&EasingCurve::EASE_IN_OUT, 0.25).unwrap() * 10.0;
        assert!((v[1] - expected).abs() < 1e-9);
    }

    #[test]
    fn bounce_extremum_is_the_global_minimum() {
        let (a, b) = bounce_keyframes();
        let ext = find_extremum(&a, &b);
        // Dense-grid oracle over the parameter u: min y(u) and x at that u.
        let (mut best_u, mut best_y) = (0.0, f64::INFINITY);
        for i in 0..=100_000 {
            let u = i as f64 / 100_000.0;
            let y = BOUNCE.y(u);
            if y < best_y {
                best_y = y;
                best_u = u;
            }
        }
        let frame = 30.0 + 16.0 * BOUNCE.x(best_u);
        assert!((ext.t_eased - best_y).abs() < 1e-6);
        assert!((ext.frame - frame).abs() < 1e-3, "{} vs {frame}", ext.frame);
        assert!((ext.overshoot_percent() - 165.83).abs() < 0.01);
    }

    #[test]
    fn monotone_curves_peak_at_an_endpoint() {
        let linear = Keyframe::new(0.0, vec![0.0], Some(Easing::uniform(EasingCurve::LINEAR)));
        let ease = Keyframe::new(0.0, vec![0.0], Some(Easing::uniform(EasingCurve::EASE_IN_OUT)));
        let end = Keyframe::new(10.0, vec![1.0], None);
        for start in [linear, ease] {
            let ext = find_extremum(&start, &end);
            assert_eq!(ext.frame, 10.0);
            assert_eq!(ext.overshoot, 0.0);
        }
    }

    #[test]
    fn preset_lookup() {
        assert_eq!(ease_preset_lookup(Point::new(0.333, 0.0), Point::new(0.667, 1.0)), Some(2));
        assert_eq!(ease_preset_lookup(Point::new(0.0, 0.0), Point::new(1.0, 1.0)), Some(1));
        assert_eq!(ease_preset_lookup(Point::new(0.3335, 0.0), Point::new(0.6665, 1.0)), Some(2));
        assert_eq!(ease_preset_lookup(Point::new(0.3, -2.79), Point::new(0.78, -1.79)), None);
        assert_eq!(ease_preset_lookup(Point::new(0.335, 0.0), Point::new(0.667, 1.0)), None);
        for p in &PRESETS {
            assert_eq!(preset(p.id), Some(p));
            assert!(p.curve.is_monotone());
        }
    }

    #[test]
    fn slope_matches_finite_differences() {
        for t in [0.1, 0.3, 0.5, 0.8] {
            let h = 1e-6;
            let fd = (eval_easing(&BOUNCE, t + h).unwrap() - eval_easing(&BOUNCE, t - h).unwrap()) / (2.0 * h);
            let slope = easing_slope(&BOUNCE, t).unwrap();
            assert!((slope - fd).abs() <= 1e-4 * fd.abs().max(1.0), "t={t}: {slope} vs {fd}");
        }
    }
}
