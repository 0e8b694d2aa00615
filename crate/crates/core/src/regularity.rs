//! Oscillation maps, discontinuity-set estimation with a nowhere-dense
//! verdict at grid scale, pointwise-Lipschitz analysis, and the
//! characteristic-constancy check.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_model::{Function2D, GridSample};
use crate::geometry::{GridSpec, Point2};
use crate::scalar::Scalar;

/// Default tile size for the nowhere-dense box rule.
pub const DEFAULT_BOX_SIZE: usize = 5;

/// Sub-samples per cell used by [`lipschitz_cover`].
const COVER_SAMPLES_PER_CELL: usize = 8;

/// Estimate of the oscillation of `f` at `p`: for each radius the ball is
/// sampled (center plus rings at `r` and `r/2` with `samples_per_radius`
/// angles each) and its value spread recorded; the running minimum over the
/// shrinking radii is returned, last entry first-class.
pub fn oscillation_sequence<S: Scalar>(
    f: &Function2D<S>,
    p: Point2<S>,
    radii: &[S],
    samples_per_radius: usize,
) -> Result<Vec<S>> {
    if radii.is_empty() {
        return Err(Error::Validation("radii must be nonempty".into()));
    }
    if radii.windows(2).any(|w| w[0] <= w[1]) || radii.iter().any(|r| *r <= S::zero()) {
        return Err(Error::Validation(
            "radii must be positive and strictly decreasing".into(),
        ));
    }
    if samples_per_radius < 4 {
        return Err(Error::Validation(
            "need at least 4 angular samples per radius".into(),
        ));
    }
    let domain = f.domain();
    let r0 = radii[0];
    for (x, y) in [
        (p.x - r0, p.y),
        (p.x + r0, p.y),
        (p.x, p.y - r0),
        (p.x, p.y + r0),
    ] {
        if !domain.contains(Point2::new(x, y)) {
            return Err(domain.outside_error(Point2::new(x, y)));
        }
    }
    let center = f.eval_unchecked(p.x, p.y);
    let tau = S::PI() * S::lit(2.0);
    let m = S::from_usize(samples_per_radius).unwrap();
    let mut estimates = Vec::with_capacity(radii.len());
    let mut running = S::infinity();
    for &r in radii {
        let mut lo = center;
        let mut hi = center;
        for &ring in &[r, r * S::lit(0.5)] {
            for k in 0..samples_per_radius {
                let theta = tau * S::from_usize(k).unwrap() / m;
                let v = f.eval_unchecked(p.x + ring * theta.cos(), p.y + ring * theta.sin());
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        x: (p.x + ring * theta.cos()).as_f64(),
                        y: (p.y + ring * theta.sin()).as_f64(),
                    });
                }
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        running = running.min(hi - lo);
        estimates.push(running);
    }
    Ok(estimates)
}

/// Final (smallest-radius) oscillation estimate; see [`oscillation_sequence`].
pub fn oscillation<S: Scalar>(
    f: &Function2D<S>,
    p: Point2<S>,
    radii: &[S],
    samples_per_radius: usize,
) -> Result<S> {
    Ok(*oscillation_sequence(f, p, radii, samples_per_radius)?
        .last()
        .unwrap())
}

/// Per-node pointwise-Lipschitz estimate: the largest sampled slope
/// `|f(q) - f(p)| / d(q, p)` at the smallest radius, or a divergence flag
/// when the slopes blow up by 10x per radius refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LipschitzEstimate<S> {
    Bounded(S),
    Divergent,
}

/// 5x5-box witness record for the nowhere-dense verdict: the origin and size
/// of a tile, plus the origin of a flag-free sub-box when one exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxWitness {
    pub origin: (usize, usize),
    pub size: (usize, usize),
    pub witness: Option<(usize, usize)>,
}

/// Outcome of [`discontinuity_field`].
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport<S> {
    pub oscillation_field: GridSample<S>,
    pub flagged_points: Vec<(usize, usize)>,
    pub nowhere_dense_verdict: bool,
    pub box_witnesses: Vec<BoxWitness>,
    pub lipschitz_constants: Vec<LipschitzEstimate<S>>,
    pub threshold: S,
}

/// Evaluates the oscillation at every grid node, flags nodes above
/// `threshold`, and runs the box/sub-box nowhere-dense test on the flags.
pub fn discontinuity_field<S: Scalar>(
    f: &Function2D<S>,
    spec: &GridSpec<S>,
    radii: &[S],
    samples_per_radius: usize,
    threshold: S,
    box_size: usize,
) -> Result<RegularityReport<S>> {
    let indices: Vec<(usize, usize)> = spec.indices().collect();
    let per_node: Result<Vec<(S, LipschitzEstimate<S>)>> = indices
        .par_iter()
        .map(|&(i, j)| {
            let p = spec.node(i, j);
            let seq = oscillation_sequence(f, p, radii, samples_per_radius)?;
            let lip = lipschitz_estimate(f, p, radii, samples_per_radius)?;
            Ok((*seq.last().unwrap(), lip))
        })
        .collect();
    let per_node = per_node?;
    let values: Vec<S> = per_node.iter().map(|(osc, _)| *osc).collect();
    let lipschitz_constants: Vec<LipschitzEstimate<S>> =
        per_node.into_iter().map(|(_, l)| l).collect();
    let oscillation_field = GridSample::from_spec(spec, values.clone())?;
    let flagged_points: Vec<(usize, usize)> = indices
        .iter()
        .copied()
        .filter(|&(i, j)| values[spec.index(i, j)] > threshold)
        .collect();
    let flags: Vec<bool> = (0..spec.len()).map(|_| false).collect();
    let mut flags = flags;
    for &(i, j) in &flagged_points {
        flags[spec.index(i, j)] = true;
    }
    let (nowhere_dense_verdict, box_witnesses) =
        nowhere_dense_boxes(&flags, spec.nx, spec.ny, box_size);
    Ok(RegularityReport {
        oscillation_field,
        flagged_points,
        nowhere_dense_verdict,
        box_witnesses,
        lipschitz_constants,
        threshold,
    })
}

fn lipschitz_estimate<S: Scalar>(
    f: &Function2D<S>,
    p: Point2<S>,
    radii: &[S],
    samples_per_radius: usize,
) -> Result<LipschitzEstimate<S>> {
    let center = f.eval_unchecked(p.x, p.y);
    let tau = S::PI() * S::lit(2.0);
    let m = S::from_usize(samples_per_radius).unwrap();
    let mut slopes = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut worst = S::zero();
        for k in 0..samples_per_radius {
            let theta = tau * S::from_usize(k).unwrap() / m;
            let v = f.eval_unchecked(p.x + r * theta.cos(), p.y + r * theta.sin());
            worst = worst.max((v - center).abs() / r);
        }
        slopes.push(worst);
    }
    if crate::differencing::diverges(&slopes) {
        Ok(LipschitzEstimate::Divergent)
    } else {
        Ok(LipschitzEstimate::Bounded(*slopes.last().unwrap()))
    }
}

/// Box/sub-box surrogate for "the flagged set is nowhere dense": the grid is
/// tiled by `box_size`-sized boxes (the last tile per axis absorbs the
/// remainder) and every tile must contain a `ceil(box_size/2)`-sized sub-box
/// free of flags. Returns the verdict and a witness per tile.
pub fn nowhere_dense_boxes(
    flags: &[bool],
    nx: usize,
    ny: usize,
    box_size: usize,
) -> (bool, Vec<BoxWitness>) {
    assert_eq!(flags.len(), nx * ny, "flag mask must match the grid");
    assert!(box_size >= 2, "box size must be at least 2");
    let sub = box_size.div_ceil(2);
    let tile_starts = |n: usize| -> Vec<(usize, usize)> {
        // (start, len) tiles; the final tile extends to the grid edge
        let mut tiles = Vec::new();
        let mut start = 0;
        while start < n {
            let remaining = n - start;
            let len = if remaining < 2 * box_size { remaining } else { box_size };
            tiles.push((start, len));
            start += len;
        }
        tiles
    };
    let mut witnesses = Vec::new();
    let mut verdict = true;
    for &(ix, lx) in &tile_starts(nx) {
        for &(iy, ly) in &tile_starts(ny) {
            let sub_x = sub.min(lx);
            let sub_y = sub.min(ly);
            let mut witness = None;
            'search: for ox in ix..=(ix + lx - sub_x) {
                for oy in iy..=(iy + ly - sub_y) {
                    let clean = (ox..ox + sub_x)
                        .all(|i| (oy..oy + sub_y).all(|j| !flags[i * ny + j]));
                    if clean {
                        witness = Some((ox, oy));
                        break 'search;
                    }
                }
            }
            verdict &= witness.is_some();
            witnesses.push(BoxWitness {
                origin: (ix, iy),
                size: (lx, ly),
                witness,
            });
        }
    }
    (verdict, witnesses)
}

/// Open intervals on which a one-variable function is `epsilon`-Lipschitz at
/// sampling scale, plus whether their union is dense at window width
/// `(b - a) / resolution`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangeableCover<S> {
    pub epsilon: S,
    pub intervals: Vec<(S, S)>,
    pub dense: bool,
}

/// Splits `[a, b]` into `resolution` cells, keeps the cells on which every
/// sampled pair quotient is at most `epsilon` in magnitude, and merges
/// maximal runs into open intervals.
pub fn lipschitz_cover<S: Scalar>(
    g: impl Fn(S) -> S,
    epsilon: S,
    interval: (S, S),
    resolution: usize,
) -> Result<ChangeableCover<S>> {
    let (a, b) = interval;
    if epsilon <= S::zero() || !epsilon.is_finite() {
        return Err(Error::Validation(format!(
            "epsilon must be positive, got {epsilon:?}"
        )));
    }
    if a >= b || resolution < 2 {
        return Err(Error::Validation(
            "need a < b and at least 2 cells".into(),
        ));
    }
    let n = resolution;
    let width = (b - a) / S::from_usize(n).unwrap();
    let cell_ok = |c: usize| -> bool {
        let lo = a + width * S::from_usize(c).unwrap();
        let samples: Vec<(S, S)> = (0..COVER_SAMPLES_PER_CELL)
            .map(|k| {
                let t = lo + width * S::from_usize(k).unwrap()
                    / S::from_usize(COVER_SAMPLES_PER_CELL - 1).unwrap();
                (t, g(t))
            })
            .collect();
        samples.iter().enumerate().all(|(u, &(t1, v1))| {
            samples.iter().skip(u + 1).all(|&(t2, v2)| {
                let q = (v2 - v1) / (t2 - t1);
                q.is_finite() && q.abs() <= epsilon
            })
        })
    };
    let passing: Vec<bool> = (0..n).map(cell_ok).collect();
    let mut intervals = Vec::new();
    let mut run_start: Option<usize> = None;
    for (c, ok) in passing.iter().enumerate() {
        match (ok, run_start) {
            (true, None) => run_start = Some(c),
            (false, Some(s)) => {
                intervals.push(cell_span(a, b, width, s, c));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        intervals.push(cell_span(a, b, width, s, n));
    }
    // dense at window scale `width`: no gap (including the boundary gaps)
    // may reach a full window
    let mut gaps = Vec::new();
    match intervals.first() {
        Some(&(lo, _)) => gaps.push(lo - a),
        None => gaps.push(b - a),
    }
    for w in intervals.windows(2) {
        gaps.push(w[1].0 - w[0].1);
    }
    if let Some(&(_, hi)) = intervals.last() {
        gaps.push(b - hi);
    }
    let dense = gaps
        .iter()
        .all(|&gap| gap < width - width * S::lit(1e-9));
    Ok(ChangeableCover {
        epsilon,
        intervals,
        dense,
    })
}

fn cell_span<S: Scalar>(a: S, b: S, width: S, start: usize, end: usize) -> (S, S) {
    let lo = a + width * S::from_usize(start).unwrap();
    let hi = if end == 0 {
        a
    } else {
        (a + width * S::from_usize(end).unwrap()).min(b)
    };
    (lo, hi)
}

/// Deviation of `f` along one characteristic line `k x - y = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineDeviation<S> {
    pub offset: S,
    pub deviation: S,
    pub samples: usize,
}

/// Outcome of [`constancy_along_characteristics`].
#[derive(Debug, Clone, Serialize)]
pub struct CharacteristicConstancy<S> {
    pub k: S,
    pub lines: Vec<LineDeviation<S>>,
    pub max_deviation: S,
    pub pass: bool,
}

/// Samples `f` along the characteristics `k x - y = c` for a ladder of
/// offsets covering the rectangle and reports the per-line value spread.
/// Passes when every line's spread stays within `tol`.
pub fn constancy_along_characteristics<S: Scalar>(
    f: &Function2D<S>,
    k: S,
    spec: &GridSpec<S>,
    n_offsets: usize,
    samples_per_line: usize,
    tol: S,
) -> Result<CharacteristicConstancy<S>> {
    if k == S::zero() || !k.is_finite() {
        return Err(Error::Validation("characteristic slope k must be nonzero".into()));
    }
    if n_offsets < 1 || samples_per_line < 2 {
        return Err(Error::Validation(
            "need at least 1 offset and 2 samples per line".into(),
        ));
    }
    let rect = spec.rect;
    let corners = [
        (rect.x0, rect.y0),
        (rect.x0, rect.y1),
        (rect.x1, rect.y0),
        (rect.x1, rect.y1),
    ];
    let c_min = corners
        .iter()
        .map(|&(x, y)| k * x - y)
        .fold(S::infinity(), S::min);
    let c_max = corners
        .iter()
        .map(|&(x, y)| k * x - y)
        .fold(S::neg_infinity(), S::max);
    let offsets: Vec<S> = if n_offsets == 1 {
        vec![(c_min + c_max) * S::lit(0.5)]
    } else {
        (0..n_offsets)
            .map(|i| {
                c_min
                    + (c_max - c_min) * S::from_usize(i).unwrap()
                        / S::from_usize(n_offsets - 1).unwrap()
            })
            .collect()
    };
    let lines: Vec<Option<LineDeviation<S>>> = offsets
        .par_iter()
        .map(|&c| {
            // y = k x - c must meet [y0, y1]; intersect the induced x-window
            // with [x0, x1]
            let (xa, xb) = ((rect.y0 + c) / k, (rect.y1 + c) / k);
            let (mut lo, mut hi) = if xa <= xb { (xa, xb) } else { (xb, xa) };
            lo = lo.max(rect.x0);
            hi = hi.min(rect.x1);
            if lo >= hi {
                return None;
            }
            let m = S::from_usize(samples_per_line - 1).unwrap();
            let mut vmin = S::infinity();
            let mut vmax = S::neg_infinity();
            for s in 0..samples_per_line {
                let x = lo + (hi - lo) * S::from_usize(s).unwrap() / m;
                let y = (k * x - c).max(rect.y0).min(rect.y1);
                let v = f.eval_unchecked(x, y);
                vmin = vmin.min(v);
                vmax = vmax.max(v);
            }
            Some(LineDeviation {
                offset: c,
                deviation: vmax - vmin,
                samples: samples_per_line,
            })
        })
        .collect();
    let lines: Vec<LineDeviation<S>> = lines.into_iter().flatten().collect();
    if lines.is_empty() {
        return Err(Error::Validation(
            "no characteristic line meets the rectangle".into(),
        ));
    }
    let max_deviation = lines
        .iter()
        .map(|l| l.deviation)
        .fold(S::zero(), S::max);
    Ok(CharacteristicConstancy {
        k,
        lines,
        max_deviation,
        pass: max_deviation <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_model::catalog_get;
    use crate::geometry::Rect;

    fn grid(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> GridSpec<f64> {
        GridSpec::new(Rect::new(x0, x1, y0, y1).unwrap(), nx, ny).unwrap()
    }

    #[test]
    fn oscillation_vanishes_at_continuity_points() {
        let f = catalog_get::<f64>("plane_wave:sin").unwrap();
        let radii = [1e-1, 1e-2, 1e-3, 1e-4];
        let v = oscillation(&f, Point2::new(0.3, -0.2), &radii, 90).unwrap();
        assert!(v <= 1e-3, "oscillation {v}");
        let seq = oscillation_sequence(&f, Point2::new(0.3, -0.2), &radii, 90).unwrap();
        assert!(seq.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn counterexamples_oscillate_by_two_at_the_origin() {
        // both are homogeneous of degree zero with range [-1, 1] on rays
        let radii = [1e-1, 1e-2, 1e-3, 1e-4];
        for name in ["schwartz", "sextic"] {
            let f = catalog_get::<f64>(name).unwrap();
            let v = oscillation(&f, Point2::new(0.0, 0.0), &radii, 720).unwrap();
            assert!((v - 2.0).abs() <= 0.05, "{name}: {v}");
        }
    }

    #[test]
    fn oscillation_scales_linearly() {
        let f = catalog_get::<f64>("schwartz").unwrap();
        let scaled = Function2D::from_fn("3.5*schwartz", f.domain(), {
            let f = f.clone();
            move |x, y| 3.5 * f.eval_unchecked(x, y)
        });
        let radii = [1e-1, 1e-2];
        let p = Point2::new(0.0, 0.0);
        let a = oscillation(&f, p, &radii, 180).unwrap();
        let b = oscillation(&scaled, p, &radii, 180).unwrap();
        assert!((b - 3.5 * a).abs() <= 1e-12 * (1.0 + b.abs()));
    }

    #[test]
    fn oscillation_validates_inputs() {
        let f = catalog_get::<f64>("schwartz").unwrap();
        let p = Point2::new(0.0, 0.0);
        assert!(oscillation(&f, p, &[], 90).is_err());
        assert!(oscillation(&f, p, &[1e-2, 1e-1], 90).is_err());
        assert!(oscillation(&f, Point2::new(1.95, 0.0), &[0.1], 90).is_err());
    }

    #[test]
    fn discontinuity_field_flags_only_the_sextic_origin() {
        let f = catalog_get::<f64>("sextic").unwrap();
        let spec = grid(-1.0, 1.0, -1.0, 1.0, 21, 21);
        let report = discontinuity_field(&f, &spec, &[1e-1, 1e-2, 1e-3], 180, 0.5, 5).unwrap();
        assert_eq!(report.flagged_points, vec![(10, 10)]);
        assert!(report.nowhere_dense_verdict);
        // the origin's slope estimates blow up: pointwise Lipschitz fails there
        assert!(matches!(
            report.lipschitz_constants[spec.index(10, 10)],
            LipschitzEstimate::Divergent
        ));
        assert!(matches!(
            report.lipschitz_constants[spec.index(5, 5)],
            LipschitzEstimate::Bounded(_)
        ));
        // witnesses avoid flagged nodes
        for w in &report.box_witnesses {
            if let Some((ox, oy)) = w.witness {
                let sub = 3;
                for i in ox..ox + sub.min(w.size.0) {
                    for j in oy..oy + sub.min(w.size.1) {
                        assert!(!report.flagged_points.contains(&(i, j)));
                    }
                }
            }
        }
    }

    #[test]
    fn smooth_entries_have_clean_fields() {
        let spec = grid(-1.0, 1.0, -1.0, 1.0, 11, 11);
        for name in ["plane_wave:sin", "wave_pair:cube:cos", "poly_transport:square:cube"] {
            let f = catalog_get::<f64>(name).unwrap();
            let report = discontinuity_field(&f, &spec, &[1e-1, 1e-2], 90, 0.5, 5).unwrap();
            assert!(report.flagged_points.is_empty(), "{name}");
            assert!(report.nowhere_dense_verdict, "{name}");
        }
    }

    #[test]
    fn full_line_of_flags_defeats_the_box_rule() {
        // a full grid row flagged through tile middles leaves no clean
        // sub-box in the tiles it crosses
        let (nx, ny) = (21, 21);
        let mut flags = vec![false; nx * ny];
        for i in 0..nx {
            flags[i * ny + 7] = true; // row offset 2 within the 5..9 tile
        }
        let (verdict, _) = nowhere_dense_boxes(&flags, nx, ny, 5);
        assert!(!verdict);
        // a single flagged node at a tile corner is fine
        let mut flags = vec![false; nx * ny];
        flags[10 * ny + 10] = true;
        let (verdict, _) = nowhere_dense_boxes(&flags, nx, ny, 5);
        assert!(verdict);
    }

    #[test]
    fn step_function_across_a_row_fails_the_verdict() {
        let f = Function2D::from_fn("step", Rect::centered(2.0).unwrap(), |_, y| {
            if y < -0.3 {
                0.0
            } else {
                2.0
            }
        });
        let spec = grid(-1.0, 1.0, -1.0, 1.0, 21, 21);
        let report = discontinuity_field(&f, &spec, &[1e-1, 1e-2], 90, 0.5, 5).unwrap();
        // flagged exactly on the y = -0.3 row (j = 7)
        assert!(!report.flagged_points.is_empty());
        assert!(report.flagged_points.iter().all(|&(_, j)| j == 7));
        assert_eq!(report.flagged_points.len(), 21);
        assert!(!report.nowhere_dense_verdict);
    }

    #[test]
    fn cover_of_a_constant_is_everything() {
        let c = lipschitz_cover(|_: f64| 2.0, 0.5, (-1.0, 1.0), 20).unwrap();
        assert_eq!(c.intervals.len(), 1);
        assert_eq!(c.intervals[0], (-1.0, 1.0));
        assert!(c.dense);
    }

    #[test]
    fn cover_of_the_identity_at_half_is_empty() {
        let c = lipschitz_cover(|t: f64| t, 0.5, (-1.0, 1.0), 20).unwrap();
        assert!(c.intervals.is_empty());
        assert!(!c.dense);
    }

    #[test]
    fn cover_of_square_is_the_central_interval() {
        // quotients a + b stay within 0.5 exactly on |t| < 0.25
        let c = lipschitz_cover(|t: f64| t * t, 0.5, (-1.0, 1.0), 200).unwrap();
        assert_eq!(c.intervals.len(), 1);
        let (lo, hi) = c.intervals[0];
        let cell = 2.0 / 200.0;
        assert!((lo + 0.25).abs() <= 2.0 * cell, "lo = {lo}");
        assert!((hi - 0.25).abs() <= 2.0 * cell, "hi = {hi}");
        assert!(!c.dense);
    }

    #[test]
    fn constancy_examples() {
        let spec = grid(-1.0, 1.0, -1.0, 1.0, 11, 11);
        let f = catalog_get::<f64>("plane_wave:exp").unwrap();
        let r = constancy_along_characteristics(&f, 1.0, &spec, 21, 64, 1e-9).unwrap();
        assert!(r.pass, "max deviation {}", r.max_deviation);

        let g = Function2D::from_fn("x+y", Rect::centered(2.0).unwrap(), |x, y| x + y);
        let r = constancy_along_characteristics(&g, 1.0, &spec, 21, 64, 1e-9).unwrap();
        assert!(!r.pass);
        let central = r
            .lines
            .iter()
            .min_by(|a, b| a.offset.abs().partial_cmp(&b.offset.abs()).unwrap())
            .unwrap();
        assert!(central.deviation >= 1.0, "central line {v}", v = central.deviation);

        let h = catalog_get::<f64>("plane_wave:cube:k=2").unwrap();
        let spec2 = grid(-0.9, 0.9, -0.9, 0.9, 11, 11);
        assert!(constancy_along_characteristics(&h, 2.0, &spec2, 21, 64, 1e-9)
            .unwrap()
            .pass);
        assert!(!constancy_along_characteristics(&h, 1.0, &spec2, 21, 64, 1e-9)
            .unwrap()
            .pass);

        assert!(constancy_along_characteristics(&h, 0.0, &spec2, 21, 64, 1e-9).is_err());
    }

    #[test]
    fn dense_covers_at_every_scale_force_constancy() {
        // profiles whose quotients stay below the smallest epsilon: their
        // value spread over [a, b] is then bounded by eps_min * (b - a)
        let (a, b) = (-2.0, 2.0);
        let profiles: Vec<(&str, Box<dyn Fn(f64) -> f64>)> = vec![
            ("constant", Box::new(|_| 1.25)),
            ("tiny-sine", Box::new(|t: f64| 1e-4 * t.sin())),
            ("slow-line", Box::new(|t: f64| 5e-4 * t)),
        ];
        for (name, g) in &profiles {
            for eps in [1e-1, 1e-2, 1e-3] {
                // full interval and closed sub-intervals
                for (lo, hi) in [(a, b), (-1.0, 0.5), (0.25, 1.75), (-1.5, -0.25)] {
                    let c = lipschitz_cover(g, eps, (lo, hi), 50).unwrap();
                    assert!(c.dense, "{name} at eps {eps} on [{lo}, {hi}]");
                }
            }
            let values: Vec<f64> = (0..=400).map(|i| g(a + (b - a) * i as f64 / 400.0)).collect();
            let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - values.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(
                spread <= 10.0 * 1e-3 * (b - a),
                "{name}: spread {spread}"
            );
        }
    }
}
