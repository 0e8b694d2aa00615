//! Residual verification and constructive extraction of solution
//! representations: the first-order characteristic profile, the order-n
//! polynomial-in-`(x+y)` decomposition, and the traveling-wave split.
//!
//! Profile extraction samples along a clamped baseline staircase: the value
//! at offset `t` is read at the point of the line `kx - y = t` (respectively
//! `x + y = s`) closest to the baseline while staying inside the rectangle.
//! On the baseline-reachable range this is exactly `f(t/k, baseline)`; beyond
//! it, the line is sampled where it still crosses the rectangle, so profiles
//! cover the full offset range of the grid without leaving the domain.

use rayon::prelude::*;
use serde::Serialize;

use crate::differencing::{
    decade_ladder, fd_convergence, fd_partial, fd_partial_full, DerivativePath,
};
use crate::error::{Error, Result};
use crate::function_model::{Function2D, Profile1D};
use crate::geometry::{GridSpec, Point2, Rect};
use crate::regularity::constancy_along_characteristics;
use crate::scalar::Scalar;

/// Default residual gate for decomposition hypotheses.
pub const DEFAULT_RESIDUAL_GATE: f64 = 1e-3;

/// Default recursion cap: FD noise compounds like `h^-n`.
pub const DEFAULT_ORDER_CAP: u32 = 4;

/// Default number of profile samples.
pub const DEFAULT_PROFILE_SAMPLES: usize = 801;

/// Tuning knobs shared by the decomposition operations.
#[derive(Debug, Clone)]
pub struct DecompositionConfig<S> {
    /// FD step for derivative fields and probes.
    pub h: S,
    pub profile_samples: usize,
    /// Gate on the probe residual that the hypothesis must satisfy.
    pub residual_gate: S,
    pub order_cap: u32,
    /// Probe sub-grid nodes per axis.
    pub probe_nodes: usize,
    /// Baseline ordinate for profile extraction.
    pub baseline: S,
    /// Trapezoid substeps per profile interval for the antiderivative.
    pub quad_substeps: usize,
    /// Step ladder for the mixed-partial existence probe of the wave split.
    pub divergence_ladder: Vec<S>,
}

impl<S: Scalar> Default for DecompositionConfig<S> {
    fn default() -> Self {
        DecompositionConfig {
            h: S::lit(1e-3),
            profile_samples: DEFAULT_PROFILE_SAMPLES,
            residual_gate: S::lit(DEFAULT_RESIDUAL_GATE),
            order_cap: DEFAULT_ORDER_CAP,
            probe_nodes: 11,
            baseline: S::zero(),
            quad_substeps: 4,
            divergence_ladder: decade_ladder(S::lit(1e-1), 3),
        }
    }
}

/// Largest `|f'_x + k f'_y|` over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstOrderResidual<S> {
    pub max_residual: S,
    pub worst: Point2<S>,
}

/// Max-norm residual of the first-order equation over the grid nodes, using
/// exact partials when the function carries them and `use_exact` allows.
pub fn residual_first_order<S: Scalar>(
    f: &Function2D<S>,
    k: S,
    spec: &GridSpec<S>,
    h: S,
    use_exact: bool,
) -> Result<FirstOrderResidual<S>> {
    if k == S::zero() || !k.is_finite() {
        return Err(Error::Validation("k must be nonzero".into()));
    }
    let indices: Vec<(usize, usize)> = spec.indices().collect();
    let per_node: Result<Vec<S>> = indices
        .par_iter()
        .map(|&(i, j)| {
            let p = spec.node(i, j);
            let fx = fd_partial_full(f, &DerivativePath::x(), p, h, use_exact)?.value;
            let fy = fd_partial_full(f, &DerivativePath::y(), p, h, use_exact)?.value;
            Ok((fx + k * fy).abs())
        })
        .collect();
    let per_node = per_node?;
    let (argmax, &max_residual) = per_node
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let (i, j) = indices[argmax];
    Ok(FirstOrderResidual {
        max_residual,
        worst: spec.node(i, j),
    })
}

/// Point of `k x - y = t` inside `rect` with ordinate closest to `baseline`.
fn staircase_point<S: Scalar>(rect: &Rect<S>, k: S, t: S, baseline: S) -> Point2<S> {
    let (xa, xb) = ((rect.y0 + t) / k, (rect.y1 + t) / k);
    let (mut lo, mut hi) = if xa <= xb { (xa, xb) } else { (xb, xa) };
    lo = lo.max(rect.x0);
    hi = hi.min(rect.x1);
    if lo > hi {
        // rounding at the extreme offsets; collapse to the corner
        let m = (lo + hi) * S::lit(0.5);
        lo = m;
        hi = m;
    }
    let x = ((t + baseline) / k).max(lo).min(hi);
    let y = (k * x - t).max(rect.y0).min(rect.y1);
    Point2::new(x, y)
}

/// Point of `x + y = s` inside `rect` with ordinate closest to `baseline`.
fn anti_staircase_point<S: Scalar>(rect: &Rect<S>, s: S, baseline: S) -> Point2<S> {
    let lo = (s - rect.y1).max(rect.x0);
    let hi = (s - rect.y0).min(rect.x1);
    let (lo, hi) = if lo > hi {
        let m = (lo + hi) * S::lit(0.5);
        (m, m)
    } else {
        (lo, hi)
    };
    let x = (s - baseline).max(lo).min(hi);
    let y = (s - x).max(rect.y0).min(rect.y1);
    Point2::new(x, y)
}

fn offset_range<S: Scalar>(rect: &Rect<S>, k: S) -> (S, S) {
    let corners = [
        (rect.x0, rect.y0),
        (rect.x0, rect.y1),
        (rect.x1, rect.y0),
        (rect.x1, rect.y1),
    ];
    let lo = corners
        .iter()
        .map(|&(x, y)| k * x - y)
        .fold(S::infinity(), S::min);
    let hi = corners
        .iter()
        .map(|&(x, y)| k * x - y)
        .fold(S::neg_infinity(), S::max);
    (lo, hi)
}

fn sum_range<S: Scalar>(rect: &Rect<S>) -> (S, S) {
    (rect.x0 + rect.y0, rect.x1 + rect.y1)
}

/// A characteristic profile together with its reconstruction error.
#[derive(Debug, Clone, Serialize)]
pub struct ExtractedProfile<S> {
    pub profile: Profile1D<S>,
    pub reconstruction_error: S,
}

/// Extracts the profile of a first-order solution: a table of `f` along the
/// characteristics `k x - y = t`, read near the baseline, covering the full
/// offset range of the rectangle. The reconstruction error is the max-norm
/// defect of `f(x, y) - profile(kx - y)` over the grid nodes.
pub fn extract_profile<S: Scalar>(
    f: &Function2D<S>,
    k: S,
    spec: &GridSpec<S>,
    samples: usize,
    baseline: S,
) -> Result<ExtractedProfile<S>> {
    if k == S::zero() || !k.is_finite() {
        return Err(Error::Validation("k must be nonzero".into()));
    }
    let rect = spec.rect;
    if baseline < rect.y0 || baseline > rect.y1 {
        return Err(Error::Validation(format!(
            "baseline y = {:?} lies outside [{:?}, {:?}]",
            baseline, rect.y0, rect.y1
        )));
    }
    let (t0, t1) = offset_range(&rect, k);
    let profile = Profile1D::from_fn(t0, t1, samples, |t| {
        let p = staircase_point(&rect, k, t, baseline);
        f.eval_unchecked(p.x, p.y)
    })?;
    let reconstruction_error = profile_reconstruction_error(f, k, spec, &profile);
    Ok(ExtractedProfile {
        profile,
        reconstruction_error,
    })
}

fn profile_reconstruction_error<S: Scalar>(
    f: &Function2D<S>,
    k: S,
    spec: &GridSpec<S>,
    profile: &Profile1D<S>,
) -> S {
    spec.indices()
        .map(|(i, j)| {
            let p = spec.node(i, j);
            (f.eval_unchecked(p.x, p.y) - profile.eval_clamped(k * p.x - p.y)).abs()
        })
        .fold(S::zero(), S::max)
}

/// The field `f'_x + f'_y` with exact partials derived from `f`'s where
/// available, FD closures otherwise. Declared singular points keep their
/// one-sided-quotient values, computed eagerly.
pub fn d1_field<S: Scalar>(f: &Function2D<S>, h: S) -> Function2D<S> {
    derived_first_order_field(f, h, S::one())
}

/// `f'_x + c f'_y` as an evaluatable field (`c = -1` gives the wave-split
/// intermediate).
fn derived_first_order_field<S: Scalar>(f: &Function2D<S>, h: S, c: S) -> Function2D<S> {
    let name = if c == S::one() {
        format!("D1({})", f.name())
    } else {
        format!("dx-dy({})", f.name())
    };
    let base = f.clone();
    let mut g = Function2D::from_fn(name, f.domain(), move |x, y| {
        let p = Point2::new(x, y);
        let fx = fd_partial(&base, &DerivativePath::x(), p, h);
        let fy = fd_partial(&base, &DerivativePath::y(), p, h);
        match (fx, fy) {
            (Ok(a), Ok(b)) => a + c * b,
            _ => S::nan(),
        }
    });
    for &(p, _) in f.singular_points() {
        let fx = fd_partial(f, &DerivativePath::x(), p, h).unwrap_or(S::nan());
        let fy = fd_partial(f, &DerivativePath::y(), p, h).unwrap_or(S::nan());
        g = g.with_singular_point(p, fx + c * fy);
    }
    // derived exact partials: d_P (f_x + c f_y) = f_(x then P) + c f_(y then P)
    for order in 1..=2u32 {
        for path in DerivativePath::all_of_order(order) {
            let mut via_x = vec![crate::differencing::Axis::X];
            via_x.extend_from_slice(path.axes());
            let mut via_y = vec![crate::differencing::Axis::Y];
            via_y.extend_from_slice(path.axes());
            let (px, py) = (
                DerivativePath::new(via_x).unwrap(),
                DerivativePath::new(via_y).unwrap(),
            );
            if let (Some(ex), Some(ey)) = (f.exact_partial(&px), f.exact_partial(&py)) {
                let (ex, ey) = (ex.clone(), ey.clone());
                g = g.with_exact_partial(path, move |x, y| ex(x, y) + c * ey(x, y));
            }
        }
    }
    g
}

/// Metadata describing how a decomposition was computed, including an error
/// budget assembled from the interpolation and FD contributions.
#[derive(Debug, Clone, Serialize)]
pub struct MethodMetadata<S> {
    pub h: S,
    pub grid: (usize, usize),
    pub profile_samples: usize,
    pub used_exact_partials: bool,
    pub fd_levels: u32,
    pub error_budget: S,
}

/// Profiles of the order-n representation plus its residual and
/// reconstruction metrics.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionResult<S> {
    pub order: u32,
    pub profiles: Vec<Profile1D<S>>,
    /// Max probe residual of the order-n derivative sum.
    pub residual: S,
    pub reconstruction_error: S,
    pub metadata: MethodMetadata<S>,
}

fn probe_spec<S: Scalar>(
    f: &Function2D<S>,
    spec: &GridSpec<S>,
    reach: S,
    nodes: usize,
) -> Result<GridSpec<S>> {
    let dom = f.domain().inset(reach).map_err(|_| {
        Error::Validation("domain too thin for the probe stencil".into())
    })?;
    let rect = Rect::new(
        spec.rect.x0.max(dom.x0),
        spec.rect.x1.min(dom.x1),
        spec.rect.y0.max(dom.y0),
        spec.rect.y1.min(dom.y1),
    )
    .map_err(|_| Error::Validation("grid too thin for the probe stencil".into()))?;
    GridSpec::new(rect, nodes, nodes)
}

fn dn_probe<S: Scalar>(
    f: &Function2D<S>,
    n: u32,
    spec: &GridSpec<S>,
    cfg: &DecompositionConfig<S>,
    gate_scale: S,
) -> Result<S> {
    let reach = cfg.h * S::lit(2.0 * (f64::from(n) + 1.0));
    let probe = probe_spec(f, spec, reach, cfg.probe_nodes)?;
    let gate = cfg.residual_gate * gate_scale;
    let mut worst = S::zero();
    let mut worst_at = probe.node(0, 0);
    for (i, j) in probe.indices() {
        let p = probe.node(i, j);
        let v = crate::differencing::dn_apply(f, n, p, cfg.h)?.abs();
        if v > worst {
            worst = v;
            worst_at = p;
        }
    }
    if worst > gate {
        return Err(Error::HypothesisViolation {
            check: format!("derivative-sum residual gate (order {n})"),
            defect: worst.as_f64(),
            x: worst_at.x.as_f64(),
            y: worst_at.y.as_f64(),
            gate: gate.as_f64(),
        });
    }
    Ok(worst)
}

/// Constructive order-n decomposition
/// `f = sum_i (x+y)^(i-1) phi_i(x-y)`, following the inductive construction:
/// decompose the first-order derivative sum of `f` at order `n-1`, scale its
/// profiles into `phi_2..phi_n`, subtract the rebuilt tail and extract
/// `phi_1` from the remainder.
pub fn decompose_dn<S: Scalar>(
    f: &Function2D<S>,
    n: u32,
    spec: &GridSpec<S>,
    cfg: &DecompositionConfig<S>,
) -> Result<DecompositionResult<S>> {
    if n < 1 {
        return Err(Error::Validation("order must be >= 1".into()));
    }
    if n > cfg.order_cap {
        return Err(Error::UnsupportedOrder {
            n,
            cap: cfg.order_cap,
        });
    }
    let (profiles, residual, fd_levels) = decompose_dn_inner(f, n, spec, cfg, S::one())?;
    let reconstruction_error = poly_reconstruction_error(f, &profiles, spec);
    let used_exact_partials = fd_levels == 0;
    let error_budget = error_budget(&profiles, spec, cfg, n, fd_levels);
    Ok(DecompositionResult {
        order: n,
        profiles,
        residual,
        reconstruction_error,
        metadata: MethodMetadata {
            h: cfg.h,
            grid: (spec.nx, spec.ny),
            profile_samples: cfg.profile_samples,
            used_exact_partials,
            fd_levels,
            error_budget,
        },
    })
}

fn has_first_order_exact<S: Scalar>(f: &Function2D<S>) -> bool {
    f.exact_partial(&DerivativePath::x()).is_some()
        && f.exact_partial(&DerivativePath::y()).is_some()
}

fn decompose_dn_inner<S: Scalar>(
    f: &Function2D<S>,
    n: u32,
    spec: &GridSpec<S>,
    cfg: &DecompositionConfig<S>,
    gate_scale: S,
) -> Result<(Vec<Profile1D<S>>, S, u32)> {
    let residual = dn_probe(f, n, spec, cfg, gate_scale)?;
    if n == 1 {
        let extracted = extract_profile(f, S::one(), spec, cfg.profile_samples, cfg.baseline)?;
        return Ok((vec![extracted.profile], residual, 0));
    }
    let exact_level = has_first_order_exact(f);
    let g = d1_field(f, cfg.h);
    let next_scale = if exact_level {
        gate_scale
    } else {
        gate_scale / cfg.h
    };
    let (inner_profiles, _, inner_fd) = decompose_dn_inner(&g, n - 1, spec, cfg, next_scale)?;
    let fd_levels = inner_fd + u32::from(!exact_level);
    // phi_(i+1) = psi_i / (2 i)
    let mut profiles: Vec<Profile1D<S>> = Vec::with_capacity(n as usize);
    for (idx, psi) in inner_profiles.iter().enumerate() {
        let scale = S::lit(2.0 * (idx as f64 + 1.0));
        profiles.push(psi.map_values(|v| v / scale));
    }
    // u = sum_(i=1..n-1) (x+y)^i phi_(i+1)(x-y); extract phi_1 from f - u
    let tail = profiles.clone();
    let base = f.clone();
    let f_minus_u = Function2D::from_fn("remainder", f.domain(), move |x, y| {
        let (s, t) = (x + y, x - y);
        let mut u = S::zero();
        for (idx, phi) in tail.iter().enumerate() {
            u = u + s.powi(idx as i32 + 1) * phi.eval_clamped(t);
        }
        base.eval_unchecked(x, y) - u
    });
    let extracted = extract_profile(
        &f_minus_u,
        S::one(),
        spec,
        cfg.profile_samples,
        cfg.baseline,
    )?;
    profiles.insert(0, extracted.profile);
    Ok((profiles, residual, fd_levels))
}

/// Max-norm defect of `f - sum_i (x+y)^(i-1) phi_i(x-y)` over the grid.
pub fn poly_reconstruction_error<S: Scalar>(
    f: &Function2D<S>,
    profiles: &[Profile1D<S>],
    spec: &GridSpec<S>,
) -> S {
    spec.indices()
        .map(|(i, j)| {
            let p = spec.node(i, j);
            let (s, t) = (p.x + p.y, p.x - p.y);
            let mut rebuilt = S::zero();
            for (idx, phi) in profiles.iter().enumerate() {
                rebuilt = rebuilt + s.powi(idx as i32) * phi.eval_clamped(t);
            }
            (f.eval_unchecked(p.x, p.y) - rebuilt).abs()
        })
        .fold(S::zero(), S::max)
}

/// Field rebuilt from decomposition profiles; the round-trip tests feed this
/// back through [`decompose_dn`].
pub fn reconstruct_from_profiles<S: Scalar>(
    profiles: Vec<Profile1D<S>>,
    domain: Rect<S>,
) -> Function2D<S> {
    Function2D::from_fn("reconstruction", domain, move |x, y| {
        let (s, t) = (x + y, x - y);
        profiles
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (idx, phi)| {
                acc + s.powi(idx as i32) * phi.eval_clamped(t)
            })
    })
}

fn table_curvature<S: Scalar>(p: &Profile1D<S>) -> S {
    let dt = p.t_values()[1] - p.t_values()[0];
    p.values()
        .windows(3)
        .map(|w| (w[2] - S::lit(2.0) * w[1] + w[0]).abs())
        .fold(S::zero(), S::max)
        / (dt * dt)
}

fn error_budget<S: Scalar>(
    profiles: &[Profile1D<S>],
    spec: &GridSpec<S>,
    cfg: &DecompositionConfig<S>,
    n: u32,
    fd_levels: u32,
) -> S {
    let (s0, s1) = sum_range(&spec.rect);
    let s_max = s0.abs().max(s1.abs());
    let dt = profiles[0].t_values()[1] - profiles[0].t_values()[0];
    let eighth = S::lit(0.125);
    let mut interp = S::zero();
    let mut d2_max = S::zero();
    for (idx, phi) in profiles.iter().enumerate() {
        let d2 = table_curvature(phi);
        d2_max = d2_max.max(d2);
        interp = interp + s_max.powi(idx as i32) * dt * dt * eighth * d2;
    }
    let value_scale = profiles
        .iter()
        .flat_map(|p| p.values())
        .fold(S::one(), |acc, v| acc.max(v.abs()));
    let fd = if fd_levels == 0 {
        S::epsilon() * value_scale * S::lit(64.0)
    } else {
        let poly_scale = (0..n).fold(S::zero(), |acc, i| acc + s_max.powi(i as i32));
        let per_level = cfg.h * cfg.h * d2_max / (dt * S::lit(6.0))
            + dt * dt * d2_max / (cfg.h * S::lit(8.0))
            + S::epsilon() * value_scale / cfg.h;
        S::from_u32(fd_levels).unwrap() * per_level * poly_scale
    };
    interp + fd
}

/// Residual diagnostics of the wave-split hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveResiduals<S> {
    /// Max probe defect of the mixed-partial symmetry.
    pub mixed_symmetry: S,
    /// Max probe defect between the two repeated second partials.
    pub trace_mismatch: S,
    /// Max deviation of the derivative-difference field along `x - y = c`.
    pub characteristic_deviation: S,
}

/// Traveling-wave split `f = phi(x+y) + psi(x-y)` with the gauge
/// `psi(0) = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct WaveSplit<S> {
    pub phi: Profile1D<S>,
    pub psi: Profile1D<S>,
    pub psi_tilde: Profile1D<S>,
    pub residuals: WaveResiduals<S>,
    pub reconstruction_error: S,
}

/// Wave-type decomposition, following the constructive route: the field
/// `g = f'_x - f'_y` must depend on `x - y` only; its profile is the
/// derivative `2 psi'`, integrated by cumulative trapezoid (with substeps)
/// and gauged to `psi(0) = 0`; `phi` absorbs the remainder along the
/// baseline.
///
/// Hypothesis gates, each reported as a violation with its worst node:
/// existence of the mixed partials (step-refinement probe must not diverge),
/// mixed-partial symmetry, and equality of the repeated second partials.
pub fn decompose_wave<S: Scalar>(
    f: &Function2D<S>,
    spec: &GridSpec<S>,
    cfg: &DecompositionConfig<S>,
) -> Result<WaveSplit<S>> {
    let ladder_reach = cfg
        .divergence_ladder
        .iter()
        .fold(S::zero(), |acc, &h| acc.max(h))
        * S::lit(2.5);
    let probe = probe_spec(f, spec, ladder_reach, cfg.probe_nodes)?;

    // existence probe: the mixed-partial quotient families must not diverge
    for path in [DerivativePath::xy(), DerivativePath::yx()] {
        for (i, j) in probe.indices() {
            let p = probe.node(i, j);
            let report = fd_convergence(f, &path, p, &cfg.divergence_ladder)?;
            if report.divergent {
                return Err(Error::HypothesisViolation {
                    check: format!("mixed partial d{path} exists (fd ladder diverges)"),
                    defect: report.values.last().unwrap().abs().as_f64(),
                    x: p.x.as_f64(),
                    y: p.y.as_f64(),
                    gate: crate::differencing::DIVERGENCE_GROWTH,
                });
            }
        }
    }

    // symmetry gates
    let paths = (
        DerivativePath::new(vec![crate::differencing::Axis::X, crate::differencing::Axis::X])
            .unwrap(),
        DerivativePath::new(vec![crate::differencing::Axis::Y, crate::differencing::Axis::Y])
            .unwrap(),
    );
    let mut mixed_symmetry = S::zero();
    let mut trace_mismatch = S::zero();
    for (check, pair, worst_slot) in [
        ("mixed partial symmetry (xy = yx)", (DerivativePath::xy(), DerivativePath::yx()), 0),
        ("repeated partial equality (xx = yy)", paths, 1),
    ] {
        let mut worst = S::zero();
        let mut worst_at = probe.node(0, 0);
        for (i, j) in probe.indices() {
            let p = probe.node(i, j);
            let a = fd_partial(f, &pair.0, p, cfg.h)?;
            let b = fd_partial(f, &pair.1, p, cfg.h)?;
            let defect = (a - b).abs();
            if defect > worst {
                worst = defect;
                worst_at = p;
            }
        }
        if worst > cfg.residual_gate {
            return Err(Error::HypothesisViolation {
                check: check.into(),
                defect: worst.as_f64(),
                x: worst_at.x.as_f64(),
                y: worst_at.y.as_f64(),
                gate: cfg.residual_gate.as_f64(),
            });
        }
        if worst_slot == 0 {
            mixed_symmetry = worst;
        } else {
            trace_mismatch = worst;
        }
    }

    // g = f'_x - f'_y must be constant along x - y = c
    let g = derived_first_order_field(f, cfg.h, -S::one());
    let constancy = constancy_along_characteristics(
        &g,
        S::one(),
        spec,
        33,
        129,
        cfg.residual_gate,
    )?;
    if !constancy.pass {
        let worst = constancy
            .lines
            .iter()
            .max_by(|a, b| a.deviation.partial_cmp(&b.deviation).unwrap())
            .unwrap();
        return Err(Error::HypothesisViolation {
            check: "derivative difference depends on x - y only".into(),
            defect: worst.deviation.as_f64(),
            x: worst.offset.as_f64(),
            y: S::zero().as_f64(),
            gate: cfg.residual_gate.as_f64(),
        });
    }

    let rect = spec.rect;
    let (t0, t1) = offset_range(&rect, S::one());
    if S::zero() < t0 || S::zero() > t1 {
        return Err(Error::Validation(
            "gauge point t = 0 outside the offset range: the rectangle does not meet x = y"
                .into(),
        ));
    }
    let sample_g = |t: S| {
        let p = staircase_point(&rect, S::one(), t, cfg.baseline);
        g.eval_unchecked(p.x, p.y)
    };
    let psi_tilde = Profile1D::from_fn(t0, t1, cfg.profile_samples, sample_g)?;

    // psi(t) = (1/2) * integral of psi_tilde from 0, cumulative trapezoid on
    // a substepped ladder
    let ts = psi_tilde.t_values().to_vec();
    let m = cfg.quad_substeps.max(1);
    let mut cumulative = Vec::with_capacity(ts.len());
    let mut acc = S::zero();
    cumulative.push(acc);
    for w in ts.windows(2) {
        acc = acc + trapezoid(&sample_g, w[0], w[1], m);
        cumulative.push(acc);
    }
    // gauge: subtract the cumulative value at t = 0
    let j = ts.partition_point(|&u| u <= S::zero()).saturating_sub(1);
    let at_zero = cumulative[j] + trapezoid(&sample_g, ts[j], S::zero(), m);
    let half = S::lit(0.5);
    let psi_values: Vec<S> = cumulative.iter().map(|&c| (c - at_zero) * half).collect();
    let psi = Profile1D::new(ts, psi_values)?;

    // phi(s) = f - psi(x - y) along the anti-characteristic staircase
    let (s0, s1) = sum_range(&rect);
    let base = f.clone();
    let psi_for_phi = psi.clone();
    let phi = Profile1D::from_fn(s0, s1, cfg.profile_samples, move |s| {
        let p = anti_staircase_point(&rect, s, cfg.baseline);
        base.eval_unchecked(p.x, p.y) - psi_for_phi.eval_clamped(p.x - p.y)
    })?;

    let reconstruction_error = wave_reconstruction_error(f, &phi, &psi, spec);
    Ok(WaveSplit {
        phi,
        psi,
        psi_tilde,
        residuals: WaveResiduals {
            mixed_symmetry,
            trace_mismatch,
            characteristic_deviation: constancy.max_deviation,
        },
        reconstruction_error,
    })
}

fn trapezoid<S: Scalar>(g: &impl Fn(S) -> S, a: S, b: S, substeps: usize) -> S {
    if a == b {
        return S::zero();
    }
    let n = S::from_usize(substeps).unwrap();
    let h = (b - a) / n;
    let half = S::lit(0.5);
    let mut acc = (g(a) + g(b)) * half;
    for i in 1..substeps {
        acc = acc + g(a + h * S::from_usize(i).unwrap());
    }
    acc * h
}

/// Max-norm defect of `f - phi(x+y) - psi(x-y)` over the grid. Public so the
/// gauge-invariance property (shifting `psi` by a constant and `phi` by its
/// negative) can be checked directly.
pub fn wave_reconstruction_error<S: Scalar>(
    f: &Function2D<S>,
    phi: &Profile1D<S>,
    psi: &Profile1D<S>,
    spec: &GridSpec<S>,
) -> S {
    spec.indices()
        .map(|(i, j)| {
            let p = spec.node(i, j);
            let rebuilt = phi.eval_clamped(p.x + p.y) + psi.eval_clamped(p.x - p.y);
            (f.eval_unchecked(p.x, p.y) - rebuilt).abs()
        })
        .fold(S::zero(), S::max)
}
