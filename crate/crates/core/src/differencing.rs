//! Difference quotients, nested finite-difference partial derivatives, the
//! order-n derivative-sum operator, and step-refinement divergence detection.
//!
//! Conventions:
//! - A [`DerivativePath`] lists axes in application order: the first element
//!   is the innermost derivative. `[X, Y]` differentiates in x first, then y.
//! - All stencils are central, switching to second-order one-sided stencils
//!   only where the domain edge leaves no room.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_model::Function2D;
use crate::geometry::{Point2, Rect};
use crate::scalar::Scalar;

/// Coordinate axis of a partial derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// An ordered sequence of differentiation axes. Order n has exactly `2^n`
/// distinct paths; mixed orders are distinct objects (`[X, Y]` vs `[Y, X]`)
/// because the fields under study may not have symmetric mixed partials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivativePath(Vec<Axis>);

impl DerivativePath {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Validation(
                "derivative path must have order >= 1".into(),
            ));
        }
        Ok(DerivativePath(axes))
    }

    pub fn x() -> Self {
        DerivativePath(vec![Axis::X])
    }

    pub fn y() -> Self {
        DerivativePath(vec![Axis::Y])
    }

    pub fn xy() -> Self {
        DerivativePath(vec![Axis::X, Axis::Y])
    }

    pub fn yx() -> Self {
        DerivativePath(vec![Axis::Y, Axis::X])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.len() as u32
    }

    /// `(p, q)`: number of x respectively y entries.
    pub fn counts(&self) -> (u32, u32) {
        let p = self.0.iter().filter(|a| **a == Axis::X).count() as u32;
        (p, self.order() - p)
    }

    /// All `2^n` ordered paths of order `n`, in lexicographic order (X < Y).
    pub fn all_of_order(n: u32) -> Vec<DerivativePath> {
        assert!(n >= 1, "order must be >= 1");
        let mut paths = vec![Vec::new()];
        for _ in 0..n {
            paths = paths
                .into_iter()
                .flat_map(|p| {
                    let mut a = p.clone();
                    a.push(Axis::X);
                    let mut b = p;
                    b.push(Axis::Y);
                    [a, b]
                })
                .collect();
        }
        paths.into_iter().map(DerivativePath).collect()
    }
}

impl std::fmt::Display for DerivativePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for a in &self.0 {
            write!(f, "{}", if *a == Axis::X { 'x' } else { 'y' })?;
        }
        Ok(())
    }
}

/// The secant slope `(g(x1) - g(x2)) / (x1 - x2)`; symmetric in its
/// arguments. Extending to the diagonal (`r(x0, x0) = g'(x0)`) is the
/// caller's business via [`fd_partial`].
pub fn diff_quotient<S: Scalar>(g: impl Fn(S) -> S, x1: S, x2: S) -> Result<S> {
    if x1 == x2 {
        return Err(Error::Degenerate(format!(
            "difference quotient needs distinct abscissae, got x1 = x2 = {:?}",
            x1
        )));
    }
    Ok((g(x1) - g(x2)) / (x1 - x2))
}

/// A directional difference quotient between two plane points, together with
/// the direction cosines of the segment from `p` to `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuotientSample<S> {
    pub p: Point2<S>,
    pub q: Point2<S>,
    pub quotient: S,
    pub distance: S,
    pub cos_alpha: S,
    pub sin_alpha: S,
}

/// `(f(q) - f(p)) / d(q, p)` with the angle of `p -> q` against the positive
/// x-axis.
pub fn directional_quotient<S: Scalar>(
    f: &Function2D<S>,
    p: Point2<S>,
    q: Point2<S>,
) -> Result<QuotientSample<S>> {
    for point in [p, q] {
        if !f.domain().contains(point) {
            return Err(f.domain().outside_error(point));
        }
    }
    if p.x == q.x && p.y == q.y {
        return Err(Error::Degenerate(format!(
            "directional quotient needs distinct points, got p = q = ({:?}, {:?})",
            p.x, p.y
        )));
    }
    let distance = p.distance(q);
    let quotient = (f.eval_unchecked(q.x, q.y) - f.eval_unchecked(p.x, p.y)) / distance;
    Ok(QuotientSample {
        p,
        q,
        quotient,
        distance,
        cos_alpha: (q.x - p.x) / distance,
        sin_alpha: (q.y - p.y) / distance,
    })
}

/// Outcome of [`fd_partial_full`]: the value actually used plus both routes
/// when available, for cross-checking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdValue<S> {
    /// Exact partial when present (and `p` non-singular), else the FD value.
    pub value: S,
    /// Exact-partial route, if the function carries one for this path.
    pub exact: Option<S>,
    /// Finite-difference route; `None` only when the stencil escapes the
    /// domain but an exact partial saved the evaluation.
    pub fd: Option<S>,
}

fn eval_checked<S: Scalar>(f: &Function2D<S>, x: S, y: S) -> Result<S> {
    let v = f.eval_unchecked(x, y);
    if !v.is_finite() {
        return Err(Error::NonFinite {
            x: x.as_f64(),
            y: y.as_f64(),
        });
    }
    Ok(v)
}

/// One nested central/one-sided difference along `path` (innermost-first),
/// all stencil points kept inside `domain`.
fn nested_fd<S: Scalar>(
    f: &Function2D<S>,
    path: &[Axis],
    p: Point2<S>,
    h: S,
    domain: &Rect<S>,
) -> Result<S> {
    let Some((&outer, inner)) = path.split_last() else {
        return eval_checked(f, p.x, p.y);
    };
    let (lo, hi, t) = match outer {
        Axis::X => (domain.x0, domain.x1, p.x),
        Axis::Y => (domain.y0, domain.y1, p.y),
    };
    let at = |t: S| match outer {
        Axis::X => Point2::new(t, p.y),
        Axis::Y => Point2::new(p.x, t),
    };
    let two = S::lit(2.0);
    if t - h >= lo && t + h <= hi {
        let a = nested_fd(f, inner, at(t + h), h, domain)?;
        let b = nested_fd(f, inner, at(t - h), h, domain)?;
        Ok((a - b) / (two * h))
    } else if t + two * h <= hi {
        // second-order forward stencil at the lower edge
        let v0 = nested_fd(f, inner, at(t), h, domain)?;
        let v1 = nested_fd(f, inner, at(t + h), h, domain)?;
        let v2 = nested_fd(f, inner, at(t + two * h), h, domain)?;
        Ok((-S::lit(3.0) * v0 + S::lit(4.0) * v1 - v2) / (two * h))
    } else if t - two * h >= lo {
        let v0 = nested_fd(f, inner, at(t), h, domain)?;
        let v1 = nested_fd(f, inner, at(t - h), h, domain)?;
        let v2 = nested_fd(f, inner, at(t - two * h), h, domain)?;
        Ok((S::lit(3.0) * v0 - S::lit(4.0) * v1 + v2) / (two * h))
    } else {
        Err(domain.outside_error(at(t + two * h)))
    }
}

/// Finite-difference partial derivative along `path` at `p` with step `h`.
/// When the function carries an exact partial for the path (and `p` is not a
/// declared singular point), the exact value is used and the FD value is
/// still computed where the stencil allows, so callers can cross-check.
pub fn fd_partial_full<S: Scalar>(
    f: &Function2D<S>,
    path: &DerivativePath,
    p: Point2<S>,
    h: S,
    use_exact: bool,
) -> Result<FdValue<S>> {
    if h <= S::zero() || !h.is_finite() {
        return Err(Error::Validation(format!("step must be positive, got {h:?}")));
    }
    if !f.domain().contains(p) {
        return Err(f.domain().outside_error(p));
    }
    let exact = if use_exact && !f.is_singular(p) {
        f.exact_partial(path).map(|e| e(p.x, p.y))
    } else {
        None
    };
    let domain = f.domain();
    let fd = nested_fd(f, path.axes(), p, h, &domain);
    match (exact, fd) {
        (Some(v), Ok(fd)) => Ok(FdValue {
            value: v,
            exact: Some(v),
            fd: Some(fd),
        }),
        (Some(v), Err(_)) => Ok(FdValue {
            value: v,
            exact: Some(v),
            fd: None,
        }),
        (None, Ok(fd)) => Ok(FdValue {
            value: fd,
            exact: None,
            fd: Some(fd),
        }),
        (None, Err(e)) => Err(e),
    }
}

/// The value of the partial derivative along `path` at `p` (exact partial
/// when available, nested central differences otherwise).
pub fn fd_partial<S: Scalar>(
    f: &Function2D<S>,
    path: &DerivativePath,
    p: Point2<S>,
    h: S,
) -> Result<S> {
    Ok(fd_partial_full(f, path, p, h, true)?.value)
}

/// Sum of all `2^n` order-n partial derivatives at `p`.
pub fn dn_apply_full<S: Scalar>(
    f: &Function2D<S>,
    n: u32,
    p: Point2<S>,
    h: S,
    use_exact: bool,
) -> Result<S> {
    if n < 1 {
        return Err(Error::Validation("derivative order must be >= 1".into()));
    }
    let mut sum = S::zero();
    for path in DerivativePath::all_of_order(n) {
        sum = sum + fd_partial_full(f, &path, p, h, use_exact)?.value;
    }
    Ok(sum)
}

/// [`dn_apply_full`] with exact partials enabled.
pub fn dn_apply<S: Scalar>(f: &Function2D<S>, n: u32, p: Point2<S>, h: S) -> Result<S> {
    dn_apply_full(f, n, p, h, true)
}

/// Growth factor above which a refinement ladder counts as non-convergent.
pub const DIVERGENCE_GROWTH: f64 = 10.0;

/// A family of FD values over decreasing steps, with the divergence verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport<S> {
    pub steps: Vec<S>,
    pub values: Vec<S>,
    pub divergent: bool,
}

/// The halving ladder `h, h/2, ..., h/2^(rungs-1)` used for routine
/// refinement checks.
pub fn halving_ladder<S: Scalar>(h: S, rungs: usize) -> Vec<S> {
    (0..rungs)
        .map(|i| h / S::lit(f64::powi(2.0, i as i32)))
        .collect()
}

/// The decade ladder `h, h/10, ...` used when probing for derivatives that
/// blow up like a power of the step.
pub fn decade_ladder<S: Scalar>(h: S, rungs: usize) -> Vec<S> {
    (0..rungs)
        .map(|i| h / S::lit(f64::powi(10.0, i as i32)))
        .collect()
}

/// True when every successive refinement grows in magnitude by at least
/// [`DIVERGENCE_GROWTH`]. Needs at least three values; magnitudes below
/// `sqrt(eps)` never count as growth (a zero derivative is convergent).
pub fn diverges<S: Scalar>(values: &[S]) -> bool {
    if values.len() < 3 {
        return false;
    }
    let floor = S::epsilon().sqrt();
    values.windows(2).all(|w| {
        let prev = w[0].abs().max(floor);
        w[1].abs() >= S::lit(DIVERGENCE_GROWTH) * prev
    })
}

/// FD values of `path` at `p` across a step ladder, always through the
/// difference quotients (exact partials are deliberately ignored: this is the
/// existence probe).
pub fn fd_convergence<S: Scalar>(
    f: &Function2D<S>,
    path: &DerivativePath,
    p: Point2<S>,
    steps: &[S],
) -> Result<ConvergenceReport<S>> {
    if steps.is_empty() {
        return Err(Error::Validation("step ladder must be nonempty".into()));
    }
    let mut values = Vec::with_capacity(steps.len());
    for &h in steps {
        values.push(fd_partial_full(f, path, p, h, false)?.value);
    }
    let divergent = diverges(&values);
    Ok(ConvergenceReport {
        steps: steps.to_vec(),
        values,
        divergent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_model::catalog_get;
    use approx::assert_abs_diff_eq;

    fn rect2() -> Rect<f64> {
        Rect::centered(2.0).unwrap()
    }

    #[test]
    fn paths_of_order_n() {
        assert_eq!(DerivativePath::all_of_order(1).len(), 2);
        assert_eq!(DerivativePath::all_of_order(2).len(), 4);
        assert_eq!(DerivativePath::all_of_order(3).len(), 8);
        assert_eq!(DerivativePath::xy().counts(), (1, 1));
        assert_eq!(DerivativePath::xy().to_string(), "xy");
    }

    #[test]
    fn diff_quotient_examples() {
        assert_eq!(diff_quotient(|x: f64| x * x, 1.0, 3.0).unwrap(), 4.0);
        assert_eq!(diff_quotient(|_: f64| 5.0, -1.0, 7.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            diff_quotient(|x: f64| x.abs(), -1.0, 2.0).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-15
        );
        assert!(diff_quotient(|x: f64| x, 1.0, 1.0).is_err());
    }

    #[test]
    fn diff_quotient_is_symmetric() {
        let g = |x: f64| x * x * x - 2.0 * x;
        let a = diff_quotient(g, 0.3, 1.7).unwrap();
        let b = diff_quotient(g, 1.7, 0.3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn central_difference_exact_for_quadratics() {
        let f = Function2D::from_fn("x^2", Rect::centered(4.0).unwrap(), |x, _| x * x);
        let v = fd_partial(&f, &DerivativePath::x(), Point2::new(3.0, 0.0), 0.1).unwrap();
        assert_abs_diff_eq!(v, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn one_sided_at_the_edge() {
        let f = Function2D::from_fn("x^3", rect2(), |x, _| x * x * x);
        // x = 2 is the right edge; the backward 3-point stencil is second order
        let v = fd_partial(&f, &DerivativePath::x(), Point2::new(2.0, 0.0), 1e-4).unwrap();
        assert_abs_diff_eq!(v, 12.0, epsilon = 1e-6);
        // no room at all: shrink the step's reach beyond the rectangle
        let tiny = Function2D::from_fn("x", Rect::new(0.0, 1e-6, 0.0, 1.0).unwrap(), |x, _| x);
        assert!(fd_partial(&tiny, &DerivativePath::x(), Point2::new(0.0, 0.5), 1.0).is_err());
    }

    #[test]
    fn schwartz_first_partial_at_origin_vanishes() {
        let f = catalog_get::<f64>("schwartz").unwrap();
        let v = fd_partial(&f, &DerivativePath::x(), Point2::new(0.0, 0.0), 1e-3).unwrap();
        assert_eq!(v, 0.0);
        let v = fd_partial(&f, &DerivativePath::y(), Point2::new(0.0, 0.0), 1e-3).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn schwartz_mixed_partial_diverges_at_origin() {
        // Oracle: f'_y(x, 0) = 2/x away from 0, so the outer x-quotient at
        // step h is ~2/h^2 and grows by 100x per decade of refinement.
        let f = catalog_get::<f64>("schwartz").unwrap();
        let origin = Point2::new(0.0, 0.0);
        let report =
            fd_convergence(&f, &DerivativePath::xy(), origin, &decade_ladder(1e-1, 3)).unwrap();
        assert!(report.divergent);
        for w in report.values.windows(2) {
            let ratio = (w[1] / w[0]).abs();
            assert!((50.0..200.0).contains(&ratio), "ratio {ratio}");
        }
        // the same probe on a smooth entry converges
        let smooth = catalog_get::<f64>("plane_wave:sin").unwrap();
        let report = fd_convergence(
            &smooth,
            &DerivativePath::xy(),
            Point2::new(0.3, 0.1),
            &decade_ladder(1e-1, 3),
        )
        .unwrap();
        assert!(!report.divergent);
    }

    #[test]
    fn dn_apply_trivial_cases() {
        let f = Function2D::from_fn("x+y", rect2(), |x, y| x + y);
        let v = dn_apply(&f, 1, Point2::new(0.3, -0.7), 1e-4).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-9);

        // D_2 (x - y)^2 = 2 - 2 - 2 + 2 = 0 (symbolic oracle)
        let g = Function2D::from_fn("(x-y)^2", rect2(), |x, y| (x - y) * (x - y));
        let v = dn_apply(&g, 2, Point2::new(0.5, 0.25), 1e-3).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-6);

        let pw = catalog_get::<f64>("plane_wave:sin").unwrap();
        let v = dn_apply(&pw, 1, Point2::new(1.0, 0.0), 1e-4).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn dn_is_linear_in_the_field() {
        let p = Point2::new(0.4, -0.3);
        let h = 1e-3;
        let f = catalog_get::<f64>("plane_wave:sin").unwrap();
        let g = catalog_get::<f64>("wave_pair:cube:cos").unwrap();
        let (a, b) = (2.5, -1.25);
        let combo = Function2D::from_fn("combo", rect2(), {
            let (f, g) = (f.clone(), g.clone());
            move |x, y| a * f.eval_unchecked(x, y) + b * g.eval_unchecked(x, y)
        });
        for n in 1..=2 {
            let lhs = dn_apply_full(&combo, n, p, h, false).unwrap();
            let rhs = a * dn_apply_full(&f, n, p, h, false).unwrap()
                + b * dn_apply_full(&g, n, p, h, false).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-9 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn mixed_path_symmetry_for_smooth_fields() {
        // |fd([x,y]) - fd([y,x])| small over a grid for a C^2 function
        let f = catalog_get::<f64>("plane_wave:sin").unwrap();
        let h = 1e-3;
        let mut worst: f64 = 0.0;
        for i in 0..21 {
            for j in 0..21 {
                let p = Point2::new(-1.0 + 0.1 * i as f64, -1.0 + 0.1 * j as f64);
                let a = fd_partial_full(&f, &DerivativePath::xy(), p, h, false)
                    .unwrap()
                    .value;
                let b = fd_partial_full(&f, &DerivativePath::yx(), p, h, false)
                    .unwrap()
                    .value;
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst <= 1e-4, "worst asymmetry {worst}");
    }

    #[test]
    fn directional_quotient_examples() {
        let f = Function2D::from_fn("x", rect2(), |x, _| x);
        let s = directional_quotient(&f, Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)).unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.quotient, inv_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.cos_alpha, inv_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.sin_alpha, inv_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            s.cos_alpha * s.cos_alpha + s.sin_alpha * s.sin_alpha,
            1.0,
            epsilon = 1e-12
        );

        let c = Function2D::from_fn("c", rect2(), |_, _| 3.25);
        let s = directional_quotient(&c, Point2::new(0.1, 0.2), Point2::new(-0.4, 0.9)).unwrap();
        assert_eq!(s.quotient, 0.0);

        let err =
            directional_quotient(&c, Point2::new(0.1, 0.2), Point2::new(0.1, 0.2)).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn affine_fields_satisfy_the_directional_identity() {
        // quotient = f'_x cos(alpha) + f'_y sin(alpha) exactly for affine f,
        // checked over 100 deterministic pseudo-random pairs
        let f = Function2D::from_fn("x+y", rect2(), |x, y| x + y);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for _ in 0..100 {
            let p = Point2::new(next(), next());
            let q = Point2::new(next(), next());
            if p.x == q.x && p.y == q.y {
                continue;
            }
            let s = directional_quotient(&f, p, q).unwrap();
            let predicted = s.cos_alpha + s.sin_alpha;
            assert_abs_diff_eq!(s.quotient, predicted, epsilon = 1e-12);
        }
    }

    #[test]
    fn divergence_needs_three_rungs_and_real_growth() {
        assert!(!diverges(&[1.0f64, 100.0]));
        assert!(diverges(&[1.0f64, 10.0, 100.0]));
        assert!(!diverges(&[1.0f64, 10.0, 50.0]));
        // all-zero family is convergent, not divergent
        assert!(!diverges(&[0.0f64, 0.0, 0.0]));
    }
}
