//! Discretized computation of the auxiliary delta-window function of
//! difference quotients and a discrete upper-semicontinuity check over grids
//! of its values.
//!
//! For a one-variable function `g` and a symmetric window `[-eps, eps]`, the
//! value at `x` is the largest dyadic `delta <= 1` such that all difference
//! quotients `r_g(a, b)` with `a` sampled from `(x - delta, x)` and `b` from
//! `(x, x + delta)` stay within `eps` of one another. The true value is a
//! supremum over real `delta`; the dyadic ladder makes the discretized value
//! a lower bound up to ladder granularity, which the tolerance of
//! [`usc_violations`] absorbs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_model::Function2D;
use crate::geometry::GridSpec;
use crate::scalar::Scalar;

/// Which variable a per-node field differentiates in; the other variable is
/// the frozen parameter of the section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionAxis {
    X,
    Y,
}

impl std::fmt::Display for SectionAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SectionAxis::X => "x",
            SectionAxis::Y => "y",
        })
    }
}

/// Grid of discretized delta-window values for a fixed tolerance window.
/// Serializes to the grid JSON schema plus `epsilon` and `axis`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaField<S> {
    pub x0: S,
    pub x1: S,
    pub y0: S,
    pub y1: S,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<S>,
    pub epsilon: S,
    pub axis: SectionAxis,
}

impl<S: Scalar> LambdaField<S> {
    pub fn value(&self, i: usize, j: usize) -> S {
        self.values[i * self.ny + j]
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.nx * self.ny {
            return Err(Error::Validation(format!(
                "lambda field has {} values, expected {}",
                self.values.len(),
                self.nx * self.ny
            )));
        }
        if self
            .values
            .iter()
            .any(|v| !v.is_finite() || *v < S::zero() || *v > S::one())
        {
            return Err(Error::Validation(
                "lambda values must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Largest dyadic `delta` in `{1, 1/2, ..., 2^-resolution}` for which all
/// sampled cross-quotients at `x` differ by at most `epsilon`; `0` when even
/// the smallest candidate fails.
///
/// Each side of `x` is sampled at `resolution` points offset by half a step
/// from the interval ends, honoring the open intervals. Candidates are
/// scanned downward, so the first passing rung is the answer.
pub fn lambda_1d<S: Scalar>(
    g: impl Fn(S) -> S,
    x: S,
    epsilon: S,
    resolution: u32,
) -> Result<S> {
    if epsilon <= S::zero() || !epsilon.is_finite() {
        return Err(Error::Validation(format!(
            "epsilon must be positive, got {epsilon:?}"
        )));
    }
    if resolution < 8 {
        return Err(Error::Validation(format!(
            "resolution must be at least 8, got {resolution}"
        )));
    }
    let res = resolution as usize;
    let half = S::lit(0.5);
    let mut left = vec![S::zero(); res];
    let mut right = vec![S::zero(); res];
    let mut g_left = vec![S::zero(); res];
    let mut g_right = vec![S::zero(); res];
    let mut delta = S::one();
    for _ in 0..=resolution {
        let step = delta / S::from_usize(res).unwrap();
        for i in 0..res {
            let offset = step * (S::from_usize(i).unwrap() + half);
            left[i] = x - delta + offset;
            right[i] = x + offset;
        }
        let mut ok = true;
        for i in 0..res {
            let (gl, gr) = (g(left[i]), g(right[i]));
            if !gl.is_finite() {
                return Err(Error::NonFiniteSample {
                    t: left[i].as_f64(),
                });
            }
            if !gr.is_finite() {
                return Err(Error::NonFiniteSample {
                    t: right[i].as_f64(),
                });
            }
            g_left[i] = gl;
            g_right[i] = gr;
        }
        let mut min_q = S::infinity();
        let mut max_q = S::neg_infinity();
        'pairs: for i in 0..res {
            for j in 0..res {
                let q = (g_left[i] - g_right[j]) / (left[i] - right[j]);
                if !q.is_finite() {
                    // step collapsed below floating-point granularity;
                    // the candidate fails rather than erroring out
                    ok = false;
                    break 'pairs;
                }
                min_q = min_q.min(q);
                max_q = max_q.max(q);
                if max_q - min_q > epsilon {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            return Ok(delta);
        }
        delta = delta * half;
    }
    Ok(S::zero())
}

/// Per-node [`lambda_1d`] of the grid sections of `f`: with `axis = X` the
/// section through node `(x, y)` is `t -> f(t, y)` evaluated at `x`, and
/// symmetrically for `axis = Y`. Nodes are independent and computed in
/// parallel; assembly order is deterministic.
pub fn lambda_field<S: Scalar>(
    f: &Function2D<S>,
    axis: SectionAxis,
    epsilon: S,
    spec: &GridSpec<S>,
    resolution: u32,
) -> Result<LambdaField<S>> {
    let indices: Vec<(usize, usize)> = spec.indices().collect();
    let values: Result<Vec<S>> = indices
        .par_iter()
        .map(|&(i, j)| {
            let p = spec.node(i, j);
            match axis {
                SectionAxis::X => lambda_1d(f.section_x(p.y), p.x, epsilon, resolution),
                SectionAxis::Y => lambda_1d(f.section_y(p.x), p.y, epsilon, resolution),
            }
        })
        .collect();
    let field = LambdaField {
        x0: spec.rect.x0,
        x1: spec.rect.x1,
        y0: spec.rect.y0,
        y1: spec.rect.y1,
        nx: spec.nx,
        ny: spec.ny,
        values: values?,
        epsilon,
        axis,
    };
    field.validate()?;
    Ok(field)
}

/// Discrete upper-semicontinuity failures: nodes whose value falls more than
/// `tol` below the maximum over their (up to 8) grid neighbors. An empty
/// list is a pass.
pub fn usc_violations<S: Scalar>(field: &LambdaField<S>, tol: S) -> Vec<(usize, usize)> {
    let (nx, ny) = (field.nx, field.ny);
    let mut flagged = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            let mut neighbor_max = S::neg_infinity();
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= nx as i64 || nj >= ny as i64 {
                        continue;
                    }
                    neighbor_max = neighbor_max.max(field.value(ni as usize, nj as usize));
                }
            }
            if field.value(i, j) < neighbor_max - tol {
                flagged.push((i, j));
            }
        }
    }
    flagged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_model::{catalog_get, profile_fn};
    use crate::geometry::Rect;

    /// Literal all-pairs reimplementation of the candidate check, used as an
    /// independent oracle for the dyadic values asserted below.
    fn lambda_oracle(g: impl Fn(f64) -> f64, x: f64, eps: f64, res: u32) -> f64 {
        let n = res as usize;
        let mut delta = 1.0f64;
        for _ in 0..=res {
            let step = delta / n as f64;
            let left: Vec<f64> = (0..n).map(|i| x - delta + (i as f64 + 0.5) * step).collect();
            let right: Vec<f64> = (0..n).map(|j| x + (j as f64 + 0.5) * step).collect();
            let mut quotients = Vec::with_capacity(n * n);
            for &a in &left {
                for &b in &right {
                    quotients.push((g(a) - g(b)) / (a - b));
                }
            }
            let pass = quotients.iter().all(|q| q.is_finite())
                && quotients.iter().all(|&q1| {
                    quotients.iter().all(|&q2| (q1 - q2).abs() <= eps)
                });
            if pass {
                return delta;
            }
            delta /= 2.0;
        }
        0.0
    }

    #[test]
    fn affine_sections_give_one() {
        for (a, b) in [(2.0, -1.0), (0.0, 3.0), (-0.5, 0.25)] {
            let l = lambda_1d(|t: f64| a * t + b, 0.3, 1e-6, 16).unwrap();
            assert_eq!(l, 1.0);
        }
    }

    #[test]
    fn square_at_zero_hits_the_dyadic_quarter() {
        // quotients r(a, b) = a + b range over ~(-delta, delta); the worst
        // pair difference ~2*delta passes eps = 0.5 exactly from delta = 1/4
        let l = lambda_1d(|t: f64| t * t, 0.0, 0.5, 64).unwrap();
        assert_eq!(l, 0.25);
        assert_eq!(lambda_oracle(|t| t * t, 0.0, 0.5, 64), 0.25);
    }

    #[test]
    fn abs_at_zero_fails_every_candidate() {
        // quotients straddle the kink with values near +1 and -1
        let l = lambda_1d(|t: f64| t.abs(), 0.0, 1.0, 32).unwrap();
        assert_eq!(l, 0.0);
        assert_eq!(lambda_oracle(|t| t.abs(), 0.0, 1.0, 32), 0.0);
    }

    #[test]
    fn monotone_in_epsilon() {
        let profiles = ["sin", "cos", "exp", "abs", "square"];
        for name in profiles {
            let pf = profile_fn::<f64>(name).unwrap();
            let g = |t: f64| pf.eval(t);
            let mut last = 0.0;
            for k in 0..10 {
                let eps = 0.01 * 2.0f64.powi(k);
                let l = lambda_1d(g, 0.4, eps, 16).unwrap();
                assert!(l >= last, "{name}: lambda not monotone in epsilon");
                last = l;
            }
        }
    }

    #[test]
    fn differentiable_profiles_have_positive_lambda() {
        for name in ["sin", "cos", "exp", "square", "cube", "id"] {
            let pf = profile_fn::<f64>(name).unwrap();
            for eps in [1e-1, 1e-2, 1e-3] {
                let l = lambda_1d(|t| pf.eval(t), 0.7, eps, 24).unwrap();
                assert!(l > 0.0, "{name} at eps {eps}");
            }
        }
    }

    #[test]
    fn translation_invariance() {
        for (name, x) in [("square", 0.0), ("abs", 0.0), ("sin", 0.25)] {
            let pf = profile_fn::<f64>(name).unwrap();
            let c = 1.0;
            let direct = lambda_1d(|t| pf.eval(t), x, 0.5, 32).unwrap();
            let shifted = lambda_1d(|t| pf.eval(t - c), x + c, 0.5, 32).unwrap();
            assert_eq!(direct, shifted, "{name}");
        }
    }

    #[test]
    fn validation_errors() {
        assert!(lambda_1d(|t: f64| t, 0.0, 0.0, 16).is_err());
        assert!(lambda_1d(|t: f64| t, 0.0, -1.0, 16).is_err());
        assert!(lambda_1d(|t: f64| t, 0.0, 1.0, 4).is_err());
        assert!(matches!(
            lambda_1d(|t: f64| 1.0 / (t - t), 0.0, 1.0, 8),
            Err(Error::NonFiniteSample { .. })
        ));
    }

    fn small_grid(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> GridSpec<f64> {
        GridSpec::new(Rect::new(x0, x1, y0, y1).unwrap(), nx, ny).unwrap()
    }

    #[test]
    fn affine_in_x_fields_are_identically_one() {
        // f(x, y) = x * c(y): every x-section is affine
        let f = Function2D::from_fn("x*cos(y)", Rect::centered(2.0).unwrap(), |x, y: f64| {
            x * y.cos()
        });
        let spec = small_grid(-1.0, 1.0, -1.0, 1.0, 7, 7);
        let field = lambda_field(&f, SectionAxis::X, 0.25, &spec, 16).unwrap();
        assert!(field.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn kinked_plane_wave_vanishes_exactly_on_the_diagonal() {
        let f = catalog_get::<f64>("plane_wave:abs").unwrap();
        let spec = small_grid(-1.0, 1.0, -1.0, 1.0, 9, 9);
        let field = lambda_field(&f, SectionAxis::X, 1.0, &spec, 32).unwrap();
        for (i, j) in spec.indices() {
            let p = spec.node(i, j);
            let v = field.value(i, j);
            if p.x == p.y {
                assert_eq!(v, 0.0, "diagonal node ({}, {})", p.x, p.y);
            } else {
                assert!(v > 0.0, "off-diagonal node ({}, {})", p.x, p.y);
                // oracle: the section is |t - y|, a translate of |t|
                let expected = lambda_1d(|t: f64| t.abs(), p.x - p.y, 1.0, 32).unwrap();
                assert_eq!(v, expected);
            }
        }
    }

    #[test]
    fn schwartz_sections_have_positive_lambda() {
        let f = catalog_get::<f64>("schwartz").unwrap();
        let spec = small_grid(-1.0, 1.0, -1.0, 1.0, 21, 21);
        let field = lambda_field(&f, SectionAxis::X, 0.1, &spec, 64).unwrap();
        assert!(field.values.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn usc_flags_an_isolated_dip() {
        let spec = small_grid(0.0, 1.0, 0.0, 1.0, 5, 5);
        let mut values = vec![1.0; spec.len()];
        values[spec.index(2, 2)] = 0.0;
        let field = LambdaField {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
            nx: 5,
            ny: 5,
            values,
            epsilon: 0.5,
            axis: SectionAxis::X,
        };
        assert_eq!(usc_violations(&field, 0.5), vec![(2, 2)]);
        // uniform field: nothing flagged
        let uniform = LambdaField {
            values: vec![0.7; 25],
            ..field
        };
        assert!(usc_violations(&uniform, 0.05).is_empty());
    }

    #[test]
    fn usc_clean_on_a_resolved_kink_field() {
        // near-diagonal window fine enough that neighbor values sit inside
        // the tolerance; the diagonal zeros are then below-neighbor dips of
        // size < tol and the discrete check passes
        let f = catalog_get::<f64>("plane_wave:abs").unwrap();
        let spec = small_grid(0.0, 0.06, 0.0, 0.06, 21, 21);
        let field = lambda_field(&f, SectionAxis::X, 1.0, &spec, 32).unwrap();
        let violations = usc_violations(&field, 0.05);
        assert!(violations.is_empty(), "flagged: {violations:?}");
    }

    #[test]
    fn lambda_field_json_carries_epsilon_and_axis() {
        let f = catalog_get::<f64>("plane_wave:abs").unwrap();
        let spec = small_grid(-1.0, 1.0, -1.0, 1.0, 3, 3);
        let field = lambda_field(&f, SectionAxis::X, 0.5, &spec, 8).unwrap();
        let text = serde_json::to_string(&field).unwrap();
        assert!(text.contains("\"epsilon\":0.5"), "{text}");
        assert!(text.contains("\"axis\":\"x\""), "{text}");
        let back: LambdaField<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, field);
    }

    use crate::function_model::Function2D;
}
