//! Sampled one-variable functions with piecewise-linear interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A tabulated function of one variable. Evaluation between nodes is
/// piecewise linear, which keeps reconstruction errors at `O(dt^2)` and never
/// overshoots the tabulated range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile1D<S> {
    t_values: Vec<S>,
    values: Vec<S>,
}

impl<S: Scalar> Profile1D<S> {
    pub fn new(t_values: Vec<S>, values: Vec<S>) -> Result<Self> {
        if t_values.len() != values.len() {
            return Err(Error::Validation(format!(
                "profile table lengths differ: {} abscissae vs {} values",
                t_values.len(),
                values.len()
            )));
        }
        if t_values.len() < 2 {
            return Err(Error::Validation(
                "profile table needs at least 2 samples".into(),
            ));
        }
        if t_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation(
                "profile abscissae must be strictly increasing".into(),
            ));
        }
        if let Some(t) = t_values.iter().find(|t| !t.is_finite()) {
            return Err(Error::NonFiniteSample { t: t.as_f64() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample {
                t: t_values[i].as_f64(),
            });
        }
        Ok(Profile1D { t_values, values })
    }

    /// Uniform table of `n` samples of `f` over `[t0, t1]`. The last node is
    /// exactly `t1`.
    pub fn from_fn(t0: S, t1: S, n: usize, f: impl Fn(S) -> S) -> Result<Self> {
        if n < 2 || t0 >= t1 {
            return Err(Error::Validation(format!(
                "profile needs n >= 2 and t0 < t1, got n = {n}, [{t0:?}, {t1:?}]"
            )));
        }
        let dt = (t1 - t0) / S::from_usize(n - 1).unwrap();
        let t_values: Vec<S> = (0..n)
            .map(|i| {
                if i == n - 1 {
                    t1
                } else {
                    t0 + dt * S::from_usize(i).unwrap()
                }
            })
            .collect();
        let values = t_values.iter().map(|&t| f(t)).collect();
        Profile1D::new(t_values, values)
    }

    pub fn t_min(&self) -> S {
        self.t_values[0]
    }

    pub fn t_max(&self) -> S {
        *self.t_values.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.t_values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_values(&self) -> &[S] {
        &self.t_values
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// Piecewise-linear evaluation. `t` may overhang the table range by a
    /// relative `1e-12` slack (floating-point drift of callers); anything
    /// further out is a range error.
    pub fn eval(&self, t: S) -> Result<S> {
        let (lo, hi) = (self.t_min(), self.t_max());
        let slack = (hi - lo) * S::lit(1e-12);
        if t < lo - slack || t > hi + slack {
            return Err(Error::ProfileRange {
                t: t.as_f64(),
                t0: lo.as_f64(),
                t1: hi.as_f64(),
            });
        }
        let t = t.max(lo).min(hi);
        // partition_point: first index with t_values[i] > t
        let k = self.t_values.partition_point(|&u| u <= t);
        if k == 0 {
            return Ok(self.values[0]);
        }
        if k == self.len() {
            return Ok(*self.values.last().unwrap());
        }
        let (ta, tb) = (self.t_values[k - 1], self.t_values[k]);
        let (va, vb) = (self.values[k - 1], self.values[k]);
        let w = (t - ta) / (tb - ta);
        Ok(va + (vb - va) * w)
    }

    /// Evaluation with `t` clamped into the table range. Reconstruction
    /// closures use this: their arguments are inside the range by
    /// construction and only floating-point drift can push them out.
    pub fn eval_clamped(&self, t: S) -> S {
        let t = t.max(self.t_min()).min(self.t_max());
        self.eval(t).expect("clamped abscissa is in range")
    }

    /// New profile with the same abscissae and transformed values.
    pub fn map_values(&self, f: impl Fn(S) -> S) -> Self {
        Profile1D {
            t_values: self.t_values.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Largest absolute difference between the table and `g` at the table's
    /// own nodes.
    pub fn sup_diff(&self, g: impl Fn(S) -> S) -> S {
        self.t_values
            .iter()
            .zip(&self.values)
            .map(|(&t, &v)| (v - g(t)).abs())
            .fold(S::zero(), S::max)
    }
}
