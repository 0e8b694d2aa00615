//! Evaluatable planar scalar fields, the built-in function catalog, and grid
//! sampling / ingestion.

mod catalog;
mod grid;
mod profile;

pub use catalog::{catalog_descriptions, catalog_get, catalog_names, profile_fn, ProfileFn};
pub use grid::{from_grid, sample_grid, GridSample};
pub use profile::Profile1D;

use std::collections::HashMap;
use std::sync::Arc;

use crate::differencing::DerivativePath;
use crate::error::Result;
use crate::geometry::{Point2, Rect};
use crate::scalar::Scalar;

/// Shared 2D evaluator.
pub type Eval2<S> = Arc<dyn Fn(S, S) -> S + Send + Sync>;

/// An evaluatable scalar field on a rectangle.
///
/// The evaluator is total on the domain: points where the defining formula is
/// indeterminate are listed in `singular_points` together with their declared
/// values and intercepted before the formula runs. Optional exact partial
/// derivatives are keyed by ordered [`DerivativePath`]; they describe the
/// formula away from singular points and are never consulted *at* one.
#[derive(Clone)]
pub struct Function2D<S: Scalar> {
    name: String,
    domain: Rect<S>,
    evaluator: Eval2<S>,
    exact_partials: HashMap<DerivativePath, Eval2<S>>,
    singular_points: Vec<(Point2<S>, S)>,
}

impl<S: Scalar> Function2D<S> {
    pub fn from_fn(
        name: impl Into<String>,
        domain: Rect<S>,
        evaluator: impl Fn(S, S) -> S + Send + Sync + 'static,
    ) -> Self {
        Function2D {
            name: name.into(),
            domain,
            evaluator: Arc::new(evaluator),
            exact_partials: HashMap::new(),
            singular_points: Vec::new(),
        }
    }

    pub fn with_singular_point(mut self, p: Point2<S>, value: S) -> Self {
        self.singular_points.push((p, value));
        self
    }

    pub fn with_exact_partial(
        mut self,
        path: DerivativePath,
        eval: impl Fn(S, S) -> S + Send + Sync + 'static,
    ) -> Self {
        self.exact_partials.insert(path, Arc::new(eval));
        self
    }

    pub(crate) fn with_exact_partials(
        mut self,
        partials: HashMap<DerivativePath, Eval2<S>>,
    ) -> Self {
        self.exact_partials = partials;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Rect<S> {
        self.domain
    }

    pub fn singular_points(&self) -> &[(Point2<S>, S)] {
        &self.singular_points
    }

    pub fn is_singular(&self, p: Point2<S>) -> bool {
        self.singular_points
            .iter()
            .any(|(q, _)| q.x == p.x && q.y == p.y)
    }

    pub fn has_exact_partials(&self) -> bool {
        !self.exact_partials.is_empty()
    }

    pub fn exact_partial(&self, path: &DerivativePath) -> Option<&Eval2<S>> {
        self.exact_partials.get(path)
    }

    /// Domain-checked evaluation.
    pub fn eval(&self, p: Point2<S>) -> Result<S> {
        if !self.domain.contains(p) {
            return Err(self.domain.outside_error(p));
        }
        Ok(self.eval_unchecked(p.x, p.y))
    }

    /// Evaluation without the domain check. Catalog formulas are total on the
    /// plane; diagnostics (lambda windows, profile staircases) rely on this to
    /// probe slightly past the declared rectangle.
    pub fn eval_unchecked(&self, x: S, y: S) -> S {
        for (q, v) in &self.singular_points {
            if q.x == x && q.y == y {
                return *v;
            }
        }
        (self.evaluator)(x, y)
    }

    /// The section `f_y`: `t -> f(t, y)` for frozen `y`.
    pub fn section_x(&self, y: S) -> impl Fn(S) -> S + '_ {
        move |t| self.eval_unchecked(t, y)
    }

    /// The section `f^x`: `t -> f(x, t)` for frozen `x`.
    pub fn section_y(&self, x: S) -> impl Fn(S) -> S + '_ {
        move |t| self.eval_unchecked(x, t)
    }
}

impl<S: Scalar> std::fmt::Debug for Function2D<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Function2D")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("exact_partials", &self.exact_partials.len())
            .field("singular_points", &self.singular_points)
            .finish()
    }
}

/// `eval2d` from the operation table: domain-checked evaluation at a point.
pub fn eval2d<S: Scalar>(f: &Function2D<S>, p: Point2<S>) -> Result<S> {
    f.eval(p)
}
