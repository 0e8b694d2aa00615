//! Finite-dimensional vector-valued transport checks: directional
//! derivatives probed through coordinate functionals, the two-section
//! derivative residual, and the translation-structure verdict.
//!
//! The separating family of functionals is fixed to the coordinate
//! projections of `R^m`; a directional derivative is then a scalar table
//! indexed by (direction, coordinate).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::sync::Arc;

/// Largest supported factor dimension for tabulated outputs.
pub const MAX_DIMENSION: usize = 3;

/// A map `(x, y) in R^d x R^d -> R^m` on a product of boxes.
#[derive(Clone)]
pub struct VectorMap<S: Scalar> {
    pub name: String,
    pub d: usize,
    pub m: usize,
    evaluator: Arc<dyn Fn(&[S], &[S]) -> Vec<S> + Send + Sync>,
    /// Per-axis bounds of the x-factor box.
    pub domain_x: Vec<(S, S)>,
    /// Per-axis bounds of the y-factor box.
    pub domain_y: Vec<(S, S)>,
}

impl<S: Scalar> VectorMap<S> {
    pub fn new(
        name: impl Into<String>,
        d: usize,
        m: usize,
        domain_x: Vec<(S, S)>,
        domain_y: Vec<(S, S)>,
        evaluator: impl Fn(&[S], &[S]) -> Vec<S> + Send + Sync + 'static,
    ) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(Error::Validation("dimensions must be positive".into()));
        }
        if domain_x.len() != d || domain_y.len() != d {
            return Err(Error::Validation(
                "domain boxes must have one bound pair per axis".into(),
            ));
        }
        Ok(VectorMap {
            name: name.into(),
            d,
            m,
            evaluator: Arc::new(evaluator),
            domain_x,
            domain_y,
        })
    }

    pub fn eval(&self, x: &[S], y: &[S]) -> Vec<S> {
        debug_assert_eq!(x.len(), self.d);
        debug_assert_eq!(y.len(), self.d);
        let out = (self.evaluator)(x, y);
        debug_assert_eq!(out.len(), self.m);
        out
    }
}

impl<S: Scalar> std::fmt::Debug for VectorMap<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VectorMap({}, d={}, m={})", self.name, self.d, self.m)
    }
}

/// Named vector-map registry mirroring the scalar catalog.
pub fn vector_catalog_get<S: Scalar>(name: &str) -> Result<VectorMap<S>> {
    let unit = |d: usize| vec![(-S::one(), S::one()); d];
    match name {
        // componentwise difference on R^3: the model translation-invariant map
        "sub3" => VectorMap::new("sub3", 3, 3, unit(3), unit(3), |x, y| {
            x.iter().zip(y).map(|(&a, &b)| a - b).collect()
        }),
        // componentwise sum on R^3: fails translation invariance
        "add3" => VectorMap::new("add3", 3, 3, unit(3), unit(3), |x, y| {
            x.iter().zip(y).map(|(&a, &b)| a + b).collect()
        }),
        // phi(x - y) with phi(u) = (|u|^2, u_1) on R^2
        "wave2" => VectorMap::new("wave2", 2, 2, unit(2), unit(2), |x, y| {
            let u: Vec<S> = x.iter().zip(y).map(|(&a, &b)| a - b).collect();
            vec![u[0] * u[0] + u[1] * u[1], u[0]]
        }),
        _ => Err(Error::UnknownCatalog {
            name: name.into(),
            available: "sub3, add3, wave2".into(),
        }),
    }
}

/// A directional derivative value with its refinement error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionalDerivative<S> {
    pub value: S,
    pub error_estimate: S,
}

/// Central difference of `t -> G(x0 + t h)_l` at `t = 0` with one step
/// refinement: the refined pair is Richardson-extrapolated and their spread
/// reported as the error estimate. A magnitude jump of 10x between the two
/// step sizes is a non-differentiability verdict.
pub fn l_directional_derivative<S: Scalar>(
    g: impl Fn(&[S]) -> Vec<S>,
    x0: &[S],
    h_dir: &[S],
    l: usize,
    step: S,
) -> Result<DirectionalDerivative<S>> {
    if h_dir.iter().all(|&c| c == S::zero()) {
        return Err(Error::Validation("direction must be nonzero".into()));
    }
    if x0.len() != h_dir.len() {
        return Err(Error::Validation("direction and point dimensions differ".into()));
    }
    if step <= S::zero() || !step.is_finite() {
        return Err(Error::Validation(format!("step must be positive, got {step:?}")));
    }
    let probe = |t: S| -> Result<S> {
        let point: Vec<S> = x0.iter().zip(h_dir).map(|(&x, &h)| x + t * h).collect();
        let out = g(&point);
        let v = *out.get(l).ok_or_else(|| {
            Error::Validation(format!("coordinate index {l} out of range (m = {})", out.len()))
        })?;
        if !v.is_finite() {
            return Err(Error::NonFiniteSample { t: t.as_f64() });
        }
        Ok(v)
    };
    let central = |h: S| -> Result<S> { Ok((probe(h)? - probe(-h)?) / (S::lit(2.0) * h)) };
    let coarse = central(step)?;
    let fine = central(step * S::lit(0.5))?;
    let floor = S::epsilon().sqrt();
    if fine.abs() >= S::lit(crate::differencing::DIVERGENCE_GROWTH) * coarse.abs().max(floor) {
        return Err(Error::NonDifferentiable {
            coarse: coarse.as_f64(),
            fine: fine.as_f64(),
        });
    }
    let value = (S::lit(4.0) * fine - coarse) / S::lit(3.0);
    Ok(DirectionalDerivative {
        value,
        error_estimate: (fine - coarse).abs(),
    })
}

/// Worst two-section derivative residual over a basis and all coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionResidual<S> {
    pub max_residual: S,
    /// (basis index, coordinate index) where the worst residual occurred.
    pub worst: (usize, usize),
}

fn basis_spans<S: Scalar>(basis: &[Vec<S>], d: usize) -> bool {
    if basis.len() < d || basis.iter().any(|b| b.len() != d) {
        return false;
    }
    // Gaussian elimination rank on a copy
    let mut rows: Vec<Vec<S>> = basis.to_vec();
    let mut rank = 0;
    for col in 0..d {
        let Some(pivot) = (rank..rows.len())
            .max_by(|&a, &b| rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap())
        else {
            break;
        };
        if rows[pivot][col].abs() <= S::epsilon().sqrt() {
            continue;
        }
        rows.swap(rank, pivot);
        let lead = rows[rank][col];
        for r in rank + 1..rows.len() {
            let factor = rows[r][col] / lead;
            for c in col..d {
                let sub = rows[rank][c] * factor;
                rows[r][c] = rows[r][c] - sub;
            }
        }
        rank += 1;
    }
    rank == d
}

/// Max over basis directions and coordinate functionals of the sum of the
/// two section derivatives at `(x, y)`: both vanish together exactly when
/// the map solves the vector transport equation there.
pub fn gateaux_residual<S: Scalar>(
    f: &VectorMap<S>,
    x: &[S],
    y: &[S],
    basis: &[Vec<S>],
    step: S,
) -> Result<SectionResidual<S>> {
    if !basis_spans(basis, f.d) {
        return Err(Error::Validation(format!(
            "basis must span R^{} (got {} directions)",
            f.d,
            basis.len()
        )));
    }
    let mut max_residual = S::zero();
    let mut worst = (0, 0);
    for (bi, h) in basis.iter().enumerate() {
        for l in 0..f.m {
            // y-section: y -> f(x, y), derivative at y
            let d_section_y =
                l_directional_derivative(|p| f.eval(x, p), y, h, l, step)?.value;
            // x-section: x -> f(x, y), derivative at x
            let d_section_x =
                l_directional_derivative(|p| f.eval(p, y), x, h, l, step)?.value;
            let r = (d_section_y + d_section_x).abs();
            if r > max_residual {
                max_residual = r;
                worst = (bi, l);
            }
        }
    }
    Ok(SectionResidual { max_residual, worst })
}

/// Tabulated `phi: R^d -> R^m` on a uniform box grid.
#[derive(Debug, Clone, Serialize)]
pub struct PhiTable<S> {
    /// Per-axis sample coordinates.
    pub axes: Vec<Vec<S>>,
    /// Row-major (first axis slowest) list of output vectors.
    pub values: Vec<Vec<S>>,
}

/// Outcome of [`verify_translation`].
#[derive(Debug, Clone, Serialize)]
pub struct TranslationReport<S> {
    pub pass: bool,
    pub max_defect: S,
    pub tol: S,
    pub phi: PhiTable<S>,
}

fn axis_grid<S: Scalar>(lo: S, hi: S, n: usize) -> Vec<S> {
    if n == 1 {
        return vec![(lo + hi) * S::lit(0.5)];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * S::from_usize(i).unwrap() / S::from_usize(n - 1).unwrap())
        .collect()
}

fn cartesian<S: Scalar>(axes: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut points: Vec<Vec<S>> = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    points
}

/// Checks `F(x, y) = F(x - y, 0)` over a probe grid of pairs and tabulates
/// the translation profile `x -> F(x, 0)` over the difference box.
pub fn verify_translation<S: Scalar>(
    f: &VectorMap<S>,
    probes_per_axis: usize,
    phi_samples_per_axis: usize,
    tol: S,
) -> Result<TranslationReport<S>> {
    if f.d > MAX_DIMENSION {
        return Err(Error::UnsupportedDimension {
            d: f.d,
            cap: MAX_DIMENSION,
        });
    }
    if probes_per_axis < 2 || phi_samples_per_axis < 2 {
        return Err(Error::Validation(
            "need at least 2 probes and 2 samples per axis".into(),
        ));
    }
    let x_axes: Vec<Vec<S>> = f
        .domain_x
        .iter()
        .map(|&(lo, hi)| axis_grid(lo, hi, probes_per_axis))
        .collect();
    let y_axes: Vec<Vec<S>> = f
        .domain_y
        .iter()
        .map(|&(lo, hi)| axis_grid(lo, hi, probes_per_axis))
        .collect();
    let zero = vec![S::zero(); f.d];
    let mut max_defect = S::zero();
    for x in cartesian(&x_axes) {
        for y in cartesian(&y_axes) {
            let diff: Vec<S> = x.iter().zip(&y).map(|(&a, &b)| a - b).collect();
            let lhs = f.eval(&x, &y);
            let rhs = f.eval(&diff, &zero);
            for (a, b) in lhs.iter().zip(&rhs) {
                max_defect = max_defect.max((*a - *b).abs());
            }
        }
    }
    // phi sampled over the difference box
    let phi_axes: Vec<Vec<S>> = f
        .domain_x
        .iter()
        .zip(&f.domain_y)
        .map(|(&(xl, xh), &(yl, yh))| axis_grid(xl - yh, xh - yl, phi_samples_per_axis))
        .collect();
    let values: Vec<Vec<S>> = cartesian(&phi_axes)
        .into_iter()
        .map(|u| f.eval(&u, &zero))
        .collect();
    Ok(TranslationReport {
        pass: max_defect <= tol,
        max_defect,
        tol,
        phi: PhiTable {
            axes: phi_axes,
            values,
        },
    })
}

/// Standard basis of `R^d`.
pub fn standard_basis<S: Scalar>(d: usize) -> Vec<Vec<S>> {
    (0..d)
        .map(|i| {
            let mut e = vec![S::zero(); d];
            e[i] = S::one();
            e
        })
        .collect()
}
