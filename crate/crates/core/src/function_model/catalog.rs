//! Built-in function catalog.
//!
//! Families:
//! - `schwartz` — `2xy/(x^2+y^2)`, value 0 at the origin. Separately smooth
//!   everywhere, yet the mixed second partials at the origin do not exist.
//! - `sextic` — `2x^3y^3/(x^6+y^6)`, value 0 at the origin. Has all second
//!   partials with symmetric mixed partials, but is jointly discontinuous at
//!   the origin.
//! - `plane_wave:<pf>[:k=<k>]` — `pf(kx - y)`.
//! - `poly_transport:<pf1>:...:<pfn>` — `sum_i (x+y)^(i-1) pf_i(x-y)`.
//! - `wave_pair:<pf>:<pg>` — `pf(x+y) + pg(x-y)`.
//! - `const:<c>` — the constant field.
//!
//! Every entry whose profile functions are smooth carries exact partial
//! derivatives for all ordered paths up to order 3, valid away from declared
//! singular points.

use std::collections::HashMap;
use std::sync::Arc;

use crate::differencing::DerivativePath;
use crate::error::{Error, Result};
use crate::function_model::{Eval2, Function2D};
use crate::geometry::{Point2, Rect};
use crate::scalar::{binomial, falling, Scalar};

/// Catalog entries clip the plane to this window; the formulas themselves
/// stay total, so diagnostics may probe past it.
pub const DEFAULT_HALF_WIDTH: f64 = 2.0;

const MAX_EXACT_ORDER: u32 = 3;

/// A named one-variable profile function carrying all its derivatives.
#[derive(Clone)]
pub struct ProfileFn<S: Scalar> {
    pub name: String,
    derivs: Arc<dyn Fn(u32, S) -> S + Send + Sync>,
    /// False for profiles with kinks (`abs`); such profiles yield catalog
    /// entries without exact partials.
    pub smooth: bool,
}

impl<S: Scalar> ProfileFn<S> {
    pub fn eval(&self, t: S) -> S {
        (self.derivs)(0, t)
    }

    /// k-th derivative at `t` (k = 0 is the function itself).
    pub fn deriv(&self, k: u32, t: S) -> S {
        (self.derivs)(k, t)
    }
}

impl<S: Scalar> std::fmt::Debug for ProfileFn<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ProfileFn({})", self.name)
    }
}

const PROFILE_NAMES: &[&str] = &[
    "sin", "cos", "exp", "id", "square", "cube", "zero", "one", "abs",
];

/// Look up a named 1D profile function.
pub fn profile_fn<S: Scalar>(name: &str) -> Result<ProfileFn<S>> {
    let derivs: Arc<dyn Fn(u32, S) -> S + Send + Sync> = match name {
        "sin" => Arc::new(|k, t: S| match k % 4 {
            0 => t.sin(),
            1 => t.cos(),
            2 => -t.sin(),
            _ => -t.cos(),
        }),
        "cos" => Arc::new(|k, t: S| match k % 4 {
            0 => t.cos(),
            1 => -t.sin(),
            2 => -t.cos(),
            _ => t.sin(),
        }),
        "exp" => Arc::new(|_, t: S| t.exp()),
        "id" => Arc::new(|k, t: S| match k {
            0 => t,
            1 => S::one(),
            _ => S::zero(),
        }),
        "square" => Arc::new(|k, t: S| match k {
            0 => t * t,
            1 => S::lit(2.0) * t,
            2 => S::lit(2.0),
            _ => S::zero(),
        }),
        "cube" => Arc::new(|k, t: S| match k {
            0 => t * t * t,
            1 => S::lit(3.0) * t * t,
            2 => S::lit(6.0) * t,
            3 => S::lit(6.0),
            _ => S::zero(),
        }),
        "zero" => Arc::new(|_, _| S::zero()),
        "one" => Arc::new(|k, _| if k == 0 { S::one() } else { S::zero() }),
        "abs" => {
            return Ok(ProfileFn {
                name: name.into(),
                derivs: Arc::new(|k, t: S| match k {
                    0 => t.abs(),
                    1 => t.signum(),
                    _ => S::zero(),
                }),
                smooth: false,
            })
        }
        _ => {
            return Err(Error::UnknownCatalog {
                name: format!("profile function `{name}`"),
                available: PROFILE_NAMES.join(", "),
            })
        }
    };
    Ok(ProfileFn {
        name: name.into(),
        derivs,
        smooth: true,
    })
}

/// Terms of fields expressed in the rotated coordinates `s = x + y`,
/// `t = x - y`: either `(x+y)^p * pf(x-y)` or `pf(x+y)`.
#[derive(Clone)]
enum StTerm<S: Scalar> {
    PolyT { pow: u32, pf: ProfileFn<S> },
    SWave { pf: ProfileFn<S> },
}

impl<S: Scalar> StTerm<S> {
    fn eval(&self, s: S, t: S) -> S {
        match self {
            StTerm::PolyT { pow, pf } => s.powi(*pow as i32) * pf.eval(t),
            StTerm::SWave { pf } => pf.eval(s),
        }
    }

    /// Partial derivative with `p` x-derivatives and `q` y-derivatives, using
    /// `d/dx = d/ds + d/dt` and `d/dy = d/ds - d/dt`.
    fn partial(&self, p: u32, q: u32, s: S, t: S) -> S {
        match self {
            StTerm::SWave { pf } => pf.deriv(p + q, s),
            StTerm::PolyT { pow, pf } => {
                let mut acc = S::zero();
                for i in 0..=p {
                    for k in 0..=q {
                        let s_order = p + q - i - k;
                        if s_order > *pow {
                            continue;
                        }
                        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                        let coef =
                            S::lit(binomial(p, i) * binomial(q, k) * sign * falling(*pow, s_order));
                        acc = acc
                            + coef * s.powi((*pow - s_order) as i32) * pf.deriv(i + k, t);
                    }
                }
                acc
            }
        }
    }
}

fn st_function<S: Scalar>(name: String, terms: Vec<StTerm<S>>, domain: Rect<S>) -> Function2D<S> {
    let eval_terms = terms.clone();
    let f = Function2D::from_fn(name, domain, move |x, y| {
        let (s, t) = (x + y, x - y);
        eval_terms
            .iter()
            .fold(S::zero(), |acc, term| acc + term.eval(s, t))
    });
    let smooth = terms.iter().all(|t| match t {
        StTerm::PolyT { pf, .. } | StTerm::SWave { pf } => pf.smooth,
    });
    if !smooth {
        return f;
    }
    let mut partials: HashMap<DerivativePath, Eval2<S>> = HashMap::new();
    for order in 1..=MAX_EXACT_ORDER {
        for path in DerivativePath::all_of_order(order) {
            let (p, q) = path.counts();
            let terms = terms.clone();
            partials.insert(
                path,
                Arc::new(move |x: S, y: S| {
                    let (s, t) = (x + y, x - y);
                    terms
                        .iter()
                        .fold(S::zero(), |acc, term| acc + term.partial(p, q, s, t))
                }),
            );
        }
    }
    f.with_exact_partials(partials)
}

fn plane_wave<S: Scalar>(pf: ProfileFn<S>, k: S, domain: Rect<S>) -> Function2D<S> {
    let name = format!("plane_wave:{}:k={:?}", pf.name, k.as_f64());
    let eval_pf = pf.clone();
    let f = Function2D::from_fn(name, domain, move |x, y| eval_pf.eval(k * x - y));
    if !pf.smooth {
        return f;
    }
    let mut partials: HashMap<DerivativePath, Eval2<S>> = HashMap::new();
    for order in 1..=MAX_EXACT_ORDER {
        for path in DerivativePath::all_of_order(order) {
            let (p, q) = path.counts();
            let sign = if q % 2 == 0 { S::one() } else { -S::one() };
            let coef = k.powi(p as i32) * sign;
            let pf = pf.clone();
            partials.insert(
                path,
                Arc::new(move |x: S, y: S| coef * pf.deriv(p + q, k * x - y)),
            );
        }
    }
    f.with_exact_partials(partials)
}

/// Exact partials of `2xy/(x^2+y^2)` away from the origin, keyed by
/// `(p, q)` = (x-order, y-order). Mixed partials commute there, so the
/// ordered path collapses to its counts.
fn schwartz_partial<S: Scalar>(p: u32, q: u32, x: S, y: S) -> S {
    let v = x * x + y * y;
    let (x2, y2) = (x * x, y * y);
    let c = |a: f64| S::lit(a);
    match (p, q) {
        (1, 0) => -c(2.0) * y * (x2 - y2) / v.powi(2),
        (0, 1) => c(2.0) * x * (x2 - y2) / v.powi(2),
        (2, 0) => c(4.0) * x * y * (x2 - c(3.0) * y2) / v.powi(3),
        (1, 1) => {
            -c(2.0) * (x2 * x2 - c(6.0) * x2 * y2 + y2 * y2) / v.powi(3)
        }
        (0, 2) => -c(4.0) * x * y * (c(3.0) * x2 - y2) / v.powi(3),
        (3, 0) => -c(12.0) * y * (x2 * x2 - c(6.0) * x2 * y2 + y2 * y2) / v.powi(4),
        (2, 1) => c(4.0) * x * (x2 * x2 - c(14.0) * x2 * y2 + c(9.0) * y2 * y2) / v.powi(4),
        (1, 2) => c(4.0) * y * (c(9.0) * x2 * x2 - c(14.0) * x2 * y2 + y2 * y2) / v.powi(4),
        (0, 3) => -c(12.0) * x * (x2 * x2 - c(6.0) * x2 * y2 + y2 * y2) / v.powi(4),
        _ => unreachable!("exact partials stop at order 3"),
    }
}

/// Exact partials of `2x^3y^3/(x^6+y^6)` away from the origin.
fn sextic_partial<S: Scalar>(p: u32, q: u32, x: S, y: S) -> S {
    let (x3, y3) = (x.powi(3), y.powi(3));
    let (x6, y6) = (x3 * x3, y3 * y3);
    let u = x6 + y6;
    let (x12, y12) = (x6 * x6, y6 * y6);
    let (x18, y18) = (x12 * x6, y12 * y6);
    let c = |a: f64| S::lit(a);
    match (p, q) {
        (1, 0) => -c(6.0) * x * x * y3 * (x6 - y6) / u.powi(2),
        (0, 1) => c(6.0) * x3 * y * y * (x6 - y6) / u.powi(2),
        (2, 0) => c(12.0) * x * y3 * (c(2.0) * x12 - c(9.0) * x6 * y6 + y12) / u.powi(3),
        (1, 1) => {
            let a = x6 - y6;
            -c(18.0) * x * x * y * y * (a * a - c(4.0) * x6 * y6) / u.powi(3)
        }
        (0, 2) => c(12.0) * x3 * y * (x12 - c(9.0) * x6 * y6 + c(2.0) * y12) / u.powi(3),
        (3, 0) => {
            -c(12.0) * y3 * (c(10.0) * x18 - c(125.0) * x12 * y6 + c(80.0) * x6 * y12 - y18)
                / u.powi(4)
        }
        (2, 1) => {
            c(36.0) * x * y * y
                * (c(2.0) * x18 - c(37.0) * x12 * y6 + c(32.0) * x6 * y12 - y18)
                / u.powi(4)
        }
        (1, 2) => {
            -c(36.0) * x * x * y
                * (x18 - c(32.0) * x12 * y6 + c(37.0) * x6 * y12 - c(2.0) * y18)
                / u.powi(4)
        }
        (0, 3) => {
            c(12.0) * x3 * (x18 - c(80.0) * x12 * y6 + c(125.0) * x6 * y12 - c(10.0) * y18)
                / u.powi(4)
        }
        _ => unreachable!("exact partials stop at order 3"),
    }
}

fn rational_counterexample<S: Scalar>(
    name: &str,
    domain: Rect<S>,
    eval: fn(S, S) -> S,
    partial: fn(u32, u32, S, S) -> S,
) -> Function2D<S> {
    let f = Function2D::from_fn(name, domain, move |x, y| eval(x, y))
        .with_singular_point(Point2::new(S::zero(), S::zero()), S::zero());
    let mut partials: HashMap<DerivativePath, Eval2<S>> = HashMap::new();
    for order in 1..=MAX_EXACT_ORDER {
        for path in DerivativePath::all_of_order(order) {
            let (p, q) = path.counts();
            partials.insert(path, Arc::new(move |x: S, y: S| partial(p, q, x, y)));
        }
    }
    f.with_exact_partials(partials)
}

const FAMILIES: &[&str] = &[
    "schwartz",
    "sextic",
    "plane_wave",
    "poly_transport",
    "wave_pair",
    "const",
];

/// Family names with usage strings for the CLI listing.
pub fn catalog_descriptions() -> Vec<(&'static str, &'static str)> {
    vec![
        ("schwartz", "2xy/(x^2+y^2), 0 at the origin"),
        ("sextic", "2x^3y^3/(x^6+y^6), 0 at the origin"),
        ("plane_wave", "plane_wave:<pf>[:k=<k>] = pf(kx - y)"),
        (
            "poly_transport",
            "poly_transport:<pf1>:...:<pfn> = sum (x+y)^(i-1) pf_i(x-y)",
        ),
        ("wave_pair", "wave_pair:<pf>:<pg> = pf(x+y) + pg(x-y)"),
        ("const", "const:<c>, the constant field"),
    ]
}

pub fn catalog_names() -> Vec<&'static str> {
    FAMILIES.to_vec()
}

fn default_domain<S: Scalar>() -> Rect<S> {
    Rect::centered(S::lit(DEFAULT_HALF_WIDTH)).expect("default window is valid")
}

fn unknown(name: &str) -> Error {
    Error::UnknownCatalog {
        name: name.into(),
        available: FAMILIES.join(", "),
    }
}

/// Resolve a catalog identifier (family plus `:`-separated parameters) into
/// an evaluatable field on the default window.
pub fn catalog_get<S: Scalar>(name: &str) -> Result<Function2D<S>> {
    catalog_get_on(name, default_domain())
}

/// [`catalog_get`] with an explicit domain rectangle.
pub fn catalog_get_on<S: Scalar>(name: &str, domain: Rect<S>) -> Result<Function2D<S>> {
    let mut parts = name.split(':');
    let family = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    match family {
        "schwartz" => {
            if !args.is_empty() {
                return Err(Error::Validation("schwartz takes no parameters".into()));
            }
            Ok(rational_counterexample(
                "schwartz",
                domain,
                |x, y| S::lit(2.0) * x * y / (x * x + y * y),
                schwartz_partial,
            ))
        }
        "sextic" => {
            if !args.is_empty() {
                return Err(Error::Validation("sextic takes no parameters".into()));
            }
            Ok(rational_counterexample(
                "sextic",
                domain,
                |x, y| {
                    let (x3, y3) = (x.powi(3), y.powi(3));
                    S::lit(2.0) * x3 * y3 / (x3 * x3 + y3 * y3)
                },
                sextic_partial,
            ))
        }
        "plane_wave" => {
            let (pf_name, rest) = args.split_first().ok_or_else(|| {
                Error::Validation("plane_wave needs a profile, e.g. plane_wave:sin".into())
            })?;
            let mut k = S::one();
            for arg in rest {
                let Some(v) = arg.strip_prefix("k=") else {
                    return Err(Error::Validation(format!(
                        "unknown plane_wave parameter `{arg}` (expected k=<value>)"
                    )));
                };
                let parsed: f64 = v
                    .parse()
                    .map_err(|_| Error::Validation(format!("cannot parse k from `{arg}`")))?;
                if parsed == 0.0 || !parsed.is_finite() {
                    return Err(Error::Validation("plane_wave needs k != 0".into()));
                }
                k = S::lit(parsed);
            }
            Ok(plane_wave(profile_fn(pf_name)?, k, domain))
        }
        "poly_transport" => {
            if args.is_empty() {
                return Err(Error::Validation(
                    "poly_transport needs at least one profile, e.g. poly_transport:square:cube"
                        .into(),
                ));
            }
            let mut terms = Vec::with_capacity(args.len());
            for (i, pf_name) in args.iter().enumerate() {
                terms.push(StTerm::PolyT {
                    pow: i as u32,
                    pf: profile_fn(pf_name)?,
                });
            }
            Ok(st_function(format!("poly_transport:{}", args.join(":")), terms, domain))
        }
        "wave_pair" => {
            if args.len() != 2 {
                return Err(Error::Validation(
                    "wave_pair needs exactly two profiles, e.g. wave_pair:cube:cos".into(),
                ));
            }
            let terms = vec![
                StTerm::SWave {
                    pf: profile_fn(args[0])?,
                },
                StTerm::PolyT {
                    pow: 0,
                    pf: profile_fn(args[1])?,
                },
            ];
            Ok(st_function(format!("wave_pair:{}:{}", args[0], args[1]), terms, domain))
        }
        "const" => {
            let raw = args.first().copied().unwrap_or("0");
            let c: f64 = raw
                .parse()
                .map_err(|_| Error::Validation(format!("cannot parse constant from `{raw}`")))?;
            let value = S::lit(c);
            let pf = ProfileFn {
                name: format!("const({c})"),
                derivs: Arc::new(move |k, _| if k == 0 { value } else { S::zero() }),
                smooth: true,
            };
            Ok(st_function(
                format!("const:{c}"),
                vec![StTerm::SWave { pf }],
                domain,
            ))
        }
        _ => Err(unknown(name)),
    }
}
