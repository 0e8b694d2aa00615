//! Command-line front end: catalog listing, grid ingestion, and JSON reports
//! for every analysis.
//!
//! Exit codes: 0 on pass, 1 on a hypothesis violation or failed verdict,
//! 2 on usage, validation, or input errors. Reports are built fully in
//! memory and written in one step, so failures never leave partial output.

pub mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pde_struct_core::baire_lambda::{lambda_field, usc_violations, SectionAxis};
use pde_struct_core::decomposition::{
    decompose_dn, decompose_wave, extract_profile, residual_first_order, DecompositionConfig,
};
use pde_struct_core::differencing::decade_ladder;
use pde_struct_core::error::Error;
use pde_struct_core::function_model::{
    catalog_descriptions, catalog_get_on, from_grid, GridSample, Profile1D,
};
use pde_struct_core::geometry::{GridSpec, Point2, Rect};
use pde_struct_core::regularity::{
    constancy_along_characteristics, discontinuity_field, oscillation, LipschitzEstimate,
};
use pde_struct_core::vector_transport::{
    gateaux_residual, standard_basis, vector_catalog_get, verify_translation,
};
use pde_struct_core::{Real, RealFunction2D, Result};
use report::Report;

/// Environment variable consulted for the default worker-thread count.
pub const THREADS_ENV: &str = "PDE_STRUCT_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "pde-struct",
    version,
    about = "Numerical verification and construction of transport-equation solution structure"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (default: PDE_STRUCT_THREADS, else all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory receiving report.json plus plot-ready CSV artifacts
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Catalog identifier, e.g. schwartz or plane_wave:sin:k=1
    #[arg(long = "fn", value_name = "NAME")]
    pub function: Option<String>,

    /// Grid file (.json or .csv) ingested as a bilinear field
    #[arg(long, value_name = "PATH")]
    pub grid: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct GeometryArgs {
    /// Analysis rectangle as x0,x1,y0,y1 (default: the source's own window)
    #[arg(long, value_name = "X0,X1,Y0,Y1")]
    pub rect: Option<String>,

    /// Grid columns (default: 101, or the ingested grid's own count)
    #[arg(long)]
    pub nx: Option<usize>,

    /// Grid rows (default: 101, or the ingested grid's own count)
    #[arg(long)]
    pub ny: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the catalog families, profile functions and vector maps
    Catalog,

    /// First-order transport verification: residual of f'_x + k f'_y,
    /// profile extraction, and constancy along characteristics
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Characteristic slope in f'_x + k f'_y = 0
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        /// Finite-difference step
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        /// Pass tolerance for all three metrics
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 801)]
        profile_samples: usize,
        /// Baseline ordinate for profile extraction
        #[arg(long, default_value_t = 0.0)]
        baseline: f64,
        /// Force difference quotients even when exact derivatives exist
        #[arg(long)]
        fd_only: bool,
    },

    /// Order-n decomposition into (x+y)-polynomial profiles
    Decompose {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Decomposition order
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Residual gate the order-n derivative sum must satisfy
        #[arg(long, default_value_t = 1e-3)]
        gate: f64,
        #[arg(long, default_value_t = 801)]
        profile_samples: usize,
        #[arg(long, default_value_t = 0.0)]
        baseline: f64,
        #[arg(long, default_value_t = 4)]
        order_cap: u32,
    },

    /// Traveling-wave split f = phi(x+y) + psi(x-y)
    Wave {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long, default_value_t = 1e-3)]
        gate: f64,
        #[arg(long, default_value_t = 801)]
        profile_samples: usize,
        #[arg(long, default_value_t = 0.0)]
        baseline: f64,
        /// Trapezoid substeps per profile interval
        #[arg(long, default_value_t = 4)]
        quad_substeps: usize,
    },

    /// Oscillation field, discontinuity flags, and the nowhere-dense verdict
    Regularity {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Decreasing ball radii, comma separated
        #[arg(long, default_value = "1e-1,1e-2,1e-3")]
        radii: String,
        /// Angular samples per ring
        #[arg(long, default_value_t = 360)]
        samples: usize,
        /// Oscillation threshold (default: 10x a smooth reference field)
        #[arg(long)]
        threshold: Option<f64>,
        /// Tile size of the nowhere-dense box rule
        #[arg(long, default_value_t = 5)]
        box_size: usize,
    },

    /// Per-node delta-window field of difference quotients and its
    /// upper-semicontinuity check
    LambdaMap {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Differentiation variable of the sections
        #[arg(long, value_enum, default_value_t = AxisArg::X)]
        axis: AxisArg,
        /// Half-width of the quotient tolerance window
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        /// Dyadic ladder depth and per-side sample count
        #[arg(long, default_value_t = 32)]
        resolution: u32,
        /// Neighbor tolerance of the upper-semicontinuity check
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },

    /// Vector-valued transport checks on a registered map
    Vector {
        /// Map name: sub3, add3 or wave2
        #[arg(long)]
        map: String,
        /// Directional-derivative step
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        /// Probe nodes per axis (for pairs and section derivatives)
        #[arg(long, default_value_t = 5)]
        probes: usize,
        /// Translation-profile samples per axis
        #[arg(long, default_value_t = 5)]
        phi_samples: usize,
        /// Translation defect tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Section-derivative residual tolerance
        #[arg(long, default_value_t = 1e-8)]
        gateaux_tol: f64,
    },
}

/// A finished run: the report plus plot-ready CSV artifacts to write when an
/// output directory was requested.
pub struct Outcome {
    pub report: Report,
    pub csv: Vec<(String, String)>,
}

/// Entry point used by `main`: resolves the thread pool, runs the command,
/// emits the report, and maps the outcome to the exit-code contract.
pub fn execute(cli: Cli) -> i32 {
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var(THREADS_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("pde-struct: cannot build thread pool: {e}");
            return 2;
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(outcome) => {
            let code = if outcome.report.pass() { 0 } else { 1 };
            if let Err(e) = emit(&cli, &outcome) {
                eprintln!("pde-struct: cannot write output: {e}");
                return 2;
            }
            code
        }
        Err(e) => {
            eprintln!("pde-struct: error: {e}");
            2
        }
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let text = outcome.report.to_pretty_json();
    match &cli.output {
        None => println!("{text}"),
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("report.json"), &text)?;
            for (name, body) in &outcome.csv {
                std::fs::write(dir.join(name), body)?;
            }
            println!("{}", dir.join("report.json").display());
        }
    }
    Ok(())
}

/// Runs a command to a report. Hypothesis violations and non-convergence
/// verdicts become failing reports; anything else is a hard error (exit 2).
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Catalog => run_catalog(),
        Command::Verify {
            source,
            geometry,
            k,
            h,
            tol,
            profile_samples,
            baseline,
            fd_only,
        } => run_verify(source, geometry, *k, *h, *tol, *profile_samples, *baseline, *fd_only),
        Command::Decompose {
            source,
            geometry,
            n,
            h,
            gate,
            profile_samples,
            baseline,
            order_cap,
        } => run_decompose(
            source,
            geometry,
            *n,
            *h,
            *gate,
            *profile_samples,
            *baseline,
            *order_cap,
        ),
        Command::Wave {
            source,
            geometry,
            h,
            gate,
            profile_samples,
            baseline,
            quad_substeps,
        } => run_wave(source, geometry, *h, *gate, *profile_samples, *baseline, *quad_substeps),
        Command::Regularity {
            source,
            geometry,
            radii,
            samples,
            threshold,
            box_size,
        } => run_regularity(source, geometry, radii, *samples, *threshold, *box_size),
        Command::LambdaMap {
            source,
            geometry,
            axis,
            epsilon,
            resolution,
            tol,
        } => run_lambda(source, geometry, *axis, *epsilon, *resolution, *tol),
        Command::Vector {
            map,
            step,
            probes,
            phi_samples,
            tol,
            gateaux_tol,
        } => run_vector(map, *step, *probes, *phi_samples, *tol, *gateaux_tol),
    }
}

fn parse_rect(text: &str) -> Result<Rect<Real>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Validation(format!(
            "rectangle needs 4 comma-separated numbers, got `{text}`"
        )));
    }
    let mut vals = [0.0; 4];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("cannot parse `{part}` in rectangle")))?;
    }
    Rect::new(vals[0], vals[1], vals[2], vals[3])
}

fn parse_radii(text: &str) -> Result<Vec<Real>> {
    let radii: Result<Vec<Real>> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<Real>()
                .map_err(|_| Error::Validation(format!("cannot parse radius `{part}`")))
        })
        .collect();
    radii
}

/// Resolves the function source plus the analysis grid.
fn resolve(source: &SourceArgs, geometry: &GeometryArgs) -> Result<(RealFunction2D, GridSpec<Real>, Value)> {
    let rect = geometry.rect.as_deref().map(parse_rect).transpose()?;
    match (&source.function, &source.grid) {
        (Some(name), None) => {
            let domain = rect.unwrap_or(Rect::centered(2.0).expect("valid"));
            let f = catalog_get_on(name, domain)?;
            let spec = GridSpec::new(domain, geometry.nx.unwrap_or(101), geometry.ny.unwrap_or(101))?;
            let echo = json!({ "function": name, "rect": rect_echo(&spec.rect), "nx": spec.nx, "ny": spec.ny });
            Ok((f, spec, echo))
        }
        (None, Some(path)) => {
            let sample = load_grid(path)?;
            let own_spec = sample.spec()?;
            let f = from_grid(sample)?;
            let spec = GridSpec::new(
                rect.unwrap_or(own_spec.rect),
                geometry.nx.unwrap_or(own_spec.nx),
                geometry.ny.unwrap_or(own_spec.ny),
            )?;
            if !f.domain().contains_rect(&spec.rect) {
                return Err(Error::Validation(
                    "analysis rectangle exceeds the ingested grid".into(),
                ));
            }
            let echo = json!({ "grid": path.display().to_string(), "rect": rect_echo(&spec.rect), "nx": spec.nx, "ny": spec.ny });
            Ok((f, spec, echo))
        }
        _ => Err(Error::Validation(
            "exactly one of --fn and --grid is required".into(),
        )),
    }
}

fn load_grid(path: &Path) -> Result<GridSample<Real>> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => GridSample::read_json(path),
        Some("csv") => GridSample::read_csv(path),
        _ => Err(Error::Validation(format!(
            "unsupported grid format `{}` (expected .json or .csv)",
            path.display()
        ))),
    }
}

fn rect_echo(rect: &Rect<Real>) -> Value {
    json!([rect.x0, rect.x1, rect.y0, rect.y1])
}

fn profile_artifact(profile: &Profile1D<Real>) -> Value {
    json!({ "t_values": profile.t_values(), "values": profile.values() })
}

fn profile_csv(profile: &Profile1D<Real>) -> String {
    let mut out = String::from("t,value\n");
    for (t, v) in profile.t_values().iter().zip(profile.values()) {
        out.push_str(&format!("{t},{v}\n"));
    }
    out
}

fn field_csv(spec: &GridSpec<Real>, values: &[Real]) -> String {
    let mut out = String::from("x,y,value\n");
    for (i, j) in spec.indices() {
        let p = spec.node(i, j);
        out.push_str(&format!("{},{},{}\n", p.x, p.y, values[spec.index(i, j)]));
    }
    out
}

fn is_verdict_error(e: &Error) -> bool {
    matches!(
        e,
        Error::HypothesisViolation { .. } | Error::NonDifferentiable { .. }
    )
}

fn run_catalog() -> Result<Outcome> {
    let mut report = Report::new("catalog", json!({}));
    let entries: Vec<Value> = catalog_descriptions()
        .into_iter()
        .map(|(name, usage)| json!({ "name": name, "usage": usage }))
        .collect();
    report.artifact("families", entries);
    report.artifact(
        "profiles",
        json!(["sin", "cos", "exp", "id", "square", "cube", "zero", "one", "abs"]),
    );
    report.artifact("vector_maps", json!(["sub3", "add3", "wave2"]));
    report.verdict("pass", true);
    Ok(Outcome {
        report,
        csv: Vec::new(),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    source: &SourceArgs,
    geometry: &GeometryArgs,
    k: f64,
    h: f64,
    tol: f64,
    profile_samples: usize,
    baseline: f64,
    fd_only: bool,
) -> Result<Outcome> {
    let (f, spec, source_echo) = resolve(source, geometry)?;
    let config = json!({
        "source": source_echo,
        "k": k,
        "h": h,
        "tol": tol,
        "profile_samples": profile_samples,
        "baseline": baseline,
        "fd_only": fd_only,
    });
    let mut report = Report::new("verify", config);
    let residual = residual_first_order(&f, k, &spec, h, !fd_only)?;
    let extracted = extract_profile(&f, k, &spec, profile_samples, baseline)?;
    let constancy = constancy_along_characteristics(&f, k, &spec, 65, 129, tol)?;
    report.metric("residual_max", residual.max_residual);
    report.metric("residual_worst_node", [residual.worst.x, residual.worst.y]);
    report.metric("reconstruction_error", extracted.reconstruction_error);
    report.metric("constancy_max_deviation", constancy.max_deviation);
    let pass = residual.max_residual <= tol
        && extracted.reconstruction_error <= tol
        && constancy.max_deviation <= tol;
    report.verdict("pass", pass);
    report.verdict("residual_pass", residual.max_residual <= tol);
    report.verdict("reconstruction_pass", extracted.reconstruction_error <= tol);
    report.verdict("constancy_pass", constancy.max_deviation <= tol);
    report.artifact("profile", profile_artifact(&extracted.profile));
    let csv = vec![("profile.csv".into(), profile_csv(&extracted.profile))];
    Ok(Outcome { report, csv })
}

#[allow(clippy::too_many_arguments)]
fn run_decompose(
    source: &SourceArgs,
    geometry: &GeometryArgs,
    n: u32,
    h: f64,
    gate: f64,
    profile_samples: usize,
    baseline: f64,
    order_cap: u32,
) -> Result<Outcome> {
    let (f, spec, source_echo) = resolve(source, geometry)?;
    let config = json!({
        "source": source_echo,
        "n": n,
        "h": h,
        "gate": gate,
        "profile_samples": profile_samples,
        "baseline": baseline,
        "order_cap": order_cap,
    });
    let mut report = Report::new("decompose", config);
    let cfg = DecompositionConfig {
        h,
        profile_samples,
        residual_gate: gate,
        order_cap,
        baseline,
        ..DecompositionConfig::default()
    };
    let mut csv = Vec::new();
    match decompose_dn(&f, n, &spec, &cfg) {
        Ok(result) => {
            report.metric("residual", result.residual);
            report.metric("reconstruction_error", result.reconstruction_error);
            report.metric("error_budget", result.metadata.error_budget);
            report.metric("fd_levels", result.metadata.fd_levels);
            report.verdict("pass", true);
            report.verdict("used_exact_partials", result.metadata.used_exact_partials);
            let profiles: Vec<Value> = result.profiles.iter().map(profile_artifact).collect();
            report.artifact("profiles", profiles);
            for (i, p) in result.profiles.iter().enumerate() {
                csv.push((format!("profile_{}.csv", i + 1), profile_csv(p)));
            }
        }
        Err(e) if is_verdict_error(&e) => {
            report.verdict("pass", false);
            report.verdict("hypothesis_violation", e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(Outcome { report, csv })
}

#[allow(clippy::too_many_arguments)]
fn run_wave(
    source: &SourceArgs,
    geometry: &GeometryArgs,
    h: f64,
    gate: f64,
    profile_samples: usize,
    baseline: f64,
    quad_substeps: usize,
) -> Result<Outcome> {
    let (f, spec, source_echo) = resolve(source, geometry)?;
    let config = json!({
        "source": source_echo,
        "h": h,
        "gate": gate,
        "profile_samples": profile_samples,
        "baseline": baseline,
        "quad_substeps": quad_substeps,
    });
    let mut report = Report::new("wave", config);
    let cfg = DecompositionConfig {
        h,
        profile_samples,
        residual_gate: gate,
        baseline,
        quad_substeps,
        divergence_ladder: decade_ladder(1e-1, 3),
        ..DecompositionConfig::default()
    };
    let mut csv = Vec::new();
    match decompose_wave(&f, &spec, &cfg) {
        Ok(split) => {
            report.metric("reconstruction_error", split.reconstruction_error);
            report.metric("mixed_symmetry_defect", split.residuals.mixed_symmetry);
            report.metric("trace_mismatch", split.residuals.trace_mismatch);
            report.metric(
                "characteristic_deviation",
                split.residuals.characteristic_deviation,
            );
            report.verdict("pass", true);
            report.artifact("phi", profile_artifact(&split.phi));
            report.artifact("psi", profile_artifact(&split.psi));
            report.artifact("psi_tilde", profile_artifact(&split.psi_tilde));
            csv.push(("phi.csv".into(), profile_csv(&split.phi)));
            csv.push(("psi.csv".into(), profile_csv(&split.psi)));
            csv.push(("psi_tilde.csv".into(), profile_csv(&split.psi_tilde)));
        }
        Err(e) if is_verdict_error(&e) => {
            report.verdict("pass", false);
            report.verdict("hypothesis_violation", e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(Outcome { report, csv })
}

fn run_regularity(
    source: &SourceArgs,
    geometry: &GeometryArgs,
    radii_text: &str,
    samples: usize,
    threshold: Option<f64>,
    box_size: usize,
) -> Result<Outcome> {
    let (f, spec, source_echo) = resolve(source, geometry)?;
    let radii = parse_radii(radii_text)?;
    // default threshold: 10x the oscillation of a smooth reference at the
    // same radii, separating quadrature noise from genuine jumps
    let threshold = match threshold {
        Some(t) => t,
        None => {
            let reference = catalog_get_on("plane_wave:sin", Rect::centered(2.0)?)?;
            10.0 * oscillation(&reference, Point2::new(0.0, 0.0), &radii, samples)?
        }
    };
    let config = json!({
        "source": source_echo,
        "radii": radii,
        "samples": samples,
        "threshold": threshold,
        "box_size": box_size,
    });
    let mut report = Report::new("regularity", config);
    let out = discontinuity_field(&f, &spec, &radii, samples, threshold, box_size)?;
    let divergent: Vec<(usize, usize)> = spec
        .indices()
        .filter(|&(i, j)| {
            matches!(
                out.lipschitz_constants[spec.index(i, j)],
                LipschitzEstimate::Divergent
            )
        })
        .collect();
    let max_osc = out
        .oscillation_field
        .values
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    report.metric("max_oscillation", max_osc);
    report.metric("flagged_count", out.flagged_points.len());
    report.metric("lipschitz_divergent_count", divergent.len());
    report.verdict("pass", out.nowhere_dense_verdict);
    report.verdict("nowhere_dense", out.nowhere_dense_verdict);
    report.artifact("oscillation_field", serde_json::to_value(&out.oscillation_field)?);
    report.artifact("flagged_points", serde_json::to_value(&out.flagged_points)?);
    report.artifact("box_witnesses", serde_json::to_value(&out.box_witnesses)?);
    report.artifact("lipschitz_divergent_points", serde_json::to_value(&divergent)?);
    let csv = vec![(
        "oscillation.csv".into(),
        field_csv(&spec, &out.oscillation_field.values),
    )];
    Ok(Outcome { report, csv })
}

fn run_lambda(
    source: &SourceArgs,
    geometry: &GeometryArgs,
    axis: AxisArg,
    epsilon: f64,
    resolution: u32,
    tol: f64,
) -> Result<Outcome> {
    let (f, spec, source_echo) = resolve(source, geometry)?;
    let axis = match axis {
        AxisArg::X => SectionAxis::X,
        AxisArg::Y => SectionAxis::Y,
    };
    let config = json!({
        "source": source_echo,
        "axis": axis,
        "epsilon": epsilon,
        "resolution": resolution,
        "tol": tol,
    });
    let mut report = Report::new("lambda-map", config);
    let field = lambda_field(&f, axis, epsilon, &spec, resolution)?;
    let violations = usc_violations(&field, tol);
    let min = field.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = field.values.iter().cloned().fold(0.0, f64::max);
    report.metric("lambda_min", min);
    report.metric("lambda_max", max);
    report.metric("usc_violation_count", violations.len());
    report.verdict("pass", violations.is_empty());
    report.verdict("upper_semicontinuous", violations.is_empty());
    report.artifact("lambda_field", serde_json::to_value(&field)?);
    report.artifact("usc_violations", serde_json::to_value(&violations)?);
    let csv = vec![("lambda.csv".into(), field_csv(&spec, &field.values))];
    Ok(Outcome { report, csv })
}

fn run_vector(
    map: &str,
    step: f64,
    probes: usize,
    phi_samples: usize,
    tol: f64,
    gateaux_tol: f64,
) -> Result<Outcome> {
    let f = vector_catalog_get::<Real>(map)?;
    let config = json!({
        "map": map,
        "d": f.d,
        "m": f.m,
        "step": step,
        "probes": probes,
        "phi_samples": phi_samples,
        "tol": tol,
        "gateaux_tol": gateaux_tol,
    });
    let mut report = Report::new("vector", config);
    let basis = standard_basis::<Real>(f.d);
    // section-derivative residual over a probe grid of pairs
    let axis_points = |bounds: &[(Real, Real)]| -> Vec<Vec<Real>> {
        let per_axis: Vec<Vec<Real>> = bounds
            .iter()
            .map(|&(lo, hi)| {
                (0..probes)
                    .map(|i| lo + (hi - lo) * i as Real / (probes.max(2) - 1) as Real)
                    .collect()
            })
            .collect();
        let mut points: Vec<Vec<Real>> = vec![Vec::new()];
        for axis in &per_axis {
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
    };
    let mut gateaux_max: Real = 0.0;
    let mut verdict_failure: Option<String> = None;
    'outer: for x in axis_points(&f.domain_x) {
        for y in axis_points(&f.domain_y) {
            match gateaux_residual(&f, &x, &y, &basis, step) {
                Ok(r) => gateaux_max = gateaux_max.max(r.max_residual),
                Err(e) if is_verdict_error(&e) => {
                    verdict_failure = Some(e.to_string());
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
        }
    }
    if let Some(message) = verdict_failure {
        report.verdict("pass", false);
        report.verdict("hypothesis_violation", message);
        return Ok(Outcome {
            report,
            csv: Vec::new(),
        });
    }
    let translation = verify_translation(&f, probes, phi_samples, tol)?;
    report.metric("gateaux_residual_max", gateaux_max);
    report.metric("translation_defect", translation.max_defect);
    let pass = translation.pass && gateaux_max <= gateaux_tol;
    report.verdict("pass", pass);
    report.verdict("translation_pass", translation.pass);
    report.verdict("gateaux_pass", gateaux_max <= gateaux_tol);
    report.artifact("phi", serde_json::to_value(&translation.phi)?);
    // phi table as CSV: one coordinate column per axis, one per output
    let mut body = String::new();
    for i in 0..f.d {
        body.push_str(&format!("x{},", i + 1));
    }
    for l in 0..f.m {
        body.push_str(&format!("v{}", l + 1));
        body.push(if l + 1 == f.m { '\n' } else { ',' });
    }
    let mut grid_points: Vec<Vec<Real>> = vec![Vec::new()];
    for axis in &translation.phi.axes {
        grid_points = grid_points
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
    for (point, value) in grid_points.iter().zip(&translation.phi.values) {
        let row: Vec<String> = point.iter().chain(value).map(|v| v.to_string()).collect();
        body.push_str(&row.join(","));
        body.push('\n');
    }
    let csv = vec![("phi.csv".into(), body)];
    Ok(Outcome { report, csv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn rect_parsing() {
        assert!(parse_rect("-2,2,-2,2").is_ok());
        assert!(parse_rect("1,2,3").is_err());
        assert!(parse_rect("a,b,c,d").is_err());
        assert!(parse_rect("2,1,0,1").is_err());
    }

    #[test]
    fn radii_parsing() {
        assert_eq!(parse_radii("1e-1,1e-2").unwrap(), vec![0.1, 0.01]);
        assert!(parse_radii("1e-1,x").is_err());
    }
}
