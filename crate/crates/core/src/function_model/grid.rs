//! Uniform rectangular samples of a field: the ingestion/export unit.
//!
//! Wire formats:
//! - JSON: `{"x0":…,"x1":…,"y0":…,"y1":…,"nx":…,"ny":…,"values":[…]}` with
//!   values row-major, x as the slow index.
//! - CSV: header `x,y,value`, one row per node, same ordering on write;
//!   reads accept any row order and validate uniform spacing to a relative
//!   `1e-9`.

use std::io::{Read, Write};
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_model::Function2D;
use crate::geometry::{GridSpec, Rect};
use crate::scalar::Scalar;

/// Relative tolerance for the uniform-spacing check of ingested CSV grids.
pub const SPACING_REL_TOL: f64 = 1e-9;

/// A vertex-centred uniform sampling of a scalar field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSample<S> {
    pub x0: S,
    pub x1: S,
    pub y0: S,
    pub y1: S,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<S>,
}

impl<S: Scalar> GridSample<S> {
    pub fn spec(&self) -> Result<GridSpec<S>> {
        GridSpec::new(Rect::new(self.x0, self.x1, self.y0, self.y1)?, self.nx, self.ny)
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.spec()?;
        if self.values.len() != spec.len() {
            return Err(Error::Validation(format!(
                "value table has {} entries, expected {}x{} = {}",
                self.values.len(),
                self.nx,
                self.ny,
                spec.len()
            )));
        }
        for (idx, v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                let (i, j) = (idx / self.ny, idx % self.ny);
                return Err(Error::NonFinite {
                    x: spec.x(i).as_f64(),
                    y: spec.y(j).as_f64(),
                });
            }
        }
        Ok(())
    }

    pub fn value(&self, i: usize, j: usize) -> S {
        self.values[i * self.ny + j]
    }

    pub fn from_spec(spec: &GridSpec<S>, values: Vec<S>) -> Result<Self> {
        let sample = GridSample {
            x0: spec.rect.x0,
            x1: spec.rect.x1,
            y0: spec.rect.y0,
            y1: spec.rect.y1,
            nx: spec.nx,
            ny: spec.ny,
            values,
        };
        sample.validate()?;
        Ok(sample)
    }

    pub fn to_json_writer(&self, w: impl Write) -> Result<()>
    where
        S: Serialize,
    {
        serde_json::to_writer(w, self)?;
        Ok(())
    }

    pub fn from_json_reader(r: impl Read) -> Result<Self>
    where
        S: DeserializeOwned,
    {
        let sample: GridSample<S> = serde_json::from_reader(r)?;
        sample.validate()?;
        Ok(sample)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()>
    where
        S: Serialize,
    {
        self.to_json_writer(std::fs::File::create(path)?)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self>
    where
        S: DeserializeOwned,
    {
        Self::from_json_reader(std::fs::File::open(path)?)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let spec = self.spec()?;
        let mut w = csv::Writer::from_path(path.as_ref())?;
        w.write_record(["x", "y", "value"]).map_err(csv_io)?;
        for (i, j) in spec.indices() {
            w.write_record([
                format_scalar(spec.x(i)),
                format_scalar(spec.y(j)),
                format_scalar(self.value(i, j)),
            ])
            .map_err(csv_io)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Load a `x,y,value` CSV in any row order; the node set must form a
    /// complete uniform grid.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path_str = path.as_ref().display().to_string();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(path.as_ref())?;
        let mut rows: Vec<(f64, f64, f64)> = Vec::new();
        for (k, record) in reader.records().enumerate() {
            let record_no = k + 2; // header is line 1
            let malformed = |reason: String| Error::MalformedRecord {
                path: path_str.clone(),
                record: record_no,
                reason,
            };
            let record = record.map_err(|e| malformed(e.to_string()))?;
            if record.len() != 3 {
                return Err(malformed(format!("expected 3 fields, got {}", record.len())));
            }
            let mut parsed = [0.0f64; 3];
            for (slot, field) in parsed.iter_mut().zip(record.iter()) {
                *slot = field
                    .trim()
                    .parse()
                    .map_err(|_| malformed(format!("cannot parse number from `{field}`")))?;
            }
            if parsed.iter().any(|v| !v.is_finite()) {
                return Err(malformed("non-finite entry".into()));
            }
            rows.push((parsed[0], parsed[1], parsed[2]));
        }
        if rows.len() < 4 {
            return Err(Error::Validation(format!(
                "{path_str}: a grid needs at least 2x2 nodes, got {} rows",
                rows.len()
            )));
        }
        let xs = distinct_sorted(rows.iter().map(|r| r.0));
        let ys = distinct_sorted(rows.iter().map(|r| r.1));
        let (nx, ny) = (xs.len(), ys.len());
        if nx < 2 || ny < 2 || nx * ny != rows.len() {
            return Err(Error::Validation(format!(
                "{path_str}: rows do not form a complete grid ({nx} x-levels, {ny} y-levels, {} rows)",
                rows.len()
            )));
        }
        let dx = check_uniform(&xs, &path_str, "x")?;
        let dy = check_uniform(&ys, &path_str, "y")?;
        let mut values = vec![f64::NAN; nx * ny];
        for (x, y, v) in &rows {
            let i = ((x - xs[0]) / dx).round() as usize;
            let j = ((y - ys[0]) / dy).round() as usize;
            if !values[i * ny + j].is_nan() {
                return Err(Error::Validation(format!(
                    "{path_str}: duplicate node at ({x}, {y})"
                )));
            }
            values[i * ny + j] = *v;
        }
        let sample = GridSample {
            x0: S::lit(xs[0]),
            x1: S::lit(*xs.last().unwrap()),
            y0: S::lit(ys[0]),
            y1: S::lit(*ys.last().unwrap()),
            nx,
            ny,
            values: values.into_iter().map(S::lit).collect(),
        };
        sample.validate()?;
        Ok(sample)
    }
}

fn csv_io(e: csv::Error) -> Error {
    Error::Validation(format!("csv write failed: {e}"))
}

fn format_scalar<S: Scalar>(v: S) -> String {
    format!("{}", v.as_f64())
}

fn distinct_sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v
}

fn check_uniform(levels: &[f64], path: &str, axis: &str) -> Result<f64> {
    let span = levels.last().unwrap() - levels[0];
    let mean = span / (levels.len() - 1) as f64;
    for w in levels.windows(2) {
        let step = w[1] - w[0];
        if (step - mean).abs() > SPACING_REL_TOL * mean.abs() {
            return Err(Error::Validation(format!(
                "{path}: non-uniform {axis} spacing ({step} vs mean {mean})"
            )));
        }
    }
    Ok(mean)
}

/// Sample `f` on a grid. The grid rectangle must sit inside the domain.
pub fn sample_grid<S: Scalar>(f: &Function2D<S>, spec: &GridSpec<S>) -> Result<GridSample<S>> {
    if !f.domain().contains_rect(&spec.rect) {
        return Err(Error::Validation(format!(
            "grid rectangle [{:?}, {:?}]x[{:?}, {:?}] is not contained in the domain of `{}`",
            spec.rect.x0,
            spec.rect.x1,
            spec.rect.y0,
            spec.rect.y1,
            f.name()
        )));
    }
    let mut values = Vec::with_capacity(spec.len());
    for (i, j) in spec.indices() {
        let p = spec.node(i, j);
        let v = f.eval_unchecked(p.x, p.y);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                x: p.x.as_f64(),
                y: p.y.as_f64(),
            });
        }
        values.push(v);
    }
    GridSample::from_spec(spec, values)
}

/// Wrap a sample as an evaluatable field via bilinear interpolation. Outside
/// the sampled rectangle the edge cells extend linearly, so diagnostics that
/// probe slightly past the boundary stay defined.
pub fn from_grid<S: Scalar>(sample: GridSample<S>) -> Result<Function2D<S>> {
    sample.validate()?;
    let spec = sample.spec()?;
    let rect = spec.rect;
    let (nx, ny) = (spec.nx, spec.ny);
    let (dx, dy) = (spec.dx(), spec.dy());
    let values = sample.values;
    let evaluator = move |x: S, y: S| {
        let u = snap((x - rect.x0) / dx);
        let v = snap((y - rect.y0) / dy);
        let i = clamp_cell(u, nx);
        let j = clamp_cell(v, ny);
        let fu = u - S::from_usize(i).unwrap();
        let fv = v - S::from_usize(j).unwrap();
        let at = |i: usize, j: usize| values[i * ny + j];
        let one = S::one();
        at(i, j) * (one - fu) * (one - fv)
            + at(i + 1, j) * fu * (one - fv)
            + at(i, j + 1) * (one - fu) * fv
            + at(i + 1, j + 1) * fu * fv
    };
    Ok(Function2D::from_fn("grid", rect, evaluator))
}

/// Snaps a cell coordinate to the nearest integer when it is within rounding
/// distance, so evaluation at grid nodes returns the stored value exactly.
fn snap<S: Scalar>(u: S) -> S {
    let r = u.round();
    if (u - r).abs() <= S::lit(1e-12) * (S::one() + u.abs()) {
        r
    } else {
        u
    }
}

fn clamp_cell<S: Scalar>(u: S, n: usize) -> usize {
    let max_cell = n - 2;
    let floored = u.floor();
    if floored < S::zero() {
        0
    } else {
        (floored.to_usize().unwrap_or(max_cell)).min(max_cell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_model::catalog_get;
    use crate::geometry::Point2;
    use approx::assert_abs_diff_eq;

    fn spec(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> GridSpec<f64> {
        GridSpec::new(Rect::new(x0, x1, y0, y1).unwrap(), nx, ny).unwrap()
    }

    #[test]
    fn constant_field_samples_constant() {
        let f = catalog_get::<f64>("const:3").unwrap();
        let s = sample_grid(&f, &spec(-1.0, 1.0, -1.0, 1.0, 4, 3)).unwrap();
        assert!(s.values.iter().all(|&v| v == 3.0));
    }

    #[test]
    fn row_major_with_x_slow() {
        let f = Function2D::from_fn("x", Rect::centered(2.0).unwrap(), |x, _| x);
        let s = sample_grid(&f, &spec(0.0, 1.0, 0.0, 1.0, 2, 2)).unwrap();
        assert_eq!(s.values, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn schwartz_three_by_three() {
        let f = catalog_get::<f64>("schwartz").unwrap();
        let s = sample_grid(&f, &spec(-1.0, 1.0, -1.0, 1.0, 3, 3)).unwrap();
        assert_eq!(s.value(1, 1), 0.0); // declared value at the origin
        assert_eq!(s.value(2, 2), 1.0); // corner (1, 1)
    }

    #[test]
    fn sampling_outside_the_domain_fails() {
        let f = catalog_get::<f64>("schwartz").unwrap();
        assert!(sample_grid(&f, &spec(-3.0, 3.0, -1.0, 1.0, 5, 5)).is_err());
    }

    #[test]
    fn interpolant_reproduces_bilinear_fields() {
        let f = Function2D::from_fn("x+y", Rect::centered(2.0).unwrap(), |x, y| x + y);
        let s = sample_grid(&f, &spec(-1.0, 1.0, -1.0, 1.0, 5, 5)).unwrap();
        let g = from_grid(s).unwrap();
        for &(x, y) in &[(0.13, -0.7), (0.99, 0.99), (-1.0, 1.0)] {
            assert_abs_diff_eq!(g.eval(Point2::new(x, y)).unwrap(), x + y, epsilon = 1e-14);
        }
    }

    #[test]
    fn interpolant_is_exact_at_nodes_and_linear_between() {
        let f = Function2D::from_fn("x^2", Rect::centered(2.0).unwrap(), |x, _| x * x);
        let spec = spec(0.0, 1.0, 0.0, 1.0, 3, 2);
        let s = sample_grid(&f, &spec).unwrap();
        let g = from_grid(s.clone()).unwrap();
        for (i, j) in spec.indices() {
            let p = spec.node(i, j);
            assert_eq!(g.eval(p).unwrap(), s.value(i, j));
        }
        // midpoint of the [0, 0.5] cell: chord of x^2 through 0 and 0.25
        assert_abs_diff_eq!(
            g.eval(Point2::new(0.25, 0.3)).unwrap(),
            0.125,
            epsilon = 1e-15
        );
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let f = catalog_get::<f64>("plane_wave:sin").unwrap();
        let s = sample_grid(&f, &spec(-1.0, 1.0, -1.0, 1.0, 7, 5)).unwrap();
        let mut buf = Vec::new();
        s.to_json_writer(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        for key in ["\"x0\"", "\"nx\"", "\"values\""] {
            assert!(text.contains(key), "{text}");
        }
        let back = GridSample::<f64>::from_json_reader(buf.as_slice()).unwrap();
        assert_eq!(back, s);

        let bad = GridSample {
            values: vec![1.0; 3],
            ..s.clone()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let dir = std::env::temp_dir().join("pde_struct_grid_tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.csv");
        let f = catalog_get::<f64>("wave_pair:cube:cos").unwrap();
        let s = sample_grid(&f, &spec(-1.0, 1.0, 0.0, 0.5, 9, 4)).unwrap();
        s.write_csv(&path).unwrap();
        let back = GridSample::<f64>::read_csv(&path).unwrap();
        assert_eq!(back.nx, s.nx);
        assert_eq!(back.ny, s.ny);
        for (a, b) in back.values.iter().zip(&s.values) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn csv_loader_rejects_malformed_and_nonuniform() {
        let dir = std::env::temp_dir().join("pde_struct_grid_tests");
        std::fs::create_dir_all(&dir).unwrap();

        let bad = dir.join("bad_field.csv");
        std::fs::write(&bad, "x,y,value\n0,0,1\n0,1,oops\n1,0,1\n1,1,1\n").unwrap();
        let err = GridSample::<f64>::read_csv(&bad).unwrap_err();
        match err {
            Error::MalformedRecord { record, .. } => assert_eq!(record, 3),
            other => panic!("expected MalformedRecord, got {other}"),
        }

        let skew = dir.join("skew.csv");
        let mut text = String::from("x,y,value\n");
        for (i, x) in [0.0, 1.0, 2.5].iter().enumerate() {
            for y in [0.0, 1.0] {
                text.push_str(&format!("{x},{y},{}\n", i as f64 + y));
            }
        }
        std::fs::write(&skew, text).unwrap();
        let err = GridSample::<f64>::read_csv(&skew).unwrap_err();
        assert!(err.to_string().contains("non-uniform"), "{err}");
    }
}
