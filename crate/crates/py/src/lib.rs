//! Python bindings: a `Workspace` class over a registered surface + frame,
//! plus module-level helpers for expression evaluation and batch runs.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use surflap::catalog::{self, CatalogEntry};
use surflap::config::RunConfig;
use surflap::decomposition::{decompose_at, DecompositionOptions, MutationHook};
use surflap::expr::SmoothMap;
use surflap::extension::{ExtendedField, ExtensionKind, FieldSource, TangentialRule};
use surflap::fields::{AmbientField, SurfaceField};
use surflap::geometry::Geometry;
use surflap::runner;

fn err(e: surflap::Error) -> PyErr {
    use surflap::Error::*;
    match e {
        Config(_)
        | Parse { .. }
        | UnknownIdent { .. }
        | Arity { .. }
        | UnknownCatalog(_)
        | InvalidParam(_)
        | UnavailableQuantity(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn params_vec(params: &Option<Vec<(String, f64)>>) -> Vec<(&str, f64)> {
    params
        .as_deref()
        .unwrap_or(&[])
        .iter()
        .map(|(k, v)| (k.as_str(), *v))
        .collect()
}

/// A registered surface + adapted frame, ready for point queries.
#[pyclass]
struct Workspace {
    entry: CatalogEntry,
    geo: Arc<Geometry>,
}

#[pymethods]
impl Workspace {
    #[new]
    #[pyo3(signature = (name, frame, params = None))]
    fn new(name: &str, frame: &str, params: Option<Vec<(String, f64)>>) -> PyResult<Self> {
        let entry = catalog::get(name, &params_vec(&params)).map_err(err)?;
        let geo = Arc::new(entry.geometry(frame).map_err(err)?);
        Ok(Workspace { entry, geo })
    }

    fn frame_names(&self) -> Vec<String> {
        self.entry
            .frame_names()
            .into_iter()
            .map(|s| s.to_string())
            .collect()
    }

    /// Curvatures and second-fundamental-form entries at a surface point.
    fn curvature<'py>(&self, py: Python<'py>, z1: f64, z2: f64) -> PyResult<Bound<'py, PyDict>> {
        let sf = surflap::geometry::second_fundamental_at(&self.geo, [z1, z2]).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("kappa", sf.kappa)?;
        d.set_item("mean2h", sf.mean2h)?;
        d.set_item("t11", sf.t[0][0])?;
        d.set_item("t12", sf.t[0][1])?;
        d.set_item("t22", sf.t[1][1])?;
        d.set_item("p", sf.p.to_vec())?;
        Ok(d)
    }

    /// Connection-form scalars and the frame-dependent quantities at a point.
    fn frame_scalars<'py>(
        &self,
        py: Python<'py>,
        z1: f64,
        z2: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let fs = surflap::geometry::frame_scalars_at(&self.geo, [z1, z2]).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("alpha", fs.alpha.to_vec())?;
        d.set_item("gamma", fs.gamma.to_vec())?;
        d.set_item("x3", fs.x3.to_vec())?;
        d.set_item("w", fs.w.to_vec())?;
        d.set_item("ell", fs.ell.to_vec())?;
        d.set_item("gx3w", fs.gx3w)?;
        d.set_item("b3_gamma3", fs.b3_gamma3)?;
        let e = surflap::decomposition::e_tensor_from_scalars(&fs);
        d.set_item("e", e.to_vec())?;
        Ok(d)
    }

    /// Compare a printed catalog closed form with the computed value.
    fn closed_form_check(&self, quantity: &str, z1: f64, z2: f64) -> PyResult<(f64, f64, f64)> {
        catalog::closed_form_check(&self.entry, &self.geo, quantity, [z1, z2]).map_err(err)
    }

    /// Decompose the Bochner Laplacian for a surface field extended by the
    /// named kind; returns the direct Laplacian, both theorem routes, and
    /// the residuals.
    #[pyo3(signature = (extension, v1, v2, z1, z2, u = None))]
    #[allow(clippy::too_many_arguments)]
    fn decompose<'py>(
        &self,
        py: Python<'py>,
        extension: &str,
        v1: &str,
        v2: &str,
        z1: f64,
        z2: f64,
        u: Option<Vec<String>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let params: Vec<(&str, f64)> = self
            .entry
            .params
            .iter()
            .map(|(k, v)| (k.as_str(), *v))
            .collect();
        let (source, divfree_route) = match extension {
            "closed-form" => {
                let srcs = u.ok_or_else(|| {
                    PyValueError::new_err("closed-form extension needs u=[u1, u2, u3]")
                })?;
                if srcs.len() != 3 {
                    return Err(PyValueError::new_err("u needs three components"));
                }
                let maps = SmoothMap::parse(
                    &[srcs[0].as_str(), srcs[1].as_str(), srcs[2].as_str()],
                    &["y1", "y2", "y3"],
                    &params,
                )
                .map_err(err)?;
                (
                    FieldSource::Closed(AmbientField::new(maps).map_err(err)?),
                    false,
                )
            }
            kind => {
                let v = SurfaceField::new(
                    SmoothMap::parse(&[v1, v2], &["z1", "z2"], &params).map_err(err)?,
                )
                .map_err(err)?;
                let ext_kind = match kind {
                    "compatible" => ExtensionKind::Compatible,
                    "divergence-free" => ExtensionKind::DivergenceFree,
                    "curl-normal" => ExtensionKind::CurlNormal { divfree: false },
                    "curl-normal-divfree" => ExtensionKind::CurlNormal { divfree: true },
                    other => {
                        return Err(PyValueError::new_err(format!(
                            "unknown extension kind `{other}`"
                        )))
                    }
                };
                let divfree = matches!(
                    ext_kind,
                    ExtensionKind::DivergenceFree | ExtensionKind::CurlNormal { divfree: true }
                );
                (
                    FieldSource::Extended(Arc::new(
                        ExtendedField::new(
                            self.geo.clone(),
                            ext_kind,
                            v,
                            TangentialRule::ConstantAlongNormal,
                            self.geo.domain.s_max,
                            1e-11,
                        )
                        .map_err(err)?,
                    )),
                    divfree,
                )
            }
        };
        let opts = DecompositionOptions {
            divfree_route,
            compatible: false,
            mutation: MutationHook::None,
        };
        let row = decompose_at(&self.geo, &source, [z1, z2], &opts).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("direct", row.direct.to_vec())?;
        d.set_item("b_t", row.b_t.to_vec())?;
        d.set_item("b_n", row.b_n)?;
        d.set_item("residual", row.residual)?;
        d.set_item("rel_residual", row.rel_residual)?;
        d.set_item("bochner_v", row.bochner_v.to_vec())?;
        d.set_item("div_v", row.div_v)?;
        if let Some((bt2, bn2)) = row.divfree {
            d.set_item("b_t_divfree", bt2.to_vec())?;
            d.set_item("b_n_divfree", bn2)?;
            d.set_item("divfree_residual", row.divfree_residual.unwrap())?;
        }
        let terms = PyDict::new(py);
        for (k, v) in &row.terms {
            terms.set_item(k, v)?;
        }
        d.set_item("terms", terms)?;
        Ok(d)
    }
}

/// Evaluate a closed-form expression at a point.
#[pyfunction]
#[pyo3(signature = (source, vars, point, params = None))]
fn eval_expr(
    source: &str,
    vars: Vec<String>,
    point: Vec<f64>,
    params: Option<Vec<(String, f64)>>,
) -> PyResult<f64> {
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let map = SmoothMap::parse(&[source], &var_refs, &params_vec(&params)).map_err(err)?;
    Ok(map.eval(&point).map_err(err)?[0])
}

/// Taylor coefficients of an expression at a point: a list of
/// `(multi_index, coefficient)` pairs up to the requested order.
#[pyfunction]
#[pyo3(signature = (source, vars, point, order, params = None))]
fn jet_coefficients(
    source: &str,
    vars: Vec<String>,
    point: Vec<f64>,
    order: usize,
    params: Option<Vec<(String, f64)>>,
) -> PyResult<Vec<(Vec<usize>, f64)>> {
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let map = SmoothMap::parse(&[source], &var_refs, &params_vec(&params)).map_err(err)?;
    let jet = map.eval_jet(&point, order).map_err(err)?[0];
    let mut out = Vec::new();
    for (k, m) in surflap::jet::MULTI_INDEX.iter().enumerate() {
        if m.iter().sum::<usize>() <= order {
            out.push((m.to_vec(), jet.coeffs()[k]));
        }
    }
    Ok(out)
}

#[pyfunction]
fn catalog_names() -> Vec<String> {
    catalog::names()
        .into_iter()
        .map(|s| s.to_string())
        .collect()
}

/// Run a batch command over a JSON configuration; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (config_json, command, suite = None, frames = None))]
fn run(
    config_json: &str,
    command: &str,
    suite: Option<String>,
    frames: Option<Vec<String>>,
) -> PyResult<String> {
    let config = RunConfig::from_json(config_json).map_err(err)?;
    let report = match command {
        "curvature" => runner::run_curvature(&config),
        "verify" => {
            let suite = suite.ok_or_else(|| PyValueError::new_err("verify needs a suite"))?;
            runner::run_verify(&config, &suite, MutationHook::None)
        }
        "compare-frames" => runner::run_compare_frames(&config, &frames.unwrap_or_default()),
        "extend" => runner::run_extend(&config),
        other => return Err(PyValueError::new_err(format!("unknown command `{other}`"))),
    }
    .map_err(err)?;
    Ok(report.to_json())
}

#[pymodule]
fn surflap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Workspace>()?;
    m.add_function(wrap_pyfunction!(eval_expr, m)?)?;
    m.add_function(wrap_pyfunction!(jet_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
