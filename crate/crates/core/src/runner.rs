//! Batch driver shared by the CLI and the Python bindings: resolve a run
//! configuration into geometry + fields, sweep point sets, and assemble
//! reports.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::catalog::{self, CatalogEntry};
use crate::checks;
use crate::config::RunConfig;
use crate::decomposition::{
    self, decompose_at, lemma_residuals, projected_comparison, DecompositionOptions, MutationHook,
};
use crate::error::{Error, Result};
use crate::expr::SmoothMap;
use crate::extension::{
    build_normal_chart, ExtendedField, ExtensionKind, FieldSource, TangentialRule,
};
use crate::fields::{AmbientField, SurfaceField};
use crate::geometry::{AmbientSpace, DomainBox, FrameSpec, Geometry, Surface};
use crate::report::{PointRow, Report};

pub struct Setup {
    pub entry: Option<CatalogEntry>,
    pub geo: Arc<Geometry>,
    pub points: Vec<[f64; 2]>,
    pub seed: Option<u64>,
    pub budgets: BTreeMap<String, f64>,
    pub config: RunConfig,
}

/// Identity budgets, overridable per run through the config or
/// `--tol-override`.
pub fn default_budgets() -> BTreeMap<String, f64> {
    let mut b = BTreeMap::new();
    for (k, v) in [
        ("structure.orthonormality", 1e-10),
        ("structure.dtheta", 1e-8),
        ("structure.gauss", 1e-8),
        ("structure.weingarten", 1e-9),
        ("structure.t12_sym", 1e-9),
        ("structure.t_der", 1e-7),
        ("structure.intrinsic_gauss", 1e-8),
        ("structure.kappa_two_route", 1e-8),
        ("structure.curvature_flat", 1e-8),
        ("closed.kappa", 1e-8),
        ("closed.mean2h", 1e-8),
        ("closed.omega12_b1", 1e-9),
        ("closed.omega13_b1", 1e-9),
        ("closed.omega23_b2", 1e-9),
        ("closed.omega23_b3", 1e-9),
        ("closed.gamma3", 1e-9),
        ("closed.gx3w", 1e-9),
        ("closed.e11", 1e-6),
        ("closed.e12", 1e-6),
        ("closed.e21", 1e-6),
        ("closed.e22", 1e-6),
        ("operators.metric_compat", 1e-8),
        ("operators.torsion_free", 1e-9),
        ("operators.hodge_identity", 1e-10),
        ("operators.pullback_d", 1e-9),
        ("operators.curl_restriction", 1e-9),
        ("operators.div_routes_ambient", 1e-9),
        ("operators.div_routes_surface", 1e-9),
        ("operators.div_match", 1e-8),
        ("operators.rho_on_m", 1e-9),
        ("operators.nabla_b3_u_tangent", 1e-8),
        ("operators.bracket_tangent", 1e-8),
        ("lemma.nabla_x_expansion", 1e-7),
        ("lemma.tangential_double_derivative_sum", 1e-7),
        ("lemma.tangential_block_identity", 1e-7),
        ("lemma.normal_double_derivative", 1e-7),
        ("lemma.normal_block_identity", 1e-7),
        ("lemma.b3_rho_formula", 1e-7),
        ("lemma.normal_derivative_expansion", 1e-9),
        ("lemma.x3_derivative_exchange", 1e-8),
        ("decomposition.master_identity", 1e-7),
        ("decomposition.master_identity_divfree", 1e-7),
        ("decomposition.route_agreement", 1e-8),
        ("decomposition.sigma_hat_identity", 1e-9),
        ("extension.restriction", 1e-10),
        ("extension.pde_on_m", 1e-9),
        ("extension.pde_off_m", 1e-8),
        ("extension.div_tube", 1e-7),
        ("extension.div_match", 1e-8),
        ("extension.rho_on_m", 1e-9),
        ("extension.curl_tangential", 1e-7),
        ("extension.curl_normal_matches_rot", 1e-7),
    ] {
        b.insert(k.to_string(), v);
    }
    b
}

fn params_as_slice(map: &BTreeMap<String, f64>) -> Vec<(&str, f64)> {
    map.iter().map(|(k, v)| (k.as_str(), *v)).collect()
}

pub fn setup(config: &RunConfig) -> Result<Setup> {
    setup_with_frame(config, None)
}

pub fn setup_with_frame(config: &RunConfig, frame_override: Option<&str>) -> Result<Setup> {
    let params = params_as_slice(&config.surface.params);
    let (entry, surface, mut domain, default_frame) = if let Some(name) = &config.surface.catalog {
        let entry = catalog::get(name, &params)?;
        let surface = entry.surface.clone();
        let domain = entry.domain;
        let frame = entry.frame_names().first().map(|s| s.to_string());
        (Some(entry), surface, domain, frame)
    } else {
        let f_srcs = config
            .surface
            .f
            .as_ref()
            .ok_or_else(|| Error::Config("inline surface needs `f`".into()))?;
        if f_srcs.len() != 3 {
            return Err(Error::Config("inline `f` needs three components".into()));
        }
        let f = SmoothMap::parse(
            &f_srcs.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &["z1", "z2"],
            &params,
        )?;
        let ambient = if let Some(metric) = &config.surface.metric {
            if metric.len() != 9 {
                return Err(Error::Config(
                    "explicit metric needs nine components".into(),
                ));
            }
            AmbientSpace::ExplicitMetric {
                g: SmoothMap::parse(
                    &metric.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                    &["y1", "y2", "y3"],
                    &params,
                )?,
            }
        } else {
            let psi_srcs = config
                .surface
                .psi
                .clone()
                .unwrap_or_else(|| vec!["y1".into(), "y2".into(), "y3".into()]);
            if psi_srcs.len() != 3 {
                return Err(Error::Config("inline `psi` needs three components".into()));
            }
            AmbientSpace::FlatPullback {
                psi: SmoothMap::parse(
                    &psi_srcs.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                    &["y1", "y2", "y3"],
                    &params,
                )?,
            }
        };
        let domain = DomainBox {
            z1: (-1.0, 1.0),
            z2: (-1.0, 1.0),
            s_max: 0.1,
        };
        (None, Surface { ambient, f }, domain, None)
    };

    if let Some(d) = &config.domain {
        domain = DomainBox {
            z1: (d.z1[0], d.z1[1]),
            z2: (d.z2[0], d.z2[1]),
            s_max: d.s_max.unwrap_or(domain.s_max),
        };
    }

    let frame_name = frame_override
        .map(|s| s.to_string())
        .or_else(|| config.frame.clone())
        .or(default_frame)
        .unwrap_or_else(|| "normal-tube".to_string());

    let geo = if let Some(custom) = &config.frame_closed_form {
        if custom.len() != 3 || custom.iter().any(|c| c.len() != 3) {
            return Err(Error::Config(
                "frame_closed_form needs three vectors of three components".into(),
            ));
        }
        let maps: [SmoothMap; 3] = std::array::from_fn(|j| {
            SmoothMap::parse(
                &custom[j].iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                &["y1", "y2", "y3"],
                &params,
            )
            .expect("validated below")
        });
        Geometry::new(
            surface.clone(),
            FrameSpec::ClosedForm { maps },
            domain,
            "custom",
        )?
    } else if let Some(entry) = &entry {
        let mut e = entry.clone();
        e.domain = domain;
        e.geometry(&frame_name)?
    } else {
        Geometry::new(surface, FrameSpec::NormalTube, domain, &frame_name)?
    };

    // point sampling
    let (points, seed) = if let Some(n) = config.sampling.random {
        let seed = config.sampling.seed.expect("validated in config");
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let pts = (0..n).map(|_| geo.domain.sample(&mut rng)).collect();
        (pts, Some(seed))
    } else {
        let [n1, n2] = config.sampling.grid.unwrap_or([5, 5]);
        (geo.domain.grid(n1, n2), config.sampling.seed)
    };

    let mut budgets = default_budgets();
    for (k, v) in &config.tolerances {
        budgets.insert(k.clone(), *v);
    }

    Ok(Setup {
        entry,
        geo: Arc::new(geo),
        points,
        seed,
        budgets,
        config: config.clone(),
    })
}

impl Setup {
    pub fn surface_label(&self) -> String {
        match &self.entry {
            Some(e) => {
                let params: Vec<String> =
                    e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{}({})", e.name, params.join(","))
            }
            None => "inline".to_string(),
        }
    }

    /// The surface field `v`: explicit from config, else the catalog
    /// reference field.
    pub fn resolve_v(&self) -> Result<SurfaceField> {
        if let Some(srcs) = &self.config.fields.v {
            if srcs.len() != 2 {
                return Err(Error::Config("field `v` needs two components".into()));
            }
            let params = params_as_slice(&self.config.surface.params);
            return SurfaceField::new(SmoothMap::parse(
                &[srcs[0].as_str(), srcs[1].as_str()],
                &["z1", "z2"],
                &params,
            )?);
        }
        if let Some(entry) = &self.entry {
            if let Ok(v) = entry.reference_field() {
                return Ok(v);
            }
        }
        Err(Error::Config(
            "this command needs a surface field: provide fields.v".into(),
        ))
    }

    fn tangential_rule(&self) -> Result<TangentialRule> {
        match &self.config.fields.rule {
            None => Ok(TangentialRule::ConstantAlongNormal),
            Some(srcs) => {
                if srcs.len() != 2 {
                    return Err(Error::Config("fields.rule needs two components".into()));
                }
                let params = params_as_slice(&self.config.surface.params);
                Ok(TangentialRule::ClosedForm(SmoothMap::parse(
                    &[srcs[0].as_str(), srcs[1].as_str()],
                    &["z1", "z2", "s"],
                    &params,
                )?))
            }
        }
    }

    /// The ambient field under test, per the configured extension kind.
    pub fn resolve_source(&self) -> Result<FieldSource> {
        let kind = self.config.extension.as_deref().unwrap_or("closed-form");
        if kind == "closed-form" {
            let srcs = self.config.fields.u.as_ref().ok_or_else(|| {
                Error::Config("closed-form extension needs fields.u (three components)".into())
            })?;
            if srcs.len() != 3 {
                return Err(Error::Config("field `u` needs three components".into()));
            }
            let params = params_as_slice(&self.config.surface.params);
            let maps = SmoothMap::parse(
                &[srcs[0].as_str(), srcs[1].as_str(), srcs[2].as_str()],
                &["y1", "y2", "y3"],
                &params,
            )?;
            return Ok(FieldSource::Closed(AmbientField::new(maps)?));
        }
        let v = self.resolve_v()?;
        let rule = self.tangential_rule()?;
        let ext_kind = match kind {
            "compatible" => ExtensionKind::Compatible,
            "divergence-free" => ExtensionKind::DivergenceFree,
            "curl-normal" => ExtensionKind::CurlNormal { divfree: false },
            "curl-normal-divfree" => ExtensionKind::CurlNormal { divfree: true },
            other => return Err(Error::Config(format!("unknown extension kind `{other}`"))),
        };
        Ok(FieldSource::Extended(Arc::new(ExtendedField::new(
            self.geo.clone(),
            ext_kind,
            v,
            rule,
            self.geo.domain.s_max,
            1e-11,
        )?)))
    }

    fn base_report(&self, command: &str) -> Report {
        let mut report = Report::new(command, self.config.hash());
        report.seed = self.seed;
        report.surface = self.surface_label();
        report.frames = vec![self.geo.frame_name.clone()];
        report
    }
}

fn sweep<F>(points: &[[f64; 2]], f: F) -> Result<Vec<PointRow>>
where
    F: Fn([f64; 2]) -> Result<PointRow> + Sync,
{
    points.par_iter().map(|&z| f(z)).collect::<Result<Vec<_>>>()
}

/// `curvature`: κ, H, t_ij and frame scalars per point, with closed-form
/// deviations attached when the catalog prints them.
pub fn run_curvature(config: &RunConfig) -> Result<Report> {
    let setup = setup(config)?;
    let geo = setup.geo.clone();
    let entry = setup.entry.clone();
    let rows = sweep(&setup.points, |z| {
        let sf = crate::geometry::second_fundamental_at(&geo, z)?;
        let fs = crate::geometry::frame_scalars_at(&geo, z)?;
        let mut values = BTreeMap::new();
        values.insert("kappa".into(), sf.kappa);
        values.insert("mean2h".into(), sf.mean2h);
        values.insert("mean_h".into(), sf.mean2h / 2.0);
        values.insert("t11".into(), sf.t[0][0]);
        values.insert("t12".into(), sf.t[0][1]);
        values.insert("t22".into(), sf.t[1][1]);
        values.insert("alpha1".into(), fs.alpha[0]);
        values.insert("alpha2".into(), fs.alpha[1]);
        values.insert("gamma1".into(), fs.gamma[0]);
        values.insert("gamma2".into(), fs.gamma[1]);
        values.insert("gamma3".into(), fs.gamma[2]);
        if let Some(entry) = &entry {
            if entry.has_closed_forms() {
                for q in ["kappa", "mean2h"] {
                    let (printed, _, dev) = catalog::closed_form_check(entry, &geo, q, z)?;
                    values.insert(format!("res.closed.{q}"), dev / printed.abs().max(1e-12));
                }
                for q in ["omega12_b1", "omega13_b1", "omega23_b2", "omega23_b3"] {
                    if let Ok((_, _, dev)) = catalog::closed_form_check(entry, &geo, q, z) {
                        values.insert(format!("res.closed.{q}"), dev);
                    }
                }
                for q in ["gamma3", "gx3w"] {
                    if let Ok((_, _, dev)) = catalog::closed_form_check(entry, &geo, q, z) {
                        values.insert(format!("res.closed.{q}"), dev);
                    }
                }
            }
        }
        Ok(PointRow {
            z,
            s: None,
            label: None,
            values,
        })
    })?;
    let mut report = setup.base_report("curvature");
    report.points = rows;
    report.summarize(&setup.budgets);
    Ok(report)
}

/// `verify --suite ...`: run one named identity suite.
pub fn run_verify(config: &RunConfig, suite: &str, mutation: MutationHook) -> Result<Report> {
    let setup = setup(config)?;
    let geo = setup.geo.clone();
    let rows = match suite {
        "structure" => sweep(&setup.points, |z| {
            let res = checks::structure_residuals(&geo, z)?;
            Ok(PointRow {
                z,
                s: None,
                label: None,
                values: res.into_iter().map(|(k, v)| (format!("res.{k}"), v)).collect(),
            })
        })?,
        "operators" => {
            // default to a compatible extension of v when nothing is configured
            let source = if setup.config.extension.is_some() || setup.config.fields.u.is_some() {
                setup.resolve_source()?
            } else {
                let v = setup.resolve_v()?;
                FieldSource::Extended(Arc::new(ExtendedField::new(
                    geo.clone(),
                    ExtensionKind::Compatible,
                    v,
                    TangentialRule::ConstantAlongNormal,
                    geo.domain.s_max,
                    1e-11,
                )?))
            };
            sweep(&setup.points, |z| {
                let res = checks::operator_residuals(&geo, &source, z)?;
                Ok(PointRow {
                    z,
                    s: None,
                    label: None,
                    values: res.into_iter().map(|(k, v)| (format!("res.{k}"), v)).collect(),
                })
            })?
        }
        "lemmas" => {
            let source = setup.resolve_source()?;
            sweep(&setup.points, |z| {
                let res = lemma_residuals(&geo, &source, z)?;
                Ok(PointRow {
                    z,
                    s: None,
                    label: None,
                    values: res
                        .into_iter()
                        .map(|(k, v)| (format!("res.lemma.{k}"), v))
                        .collect(),
                })
            })?
        }
        "decomposition" => {
            let source = setup.resolve_source()?;
            let kind = setup.config.extension.as_deref().unwrap_or("closed-form");
            let divfree_route =
                matches!(kind, "divergence-free" | "curl-normal-divfree");
            sweep(&setup.points, |z| {
                let opts = DecompositionOptions {
                    divfree_route,
                    compatible: false,
                    mutation,
                };
                let row = decompose_at(&geo, &source, z, &opts)?;
                let mut values = BTreeMap::new();
                let scale = {
                    let n = (row.direct[0].powi(2) + row.direct[1].powi(2) + row.direct[2].powi(2))
                        .sqrt();
                    n.max(0.1)
                };
                values.insert("res.decomposition.master_identity".into(), row.residual / scale);
                values.insert("b_t1".into(), row.b_t[0]);
                values.insert("b_t2".into(), row.b_t[1]);
                values.insert("b_n".into(), row.b_n);
                values.insert("div_v".into(), row.div_v);
                for (k, v) in &row.terms {
                    values.insert(format!("term.{k}"), *v);
                }
                if let Some(r2) = row.divfree_residual {
                    values.insert(
                        "res.decomposition.master_identity_divfree".into(),
                        r2 / scale,
                    );
                }
                if let Some(agree) = row.route_agreement {
                    values.insert("res.decomposition.route_agreement".into(), agree);
                }
                Ok(PointRow {
                    z,
                    s: None,
                    label: None,
                    values,
                })
            })?
        }
        "extension" => {
            let source = setup.resolve_source()?;
            let FieldSource::Extended(ext) = &source else {
                return Err(Error::Config(
                    "the extension suite needs an ODE extension kind, not closed-form".into(),
                ));
            };
            extension_rows(&geo, ext, &setup.points)?
        }
        other => {
            return Err(Error::Config(format!(
                "unknown suite `{other}` (expected structure, operators, lemmas, decomposition, extension)"
            )))
        }
    };
    let mut report = setup.base_report("verify");
    report.suite = Some(suite.to_string());
    report.points = rows;
    report.summarize(&setup.budgets);
    Ok(report)
}

fn extension_rows(
    geo: &Arc<Geometry>,
    ext: &Arc<ExtendedField>,
    points: &[[f64; 2]],
) -> Result<Vec<PointRow>> {
    let s_samples = [0.0, 0.3, -0.55, 1.0, -1.0];
    points
        .par_iter()
        .flat_map(|&z| {
            s_samples
                .iter()
                .map(move |frac| (z, frac * geo.domain.s_max))
                .collect::<Vec<_>>()
        })
        .map(|(z, s)| -> Result<PointRow> {
            let mut values = BTreeMap::new();
            if s == 0.0 {
                values.insert(
                    "res.extension.restriction".into(),
                    ext.restriction_residual(z)?,
                );
                values.insert("res.extension.pde_on_m".into(), ext.pde_residual(z, 0.0)?);
                let sj = geo.surface_jets(z)?;
                let u = ext.jets_on_m(z)?;
                let aj = &sj.amb;
                let v = ext.v.jets_at(&z, 3)?;
                let ops = crate::operators::SurfOps::new(&sj, v);
                match ext.kind {
                    ExtensionKind::Compatible => {
                        let div_u = crate::operators::div_frame_route(aj, &u).value();
                        values.insert(
                            "res.extension.div_match".into(),
                            (div_u - ops.div_jet().value()).abs(),
                        );
                        let rho = aj.frame_deriv(&u[2], 2).value()
                            - aj.alpha[0].value() * u[0].value()
                            - aj.alpha[1].value() * u[1].value();
                        values.insert("res.extension.rho_on_m".into(), rho.abs());
                    }
                    ExtensionKind::DivergenceFree => {
                        values.insert(
                            "res.extension.div_tube".into(),
                            crate::operators::div_ambient(aj, &u)?.abs(),
                        );
                    }
                    ExtensionKind::CurlNormal { .. } => {
                        let curl = crate::operators::curl_ambient(aj, &u);
                        values.insert(
                            "res.extension.curl_tangential".into(),
                            curl[0].abs().max(curl[1].abs()),
                        );
                        values.insert(
                            "res.extension.curl_normal_matches_rot".into(),
                            (curl[2] - ops.rot()).abs(),
                        );
                    }
                }
            } else {
                values.insert("res.extension.pde_off_m".into(), ext.pde_residual(z, s)?);
                if matches!(
                    ext.kind,
                    ExtensionKind::DivergenceFree | ExtensionKind::CurlNormal { divfree: true }
                ) {
                    let p = ext.point_jets(z, s)?;
                    let aj = geo.ambient_jets(p.y)?;
                    values.insert(
                        "res.extension.div_tube".into(),
                        crate::operators::div_ambient(&aj, &p.u_y)?.abs(),
                    );
                }
                let u = ext.u_values(z, s)?;
                values.insert("u1".into(), u[0]);
                values.insert("u2".into(), u[1]);
                values.insert("u3".into(), u[2]);
            }
            Ok(PointRow {
                z,
                s: Some(s),
                label: None,
                values,
            })
        })
        .collect()
}

/// `compare-frames`: identical surface field, one report row set per frame.
pub fn run_compare_frames(config: &RunConfig, frames: &[String]) -> Result<Report> {
    let base_setup = setup(config)?;
    let frame_list: Vec<String> = if frames.is_empty() {
        match &base_setup.entry {
            Some(e) => e.frame_names().iter().map(|s| s.to_string()).collect(),
            None => vec![base_setup.geo.frame_name.clone()],
        }
    } else {
        frames.to_vec()
    };

    let mut report = base_setup.base_report("compare-frames");
    report.frames = frame_list.clone();
    let mut e_by_frame: BTreeMap<String, [[f64; 2]; 2]> = BTreeMap::new();

    for frame in &frame_list {
        let s = setup_with_frame(config, Some(frame))?;
        let source = s.resolve_source()?;
        let geo = s.geo.clone();
        let rows = sweep(&s.points, |z| {
            let cmp = projected_comparison(&geo, &source, z)?;
            let mut values = BTreeMap::new();
            let scale = {
                let bn = cmp.b_n;
                let n = (cmp.b_t[0].powi(2) + cmp.b_t[1].powi(2) + bn * bn).sqrt();
                n.max(0.1)
            };
            values.insert(
                format!("res.compare.identity_{frame}"),
                cmp.identity_residual / scale,
            );
            values.insert("e11".into(), cmp.e_entries[0][0]);
            values.insert("e12".into(), cmp.e_entries[0][1]);
            values.insert("e21".into(), cmp.e_entries[1][0]);
            values.insert("e22".into(), cmp.e_entries[1][1]);
            values.insert("b_t1".into(), cmp.b_t[0]);
            values.insert("b_t2".into(), cmp.b_t[1]);
            values.insert("b_n".into(), cmp.b_n);
            values.insert("pi_delta_b_u1".into(), cmp.pi_direct[0]);
            values.insert("pi_delta_b_u2".into(), cmp.pi_direct[1]);
            values.insert("diff_from_base1".into(), cmp.difference[0]);
            values.insert("diff_from_base2".into(), cmp.difference[1]);
            Ok(PointRow {
                z,
                s: None,
                label: Some(frame.clone()),
                values,
            })
        })?;
        if let Some(mid) = rows.get(rows.len() / 2) {
            e_by_frame.insert(
                frame.clone(),
                [
                    [mid.values["e11"], mid.values["e12"]],
                    [mid.values["e21"], mid.values["e22"]],
                ],
            );
        }
        report.points.extend(rows);
    }

    // headline frame-dependence figure: max E-entry spread between frames
    if e_by_frame.len() >= 2 {
        let mats: Vec<_> = e_by_frame.values().collect();
        let mut spread: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let vals: Vec<f64> = mats.iter().map(|m| m[i][j]).collect();
                let mx = vals.iter().cloned().fold(f64::MIN, f64::max);
                let mn = vals.iter().cloned().fold(f64::MAX, f64::min);
                spread = spread.max(mx - mn);
            }
        }
        if let Some(row) = report.points.first_mut() {
            row.values.insert("e_entry_spread".into(), spread);
        }
    }

    let mut budgets = base_setup.budgets.clone();
    for frame in &frame_list {
        budgets.insert(format!("compare.identity_{frame}"), 1e-7);
    }
    report.summarize(&budgets);
    Ok(report)
}

/// `extend`: build the requested extension, sweep PDE and div/curl checks.
pub fn run_extend(config: &RunConfig) -> Result<Report> {
    let setup = setup(config)?;
    let geo = setup.geo.clone();
    // chart build performs the fold-over sweep
    build_normal_chart(geo.clone(), (5, 5), geo.domain.s_max)?;
    let source = setup.resolve_source()?;
    let FieldSource::Extended(ext) = &source else {
        return Err(Error::Config("`extend` needs an ODE extension kind".into()));
    };
    let rows = extension_rows(&geo, ext, &setup.points)?;
    let mut report = setup.base_report("extend");
    report.suite = Some(ext.kind.name().to_string());
    report.points = rows;
    report.summarize(&setup.budgets);
    Ok(report)
}

/// Exposed for the mutation-sensitivity criterion: run the decomposition
/// suite with one term's sign flipped.
pub fn run_decomposition_with_mutation(config: &RunConfig, hook: MutationHook) -> Result<Report> {
    run_verify(config, "decomposition", hook)
}

/// Convenience for tests and bindings: decomposition row at one point.
pub fn decompose_point(config: &RunConfig, z: [f64; 2]) -> Result<decomposition::DecompRow> {
    let setup = setup(config)?;
    let source = setup.resolve_source()?;
    let kind = setup.config.extension.as_deref().unwrap_or("closed-form");
    let opts = DecompositionOptions {
        divfree_route: matches!(kind, "divergence-free" | "curl-normal-divfree"),
        compatible: false,
        mutation: MutationHook::None,
    };
    decompose_at(&setup.geo, &source, z, &opts)
}
