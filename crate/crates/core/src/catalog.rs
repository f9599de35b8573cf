//! Built-in surfaces, frames, fields, and printed closed forms that serve as
//! ground truth for the verification suites.
//!
//! The ellipsoid family carries two closed-form adapted frames (the working
//! frame and the alternative tilde frame that agrees with it on M but differs
//! off M) plus closed forms for curvatures, connection-form coefficients, and
//! the frame-dependent E tensor of both frames. The torus and graph entries
//! have no printed ground truth; they exercise the generic code paths in
//! property tests with the automatic normal-tube frame.

use std::collections::BTreeMap;

use crate::decomposition;
use crate::error::{Error, Result};
use crate::expr::SmoothMap;
use crate::fields::SurfaceField;
use crate::geometry::{
    frame_scalars_at, second_fundamental_at, AmbientSpace, DomainBox, FrameSpec, Geometry, Surface,
};

const YVARS: [&str; 3] = ["y1", "y2", "y3"];
const ZVARS: [&str; 2] = ["z1", "z2"];

/// Where a stored closed form lives.
#[derive(Clone, Debug)]
enum ClosedForm {
    /// scalar of the surface coordinates
    Surface(SmoothMap),
    /// scalar of the ambient coordinates, evaluated on M
    Ambient(SmoothMap),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub surface: Surface,
    pub domain: DomainBox,
    frames: Vec<(String, FrameSpec)>,
    closed_forms: BTreeMap<String, ClosedForm>,
    reference_field: Option<SmoothMap>,
    killing_field: Option<SmoothMap>,
}

pub fn names() -> Vec<&'static str> {
    vec![
        "paper-ellipsoid",
        "unit-sphere",
        "flat-plane",
        "graph-surface",
        "torus",
    ]
}

fn param(params: &[(&str, f64)], name: &str, default: f64) -> f64 {
    params
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, v)| *v)
        .unwrap_or(default)
}

pub fn get(name: &str, params: &[(&str, f64)]) -> Result<CatalogEntry> {
    match name {
        "paper-ellipsoid" => ellipsoid(param(params, "a", 1.0)),
        "unit-sphere" => ellipsoid(1.0),
        "flat-plane" => flat_plane(),
        "graph-surface" => graph_surface(param(params, "amp", 0.15)),
        "torus" => torus(param(params, "R", 2.0), param(params, "r", 0.5)),
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

impl CatalogEntry {
    pub fn frame_names(&self) -> Vec<&str> {
        self.frames.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn geometry(&self, frame: &str) -> Result<Geometry> {
        let spec = self
            .frames
            .iter()
            .find(|(n, _)| n == frame)
            .map(|(_, s)| s.clone())
            .ok_or_else(|| {
                Error::Config(format!(
                    "entry `{}` has no frame `{frame}` (available: {:?})",
                    self.name,
                    self.frame_names()
                ))
            })?;
        Geometry::new(self.surface.clone(), spec, self.domain, frame)
    }

    /// The divergence-free worked-example field `v¹ = a z1/λ, v² = −z2/sin z2`.
    pub fn reference_field(&self) -> Result<SurfaceField> {
        self.reference_field
            .clone()
            .map(SurfaceField::new)
            .transpose()?
            .ok_or_else(|| Error::UnavailableQuantity("reference-field".into()))
    }

    /// Rotation Killing field of the unit sphere.
    pub fn killing_field(&self) -> Result<SurfaceField> {
        self.killing_field
            .clone()
            .map(SurfaceField::new)
            .transpose()?
            .ok_or_else(|| Error::UnavailableQuantity("killing-field".into()))
    }

    pub fn closed_form_names(&self) -> Vec<&str> {
        self.closed_forms.keys().map(|s| s.as_str()).collect()
    }

    pub fn has_closed_forms(&self) -> bool {
        !self.closed_forms.is_empty()
    }
}

/// Evaluate a printed closed form against the numerically computed quantity.
/// Returns `(printed, computed, deviation)`.
pub fn closed_form_check(
    entry: &CatalogEntry,
    geo: &Geometry,
    quantity: &str,
    z: [f64; 2],
) -> Result<(f64, f64, f64)> {
    let key = format!("{}.{}", geo.frame_name, quantity);
    let form = entry
        .closed_forms
        .get(&key)
        .or_else(|| entry.closed_forms.get(quantity))
        .ok_or_else(|| Error::UnavailableQuantity(quantity.to_string()))?;
    let printed = match form {
        ClosedForm::Surface(map) => map.eval(&z)?[0],
        ClosedForm::Ambient(map) => {
            let y = geo.surface.f.eval(&z)?;
            map.eval(&y)?[0]
        }
    };
    let computed = compute_quantity(geo, quantity, z)?;
    Ok((printed, computed, (printed - computed).abs()))
}

fn compute_quantity(geo: &Geometry, quantity: &str, z: [f64; 2]) -> Result<f64> {
    match quantity {
        "kappa" => Ok(second_fundamental_at(geo, z)?.kappa),
        "mean2h" => Ok(second_fundamental_at(geo, z)?.mean2h),
        "gamma3" => Ok(frame_scalars_at(geo, z)?.gamma[2]),
        "gx3w" => Ok(frame_scalars_at(geo, z)?.gx3w),
        "e11" | "e12" | "e21" | "e22" => {
            let sj = geo.surface_jets(z)?;
            let fs = crate::geometry::frame_scalars_from(&sj);
            let e = decomposition::e_tensor_from_scalars(&fs);
            let (i, j) = match quantity {
                "e11" => (0, 0),
                "e12" => (0, 1),
                "e21" => (1, 0),
                _ => (1, 1),
            };
            Ok(e[i][j])
        }
        "omega12_b1" | "omega13_b1" | "omega23_b2" | "omega23_b3" => {
            let y = geo.surface.f.eval(&z)?;
            let aj = geo.ambient_jets([y[0], y[1], y[2]])?;
            let (i, j, k) = match quantity {
                "omega12_b1" => (0, 1, 0),
                "omega13_b1" => (0, 2, 0),
                "omega23_b2" => (1, 2, 1),
                _ => (1, 2, 2),
            };
            Ok(aj.omega[i][j][k].value())
        }
        other => Err(Error::UnavailableQuantity(other.to_string())),
    }
}

// ------------------------------------------------------------ entries

fn smap(sources: &[&str], vars: &[&str], a: Option<f64>) -> Result<SmoothMap> {
    let params: Vec<(&str, f64)> = match a {
        Some(v) => vec![("a", v)],
        None => vec![],
    };
    SmoothMap::parse(sources, vars, &params)
}

fn ellipsoid(a: f64) -> Result<CatalogEntry> {
    if a <= 0.0 || a.is_nan() || !a.is_finite() {
        return Err(Error::InvalidParam(format!(
            "paper-ellipsoid needs a > 0, got {a}"
        )));
    }
    let lam_y = "sqrt(a^2*cos(y2)^2 + sin(y2)^2)";
    let lam_z = "sqrt(a^2*cos(z2)^2 + sin(z2)^2)";
    let l2 = "(a^2*cos(z2)^2 + sin(z2)^2)";

    let psi = smap(
        &["a*y3*cos(y1)*sin(y2)", "a*y3*sin(y1)*sin(y2)", "y3*cos(y2)"],
        &YVARS,
        Some(a),
    )?;
    let f = smap(&["z1", "z2", "1"], &ZVARS, Some(a))?;

    let kehys = FrameSpec::ClosedForm {
        maps: [
            smap(&["1/(a*y3*sin(y2))", "0", "0"], &YVARS, Some(a))?,
            smap(&["0", &format!("1/(y3*{lam_y})"), "0"], &YVARS, Some(a))?,
            smap(
                &[
                    "0",
                    &format!("(1 - a^2)*sin(2*y2)/(2*a*y3*{lam_y})"),
                    &format!("{lam_y}/a"),
                ],
                &YVARS,
                Some(a),
            )?,
        ],
    };

    let mu0 = "((y3 - 1)^2*(a^2*sin(y2)^2 + cos(y2)^2) + a^2*y3^2*sin(y2)^2)";
    let mu1 = "((y3 - 1)^2 + y3^2*(a^2*cos(y2)^2 + sin(y2)^2)*sin(y2)^2)";
    let tilde = FrameSpec::ClosedForm {
        maps: [
            smap(
                &[
                    &format!("1/sqrt({mu0})"),
                    "0",
                    &format!("(y3 - 1)/sqrt({mu0})"),
                ],
                &YVARS,
                Some(a),
            )?,
            smap(
                &[
                    &format!("(1 - a^2)*(y3 - 1)*sin(2*y2)/(2*a*sqrt({mu0}*{mu1}))"),
                    &format!("sqrt({mu0})/(a*y3*sqrt({mu1}))"),
                    &format!("(1 - a^2)*(y3 - 1)^2*sin(2*y2)/(2*a*sqrt({mu0}*{mu1}))"),
                ],
                &YVARS,
                Some(a),
            )?,
            smap(
                &[
                    &format!("-(y3 - 1)/(a*y3*sin(y2)*sqrt({mu1}))"),
                    &format!("(1 - a^2)*sin(2*y2)*sin(y2)/(2*a*sqrt({mu1}))"),
                    &format!("y3*(a^2*cos(y2)^2 + sin(y2)^2)*sin(y2)/(a*sqrt({mu1}))"),
                ],
                &YVARS,
                Some(a),
            )?,
        ],
    };

    let mut closed_forms = BTreeMap::new();
    let put_z = |map: &mut BTreeMap<String, ClosedForm>, key: &str, src: &str| -> Result<()> {
        map.insert(
            key.to_string(),
            ClosedForm::Surface(smap(&[src], &ZVARS, Some(a))?),
        );
        Ok(())
    };
    put_z(&mut closed_forms, "kappa", &format!("1/{l2}^2"))?;
    put_z(
        &mut closed_forms,
        "mean2h",
        &format!("-1/(a*{lam_z}) - a/{lam_z}^3"),
    )?;
    put_z(
        &mut closed_forms,
        "kehys.e22",
        &format!("(1 - a^2)^2*sin(2*z2)^2/(4*{lam_z}^6)"),
    )?;
    for key in [
        "kehys.e11",
        "kehys.e12",
        "kehys.e21",
        "kehys.gamma3",
        "kehys.gx3w",
    ] {
        put_z(&mut closed_forms, key, "0")?;
    }
    put_z(&mut closed_forms, "tilde.gamma3", "(1 - a^2)*cos(z2)/a^2")?;
    put_z(
        &mut closed_forms,
        "tilde.gx3w",
        &format!("-cos(z2)/(a*{lam_z}*sin(z2)^2)"),
    )?;
    put_z(
        &mut closed_forms,
        "tilde.e11",
        &format!("({l2}^2 - (1 + a^2)*{l2} + 2*a^2)/(a^4*sin(z2)^2)"),
    )?;
    put_z(
        &mut closed_forms,
        "tilde.e12",
        &format!("(a^2 - 1)*cos(z2)*(3*{l2} - a^2)/(a^3*{lam_z})"),
    )?;
    put_z(
        &mut closed_forms,
        "tilde.e21",
        &format!("(a^2 - 1)*cos(z2)*(2*a^2 + {l2}*a^2 - 3*{l2}^2)/(a^3*{lam_z}^3)"),
    )?;
    put_z(
        &mut closed_forms,
        "tilde.e22",
        &format!("({l2} - 1)*((1 - a^2)*{l2}^3 - a^4*{l2} + a^6)/(a^4*{l2}^3)"),
    )?;
    for (key, src) in [
        ("kehys.omega12_b1", format!("cos(y2)/(y3*{lam_y}*sin(y2))")),
        ("kehys.omega13_b1", format!("1/(a*y3*{lam_y})")),
        ("kehys.omega23_b2", format!("a/(y3*{lam_y}^3)")),
        (
            "kehys.omega23_b3",
            format!("(1 - a^2)*sin(2*y2)/(2*y3*{lam_y}^3)"),
        ),
    ] {
        closed_forms.insert(
            key.to_string(),
            ClosedForm::Ambient(smap(&[&src], &YVARS, Some(a))?),
        );
    }

    Ok(CatalogEntry {
        name: "paper-ellipsoid".into(),
        params: vec![("a".into(), a)],
        surface: Surface {
            ambient: AmbientSpace::FlatPullback { psi },
            f,
        },
        domain: DomainBox {
            z1: (-1.0, 1.0),
            z2: (0.4, std::f64::consts::PI - 0.4),
            s_max: 0.1,
        },
        frames: vec![
            ("kehys".into(), kehys),
            ("tilde".into(), tilde),
            ("normal-tube".into(), FrameSpec::NormalTube),
        ],
        closed_forms,
        reference_field: Some(smap(
            &[&format!("a*z1/{lam_z}"), "-z2/sin(z2)"],
            &ZVARS,
            Some(a),
        )?),
        killing_field: if a == 1.0 {
            Some(smap(&["sin(z2)", "0"], &ZVARS, Some(a))?)
        } else {
            None
        },
    })
}

fn identity_psi() -> Result<SmoothMap> {
    smap(&["y1", "y2", "y3"], &YVARS, None)
}

fn flat_plane() -> Result<CatalogEntry> {
    let cartesian = FrameSpec::ClosedForm {
        maps: [
            smap(&["1", "0", "0"], &YVARS, None)?,
            smap(&["0", "1", "0"], &YVARS, None)?,
            smap(&["0", "0", "1"], &YVARS, None)?,
        ],
    };
    Ok(CatalogEntry {
        name: "flat-plane".into(),
        params: vec![],
        surface: Surface {
            ambient: AmbientSpace::FlatPullback {
                psi: identity_psi()?,
            },
            f: smap(&["z1", "z2", "0"], &ZVARS, None)?,
        },
        domain: DomainBox {
            z1: (-1.0, 1.0),
            z2: (-1.0, 1.0),
            s_max: 0.5,
        },
        frames: vec![
            ("cartesian".into(), cartesian),
            ("normal-tube".into(), FrameSpec::NormalTube),
        ],
        closed_forms: BTreeMap::new(),
        reference_field: None,
        killing_field: None,
    })
}

fn graph_surface(amp: f64) -> Result<CatalogEntry> {
    if !amp.is_finite() || amp.abs() > 2.0 {
        return Err(Error::InvalidParam(format!(
            "graph-surface amplitude out of range: {amp}"
        )));
    }
    let f = SmoothMap::parse(
        &["z1", "z2", "amp*sin(z1)*cos(z2)"],
        &ZVARS,
        &[("amp", amp)],
    )?;
    Ok(CatalogEntry {
        name: "graph-surface".into(),
        params: vec![("amp".into(), amp)],
        surface: Surface {
            ambient: AmbientSpace::FlatPullback {
                psi: identity_psi()?,
            },
            f,
        },
        domain: DomainBox {
            z1: (-1.0, 1.0),
            z2: (-1.0, 1.0),
            s_max: 0.1,
        },
        frames: vec![("normal-tube".into(), FrameSpec::NormalTube)],
        closed_forms: BTreeMap::new(),
        reference_field: None,
        killing_field: None,
    })
}

fn torus(big_r: f64, small_r: f64) -> Result<CatalogEntry> {
    if !(small_r > 0.0 && big_r > small_r) {
        return Err(Error::InvalidParam(format!(
            "torus needs 0 < r < R, got R = {big_r}, r = {small_r}"
        )));
    }
    let f = SmoothMap::parse(
        &[
            "(R + r*cos(z2))*cos(z1)",
            "(R + r*cos(z2))*sin(z1)",
            "r*sin(z2)",
        ],
        &ZVARS,
        &[("R", big_r), ("r", small_r)],
    )?;
    Ok(CatalogEntry {
        name: "torus".into(),
        params: vec![("R".into(), big_r), ("r".into(), small_r)],
        surface: Surface {
            ambient: AmbientSpace::FlatPullback {
                psi: identity_psi()?,
            },
            f,
        },
        domain: DomainBox {
            z1: (-1.0, 1.0),
            z2: (0.3, 2.8),
            s_max: (small_r * 0.2).min(0.1),
        },
        frames: vec![("normal-tube".into(), FrameSpec::NormalTube)],
        closed_forms: BTreeMap::new(),
        reference_field: None,
        killing_field: None,
    })
}
