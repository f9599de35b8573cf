//! Per-point residuals of the structural and operator identities: each entry
//! is |left − right| of an identity that the geometry or operator layer is
//! supposed to satisfy, computed on independent routes where one exists.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::extension::FieldSource;
use crate::geometry::Geometry;
use crate::jet::Jet3;
use crate::operators::{
    bracket_coord, coord_components, cov_deriv_coord, curl_ambient, div_coord_route,
    div_frame_route, du_form, frame_components, LaplacianKind, SurfOps,
};

fn max2(a: f64, b: f64) -> f64 {
    a.max(b)
}

/// Frame/structure identities at one surface point (no field involved).
pub fn structure_residuals(geo: &Geometry, z: [f64; 2]) -> Result<BTreeMap<String, f64>> {
    let sj = geo.surface_jets(z)?;
    let aj = &sj.amb;
    let mut out = BTreeMap::new();

    // orthonormality of the frame
    let gram = aj.gram();
    let mut dev: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let expect = if i == j { 1.0 } else { 0.0 };
            dev = max2(dev, (gram[i][j] - expect).abs());
        }
    }
    out.insert("structure.orthonormality".into(), dev);

    // dθ^i + Σ_k ω_ik ∧ θ^k = 0 on frame pairs
    let theta = |i: usize, j: usize| aj.inner(&aj.frame[i], &aj.frame[j]);
    let mut dtheta_dev: f64 = 0.0;
    for i in 0..3 {
        for a in 0..3 {
            for b in (a + 1)..3 {
                let d_ab = {
                    let xa = aj.frame_deriv(&theta(i, b), a);
                    let xb = aj.frame_deriv(&theta(i, a), b);
                    let br = aj.frame_bracket(a, b);
                    (xa - xb - aj.inner(&br, &aj.frame[i])).value()
                };
                let mut wedge = 0.0;
                for k in 0..3 {
                    wedge += aj.omega[i][k][a].value() * theta(k, b).value()
                        - aj.omega[i][k][b].value() * theta(k, a).value();
                }
                dtheta_dev = max2(dtheta_dev, (d_ab + wedge).abs());
            }
        }
    }
    out.insert("structure.dtheta".into(), dtheta_dev);

    // Gauss split: ∇̄_X Y = ∇_X Y + S(X,Y) b³ with the intrinsic covariant
    // derivative computed through the pullback-metric Christoffel symbols
    let gz = &sj.gz;
    let det = gz[0][0] * gz[1][1] - gz[0][1] * gz[1][0];
    let inv_det = det.recip()?;
    let gzinv: [[Jet3; 2]; 2] = [
        [gz[1][1] * inv_det, -gz[0][1] * inv_det],
        [-gz[1][0] * inv_det, gz[0][0] * inv_det],
    ];
    let dgz: [[[Jet3; 2]; 2]; 2] = std::array::from_fn(|m| {
        std::array::from_fn(|k| std::array::from_fn(|l| gz[m][k].partial(l)))
    });
    let gamma_z: [[[Jet3; 2]; 2]; 2] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| {
                let mut acc = Jet3::zero(2);
                for m in 0..2 {
                    acc = acc + gzinv[a][m] * (dgz[m][c][b] + dgz[m][b][c] - dgz[b][c][m]);
                }
                acc.scale(0.5)
            })
        })
    });
    let mut gauss_dev: f64 = 0.0;
    let mut wein_dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            // ambient route
            let amb = frame_components(aj, &aj.nabla_frame[i][j]);
            // intrinsic route in the z chart: ∇_{b_z^i} b_z^j
            let w_coords: [Jet3; 2] = std::array::from_fn(|a| {
                let mut acc = Jet3::zero(2);
                for b in 0..2 {
                    let mut inner = sj.dcoef[j][a].partial(b);
                    for c in 0..2 {
                        inner = inner + gamma_z[a][b][c] * sj.dcoef[j][c];
                    }
                    acc = acc + sj.dcoef[i][b] * inner;
                }
                acc
            });
            // frame components of the intrinsic derivative
            for k in 0..2 {
                let mut frame_comp = Jet3::zero(2);
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        frame_comp = frame_comp + gz[a2][b2] * w_coords[a2] * sj.dcoef[k][b2];
                    }
                }
                gauss_dev = max2(gauss_dev, (amb[k].value() - frame_comp.value()).abs());
            }
            gauss_dev = max2(gauss_dev, (amb[2].value() - aj.t_gauss[i][j].value()).abs());
        }
        // Weingarten: ∇̄_{b^i} b³ + S b^i = 0
        let der = frame_components(aj, &aj.nabla_frame[i][2]);
        for k in 0..2 {
            wein_dev = max2(wein_dev, (der[k].value() + aj.t[k][i].value()).abs());
        }
        wein_dev = max2(wein_dev, der[2].value().abs());
    }
    out.insert("structure.gauss".into(), gauss_dev);
    out.insert("structure.weingarten".into(), wein_dev);

    out.insert(
        "structure.t12_sym".into(),
        (aj.t[0][1].value() - aj.t[1][0].value()).abs(),
    );

    // derivative identities for t_ij
    let t = &aj.t;
    let g1 = aj.gam[0].value();
    let g2 = aj.gam[1].value();
    let om13 = aj.curvature_form(0, 2, 0, 1);
    let om23 = aj.curvature_form(1, 2, 0, 1);
    let tv = |i: usize, j: usize| t[i][j].value();
    let b = |phi: &Jet3, k: usize| aj.frame_deriv(phi, k).value();
    let r1 =
        b(&t[0][1], 0) - b(&t[0][0], 1) + om13 - (tv(0, 0) - tv(1, 1)) * g1 - 2.0 * tv(0, 1) * g2;
    let r2 =
        b(&t[0][1], 1) - b(&t[1][1], 0) - om23 + 2.0 * tv(0, 1) * g1 - (tv(0, 0) - tv(1, 1)) * g2;
    out.insert("structure.t_der".into(), r1.abs().max(r2.abs()));

    // two-route Gaussian curvature: det S vs the intrinsic curvature form
    let kappa = aj.kappa.value();
    let intrinsic = aj.intrinsic_curvature();
    out.insert(
        "structure.intrinsic_gauss".into(),
        (intrinsic - kappa).abs(),
    );
    out.insert(
        "structure.kappa_two_route".into(),
        (intrinsic - kappa).abs() / kappa.abs().max(1e-3),
    );

    // ambient curvature forms vanish for flat pullbacks
    if geo.surface.ambient.is_flat_pullback() {
        let mut flat_dev: f64 = 0.0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                for a in 0..3 {
                    for bb in (a + 1)..3 {
                        flat_dev = max2(flat_dev, aj.curvature_form(i, j, a, bb).abs());
                    }
                }
            }
        }
        out.insert("structure.curvature_flat".into(), flat_dev);
    }
    Ok(out)
}

/// Operator identities at one surface point for a field and its source.
pub fn operator_residuals(
    geo: &Geometry,
    source: &FieldSource,
    z: [f64; 2],
) -> Result<BTreeMap<String, f64>> {
    let sj = geo.surface_jets(z)?;
    let aj = &sj.amb;
    let u = source.jets_on_m(&sj)?;
    let v = source.restriction_jets(&sj)?;
    let ops = SurfOps::new(&sj, v);
    let uc = coord_components(aj, &u);
    let mut out = BTreeMap::new();

    // metric compatibility along b³ for the pair (u, b¹)
    {
        let w = aj.frame[0];
        let lhs = aj.frame_deriv(&aj.inner(&uc, &w), 2).value();
        let du = cov_deriv_coord(aj, &aj.frame[2], &uc);
        let dw = cov_deriv_coord(aj, &aj.frame[2], &w);
        let rhs = aj.inner(&du, &w).value() + aj.inner(&uc, &dw).value();
        out.insert("operators.metric_compat".into(), (lhs - rhs).abs());
    }

    // torsion-free: [u, b³] = ∇̄_u b³ − ∇̄_{b³} u
    {
        let br = bracket_coord(&uc, &aj.frame[2]);
        let fwd = cov_deriv_coord(aj, &uc, &aj.frame[2]);
        let bwd = cov_deriv_coord(aj, &aj.frame[2], &uc);
        let mut dev: f64 = 0.0;
        for m in 0..3 {
            dev = max2(dev, (br[m].value() - (fwd[m] - bwd[m]).value()).abs());
        }
        out.insert("operators.torsion_free".into(), dev);
    }

    // Δ_H v = Δ_B v − κ v pointwise (definitional in 2-D)
    {
        let bv = ops.laplacian(LaplacianKind::Bochner)?;
        let hv = ops.laplacian(LaplacianKind::Hodge)?;
        let k = ops.kappa();
        let dev = (0..2)
            .map(|i| (hv[i] + k * ops.v[i].value() - bv[i]).abs())
            .fold(0.0, max2);
        out.insert("operators.hodge_identity".into(), dev);
    }

    // pullback commutes with d: rot(v) = du(b¹, b²) on M
    out.insert(
        "operators.pullback_d".into(),
        (ops.rot() - du_form(aj, &u, 0, 1)).abs(),
    );

    // normal component of curl restricts to rot
    {
        let curl = curl_ambient(aj, &u);
        out.insert(
            "operators.curl_restriction".into(),
            (curl[2] - ops.rot()).abs(),
        );
    }

    // divergence route agreement, ambient and intrinsic
    {
        let frame = div_frame_route(aj, &u).value();
        let coord = div_coord_route(aj, &u)?.value();
        out.insert("operators.div_routes_ambient".into(), (frame - coord).abs());
        let dv_frame = ops.div_jet().value();
        let dv_coord = ops.div_coord()?;
        out.insert(
            "operators.div_routes_surface".into(),
            (dv_frame - dv_coord).abs(),
        );
    }

    // compatible sources: f*div(u) = div(v), ρ = 0, and the b³ derivative
    // plus the bracket stay tangent along M
    if let FieldSource::Extended(ext) = source {
        if matches!(
            ext.kind,
            crate::extension::ExtensionKind::Compatible
                | crate::extension::ExtensionKind::CurlNormal { divfree: false }
        ) {
            let div_u = div_frame_route(aj, &u).value();
            let div_v = ops.div_jet().value();
            out.insert("operators.div_match".into(), (div_u - div_v).abs());
            let rho = aj.frame_deriv(&u[2], 2).value()
                - aj.alpha[0].value() * u[0].value()
                - aj.alpha[1].value() * u[1].value();
            out.insert("operators.rho_on_m".into(), rho.abs());
            let nb3u = cov_deriv_coord(aj, &aj.frame[2], &uc);
            let f = frame_components(aj, &nb3u);
            out.insert("operators.nabla_b3_u_tangent".into(), f[2].value().abs());
            let br = bracket_coord(&uc, &aj.frame[2]);
            let bf = frame_components(aj, &br);
            out.insert("operators.bracket_tangent".into(), bf[2].value().abs());
        }
    }
    Ok(out)
}
