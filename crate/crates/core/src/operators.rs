//! Vector-calculus operators over frame components: covariant derivatives,
//! divergence, curl/rot, Lie brackets, and the three Laplacians, ambient and
//! intrinsic.
//!
//! Ambient fields move between two representations: frame components (the
//! scalars `u^j` the theorems are written in) and coordinate components (used
//! by the direct Christoffel route). Keeping both routes alive is what makes
//! the cross-checks meaningful, so none of the frame-expansion formulas below
//! are implemented by delegating to the coordinate machinery.

use crate::error::{Error, Result};
use crate::fields::AmbientField;
use crate::geometry::{AmbientJets, Geometry, SurfaceJets, ROUTE_AGREEMENT_TOL};
use crate::jet::{dir_derivative, invert_map3, Jet3};
use crate::linalg::jdet3;

// ------------------------------------------------------------ ambient side

/// Frame components -> coordinate components, `u^m = Σ_j u^j c^j_m`.
pub fn coord_components(aj: &AmbientJets, u: &[Jet3; 3]) -> [Jet3; 3] {
    std::array::from_fn(|m| u[0] * aj.frame[0][m] + u[1] * aj.frame[1][m] + u[2] * aj.frame[2][m])
}

/// Coordinate components -> frame components via `g0(W, b^i)`.
pub fn frame_components(aj: &AmbientJets, w: &[Jet3; 3]) -> [Jet3; 3] {
    std::array::from_fn(|i| aj.inner(w, &aj.frame[i]))
}

/// Covariant derivative in coordinates:
/// `(∇̄_X W)^m = Σ_l X^l (∂_l W^m + Σ_r Γ^m_{lr} W^r)`.
pub fn cov_deriv_coord(aj: &AmbientJets, x: &[Jet3; 3], w: &[Jet3; 3]) -> [Jet3; 3] {
    std::array::from_fn(|m| {
        let mut acc = Jet3::zero(3);
        for l in 0..3 {
            let mut inner = w[m].partial(l);
            for r in 0..3 {
                inner = inner + aj.gamma[m][l][r] * w[r];
            }
            acc = acc + x[l] * inner;
        }
        acc
    })
}

/// Covariant derivative along frame direction `k` via the connection-form
/// expansion, in frame components:
/// `(∇̄_{b^k} u)^i = b^k(u^i) + Σ_j ω_{ij}(b^k) u^j`.
pub fn cov_deriv_frame_route(aj: &AmbientJets, k: usize, u: &[Jet3; 3]) -> [Jet3; 3] {
    std::array::from_fn(|i| {
        let mut acc = aj.frame_deriv(&u[i], k);
        for j in 0..3 {
            acc = acc + aj.omega[i][j][k] * u[j];
        }
        acc
    })
}

/// Raw iterated derivative `∇̄_{b^a} ∇̄_{b^b} u` in coordinate components.
pub fn raw_double_deriv(aj: &AmbientJets, a: usize, b: usize, u: &[Jet3; 3]) -> [Jet3; 3] {
    let uc = coord_components(aj, u);
    let inner = cov_deriv_coord(aj, &aj.frame[b], &uc);
    cov_deriv_coord(aj, &aj.frame[a], &inner)
}

/// Tensorial second covariant derivative
/// `∇̄∇̄u (b^a ⊗ b^b) = ∇̄_{b^a} ∇̄_{b^b} u − ∇̄_{∇̄_{b^a} b^b} u`.
pub fn second_cov(aj: &AmbientJets, a: usize, b: usize, u: &[Jet3; 3]) -> [Jet3; 3] {
    let raw = raw_double_deriv(aj, a, b, u);
    let uc = coord_components(aj, u);
    let corr = cov_deriv_coord(aj, &aj.nabla_frame[a][b], &uc);
    std::array::from_fn(|m| raw[m] - corr[m])
}

/// Scalar Hessian `∇̄∇̄φ (b^a ⊗ b^b) = b^a(b^b(φ)) − (∇̄_{b^a} b^b)(φ)`.
pub fn scalar_hessian(aj: &AmbientJets, a: usize, b: usize, phi: &Jet3) -> Jet3 {
    let first = aj.frame_deriv(phi, b);
    let second = aj.frame_deriv(&first, a);
    second - dir_derivative(phi, &aj.nabla_frame[a][b])
}

/// Divergence by the frame expansion of the extension theorems:
/// `div(u) = −(γ2+α1)u¹ + (γ1−α2)u² − (t11+t22)u³ + Σ b^k(u^k)`.
pub fn div_frame_route(aj: &AmbientJets, u: &[Jet3; 3]) -> Jet3 {
    let g1 = aj.gam[0];
    let g2 = aj.gam[1];
    let a1 = aj.alpha[0];
    let a2 = aj.alpha[1];
    let mut acc = -(g2 + a1) * u[0] + (g1 - a2) * u[1] - aj.mean2h * u[2];
    for k in 0..3 {
        acc = acc + aj.frame_deriv(&u[k], k);
    }
    acc
}

/// Divergence by the coordinate formula `u^m_{;m} = (√G U^m)_{,m} / √G`.
pub fn div_coord_route(aj: &AmbientJets, u: &[Jet3; 3]) -> Result<Jet3> {
    let uc = coord_components(aj, u);
    let sqrt_g = jdet3(&aj.g).sqrt()?;
    let inv_sqrt_g = sqrt_g.recip()?;
    let mut acc = Jet3::zero(3);
    for m in 0..3 {
        acc = acc + (sqrt_g * uc[m]).partial(m);
    }
    Ok(acc * inv_sqrt_g)
}

/// Both divergence routes; aborts when they disagree.
pub fn div_ambient(aj: &AmbientJets, u: &[Jet3; 3]) -> Result<f64> {
    let frame = div_frame_route(aj, u).value();
    let coord = div_coord_route(aj, u)?.value();
    if (frame - coord).abs() > ROUTE_AGREEMENT_TOL * frame.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "ambient divergence routes disagree at y = {:?}: {frame:.12e} vs {coord:.12e}",
            aj.y
        )));
    }
    Ok(frame)
}

/// `du(b^i, b^j)` for the lowered field `♭u`.
pub fn du_form(aj: &AmbientJets, u: &[Jet3; 3], i: usize, j: usize) -> f64 {
    let xi = aj.frame_deriv(&u[j], i);
    let xj = aj.frame_deriv(&u[i], j);
    let br = aj.frame_bracket(i, j);
    let mut u_br = Jet3::zero(3);
    for k in 0..3 {
        u_br = u_br + u[k] * aj.inner(&br, &aj.frame[k]);
    }
    (xi - xj - u_br).value()
}

/// `curl(u) = ♯ ∗ d ♭u` in frame components (orientation `θ¹∧θ²∧θ³`).
pub fn curl_ambient(aj: &AmbientJets, u: &[Jet3; 3]) -> [f64; 3] {
    [
        du_form(aj, u, 1, 2),
        du_form(aj, u, 2, 0),
        du_form(aj, u, 0, 1),
    ]
}

/// Lie bracket of coordinate-component jet fields.
pub fn bracket_coord(x: &[Jet3; 3], y: &[Jet3; 3]) -> [Jet3; 3] {
    std::array::from_fn(|m| {
        let mut acc = Jet3::zero(3);
        for l in 0..3 {
            acc = acc + x[l] * y[m].partial(l) - y[l] * x[m].partial(l);
        }
        acc
    })
}

/// Ambient Bochner Laplacian by the frame route,
/// `Δ_B u = Σ_i ∇̄∇̄u (b^i ⊗ b^i)`, returned in frame components.
pub fn bochner_ambient(aj: &AmbientJets, u: &[Jet3; 3]) -> [f64; 3] {
    let mut total = [Jet3::zero(3); 3];
    for i in 0..3 {
        let term = second_cov(aj, i, i, u);
        for m in 0..3 {
            total[m] = total[m] + term[m];
        }
    }
    let fc = frame_components(aj, &total);
    [fc[0].value(), fc[1].value(), fc[2].value()]
}

/// Ambient Ricci action on a field, `(Ri u)^a = Σ_b Ric_ab u^b`, assembled
/// from curvature forms. Exposed for completeness; the decomposition checks
/// never consume it.
pub fn ricci_action(aj: &AmbientJets, u: &[Jet3; 3]) -> [f64; 3] {
    let ric = aj.ricci_frame();
    std::array::from_fn(|a| (0..3).map(|b| ric[a][b] * u[b].value()).sum())
}

/// Independent oracle for `Δ_B u` in flat-pullback mode: push the field to
/// the Euclidean chart, apply the componentwise Laplacian, and read the
/// result back in frame components. Shares no code with the frame route.
pub fn flat_chart_bochner(geo: &Geometry, field: &AmbientField, y: [f64; 3]) -> Result<[f64; 3]> {
    let crate::geometry::AmbientSpace::FlatPullback { psi } = &geo.surface.ambient else {
        return Err(Error::Config(
            "flat-chart oracle needs a flat pullback".into(),
        ));
    };
    let aj = geo.ambient_jets(y)?;
    let u = field.jets_at(&y, 3)?;
    let uc = coord_components(&aj, &u);

    let psy_vec = psi.eval_jet(&y, 3)?;
    let psy: [Jet3; 3] = [psy_vec[0], psy_vec[1], psy_vec[2]];
    let jpsi: [[Jet3; 3]; 3] = std::array::from_fn(|m| std::array::from_fn(|k| psy[m].partial(k)));
    let inv = invert_map3(&psy, y)?;

    // x-components of u as functions of x
    let ux_of_y: [Jet3; 3] = std::array::from_fn(|m| {
        let mut acc = Jet3::zero(3);
        for k in 0..3 {
            acc = acc + jpsi[m][k] * uc[k];
        }
        acc
    });
    let ux: [Jet3; 3] = std::array::from_fn(|m| ux_of_y[m].compose(&inv));

    // componentwise flat Laplacian
    let lap: [f64; 3] = std::array::from_fn(|m| (0..3).map(|i| ux[m].d2(i, i)).sum());

    // frame vectors in x-components (values)
    let mut out = [0.0; 3];
    for j in 0..3 {
        let mut bx = [0.0; 3];
        for m in 0..3 {
            for k in 0..3 {
                bx[m] += jpsi[m][k].value() * aj.frame[j][k].value();
            }
        }
        out[j] = (0..3).map(|m| lap[m] * bx[m]).sum();
    }
    Ok(out)
}

// ------------------------------------------------------------ surface side

/// Which diffusion operator to apply on the surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LaplacianKind {
    Bochner,
    Hodge,
    Symmetric,
    /// `A v = Δ_B v + β κ v` for divergence-free fields.
    Beta(f64),
}

/// All intrinsic operator evaluations at one surface point for one field.
pub struct SurfOps<'a> {
    pub sj: &'a SurfaceJets,
    /// z-jets of the field components (order 3)
    pub v: [Jet3; 2],
    gamma_z: [Jet3; 2],
    kappa_z: Jet3,
}

impl<'a> SurfOps<'a> {
    pub fn new(sj: &'a SurfaceJets, v: [Jet3; 2]) -> SurfOps<'a> {
        SurfOps {
            sj,
            v,
            gamma_z: [sj.gamma_z(0), sj.gamma_z(1)],
            kappa_z: sj.restrict(&sj.amb.kappa),
        }
    }

    /// `∇_{b_z^k} w` for a field given by component z-jets.
    fn cov_deriv_of(&self, w: &[Jet3; 2], k: usize) -> [Jet3; 2] {
        [
            self.sj.tangential(&w[0], k) + self.gamma_z[k] * w[1],
            self.sj.tangential(&w[1], k) - self.gamma_z[k] * w[0],
        ]
    }

    pub fn cov_deriv(&self, k: usize) -> [Jet3; 2] {
        self.cov_deriv_of(&self.v, k)
    }

    /// Gradient matrix `D[i][k] = (∇_{b_z^k} v)^i` (values).
    pub fn grad_matrix(&self) -> [[f64; 2]; 2] {
        let w0 = self.cov_deriv(0);
        let w1 = self.cov_deriv(1);
        [
            [w0[0].value(), w1[0].value()],
            [w0[1].value(), w1[1].value()],
        ]
    }

    /// Divergence by the frame expansion, as a z-jet.
    pub fn div_jet(&self) -> Jet3 {
        let t0 = self.sj.tangential(&self.v[0], 0);
        let t1 = self.sj.tangential(&self.v[1], 1);
        -self.gamma_z[1] * self.v[0] + self.gamma_z[0] * self.v[1] + t0 + t1
    }

    /// Divergence by the coordinate formula through the pullback metric.
    pub fn div_coord(&self) -> Result<f64> {
        let det = self.sj.gz[0][0] * self.sj.gz[1][1] - self.sj.gz[0][1] * self.sj.gz[1][0];
        let sqrt_g = det.sqrt()?;
        let inv = sqrt_g.recip()?;
        // coordinate components V^a = Σ_k v^k d^k_a
        let va: [Jet3; 2] = std::array::from_fn(|a| {
            self.v[0] * self.sj.dcoef[0][a] + self.v[1] * self.sj.dcoef[1][a]
        });
        let mut acc = Jet3::zero(2);
        for a in 0..2 {
            acc = acc + (sqrt_g * va[a]).partial(a);
        }
        Ok((acc * inv).value())
    }

    pub fn div(&self) -> Result<f64> {
        let frame = self.div_jet().value();
        let coord = self.div_coord()?;
        if (frame - coord).abs() > ROUTE_AGREEMENT_TOL * frame.abs().max(1.0) {
            return Err(Error::Inconsistent(format!(
                "surface divergence routes disagree at z = {:?}: {frame:.12e} vs {coord:.12e}",
                self.sj.z
            )));
        }
        Ok(frame)
    }

    /// `rot(v) = dv(b_z¹, b_z²) = b_z¹(v²) − b_z²(v¹) − g(v, w)`.
    pub fn rot(&self) -> f64 {
        let t = self.sj.tangential(&self.v[1], 0) - self.sj.tangential(&self.v[0], 1);
        let gvw = self.v[0] * self.gamma_z[0] + self.v[1] * self.gamma_z[1];
        (t - gvw).value()
    }

    /// Intrinsic Bochner Laplacian
    /// `Δ_B v = Σ_k ∇_{b_z^k}∇_{b_z^k} v − ∇_{∇_{b_z^k} b_z^k} v`.
    pub fn bochner(&self) -> [f64; 2] {
        let w0 = self.cov_deriv(0);
        let w1 = self.cov_deriv(1);
        let d00 = self.cov_deriv_of(&w0, 0);
        let d11 = self.cov_deriv_of(&w1, 1);
        // ∇_{b_z¹} b_z¹ = −γ1 b_z², ∇_{b_z²} b_z² = γ2 b_z¹
        let g1 = self.gamma_z[0].value();
        let g2 = self.gamma_z[1].value();
        std::array::from_fn(|i| {
            d00[i].value() + d11[i].value() + g1 * w1[i].value() - g2 * w0[i].value()
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa_z.value()
    }

    /// Gradient of a scalar z-jet in frame components.
    pub fn grad_scalar(&self, phi: &Jet3) -> [f64; 2] {
        [
            self.sj.tangential(phi, 0).value(),
            self.sj.tangential(phi, 1).value(),
        ]
    }

    /// Convective term `∇_v v`.
    pub fn convection(&self) -> [f64; 2] {
        let w0 = self.cov_deriv(0);
        let w1 = self.cov_deriv(1);
        let v0 = self.v[0].value();
        let v1 = self.v[1].value();
        std::array::from_fn(|i| v0 * w0[i].value() + v1 * w1[i].value())
    }

    pub fn laplacian(&self, kind: LaplacianKind) -> Result<[f64; 2]> {
        let b = self.bochner();
        let k = self.kappa();
        let v = [self.v[0].value(), self.v[1].value()];
        Ok(match kind {
            LaplacianKind::Bochner => b,
            LaplacianKind::Hodge => [b[0] - k * v[0], b[1] - k * v[1]],
            LaplacianKind::Symmetric => {
                let div = self.div_jet();
                let gd = self.grad_scalar(&div);
                [b[0] + gd[0] + k * v[0], b[1] + gd[1] + k * v[1]]
            }
            LaplacianKind::Beta(beta) => {
                if beta.abs() > 1.0 {
                    log::warn!(
                        "|β| = {} > 1: -A loses positive definiteness for divergence-free fields",
                        beta.abs()
                    );
                }
                [b[0] + beta * k * v[0], b[1] + beta * k * v[1]]
            }
        })
    }

    /// `‖∇v‖_F`: zero iff the field is parallel.
    pub fn parallel_residual(&self) -> f64 {
        let d = self.grad_matrix();
        (d[0][0].powi(2) + d[0][1].powi(2) + d[1][0].powi(2) + d[1][1].powi(2)).sqrt()
    }

    /// `‖Σv‖_F` with `Σv = ∇v + (∇v)ᵀ`: zero iff the field is Killing.
    pub fn killing_residual(&self) -> f64 {
        let d = self.grad_matrix();
        let s: [[f64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| d[i][j] + d[j][i]));
        (s[0][0].powi(2) + s[0][1].powi(2) + s[1][0].powi(2) + s[1][1].powi(2)).sqrt()
    }

    /// `(‖Δ_H v‖, |rot v| + |div v|)`: both zero iff harmonic and closed.
    pub fn harmonic_residual(&self) -> Result<(f64, f64)> {
        let h = self.laplacian(LaplacianKind::Hodge)?;
        let hn = (h[0] * h[0] + h[1] * h[1]).sqrt();
        Ok((hn, self.rot().abs() + self.div()?.abs()))
    }

    /// Residual of the steady Navier-Stokes momentum equation
    /// `−Av + ∇_v v + grad(p) = 0` with `A = Δ_B + βκ` and `p = β·½g(v,v)`.
    pub fn steady_ns_residual(&self, beta: f64) -> Result<f64> {
        let a = self.laplacian(LaplacianKind::Beta(beta))?;
        let conv = self.convection();
        let half_vv = (self.v[0] * self.v[0] + self.v[1] * self.v[1]).scale(0.5 * beta);
        let gp = self.grad_scalar(&half_vv);
        let r: [f64; 2] = std::array::from_fn(|i| -a[i] + conv[i] + gp[i]);
        Ok((r[0] * r[0] + r[1] * r[1]).sqrt())
    }
}
