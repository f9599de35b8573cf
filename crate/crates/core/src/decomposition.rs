//! The decomposition `Δ_B u = B_t + B_n b³` of the ambient Bochner Laplacian
//! along a surface: auxiliary tensors, both theorem routes (general and
//! divergence-free), the intermediate lemmas as independently checkable
//! identities, and residual reports against the directly computed `Δ_B u`.
//!
//! Three code paths meet at each residual: the direct Laplacian through the
//! coordinate/Christoffel machinery, the general-form theorem assembled from
//! frame scalars, and the divergence-free variant. They share inputs but not
//! formulas, so a transcription slip in any route shows up as a nonzero
//! residual.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extension::FieldSource;
use crate::geometry::{
    frame_scalars_from, second_fundamental_from, FrameScalars, Geometry, SecondFundamental,
    SurfaceJets,
};
use crate::jet::Jet3;
use crate::operators::{
    bochner_ambient, bracket_coord, coord_components, cov_deriv_coord, frame_components,
    raw_double_deriv, scalar_hessian, second_cov, SurfOps,
};

/// `K = θ_z¹⊗θ_z² − θ_z²⊗θ_z¹` as a matrix in the orthonormal frame basis.
pub const K_MAT: [[f64; 2]; 2] = [[0.0, 1.0], [-1.0, 0.0]];

#[inline]
fn kv(v: [f64; 2]) -> [f64; 2] {
    [v[1], -v[0]]
}

#[inline]
fn mat_vec2(m: &[[f64; 2]; 2], v: [f64; 2]) -> [f64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

#[inline]
fn bilinear2(m: &[[f64; 2]; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * (m[0][0] * b[0] + m[0][1] * b[1]) + a[1] * (m[1][0] * b[0] + m[1][1] * b[1])
}

#[inline]
fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Debug hooks that flip the sign of one named term in the theorem routes.
/// Used by the mutation-sensitivity check: each flip must break the master
/// identity, which confirms the suite constrains that term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MutationHook {
    #[default]
    None,
    /// `Nq` in B_t
    Nq,
    /// `Ev` in B_t
    Ev,
    /// `2ρX3` (general) / `−2 div(v) X3` (divergence-free) in B_t
    RhoX3,
    /// `S_adj(X3, v)` in the divergence-free B_n
    SadjX3v,
    /// `g(Kw, q)` in the divergence-free B_n
    GKwq,
}

impl MutationHook {
    pub fn parse(name: &str) -> Result<MutationHook> {
        Ok(match name {
            "none" => MutationHook::None,
            "nq" => MutationHook::Nq,
            "ev" => MutationHook::Ev,
            "rho-x3" => MutationHook::RhoX3,
            "sadj-x3-v" => MutationHook::SadjX3v,
            "g-kw-q" => MutationHook::GKwq,
            other => {
                return Err(Error::Config(format!(
                    "unknown mutation hook `{other}` (expected nq, ev, rho-x3, sadj-x3-v, g-kw-q)"
                )))
            }
        })
    }

    fn sign(self, here: MutationHook) -> f64 {
        if self == here {
            -1.0
        } else {
            1.0
        }
    }
}

/// Every auxiliary tensor of the decomposition theorems at one point on M,
/// in frame components.
#[derive(Clone, Debug)]
pub struct AuxTensors {
    pub sf: SecondFundamental,
    pub fs: FrameScalars,
    pub u: [f64; 3],
    pub v: [f64; 2],
    /// `q = (b³(u¹), b³(u²))`
    pub q: [f64; 2],
    /// `ρ = b³(u³) − g0(X3, u)`
    pub rho: f64,
    pub b3_rho: f64,
    /// second normal derivatives `d_j = ∇̄∇̄u^j (b³⊗b³)`
    pub d: [f64; 3],
    /// mixed scalars `m_j = ∇̄∇̄u^j (b^j⊗b³)`
    pub m: [f64; 2],
    /// `Q_{ij} = b_z^i(v^j)`
    pub qmat: [[f64; 2]; 2],
    pub sigma: f64,
    pub sigma_hat: f64,
    pub div_v: f64,
    pub t0: [f64; 2],
    pub t1: [f64; 2],
    pub t2: [f64; 2],
    /// `T = T0 + T2`
    pub t_cov: [f64; 2],
    pub t_div: [f64; 2],
    pub t_div_c: [f64; 2],
    pub e0: [[f64; 2]; 2],
    pub e1: [[f64; 2]; 2],
    pub e2: [[f64; 2]; 2],
    /// `E = E2 − 2Hγ3K`
    pub e_mat: [[f64; 2]; 2],
    /// `N = 2γ3K − 2Hg`
    pub n_mat: [[f64; 2]; 2],
}

/// Assemble every auxiliary tensor from the frame bundle and the field jets.
pub fn aux_tensors(sj: &SurfaceJets, u: &[Jet3; 3], v: &[Jet3; 2]) -> Result<AuxTensors> {
    let aj = &sj.amb;
    let sf = second_fundamental_from(sj)?;
    let fs = frame_scalars_from(sj);

    let uv = [u[0].value(), u[1].value(), u[2].value()];
    let vv = [v[0].value(), v[1].value()];
    if (uv[0] - vv[0]).abs() > 1e-9 || (uv[1] - vv[1]).abs() > 1e-9 {
        return Err(Error::Inconsistent(format!(
            "restriction identity u|M = v violated at z = {:?}: ({}, {}) vs ({}, {})",
            sj.z, uv[0], uv[1], vv[0], vv[1]
        )));
    }
    if uv[2].abs() > 1e-9 {
        return Err(Error::Inconsistent(format!(
            "field not tangent on M at z = {:?}: u3 = {:.3e}",
            sj.z, uv[2]
        )));
    }

    let q = [
        aj.frame_deriv(&u[0], 2).value(),
        aj.frame_deriv(&u[1], 2).value(),
    ];
    let rho_jet = aj.frame_deriv(&u[2], 2) - (aj.alpha[0] * u[0] + aj.alpha[1] * u[1]);
    let rho = rho_jet.value();
    let b3_rho = aj.frame_deriv(&rho_jet, 2).value();

    let d: [f64; 3] = std::array::from_fn(|j| scalar_hessian(aj, 2, 2, &u[j]).value());
    let m: [f64; 2] = std::array::from_fn(|j| scalar_hessian(aj, j, 2, &u[j]).value());

    let qmat: [[f64; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| sj.tangential(&v[j], i).value()));
    let t = sf.t;
    let sigma = t[0][0] * qmat[0][0] + t[0][1] * (qmat[0][1] + qmat[1][0]) + t[1][1] * qmat[1][1];
    let sigma_hat = (t[1][1] - t[0][0]) * qmat[1][1] + t[0][1] * (qmat[1][0] + qmat[0][1]);
    let div_v = -fs.gamma[1] * vv[0] + fs.gamma[0] * vv[1] + qmat[0][0] + qmat[1][1];

    let mean2h_z = sj.restrict(&aj.mean2h);
    let omega23 = aj.curvature_form(1, 2, 0, 1);
    let omega13 = aj.curvature_form(0, 2, 0, 1);
    let t0 = [
        sj.tangential(&mean2h_z, 0).value() + omega23,
        sj.tangential(&mean2h_z, 1).value() - omega13,
    ];
    let t1 = [
        aj.frame_deriv(&aj.alpha[0], 2).value(),
        aj.frame_deriv(&aj.alpha[1], 2).value(),
    ];
    let kx3 = kv(fs.x3);
    let gamma3 = fs.gamma[2];
    let t2 = [gamma3 * kx3[0] - t1[0], gamma3 * kx3[1] - t1[1]];
    let t_cov = [t0[0] + t2[0], t0[1] + t2[1]];

    let arg = [fs.ell[0] + gamma3 * fs.x3[0], fs.ell[1] + gamma3 * fs.x3[1]];
    let karg = kv(arg);
    let t_div = [t0[0] + karg[0], t0[1] + karg[1]];
    let arg_c = [
        arg[0] + 2.0 * t[0][0] * fs.w[0],
        arg[1] + 2.0 * t[0][0] * fs.w[1],
    ];
    let karg_c = kv(arg_c);
    let t_div_c = [t0[0] + karg_c[0], t0[1] + karg_c[1]];

    let e0: [[f64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| fs.x3[i] * fs.x3[j]));
    let ident = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let e1: [[f64; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            e0[i][j] + fs.b3_gamma3 * K_MAT[i][j] - gamma3 * gamma3 * ident(i, j)
        })
    });
    let e2: [[f64; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| e1[i][j] - fs.gx3w * K_MAT[i][j]));
    let e_mat: [[f64; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| e2[i][j] - sf.mean2h * gamma3 * K_MAT[i][j])
    });
    let n_mat: [[f64; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| 2.0 * gamma3 * K_MAT[i][j] - sf.mean2h * ident(i, j))
    });

    Ok(AuxTensors {
        sf,
        fs,
        u: uv,
        v: vv,
        q,
        rho,
        b3_rho,
        d,
        m,
        qmat,
        sigma,
        sigma_hat,
        div_v,
        t0,
        t1,
        t2,
        t_cov,
        t_div,
        t_div_c,
        e0,
        e1,
        e2,
        e_mat,
        n_mat,
    })
}

/// General decomposition (any extension):
/// `B_t = Δ_Bv + κv − 2H·Sv + Ev + 2ρX3 + d₁b¹ + d₂b² + Nq`,
/// `B_n = 2σ + 2S(w,Kv) − S(X3,v) + Tv + d₃ − 2g(X3,q) − 2Hρ`.
pub fn decompose_general(
    aux: &AuxTensors,
    bochner_v: [f64; 2],
    mutation: MutationHook,
) -> ([f64; 2], f64) {
    let t = &aux.sf.t;
    let sv = mat_vec2(t, aux.v);
    let ev = mat_vec2(&aux.e_mat, aux.v);
    let nq = mat_vec2(&aux.n_mat, aux.q);
    let s_ev = mutation.sign(MutationHook::Ev);
    let s_nq = mutation.sign(MutationHook::Nq);
    let s_rho = mutation.sign(MutationHook::RhoX3);
    let b_t: [f64; 2] = std::array::from_fn(|i| {
        bochner_v[i] + aux.sf.kappa * aux.v[i] - aux.sf.mean2h * sv[i]
            + s_ev * ev[i]
            + s_rho * 2.0 * aux.rho * aux.fs.x3[i]
            + aux.d[i]
            + s_nq * nq[i]
    });
    let kv_v = kv(aux.v);
    let b_n = 2.0 * aux.sigma + 2.0 * bilinear2(t, aux.fs.w, kv_v) - bilinear2(t, aux.fs.x3, aux.v)
        + dot2(aux.t_cov, aux.v)
        + aux.d[2]
        - 2.0 * dot2(aux.fs.x3, aux.q)
        - aux.sf.mean2h * aux.rho;
    (b_t, b_n)
}

/// Divergence-free decomposition (`div(u) = 0` in the tube):
/// `B_t` replaces `2ρX3` by `−2 div(v) X3`; `B_n` uses `S_adj`, the mixed
/// Hessians and `T_div` (or `σ̂`, `T_div,c` in the compatible case).
pub fn decompose_divfree(
    aux: &AuxTensors,
    bochner_v: [f64; 2],
    compatible: bool,
    mutation: MutationHook,
) -> ([f64; 2], f64) {
    let t = &aux.sf.t;
    let sv = mat_vec2(t, aux.v);
    let ev = mat_vec2(&aux.e_mat, aux.v);
    let nq = mat_vec2(&aux.n_mat, aux.q);
    let s_ev = mutation.sign(MutationHook::Ev);
    let s_nq = mutation.sign(MutationHook::Nq);
    let s_rho = mutation.sign(MutationHook::RhoX3);
    let b_t: [f64; 2] = std::array::from_fn(|i| {
        bochner_v[i] + aux.sf.kappa * aux.v[i] - aux.sf.mean2h * sv[i] + s_ev * ev[i]
            - s_rho * 2.0 * aux.div_v * aux.fs.x3[i]
            + aux.d[i]
            + s_nq * nq[i]
    });
    let (sigma_use, t_div_use) = if compatible {
        (aux.sigma_hat, aux.t_div_c)
    } else {
        (aux.sigma, aux.t_div)
    };
    let kv_v = kv(aux.v);
    let kw = kv(aux.fs.w);
    let b_n = 2.0 * sigma_use
        + aux.fs.gamma[2] * (aux.qmat[1][0] - aux.qmat[0][1])
        + 2.0 * bilinear2(t, aux.fs.w, kv_v)
        + mutation.sign(MutationHook::SadjX3v) * bilinear2(&aux.sf.s_adj, aux.fs.x3, aux.v)
        + dot2(t_div_use, aux.v)
        - aux.m[0]
        - aux.m[1]
        + mutation.sign(MutationHook::GKwq) * dot2(kw, aux.q);
    (b_t, b_n)
}

/// One evaluated point: the direct Laplacian, both theorem routes, residuals,
/// and an itemization of the extension-dependent terms.
#[derive(Clone, Debug)]
pub struct DecompRow {
    pub z: [f64; 2],
    pub direct: [f64; 3],
    pub b_t: [f64; 2],
    pub b_n: f64,
    pub residual: f64,
    pub rel_residual: f64,
    /// divergence-free route, when requested
    pub divfree: Option<([f64; 2], f64)>,
    pub divfree_residual: Option<f64>,
    pub route_agreement: Option<f64>,
    pub bochner_v: [f64; 2],
    pub div_v: f64,
    pub terms: BTreeMap<String, f64>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DecompositionOptions {
    /// evaluate the divergence-free theorem route as well
    pub divfree_route: bool,
    /// substitute `σ̂` and `T_div,c` (requires `div(v) = 0`)
    pub compatible: bool,
    pub mutation: MutationHook,
}

fn norm3(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub fn decompose_at(
    geo: &Geometry,
    source: &FieldSource,
    z: [f64; 2],
    opts: &DecompositionOptions,
) -> Result<DecompRow> {
    let sj = geo.surface_jets(z)?;
    let u = source.jets_on_m(&sj)?;
    let v = source.restriction_jets(&sj)?;
    let aux = aux_tensors(&sj, &u, &v)?;
    let ops = SurfOps::new(&sj, v);
    let bochner_v = ops.bochner();

    let direct = bochner_ambient(&sj.amb, &u);
    let (b_t, b_n) = decompose_general(&aux, bochner_v, opts.mutation);
    let residual = norm3([direct[0] - b_t[0], direct[1] - b_t[1], direct[2] - b_n]);
    let rel_residual = residual / norm3(direct).max(1e-300);

    let (divfree, divfree_residual, route_agreement) = if opts.divfree_route {
        let div_u = crate::operators::div_ambient(&sj.amb, &u)?;
        if div_u.abs() > 1e-7 {
            return Err(Error::Inconsistent(format!(
                "divergence-free route requested but div(u) = {div_u:.3e} on M at z = {z:?}"
            )));
        }
        let (bt2, bn2) = decompose_divfree(&aux, bochner_v, opts.compatible, opts.mutation);
        let r2 = norm3([direct[0] - bt2[0], direct[1] - bt2[1], direct[2] - bn2]);
        let agree = norm3([b_t[0] - bt2[0], b_t[1] - bt2[1], b_n - bn2]);
        (Some((bt2, bn2)), Some(r2), Some(agree))
    } else {
        (None, None, None)
    };

    let ev = mat_vec2(&aux.e_mat, aux.v);
    let nq = mat_vec2(&aux.n_mat, aux.q);
    let mut terms = BTreeMap::new();
    terms.insert(
        "bochner_v".into(),
        (bochner_v[0].powi(2) + bochner_v[1].powi(2)).sqrt(),
    );
    terms.insert("Ev".into(), (ev[0] * ev[0] + ev[1] * ev[1]).sqrt());
    terms.insert(
        "rho_X3".into(),
        2.0 * aux.rho.abs() * (aux.fs.x3[0].powi(2) + aux.fs.x3[1].powi(2)).sqrt(),
    );
    terms.insert("d1".into(), aux.d[0].abs());
    terms.insert("d2".into(), aux.d[1].abs());
    terms.insert("d3".into(), aux.d[2].abs());
    terms.insert("Nq".into(), (nq[0] * nq[0] + nq[1] * nq[1]).sqrt());

    Ok(DecompRow {
        z,
        direct,
        b_t,
        b_n,
        residual,
        rel_residual,
        divfree,
        divfree_residual,
        route_agreement,
        bochner_v,
        div_v: aux.div_v,
        terms,
    })
}

/// Left side minus right side of each intermediate identity, evaluated with
/// independent machinery on each side.
pub fn lemma_residuals(
    geo: &Geometry,
    source: &FieldSource,
    z: [f64; 2],
) -> Result<BTreeMap<String, f64>> {
    let sj = geo.surface_jets(z)?;
    let u = source.jets_on_m(&sj)?;
    let v = source.restriction_jets(&sj)?;
    let aux = aux_tensors(&sj, &u, &v)?;
    let aj = &sj.amb;
    let ops = SurfOps::new(&sj, v);
    let uc = coord_components(aj, &u);
    let fvals = |w: &[Jet3; 3]| -> [f64; 3] {
        let f = frame_components(aj, w);
        [f[0].value(), f[1].value(), f[2].value()]
    };

    let t = &aux.sf.t;
    let w = aux.fs.w;
    let x3 = aux.fs.x3;
    let gamma3 = aux.fs.gamma[2];
    let vv = aux.v;
    let kw = kv(w);
    let kv_v = kv(vv);
    let kq = kv(aux.q);
    let mean2h = aux.sf.mean2h;
    let kappa = aux.sf.kappa;
    let sv = mat_vec2(t, vv);
    let bochner_v = ops.bochner();

    // ∇_{Kw} v (covariant derivative is tensorial in the direction)
    let cd0 = ops.cov_deriv(0);
    let cd1 = ops.cov_deriv(1);
    let nabla_kw_v: [f64; 2] =
        std::array::from_fn(|i| kw[0] * cd0[i].value() + kw[1] * cd1[i].value());
    // X3(v^j) = Σ_k x3[k] b_z^k(v^j)
    let x3v: [f64; 2] = std::array::from_fn(|j| x3[0] * aux.qmat[0][j] + x3[1] * aux.qmat[1][j]);

    let mut out = BTreeMap::new();
    fn put(out: &mut BTreeMap<String, f64>, name: &str, lhs: [f64; 3], rhs: [f64; 3]) {
        let r = norm3([lhs[0] - rhs[0], lhs[1] - rhs[1], lhs[2] - rhs[2]]);
        out.insert(name.to_string(), r);
    }

    // ∇̄_X u for X = ∇̄_{b¹}b¹ + ∇̄_{b²}b², against its frame-scalar expansion
    {
        let x: [Jet3; 3] =
            std::array::from_fn(|m| aj.nabla_frame[0][0][m] + aj.nabla_frame[1][1][m]);
        let lhs = fvals(&cov_deriv_coord(aj, &x, &uc));
        let rhs = [
            nabla_kw_v[0] + mean2h * (aux.q[0] + gamma3 * kv_v[0]),
            nabla_kw_v[1] + mean2h * (aux.q[1] + gamma3 * kv_v[1]),
            mean2h * aux.rho + bilinear2(t, kw, vv),
        ];
        put(&mut out, "nabla_x_expansion", lhs, rhs);
    }

    // ∇̄_{b¹}∇̄_{b¹}u + ∇̄_{b²}∇̄_{b²}u (raw sum, no tensorial correction)
    {
        let r00 = raw_double_deriv(aj, 0, 0, &u);
        let r11 = raw_double_deriv(aj, 1, 1, &u);
        let lhs = fvals(&std::array::from_fn(|m| r00[m] + r11[m]));
        let rhs = [
            bochner_v[0] + kappa * vv[0] - mean2h * sv[0] + nabla_kw_v[0],
            bochner_v[1] + kappa * vv[1] - mean2h * sv[1] + nabla_kw_v[1],
            2.0 * aux.sigma + dot2(aux.t0, vv) + bilinear2(t, kw, vv) + 2.0 * bilinear2(t, w, kv_v),
        ];
        put(&mut out, "tangential_double_derivative_sum", lhs, rhs);
    }

    // Combined identity for the tangential block
    {
        let s00 = second_cov(aj, 0, 0, &u);
        let s11 = second_cov(aj, 1, 1, &u);
        let lhs = fvals(&std::array::from_fn(|m| s00[m] + s11[m]));
        let rhs = [
            bochner_v[0] + kappa * vv[0] - mean2h * (sv[0] + aux.q[0] + gamma3 * kv_v[0]),
            bochner_v[1] + kappa * vv[1] - mean2h * (sv[1] + aux.q[1] + gamma3 * kv_v[1]),
            2.0 * aux.sigma + dot2(aux.t0, vv) + 2.0 * bilinear2(t, w, kv_v) - mean2h * aux.rho,
        ];
        put(&mut out, "tangential_block_identity", lhs, rhs);
    }

    // ∇̄_{b³}∇̄_{b³} u on M
    {
        let lhs = fvals(&raw_double_deriv(aj, 2, 2, &u));
        let e1v = mat_vec2(&aux.e1, vv);
        let rhs = [
            aux.d[0] + x3v[0] + 2.0 * gamma3 * kq[0] + 2.0 * aux.rho * x3[0] + e1v[0],
            aux.d[1] + x3v[1] + 2.0 * gamma3 * kq[1] + 2.0 * aux.rho * x3[1] + e1v[1],
            aux.d[2] + dot2(aux.t2, vv) - 2.0 * dot2(x3, aux.q),
        ];
        put(&mut out, "normal_double_derivative", lhs, rhs);
    }

    // Normal-direction tensorial block: ∇̄∇̄u (b³⊗b³)
    {
        let lhs = fvals(&second_cov(aj, 2, 2, &u));
        let e2v = mat_vec2(&aux.e2, vv);
        let rhs = [
            aux.d[0] + 2.0 * gamma3 * kq[0] + 2.0 * aux.rho * x3[0] + e2v[0],
            aux.d[1] + 2.0 * gamma3 * kq[1] + 2.0 * aux.rho * x3[1] + e2v[1],
            aux.d[2] + dot2(aux.t2, vv) - 2.0 * dot2(x3, aux.q) - bilinear2(t, x3, vv),
        ];
        put(&mut out, "normal_block_identity", lhs, rhs);
    }

    // b³(ρ) = ∇̄∇̄u³(b³⊗b³) − T1 v − g(X3, q)
    {
        let rhs = aux.d[2] - dot2(aux.t1, vv) - dot2(x3, aux.q);
        out.insert("b3_rho_formula".into(), (aux.b3_rho - rhs).abs());
    }

    // ∇̄_{b³} u = q + u³X3 + γ3(u²b¹ − u¹b²) + ρ b³ on M
    {
        let lhs = fvals(&cov_deriv_coord(aj, &aj.frame[2], &uc));
        let rhs = [
            aux.q[0] + aux.u[2] * x3[0] + gamma3 * aux.u[1],
            aux.q[1] + aux.u[2] * x3[1] - gamma3 * aux.u[0],
            aux.rho,
        ];
        put(&mut out, "normal_derivative_expansion", lhs, rhs);
    }

    // derivative-exchange check: X3(v¹)b¹ + X3(v²)b² − ∇_{X3}v = −g(X3,w)Kv
    {
        let nabla_x3_v: [f64; 2] =
            std::array::from_fn(|i| x3[0] * cd0[i].value() + x3[1] * cd1[i].value());
        let gx3w = aux.fs.gx3w;
        let lhs = [x3v[0] - nabla_x3_v[0], x3v[1] - nabla_x3_v[1], 0.0];
        let rhs = [-gx3w * kv_v[0], -gx3w * kv_v[1], 0.0];
        put(&mut out, "x3_derivative_exchange", lhs, rhs);
    }

    Ok(out)
}

/// Report row for the projected comparison of `π(Δ_B u)` against intrinsic
/// operators, including the worked-family identity
/// `π(Δ_B u) = Δ_B v + κ v + π(∇̄∇̄u b³⊗b³ + 2H[u, b³])`.
#[derive(Clone, Debug)]
pub struct ComparisonRow {
    pub z: [f64; 2],
    pub pi_direct: [f64; 2],
    /// `Δ_B v + κv − 2H·Sv`
    pub base: [f64; 2],
    pub difference: [f64; 2],
    pub e_entries: [[f64; 2]; 2],
    pub term_ev: [f64; 2],
    pub term_rho_x3: [f64; 2],
    pub term_d: [f64; 2],
    pub term_nq: [f64; 2],
    pub projected_identity_residual: f64,
    pub identity_residual: f64,
    pub b_t: [f64; 2],
    pub b_n: f64,
}

pub fn projected_comparison(
    geo: &Geometry,
    source: &FieldSource,
    z: [f64; 2],
) -> Result<ComparisonRow> {
    let sj = geo.surface_jets(z)?;
    let u = source.jets_on_m(&sj)?;
    let v = source.restriction_jets(&sj)?;
    let aux = aux_tensors(&sj, &u, &v)?;
    let aj = &sj.amb;
    let ops = SurfOps::new(&sj, v);
    let bochner_v = ops.bochner();
    let direct = bochner_ambient(aj, &u);
    let (b_t, b_n) = decompose_general(&aux, bochner_v, MutationHook::None);
    let identity_residual = norm3([direct[0] - b_t[0], direct[1] - b_t[1], direct[2] - b_n]);

    let sv = mat_vec2(&aux.sf.t, aux.v);
    let base: [f64; 2] =
        std::array::from_fn(|i| bochner_v[i] + aux.sf.kappa * aux.v[i] - aux.sf.mean2h * sv[i]);
    let pi_direct = [direct[0], direct[1]];
    let difference = [pi_direct[0] - base[0], pi_direct[1] - base[1]];

    // Eq. of the worked example: tangential projection of
    // ∇̄∇̄u b³⊗b³ + 2H [u, b³]
    let uc = coord_components(aj, &u);
    let sec33 = second_cov(aj, 2, 2, &u);
    let br = bracket_coord(&uc, &aj.frame[2]);
    let mixed: [Jet3; 3] = std::array::from_fn(|m| sec33[m] + br[m].scale(aux.sf.mean2h));
    let mixed_f = frame_components(aj, &mixed);
    let proj_resid: [f64; 2] = std::array::from_fn(|i| {
        pi_direct[i] - (bochner_v[i] + aux.sf.kappa * aux.v[i] + mixed_f[i].value())
    });
    let projected_identity_residual =
        (proj_resid[0] * proj_resid[0] + proj_resid[1] * proj_resid[1]).sqrt();

    let ev = mat_vec2(&aux.e_mat, aux.v);
    let nq = mat_vec2(&aux.n_mat, aux.q);
    Ok(ComparisonRow {
        z,
        pi_direct,
        base,
        difference,
        e_entries: aux.e_mat,
        term_ev: ev,
        term_rho_x3: [2.0 * aux.rho * aux.fs.x3[0], 2.0 * aux.rho * aux.fs.x3[1]],
        term_d: [aux.d[0], aux.d[1]],
        term_nq: nq,
        projected_identity_residual,
        identity_residual,
        b_t,
        b_n,
    })
}

/// `σ̂` identity of the divergence-free proof: when `div(v) = 0`,
/// `σ = (t22−t11)b²(v²) + t12(b²(v¹)+b¹(v²)) + t11·g(Kw, v)`.
pub fn sigma_hat_identity_residual(aux: &AuxTensors) -> f64 {
    let gkwv = dot2(kv(aux.fs.w), aux.v);
    (aux.sigma - (aux.sigma_hat + aux.sf.t[0][0] * gkwv)).abs()
}

/// The frame-dependent tensor
/// `E = ♭X3⊗♭X3 − γ3²g + (b³(γ3) − 2Hγ3 − g(X3,w))K`
/// from frame scalars alone (no field required).
pub fn e_tensor_from_scalars(fs: &FrameScalars) -> [[f64; 2]; 2] {
    let gamma3 = fs.gamma[2];
    let coeff = fs.b3_gamma3 - fs.mean2h * gamma3 - fs.gx3w;
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let ident = if i == j { 1.0 } else { 0.0 };
            fs.x3[i] * fs.x3[j] - gamma3 * gamma3 * ident + coeff * K_MAT[i][j]
        })
    })
}
