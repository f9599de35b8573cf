//! Ambient metrics by pullback, adapted orthonormal frames, connection and
//! curvature forms, and the frame scalars they generate.
//!
//! All ambient computation happens in the `y` chart: in flat-pullback mode the
//! metric `g0 = ψ*g1` and its Christoffel symbols are derived from `ψ` by jet
//! arithmetic, so the same covariant-derivative code serves both modes. Every
//! geometric quantity at a point is produced as a jet, which is what lets the
//! operators and decomposition layers take exact frame-direction derivatives
//! of connection scalars.

mod tube;

pub use tube::TubeFrame;

use crate::error::{Error, Result};
use crate::expr::SmoothMap;
use crate::jet::{dir_derivative, Jet3};
use crate::linalg::{det3, jinv3};

/// Validation tolerance applied when a frame is registered.
pub const FRAME_VALIDATION_TOL: f64 = 1e-10;
/// Tolerance for evaluation-time route disagreements; beyond this the
/// computation aborts rather than warns.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-8;

/// Sampling box in surface coordinates plus tube half-width.
#[derive(Clone, Copy, Debug)]
pub struct DomainBox {
    pub z1: (f64, f64),
    pub z2: (f64, f64),
    pub s_max: f64,
}

impl DomainBox {
    pub fn grid(&self, n1: usize, n2: usize) -> Vec<[f64; 2]> {
        let mut pts = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                let u = if n1 == 1 {
                    0.5
                } else {
                    i as f64 / (n1 - 1) as f64
                };
                let v = if n2 == 1 {
                    0.5
                } else {
                    j as f64 / (n2 - 1) as f64
                };
                pts.push([
                    self.z1.0 + u * (self.z1.1 - self.z1.0),
                    self.z2.0 + v * (self.z2.1 - self.z2.0),
                ]);
            }
        }
        pts
    }

    pub fn sample(&self, rng: &mut impl rand::Rng) -> [f64; 2] {
        [
            rng.random_range(self.z1.0..=self.z1.1),
            rng.random_range(self.z2.0..=self.z2.1),
        ]
    }
}

/// The ambient three-manifold: either a flat chart pulled back through a
/// diffeomorphism `ψ : D_y → D_x`, or an explicit metric given directly in
/// `y` coordinates.
#[derive(Clone, Debug)]
pub enum AmbientSpace {
    FlatPullback { psi: SmoothMap },
    ExplicitMetric { g: SmoothMap },
}

impl AmbientSpace {
    /// Metric component jets at `y`. Flat-pullback metrics carry order-2
    /// jets (one order is spent differentiating `ψ`); explicit metrics carry
    /// order-3 jets.
    pub fn metric_jets(&self, y: &[f64; 3]) -> Result<[[Jet3; 3]; 3]> {
        let g = match self {
            AmbientSpace::FlatPullback { psi } => {
                let pj = psi.eval_jet(y, 3)?;
                let mut jac = [[0.0; 3]; 3];
                for (m, jet) in pj.iter().enumerate() {
                    for k in 0..3 {
                        jac[m][k] = jet.d1(k);
                    }
                }
                if det3(&jac).abs() < 1e-12 {
                    return Err(Error::Singular(format!(
                        "pullback Jacobian singular at y = {y:?}"
                    )));
                }
                let dp: [[Jet3; 3]; 3] =
                    std::array::from_fn(|m| std::array::from_fn(|k| pj[m].partial(k)));
                std::array::from_fn(|k| {
                    std::array::from_fn(|l| {
                        dp[0][k] * dp[0][l] + dp[1][k] * dp[1][l] + dp[2][k] * dp[2][l]
                    })
                })
            }
            AmbientSpace::ExplicitMetric { g } => {
                let jets = g.eval_jet(y, 3)?;
                if jets.len() != 9 {
                    return Err(Error::Config(
                        "explicit metric must have nine row-major components".into(),
                    ));
                }
                let m: [[Jet3; 3]; 3] =
                    std::array::from_fn(|k| std::array::from_fn(|l| jets[3 * k + l]));
                for k in 0..3 {
                    for l in (k + 1)..3 {
                        if (m[k][l].value() - m[l][k].value()).abs() > 1e-10 {
                            return Err(Error::Config(format!(
                                "explicit metric not symmetric at y = {y:?}: g{k}{l} != g{l}{k}"
                            )));
                        }
                    }
                }
                m
            }
        };
        // positive definiteness via leading principal minors
        let v = |k: usize, l: usize| g[k][l].value();
        let m1 = v(0, 0);
        let m2 = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
        let m3 = {
            let vals = [
                [v(0, 0), v(0, 1), v(0, 2)],
                [v(1, 0), v(1, 1), v(1, 2)],
                [v(2, 0), v(2, 1), v(2, 2)],
            ];
            det3(&vals)
        };
        if m1 <= 0.0 || m2 <= 0.0 || m3 <= 0.0 {
            return Err(Error::Inconsistent(format!(
                "metric not positive definite at y = {y:?} (minors {m1:.3e}, {m2:.3e}, {m3:.3e})"
            )));
        }
        Ok(g)
    }

    pub fn is_flat_pullback(&self) -> bool {
        matches!(self, AmbientSpace::FlatPullback { .. })
    }
}

/// An embedded surface `f : D_z → D_y` inside an ambient space.
#[derive(Clone, Debug)]
pub struct Surface {
    pub ambient: AmbientSpace,
    pub f: SmoothMap,
}

/// Frame specification: user-supplied closed-form vector fields in
/// `y`-components, or the automatic normal-tube frame (flat-pullback only).
#[derive(Clone, Debug)]
pub enum FrameSpec {
    /// Three maps `y ↦ (components of bʲ in ∂_y basis)`.
    ClosedForm {
        maps: [SmoothMap; 3],
    },
    NormalTube,
}

#[derive(Clone, Debug)]
enum FrameKind {
    ClosedForm([SmoothMap; 3]),
    Tube(TubeFrame),
}

/// A registered surface + adapted frame, validated and ready for evaluation.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub surface: Surface,
    frame: FrameKind,
    pub domain: DomainBox,
    pub frame_name: String,
}

impl Geometry {
    pub fn new(
        surface: Surface,
        spec: FrameSpec,
        domain: DomainBox,
        frame_name: &str,
    ) -> Result<Geometry> {
        let frame = match spec {
            FrameSpec::ClosedForm { maps } => FrameKind::ClosedForm(maps),
            FrameSpec::NormalTube => {
                let AmbientSpace::FlatPullback { .. } = surface.ambient else {
                    return Err(Error::Config(
                        "normal-tube frames require a flat-pullback ambient space".into(),
                    ));
                };
                FrameKind::Tube(TubeFrame::build(&surface, &domain)?)
            }
        };
        let geo = Geometry {
            surface,
            frame,
            domain,
            frame_name: frame_name.to_string(),
        };
        geo.validate()?;
        Ok(geo)
    }

    /// Registration-time validation on a coarse grid of surface points:
    /// pullback metric positive definite, embedding of full rank, the frame
    /// orthonormal with b³ normal to the surface.
    fn validate(&self) -> Result<()> {
        for z in self.domain.grid(5, 5) {
            let sj = self.surface_jets(z)?;
            let det = (sj.gz[0][0] * sj.gz[1][1] - sj.gz[0][1] * sj.gz[1][0]).value();
            if det <= 1e-14 {
                return Err(Error::Inconsistent(format!(
                    "pullback metric degenerate at z = {z:?} (det = {det:.3e}); embedding rank < 2"
                )));
            }
            let gram = sj.amb.gram();
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    if (gram[i][j] - expect).abs() > FRAME_VALIDATION_TOL {
                        return Err(Error::FrameValidation(format!(
                            "frame `{}` not orthonormal at z = {z:?}; Gram matrix = {gram:?}",
                            self.frame_name
                        )));
                    }
                }
            }
            for a in 0..2 {
                let mut dot = 0.0;
                for l in 0..3 {
                    dot += sj.theta_restricted(2, l).value() * sj.fj[l].d1(a);
                }
                if dot.abs() > FRAME_VALIDATION_TOL {
                    return Err(Error::FrameValidation(format!(
                        "b3 of frame `{}` not normal to the surface at z = {z:?} (defect {dot:.3e})",
                        self.frame_name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Frame component jets `c^j` in the `y` chart at `y`.
    pub fn frame_jets(&self, y: [f64; 3]) -> Result<[[Jet3; 3]; 3]> {
        match &self.frame {
            FrameKind::ClosedForm(maps) => {
                let mut out = [[Jet3::zero(3); 3]; 3];
                for (j, map) in maps.iter().enumerate() {
                    let jets = map.eval_jet(&y, 3)?;
                    out[j].copy_from_slice(&jets[..3]);
                }
                Ok(out)
            }
            FrameKind::Tube(tube) => {
                let AmbientSpace::FlatPullback { psi } = &self.surface.ambient else {
                    unreachable!("tube frames are registered only with flat pullbacks")
                };
                tube.frame_jets(psi, &self.surface.f, y)
            }
        }
    }

    /// Full per-point bundle of ambient geometric jets.
    pub fn ambient_jets(&self, y: [f64; 3]) -> Result<AmbientJets> {
        let g = self.surface.ambient.metric_jets(&y)?;
        let ginv = jinv3(&g)?;
        let gamma = christoffel(&g, &ginv);
        let frame = self.frame_jets(y)?;

        // (∇̄_{b^k} b^j)^m = Σ_l c^k_l (∂_l c^j_m + Σ_r Γ^m_{lr} c^j_r)
        let mut nabla_frame = [[[Jet3::zero(3); 3]; 3]; 3];
        for k in 0..3 {
            for j in 0..3 {
                for m in 0..3 {
                    let mut acc = Jet3::zero(3);
                    for l in 0..3 {
                        let mut inner = frame[j][m].partial(l);
                        for r in 0..3 {
                            inner = inner + gamma[m][l][r] * frame[j][r];
                        }
                        acc = acc + frame[k][l] * inner;
                    }
                    nabla_frame[k][j][m] = acc;
                }
            }
        }

        // ω_{ij}(b^k) = g0(∇̄_{b^k} b^j, b^i)
        let mut omega = [[[Jet3::zero(3); 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut acc = Jet3::zero(3);
                    for m in 0..3 {
                        for l in 0..3 {
                            acc = acc + g[m][l] * nabla_frame[k][j][m] * frame[i][l];
                        }
                    }
                    omega[i][j][k] = acc;
                }
            }
        }

        // Antisymmetry is a consequence of orthonormality; a violation here
        // means the supplied frame degrades away from M.
        for i in 0..3 {
            for j in i..3 {
                for k in 0..3 {
                    let defect = (omega[i][j][k].value() + omega[j][i][k].value()).abs();
                    if defect > ROUTE_AGREEMENT_TOL {
                        return Err(Error::Inconsistent(format!(
                            "connection forms not antisymmetric at y = {y:?}: \
                             omega_{}{}(b^{}) + omega_{}{}(b^{}) = {defect:.3e}",
                            i + 1,
                            j + 1,
                            k + 1,
                            j + 1,
                            i + 1,
                            k + 1
                        )));
                    }
                }
            }
        }

        let t: [[Jet3; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| -omega[i][2][j]));
        let t_gauss: [[Jet3; 2]; 2] = {
            // Gauss route: t_ij = g0(∇̄_{b^i} b^j, b³)
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let mut acc = Jet3::zero(3);
                    for m in 0..3 {
                        for l in 0..3 {
                            acc = acc + g[m][l] * nabla_frame[i][j][m] * frame[2][l];
                        }
                    }
                    acc
                })
            })
        };
        let alpha = [omega[0][2][2], omega[1][2][2]];
        let gam = [omega[0][1][0], omega[0][1][1], omega[0][1][2]];
        let kappa = t[0][0] * t[1][1] - t[0][1] * t[1][0];
        let mean2h = t[0][0] + t[1][1];

        Ok(AmbientJets {
            y,
            g,
            ginv,
            gamma,
            frame,
            nabla_frame,
            omega,
            t,
            t_gauss,
            alpha,
            gam,
            kappa,
            mean2h,
        })
    }

    /// Geometric jets at a surface point, with the restriction machinery
    /// needed for intrinsic computations.
    pub fn surface_jets(&self, z: [f64; 2]) -> Result<SurfaceJets> {
        let fj_vec = self.surface.f.eval_jet(&z, 3)?;
        let fj: [Jet3; 3] = [fj_vec[0], fj_vec[1], fj_vec[2]];
        let y = [fj[0].value(), fj[1].value(), fj[2].value()];
        let amb = self.ambient_jets(y)?;

        // pullback metric g_ab = Σ g_kl(f(z)) ∂f_k/∂z_a ∂f_l/∂z_b
        let gr: [[Jet3; 3]; 3] =
            std::array::from_fn(|k| std::array::from_fn(|l| amb.g[k][l].compose(&fj)));
        let df: [[Jet3; 2]; 3] = std::array::from_fn(|k| std::array::from_fn(|a| fj[k].partial(a)));
        let gz: [[Jet3; 2]; 2] = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut acc = Jet3::zero(2);
                for k in 0..3 {
                    for l in 0..3 {
                        acc = acc + gr[k][l] * df[k][a] * df[l][b];
                    }
                }
                acc
            })
        });

        // theta^k lowered, restricted to z-jets
        let theta_r: [[Jet3; 3]; 3] = std::array::from_fn(|k| {
            std::array::from_fn(|l| {
                let mut acc = Jet3::zero(3);
                for m in 0..3 {
                    acc = acc + amb.g[l][m] * amb.frame[k][m];
                }
                acc.compose(&fj)
            })
        });

        // coordinates of b_z^k in the z chart: solve gz d^k = [θ^k(∂_a f)]
        let mut dcoef = [[Jet3::zero(2); 2]; 2];
        for k in 0..2 {
            let rhs: [Jet3; 2] = std::array::from_fn(|a| {
                let mut acc = Jet3::zero(2);
                for l in 0..3 {
                    acc = acc + theta_r[k][l] * df[l][a];
                }
                acc
            });
            dcoef[k] = crate::linalg::jsolve2(&gz, &rhs)?;
        }

        Ok(SurfaceJets {
            z,
            fj,
            amb,
            gz,
            dcoef,
            theta_r,
        })
    }
}

fn christoffel(g: &[[Jet3; 3]; 3], ginv: &[[Jet3; 3]; 3]) -> [[[Jet3; 3]; 3]; 3] {
    let dg: [[[Jet3; 3]; 3]; 3] = std::array::from_fn(|m| {
        std::array::from_fn(|k| std::array::from_fn(|l| g[m][k].partial(l)))
    });
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let mut acc = Jet3::zero(3);
                for m in 0..3 {
                    acc = acc + ginv[i][m] * (dg[m][k][j] + dg[m][j][k] - dg[j][k][m]);
                }
                acc.scale(0.5)
            })
        })
    })
}

/// Everything the frame machinery produces at one ambient point, as jets.
#[derive(Clone, Debug)]
pub struct AmbientJets {
    pub y: [f64; 3],
    pub g: [[Jet3; 3]; 3],
    pub ginv: [[Jet3; 3]; 3],
    /// `gamma[i][j][k] = Γ^i_{jk}`
    pub gamma: [[[Jet3; 3]; 3]; 3],
    /// `frame[j][m]`: m-th `y`-component of `b^{j+1}`
    pub frame: [[Jet3; 3]; 3],
    /// `nabla_frame[k][j][m] = (∇̄_{b^k} b^j)^m`
    pub nabla_frame: [[[Jet3; 3]; 3]; 3],
    /// `omega[i][j][k] = ω_{ij}(b^k)`
    pub omega: [[[Jet3; 3]; 3]; 3],
    /// Second fundamental form as neighborhood functions, `t_ij = -ω_{i3}(b^j)`
    pub t: [[Jet3; 2]; 2],
    /// Gauss route `t_ij = g0(∇̄_{b^i} b^j, b³)`, kept for cross-checks
    pub t_gauss: [[Jet3; 2]; 2],
    /// `α_j = ω_{j3}(b³)`
    pub alpha: [Jet3; 2],
    /// `γ_k = ω_12(b^k)`
    pub gam: [Jet3; 3],
    pub kappa: Jet3,
    pub mean2h: Jet3,
}

impl AmbientJets {
    /// Inner product of two coordinate-component jet vectors under g0.
    pub fn inner(&self, a: &[Jet3; 3], b: &[Jet3; 3]) -> Jet3 {
        let mut acc = Jet3::zero(3);
        for m in 0..3 {
            for l in 0..3 {
                acc = acc + self.g[m][l] * a[m] * b[l];
            }
        }
        acc
    }

    /// Gram matrix of the frame (values).
    pub fn gram(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| self.inner(&self.frame[i], &self.frame[j]).value())
        })
    }

    /// Directional derivative of a scalar jet along frame vector `k`.
    pub fn frame_deriv(&self, phi: &Jet3, k: usize) -> Jet3 {
        dir_derivative(phi, &self.frame[k])
    }

    /// `ω_{ij}(V)` for a coordinate-component vector `V`.
    pub fn omega_of(&self, i: usize, j: usize, v: &[Jet3; 3]) -> Jet3 {
        let mut acc = Jet3::zero(3);
        for k in 0..3 {
            acc = acc + self.omega[i][j][k] * self.inner(v, &self.frame[k]);
        }
        acc
    }

    /// Lie bracket `[b^a, b^b]` in coordinate components.
    pub fn frame_bracket(&self, a: usize, b: usize) -> [Jet3; 3] {
        std::array::from_fn(|m| self.nabla_frame[a][b][m] - self.nabla_frame[b][a][m])
    }

    /// `dω_{ij}(b^a, b^b)` via the intrinsic formula for one-forms.
    pub fn d_omega(&self, i: usize, j: usize, a: usize, b: usize) -> f64 {
        let xa = self.frame_deriv(&self.omega[i][j][b], a);
        let xb = self.frame_deriv(&self.omega[i][j][a], b);
        let br = self.frame_bracket(a, b);
        (xa - xb - self.omega_of(i, j, &br)).value()
    }

    /// Ambient curvature form `Ω_{ij}(b^a, b^b) = dω_ij + Σ_k ω_ik ∧ ω_kj`.
    pub fn curvature_form(&self, i: usize, j: usize, a: usize, b: usize) -> f64 {
        let mut wedge = 0.0;
        for k in 0..3 {
            wedge += self.omega[i][k][a].value() * self.omega[k][j][b].value()
                - self.omega[i][k][b].value() * self.omega[k][j][a].value();
        }
        self.d_omega(i, j, a, b) + wedge
    }

    /// Intrinsic curvature `Ω^z_12(b_z¹, b_z²) = dω^z_12(b_z¹, b_z²)`,
    /// computed from tangential derivatives of the restricted connection
    /// form. Valid on M.
    pub fn intrinsic_curvature(&self) -> f64 {
        self.d_omega(0, 1, 0, 1)
    }

    /// Ambient Ricci tensor in frame components, assembled from curvature
    /// forms: `Ric_ab = Σ_i Ω_{ib}(b^i, b^a)`.
    pub fn ricci_frame(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| (0..3).map(|i| self.curvature_form(i, b, i, a)).sum())
        })
    }
}

/// Geometric jets at a surface point `z`, tied to the ambient bundle at
/// `y = f(z)`.
#[derive(Clone, Debug)]
pub struct SurfaceJets {
    pub z: [f64; 2],
    /// `f` component jets in `z` (order 3)
    pub fj: [Jet3; 3],
    pub amb: AmbientJets,
    /// pullback metric jets
    pub gz: [[Jet3; 2]; 2],
    /// `dcoef[k][a]`: z-chart coordinates of `b_z^{k+1}`
    pub dcoef: [[Jet3; 2]; 2],
    /// restricted lowered frame `θ^k` components (z-jets)
    theta_r: [[Jet3; 3]; 3],
}

impl SurfaceJets {
    pub fn y(&self) -> [f64; 3] {
        self.amb.y
    }

    /// Restrict an ambient scalar jet to the surface (z-jets).
    pub fn restrict(&self, phi: &Jet3) -> Jet3 {
        phi.compose(&self.fj)
    }

    /// Tangential derivative `b_z^k(φ)` of a surface scalar (z-jet).
    pub fn tangential(&self, phi: &Jet3, k: usize) -> Jet3 {
        self.dcoef[k][0] * phi.partial(0) + self.dcoef[k][1] * phi.partial(1)
    }

    pub fn theta_restricted(&self, k: usize, l: usize) -> Jet3 {
        self.theta_r[k][l]
    }

    /// Restricted `γ_k` scalars as z-jets.
    pub fn gamma_z(&self, k: usize) -> Jet3 {
        self.restrict(&self.amb.gam[k])
    }

    /// Restricted second-fundamental-form entries as z-jets.
    pub fn t_z(&self, i: usize, j: usize) -> Jet3 {
        self.restrict(&self.amb.t[i][j])
    }
}

/// Result bundle of [`second_fundamental_at`].
#[derive(Clone, Copy, Debug)]
pub struct SecondFundamental {
    /// Weingarten route, `t_ij = -ω_{i3}(b^j)`
    pub t: [[f64; 2]; 2],
    /// Gauss route, `t_ij = g0(∇̄_{b^i} b^j, b³)`
    pub t_gauss: [[f64; 2]; 2],
    pub kappa: f64,
    pub mean2h: f64,
    pub s_adj: [[f64; 2]; 2],
    /// `P = κ g − 2H S`; `-P` is the third fundamental form
    pub p: [[f64; 2]; 2],
}

/// Second fundamental form, curvatures, and derived matrices at `z`, with the
/// two computation routes cross-checked.
pub fn second_fundamental_at(geo: &Geometry, z: [f64; 2]) -> Result<SecondFundamental> {
    let sj = geo.surface_jets(z)?;
    second_fundamental_from(&sj)
}

pub fn second_fundamental_from(sj: &SurfaceJets) -> Result<SecondFundamental> {
    let amb = &sj.amb;
    let t: [[f64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| amb.t[i][j].value()));
    let t_gauss: [[f64; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| amb.t_gauss[i][j].value()));
    for i in 0..2 {
        for j in 0..2 {
            if (t[i][j] - t_gauss[i][j]).abs() > ROUTE_AGREEMENT_TOL {
                return Err(Error::Inconsistent(format!(
                    "second fundamental form routes disagree at z = {:?}: \
                     Weingarten {:.12e} vs Gauss {:.12e} for t{}{}",
                    sj.z,
                    t[i][j],
                    t_gauss[i][j],
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    if (t[0][1] - t[1][0]).abs() > 1e-9 {
        return Err(Error::Inconsistent(format!(
            "t12 consistency (ω_13(b²) = ω_23(b¹)) violated at z = {:?}: {:.3e}",
            sj.z,
            (t[0][1] - t[1][0]).abs()
        )));
    }
    let kappa = t[0][0] * t[1][1] - t[0][1] * t[1][0];
    let mean2h = t[0][0] + t[1][1];
    let s_adj = [[t[1][1], -t[0][1]], [-t[0][1], t[0][0]]];
    let p: [[f64; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let gd = if i == j { 1.0 } else { 0.0 };
            kappa * gd - mean2h * t[i][j]
        })
    });
    Ok(SecondFundamental {
        t,
        t_gauss,
        kappa,
        mean2h,
        s_adj,
        p,
    })
}

/// Frame scalars of the notation block and of the decomposition theorems.
#[derive(Clone, Copy, Debug)]
pub struct FrameScalars {
    pub alpha: [f64; 2],
    pub gamma: [f64; 3],
    /// `X3 = ∇̄_{b³}b³` in frame components `(α1, α2)`
    pub x3: [f64; 2],
    /// `w = γ1 b_z¹ + γ2 b_z²`
    pub w: [f64; 2],
    /// `ℓ = (b³(γ1), b³(γ2))`
    pub ell: [f64; 2],
    pub b3_gamma3: f64,
    /// `g(X3, w)`
    pub gx3w: f64,
    pub kappa: f64,
    pub mean2h: f64,
    pub t: [[f64; 2]; 2],
}

pub fn frame_scalars_at(geo: &Geometry, z: [f64; 2]) -> Result<FrameScalars> {
    let sj = geo.surface_jets(z)?;
    Ok(frame_scalars_from(&sj))
}

pub fn frame_scalars_from(sj: &SurfaceJets) -> FrameScalars {
    let amb = &sj.amb;
    let alpha = [amb.alpha[0].value(), amb.alpha[1].value()];
    let gamma = [amb.gam[0].value(), amb.gam[1].value(), amb.gam[2].value()];
    let w = [gamma[0], gamma[1]];
    let ell = [
        amb.frame_deriv(&amb.gam[0], 2).value(),
        amb.frame_deriv(&amb.gam[1], 2).value(),
    ];
    let b3_gamma3 = amb.frame_deriv(&amb.gam[2], 2).value();
    FrameScalars {
        alpha,
        gamma,
        x3: alpha,
        w,
        ell,
        b3_gamma3,
        gx3w: alpha[0] * gamma[0] + alpha[1] * gamma[1],
        kappa: amb.kappa.value(),
        mean2h: amb.mean2h.value(),
        t: std::array::from_fn(|i| std::array::from_fn(|j| amb.t[i][j].value())),
    }
}
